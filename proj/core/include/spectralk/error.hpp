#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace spectralk {

/// Failure categories raised by the library. Every thrown `Error` carries one.
enum class Errc {
  InvalidArgument,
  ZeroVector,
  LengthMismatch,
  EmptyClass,
  NonFinite,
  ZeroDegree,
  NotSymmetric,
  NoConvergence,
  SpectrumTooShort,
  InsufficientStatistics,
  KTooLarge,
  Degenerate,
  TooFewPoints,
  OutOfRange,
  SingleCluster,
  Saturated,
  ZeroVariance,
  InfeasibleSeparation,
  TooLarge,
  IoError,
  FormatError,
};

std::string_view errc_name(Errc code) noexcept;

class Error : public std::runtime_error {
 public:
  Error(Errc code, const std::string& message);

  Errc code() const noexcept { return code_; }

 private:
  Errc code_;
};

}  // namespace spectralk
