#include "spectralk/error.hpp"

namespace spectralk {

std::string_view errc_name(Errc code) noexcept {
  switch (code) {
    case Errc::InvalidArgument: return "InvalidArgument";
    case Errc::ZeroVector: return "ZeroVector";
    case Errc::LengthMismatch: return "LengthMismatch";
    case Errc::EmptyClass: return "EmptyClass";
    case Errc::NonFinite: return "NonFinite";
    case Errc::ZeroDegree: return "ZeroDegree";
    case Errc::NotSymmetric: return "NotSymmetric";
    case Errc::NoConvergence: return "NoConvergence";
    case Errc::SpectrumTooShort: return "SpectrumTooShort";
    case Errc::InsufficientStatistics: return "InsufficientStatistics";
    case Errc::KTooLarge: return "KTooLarge";
    case Errc::Degenerate: return "Degenerate";
    case Errc::TooFewPoints: return "TooFewPoints";
    case Errc::OutOfRange: return "OutOfRange";
    case Errc::SingleCluster: return "SingleCluster";
    case Errc::Saturated: return "Saturated";
    case Errc::ZeroVariance: return "ZeroVariance";
    case Errc::InfeasibleSeparation: return "InfeasibleSeparation";
    case Errc::TooLarge: return "TooLarge";
    case Errc::IoError: return "IoError";
    case Errc::FormatError: return "FormatError";
  }
  return "Unknown";
}

Error::Error(Errc code, const std::string& message)
    : std::runtime_error(std::string(errc_name(code)) + ": " + message), code_(code) {}

}  // namespace spectralk
