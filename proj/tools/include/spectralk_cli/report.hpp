#pragma once

#include <chrono>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include <nlohmann/json.hpp>

#include "spectralk/kestimator.hpp"
#include "spectralk/metrics.hpp"

namespace spectralk::cli {

using Json = nlohmann::ordered_json;

inline constexpr const char* kFormatVersion = "spectralk-report/1";

/// Finite doubles as numbers; +-infinity and NaN as the strings "inf", "-inf", "nan".
Json number(double v);
Json optional_number(const std::optional<double>& v);

Json to_json(const KEstimate& k);
Json to_json(const MetricReport& m);
Json to_json(const EstimatorConfig& cfg);

/// Wall-clock milliseconds per named phase, in the order they were recorded.
class Timings {
 public:
  template <class F>
  decltype(auto) measure(const std::string& phase, F&& f) {
    const auto start = std::chrono::steady_clock::now();
    struct Record {
      Timings* self;
      const std::string& phase;
      std::chrono::steady_clock::time_point start;
      ~Record() {
        const std::chrono::duration<double, std::milli> ms = std::chrono::steady_clock::now() - start;
        self->phases_.emplace_back(phase, ms.count());
      }
    } record{this, phase, start};
    return std::forward<F>(f)();
  }

  Json to_json() const;

 private:
  std::vector<std::pair<std::string, double>> phases_;
};

struct RunReport {
  std::string command;
  Json config = Json::object();
  Json results = Json::object();
  Timings timings;
  std::size_t threads = 1;

  /// Everything except `runtime` is a pure function of the inputs and config.
  Json to_json() const;
};

}  // namespace spectralk::cli
