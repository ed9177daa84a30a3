#include "spectralk_cli/report.hpp"

#include <cmath>

namespace spectralk::cli {

Json number(double v) {
  if (std::isnan(v)) return "nan";
  if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
  return v;
}

Json optional_number(const std::optional<double>& v) {
  return v ? number(*v) : Json(nullptr);
}

Json to_json(const KEstimate& k) {
  return Json{{"k_hat", k.k_hat},
              {"k_raw_mean", number(k.k_raw_mean)},
              {"replicate_estimates", k.replicate_estimates},
              {"fallback_fraction", number(k.fallback_fraction)}};
}

Json to_json(const MetricReport& m) {
  Json j = Json::object();
  j["k_pred"] = m.k_pred;
  // Extrinsic fields are omitted entirely without labels.
  if (m.k_true) {
    j["k_true"] = *m.k_true;
    j["ari"] = optional_number(m.ari);
    j["nmi"] = optional_number(m.nmi);
    j["homogeneity"] = optional_number(m.homogeneity);
    j["completeness"] = optional_number(m.completeness);
    j["fmi"] = optional_number(m.fmi);
    j["re_k"] = optional_number(m.re_k);
  }
  j["silhouette"] = optional_number(m.silhouette);
  j["dbi"] = optional_number(m.dbi);
  j["chi"] = optional_number(m.chi);
  j["cohesion_ratio"] = optional_number(m.cohesion_ratio);
  return j;
}

Json to_json(const EstimatorConfig& cfg) {
  return Json{{"tau", cfg.tau},         {"w", cfg.window},
              {"k_default", cfg.k_default}, {"epsilon", number(cfg.epsilon)},
              {"zscore", cfg.use_zscore}, {"seed", cfg.seed}};
}

Json Timings::to_json() const {
  Json j = Json::object();
  for (const auto& [phase, ms] : phases_) j[phase] = ms;
  return j;
}

Json RunReport::to_json() const {
  return Json{{"format_version", kFormatVersion},
              {"command", command},
              {"config", config},
              {"results", results},
              {"runtime", Json{{"threads", threads}, {"timings_ms", timings.to_json()}}}};
}

}  // namespace spectralk::cli
