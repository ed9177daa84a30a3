#include <cstdio>
#include <fstream>
#include <iostream>
#include <map>

#include <CLI/CLI.hpp>

#include "spectralk/error.hpp"
#include "spectralk_cli/commands.hpp"
#include "spectralk_cli/io.hpp"

namespace {

using namespace spectralk;
using namespace spectralk::cli;

const std::map<std::string, Linkage> kLinkages = {
    {"average", Linkage::Average}, {"complete", Linkage::Complete}, {"single", Linkage::Single}};
const std::map<std::string, Distance> kDistances = {{"cosine", Distance::Cosine},
                                                    {"euclidean", Distance::Euclidean}};
const std::map<std::string, Balance> kBalances = {{"equal", Balance::Equal},
                                                  {"dirichlet", Balance::Dirichlet}};

void add_estimator_flags(CLI::App* cmd, EstimatorConfig& cfg) {
  cmd->add_option("--tau", cfg.tau, "Subsample cap")->capture_default_str();
  cmd->add_option("--w", cfg.window, "Moving-average window")->capture_default_str();
  cmd->add_option("--k-default", cfg.k_default, "Fallback cluster count")->capture_default_str();
  cmd->add_option("--epsilon", cfg.epsilon, "Denominator guard")->capture_default_str();
  cmd->add_flag("--zscore", cfg.use_zscore, "Z-score and rectify similarities first");
}

void emit(const RunReport& report, const std::string& path) {
  const std::string text = report.to_json().dump(2) + "\n";
  if (path.empty() || path == "-") {
    std::cout << text << std::flush;
  } else {
    write_text(path, text);
  }
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Spectral cluster-count estimation, clustering and evaluation"};
  app.require_subcommand(1);
  app.set_version_flag("--version", "spectralk 0.1.0");

  std::uint64_t seed = 0;
  std::size_t threads = 1;
  std::string report_path;
  app.add_option("--seed", seed, "Master seed")->capture_default_str();
  app.add_option("--threads", threads, "Worker threads (0 = hardware concurrency)")->capture_default_str();
  app.add_option("--report", report_path, "Write the JSON report here instead of stdout");
  // Accept the globals after the subcommand name too.
  app.fallthrough();

  GenOptions gen;
  auto* gen_cmd = app.add_subcommand("gen", "Generate a labelled unit-sphere mixture");
  gen_cmd->add_option("--k", gen.spec.k)->capture_default_str();
  gen_cmd->add_option("--n", gen.spec.n)->capture_default_str();
  gen_cmd->add_option("--d", gen.spec.d)->capture_default_str();
  gen_cmd->add_option("--sigma", gen.spec.sigma)->capture_default_str();
  gen_cmd->add_option("--min-sep", gen.spec.min_sep, "Minimum center angle (radians)")->capture_default_str();
  gen_cmd->add_option("--balance", gen.spec.balance)
      ->transform(CLI::CheckedTransformer(kBalances, CLI::ignore_case))
      ->default_str(to_string(gen.spec.balance));
  gen_cmd->add_option("--alpha", gen.spec.alpha, "Dirichlet concentration")->capture_default_str();
  gen_cmd->add_option("--format", gen.format, "emb1 or csv")
      ->check(CLI::IsMember({"emb1", "csv"}))
      ->capture_default_str();
  gen_cmd->add_option("--out", gen.out, "Output directory")->required();

  EstimateOptions est;
  auto* est_cmd = app.add_subcommand("estimate-k", "Estimate the number of clusters");
  est_cmd->add_option("--in", est.in, "Embeddings (.emb1 or .csv)")->required();
  add_estimator_flags(est_cmd, est.estimator);

  ClusterOptions clu;
  auto* clu_cmd = app.add_subcommand("cluster", "Cluster with k-means or HAC");
  clu_cmd->add_option("--in", clu.in)->required();
  clu_cmd->add_option("--algo", clu.algo)->check(CLI::IsMember({"kmeans", "hac"}))->capture_default_str();
  clu_cmd->add_option("--k", clu.k, "Integer or 'auto'")->capture_default_str();
  clu_cmd->add_option("--linkage", clu.linkage)
      ->transform(CLI::CheckedTransformer(kLinkages, CLI::ignore_case))
      ->default_str(to_string(clu.linkage));
  clu_cmd->add_option("--distance", clu.distance, "HAC distance")
      ->transform(CLI::CheckedTransformer(kDistances, CLI::ignore_case))
      ->default_str(to_string(clu.distance));
  clu_cmd->add_option("--n-init", clu.n_init)->capture_default_str();
  clu_cmd->add_option("--max-iter", clu.max_iter)->capture_default_str();
  clu_cmd->add_option("--tol", clu.tol)->capture_default_str();
  clu_cmd->add_option("--normalize", clu.normalize, "L2-normalize before clustering")->capture_default_str();
  clu_cmd->add_option("--out", clu.out, "Assignment file")->capture_default_str();
  clu_cmd->add_option("--labels", clu.labels, "Gold labels to score against");
  add_estimator_flags(clu_cmd, clu.estimator);

  EvaluateOptions eva;
  auto* eva_cmd = app.add_subcommand("evaluate", "Score an assignment");
  eva_cmd->add_option("--in", eva.in)->required();
  eva_cmd->add_option("--assignment", eva.assignment)->required();
  eva_cmd->add_option("--labels", eva.labels);
  eva_cmd->add_option("--silhouette-distance", eva.silhouette_distance)
      ->transform(CLI::CheckedTransformer(kDistances, CLI::ignore_case))
      ->default_str(to_string(eva.silhouette_distance));
  eva_cmd->add_option("--normalize", eva.normalize, "Evaluate on L2-normalized vectors")->capture_default_str();

  SpectrumOptions spe;
  auto* spe_cmd = app.add_subcommand("spectrum", "Dump the Laplacian spectrum and jump statistics");
  spe_cmd->add_option("--in", spe.in)->required();
  spe_cmd->add_option("--out", spe.out, "CSV file")->capture_default_str();
  spe_cmd->add_flag("--force-full", spe.force_full, "Allow n > tau");
  add_estimator_flags(spe_cmd, spe.estimator);

  SweepOptions swp;
  auto* swp_cmd = app.add_subcommand("sweep", "Intrinsic vs extrinsic metric correlation sweep");
  swp_cmd->add_option("--in", swp.in)->required();
  swp_cmd->add_option("--labels", swp.labels)->required();
  swp_cmd->add_option("--out", swp.out, "Sweep CSV")->capture_default_str();
  swp_cmd->add_option("--k-min", swp.k_min)->capture_default_str();
  swp_cmd->add_option("--k-max", swp.k_max)->capture_default_str();
  swp_cmd->add_option("--noise", swp.noise, "Noise rates")->delimiter(',')->capture_default_str();
  swp_cmd->add_option("--algos", swp.algos)
      ->delimiter(',')
      ->check(CLI::IsMember({"kmeans", "hac"}))
      ->capture_default_str();
  swp_cmd->add_option("--linkage", swp.linkage)
      ->transform(CLI::CheckedTransformer(kLinkages, CLI::ignore_case))
      ->default_str(to_string(swp.linkage));
  swp_cmd->add_option("--distance", swp.distance)
      ->transform(CLI::CheckedTransformer(kDistances, CLI::ignore_case))
      ->default_str(to_string(swp.distance));
  swp_cmd->add_option("--silhouette-distance", swp.silhouette_distance)
      ->transform(CLI::CheckedTransformer(kDistances, CLI::ignore_case))
      ->default_str(to_string(swp.silhouette_distance));
  swp_cmd->add_option("--n-init", swp.n_init)->capture_default_str();
  swp_cmd->add_option("--normalize", swp.normalize)->capture_default_str();

  CLI11_PARSE(app, argc, argv);

  try {
    RunReport report;
    if (*gen_cmd) {
      gen.spec.seed = seed;
      report = run_gen(gen);
    } else if (*est_cmd) {
      est.estimator.seed = seed;
      est.threads = threads;
      report = run_estimate_k(est);
    } else if (*clu_cmd) {
      clu.estimator.seed = seed;
      clu.threads = threads;
      report = run_cluster(clu);
    } else if (*eva_cmd) {
      eva.threads = threads;
      report = run_evaluate(eva);
    } else if (*spe_cmd) {
      spe.estimator.seed = seed;
      spe.threads = threads;
      report = run_spectrum(spe);
    } else if (*swp_cmd) {
      swp.seed = seed;
      swp.threads = threads;
      report = run_sweep(swp);
    }
    emit(report, report_path);
  } catch (const spectralk::Error& e) {
    std::cerr << "spectralk: " << e.what() << "\n";
    return 1;
  } catch (const std::exception& e) {
    std::cerr << "spectralk: " << e.what() << "\n";
    return 1;
  }
  return 0;
}
