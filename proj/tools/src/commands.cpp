#include "spectralk_cli/commands.hpp"

#include <charconv>
#include <cmath>
#include <filesystem>
#include <map>

#include "spectralk/core.hpp"
#include "spectralk/metrics.hpp"
#include "spectralk/parallel.hpp"
#include "spectralk/rng.hpp"
#include "spectralk/spectral.hpp"
#include "spectralk_cli/io.hpp"

namespace spectralk::cli {

namespace fs = std::filesystem;

std::string to_string(Linkage l) {
  switch (l) {
    case Linkage::Average: return "average";
    case Linkage::Complete: return "complete";
    case Linkage::Single: return "single";
  }
  return "?";
}

std::string to_string(Distance d) { return d == Distance::Cosine ? "cosine" : "euclidean"; }

std::string to_string(Balance b) { return b == Balance::Equal ? "equal" : "dirichlet"; }

namespace {

EmbeddingSet load_embeddings(const std::string& path) {
  return validate_dataset(read_embeddings(path), std::nullopt, path).embeddings;
}

LabelVector load_labels(const std::string& path, std::size_t n) {
  const auto lines = read_lines(path);
  if (lines.size() != n) {
    throw Error(Errc::LengthMismatch, path + " has " + std::to_string(lines.size()) +
                                          " labels for " + std::to_string(n) + " points");
  }
  return LabelVector::from_strings(lines);
}

Clustering load_assignment(const std::string& path, std::size_t n) {
  const auto ids = read_assignment(path);
  if (ids.size() != n) {
    throw Error(Errc::LengthMismatch, path + " has " + std::to_string(ids.size()) +
                                          " cluster ids for " + std::to_string(n) + " points");
  }
  return Clustering::from_raw(ids);
}

Json optional_path(const std::optional<std::string>& p) { return p ? Json(*p) : Json(nullptr); }

Json sizes_json(const Partition& p) {
  Json j = Json::array();
  for (auto s : p.sizes()) j.push_back(s);
  return j;
}

std::string vector_space(bool normalize) { return normalize ? "l2-normalized" : "raw"; }

}  // namespace

RunReport run_gen(const GenOptions& o) {
  if (o.format != "emb1" && o.format != "csv") {
    throw Error(Errc::InvalidArgument, "unknown embeddings format " + o.format);
  }
  RunReport r;
  r.command = "gen";
  const auto& s = o.spec;
  r.config = Json{{"k", s.k},
                  {"n", s.n},
                  {"d", s.d},
                  {"sigma", number(s.sigma)},
                  {"min_sep", number(s.min_sep)},
                  {"balance", to_string(s.balance)},
                  {"alpha", number(s.alpha)},
                  {"seed", s.seed},
                  {"out", o.out},
                  {"format", o.format}};

  Dataset ds = r.timings.measure("generate", [&] { return generate_spherical_mixture(s); });

  std::error_code ec;
  fs::create_directories(o.out, ec);
  if (ec) throw Error(Errc::IoError, "cannot create " + o.out + ": " + ec.message());
  const fs::path dir(o.out);
  const fs::path emb = dir / (o.format == "csv" ? "embeddings.csv" : "embeddings.emb1");
  const fs::path lab = dir / "labels.txt";
  r.timings.measure("write", [&] {
    if (o.format == "csv") {
      write_csv_matrix(emb, ds.embeddings.matrix());
    } else {
      write_emb1(emb, ds.embeddings.matrix());
    }
    std::vector<std::string> lines;
    lines.reserve(ds.labels->size());
    for (int id : ds.labels->ids()) lines.push_back(std::to_string(id));
    write_lines(lab, lines);
  });

  r.results = Json{{"name", ds.name},
                   {"embeddings", emb.generic_string()},
                   {"labels", lab.generic_string()},
                   {"n", ds.embeddings.size()},
                   {"d", ds.embeddings.dim()},
                   {"class_sizes", sizes_json(*ds.labels)}};
  return r;
}

RunReport run_estimate_k(const EstimateOptions& o) {
  o.estimator.validate();
  RunReport r;
  r.command = "estimate-k";
  r.threads = resolve_thread_count(o.threads);
  r.config = Json{{"in", o.in}, {"estimator", to_json(o.estimator)}};

  const EmbeddingSet e = r.timings.measure("load", [&] { return load_embeddings(o.in); });
  const KEstimate k = r.timings.measure("estimate", [&] { return estimate_k(e, o.estimator, o.threads); });

  r.results = to_json(k);
  r.results["n"] = e.size();
  r.results["d"] = e.dim();
  r.results["subsampled"] = e.size() > o.estimator.tau;
  return r;
}

RunReport run_cluster(const ClusterOptions& o) {
  if (o.algo != "kmeans" && o.algo != "hac") throw Error(Errc::InvalidArgument, "unknown algorithm " + o.algo);
  const bool automatic = o.k == "auto";
  std::size_t k_fixed = 0;
  if (!automatic) {
    const auto [ptr, ec] = std::from_chars(o.k.data(), o.k.data() + o.k.size(), k_fixed);
    if (ec != std::errc() || ptr != o.k.data() + o.k.size() || k_fixed == 0) {
      throw Error(Errc::InvalidArgument, "--k must be a positive integer or 'auto', got " + o.k);
    }
  } else {
    o.estimator.validate();
  }

  RunReport r;
  r.command = "cluster";
  r.threads = resolve_thread_count(o.threads);
  r.config = Json{{"in", o.in},
                  {"algo", o.algo},
                  {"k", o.k},
                  {"linkage", to_string(o.linkage)},
                  {"distance", to_string(o.distance)},
                  {"n_init", o.n_init},
                  {"max_iter", o.max_iter},
                  {"tol", number(o.tol)},
                  {"normalize", o.normalize},
                  {"out", o.out},
                  {"labels", optional_path(o.labels)},
                  {"estimator", to_json(o.estimator)}};

  const EmbeddingSet raw = r.timings.measure("load", [&] { return load_embeddings(o.in); });
  std::optional<LabelVector> labels;
  if (o.labels) labels = load_labels(*o.labels, raw.size());
  const EmbeddingSet e = o.normalize ? l2_normalize(raw) : raw;

  std::optional<KEstimate> estimate;
  if (automatic) {
    estimate = r.timings.measure("estimate", [&] { return estimate_k(raw, o.estimator, o.threads); });
  }
  const std::size_t k = automatic ? estimate->k_hat : k_fixed;

  Json details = Json::object();
  const Clustering c = r.timings.measure("cluster", [&] {
    if (o.algo == "hac") return hac(e, HacConfig{k, o.linkage, o.distance});
    KMeansConfig cfg;
    cfg.k = k;
    cfg.n_init = o.n_init;
    cfg.max_iter = o.max_iter;
    cfg.tol = o.tol;
    cfg.seed = o.estimator.seed;
    KMeansResult km = kmeans(e, cfg);
    details = Json{{"inertia", number(km.inertia)}, {"iterations", km.iterations}};
    return std::move(km.clustering);
  });
  r.timings.measure("write", [&] { write_assignment(o.out, c.ids()); });

  r.results = Json{{"k", c.group_count()}, {"n", c.size()}, {"sizes", sizes_json(c)}, {"assignment", o.out}};
  if (!details.empty()) r.results["kmeans"] = details;
  if (estimate) r.results["k_estimate"] = to_json(*estimate);
  if (labels) {
    const MetricReport m = r.timings.measure("evaluate", [&] { return evaluate(e, c, &*labels); });
    r.results["evaluation"] = to_json(m);
    r.results["evaluation"]["vector_space"] = vector_space(o.normalize);
  }
  return r;
}

RunReport run_evaluate(const EvaluateOptions& o) {
  RunReport r;
  r.command = "evaluate";
  r.threads = resolve_thread_count(o.threads);
  r.config = Json{{"in", o.in},
                  {"assignment", o.assignment},
                  {"labels", optional_path(o.labels)},
                  {"silhouette_distance", to_string(o.silhouette_distance)},
                  {"normalize", o.normalize}};

  const EmbeddingSet raw = r.timings.measure("load", [&] { return load_embeddings(o.in); });
  const Clustering c = load_assignment(o.assignment, raw.size());
  std::optional<LabelVector> labels;
  if (o.labels) labels = load_labels(*o.labels, raw.size());
  const EmbeddingSet e = o.normalize ? l2_normalize(raw) : raw;

  const MetricReport m = r.timings.measure("evaluate", [&] {
    return evaluate(e, c, labels ? &*labels : nullptr, EvaluationOptions{o.silhouette_distance});
  });
  r.results = to_json(m);
  r.results["vector_space"] = vector_space(o.normalize);
  return r;
}

RunReport run_spectrum(const SpectrumOptions& o) {
  o.estimator.validate();
  RunReport r;
  r.command = "spectrum";
  r.threads = resolve_thread_count(o.threads);
  r.config = Json{{"in", o.in}, {"out", o.out}, {"force_full", o.force_full}, {"estimator", to_json(o.estimator)}};

  const EmbeddingSet e = r.timings.measure("load", [&] { return load_embeddings(o.in); });
  if (e.size() > o.estimator.tau && !o.force_full) {
    throw Error(Errc::InvalidArgument, "n = " + std::to_string(e.size()) + " exceeds tau = " +
                                           std::to_string(o.estimator.tau) +
                                           "; pass --force-full to decompose the full data");
  }
  const Spectrum sp = r.timings.measure("eigenvalues", [&] { return compute_eigenvalues(e, o.estimator.use_zscore); });
  const SpectrumAnalysis a = analyze_spectrum(sp, o.estimator);

  const std::string threshold = format_double(a.threshold);
  const std::string detected = std::to_string(a.k_hat);
  std::string csv = "index,lambda,delta,threshold,detected_k\n";
  std::size_t near_zero = 0;
  for (std::size_t i = 1; i <= sp.size(); ++i) {
    if (std::abs(sp[i - 1]) < 1e-8) ++near_zero;
    csv += std::to_string(i) + ',' + format_double(sp[i - 1]) + ',';
    if (i >= a.deltas.first_index()) csv += format_double(a.deltas.at(i));
    csv += ',' + threshold + ',' + detected + '\n';
  }
  r.timings.measure("write", [&] { write_text(o.out, csv); });

  Json lambda = Json::array();
  for (double v : sp.values()) lambda.push_back(number(v));
  Json delta = Json::array();
  for (double v : a.deltas.values()) delta.push_back(number(v));
  r.results = Json{{"n", sp.size()},
                   {"detected_k", a.k_hat},
                   {"jump_index", a.jump_index},
                   {"fallback", a.fallback},
                   {"threshold", number(a.threshold)},
                   {"near_zero_eigenvalues", near_zero},
                   {"csv", o.out},
                   {"lambda", lambda},
                   {"delta_first_index", a.deltas.first_index()},
                   {"delta", delta}};
  return r;
}

std::vector<SweepRow> sweep_rows(const EmbeddingSet& raw, const LabelVector& labels, const SweepOptions& o) {
  if (o.k_min < 2 || o.k_max < o.k_min) throw Error(Errc::InvalidArgument, "sweep needs 2 <= k-min <= k-max");
  if (o.k_max >= raw.size()) throw Error(Errc::KTooLarge, "k-max must be below n");
  if (o.noise.empty() || o.algos.empty()) throw Error(Errc::InvalidArgument, "empty noise or algorithm grid");
  for (const auto& a : o.algos) {
    if (a != "kmeans" && a != "hac") throw Error(Errc::InvalidArgument, "unknown algorithm " + a);
  }
  const EmbeddingSet e = o.normalize ? l2_normalize(raw) : raw;
  const std::size_t nk = o.k_max - o.k_min + 1;

  // Base clusterings per (algo, k); one dendrogram serves every HAC cut.
  std::vector<std::optional<Clustering>> base(o.algos.size() * nk);
  const std::uint64_t kmeans_stream = derive_seed(o.seed, 0);
  const std::uint64_t noise_stream = derive_seed(o.seed, 1);
  for (std::size_t a = 0; a < o.algos.size(); ++a) {
    if (o.algos[a] == "hac") {
      const Dendrogram tree = hac_dendrogram(e, o.linkage, o.distance);
      for (std::size_t j = 0; j < nk; ++j) base[a * nk + j] = tree.cut(o.k_min + j);
    } else {
      parallel_for(nk, o.threads, [&](std::size_t j) {
        KMeansConfig cfg;
        cfg.k = o.k_min + j;
        cfg.n_init = o.n_init;
        cfg.seed = derive_seed(kmeans_stream, cfg.k);
        base[a * nk + j] = kmeans(e, cfg).clustering;
      });
    }
  }

  const std::size_t cells = base.size() * o.noise.size();
  std::vector<SweepRow> rows(cells);
  parallel_for(cells, o.threads, [&](std::size_t r) {
    const std::size_t b = r / o.noise.size();
    SweepRow& row = rows[r];
    row.algo = o.algos[b / nk];
    row.k = o.k_min + b % nk;
    row.noise = o.noise[r % o.noise.size()];
    const Clustering c = degrade_clustering(*base[b], row.noise, derive_seed(noise_stream, r));
    row.metrics = evaluate(e, c, &labels, EvaluationOptions{o.silhouette_distance});
  });
  return rows;
}

CorrelationMatrix sweep_correlations(const std::vector<SweepRow>& rows) {
  using Getter = std::optional<double> (*)(const MetricReport&);
  const std::vector<std::pair<std::string, Getter>> intrinsic = {
      {"silhouette", [](const MetricReport& m) { return m.silhouette; }},
      {"neg_dbi", [](const MetricReport& m) { return m.dbi ? std::optional(-*m.dbi) : std::nullopt; }},
      {"chi", [](const MetricReport& m) { return m.chi; }},
      {"cohesion_ratio", [](const MetricReport& m) { return m.cohesion_ratio; }}};
  const std::vector<std::pair<std::string, Getter>> extrinsic = {
      {"ari", [](const MetricReport& m) { return m.ari; }},
      {"nmi", [](const MetricReport& m) { return m.nmi; }},
      {"homogeneity", [](const MetricReport& m) { return m.homogeneity; }},
      {"completeness", [](const MetricReport& m) { return m.completeness; }},
      {"fmi", [](const MetricReport& m) { return m.fmi; }}};

  auto column = [&](Getter g) -> std::optional<std::vector<double>> {
    std::vector<double> out;
    for (const auto& row : rows) {
      const auto v = g(row.metrics);
      if (!v) return std::nullopt;
      out.push_back(*v);
    }
    return out;
  };

  CorrelationMatrix cm;
  for (const auto& [name, g] : intrinsic) cm.intrinsic.push_back(name);
  for (const auto& [name, g] : extrinsic) cm.extrinsic.push_back(name);
  for (const auto& [iname, ig] : intrinsic) {
    auto& line = cm.rho.emplace_back();
    const auto x = column(ig);
    for (const auto& [ename, eg] : extrinsic) {
      const auto y = column(eg);
      std::optional<double> rho;
      if (x && y) {
        try {
          rho = spearman(*x, *y);
        } catch (const Error&) {
          // constant column or too few rows: correlation undefined
        }
      }
      line.push_back(rho);
    }
  }
  return cm;
}

RunReport run_sweep(const SweepOptions& o) {
  RunReport r;
  r.command = "sweep";
  r.threads = resolve_thread_count(o.threads);
  Json noise = Json::array();
  for (double v : o.noise) noise.push_back(number(v));
  r.config = Json{{"in", o.in},
                  {"labels", o.labels},
                  {"out", o.out},
                  {"k_min", o.k_min},
                  {"k_max", o.k_max},
                  {"noise", noise},
                  {"algos", o.algos},
                  {"linkage", to_string(o.linkage)},
                  {"distance", to_string(o.distance)},
                  {"silhouette_distance", to_string(o.silhouette_distance)},
                  {"n_init", o.n_init},
                  {"normalize", o.normalize},
                  {"seed", o.seed}};

  const EmbeddingSet raw = r.timings.measure("load", [&] { return load_embeddings(o.in); });
  const LabelVector labels = load_labels(o.labels, raw.size());
  const auto rows = r.timings.measure("sweep", [&] { return sweep_rows(raw, labels, o); });
  const CorrelationMatrix cm = sweep_correlations(rows);

  auto cell = [](const std::optional<double>& v) { return v ? format_double(*v) : std::string(); };
  std::string csv = "algo,k,noise,k_pred,ari,nmi,homogeneity,completeness,fmi,re_k,silhouette,neg_dbi,chi,cohesion_ratio\n";
  Json table = Json::array();
  for (const auto& row : rows) {
    const auto& m = row.metrics;
    const std::optional<double> neg_dbi = m.dbi ? std::optional(-*m.dbi) : std::nullopt;
    csv += row.algo + ',' + std::to_string(row.k) + ',' + format_double(row.noise) + ',' +
           std::to_string(m.k_pred) + ',' + cell(m.ari) + ',' + cell(m.nmi) + ',' + cell(m.homogeneity) + ',' +
           cell(m.completeness) + ',' + cell(m.fmi) + ',' + cell(m.re_k) + ',' + cell(m.silhouette) + ',' +
           cell(neg_dbi) + ',' + cell(m.chi) + ',' + cell(m.cohesion_ratio) + '\n';
    Json metrics = to_json(m);
    metrics["neg_dbi"] = optional_number(neg_dbi);
    table.push_back(Json{{"algo", row.algo}, {"k", row.k}, {"noise", number(row.noise)}, {"metrics", metrics}});
  }
  r.timings.measure("write", [&] { write_text(o.out, csv); });

  Json spearman_json = Json::object();
  for (std::size_t i = 0; i < cm.intrinsic.size(); ++i) {
    Json line = Json::object();
    for (std::size_t j = 0; j < cm.extrinsic.size(); ++j) line[cm.extrinsic[j]] = optional_number(cm.rho[i][j]);
    spearman_json[cm.intrinsic[i]] = line;
  }
  r.results = Json{{"rows", table.size()}, {"csv", o.out}, {"spearman", spearman_json}, {"table", table}};
  return r;
}

}  // namespace spectralk::cli
