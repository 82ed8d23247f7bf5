#include "npn/experiment.hpp"

#include <json.hpp>

#include <Eigen/Cholesky>

#include <atomic>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <iostream>
#include <limits>
#include <stdexcept>
#include <thread>

#include "npn/io.hpp"
#include "npn/metrics.hpp"
#include "npn/transform.hpp"

namespace npn {

namespace fs = std::filesystem;
using nlohmann::json;

std::string method_name(Method method) {
  switch (method) {
    case Method::nonparanormal: return "nonparanormal";
    case Method::gaussian: return "gaussian";
    case Method::both: return "both";
  }
  throw std::logic_error("method_name: unknown method");
}

Method method_from_name(const std::string& name) {
  if (name == "nonparanormal" || name == "npn") return Method::nonparanormal;
  if (name == "gaussian" || name == "glasso") return Method::gaussian;
  if (name == "both") return Method::both;
  throw std::invalid_argument("unknown method '" + name +
                              "' (expected nonparanormal, gaussian, or both)");
}

namespace {

std::string transform_kind_name(TransformKind kind) {
  switch (kind) {
    case TransformKind::identity: return "identity";
    case TransformKind::gaussian_cdf: return "gaussian_cdf";
    case TransformKind::power: return "power";
  }
  throw std::logic_error("unknown transform kind");
}

TransformKind transform_kind_from_name(const std::string& name) {
  if (name == "identity" || name == "none") return TransformKind::identity;
  if (name == "gaussian_cdf" || name == "cdf") return TransformKind::gaussian_cdf;
  if (name == "power") return TransformKind::power;
  throw std::invalid_argument("unknown transform kind '" + name +
                              "' (expected identity, gaussian_cdf, or power)");
}

std::string spacing_name(GridSpacing spacing) {
  return spacing == GridSpacing::linear ? "linear" : "log";
}

GridSpacing spacing_from_name(const std::string& name) {
  if (name == "linear") return GridSpacing::linear;
  if (name == "log") return GridSpacing::log;
  throw std::invalid_argument("unknown spacing '" + name + "' (expected linear or log)");
}

std::vector<Method> methods_to_run(Method method) {
  if (method == Method::both) return {Method::nonparanormal, Method::gaussian};
  return {method};
}

std::string fnv1a_hex(const std::string& text) {
  std::uint64_t h = 1469598103934665603ull;
  for (unsigned char c : text) {
    h ^= c;
    h *= 1099511628211ull;
  }
  char buf[17];
  std::snprintf(buf, sizeof(buf), "%016llx", static_cast<unsigned long long>(h));
  return buf;
}

void write_manifest(const fs::path& dir, json manifest) {
  auto out_path = dir / "manifest.json";
  fs::create_directories(dir);
  std::string text = manifest.dump(2);
  text.push_back('\n');
  std::ofstream out(out_path, std::ios::binary);
  if (!out) throw std::runtime_error(out_path.string() + ": cannot open for writing");
  out << text;
}

struct ReplicateData {
  GraphSpec truth;
  Eigen::MatrixXd omega0;
  Eigen::MatrixXd sigma0;
  DataMatrix data;
};

ReplicateData make_replicate(const ExperimentConfig& config, int n, std::uint64_t stream) {
  Philox4x32 rng(config.seed, stream);
  GeneratorConfig generator;
  generator.p = config.p;
  generator.s = config.s;
  generator.max_degree = config.max_degree;
  generator.mu0 = Eigen::VectorXd::Constant(config.p, config.mu0);
  generator.seed = config.seed;

  ReplicateData rep;
  rep.truth = neighborhood_graph(generator, rng);
  rep.omega0 = precision_from_graph(rep.truth);
  Eigen::LLT<Eigen::MatrixXd> llt(rep.omega0);
  rep.sigma0 = llt.solve(Eigen::MatrixXd::Identity(config.p, config.p));
  rep.sigma0 = (0.5 * (rep.sigma0 + rep.sigma0.transpose())).eval();
  rep.data = npn_sample(n, generator.mu0, rep.sigma0, config.transform, rng);
  for (int j = 0; j < config.p; ++j) rep.data.names.push_back("x" + std::to_string(j));
  return rep;
}

CovarianceEstimate covariance_for_method(Method method, const DataMatrix& data) {
  return method == Method::nonparanormal ? transformed_covariance(data)
                                         : sample_covariance(data);
}

}  // namespace

std::vector<double> build_lambda_grid(const LambdaGridSpec& spec, const Eigen::MatrixXd* S) {
  if (spec.count < 1) throw std::invalid_argument("lambda grid: count must be >= 1");

  double lo, hi;
  GridSpacing spacing = spec.spacing;
  if (spec.min && spec.max) {
    lo = *spec.min;
    hi = *spec.max;
    if (!(lo >= 0.0)) throw std::invalid_argument("lambda grid: min must be >= 0");
    if (!(hi >= lo)) throw std::invalid_argument("lambda grid: max must be >= min");
  } else {
    if (S == nullptr)
      throw std::invalid_argument("lambda grid: data-driven bounds need a covariance");
    double max_off = 0.0;
    for (Eigen::Index j = 0; j < S->rows(); ++j)
      for (Eigen::Index k = 0; k < j; ++k) max_off = std::max(max_off, std::abs((*S)(j, k)));
    if (max_off == 0.0) return {0.0};  // diagonal S: only the unpenalized level
    hi = spec.max.value_or(max_off);
    lo = spec.min.value_or(0.01 * hi);
    spacing = GridSpacing::log;
  }

  if (spec.count == 1) return {hi};
  if (hi == lo)
    throw std::invalid_argument("lambda grid: min == max with count > 1");

  std::vector<double> grid(spec.count);
  if (spacing == GridSpacing::log) {
    if (!(lo > 0.0)) throw std::invalid_argument("lambda grid: log spacing needs min > 0");
    const double step = (std::log(hi) - std::log(lo)) / (spec.count - 1);
    for (int i = 0; i < spec.count; ++i) grid[i] = std::exp(std::log(hi) - i * step);
  } else {
    const double step = (hi - lo) / (spec.count - 1);
    for (int i = 0; i < spec.count; ++i) grid[i] = hi - i * step;
  }
  grid.front() = hi;
  grid.back() = lo;
  return grid;
}

void ExperimentConfig::validate() const {
  if (p < 2) throw std::invalid_argument("config: p must be >= 2");
  if (n_list.empty()) throw std::invalid_argument("config: n_list must be nonempty");
  for (int n : n_list)
    if (n < 2) throw std::invalid_argument("config: every n must be >= 2");
  if (repetitions < 1) throw std::invalid_argument("config: repetitions must be >= 1");
  if (lambda_grid.count < 1) throw std::invalid_argument("config: grid count must be >= 1");
  if (!(s > 0.0)) throw std::invalid_argument("config: s must be positive");
  if (max_degree < 1) throw std::invalid_argument("config: max_degree must be >= 1");
  if (zero_tol < 0.0) throw std::invalid_argument("config: zero_tol must be >= 0");
  transform.validate();
}

ExperimentConfig config_from_json_text(const std::string& text) {
  const json j = json::parse(text);
  ExperimentConfig config;
  config.p = j.value("p", config.p);
  if (j.contains("n_list")) config.n_list = j.at("n_list").get<std::vector<int>>();
  if (j.contains("transform")) {
    const auto& t = j.at("transform");
    config.transform.kind = transform_kind_from_name(t.value("kind", "identity"));
    config.transform.mu_g0 = t.value("mu_g0", config.transform.mu_g0);
    config.transform.sigma_g0 = t.value("sigma_g0", config.transform.sigma_g0);
    config.transform.alpha = t.value("alpha", config.transform.alpha);
  }
  config.repetitions = j.value("repetitions", config.repetitions);
  if (j.contains("lambda_grid")) {
    const auto& g = j.at("lambda_grid");
    if (g.contains("min") && !g.at("min").is_null())
      config.lambda_grid.min = g.at("min").get<double>();
    if (g.contains("max") && !g.at("max").is_null())
      config.lambda_grid.max = g.at("max").get<double>();
    config.lambda_grid.count = g.value("count", config.lambda_grid.count);
    config.lambda_grid.spacing =
        spacing_from_name(g.value("spacing", spacing_name(config.lambda_grid.spacing)));
  }
  config.seed = j.value("seed", config.seed);
  if (j.contains("method")) config.method = method_from_name(j.at("method").get<std::string>());
  config.output_dir = j.value("output_dir", config.output_dir);
  config.s = j.value("s", config.s);
  config.max_degree = j.value("max_degree", config.max_degree);
  config.mu0 = j.value("mu0", config.mu0);
  config.zero_tol = j.value("zero_tol", config.zero_tol);
  config.threads = j.value("threads", config.threads);
  config.validate();
  return config;
}

std::string config_to_json_text(const ExperimentConfig& config) {
  json j;
  j["p"] = config.p;
  j["n_list"] = config.n_list;
  j["transform"] = {{"kind", transform_kind_name(config.transform.kind)},
                    {"mu_g0", config.transform.mu_g0},
                    {"sigma_g0", config.transform.sigma_g0},
                    {"alpha", config.transform.alpha}};
  j["repetitions"] = config.repetitions;
  json grid;
  if (config.lambda_grid.min)
    grid["min"] = *config.lambda_grid.min;
  else
    grid["min"] = nullptr;
  if (config.lambda_grid.max)
    grid["max"] = *config.lambda_grid.max;
  else
    grid["max"] = nullptr;
  grid["count"] = config.lambda_grid.count;
  grid["spacing"] = spacing_name(config.lambda_grid.spacing);
  j["lambda_grid"] = grid;
  j["seed"] = config.seed;
  j["method"] = method_name(config.method);
  j["output_dir"] = config.output_dir;
  j["s"] = config.s;
  j["max_degree"] = config.max_degree;
  j["mu0"] = config.mu0;
  j["zero_tol"] = config.zero_tol;
  j["threads"] = config.threads;
  return j.dump(2);
}

std::string config_hash(const ExperimentConfig& config) {
  // Identifies the experiment itself: output location and worker count do
  // not affect any result byte, so they stay out of the hash.
  json j = json::parse(config_to_json_text(config));
  j.erase("output_dir");
  j.erase("threads");
  return fnv1a_hex(j.dump(2));
}

void cmd_generate(const ExperimentConfig& config) {
  config.validate();
  const fs::path dir = config.output_dir;
  const ReplicateData rep = make_replicate(config, config.n_list.front(), 0);

  io::write_edge_list_tsv(dir / "graph.tsv", rep.truth);
  io::write_matrix_csv(dir / "omega0.csv", rep.omega0);
  io::write_data_csv(dir / "data.csv", rep.data);

  json manifest;
  manifest["command"] = "generate";
  manifest["config_hash"] = config_hash(config);
  manifest["seed"] = config.seed;
  manifest["streams"] = {0};
  manifest["n"] = config.n_list.front();
  manifest["outputs"] = {"graph.tsv", "omega0.csv", "data.csv"};
  write_manifest(dir, std::move(manifest));
}

void cmd_fit(const FitOptions& options) {
  const DataMatrix data = io::read_data_csv(options.data_file);
  data.validate();
  const fs::path dir = options.output_dir;

  std::vector<std::string> outputs;
  for (Method method : methods_to_run(options.method)) {
    CovarianceEstimate S = options.use_correlation && method == Method::nonparanormal
                               ? transformed_correlation(data)
                               : covariance_for_method(method, data);
    std::vector<double> grid;
    if (options.lambda)
      grid = {*options.lambda};
    else
      grid = build_lambda_grid(options.grid, &S.matrix);

    const RegularizationPath path =
        regularization_path(S, grid, options.solver, options.zero_tol);

    const fs::path method_dir = dir / method_name(method);
    std::vector<std::vector<std::string>> rows;
    for (std::size_t i = 0; i < path.estimates.size(); ++i) {
      const auto& est = path.estimates[i];
      char tag[8];
      std::snprintf(tag, sizeof(tag), "%03zu", i);
      const std::string omega_name = "omega_" + std::string(tag) + ".csv";
      const std::string edges_name = "edges_" + std::string(tag) + ".tsv";
      io::write_matrix_csv(method_dir / omega_name, est.omega, data.names);
      io::write_edge_list_tsv(method_dir / edges_name, edge_set(est, options.zero_tol));
      outputs.push_back(method_name(method) + "/" + omega_name);
      outputs.push_back(method_name(method) + "/" + edges_name);

      std::string objective = "nan";
      try {
        objective = io::format_double(glasso_objective(est.omega, S.matrix, est.lambda));
      } catch (const std::exception&) {
      }
      rows.push_back({io::format_double(est.lambda),
                      std::to_string(path.edge_counts[i]),
                      std::to_string(est.iterations), est.converged ? "1" : "0",
                      io::format_double(est.max_kkt_violation), objective});
    }
    io::write_tsv(method_dir / "path_summary.tsv",
                  {"lambda", "edges", "iterations", "converged", "max_kkt_violation",
                   "objective"},
                  rows);
    outputs.push_back(method_name(method) + "/path_summary.tsv");
  }

  json manifest;
  manifest["command"] = "fit";
  manifest["data_file"] = options.data_file.string();
  manifest["method"] = method_name(options.method);
  manifest["use_correlation"] = options.use_correlation;
  manifest["zero_tol"] = options.zero_tol;
  manifest["outputs"] = outputs;
  write_manifest(dir, std::move(manifest));
}

namespace {

RunRecord run_replicate(const ExperimentConfig& config, int n, int replicate,
                        std::uint64_t stream) {
  RunRecord record;
  record.n = n;
  record.replicate = replicate;
  record.stream = stream;
  const auto start = std::chrono::steady_clock::now();

  try {
    const ReplicateData rep = make_replicate(config, n, stream);
    for (Method method : methods_to_run(config.method)) {
      MethodScore& score =
          method == Method::nonparanormal ? record.nonparanormal : record.gaussian;
      try {
        const CovarianceEstimate S = covariance_for_method(method, rep.data);
        const auto grid = build_lambda_grid(config.lambda_grid, &S.matrix);
        const RegularizationPath path = regularization_path(S, grid, {}, config.zero_tol);
        const OracleResult oracle = oracle_scan(path, rep.truth, config.zero_tol);
        score.ok = true;
        score.lambda_star = oracle.lambda_star;
        score.fp = 0;
        score.fn = 0;
        for (const auto& counts : oracle.per_level) {
          if (counts.lambda == oracle.lambda_star) {
            score.fp = counts.fp;
            score.fn = counts.fn;
            break;
          }
        }
      } catch (const std::exception& e) {
        score.ok = false;
        score.error = e.what();
      }
    }
  } catch (const std::exception& e) {
    for (Method method : methods_to_run(config.method)) {
      MethodScore& score =
          method == Method::nonparanormal ? record.nonparanormal : record.gaussian;
      score.ok = false;
      score.error = e.what();
    }
  }

  record.wall_ms = std::chrono::duration<double, std::milli>(
                       std::chrono::steady_clock::now() - start)
                       .count();
  return record;
}

struct SummaryStats {
  double mean = std::numeric_limits<double>::quiet_NaN();
  double sd = std::numeric_limits<double>::quiet_NaN();
};

SummaryStats mean_sd(const std::vector<double>& xs) {
  SummaryStats stats;
  if (xs.empty()) return stats;
  double sum = 0.0;
  for (double x : xs) sum += x;
  stats.mean = sum / xs.size();
  if (xs.size() == 1) {
    stats.sd = 0.0;
    return stats;
  }
  double ss = 0.0;
  for (double x : xs) ss += (x - stats.mean) * (x - stats.mean);
  stats.sd = std::sqrt(ss / (xs.size() - 1));
  return stats;
}

}  // namespace

BenchmarkResult cmd_benchmark(const ExperimentConfig& config) {
  config.validate();
  const fs::path dir = config.output_dir;

  std::vector<std::pair<int, int>> tasks;  // (n_index, replicate)
  for (std::size_t ni = 0; ni < config.n_list.size(); ++ni)
    for (int rep = 0; rep < config.repetitions; ++rep)
      tasks.emplace_back(static_cast<int>(ni), rep);

  auto stream_of = [](int n_index, int rep) {
    return (static_cast<std::uint64_t>(n_index) << 32) |
           static_cast<std::uint32_t>(rep);
  };

  BenchmarkResult result;
  result.records.resize(tasks.size());

  unsigned thread_count = config.threads > 0
                              ? static_cast<unsigned>(config.threads)
                              : std::max(1u, std::thread::hardware_concurrency());
  thread_count = std::min<unsigned>(thread_count, tasks.size());

  std::atomic<std::size_t> next{0};
  auto worker = [&] {
    for (;;) {
      const std::size_t t = next.fetch_add(1);
      if (t >= tasks.size()) break;
      const auto [ni, rep] = tasks[t];
      result.records[t] =
          run_replicate(config, config.n_list[ni], rep, stream_of(ni, rep));
    }
  };
  std::vector<std::thread> pool;
  for (unsigned i = 1; i < thread_count; ++i) pool.emplace_back(worker);
  worker();
  for (auto& t : pool) t.join();

  // Per-replicate table; wall-clock stays out of the files so runs with the
  // same seed hash identically.
  std::vector<std::vector<std::string>> rep_rows;
  for (const auto& record : result.records) {
    for (Method method : methods_to_run(config.method)) {
      const MethodScore& score =
          method == Method::nonparanormal ? record.nonparanormal : record.gaussian;
      if (!score.ok) {
        std::cerr << "[benchmark] skipped n=" << record.n << " replicate="
                  << record.replicate << " method=" << method_name(method) << ": "
                  << score.error << "\n";
        ++result.skipped;
        continue;
      }
      rep_rows.push_back({std::to_string(record.n), std::to_string(record.replicate),
                          std::to_string(record.stream), method_name(method),
                          io::format_double(score.lambda_star), std::to_string(score.fp),
                          std::to_string(score.fn), std::to_string(score.fp + score.fn)});
    }
  }
  io::write_tsv(dir / "replicates.tsv",
                {"n", "replicate", "stream", "method", "lambda_star", "fpe", "fne",
                 "score"},
                rep_rows);

  // Summary: rows = n, columns = method x {FPE mean, sd, FNE mean, sd}.
  std::vector<std::string> header{"n"};
  for (Method method : methods_to_run(config.method)) {
    const std::string m = method_name(method);
    header.push_back(m + "_fpe_mean");
    header.push_back(m + "_fpe_sd");
    header.push_back(m + "_fne_mean");
    header.push_back(m + "_fne_sd");
  }
  std::vector<std::vector<std::string>> summary_rows;
  for (std::size_t ni = 0; ni < config.n_list.size(); ++ni) {
    std::vector<std::string> row{std::to_string(config.n_list[ni])};
    for (Method method : methods_to_run(config.method)) {
      std::vector<double> fpes, fnes;
      for (const auto& record : result.records) {
        if (record.n != config.n_list[ni]) continue;
        const MethodScore& score =
            method == Method::nonparanormal ? record.nonparanormal : record.gaussian;
        if (!score.ok) continue;
        fpes.push_back(score.fp);
        fnes.push_back(score.fn);
      }
      const SummaryStats fpe = mean_sd(fpes);
      const SummaryStats fne = mean_sd(fnes);
      row.push_back(io::format_double(fpe.mean));
      row.push_back(io::format_double(fpe.sd));
      row.push_back(io::format_double(fne.mean));
      row.push_back(io::format_double(fne.sd));
    }
    summary_rows.push_back(std::move(row));
  }
  io::write_tsv(dir / "summary.tsv", header, summary_rows);

  json manifest;
  manifest["command"] = "benchmark";
  manifest["config_hash"] = config_hash(config);
  manifest["seed"] = config.seed;
  json streams = json::array();
  for (const auto& record : result.records)
    streams.push_back({{"n", record.n},
                       {"replicate", record.replicate},
                       {"stream", record.stream}});
  manifest["streams"] = std::move(streams);
  manifest["skipped"] = result.skipped;
  manifest["outputs"] = {"replicates.tsv", "summary.tsv"};
  write_manifest(dir, std::move(manifest));
  return result;
}

void cmd_roc(const RocOptions& options) {
  const ExperimentConfig& config = options.config;
  const fs::path dir = options.output_dir;

  DataMatrix data;
  GraphSpec truth;
  if (options.data_file) {
    if (!options.truth_file)
      throw std::invalid_argument("roc: --truth is required when --data is given");
    data = io::read_data_csv(*options.data_file);
    data.validate();
    truth = io::read_edge_list_tsv(*options.truth_file, data.p());
  } else {
    config.validate();
    ReplicateData rep = make_replicate(config, config.n_list.front(), 0);
    data = std::move(rep.data);
    truth = std::move(rep.truth);
  }

  std::vector<std::string> outputs;
  for (Method method : methods_to_run(config.method)) {
    const CovarianceEstimate S = covariance_for_method(method, data);
    const auto grid = build_lambda_grid(config.lambda_grid, &S.matrix);
    const RegularizationPath path = regularization_path(S, grid, {}, config.zero_tol);
    const auto points = roc_points(path, truth, config.zero_tol);

    std::vector<std::vector<std::string>> rows;
    for (const auto& [x, y] : points)
      rows.push_back({io::format_double(x), io::format_double(y)});
    const std::string name = "roc_" + method_name(method) + ".tsv";
    io::write_tsv(dir / name, {}, rows);
    outputs.push_back(name);
  }

  json manifest;
  manifest["command"] = "roc";
  manifest["config_hash"] = config_hash(config);
  manifest["seed"] = config.seed;
  manifest["streams"] = {0};
  manifest["outputs"] = outputs;
  write_manifest(dir, std::move(manifest));
}

void cmd_transform_dump(const TransformDumpOptions& options) {
  if (options.grid_size < 2)
    throw std::invalid_argument("transform-dump: grid size must be >= 2");
  const DataMatrix data = io::read_data_csv(options.data_file);
  data.validate();
  const fs::path dir = options.output_dir;

  std::vector<int> indices;
  if (options.columns.empty()) {
    for (int j = 0; j < data.p(); ++j) indices.push_back(j);
  } else {
    for (const auto& label : options.columns) {
      int found = -1;
      for (int j = 0; j < data.p(); ++j)
        if (data.col_label(j) == label) {
          found = j;
          break;
        }
      if (found < 0) {
        try {
          found = std::stoi(label);
        } catch (const std::exception&) {
          found = -1;
        }
        if (found < 0 || found >= data.p())
          throw std::invalid_argument("transform-dump: unknown column '" + label + "'");
      }
      indices.push_back(found);
    }
  }

  for (int j : indices) {
    const auto transform = fit_marginal_transform(data.values.col(j), data.col_label(j));
    const double lo = data.values.col(j).minCoeff();
    const double hi = data.values.col(j).maxCoeff();
    std::vector<std::vector<std::string>> rows;
    for (int i = 0; i < options.grid_size; ++i) {
      const double x = lo + (hi - lo) * i / (options.grid_size - 1);
      rows.push_back({io::format_double(x), io::format_double(transform(x))});
    }
    io::write_tsv(dir / ("transform_" + data.col_label(j) + ".tsv"), {}, rows);
  }
}

void cmd_ingest(const IngestOptions& options) {
  DataMatrix data = io::read_data_csv(options.input);
  data.validate();

  if (options.log_transform) {
    for (int i = 0; i < data.n(); ++i)
      for (int j = 0; j < data.p(); ++j) {
        if (!(data.values(i, j) > 0.0))
          throw std::domain_error("ingest: log transform needs positive entries; row " +
                                  std::to_string(i + 1) + ", column " + data.col_label(j) +
                                  " is " + io::format_double(data.values(i, j)));
        data.values(i, j) = std::log(data.values(i, j));
      }
  }

  if (options.standardize) {
    for (int j = 0; j < data.p(); ++j) {
      const double mean = data.values.col(j).mean();
      const double sd =
          std::sqrt((data.values.col(j).array() - mean).square().sum() / data.n());
      if (!(sd > 0.0))
        throw std::domain_error("ingest: column " + data.col_label(j) +
                                " is constant; cannot standardize");
      data.values.col(j) = (data.values.col(j).array() - mean) / sd;
    }
  }

  io::write_data_csv(options.output, data);
}

}  // namespace npn
