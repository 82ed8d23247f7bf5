// Command-line front end: generate / fit / benchmark / roc / transform-dump /
// ingest, wired onto the library's command implementations.

#include <CLI11.hpp>

#include <cstdint>
#include <iostream>
#include <string>
#include <vector>

#include "npn/experiment.hpp"
#include "npn/io.hpp"

namespace {

struct ConfigFlags {
  std::string config_path;
  std::uint64_t seed = 0;
  int reps = 0;
  std::string method;
  double lambda_min = 0.0;
  double lambda_max = 0.0;
  int lambda_count = 0;
  std::string lambda_scale;
  std::string output_dir;
  double zero_tol = 0.0;
  int threads = -1;

  CLI::Option* seed_opt = nullptr;
  CLI::Option* reps_opt = nullptr;
  CLI::Option* method_opt = nullptr;
  CLI::Option* lmin_opt = nullptr;
  CLI::Option* lmax_opt = nullptr;
  CLI::Option* lcount_opt = nullptr;
  CLI::Option* lscale_opt = nullptr;
  CLI::Option* out_opt = nullptr;
  CLI::Option* ztol_opt = nullptr;
  CLI::Option* threads_opt = nullptr;
};

void add_config_flags(CLI::App* cmd, ConfigFlags& flags) {
  cmd->add_option("--config", flags.config_path, "JSON experiment config file");
  flags.seed_opt = cmd->add_option("--seed", flags.seed, "RNG seed");
  flags.reps_opt = cmd->add_option("--reps", flags.reps, "Monte Carlo repetitions");
  flags.method_opt =
      cmd->add_option("--method", flags.method, "nonparanormal | gaussian | both");
  flags.lmin_opt = cmd->add_option("--lambda-min", flags.lambda_min, "grid lower bound");
  flags.lmax_opt = cmd->add_option("--lambda-max", flags.lambda_max, "grid upper bound");
  flags.lcount_opt = cmd->add_option("--lambda-count", flags.lambda_count, "grid size");
  flags.lscale_opt =
      cmd->add_option("--lambda-scale", flags.lambda_scale, "linear | log spacing");
  flags.out_opt = cmd->add_option("--output-dir", flags.output_dir, "output directory");
  flags.ztol_opt =
      cmd->add_option("--zero-tol", flags.zero_tol, "edge-extraction zero tolerance");
  flags.threads_opt = cmd->add_option("--threads", flags.threads, "worker threads (0: auto)");
}

npn::ExperimentConfig resolve_config(const ConfigFlags& flags) {
  npn::ExperimentConfig config;
  if (!flags.config_path.empty())
    config = npn::config_from_json_text(npn::io::read_file(flags.config_path));
  if (*flags.seed_opt) config.seed = flags.seed;
  if (*flags.reps_opt) config.repetitions = flags.reps;
  if (*flags.method_opt) config.method = npn::method_from_name(flags.method);
  if (*flags.lmin_opt) config.lambda_grid.min = flags.lambda_min;
  if (*flags.lmax_opt) config.lambda_grid.max = flags.lambda_max;
  if (*flags.lcount_opt) config.lambda_grid.count = flags.lambda_count;
  if (*flags.lscale_opt)
    config.lambda_grid.spacing = flags.lambda_scale == "log" ? npn::GridSpacing::log
                                                             : npn::GridSpacing::linear;
  if (*flags.out_opt) config.output_dir = flags.output_dir;
  if (*flags.ztol_opt) config.zero_tol = flags.zero_tol;
  if (*flags.threads_opt) config.threads = flags.threads;
  config.validate();
  return config;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Sparse undirected graph estimation for non-Gaussian data"};
  app.require_subcommand(1);

  // generate
  auto* generate = app.add_subcommand(
      "generate", "Sample a truth graph, precision matrix, and dataset");
  ConfigFlags generate_flags;
  add_config_flags(generate, generate_flags);
  ConfigFlags* gf = &generate_flags;
  int gen_p = 0, gen_n = 0;
  std::string gen_transform;
  auto* gen_p_opt = generate->add_option("--p", gen_p, "dimension");
  auto* gen_n_opt = generate->add_option("--n", gen_n, "sample size");
  auto* gen_t_opt = generate->add_option("--transform", gen_transform,
                                         "identity | gaussian_cdf | power");
  generate->callback([gf, &gen_p, &gen_n, &gen_transform, gen_p_opt, gen_n_opt,
                      gen_t_opt] {
    npn::ExperimentConfig config = resolve_config(*gf);
    if (*gen_p_opt) config.p = gen_p;
    if (*gen_n_opt) config.n_list = {gen_n};
    if (*gen_t_opt) {
      if (gen_transform == "identity" || gen_transform == "none")
        config.transform.kind = npn::TransformKind::identity;
      else if (gen_transform == "gaussian_cdf" || gen_transform == "cdf")
        config.transform.kind = npn::TransformKind::gaussian_cdf;
      else if (gen_transform == "power")
        config.transform.kind = npn::TransformKind::power;
      else
        throw CLI::ValidationError("--transform", "unknown transform " + gen_transform);
    }
    config.validate();
    npn::cmd_generate(config);
  });

  // fit
  auto* fit = app.add_subcommand("fit", "Fit a regularization path to a data CSV");
  npn::FitOptions fit_options;
  std::string fit_data, fit_method = "nonparanormal", fit_scale;
  double fit_lambda = -1.0, fit_lmin = 0.0, fit_lmax = 0.0;
  int fit_lcount = 0;
  fit->add_option("--data", fit_data, "input data CSV")->required();
  fit->add_option("--method", fit_method, "nonparanormal | gaussian | both");
  auto* fit_lambda_opt = fit->add_option("--lambda", fit_lambda, "single level");
  auto* fit_lmin_opt = fit->add_option("--lambda-min", fit_lmin, "grid lower bound");
  auto* fit_lmax_opt = fit->add_option("--lambda-max", fit_lmax, "grid upper bound");
  auto* fit_lcount_opt = fit->add_option("--lambda-count", fit_lcount, "grid size");
  auto* fit_lscale_opt = fit->add_option("--lambda-scale", fit_scale, "linear | log");
  fit->add_flag("--use-correlation", fit_options.use_correlation,
                "feed the rank correlation instead of the transformed covariance");
  fit->add_option("--output-dir", fit_options.output_dir, "output directory");
  fit->add_option("--zero-tol", fit_options.zero_tol, "edge-extraction zero tolerance");
  fit->callback([&] {
    fit_options.data_file = fit_data;
    fit_options.method = npn::method_from_name(fit_method);
    if (*fit_lambda_opt) fit_options.lambda = fit_lambda;
    if (*fit_lmin_opt) fit_options.grid.min = fit_lmin;
    if (*fit_lmax_opt) fit_options.grid.max = fit_lmax;
    if (*fit_lcount_opt) fit_options.grid.count = fit_lcount;
    if (*fit_lscale_opt)
      fit_options.grid.spacing =
          fit_scale == "log" ? npn::GridSpacing::log : npn::GridSpacing::linear;
    npn::cmd_fit(fit_options);
  });

  // benchmark
  auto* benchmark = app.add_subcommand(
      "benchmark", "Monte Carlo structure-recovery comparison of both methods");
  ConfigFlags benchmark_flags;
  add_config_flags(benchmark, benchmark_flags);
  benchmark->callback([&benchmark_flags] {
    const npn::BenchmarkResult result = npn::cmd_benchmark(resolve_config(benchmark_flags));
    if (result.skipped > 0)
      std::cerr << "[benchmark] " << result.skipped << " replicate fits skipped\n";
  });

  // roc
  auto* roc = app.add_subcommand("roc", "Emit ROC points along the path");
  ConfigFlags roc_flags;
  add_config_flags(roc, roc_flags);
  std::string roc_data, roc_truth;
  auto* roc_data_opt = roc->add_option("--data", roc_data, "data CSV (needs --truth)");
  auto* roc_truth_opt = roc->add_option("--truth", roc_truth, "truth edge-list TSV");
  roc->callback([&roc_flags, &roc_data, &roc_truth, roc_data_opt, roc_truth_opt] {
    npn::RocOptions options;
    options.config = resolve_config(roc_flags);
    options.output_dir = options.config.output_dir;
    if (*roc_data_opt) options.data_file = roc_data;
    if (*roc_truth_opt) options.truth_file = roc_truth;
    npn::cmd_roc(options);
  });

  // transform-dump
  auto* dump = app.add_subcommand("transform-dump",
                                  "Tabulate estimated marginal transforms");
  npn::TransformDumpOptions dump_options;
  std::string dump_data, dump_columns;
  dump->add_option("--data", dump_data, "input data CSV")->required();
  dump->add_option("--columns", dump_columns, "comma-separated labels or indices");
  dump->add_option("--grid-size", dump_options.grid_size, "evaluation grid size");
  dump->add_option("--output-dir", dump_options.output_dir, "output directory");
  dump->callback([&] {
    dump_options.data_file = dump_data;
    dump_options.columns.clear();
    std::string token;
    std::istringstream stream(dump_columns);
    while (std::getline(stream, token, ','))
      if (!token.empty()) dump_options.columns.push_back(token);
    npn::cmd_transform_dump(dump_options);
  });

  // ingest
  auto* ingest = app.add_subcommand("ingest", "Log-transform / standardize a CSV");
  npn::IngestOptions ingest_options;
  std::string ingest_in, ingest_out;
  ingest->add_option("--input", ingest_in, "raw CSV")->required();
  ingest->add_option("--output", ingest_out, "processed CSV")->required();
  ingest->add_flag("--log-transform", ingest_options.log_transform, "apply ln first");
  ingest->add_flag("--standardize", ingest_options.standardize,
                   "per-column zero mean, unit sd (1/n convention)");
  ingest->callback([&] {
    ingest_options.input = ingest_in;
    ingest_options.output = ingest_out;
    npn::cmd_ingest(ingest_options);
  });

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    return app.exit(e);
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
  return 0;
}
