#pragma once

#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>
#include <vector>

#include "npn/covariance.hpp"
#include "npn/glasso.hpp"
#include "npn/synthetic.hpp"

namespace npn {

enum class Method { nonparanormal, gaussian, both };

std::string method_name(Method method);
Method method_from_name(const std::string& name);

enum class GridSpacing { linear, log };

/// Regularization grid description. When min or max is absent the grid is
/// data-driven: max = largest off-diagonal |S_jk|, min = 0.01 * max,
/// log-spaced (the synthetic-benchmark default).
struct LambdaGridSpec {
  std::optional<double> min;
  std::optional<double> max;
  int count = 50;
  GridSpacing spacing = GridSpacing::linear;
};

/// Builds the strictly decreasing grid. Data-driven bounds require S.
std::vector<double> build_lambda_grid(const LambdaGridSpec& spec,
                                      const Eigen::MatrixXd* S = nullptr);

/// Monte Carlo experiment description; mirrors the JSON config file
/// field-for-field.
struct ExperimentConfig {
  int p = 40;
  std::vector<int> n_list = {1000};
  TransformSpec transform;
  int repetitions = 100;
  LambdaGridSpec lambda_grid;
  std::uint64_t seed = 0;
  Method method = Method::both;
  std::string output_dir = "out";

  // Generator knobs (paper defaults).
  double s = 0.125;
  int max_degree = 4;
  double mu0 = 1.5;  // broadcast to all coordinates

  double zero_tol = 1e-8;
  int threads = 0;  // 0: hardware concurrency

  void validate() const;
};

ExperimentConfig config_from_json_text(const std::string& text);
std::string config_to_json_text(const ExperimentConfig& config);

/// FNV-1a hash (hex) of the canonical JSON serialization.
std::string config_hash(const ExperimentConfig& config);

/// Score of one method on one replicate.
struct MethodScore {
  bool ok = false;
  double lambda_star = 0.0;
  int fp = 0;
  int fn = 0;
  std::string error;
};

/// Per-replicate record: the stream used, both method scores, and the
/// wall-clock time. Times stay in memory and logs only, never in output
/// files, so identical seeds give byte-identical artifacts.
struct RunRecord {
  int n = 0;
  int replicate = 0;
  std::uint64_t stream = 0;
  MethodScore nonparanormal;
  MethodScore gaussian;
  double wall_ms = 0.0;
};

struct BenchmarkResult {
  std::vector<RunRecord> records;
  int skipped = 0;
};

/// generate: truth graph (graph.tsv), Omega0 (omega0.csv), one dataset at
/// n_list.front() (data.csv), and manifest.json under output_dir.
void cmd_generate(const ExperimentConfig& config);

struct FitOptions {
  std::filesystem::path data_file;
  Method method = Method::nonparanormal;
  LambdaGridSpec grid{0.16, 1.2, 50, GridSpacing::linear};  // the real-data default
  std::optional<double> lambda;  // single-level shortcut
  bool use_correlation = false;  // nonparanormal: feed the rank correlation
  std::string output_dir = "fit_out";
  double zero_tol = 1e-8;
  GlassoOptions solver;
};

/// fit: per method, path_summary.tsv plus omega_###.csv / edges_###.tsv per
/// level. The two pipelines differ only in the covariance handed to the
/// solver.
void cmd_fit(const FitOptions& options);

/// benchmark: replicates.tsv (per-replicate scores) and summary.tsv
/// (rows = n; columns = method x {FPE, sd, FNE, sd}), plus manifest.json.
BenchmarkResult cmd_benchmark(const ExperimentConfig& config);

struct RocOptions {
  // Either data_file + truth_file, or a config to generate one replicate.
  std::optional<std::filesystem::path> data_file;
  std::optional<std::filesystem::path> truth_file;
  ExperimentConfig config;
  std::string output_dir = "roc_out";
};

/// roc: roc_<method>.tsv with one "x<TAB>y" row per grid level.
void cmd_roc(const RocOptions& options);

struct TransformDumpOptions {
  std::filesystem::path data_file;
  std::vector<std::string> columns;  // labels or decimal indices; empty = all
  int grid_size = 200;
  std::string output_dir = "transform_out";
};

/// transform-dump: transform_<label>.tsv of (x, f~_j(x)) pairs over an
/// evenly spaced grid spanning the column range.
void cmd_transform_dump(const TransformDumpOptions& options);

struct IngestOptions {
  std::filesystem::path input;
  std::filesystem::path output;
  bool log_transform = false;
  bool standardize = false;
};

/// ingest: optional ln transform, then per-column standardization with the
/// 1/n convention; writes the processed matrix as CSV.
void cmd_ingest(const IngestOptions& options);

}  // namespace npn
