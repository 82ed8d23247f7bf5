#include <doctest.h>

#include <cmath>
#include <filesystem>
#include <fstream>
#include <map>
#include <sstream>

#include "npn/covariance.hpp"
#include "npn/experiment.hpp"
#include "npn/io.hpp"
#include "npn/metrics.hpp"
#include "npn/rng.hpp"
#include "support/test_util.hpp"

using namespace npn;
namespace fs = std::filesystem;

namespace {

fs::path fresh_dir(const std::string& tag) {
  const fs::path dir = fs::temp_directory_path() / ("npn_test_" + tag);
  fs::remove_all(dir);
  fs::create_directories(dir);
  return dir;
}

std::vector<std::string> read_lines(const fs::path& path) {
  std::ifstream in(path);
  REQUIRE(in.good());
  std::vector<std::string> lines;
  std::string line;
  while (std::getline(in, line)) lines.push_back(line);
  return lines;
}

ExperimentConfig tiny_config(const std::string& out_dir) {
  ExperimentConfig config;
  config.p = 8;
  config.n_list = {60};
  config.repetitions = 2;
  config.lambda_grid.count = 8;
  config.seed = 12345;
  config.method = Method::both;
  config.output_dir = out_dir;
  config.threads = 1;
  return config;
}

}  // namespace

TEST_SUITE_BEGIN("experiment");

TEST_CASE("lambda grid construction") {
  SUBCASE("explicit linear grid") {
    const auto grid = build_lambda_grid({0.16, 1.2, 50, GridSpacing::linear});
    REQUIRE(grid.size() == 50);
    CHECK(grid.front() == 1.2);
    CHECK(grid.back() == 0.16);
    for (std::size_t i = 1; i < grid.size(); ++i) CHECK(grid[i] < grid[i - 1]);
    const double step = grid[0] - grid[1];
    for (std::size_t i = 2; i < grid.size(); ++i)
      CHECK(grid[i - 1] - grid[i] == doctest::Approx(step).epsilon(1e-10));
  }

  SUBCASE("explicit log grid") {
    const auto grid = build_lambda_grid({0.01, 1.0, 5, GridSpacing::log});
    REQUIRE(grid.size() == 5);
    CHECK(grid.front() == 1.0);
    CHECK(grid.back() == 0.01);
    for (std::size_t i = 1; i < grid.size(); ++i)
      CHECK(grid[i] / grid[i - 1] == doctest::Approx(grid[1] / grid[0]).epsilon(1e-10));
  }

  SUBCASE("data-driven bounds") {
    Eigen::MatrixXd S = Eigen::MatrixXd::Identity(3, 3);
    S(0, 1) = S(1, 0) = 0.4;
    S(1, 2) = S(2, 1) = -0.7;
    LambdaGridSpec spec;
    spec.count = 10;
    const auto grid = build_lambda_grid(spec, &S);
    REQUIRE(grid.size() == 10);
    CHECK(grid.front() == doctest::Approx(0.7));
    CHECK(grid.back() == doctest::Approx(0.007));
    CHECK_THROWS_AS(build_lambda_grid(spec, nullptr), std::invalid_argument);
  }

  SUBCASE("degenerate cases") {
    CHECK(build_lambda_grid({0.3, 0.9, 1, GridSpacing::linear}) ==
          std::vector<double>{0.9});
    CHECK_THROWS_AS(build_lambda_grid({0.1, 1.0, 0, GridSpacing::linear}),
                    std::invalid_argument);
    CHECK_THROWS_AS(build_lambda_grid({0.0, 1.0, 3, GridSpacing::log}),
                    std::invalid_argument);
    CHECK_THROWS_AS(build_lambda_grid({-0.1, 1.0, 3, GridSpacing::linear}),
                    std::invalid_argument);
    const Eigen::MatrixXd diag = Eigen::MatrixXd::Identity(2, 2);
    LambdaGridSpec data_driven;
    CHECK(build_lambda_grid(data_driven, &diag) == std::vector<double>{0.0});
  }
}

TEST_CASE("config json round trip and hashing") {
  ExperimentConfig config = tiny_config("somewhere");
  config.transform.kind = TransformKind::gaussian_cdf;
  config.lambda_grid.min = 0.05;
  config.lambda_grid.max = 0.9;
  config.lambda_grid.spacing = GridSpacing::log;
  config.mu0 = 0.7;

  const std::string text = config_to_json_text(config);
  const ExperimentConfig parsed = config_from_json_text(text);
  CHECK(parsed.p == config.p);
  CHECK(parsed.n_list == config.n_list);
  CHECK(parsed.transform.kind == config.transform.kind);
  CHECK(parsed.transform.mu_g0 == config.transform.mu_g0);
  CHECK(parsed.repetitions == config.repetitions);
  CHECK(parsed.lambda_grid.min == config.lambda_grid.min);
  CHECK(parsed.lambda_grid.max == config.lambda_grid.max);
  CHECK(parsed.lambda_grid.count == config.lambda_grid.count);
  CHECK(parsed.lambda_grid.spacing == config.lambda_grid.spacing);
  CHECK(parsed.seed == config.seed);
  CHECK(parsed.method == config.method);
  CHECK(parsed.mu0 == config.mu0);

  CHECK(config_hash(parsed) == config_hash(config));
  ExperimentConfig other = config;
  other.seed += 1;
  CHECK(config_hash(other) != config_hash(config));

  CHECK_THROWS_AS(config_from_json_text("{\"method\": \"mystery\"}"),
                  std::invalid_argument);
  CHECK_THROWS_AS(config_from_json_text("{\"p\": 1}"), std::invalid_argument);
}

TEST_CASE("generate writes the advertised files deterministically") {
  const fs::path dir_a = fresh_dir("gen_a");
  const fs::path dir_b = fresh_dir("gen_b");

  ExperimentConfig config;
  config.p = 2;
  config.n_list = {10};
  config.seed = 7;
  config.output_dir = dir_a.string();
  cmd_generate(config);
  config.output_dir = dir_b.string();
  cmd_generate(config);

  const DataMatrix data = io::read_data_csv(dir_a / "data.csv");
  CHECK(data.n() == 10);
  CHECK(data.p() == 2);

  for (const char* name : {"graph.tsv", "omega0.csv", "data.csv"}) {
    CHECK(io::read_file(dir_a / name) == io::read_file(dir_b / name));
    CHECK(fs::file_size(dir_a / name) == fs::file_size(dir_b / name));
  }
  CHECK(io::read_file(dir_a / "manifest.json") == io::read_file(dir_b / "manifest.json"));

  SUBCASE("paper-scale truth respects the degree cap") {
    const fs::path dir = fresh_dir("gen_cap");
    ExperimentConfig paper;
    paper.p = 40;
    paper.n_list = {50};
    paper.seed = 3;
    paper.output_dir = dir.string();
    cmd_generate(paper);
    const GraphSpec truth = io::read_edge_list_tsv(dir / "graph.tsv", 40);
    CHECK(truth.max_degree() <= 4);
    const DataMatrix omega0 = io::read_data_csv(dir / "omega0.csv");
    CHECK(omega0.p() == 40);
  }
}

TEST_CASE("fit emits per-level artifacts") {
  const fs::path gen_dir = fresh_dir("fit_gen");
  ExperimentConfig config;
  config.p = 5;
  config.n_list = {80};
  config.seed = 21;
  config.output_dir = gen_dir.string();
  cmd_generate(config);

  const fs::path fit_dir = fresh_dir("fit_out");
  FitOptions options;
  options.data_file = gen_dir / "data.csv";
  options.method = Method::both;
  options.grid = {std::nullopt, std::nullopt, 6, GridSpacing::log};
  options.output_dir = fit_dir.string();
  cmd_fit(options);

  for (const char* method : {"nonparanormal", "gaussian"}) {
    const auto lines = read_lines(fit_dir / method / "path_summary.tsv");
    CHECK(lines.size() == 7);  // header + one row per level
    CHECK(fs::exists(fit_dir / method / "omega_000.csv"));
    CHECK(fs::exists(fit_dir / method / "edges_005.tsv"));
    // the largest data-driven lambda kills every off-diagonal
    CHECK(read_lines(fit_dir / method / "edges_000.tsv").empty());
  }

  SUBCASE("single lambda shortcut") {
    const fs::path one_dir = fresh_dir("fit_one");
    FitOptions single;
    single.data_file = gen_dir / "data.csv";
    single.method = Method::gaussian;
    single.lambda = 0.2;
    single.output_dir = one_dir.string();
    cmd_fit(single);
    CHECK(read_lines(one_dir / "gaussian" / "path_summary.tsv").size() == 2);
  }

  SUBCASE("degenerate column is a named error") {
    const fs::path bad = fresh_dir("fit_bad");
    DataMatrix data;
    data.values.resize(5, 2);
    data.values.col(0).setLinSpaced(5, 0.0, 1.0);
    data.values.col(1).setConstant(9.0);
    data.names = {"good", "flat"};
    io::write_data_csv(bad / "data.csv", data);
    FitOptions broken;
    broken.data_file = bad / "data.csv";
    broken.method = Method::nonparanormal;
    broken.output_dir = (bad / "out").string();
    CHECK_THROWS_WITH_AS(cmd_fit(broken), doctest::Contains("flat"), std::domain_error);
  }
}

TEST_CASE("identical covariance input implies identical estimates") {
  // the two pipelines share everything downstream of the covariance
  Philox4x32 rng(88);
  const Eigen::MatrixXd S = random_pd_matrix(6, rng);
  const std::vector<double> grid = build_lambda_grid({0.05, 0.5, 6, GridSpacing::log});
  const RegularizationPath a = regularization_path(as_cov(S), grid);
  const RegularizationPath b = regularization_path(as_cov(S), grid);
  REQUIRE(a.estimates.size() == b.estimates.size());
  for (std::size_t i = 0; i < a.estimates.size(); ++i)
    CHECK((a.estimates[i].omega.array() == b.estimates[i].omega.array()).all());
}

TEST_CASE("sample risk decreases along the training path") {
  const fs::path dir = fresh_dir("risk_path");
  ExperimentConfig config;
  config.p = 6;
  config.n_list = {150};
  config.seed = 31;
  config.output_dir = dir.string();
  cmd_generate(config);
  const DataMatrix data = io::read_data_csv(dir / "data.csv");

  const DataMatrix f_values = transformed_values(data);
  const CovarianceEstimate S = transformed_covariance(data);
  const auto grid = build_lambda_grid({std::nullopt, std::nullopt, 10, GridSpacing::log},
                                      &S.matrix);
  const RegularizationPath path = regularization_path(S, grid);
  double prev = std::numeric_limits<double>::infinity();
  for (const auto& est : path.estimates) {
    const double risk = sample_risk(f_values, est);
    CHECK(risk <= prev + 1e-6);
    prev = risk;
  }
}

TEST_CASE("benchmark outputs, summary cross-check, thread independence") {
  const fs::path dir_a = fresh_dir("bench_a");
  ExperimentConfig config = tiny_config(dir_a.string());
  const BenchmarkResult result = cmd_benchmark(config);
  CHECK(result.records.size() == 2);
  CHECK(result.skipped == 0);

  const auto rep_lines = read_lines(dir_a / "replicates.tsv");
  CHECK(rep_lines.size() == 1 + 2 * 2);  // header + reps x methods
  const auto summary_lines = read_lines(dir_a / "summary.tsv");
  REQUIRE(summary_lines.size() == 2);

  // recompute the summary from the per-replicate table
  std::map<std::string, std::vector<double>> fpe, fne;
  for (std::size_t i = 1; i < rep_lines.size(); ++i) {
    std::istringstream row(rep_lines[i]);
    std::string n, rep, stream, method, lambda_star, fpe_s, fne_s, score;
    std::getline(row, n, '\t');
    std::getline(row, rep, '\t');
    std::getline(row, stream, '\t');
    std::getline(row, method, '\t');
    std::getline(row, lambda_star, '\t');
    std::getline(row, fpe_s, '\t');
    std::getline(row, fne_s, '\t');
    std::getline(row, score, '\t');
    fpe[method].push_back(io::parse_double(fpe_s));
    fne[method].push_back(io::parse_double(fne_s));
  }
  std::istringstream summary_row(summary_lines[1]);
  std::vector<std::string> cells;
  std::string cell;
  while (std::getline(summary_row, cell, '\t')) cells.push_back(cell);
  REQUIRE(cells.size() == 9);
  auto mean_of = [](const std::vector<double>& xs) {
    double sum = 0.0;
    for (double x : xs) sum += x;
    return sum / xs.size();
  };
  auto sd_of = [&](const std::vector<double>& xs) {
    const double m = mean_of(xs);
    double ss = 0.0;
    for (double x : xs) ss += (x - m) * (x - m);
    return std::sqrt(ss / (xs.size() - 1));
  };
  CHECK(io::parse_double(cells[1]) ==
        doctest::Approx(mean_of(fpe["nonparanormal"])).epsilon(1e-12));
  CHECK(io::parse_double(cells[2]) ==
        doctest::Approx(sd_of(fpe["nonparanormal"])).epsilon(1e-12));
  CHECK(io::parse_double(cells[7]) ==
        doctest::Approx(mean_of(fne["gaussian"])).epsilon(1e-12));
  CHECK(io::parse_double(cells[8]) ==
        doctest::Approx(sd_of(fne["gaussian"])).epsilon(1e-12));

  // a different worker count must not change a single byte
  const fs::path dir_b = fresh_dir("bench_b");
  ExperimentConfig threaded = config;
  threaded.output_dir = dir_b.string();
  threaded.threads = 2;
  cmd_benchmark(threaded);
  CHECK(io::read_file(dir_a / "replicates.tsv") == io::read_file(dir_b / "replicates.tsv"));
  CHECK(io::read_file(dir_a / "summary.tsv") == io::read_file(dir_b / "summary.tsv"));
}

TEST_CASE("roc command in both modes") {
  const fs::path gen_dir = fresh_dir("roc_gen");
  ExperimentConfig config;
  config.p = 6;
  config.n_list = {120};
  config.seed = 9;
  config.lambda_grid.count = 7;
  config.output_dir = gen_dir.string();
  cmd_generate(config);

  SUBCASE("config mode") {
    const fs::path dir = fresh_dir("roc_cfg");
    RocOptions options;
    options.config = config;
    options.output_dir = dir.string();
    cmd_roc(options);
    for (const char* name : {"roc_nonparanormal.tsv", "roc_gaussian.tsv"}) {
      const auto lines = read_lines(dir / name);
      CHECK(lines.size() == 7);  // one row per grid level, no header
      for (const auto& line : lines) {
        const auto tab = line.find('\t');
        REQUIRE(tab != std::string::npos);
        const double x = io::parse_double(line.substr(0, tab));
        const double y = io::parse_double(line.substr(tab + 1));
        CHECK(x >= 0.0);
        CHECK(x <= 1.0);
        CHECK(y >= 0.0);
        CHECK(y <= 1.0);
      }
    }
  }

  SUBCASE("file mode") {
    const fs::path dir = fresh_dir("roc_file");
    RocOptions options;
    options.data_file = gen_dir / "data.csv";
    options.truth_file = gen_dir / "graph.tsv";
    options.config = config;
    options.config.method = Method::gaussian;
    options.output_dir = dir.string();
    cmd_roc(options);
    CHECK(read_lines(dir / "roc_gaussian.tsv").size() == 7);
    CHECK(!fs::exists(dir / "roc_nonparanormal.tsv"));
  }
}

TEST_CASE("transform dump grids") {
  const fs::path gen_dir = fresh_dir("dump_gen");
  ExperimentConfig config;
  config.p = 3;
  config.n_list = {200};
  config.seed = 77;
  config.transform.kind = TransformKind::power;
  config.output_dir = gen_dir.string();
  cmd_generate(config);

  const fs::path dir = fresh_dir("dump_out");
  TransformDumpOptions options;
  options.data_file = gen_dir / "data.csv";
  options.columns = {"x0", "2"};
  options.grid_size = 50;
  options.output_dir = dir.string();
  cmd_transform_dump(options);

  for (const char* name : {"transform_x0.tsv", "transform_x2.tsv"}) {
    const auto lines = read_lines(dir / name);
    REQUIRE(lines.size() == 50);
    double prev_x = -1e300, prev_f = -1e300;
    for (const auto& line : lines) {
      const auto tab = line.find('\t');
      const double x = io::parse_double(line.substr(0, tab));
      const double f = io::parse_double(line.substr(tab + 1));
      CHECK(x >= prev_x);
      CHECK(f >= prev_f);  // monotone transform on a sorted grid
      prev_x = x;
      prev_f = f;
    }
  }

  SUBCASE("two-point grid gives two rows") {
    TransformDumpOptions two = options;
    two.columns = {"x1"};
    two.grid_size = 2;
    two.output_dir = fresh_dir("dump_two").string();
    cmd_transform_dump(two);
    CHECK(read_lines(fs::path(two.output_dir) / "transform_x1.tsv").size() == 2);
  }

  SUBCASE("unknown column") {
    TransformDumpOptions bad = options;
    bad.columns = {"nope"};
    CHECK_THROWS_AS(cmd_transform_dump(bad), std::invalid_argument);
  }
}

TEST_CASE("ingest transforms and validation") {
  const fs::path dir = fresh_dir("ingest");
  DataMatrix raw;
  raw.values.resize(118, 40);
  Philox4x32 rng(5);
  for (int j = 0; j < 40; ++j)
    for (int i = 0; i < 118; ++i) raw.values(i, j) = std::exp(rng.next_gaussian());
  io::write_data_csv(dir / "raw.csv", raw);

  IngestOptions options;
  options.input = dir / "raw.csv";
  options.output = dir / "clean.csv";
  options.log_transform = true;
  options.standardize = true;
  cmd_ingest(options);

  const DataMatrix clean = io::read_data_csv(dir / "clean.csv");
  CHECK(clean.n() == 118);
  CHECK(clean.p() == 40);
  for (int j = 0; j < clean.p(); ++j) {
    CHECK(std::abs(clean.values.col(j).mean()) <= 1e-12);
    const double sd = std::sqrt(clean.values.col(j).array().square().sum() / clean.n());
    CHECK(sd == doctest::Approx(1.0).epsilon(1e-12));
  }

  SUBCASE("constant column cannot standardize") {
    DataMatrix flat;
    flat.values = Eigen::MatrixXd::Ones(5, 1);
    flat.names = {"ones"};
    io::write_data_csv(dir / "flat.csv", flat);
    IngestOptions bad;
    bad.input = dir / "flat.csv";
    bad.output = dir / "flat_out.csv";
    bad.standardize = true;
    CHECK_THROWS_WITH_AS(cmd_ingest(bad), doctest::Contains("ones"), std::domain_error);
  }

  SUBCASE("log transform rejects nonpositive cells by location") {
    DataMatrix mixed;
    mixed.values.resize(3, 2);
    mixed.values << 1.0, 2.0, 3.0, -4.0, 5.0, 6.0;
    mixed.names = {"a", "b"};
    io::write_data_csv(dir / "mixed.csv", mixed);
    IngestOptions bad;
    bad.input = dir / "mixed.csv";
    bad.output = dir / "mixed_out.csv";
    bad.log_transform = true;
    CHECK_THROWS_WITH_AS(cmd_ingest(bad), doctest::Contains("row 2"), std::domain_error);
  }

  SUBCASE("parse errors carry the cell location") {
    std::ofstream out(dir / "broken.csv");
    out << "u,v\n1.0,2.0\n3.0,oops\n";
    out.close();
    IngestOptions bad;
    bad.input = dir / "broken.csv";
    bad.output = dir / "broken_out.csv";
    CHECK_THROWS_WITH_AS(cmd_ingest(bad), doctest::Contains("column 2"),
                         std::runtime_error);
  }
}

TEST_SUITE_END();
