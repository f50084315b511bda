#include <gtest/gtest.h>

#include <algorithm>
#include <cmath>
#include <cstdlib>
#include <fstream>
#include <sstream>

#include <sys/wait.h>

#include "sdeproj/experiment.hpp"

using namespace sdeproj;
namespace fs = std::filesystem;

namespace {

const double kPi = 3.14159265358979323846;

fs::path scratch_dir(const std::string& name) {
  const fs::path p = fs::temp_directory_path() / ("sdeproj_test_" + name);
  fs::remove_all(p);
  fs::create_directories(p);
  return p;
}

std::string slurp(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  std::stringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

std::vector<std::vector<std::string>> read_csv(const fs::path& p) {
  std::vector<std::vector<std::string>> out;
  std::ifstream in(p);
  std::string line;
  while (std::getline(in, line)) {
    std::vector<std::string> cells;
    std::stringstream ss(line);
    std::string cell;
    while (std::getline(ss, cell, ',')) cells.push_back(cell);
    out.push_back(cells);
  }
  return out;
}

bool has_diagnostic(const std::vector<std::string>& d, const std::string& needle) {
  return std::any_of(d.begin(), d.end(), [&](const std::string& s) { return s.find(needle) != std::string::npos; });
}

ExperimentConfig small_filter_config() {
  ExperimentConfig c = parse_config(
      "experiment = filter-comparison\n"
      "horizon = 0.1\n"
      "dt_filter = 0.001\n"
      "dt_fd = 0.0002\n"
      "report_every = 20\n"
      "seeds = 3, 7\n"
      "kinds = ekf, jet_hellinger, ito_adf\n");
  return c;
}

}  // namespace

TEST(ConfigParser, DefaultsAndOverrides) {
  const ExperimentConfig d = parse_config("");
  EXPECT_EQ(d.experiment, ExperimentType::filter_comparison);
  EXPECT_DOUBLE_EQ(d.epsilon, 0.05);
  EXPECT_EQ(d.seeds.size(), 20u);
  EXPECT_EQ(d.kinds.size(), 8u);
  const ExperimentConfig c = parse_config(
      "# comment line\n"
      "  experiment = order-check   # trailing comment\n"
      "\n"
      "epsilon = 0.1\n"
      "seeds = 1, 4-6\n"
      "order_kinds = jet, strat\n"
      "metrics = hellinger\n");
  EXPECT_EQ(c.experiment, ExperimentType::order_check);
  EXPECT_DOUBLE_EQ(c.epsilon, 0.1);
  EXPECT_EQ(c.seeds, (std::vector<std::uint64_t>{1, 4, 5, 6}));
  EXPECT_EQ(c.order_kinds, (std::vector<ProjectionKind>{ProjectionKind::ito_jet, ProjectionKind::stratonovich}));
  EXPECT_EQ(c.metrics, (std::vector<DensityMetric>{DensityMetric::hellinger}));
}

TEST(ConfigParser, ErrorsCarryLineNumbers) {
  try {
    parse_config("epsilon = 0.1\nbogus = 3\n");
    FAIL();
  } catch (const ConfigError& e) {
    EXPECT_NE(std::string(e.what()).find("line 2"), std::string::npos);
  }
  EXPECT_THROW(parse_config("epsilon = abc\n"), ConfigError);
  EXPECT_THROW(parse_config("kinds = ekf, ukf\n"), ConfigError);
  EXPECT_THROW(parse_config("no equals sign\n"), ConfigError);
  EXPECT_THROW(parse_seed_list("5-2"), ConfigError);
}

TEST(ConfigValidation, DefaultsAreClean) {
  EXPECT_TRUE(validate(parse_config("")).empty());
}

TEST(ConfigValidation, StabilityDiagnostic) {
  ExperimentConfig c;
  c.dt_fd = 0.001;
  c.dt_filter = 0.001;
  const auto d = validate(c);
  ASSERT_EQ(d.size(), 1u);
  EXPECT_NE(d[0].find("stability"), std::string::npos);
  EXPECT_NE(d[0].find("0.001"), std::string::npos);
  EXPECT_NE(d[0].find("0.0004"), std::string::npos);
}

TEST(ConfigValidation, RangeAndSchemaDiagnostics) {
  ExperimentConfig c;
  c.theta_min = 0.0;
  EXPECT_TRUE(has_diagnostic(validate(c), "theta_min"));
  c = ExperimentConfig{};
  c.kinds.clear();
  EXPECT_TRUE(has_diagnostic(validate(c), "kinds"));
  c = ExperimentConfig{};
  c.seeds.clear();
  EXPECT_TRUE(has_diagnostic(validate(c), "seeds"));
  c = ExperimentConfig{};
  c.dt_filter = 0.0003;
  EXPECT_TRUE(has_diagnostic(validate(c), "multiple"));
}

TEST(ShippedConfigs, AllValidate) {
  int n = 0;
  for (const auto& entry : fs::directory_iterator(SDEPROJ_CONFIG_DIR)) {
    if (entry.path().extension() != ".cfg") continue;
    ++n;
    const auto d = validate(load_config(entry.path()));
    EXPECT_TRUE(d.empty()) << entry.path() << ": " << (d.empty() ? "" : d.front());
  }
  EXPECT_GE(n, 4);
}

TEST(FormatDouble, SeventeenDigitsRoundTrip) {
  for (double v : {0.1, 1.0 / 3.0, -2.5e-17, 12345.678}) EXPECT_EQ(std::stod(format_double(v)), v);
  EXPECT_EQ(format_double(0.1), "0.10000000000000001");
}

TEST(FilterComparison, RowCountHeaderAndDeterminism) {
  const ExperimentConfig c = small_filter_config();
  const fs::path a = scratch_dir("fc_a"), b = scratch_dir("fc_b");
  const RunOutcome ra = run(c, {a, 1, nullptr});
  ASSERT_EQ(ra.exit_code, 0) << ra.message;
  const RunOutcome rb = run(c, {b, 2, nullptr});
  ASSERT_EQ(rb.exit_code, 0) << rb.message;
  const std::string text = slurp(a / "filter_comparison.csv");
  EXPECT_EQ(text, slurp(b / "filter_comparison.csv"));
  const auto rows = read_csv(a / "filter_comparison.csv");
  ASSERT_FALSE(rows.empty());
  EXPECT_EQ(rows[0], (std::vector<std::string>{"experiment", "seed", "t", "kind", "metric", "residual"}));
  // 100 filter steps reported every 20: 5 samples.
  const std::size_t expected = c.seeds.size() * 5 * c.kinds.size() * c.metrics.size();
  EXPECT_EQ(rows.size() - 1, expected);
  EXPECT_EQ(ra.rows_written, static_cast<long>(expected));
  EXPECT_EQ(rows[1][1], "3");
  EXPECT_EQ(rows.back()[1], "7");
  for (std::size_t i = 1; i < rows.size(); ++i) EXPECT_GE(std::stod(rows[i][5]), 0.0);
}

TEST(FilterComparison, RowsDoNotDependOnOtherSeeds) {
  ExperimentConfig c = small_filter_config();
  const auto alone = filter_comparison_rows(c, 7);
  const fs::path dir = scratch_dir("fc_seed");
  ASSERT_EQ(run(c, {dir, 1, nullptr}).exit_code, 0);
  const std::string text = slurp(dir / "filter_comparison.csv");
  for (const auto& row : alone) EXPECT_NE(text.find(row), std::string::npos);
}

TEST(FilterComparison, SelfCheckFile) {
  ExperimentConfig c = small_filter_config();
  c.seeds = {1};
  c.fd_self_check = true;
  const fs::path dir = scratch_dir("fc_self");
  const RunOutcome r = run(c, {dir, 1, nullptr});
  ASSERT_EQ(r.exit_code, 0) << r.message;
  const auto rows = read_csv(dir / "fd_self_check.csv");
  ASSERT_EQ(rows.size(), 6u);
  for (std::size_t i = 1; i < rows.size(); ++i) EXPECT_LT(std::stod(rows[i][3]), 0.05);
}

TEST(FilterComparison, EmptyKindsExitsWithConfigError) {
  ExperimentConfig c = small_filter_config();
  c.kinds.clear();
  const RunOutcome r = run(c, {scratch_dir("fc_empty"), 1, nullptr});
  EXPECT_EQ(r.exit_code, 2);
  EXPECT_NE(r.message.find("kinds"), std::string::npos);
}

TEST(FilterComparison, NumericalFailureExitsWithThree) {
  ExperimentConfig c = small_filter_config();
  c.epsilon = 1e6;
  c.seeds = {0};
  const RunOutcome r = run(c, {scratch_dir("fc_blowup"), 1, nullptr});
  EXPECT_EQ(r.exit_code, 3);
  EXPECT_NE(r.message.find("rows written"), std::string::npos);
}

TEST(CrossDiffusionPaths, AnglesClusterNearDiagonals) {
  const ExperimentConfig c = parse_config(
      "experiment = cross-diffusion-paths\n"
      "horizon = 5\n"
      "dt_paths = 0.001\n"
      "report_every = 1000\n"
      "seeds = 0-99\n");
  const fs::path dir = scratch_dir("cdp");
  const RunOutcome r = run(c, {dir, 1, nullptr});
  ASSERT_EQ(r.exit_code, 0) << r.message;
  const auto rows = read_csv(dir / "cross_diffusion_paths.csv");
  EXPECT_EQ(rows[0], (std::vector<std::string>{"experiment", "seed", "t", "x", "y", "theta"}));
  ASSERT_EQ(rows.size(), 1u + 100 * 6);
  std::vector<double> late;
  for (std::size_t i = 1; i < rows.size(); ++i) {
    const double theta = std::stod(rows[i][5]);
    EXPECT_LE(std::abs(theta), kPi / 4.0 + 1e-12);
    const double x = std::stod(rows[i][3]), y = std::stod(rows[i][4]);
    const double t = std::stod(rows[i][2]);
    EXPECT_NEAR((x * x - y * y) * std::exp(t), 1.0, 1e-9);
    if (t > 4.99) late.push_back(std::abs(theta));
  }
  ASSERT_EQ(late.size(), 100u);
  std::sort(late.begin(), late.end());
  EXPECT_GT(late[50], 0.6);
}

TEST(OrderCheck, WritesSlopes) {
  const ExperimentConfig c = parse_config(
      "experiment = order-check\n"
      "seeds = 2\n"
      "order_paths = 200\n"
      "order_substeps = 8\n"
      "order_t_levels = 0.01, 0.02, 0.04, 0.08\n");
  const fs::path dir = scratch_dir("oc");
  const RunOutcome r = run(c, {dir, 2, nullptr});
  ASSERT_EQ(r.exit_code, 0) << r.message;
  const auto rows = read_csv(dir / "order_check.csv");
  EXPECT_EQ(rows.size(), 1u + 2 * 4);
  const auto slopes = read_csv(dir / "order_check_slopes.csv");
  ASSERT_EQ(slopes.size(), 3u);
  EXPECT_EQ(slopes[0][3], "ambient_slope");
}

TEST(CoefficientTable, LinearSensorGivesZeroError) {
  const ExperimentConfig c = parse_config("experiment = coefficient-table\nepsilon = 0\n");
  const fs::path dir = scratch_dir("ct0");
  const RunOutcome r = run(c, {dir, 1, nullptr});
  ASSERT_EQ(r.exit_code, 0) << r.message;
  const auto rows = read_csv(dir / "coefficient_table.csv");
  EXPECT_EQ(rows.size(), 1u + 8 * 25);
  // The Stratonovich rows use a finite-difference chart Jacobian.
  for (std::size_t i = 1; i < rows.size(); ++i) EXPECT_LT(std::stod(rows[i].back()), 1e-8) << rows[i][1];
  const auto summary = read_csv(dir / "coefficient_table_summary.csv");
  ASSERT_EQ(summary.size(), 3u);
  for (std::size_t i = 1; i < summary.size(); ++i) EXPECT_LT(std::stod(summary[i][2]), 1e-8);
}

TEST(CoefficientTable, DefaultEpsilonProjectionsAgree) {
  const ExperimentConfig c = parse_config("experiment = coefficient-table\n");
  const fs::path dir = scratch_dir("ct");
  ASSERT_EQ(run(c, {dir, 1, nullptr}).exit_code, 0);
  const auto summary = read_csv(dir / "coefficient_table_summary.csv");
  ASSERT_EQ(summary[1][1], "projections");
  EXPECT_LT(std::stod(summary[1][2]), 1e-5);
}

TEST(Cli, ExitCodes) {
  const std::string cli = SDEPROJ_CLI_PATH;
  if (cli.empty()) GTEST_SKIP() << "CLI not built";
  const fs::path dir = scratch_dir("cli");
  const fs::path bad = dir / "bad.cfg";
  std::ofstream(bad) << "kinds =\n";
  const fs::path ok = dir / "ok.cfg";
  std::ofstream(ok) << "experiment = coefficient-table\ntable_theta1 = 0.5\ntable_theta2 = 1\n";
  const fs::path typo = dir / "typo.cfg";
  std::ofstream(typo) << "epsilonn = 1\n";
  auto code = [](const std::string& cmd) {
    const int status = std::system((cmd + " > /dev/null 2>&1").c_str());
    return WEXITSTATUS(status);
  };
  EXPECT_EQ(code(cli + " validate " + ok.string()), 0);
  EXPECT_EQ(code(cli + " validate " + bad.string()), 2);
  EXPECT_EQ(code(cli + " run " + bad.string() + " --out " + dir.string()), 2);
  EXPECT_EQ(code(cli + " run " + typo.string()), 2);
  EXPECT_EQ(code(cli + " run " + ok.string() + " --out " + (dir / "out").string()), 0);
  EXPECT_TRUE(fs::exists(dir / "out" / "coefficient_table.csv"));
  EXPECT_EQ(code("SDEPROJ_OUTPUT_DIR=" + (dir / "env").string() + " " + cli + " run " + ok.string()), 0);
  EXPECT_TRUE(fs::exists(dir / "env" / "coefficient_table.csv"));
  EXPECT_NE(code(cli + " run"), 0);
}
