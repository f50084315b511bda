#pragma once

#include <cstdint>
#include <filesystem>
#include <map>
#include <ostream>
#include <string>
#include <vector>

#include "sdeproj/circle_lab.hpp"
#include "sdeproj/gaussian_filters.hpp"

namespace sdeproj {

enum class ExperimentType { filter_comparison, order_check, cross_diffusion_paths, coefficient_table };

std::string to_string(ExperimentType type);

/// Thrown for malformed config text or values that fail validation.
class ConfigError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

struct ExperimentConfig {
  ExperimentType experiment = ExperimentType::filter_comparison;

  // Filtering problem.
  double epsilon = 0.05;
  double horizon = 1.0;
  double dt_filter = 0.0002;
  double x_min = -10.0;
  double x_max = 10.0;
  int n_cells = 1000;
  double dt_fd = 0.0002;
  std::vector<std::uint64_t> seeds = {0, 1, 2, 3, 4, 5, 6, 7, 8, 9, 10, 11, 12, 13, 14, 15, 16, 17, 18, 19};
  std::vector<FilterKind> kinds = all_filter_kinds();
  std::vector<DensityMetric> metrics = {DensityMetric::l2, DensityMetric::hellinger};
  bool numeric_coefficients = false;  // projection kinds via quadrature instead of closed forms
  int quadrature_nodes = 40;
  int report_every = 50;
  double theta_min = 1e-3;
  double prior_mean = 0.0;
  double prior_sd = 1.0;
  bool fd_self_check = false;

  // Order check on the circle.
  std::string order_sde = "generic";  // generic | cross-diffusion
  std::vector<ProjectionKind> order_kinds = {ProjectionKind::ito_jet, ProjectionKind::ito_vector};
  std::vector<double> order_t_levels = {1e-3, 3.1622776601683794e-3, 1e-2, 3.1622776601683794e-2, 1e-1};
  long order_paths = 10000;
  long order_substeps = 64;
  double order_theta0 = 0.3;

  // Cross diffusion.
  double sigma = 1.0;
  double x0 = 1.0;
  double y0 = 0.0;
  double dt_paths = 0.001;

  // Coefficient table.
  std::vector<double> table_theta1 = {-1.0, -0.5, 0.0, 0.5, 1.0};
  std::vector<double> table_theta2 = {0.5, 0.875, 1.25, 1.625, 2.0};

  std::string output_dir;  // empty: command line, environment, then "."
};

/// Parses `key = value` lines; `#` starts a comment. Unknown keys, bad
/// numbers and bad names raise ConfigError with the line number.
ExperimentConfig parse_config(const std::string& text);
ExperimentConfig load_config(const std::filesystem::path& path);

/// Stability, range and schema problems; empty iff run would start.
std::vector<std::string> validate(const ExperimentConfig& config);

/// Seed list syntax: comma separated integers or inclusive ranges a-b.
std::vector<std::uint64_t> parse_seed_list(const std::string& text);

struct RunOptions {
  std::filesystem::path output_dir = ".";
  int jobs = 1;
  std::ostream* log = nullptr;
};

struct RunOutcome {
  int exit_code = 0;  // 0 success, 2 config error, 3 numerical failure
  std::vector<std::filesystem::path> files;
  long rows_written = 0;
  std::string message;
};

/// Runs the configured experiment and writes its CSV files.
RunOutcome run(const ExperimentConfig& config, const RunOptions& options);

/// Formats a double with 17 significant digits.
std::string format_double(double v);

/// Residual rows of one filter-comparison seed, in CSV form without header.
std::vector<std::string> filter_comparison_rows(const ExperimentConfig& config, std::uint64_t seed);

}  // namespace sdeproj
