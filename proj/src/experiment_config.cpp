#include <cmath>
#include <fstream>
#include <functional>
#include <sstream>

#include "sdeproj/errors.hpp"
#include "sdeproj/experiment.hpp"

namespace sdeproj {

std::string to_string(ExperimentType type) {
  switch (type) {
    case ExperimentType::filter_comparison: return "filter-comparison";
    case ExperimentType::order_check: return "order-check";
    case ExperimentType::cross_diffusion_paths: return "cross-diffusion-paths";
    case ExperimentType::coefficient_table: return "coefficient-table";
  }
  return "unknown";
}

namespace {

std::string trim(const std::string& s) {
  const auto b = s.find_first_not_of(" \t\r");
  if (b == std::string::npos) return "";
  const auto e = s.find_last_not_of(" \t\r");
  return s.substr(b, e - b + 1);
}

std::vector<std::string> split_list(const std::string& s) {
  std::vector<std::string> out;
  std::stringstream ss(s);
  std::string item;
  while (std::getline(ss, item, ',')) {
    item = trim(item);
    if (!item.empty()) out.push_back(item);
  }
  return out;
}

double to_double(const std::string& s) {
  std::size_t pos = 0;
  double v = 0.0;
  try {
    v = std::stod(s, &pos);
  } catch (const std::exception&) {
    throw ConfigError("not a number: '" + s + "'");
  }
  if (pos != s.size()) throw ConfigError("not a number: '" + s + "'");
  return v;
}

long to_long(const std::string& s) {
  std::size_t pos = 0;
  long v = 0;
  try {
    v = std::stol(s, &pos);
  } catch (const std::exception&) {
    throw ConfigError("not an integer: '" + s + "'");
  }
  if (pos != s.size()) throw ConfigError("not an integer: '" + s + "'");
  return v;
}

bool to_bool(const std::string& s) {
  if (s == "true" || s == "1" || s == "yes") return true;
  if (s == "false" || s == "0" || s == "no") return false;
  throw ConfigError("not a boolean: '" + s + "'");
}

std::vector<double> to_doubles(const std::string& s) {
  std::vector<double> out;
  for (const auto& item : split_list(s)) out.push_back(to_double(item));
  return out;
}

ExperimentType to_experiment(const std::string& s) {
  for (auto t : {ExperimentType::filter_comparison, ExperimentType::order_check,
                 ExperimentType::cross_diffusion_paths, ExperimentType::coefficient_table})
    if (to_string(t) == s) return t;
  throw ConfigError("unknown experiment '" + s + "'");
}

}  // namespace

std::vector<std::uint64_t> parse_seed_list(const std::string& text) {
  std::vector<std::uint64_t> out;
  for (const auto& item : split_list(text)) {
    const auto dash = item.find('-', 1);
    if (dash == std::string::npos) {
      const long v = to_long(item);
      if (v < 0) throw ConfigError("seeds must be non-negative");
      out.push_back(static_cast<std::uint64_t>(v));
      continue;
    }
    const long a = to_long(trim(item.substr(0, dash)));
    const long b = to_long(trim(item.substr(dash + 1)));
    if (a < 0 || b < a) throw ConfigError("bad seed range '" + item + "'");
    for (long v = a; v <= b; ++v) out.push_back(static_cast<std::uint64_t>(v));
  }
  return out;
}

ExperimentConfig parse_config(const std::string& text) {
  ExperimentConfig c;
  using Setter = std::function<void(const std::string&)>;
  const std::map<std::string, Setter> setters = {
      {"experiment", [&](const std::string& v) { c.experiment = to_experiment(v); }},
      {"epsilon", [&](const std::string& v) { c.epsilon = to_double(v); }},
      {"horizon", [&](const std::string& v) { c.horizon = to_double(v); }},
      {"dt_filter", [&](const std::string& v) { c.dt_filter = to_double(v); }},
      {"x_min", [&](const std::string& v) { c.x_min = to_double(v); }},
      {"x_max", [&](const std::string& v) { c.x_max = to_double(v); }},
      {"n_cells", [&](const std::string& v) { c.n_cells = static_cast<int>(to_long(v)); }},
      {"dt_fd", [&](const std::string& v) { c.dt_fd = to_double(v); }},
      {"seeds", [&](const std::string& v) { c.seeds = parse_seed_list(v); }},
      {"kinds",
       [&](const std::string& v) {
         c.kinds.clear();
         for (const auto& k : split_list(v)) {
           try {
             c.kinds.push_back(parse_filter_kind(k));
           } catch (const InvalidArgumentError& e) {
             throw ConfigError(e.what());
           }
         }
       }},
      {"metrics",
       [&](const std::string& v) {
         c.metrics.clear();
         for (const auto& k : split_list(v)) {
           try {
             c.metrics.push_back(parse_density_metric(k));
           } catch (const InvalidArgumentError& e) {
             throw ConfigError(e.what());
           }
         }
       }},
      {"coefficients",
       [&](const std::string& v) {
         if (v == "closed-form") c.numeric_coefficients = false;
         else if (v == "numeric") c.numeric_coefficients = true;
         else throw ConfigError("coefficients must be closed-form or numeric");
       }},
      {"quadrature_nodes", [&](const std::string& v) { c.quadrature_nodes = static_cast<int>(to_long(v)); }},
      {"report_every", [&](const std::string& v) { c.report_every = static_cast<int>(to_long(v)); }},
      {"theta_min", [&](const std::string& v) { c.theta_min = to_double(v); }},
      {"prior_mean", [&](const std::string& v) { c.prior_mean = to_double(v); }},
      {"prior_sd", [&](const std::string& v) { c.prior_sd = to_double(v); }},
      {"fd_self_check", [&](const std::string& v) { c.fd_self_check = to_bool(v); }},
      {"order_sde", [&](const std::string& v) { c.order_sde = v; }},
      {"order_kinds",
       [&](const std::string& v) {
         c.order_kinds.clear();
         for (const auto& k : split_list(v)) {
           try {
             c.order_kinds.push_back(parse_projection_kind(k));
           } catch (const InvalidArgumentError& e) {
             throw ConfigError(e.what());
           }
         }
       }},
      {"order_t_levels", [&](const std::string& v) { c.order_t_levels = to_doubles(v); }},
      {"order_paths", [&](const std::string& v) { c.order_paths = to_long(v); }},
      {"order_substeps", [&](const std::string& v) { c.order_substeps = to_long(v); }},
      {"order_theta0", [&](const std::string& v) { c.order_theta0 = to_double(v); }},
      {"sigma", [&](const std::string& v) { c.sigma = to_double(v); }},
      {"x0", [&](const std::string& v) { c.x0 = to_double(v); }},
      {"y0", [&](const std::string& v) { c.y0 = to_double(v); }},
      {"dt_paths", [&](const std::string& v) { c.dt_paths = to_double(v); }},
      {"table_theta1", [&](const std::string& v) { c.table_theta1 = to_doubles(v); }},
      {"table_theta2", [&](const std::string& v) { c.table_theta2 = to_doubles(v); }},
      {"output_dir", [&](const std::string& v) { c.output_dir = v; }},
  };
  std::istringstream in(text);
  std::string line;
  int line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    const auto hash = line.find('#');
    if (hash != std::string::npos) line.erase(hash);
    line = trim(line);
    if (line.empty()) continue;
    const auto eq = line.find('=');
    if (eq == std::string::npos) throw ConfigError("line " + std::to_string(line_no) + ": expected key = value");
    const std::string key = trim(line.substr(0, eq));
    const std::string value = trim(line.substr(eq + 1));
    const auto it = setters.find(key);
    if (it == setters.end()) throw ConfigError("line " + std::to_string(line_no) + ": unknown key '" + key + "'");
    try {
      it->second(value);
    } catch (const ConfigError& e) {
      throw ConfigError("line " + std::to_string(line_no) + ": " + e.what());
    }
  }
  return c;
}

ExperimentConfig load_config(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot open config file " + path.string());
  std::stringstream ss;
  ss << in.rdbuf();
  return parse_config(ss.str());
}

namespace {

bool is_multiple(double big, double small) {
  const double r = big / small;
  return std::abs(r - std::round(r)) <= 1e-9 * std::max(1.0, r) && std::round(r) >= 1.0;
}

}  // namespace

std::vector<std::string> validate(const ExperimentConfig& c) {
  std::vector<std::string> d;
  auto positive = [&](double v, const char* name) {
    if (!(v > 0.0) || !std::isfinite(v)) d.push_back(std::string(name) + " must be positive");
  };
  switch (c.experiment) {
    case ExperimentType::filter_comparison: {
      if (c.seeds.empty()) d.push_back("seeds must not be empty");
      if (c.kinds.empty()) d.push_back("kinds must not be empty");
      if (c.metrics.empty()) d.push_back("metrics must not be empty");
      if (!std::isfinite(c.epsilon)) d.push_back("epsilon must be finite");
      positive(c.horizon, "horizon");
      positive(c.dt_filter, "dt_filter");
      positive(c.dt_fd, "dt_fd");
      positive(c.prior_sd, "prior_sd");
      if (!(c.theta_min > 0.0)) d.push_back("theta_min must be positive");
      else if (c.prior_sd > 0.0 && !(c.prior_sd > c.theta_min)) d.push_back("prior_sd must exceed theta_min");
      if (!(c.x_max > c.x_min)) d.push_back("x_max must exceed x_min");
      if (c.n_cells < 2) d.push_back("n_cells must be at least 2");
      if (c.report_every < 1) d.push_back("report_every must be at least 1");
      if (c.numeric_coefficients && c.quadrature_nodes < 20) d.push_back("quadrature_nodes must be at least 20");
      if (d.empty()) {
        // Cubic sensor: sigma = 1.
        const double dx = (c.x_max - c.x_min) / c.n_cells;
        const double limit = dx * dx;
        if (c.dt_fd > limit * (1.0 + 1e-12))
          d.push_back("dt_fd = " + format_double(c.dt_fd) + " violates the explicit stability limit dx^2/sigma^2 = " +
                      format_double(limit));
        if (!is_multiple(c.dt_filter, c.dt_fd)) d.push_back("dt_filter must be an integer multiple of dt_fd");
        if (!is_multiple(c.horizon, c.dt_filter)) d.push_back("dt_filter must divide horizon");
      }
      break;
    }
    case ExperimentType::order_check: {
      if (c.seeds.empty()) d.push_back("seeds must not be empty");
      if (c.order_kinds.empty()) d.push_back("order_kinds must not be empty");
      if (c.order_t_levels.size() < 4) d.push_back("order_t_levels needs at least 4 levels");
      for (std::size_t i = 0; i < c.order_t_levels.size(); ++i)
        if (!(c.order_t_levels[i] > 0.0) || (i && !(c.order_t_levels[i] > c.order_t_levels[i - 1]))) {
          d.push_back("order_t_levels must be positive and increasing");
          break;
        }
      if (c.order_paths < 1) d.push_back("order_paths must be positive");
      if (c.order_substeps < 1) d.push_back("order_substeps must be positive");
      if (c.order_sde != "generic" && c.order_sde != "cross-diffusion")
        d.push_back("order_sde must be generic or cross-diffusion");
      if (c.order_sde == "cross-diffusion") positive(c.sigma, "sigma");
      break;
    }
    case ExperimentType::cross_diffusion_paths: {
      if (c.seeds.empty()) d.push_back("seeds must not be empty");
      positive(c.sigma, "sigma");
      positive(c.horizon, "horizon");
      positive(c.dt_paths, "dt_paths");
      if (c.report_every < 1) d.push_back("report_every must be at least 1");
      if (c.x0 == 0.0 && c.y0 == 0.0) d.push_back("(x0, y0) must not be the origin");
      if (d.empty() && !is_multiple(c.horizon, c.dt_paths)) d.push_back("dt_paths must divide horizon");
      break;
    }
    case ExperimentType::coefficient_table: {
      if (!std::isfinite(c.epsilon)) d.push_back("epsilon must be finite");
      if (c.table_theta1.empty() || c.table_theta2.empty()) d.push_back("table grids must not be empty");
      for (double s : c.table_theta2)
        if (!(s > c.theta_min)) {
          d.push_back("table_theta2 values must exceed theta_min");
          break;
        }
      if (!(c.theta_min > 0.0)) d.push_back("theta_min must be positive");
      if (c.quadrature_nodes < 20) d.push_back("quadrature_nodes must be at least 20");
      break;
    }
  }
  return d;
}

}  // namespace sdeproj
