#include "sdeproj/experiment.hpp"

#include <atomic>
#include <cmath>
#include <cstdio>
#include <exception>
#include <fstream>
#include <memory>
#include <mutex>
#include <thread>

#include "sdeproj/errors.hpp"
#include "sdeproj/ks_solver.hpp"

namespace sdeproj {

std::string format_double(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

namespace {

std::vector<double> coarsen(const std::vector<double>& inc, long factor) {
  std::vector<double> out(inc.size() / factor, 0.0);
  for (std::size_t k = 0; k < out.size(); ++k)
    for (long j = 0; j < factor; ++j) out[k] += inc[k * factor + j];
  return out;
}

long ratio(double big, double small) { return std::lround(big / small); }

std::string join(std::initializer_list<std::string> parts) {
  std::string s;
  for (const auto& p : parts) {
    if (!s.empty()) s += ',';
    s += p;
  }
  return s;
}

bool is_projection_kind(FilterKind k) { return k != FilterKind::ekf && k != FilterKind::ito_adf; }

NumericCoefficientSpec numeric_counterpart(FilterKind k, int nodes) {
  NumericCoefficientSpec s;
  s.quadrature.n_nodes = nodes;
  switch (k) {
    case FilterKind::vec_l2: s.metric = DensityMetric::l2; s.kind = ProjectionKind::ito_vector; break;
    case FilterKind::vec_hellinger: s.metric = DensityMetric::hellinger; s.kind = ProjectionKind::ito_vector; break;
    case FilterKind::jet_l2: s.metric = DensityMetric::l2; s.kind = ProjectionKind::ito_jet; break;
    case FilterKind::jet_hellinger: s.metric = DensityMetric::hellinger; s.kind = ProjectionKind::ito_jet; break;
    case FilterKind::strat_l2: s.metric = DensityMetric::l2; s.kind = ProjectionKind::stratonovich; break;
    case FilterKind::strat_hellinger: s.metric = DensityMetric::hellinger; s.kind = ProjectionKind::stratonovich; break;
    // No projection matches these two exactly; compare with the nearest one.
    case FilterKind::ekf: s.metric = DensityMetric::l2; s.kind = ProjectionKind::ito_vector; break;
    case FilterKind::ito_adf: s.metric = DensityMetric::hellinger; s.kind = ProjectionKind::ito_jet; break;
  }
  return s;
}

struct SeedResult {
  std::vector<std::string> rows;
  std::vector<std::string> extra_rows;
  std::string error;
  bool numerical = false;
};

/// Runs fn for every seed on a small pool; results stay in seed order.
template <class Fn>
std::vector<SeedResult> for_each_seed(const std::vector<std::uint64_t>& seeds, int jobs, std::ostream* log, Fn fn) {
  std::vector<SeedResult> results(seeds.size());
  std::atomic<std::size_t> next{0};
  std::mutex log_mutex;
  auto worker = [&] {
    for (std::size_t i = next++; i < seeds.size(); i = next++) {
      try {
        fn(seeds[i], results[i]);
      } catch (const NumericalBlowupError& e) {
        results[i].error = e.what();
        results[i].numerical = true;
      } catch (const DegenerateStateError& e) {
        results[i].error = e.what();
        results[i].numerical = true;
      } catch (const std::exception& e) {
        results[i].error = e.what();
      }
      if (log) {
        std::lock_guard<std::mutex> lock(log_mutex);
        *log << "seed " << seeds[i] << ": "
             << (results[i].error.empty() ? std::to_string(results[i].rows.size()) + " rows"
                                          : "failed: " + results[i].error)
             << "\n";
      }
    }
  };
  const int n = std::max(1, std::min<int>(jobs, static_cast<int>(seeds.size())));
  if (n == 1) {
    worker();
  } else {
    std::vector<std::thread> pool;
    for (int j = 0; j < n; ++j) pool.emplace_back(worker);
    for (auto& t : pool) t.join();
  }
  return results;
}

class CsvFile {
 public:
  CsvFile(const std::filesystem::path& path, const std::string& header) : path_(path), out_(path) {
    if (!out_) throw ConfigError("cannot write " + path.string());
    out_ << header << "\n";
  }
  void row(const std::string& r) {
    out_ << r << "\n";
    ++rows_;
  }
  long rows() const { return rows_; }
  const std::filesystem::path& path() const { return path_; }

 private:
  std::filesystem::path path_;
  std::ofstream out_;
  long rows_ = 0;
};

/// Writes buffered seed results in seed order and folds failures into the outcome.
void flush(const std::vector<SeedResult>& results, const std::vector<std::uint64_t>& seeds, CsvFile& main,
           CsvFile* extra, RunOutcome& outcome) {
  std::string failures;
  bool numerical = false, other = false;
  for (std::size_t i = 0; i < results.size(); ++i) {
    if (!results[i].error.empty()) {
      failures += "seed " + std::to_string(seeds[i]) + ": " + results[i].error + "; ";
      (results[i].numerical ? numerical : other) = true;
      continue;
    }
    for (const auto& r : results[i].rows) main.row(r);
    if (extra)
      for (const auto& r : results[i].extra_rows) extra->row(r);
  }
  outcome.rows_written += main.rows() + (extra ? extra->rows() : 0);
  if (numerical || other) {
    outcome.exit_code = other ? 2 : 3;
    outcome.message = failures + std::to_string(outcome.rows_written) + " rows written";
  }
}

}  // namespace

std::vector<std::string> filter_comparison_rows(const ExperimentConfig& c, std::uint64_t seed) {
  const FilterModel model = FilterModel::cubic_sensor(c.epsilon);
  const double x0 = c.prior_mean + c.prior_sd * standard_normal(NoiseSource{seed, 1}, 0, 0);
  const ObservationRecord record = simulate_signal_observation(model, x0, c.horizon, c.dt_fd, NoiseSource{seed, 0});
  const long filter_factor = ratio(c.dt_filter, c.dt_fd);
  ObservationRecord filter_record;
  filter_record.dt = c.dt_filter;
  filter_record.increments = coarsen(record.increments, filter_factor);

  const GaussianParams theta0{c.prior_mean, c.prior_sd};
  FilterOptions fopt;
  fopt.theta_min = c.theta_min;
  std::vector<FilterRun> runs;
  for (FilterKind k : c.kinds) {
    CoefficientSource src = k;
    if (c.numeric_coefficients && is_projection_kind(k)) src = numeric_counterpart(k, c.quadrature_nodes);
    runs.push_back(run_filter(src, model, filter_record, theta0, fopt));
  }

  std::vector<std::string> rows;
  DensityGrid p = DensityGrid::from_gaussian(c.x_min, c.x_max, c.n_cells, theta0);
  const long report_stride = filter_factor * c.report_every;
  const std::string seed_s = std::to_string(seed);
  for (std::size_t k = 0; k < record.increments.size(); ++k) {
    p = ks_fd_step(p, model, static_cast<double>(k) * c.dt_fd, c.dt_fd, record.increments[k]);
    const long done = static_cast<long>(k) + 1;
    if (done % report_stride != 0) continue;
    const std::size_t j = static_cast<std::size_t>(done / filter_factor);
    const std::string t = format_double(static_cast<double>(done) * c.dt_fd);
    for (std::size_t i = 0; i < c.kinds.size(); ++i) {
      const GaussianParams& th = runs[i].thetas[j];
      for (DensityMetric m : c.metrics) {
        const double res = m == DensityMetric::l2 ? l2_residual(p, th) : hellinger_residual(p, th);
        rows.push_back(join({"filter-comparison", seed_s, t, to_string(c.kinds[i]), to_string(m), format_double(res)}));
      }
    }
  }
  return rows;
}

namespace {

/// L2 distance between the reference density and one computed on a grid
/// twice as fine with a quarter of the time step, at each report time.
std::vector<std::string> fd_self_check_rows(const ExperimentConfig& c, std::uint64_t seed) {
  const FilterModel model = FilterModel::cubic_sensor(c.epsilon);
  const double x0 = c.prior_mean + c.prior_sd * standard_normal(NoiseSource{seed, 1}, 0, 0);
  const double fine_dt = c.dt_fd / 4.0;
  const ObservationRecord fine = simulate_signal_observation(model, x0, c.horizon, fine_dt, NoiseSource{seed, 2});
  const std::vector<double> coarse_inc = coarsen(fine.increments, 4);
  const GaussianParams theta0{c.prior_mean, c.prior_sd};
  DensityGrid p = DensityGrid::from_gaussian(c.x_min, c.x_max, c.n_cells, theta0);
  DensityGrid q = DensityGrid::from_gaussian(c.x_min, c.x_max, 2 * c.n_cells, theta0);
  const long stride = ratio(c.dt_filter, c.dt_fd) * c.report_every;
  std::vector<std::string> rows;
  for (std::size_t k = 0; k < coarse_inc.size(); ++k) {
    const double t = static_cast<double>(k) * c.dt_fd;
    p = ks_fd_step(p, model, t, c.dt_fd, coarse_inc[k]);
    for (int s = 0; s < 4; ++s) q = ks_fd_step(q, model, t + s * fine_dt, fine_dt, fine.increments[4 * k + s]);
    const long done = static_cast<long>(k) + 1;
    if (done % stride != 0) continue;
    Vector diff(p.n_cells + 1);
    for (int i = 0; i <= p.n_cells; ++i) diff(i) = std::pow(p.values(i) - q.values(2 * i), 2);
    const double l2 = std::sqrt(p.dx() * (diff.sum() - 0.5 * (diff(0) + diff(p.n_cells))));
    rows.push_back(join({"fd-self-check", std::to_string(seed), format_double(static_cast<double>(done) * c.dt_fd),
                         format_double(l2)}));
  }
  return rows;
}

}  // namespace

RunOutcome run(const ExperimentConfig& c, const RunOptions& opt) {
  RunOutcome outcome;
  const auto diagnostics = validate(c);
  if (!diagnostics.empty()) {
    outcome.exit_code = 2;
    for (const auto& d : diagnostics) outcome.message += d + "; ";
    return outcome;
  }
  try {
    std::filesystem::create_directories(opt.output_dir);
    const auto path = [&](const std::string& name) { return opt.output_dir / name; };
    switch (c.experiment) {
      case ExperimentType::filter_comparison: {
        CsvFile csv(path("filter_comparison.csv"), "experiment,seed,t,kind,metric,residual");
        std::unique_ptr<CsvFile> self;
        if (c.fd_self_check) self = std::make_unique<CsvFile>(path("fd_self_check.csv"), "experiment,seed,t,l2_difference");
        const auto results = for_each_seed(c.seeds, opt.jobs, opt.log, [&](std::uint64_t seed, SeedResult& r) {
          r.rows = filter_comparison_rows(c, seed);
          if (c.fd_self_check) r.extra_rows = fd_self_check_rows(c, seed);
        });
        flush(results, c.seeds, csv, self.get(), outcome);
        outcome.files.push_back(csv.path());
        if (self) outcome.files.push_back(self->path());
        break;
      }
      case ExperimentType::order_check: {
        CsvFile csv(path("order_check.csv"), "experiment,seed,kind,t,ambient_mse,tracking_mse,n_paths,n_blowups");
        CsvFile slopes(path("order_check_slopes.csv"), "experiment,seed,kind,ambient_slope,tracking_slope,total_blowups");
        AmbientSde planar = c.order_sde == "generic" ? AffinePlanarSde{}.sde()
                                                     : cross_diffusion_sde(CrossDiffusionSpec{c.sigma, 1.0, 0.0});
        // Paths are split across workers inside each run; seeds run in order.
        const auto results = for_each_seed(c.seeds, 1, opt.log, [&](std::uint64_t seed, SeedResult& r) {
          for (ProjectionKind k : c.order_kinds) {
            MseGrowthOptions mo;
            mo.t_levels = c.order_t_levels;
            mo.n_paths = c.order_paths;
            mo.substeps = c.order_substeps;
            mo.seed = seed;
            mo.theta0 = c.order_theta0;
            mo.jobs = opt.jobs;
            const auto res = mse_growth_experiment(k, planar, mo);
            for (const auto& row : res.rows)
              r.rows.push_back(join({"order-check", std::to_string(seed), to_string(k), format_double(row.t),
                                     format_double(row.ambient_mse), format_double(row.tracking_mse),
                                     std::to_string(row.n_paths), std::to_string(row.n_blowups)}));
            r.extra_rows.push_back(join({"order-check", std::to_string(seed), to_string(k),
                                         format_double(res.ambient_slope), format_double(res.tracking_slope),
                                         std::to_string(res.total_blowups)}));
          }
        });
        flush(results, c.seeds, csv, &slopes, outcome);
        outcome.files.push_back(csv.path());
        outcome.files.push_back(slopes.path());
        break;
      }
      case ExperimentType::cross_diffusion_paths: {
        CsvFile csv(path("cross_diffusion_paths.csv"), "experiment,seed,t,x,y,theta");
        const CrossDiffusionSpec spec{c.sigma, c.x0, c.y0};
        const long n = ratio(c.horizon, c.dt_paths);
        const auto results = for_each_seed(c.seeds, opt.jobs, opt.log, [&](std::uint64_t seed, SeedResult& r) {
          const Matrix inc = brownian_increments(NoiseSource{seed, 0}, 1, n, c.dt_paths);
          double w = 0.0;
          for (long k = 0; k <= n; ++k) {
            if (k > 0) w += inc(k - 1, 0);
            if (k % c.report_every != 0) continue;
            const double t = static_cast<double>(k) * c.dt_paths;
            const Eigen::Vector2d xy = exact_solution(spec, w, t);
            r.rows.push_back(join({"cross-diffusion-paths", std::to_string(seed), format_double(t),
                                   format_double(xy(0)), format_double(xy(1)),
                                   format_double(std::atan2(xy(1), xy(0)))}));
          }
        });
        flush(results, c.seeds, csv, nullptr, outcome);
        outcome.files.push_back(csv.path());
        break;
      }
      case ExperimentType::coefficient_table: {
        CsvFile csv(path("coefficient_table.csv"),
                    "experiment,kind,reference,theta1,theta2,A1,A2,B1,B2,ref_A1,ref_A2,ref_B1,ref_B2,rel_error");
        CsvFile summary(path("coefficient_table_summary.csv"), "experiment,scope,max_rel_error");
        const FilterModel model = FilterModel::cubic_sensor(c.epsilon);
        double max_proj = 0.0, max_all = 0.0;
        for (FilterKind k : c.kinds) {
          const NumericCoefficientSpec ref = numeric_counterpart(k, c.quadrature_nodes);
          for (double t1 : c.table_theta1)
            for (double t2 : c.table_theta2) {
              const GaussianParams th{t1, t2};
              const FilterCoefficients a = closed_form_coefficients(k, th, c.epsilon);
              const FilterCoefficients b = filter_coefficients(ref, th, model, 0.0);
              Eigen::Vector4d va, vb;
              va << a.drift, a.diffusion;
              vb << b.drift, b.diffusion;
              const double scale = vb.lpNorm<Eigen::Infinity>();
              const double err = (va - vb).lpNorm<Eigen::Infinity>() / (scale > 0.0 ? scale : 1.0);
              max_all = std::max(max_all, err);
              if (is_projection_kind(k)) max_proj = std::max(max_proj, err);
              csv.row(join({"coefficient-table", to_string(k), describe(ref), format_double(t1), format_double(t2),
                            format_double(va(0)), format_double(va(1)), format_double(va(2)), format_double(va(3)),
                            format_double(vb(0)), format_double(vb(1)), format_double(vb(2)), format_double(vb(3)),
                            format_double(err)}));
            }
        }
        summary.row(join({"coefficient-table", "projections", format_double(max_proj)}));
        summary.row(join({"coefficient-table", "all", format_double(max_all)}));
        outcome.rows_written = csv.rows() + summary.rows();
        outcome.files.push_back(csv.path());
        outcome.files.push_back(summary.path());
        outcome.message = "max relative error: projections " + format_double(max_proj) + ", all kinds " +
                          format_double(max_all);
        break;
      }
    }
  } catch (const ConfigError& e) {
    outcome.exit_code = 2;
    outcome.message = e.what();
  } catch (const NumericalBlowupError& e) {
    outcome.exit_code = 3;
    outcome.message = std::string(e.what()) + "; " + std::to_string(outcome.rows_written) + " rows written";
  } catch (const DegenerateStateError& e) {
    outcome.exit_code = 3;
    outcome.message = std::string(e.what()) + "; " + std::to_string(outcome.rows_written) + " rows written";
  } catch (const std::filesystem::filesystem_error& e) {
    outcome.exit_code = 2;
    outcome.message = e.what();
  }
  return outcome;
}

}  // namespace sdeproj
