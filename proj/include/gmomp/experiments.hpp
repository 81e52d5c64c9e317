#pragma once

#include <Eigen/Dense>

#include <algorithm>
#include <array>
#include <cmath>
#include <cstddef>
#include <cstdint>
#include <numbers>
#include <random>
#include <stdexcept>
#include <string>
#include <vector>

#include "gmomp/analysis.hpp"
#include "gmomp/dictionary.hpp"
#include "gmomp/error.hpp"
#include "gmomp/parallel.hpp"
#include "gmomp/postprocess.hpp"
#include "gmomp/solver.hpp"

namespace gmomp {

enum class NoiseKind { uniform, bernoulli };

struct ExperimentConfig {
  std::size_t size = 256;            // N = P = M = T
  std::vector<double> levels;        // angles in degrees, or noise levels
  std::size_t trials = 1;
  std::uint64_t base_seed = 0;
  std::size_t threads = 1;

  double std_dev = std::sqrt(2.5);   // Gaussian dictionary width
  double sigma = 1.0;                // GM-OMP connectivity radius
  double tau = 1.0;                  // GM-OMP Lipschitz constant before noise adaptation
  double bernoulli_sigma = 6.0;      // GM-OMP radius in the Bernoulli experiment
  std::size_t gm_iterations = 1;
  std::size_t somp_iterations = 16;
  double somp_norm = 1.0;
  double relative_tol = 1e-9;        // eps_R as a fraction of ||S||_F
  int pattern_degree = 4;

  void validate(bool angles) const {
    if (size < 1) throw std::invalid_argument("experiment size must be >= 1");
    if (trials < 1) throw std::invalid_argument("trials must be >= 1");
    if (levels.empty()) throw std::invalid_argument("experiment needs at least one level");
    for (double v : levels) {
      if (!std::isfinite(v)) throw std::invalid_argument("experiment levels must be finite");
      if (angles && (v < 0.0 || v > 45.0)) throw std::invalid_argument("angles must lie in [0, 45] degrees");
      if (!angles && v < 0.0) throw std::invalid_argument("noise levels must be >= 0");
    }
    if (gm_iterations < 1 || somp_iterations < 1) throw std::invalid_argument("iteration counts must be >= 1");
    if (!(relative_tol >= 0.0)) throw std::invalid_argument("relative_tol must be >= 0");
    if (pattern_degree < 0) throw std::invalid_argument("pattern_degree must be >= 0");
    FeasibleParams(sigma, tau);
    FeasibleParams(bernoulli_sigma, tau);
  }
};

inline const std::vector<std::string>& experiment_methods() {
  static const std::vector<std::string> names{"omp", "vectorized-omp", "somp", "gm-omp"};
  return names;
}

struct ResultRow {
  std::string method;
  double parameter = 0.0;
  std::string metric;
  double value = 0.0;
};

struct ResultsTable {
  std::vector<ResultRow> rows;

  double value(const std::string& method, double parameter, const std::string& metric) const {
    for (const auto& r : rows)
      if (r.method == method && r.parameter == parameter && r.metric == metric) return r.value;
    throw std::out_of_range("no result for " + method + " / " + metric);
  }
};

inline long round_half_up(double x) { return static_cast<long>(std::floor(x + 0.5)); }

// One 1 per column j at row round(j tan xi), clamped to [1, N] (1-based).
inline Eigen::MatrixXd make_slope_matrix(std::size_t n, double xi_degrees) {
  if (!(xi_degrees >= 0.0 && xi_degrees <= 45.0)) throw std::invalid_argument("slope angle must lie in [0, 45]");
  const auto size = static_cast<Eigen::Index>(n);
  Eigen::MatrixXd x = Eigen::MatrixXd::Zero(size, size);
  const double slope = xi_degrees == 45.0 ? 1.0 : std::tan(xi_degrees * std::numbers::pi / 180.0);
  for (Eigen::Index j = 1; j <= size; ++j) {
    const long i = std::clamp(round_half_up(static_cast<double>(j) * slope), 1L, static_cast<long>(size));
    x(i - 1, j - 1) = 1.0;
  }
  return x;
}

namespace detail {

inline Eigen::Index single_row(const Eigen::MatrixXd& x, Eigen::Index col) {
  Eigen::Index row = -1;
  for (Eigen::Index i = 0; i < x.rows(); ++i)
    if (x(i, col) != 0.0) {
      if (row >= 0) throw std::invalid_argument("column " + std::to_string(col) + " is not 1-sparse");
      row = i;
    }
  return row;
}

}  // namespace detail

// Moves each column's nonzero by round(u), u ~ U[-eps_u, eps_u], clamped to
// the row range. One draw per column, zero columns included.
inline Eigen::MatrixXd add_uniform_pattern_noise(const Eigen::MatrixXd& x, double eps_u, std::uint64_t seed) {
  if (!(eps_u >= 0.0) || !std::isfinite(eps_u)) throw std::invalid_argument("eps_u must be finite and >= 0");
  Eigen::MatrixXd out = Eigen::MatrixXd::Zero(x.rows(), x.cols());
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> shift(-eps_u, eps_u);
  for (Eigen::Index k = 0; k < x.cols(); ++k) {
    const Eigen::Index row = detail::single_row(x, k);
    const long d = eps_u > 0.0 ? round_half_up(shift(rng)) : 0L;
    if (row < 0) continue;
    const long moved = std::clamp(static_cast<long>(row) + d, 0L, static_cast<long>(x.rows()) - 1);
    out(moved, k) = x(row, k);
  }
  return out;
}

// Zeroes each column's nonzero with probability eps_b.
inline Eigen::MatrixXd add_bernoulli_pattern_noise(const Eigen::MatrixXd& x, double eps_b, std::uint64_t seed) {
  if (!(eps_b >= 0.0 && eps_b <= 1.0)) throw std::invalid_argument("eps_b must lie in [0, 1]");
  Eigen::MatrixXd out = x;
  std::mt19937_64 rng(seed);
  std::bernoulli_distribution drop(eps_b);
  for (Eigen::Index k = 0; k < x.cols(); ++k) {
    const Eigen::Index row = detail::single_row(x, k);
    const bool d = drop(rng);
    if (row >= 0 && d) out(row, k) = 0.0;
  }
  return out;
}

inline double mse(const Eigen::MatrixXd& a, const Eigen::MatrixXd& b) {
  if (a.rows() != b.rows() || a.cols() != b.cols()) throw DimensionError("mse needs equally shaped matrices");
  if (a.size() == 0) return 0.0;
  return (a - b).squaredNorm() / static_cast<double>(a.size());
}

namespace detail {

struct MethodRuns {
  Solution omp, vectorized, somp, gm;
};

inline MethodRuns run_methods(const Dictionary& dict, const Eigen::MatrixXd& s, const ExperimentConfig& cfg,
                              const FeasibleParams& params) {
  const double tol = cfg.relative_tol * s.norm();
  const std::size_t n = dict.size() * static_cast<std::size_t>(s.cols());
  MethodRuns r;
  r.omp = column_omp(dict, s, StopCriteria{dict.size(), tol, {}, {}});
  r.vectorized = vectorized_omp(dict, s, StopCriteria{n, tol, {}, {}});
  r.somp = somp(dict, s, cfg.somp_norm, StopCriteria{cfg.somp_iterations, tol, {}, {}});
  r.gm = gm_omp(dict, MeasurementMatrix(s), params, StopCriteria{cfg.gm_iterations, tol, {}, {}});
  return r;
}

// Pattern denoising followed by moving the amplitudes onto the new atoms.
inline Eigen::MatrixXd denoised_estimate(const Solution& sol, const PointSpace& mspace, const PointSpace& pspace,
                                         int degree) {
  Eigen::MatrixXd x = sol.coefficients;
  for (const auto& p : sol.patterns) {
    if (p.empty()) continue;
    x = relocate_amplitudes(std::move(x), p, denoise_pattern(p, mspace, pspace, degree));
  }
  return x;
}

struct Moments {
  double mean = 0.0;
  double standard_error = 0.0;
};

// Summed in trial order for reproducibility.
inline Moments moments(const std::vector<double>& v) {
  Moments m;
  const auto n = static_cast<double>(v.size());
  for (double x : v) m.mean += x;
  m.mean /= n;
  if (v.size() > 1) {
    double ss = 0.0;
    for (double x : v) ss += (x - m.mean) * (x - m.mean);
    m.standard_error = std::sqrt(ss / (n - 1.0) / n);
  }
  return m;
}

}  // namespace detail

// Slope sweep: per angle, relative and absolute Frobenius error and nnz of
// every method's estimate.
inline ResultsTable run_slope_sweep(const ExperimentConfig& cfg) {
  cfg.validate(true);
  const Dictionary dict = gaussian_conv_dictionary(cfg.size, cfg.std_dev);
  const FeasibleParams params(cfg.sigma, cfg.tau);

  std::vector<detail::MethodRuns> runs(cfg.levels.size());
  std::vector<Eigen::MatrixXd> truth(cfg.levels.size());
  parallel_for(cfg.levels.size(), cfg.threads, [&](std::size_t a) {
    truth[a] = make_slope_matrix(cfg.size, cfg.levels[a]);
    runs[a] = detail::run_methods(dict, dict.atoms() * truth[a], cfg, params);
  });

  ResultsTable table;
  for (std::size_t a = 0; a < cfg.levels.size(); ++a) {
    const Solution* sols[] = {&runs[a].omp, &runs[a].vectorized, &runs[a].somp, &runs[a].gm};
    const double xnorm = truth[a].norm();
    for (std::size_t m = 0; m < 4; ++m) {
      const double err = (truth[a] - sols[m]->coefficients).norm();
      const auto& name = experiment_methods()[m];
      table.rows.push_back({name, cfg.levels[a], "error", err});
      table.rows.push_back({name, cfg.levels[a], "relative_error", err / xnorm});
      table.rows.push_back({name, cfg.levels[a], "nnz", static_cast<double>(sols[m]->nnz())});
    }
  }
  return table;
}

// Pattern-noise benchmark: constant row ceil(N/2) under pattern noise, MSE against the
// clean matrix averaged over trials. GM-OMP is followed by pattern
// denoising; the Bernoulli run also reports how often the first pattern
// covers exactly the surviving columns.
inline ResultsTable run_noise_experiment(const ExperimentConfig& cfg, NoiseKind kind) {
  cfg.validate(false);
  if (kind == NoiseKind::bernoulli)
    for (double v : cfg.levels)
      if (v > 1.0) throw std::invalid_argument("Bernoulli levels must lie in [0, 1]");

  const Dictionary dict = gaussian_conv_dictionary(cfg.size, cfg.std_dev);
  const PointSpace mspace = PointSpace::line(cfg.size);
  const auto n = static_cast<Eigen::Index>(cfg.size);
  Eigen::MatrixXd clean = Eigen::MatrixXd::Zero(n, n);
  clean.row((n + 1) / 2 - 1).setOnes();

  const std::size_t levels = cfg.levels.size();
  const std::size_t jobs = levels * cfg.trials;
  std::vector<std::array<double, 4>> errors(jobs);
  std::vector<double> success(jobs, 0.0);

  parallel_for(jobs, cfg.threads, [&](std::size_t job) {
    const std::size_t level = job / cfg.trials;
    const std::size_t trial = job % cfg.trials;
    const double eps = cfg.levels[level];
    const std::uint64_t seed = cfg.base_seed + trial;

    Eigen::MatrixXd noised;
    FeasibleParams params;
    if (kind == NoiseKind::uniform) {
      noised = add_uniform_pattern_noise(clean, eps, seed);
      params = FeasibleParams(cfg.sigma, uniform_noise_tau(cfg.tau, eps, 1.0).tau_hat);
    } else {
      noised = add_bernoulli_pattern_noise(clean, eps, seed);
      params = FeasibleParams(cfg.bernoulli_sigma, cfg.tau);
    }
    const detail::MethodRuns r = detail::run_methods(dict, dict.atoms() * noised, cfg, params);
    const Eigen::MatrixXd gm = detail::denoised_estimate(r.gm, mspace, dict.parameters(), cfg.pattern_degree);
    errors[job] = {mse(clean, r.omp.coefficients), mse(clean, r.vectorized.coefficients),
                   mse(clean, r.somp.coefficients), mse(clean, gm)};

    if (kind == NoiseKind::bernoulli && !r.gm.patterns.empty()) {
      std::vector<std::size_t> alive;
      for (Eigen::Index k = 0; k < n; ++k)
        if (noised.col(k).any()) alive.push_back(static_cast<std::size_t>(k));
      success[job] = r.gm.patterns.front().measurements() == alive ? 1.0 : 0.0;
    }
  });

  ResultsTable table;
  for (std::size_t level = 0; level < levels; ++level) {
    const auto first = static_cast<std::ptrdiff_t>(level * cfg.trials);
    const auto last = first + static_cast<std::ptrdiff_t>(cfg.trials);
    for (std::size_t m = 0; m < 4; ++m) {
      std::vector<double> v;
      for (auto j = first; j < last; ++j) v.push_back(errors[static_cast<std::size_t>(j)][m]);
      const auto mo = detail::moments(v);
      table.rows.push_back({experiment_methods()[m], cfg.levels[level], "mse", mo.mean});
      table.rows.push_back({experiment_methods()[m], cfg.levels[level], "mse_se", mo.standard_error});
    }
    if (kind == NoiseKind::bernoulli) {
      const auto mo = detail::moments(std::vector<double>(success.begin() + first, success.begin() + last));
      table.rows.push_back({"gm-omp", cfg.levels[level], "success", mo.mean});
      table.rows.push_back({"gm-omp", cfg.levels[level], "success_se", mo.standard_error});
    }
  }
  return table;
}

}  // namespace gmomp
