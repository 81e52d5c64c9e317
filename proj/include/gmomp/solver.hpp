#pragma once

#include <Eigen/Dense>

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <limits>
#include <optional>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

#include "gmomp/dictionary.hpp"
#include "gmomp/error.hpp"
#include "gmomp/feasibility.hpp"
#include "gmomp/parallel.hpp"
#include "gmomp/spaces.hpp"

namespace gmomp {

// Relative correlation floor used when StopCriteria::correlation_floor is
// unset: floor = kDefaultFloorRatio * (largest initial |D^T S| entry).
inline constexpr double kDefaultFloorRatio = 1e-10;

struct StopCriteria {
  std::optional<std::size_t> max_iterations = 1;  // L; nullopt = unbounded
  double residual_tol = 0.0;                       // eps_R, Frobenius norm
  std::optional<double> correlation_floor;         // eps_C; relative default when unset
  std::optional<double> adaptive_beta;             // relative-correlation threshold in [0, 1]

  void validate() const {
    if (max_iterations && *max_iterations == 0) throw std::invalid_argument("max_iterations must be positive");
    if (std::isnan(residual_tol) || residual_tol < 0.0) throw std::invalid_argument("residual_tol must be >= 0");
    if (!max_iterations && !(residual_tol > 0.0))
      throw std::invalid_argument("an unbounded iteration count needs residual_tol > 0");
    if (correlation_floor && (std::isnan(*correlation_floor) || *correlation_floor < 0.0))
      throw std::invalid_argument("correlation_floor must be >= 0");
    if (adaptive_beta && !(*adaptive_beta >= 0.0 && *adaptive_beta <= 1.0))
      throw std::invalid_argument("adaptive_beta must lie in [0, 1]");
  }
};

struct Execution {
  std::size_t threads = 1;
};

// Data matrix (T x M) with the measurement point of every column.
class MeasurementMatrix {
 public:
  MeasurementMatrix(Eigen::MatrixXd data, PointSpace points) : data_(std::move(data)), points_(std::move(points)) {
    if (points_.size() != static_cast<std::size_t>(data_.cols()))
      throw DimensionError("measurement matrix has " + std::to_string(data_.cols()) + " columns but " +
                           std::to_string(points_.size()) + " measurement points");
  }
  // Measurement points 1..M on the line.
  explicit MeasurementMatrix(Eigen::MatrixXd data)
      : MeasurementMatrix(data, PointSpace::line(static_cast<std::size_t>(data.cols()))) {}

  const Eigen::MatrixXd& data() const { return data_; }
  const PointSpace& points() const { return points_; }
  std::size_t size() const { return static_cast<std::size_t>(data_.cols()); }

 private:
  Eigen::MatrixXd data_;
  PointSpace points_;
};

struct Solution {
  Eigen::MatrixXd coefficients;          // X, P x M
  std::vector<Pattern> patterns;         // J_1 .. J_L', one per iteration
  std::vector<double> residual_norms;    // ||R^l||_F after each iteration
  std::vector<double> weakness_trace;    // |C_ij| / ||C_.j||_inf of every selection
  bool stagnated = false;                // selection came back empty above eps_R

  Pattern support() const {
    Pattern s;
    for (const auto& p : patterns) s.merge(p);
    return s;
  }
  std::size_t nnz() const { return support().size(); }
};

struct OmpResult {
  Eigen::VectorXd coefficients;
  std::vector<std::size_t> support;  // in selection order
  std::vector<double> residual_norms;
};

struct LeastSquaresResult {
  Eigen::MatrixXd coefficients;  // P x M, zero off the support
  Eigen::MatrixXd residual;      // S - D X
};

namespace detail {

struct ColumnFit {
  Eigen::VectorXd weights;
  Eigen::VectorXd residual;
};

// min ||s - D_active y||_2, minimum-norm when D_active is rank deficient.
// Every solver routes through here so equal supports give bit-equal results.
inline ColumnFit fit_column(const Eigen::MatrixXd& atoms, const Eigen::VectorXd& s,
                            std::span<const std::size_t> active) {
  if (active.empty()) return {Eigen::VectorXd(), s};
  Eigen::MatrixXd sub(atoms.rows(), static_cast<Eigen::Index>(active.size()));
  for (std::size_t c = 0; c < active.size(); ++c)
    sub.col(static_cast<Eigen::Index>(c)) = atoms.col(static_cast<Eigen::Index>(active[c]));
  Eigen::CompleteOrthogonalDecomposition<Eigen::MatrixXd> cod(sub);
  Eigen::VectorXd y = cod.solve(s);
  Eigen::VectorXd r = s - sub * y;
  return {std::move(y), std::move(r)};
}

inline Eigen::VectorXd abs_correlations(const Eigen::MatrixXd& atoms, const Eigen::VectorXd& r) {
  return (atoms.transpose() * r).cwiseAbs();
}

inline double frobenius(const std::vector<double>& column_sq_norms) {
  double sum = 0.0;
  for (double v : column_sq_norms) sum += v;
  return std::sqrt(sum);
}

inline bool insert_sorted(std::vector<std::size_t>& v, std::size_t x) {
  auto it = std::lower_bound(v.begin(), v.end(), x);
  if (it != v.end() && *it == x) return false;
  v.insert(it, x);
  return true;
}

inline std::size_t iteration_cap(const StopCriteria& stop, std::size_t hard_cap) {
  return stop.max_iterations ? std::min(*stop.max_iterations, hard_cap) : hard_cap;
}

// Column-decoupled least-squares state shared by the MMV solvers.
class ColumnState {
 public:
  ColumnState(const Eigen::MatrixXd& atoms, const Eigen::MatrixXd& data)
      : atoms_(atoms),
        data_(data),
        active_(static_cast<std::size_t>(data.cols())),
        coefficients_(Eigen::MatrixXd::Zero(atoms.cols(), data.cols())),
        residual_(data),
        correlations_(atoms.cols(), data.cols()),
        sq_norms_(static_cast<std::size_t>(data.cols())) {
    for (Eigen::Index k = 0; k < data.cols(); ++k) {
      const Eigen::VectorXd r = residual_.col(k);
      sq_norms_[static_cast<std::size_t>(k)] = r.squaredNorm();
      correlations_.col(k) = abs_correlations(atoms_, r);
    }
  }

  bool add(Entry e) { return insert_sorted(active_[e.measurement], e.atom); }

  void refit(const std::vector<std::size_t>& columns, std::size_t threads) {
    parallel_for(columns.size(), threads, [&](std::size_t c) { refit_column(columns[c]); });
  }

  void refit_column(std::size_t k) {
    const auto col = static_cast<Eigen::Index>(k);
    const Eigen::VectorXd s = data_.col(col);
    const auto& active = active_[k];
    ColumnFit fit = fit_column(atoms_, s, active);
    coefficients_.col(col).setZero();
    for (std::size_t c = 0; c < active.size(); ++c)
      coefficients_(static_cast<Eigen::Index>(active[c]), col) = fit.weights(static_cast<Eigen::Index>(c));
    residual_.col(col) = fit.residual;
    sq_norms_[k] = fit.residual.squaredNorm();
    correlations_.col(col) = abs_correlations(atoms_, fit.residual);
  }

  const Eigen::MatrixXd& correlations() const { return correlations_; }
  const Eigen::MatrixXd& coefficients() const { return coefficients_; }
  const Eigen::MatrixXd& residual() const { return residual_; }
  double residual_norm() const { return frobenius(sq_norms_); }

 private:
  const Eigen::MatrixXd& atoms_;
  const Eigen::MatrixXd& data_;
  std::vector<std::vector<std::size_t>> active_;
  Eigen::MatrixXd coefficients_;
  Eigen::MatrixXd residual_;
  Eigen::MatrixXd correlations_;
  std::vector<double> sq_norms_;
};

inline double resolve_floor(const StopCriteria& stop, double initial_max) {
  return stop.correlation_floor ? *stop.correlation_floor : kDefaultFloorRatio * initial_max;
}

inline void check_dictionary_data(const Dictionary& dict, const Eigen::MatrixXd& data) {
  if (static_cast<std::size_t>(data.rows()) != dict.samples())
    throw DimensionError("data has " + std::to_string(data.rows()) + " samples but dictionary atoms have " +
                         std::to_string(dict.samples()));
}

}  // namespace detail

// Per-column least squares on the given (atom, measurement) support.
inline LeastSquaresResult restricted_least_squares(const Dictionary& dict, const Eigen::MatrixXd& data,
                                                   const Pattern& support, Execution exec = {}) {
  detail::check_dictionary_data(dict, data);
  detail::check_pattern(support, static_cast<std::size_t>(data.cols()), dict.size());
  std::vector<std::vector<std::size_t>> active(static_cast<std::size_t>(data.cols()));
  for (const auto& e : support) active[e.measurement].push_back(e.atom);  // entries are sorted by atom

  LeastSquaresResult out{Eigen::MatrixXd::Zero(dict.atoms().cols(), data.cols()), data};
  parallel_for(active.size(), exec.threads, [&](std::size_t k) {
    const auto col = static_cast<Eigen::Index>(k);
    const Eigen::VectorXd s = data.col(col);
    auto& a = active[k];
    std::sort(a.begin(), a.end());
    auto fit = detail::fit_column(dict.atoms(), s, a);
    for (std::size_t c = 0; c < a.size(); ++c)
      out.coefficients(static_cast<Eigen::Index>(a[c]), col) = fit.weights(static_cast<Eigen::Index>(c));
    out.residual.col(col) = fit.residual;
  });
  return out;
}

// Orthogonal matching pursuit on a single vector: pick the atom most
// correlated with the residual (lowest index on ties), refit on the support,
// repeat until L atoms, ||r|| <= eps_R, or no correlation above eps_C.
inline OmpResult omp(const Dictionary& dict, const Eigen::VectorXd& signal, const StopCriteria& stop) {
  stop.validate();
  if (static_cast<std::size_t>(signal.size()) != dict.samples())
    throw DimensionError("signal has " + std::to_string(signal.size()) + " samples but dictionary atoms have " +
                         std::to_string(dict.samples()));
  const Eigen::MatrixXd& atoms = dict.atoms();
  const Eigen::VectorXd s = signal;

  OmpResult out{Eigen::VectorXd::Zero(atoms.cols()), {}, {}};
  Eigen::VectorXd c = detail::abs_correlations(atoms, s);
  const double floor = detail::resolve_floor(stop, c.size() ? c.maxCoeff() : 0.0);
  std::vector<std::size_t> active;
  Eigen::VectorXd weights;
  const std::size_t cap = detail::iteration_cap(stop, dict.size());
  double rnorm = s.norm();

  while (out.support.size() < cap && rnorm > stop.residual_tol) {
    Eigen::Index best = 0;
    for (Eigen::Index j = 1; j < c.size(); ++j)
      if (c(j) > c(best)) best = j;
    if (c.size() == 0 || !(c(best) > floor)) break;
    const auto j = static_cast<std::size_t>(best);
    if (!detail::insert_sorted(active, j)) break;
    out.support.push_back(j);
    auto fit = detail::fit_column(atoms, s, active);
    weights = std::move(fit.weights);
    rnorm = fit.residual.norm();
    out.residual_norms.push_back(rnorm);
    c = detail::abs_correlations(atoms, fit.residual);
  }
  for (std::size_t a = 0; a < active.size(); ++a)
    out.coefficients(static_cast<Eigen::Index>(active[a])) = weights(static_cast<Eigen::Index>(a));
  return out;
}

// OMP run independently on every column. The default correlation floor is
// taken from the whole matrix so the result matches gm_omp with
// (sigma, tau) = (inf, inf).
inline Solution column_omp(const Dictionary& dict, const Eigen::MatrixXd& data, StopCriteria stop,
                           Execution exec = {}) {
  stop.validate();
  detail::check_dictionary_data(dict, data);
  if (!stop.correlation_floor) {
    double initial = 0.0;
    for (Eigen::Index k = 0; k < data.cols(); ++k) {
      const Eigen::VectorXd s = data.col(k);
      const Eigen::VectorXd c = detail::abs_correlations(dict.atoms(), s);
      if (c.size()) initial = std::max(initial, c.maxCoeff());
    }
    stop.correlation_floor = kDefaultFloorRatio * initial;
  }

  const auto m = static_cast<std::size_t>(data.cols());
  std::vector<OmpResult> columns(m);
  parallel_for(m, exec.threads, [&](std::size_t k) {
    columns[k] = omp(dict, data.col(static_cast<Eigen::Index>(k)), stop);
  });

  Solution sol;
  sol.coefficients = Eigen::MatrixXd::Zero(dict.atoms().cols(), data.cols());
  std::size_t iterations = 0;
  for (std::size_t k = 0; k < m; ++k) {
    sol.coefficients.col(static_cast<Eigen::Index>(k)) = columns[k].coefficients;
    iterations = std::max(iterations, columns[k].support.size());
  }
  for (std::size_t l = 0; l < iterations; ++l) {
    Pattern p;
    double sq = 0.0;
    for (std::size_t k = 0; k < m; ++k) {
      const auto& col = columns[k];
      if (l < col.support.size()) {
        p.insert({col.support[l], k});
        sol.weakness_trace.push_back(1.0);
      }
      const double r = col.residual_norms.empty()
                           ? data.col(static_cast<Eigen::Index>(k)).norm()
                           : col.residual_norms[std::min(l, col.residual_norms.size() - 1)];
      sq += r * r;
    }
    sol.patterns.push_back(std::move(p));
    sol.residual_norms.push_back(std::sqrt(sq));
  }
  return sol;
}

// Precomputed distance tables for repeated structured selections.
class SelectionGeometry {
 public:
  SelectionGeometry(const PointSpace& mspace, const PointSpace& pspace)
      : measurement_(mspace), parameter_(pspace) {}

  const PairwiseDistances& measurement() const { return measurement_; }
  const PairwiseDistances& parameter() const { return parameter_; }
  std::size_t measurements() const { return measurement_.size(); }
  std::size_t atoms() const { return parameter_.size(); }

 private:
  PairwiseDistances measurement_;
  PairwiseDistances parameter_;
};

struct GreedyOptions {
  FeasibleParams params;
  double floor = 0.0;                      // eps_C
  std::optional<double> beta;              // keep entries with C_jk / col_max_k > beta
  std::optional<Eigen::VectorXd> col_max;  // ||(D^T R)_{.,k}||_inf, required with beta
};

// Structured greedy selection on C = |D^T R| (P x M). Repeatedly takes the
// largest remaining entry among candidate measurements K, adds it to the
// pattern, zeroes every entry that would break the Lipschitz condition
// against the pattern, and grows K by the measurements within sigma of the
// new pick. Ties go to the lowest (atom, measurement). Entries at or below
// the floor are never selected.
inline Pattern greedy_choice(const Eigen::MatrixXd& correlations, const SelectionGeometry& geometry,
                             const GreedyOptions& options) {
  const Eigen::Index atoms = correlations.rows();
  const Eigen::Index measurements = correlations.cols();
  if (static_cast<std::size_t>(atoms) != geometry.atoms() ||
      static_cast<std::size_t>(measurements) != geometry.measurements())
    throw DimensionError("correlation matrix is " + std::to_string(atoms) + "x" + std::to_string(measurements) +
                         " but spaces hold " + std::to_string(geometry.atoms()) + " atoms and " +
                         std::to_string(geometry.measurements()) + " measurements");
  if (options.beta && !options.col_max) throw std::invalid_argument("beta threshold requires column maxima");
  if (options.col_max && options.col_max->size() != measurements)
    throw DimensionError("column maxima length does not match the correlation matrix");
  if (!(correlations.array() >= 0.0).all()) throw std::invalid_argument("correlations must be non-negative");

  const double sigma = options.params.sigma;
  const double tau = options.params.tau;
  const auto& dm = geometry.measurement();
  const auto& dp = geometry.parameter();

  Eigen::MatrixXd work = (correlations.array() > options.floor).select(correlations, 0.0);

  auto argmax = [&](const std::vector<char>& candidate, Eigen::Index& bj, Eigen::Index& bk) {
    double best = 0.0;
    bj = -1;
    bk = -1;
    for (Eigen::Index k = 0; k < measurements; ++k) {
      if (!candidate[static_cast<std::size_t>(k)]) continue;
      for (Eigen::Index j = 0; j < atoms; ++j) {
        const double v = work(j, k);
        if (v > best || (v == best && v > 0.0 && j < bj)) {
          best = v;
          bj = j;
          bk = k;
        }
      }
    }
    return best;
  };

  std::vector<char> candidate(static_cast<std::size_t>(measurements), 1);

  if (options.beta) {
    // The overall maximum has relative correlation 1 and always stays
    // admissible, so every selection that finds an entry above the floor
    // picks at least one pair.
    Eigen::Index gj, gk;
    argmax(candidate, gj, gk);
    for (Eigen::Index k = 0; k < measurements; ++k) {
      const double cmax = (*options.col_max)(k);
      for (Eigen::Index j = 0; j < atoms; ++j) {
        if (work(j, k) == 0.0 || (j == gj && k == gk)) continue;
        if (!(cmax > 0.0) || !(correlations(j, k) / cmax > *options.beta)) work(j, k) = 0.0;
      }
    }
  }

  Pattern pattern;
  bool first = true;
  for (;;) {
    Eigen::Index j, k;
    argmax(candidate, j, k);
    if (j < 0) break;
    const Entry picked{static_cast<std::size_t>(j), static_cast<std::size_t>(k)};
    pattern.insert(picked);
    work(j, k) = 0.0;

    for (Eigen::Index k2 = 0; k2 < measurements; ++k2) {
      const double d = dm(picked.measurement, static_cast<std::size_t>(k2));
      if (k2 == k || d == 0.0) {
        for (Eigen::Index j2 = 0; j2 < atoms; ++j2)
          if (j2 != j) work(j2, k2) = 0.0;
        continue;
      }
      if (tau == kInfinity) continue;
      const double bound = lipschitz_bound(tau, d);
      for (Eigen::Index j2 = 0; j2 < atoms; ++j2)
        if (work(j2, k2) > 0.0 && dp(picked.atom, static_cast<std::size_t>(j2)) > bound) work(j2, k2) = 0.0;
    }

    if (first) {
      std::fill(candidate.begin(), candidate.end(), 0);
      first = false;
    }
    for (Eigen::Index k2 = 0; k2 < measurements; ++k2)
      if (dm(picked.measurement, static_cast<std::size_t>(k2)) <= sigma) candidate[static_cast<std::size_t>(k2)] = 1;
  }
  return pattern;
}

inline Pattern greedy_choice(const Eigen::MatrixXd& correlations, const PointSpace& mspace, const PointSpace& pspace,
                             const GreedyOptions& options) {
  return greedy_choice(correlations, SelectionGeometry(mspace, pspace), options);
}

// |C_jk| / ||C_.k||_inf for every entry of the pattern.
inline std::vector<double> selection_ratios(const Eigen::MatrixXd& correlations, const Pattern& pattern) {
  std::vector<double> out;
  out.reserve(pattern.size());
  for (const auto& e : pattern) {
    const auto k = static_cast<Eigen::Index>(e.measurement);
    const double cmax = correlations.col(k).maxCoeff();
    out.push_back(cmax > 0.0 ? correlations(static_cast<Eigen::Index>(e.atom), k) / cmax : 0.0);
  }
  return out;
}

// Generalized OMP for multiple measurements: each iteration adds one
// feasible pattern from greedy_choice to the support and refits every
// changed column.
inline Solution gm_omp(const Dictionary& dict, const MeasurementMatrix& data, const FeasibleParams& params,
                       const StopCriteria& stop, Execution exec = {}) {
  stop.validate();
  detail::check_dictionary_data(dict, data.data());
  const SelectionGeometry geometry(data.points(), dict.parameters());
  detail::ColumnState state(dict.atoms(), data.data());

  Solution sol;
  GreedyOptions options;
  options.params = params;
  options.beta = stop.adaptive_beta;
  const auto& c = state.correlations();
  options.floor = detail::resolve_floor(stop, c.size() ? c.maxCoeff() : 0.0);

  const std::size_t cap = detail::iteration_cap(stop, dict.size() * data.size());
  double rnorm = state.residual_norm();
  while (sol.patterns.size() < cap && rnorm > stop.residual_tol) {
    if (options.beta) options.col_max = Eigen::VectorXd(c.colwise().maxCoeff().transpose());
    Pattern pattern = greedy_choice(c, geometry, options);
    if (pattern.empty()) {
      sol.stagnated = true;
      break;
    }
    for (double r : selection_ratios(c, pattern)) sol.weakness_trace.push_back(r);

    std::vector<std::size_t> changed;
    for (const auto& e : pattern)
      if (state.add(e)) changed.push_back(e.measurement);
    std::sort(changed.begin(), changed.end());
    changed.erase(std::unique(changed.begin(), changed.end()), changed.end());
    state.refit(changed, exec.threads);

    rnorm = state.residual_norm();
    sol.residual_norms.push_back(rnorm);
    sol.patterns.push_back(std::move(pattern));
  }
  sol.coefficients = state.coefficients();
  return sol;
}

// OMP on the vectorized problem: one (atom, measurement) entry per
// iteration, the global maximum of |D^T R|.
inline Solution vectorized_omp(const Dictionary& dict, const Eigen::MatrixXd& data, const StopCriteria& stop,
                               Execution = {}) {
  stop.validate();
  detail::check_dictionary_data(dict, data);
  detail::ColumnState state(dict.atoms(), data);
  const auto& c = state.correlations();
  const double floor = detail::resolve_floor(stop, c.size() ? c.maxCoeff() : 0.0);

  Solution sol;
  const std::size_t cap = detail::iteration_cap(stop, dict.size() * static_cast<std::size_t>(data.cols()));
  double rnorm = state.residual_norm();
  while (sol.patterns.size() < cap && rnorm > stop.residual_tol) {
    Eigen::Index bj = -1, bk = -1;
    double best = floor;
    for (Eigen::Index k = 0; k < c.cols(); ++k)
      for (Eigen::Index j = 0; j < c.rows(); ++j)
        if (c(j, k) > best || (bj >= 0 && c(j, k) == best && j < bj)) {
          best = c(j, k);
          bj = j;
          bk = k;
        }
    if (bj < 0) {
      sol.stagnated = true;
      break;
    }
    const Entry e{static_cast<std::size_t>(bj), static_cast<std::size_t>(bk)};
    sol.weakness_trace.push_back(c(bj, bk) / c.col(bk).maxCoeff());
    state.add(e);
    state.refit_column(e.measurement);
    rnorm = state.residual_norm();
    sol.residual_norms.push_back(rnorm);
    sol.patterns.push_back(Pattern{e});
  }
  sol.coefficients = state.coefficients();
  return sol;
}

// Row-sparse MMV pursuit: each iteration adds the whole row with the largest
// lambda-norm of D^T R. lambda_norm = 1 is simultaneous OMP; kInfinity ranks
// rows by their largest entry. Lowest row wins ties.
inline Solution somp(const Dictionary& dict, const Eigen::MatrixXd& data, double lambda_norm, const StopCriteria& stop,
                     Execution exec = {}) {
  stop.validate();
  if (std::isnan(lambda_norm) || lambda_norm < 1.0) throw std::invalid_argument("lambda_norm must be >= 1");
  detail::check_dictionary_data(dict, data);
  detail::ColumnState state(dict.atoms(), data);
  const auto& c = state.correlations();
  const double floor = detail::resolve_floor(stop, c.size() ? c.maxCoeff() : 0.0);

  const auto m = static_cast<std::size_t>(data.cols());
  std::vector<std::size_t> all(m);
  for (std::size_t k = 0; k < m; ++k) all[k] = k;

  Solution sol;
  const std::size_t cap = detail::iteration_cap(stop, dict.size());
  double rnorm = state.residual_norm();
  while (sol.patterns.size() < cap && rnorm > stop.residual_tol) {
    if (c.size() == 0 || !(c.maxCoeff() > floor)) {
      sol.stagnated = true;
      break;
    }
    Eigen::Index row = 0;
    double best = -1.0;
    for (Eigen::Index j = 0; j < c.rows(); ++j) {
      double score;
      if (lambda_norm == kInfinity)
        score = c.row(j).maxCoeff();
      else if (lambda_norm == 1.0)
        score = c.row(j).sum();
      else
        score = std::pow(c.row(j).array().pow(lambda_norm).sum(), 1.0 / lambda_norm);
      if (score > best) {
        best = score;
        row = j;
      }
    }

    Pattern pattern;
    for (std::size_t k = 0; k < m; ++k) {
      const auto col = static_cast<Eigen::Index>(k);
      pattern.insert({static_cast<std::size_t>(row), k});
      if (c(row, col) > floor) sol.weakness_trace.push_back(c(row, col) / c.col(col).maxCoeff());
      state.add({static_cast<std::size_t>(row), k});
    }
    state.refit(all, exec.threads);
    rnorm = state.residual_norm();
    sol.residual_norms.push_back(rnorm);
    sol.patterns.push_back(std::move(pattern));
  }
  sol.coefficients = state.coefficients();
  return sol;
}

// Weakness parameter: smallest relative correlation over all selections.
inline double weakness(const Solution& sol) {
  if (sol.weakness_trace.empty()) throw std::invalid_argument("weakness of a solution without selections");
  return *std::min_element(sol.weakness_trace.begin(), sol.weakness_trace.end());
}

}  // namespace gmomp
