#pragma once

#include <Eigen/Dense>

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <limits>
#include <map>
#include <stdexcept>
#include <string>
#include <vector>

#include "gmomp/error.hpp"
#include "gmomp/feasibility.hpp"
#include "gmomp/spaces.hpp"

namespace gmomp {

// Least-squares polynomial mapping measurement coordinates to parameter
// coordinates (or amplitudes) on a closed support interval.
struct FittedStructure {
  int degree = 0;
  std::vector<double> coefficients;  // ascending powers of x, original frame
  double lower = 0.0;                // support interval [lower, upper]
  double upper = 0.0;
  double residual = 0.0;             // root-sum-square error over fitted points
  bool rank_deficient = false;       // degree >= distinct abscissae; minimum-norm fit

  // Evaluation frame: u = (x - center) / scale lies in [-1, 1] on the fit data.
  double center = 0.0;
  double scale = 1.0;
  std::vector<double> scaled_coefficients;

  double operator()(double x) const {
    const double u = (x - center) / scale;
    double v = 0.0;
    for (auto it = scaled_coefficients.rbegin(); it != scaled_coefficients.rend(); ++it) v = v * u + *it;
    return v;
  }

  bool covers(double x) const { return x >= lower && x <= upper; }
};

namespace detail {

inline void require_1d(const PointSpace& space, const char* what) {
  if (space.dimension() != 1)
    throw DimensionError(std::string(what) + " space must be 1-dimensional for pattern denoising, got dimension " +
                         std::to_string(space.dimension()));
}

// Fit on affinely rescaled abscissae; coefficients converted back afterwards.
inline FittedStructure fit_polynomial(const std::vector<double>& x, const std::vector<double>& y, int degree) {
  if (degree < 0) throw std::invalid_argument("polynomial degree must be >= 0");
  if (x.empty() || x.size() != y.size()) throw std::invalid_argument("polynomial fit needs matching nonempty samples");
  const auto [lo_it, hi_it] = std::minmax_element(x.begin(), x.end());
  FittedStructure f;
  f.degree = degree;
  f.lower = *lo_it;
  f.upper = *hi_it;
  f.center = 0.5 * (f.lower + f.upper);
  f.scale = f.upper > f.lower ? 0.5 * (f.upper - f.lower) : 1.0;

  std::vector<double> distinct = x;
  std::sort(distinct.begin(), distinct.end());
  distinct.erase(std::unique(distinct.begin(), distinct.end()), distinct.end());
  f.rank_deficient = static_cast<std::size_t>(degree) >= distinct.size();

  const auto n = static_cast<Eigen::Index>(x.size());
  const Eigen::Index cols = degree + 1;
  Eigen::MatrixXd v(n, cols);
  Eigen::VectorXd rhs(n);
  for (Eigen::Index i = 0; i < n; ++i) {
    const double u = (x[static_cast<std::size_t>(i)] - f.center) / f.scale;
    double p = 1.0;
    for (Eigen::Index c = 0; c < cols; ++c, p *= u) v(i, c) = p;
    rhs(i) = y[static_cast<std::size_t>(i)];
  }
  const Eigen::VectorXd a = v.completeOrthogonalDecomposition().solve(rhs);
  f.residual = (v * a - rhs).norm();
  f.scaled_coefficients.assign(a.data(), a.data() + a.size());

  // sum_k a_k ((x - c) / h)^k expanded in powers of x.
  f.coefficients.assign(static_cast<std::size_t>(cols), 0.0);
  for (Eigen::Index k = 0; k < cols; ++k) {
    double binom = 1.0;  // C(k, i)
    for (Eigen::Index i = 0; i <= k; ++i) {
      f.coefficients[static_cast<std::size_t>(i)] +=
          a(k) * binom * std::pow(-f.center, static_cast<double>(k - i)) / std::pow(f.scale, static_cast<double>(k));
      binom = binom * static_cast<double>(k - i) / static_cast<double>(i + 1);
    }
  }
  return f;
}

inline double coordinate(const PointSpace& space, std::size_t i) {
  return space.coordinates()(static_cast<Eigen::Index>(i), 0);
}

}  // namespace detail

// Nearest parameter point to a coordinate; lowest index on ties.
inline std::size_t round_to_parameter(const Eigen::Ref<const Eigen::RowVectorXd>& value, const PointSpace& pspace) {
  if (pspace.size() == 0) throw std::invalid_argument("cannot round onto an empty parameter space");
  std::size_t best = 0;
  double best_d = pspace.distance_to(value, 0);
  for (std::size_t j = 1; j < pspace.size(); ++j) {
    const double d = pspace.distance_to(value, j);
    if (d < best_d) {
      best_d = d;
      best = j;
    }
  }
  return best;
}

inline std::size_t round_to_parameter(double value, const PointSpace& pspace) {
  Eigen::RowVectorXd v(1);
  v(0) = value;
  return round_to_parameter(v, pspace);
}

// Polynomial fit of p_j against m_i over the pattern. With delta = 0 the
// support is the hull of the pattern's measurement coordinates. With
// delta > 0 every interval between two pattern coordinates is scored by
// fit residual + delta * (measurement points inside) + penalty * (pattern
// points left outside), penalty being the pattern's parameter range (or the
// parameter grid spacing when that range is zero), and the best one kept.
inline FittedStructure fit_pattern_polynomial(const Pattern& pattern, const PointSpace& mspace,
                                              const PointSpace& pspace, int degree, double delta = 0.0) {
  detail::require_1d(mspace, "measurement");
  detail::require_1d(pspace, "parameter");
  if (pattern.empty()) throw std::invalid_argument("cannot fit an empty pattern");
  if (std::isnan(delta) || delta < 0.0) throw std::invalid_argument("delta must be >= 0");
  detail::check_pattern(pattern, mspace.size(), pspace.size());

  std::vector<double> xs, ys;
  for (const auto& e : pattern) {
    xs.push_back(detail::coordinate(mspace, e.measurement));
    ys.push_back(detail::coordinate(pspace, e.atom));
  }
  if (delta == 0.0) return detail::fit_polynomial(xs, ys, degree);

  const auto [ymin, ymax] = std::minmax_element(ys.begin(), ys.end());
  double penalty = *ymax - *ymin;
  if (penalty == 0.0) {
    std::vector<double> grid;
    for (std::size_t j = 0; j < pspace.size(); ++j) grid.push_back(detail::coordinate(pspace, j));
    std::sort(grid.begin(), grid.end());
    for (std::size_t j = 1; j < grid.size(); ++j)
      if (grid[j] > grid[j - 1] && (penalty == 0.0 || grid[j] - grid[j - 1] < penalty)) penalty = grid[j] - grid[j - 1];
  }

  std::vector<double> ends = xs;
  std::sort(ends.begin(), ends.end());
  ends.erase(std::unique(ends.begin(), ends.end()), ends.end());

  FittedStructure best;
  double best_score = std::numeric_limits<double>::infinity();
  for (std::size_t a = 0; a < ends.size(); ++a)
    for (std::size_t b = a; b < ends.size(); ++b) {
      std::vector<double> cx, cy;
      for (std::size_t i = 0; i < xs.size(); ++i)
        if (xs[i] >= ends[a] && xs[i] <= ends[b]) {
          cx.push_back(xs[i]);
          cy.push_back(ys[i]);
        }
      std::size_t inside = 0;
      for (std::size_t i = 0; i < mspace.size(); ++i) {
        const double x = detail::coordinate(mspace, i);
        if (x >= ends[a] && x <= ends[b]) ++inside;
      }
      FittedStructure f = detail::fit_polynomial(cx, cy, degree);
      const double score = f.residual + delta * static_cast<double>(inside) +
                           penalty * static_cast<double>(xs.size() - cx.size());
      if (score < best_score) {
        best_score = score;
        best = std::move(f);
      }
    }
  return best;
}

struct DenoisedPattern {
  Pattern pattern;
  FittedStructure fit;
};

// Re-samples the fitted structure at every measurement point inside its
// support and rounds onto the parameter grid: one atom per covered
// measurement, which also fills gaps inside the support.
inline DenoisedPattern denoise_pattern_with_fit(const Pattern& pattern, const PointSpace& mspace,
                                                const PointSpace& pspace, int degree, double delta = 0.0) {
  DenoisedPattern out{{}, fit_pattern_polynomial(pattern, mspace, pspace, degree, delta)};
  for (std::size_t i = 0; i < mspace.size(); ++i) {
    const double x = detail::coordinate(mspace, i);
    if (out.fit.covers(x)) out.pattern.insert({round_to_parameter(out.fit(x), pspace), i});
  }
  return out;
}

inline Pattern denoise_pattern(const Pattern& pattern, const PointSpace& mspace, const PointSpace& pspace, int degree,
                               double delta = 0.0) {
  return denoise_pattern_with_fit(pattern, mspace, pspace, degree, delta).pattern;
}

// Replaces the amplitudes on the pattern by a least-squares polynomial of the
// measurement coordinate; degree 0 sets them to their mean and works in any
// measurement space.
inline Eigen::MatrixXd denoise_amplitudes(Eigen::MatrixXd coefficients, const Pattern& pattern,
                                          const PointSpace& mspace, int degree) {
  if (pattern.empty()) throw std::invalid_argument("cannot denoise amplitudes of an empty pattern");
  if (degree < 0) throw std::invalid_argument("amplitude degree must be >= 0");
  detail::check_pattern(pattern, mspace.size(), static_cast<std::size_t>(coefficients.rows()));
  if (static_cast<std::size_t>(coefficients.cols()) != mspace.size())
    throw DimensionError("coefficient matrix columns do not match the measurement space");

  if (degree == 0) {
    double sum = 0.0;
    for (const auto& e : pattern)
      sum += coefficients(static_cast<Eigen::Index>(e.atom), static_cast<Eigen::Index>(e.measurement));
    const double mean = sum / static_cast<double>(pattern.size());
    for (const auto& e : pattern)
      coefficients(static_cast<Eigen::Index>(e.atom), static_cast<Eigen::Index>(e.measurement)) = mean;
    return coefficients;
  }

  detail::require_1d(mspace, "measurement");
  std::vector<double> xs, ys;
  for (const auto& e : pattern) {
    xs.push_back(detail::coordinate(mspace, e.measurement));
    ys.push_back(coefficients(static_cast<Eigen::Index>(e.atom), static_cast<Eigen::Index>(e.measurement)));
  }
  const FittedStructure g = detail::fit_polynomial(xs, ys, degree);
  for (const auto& e : pattern)
    coefficients(static_cast<Eigen::Index>(e.atom), static_cast<Eigen::Index>(e.measurement)) =
        g(detail::coordinate(mspace, e.measurement));
  return coefficients;
}

// Moves every amplitude of `before` to the atom chosen for its measurement in
// `after`. Measurements that only `after` covers (inpainted) receive the mean
// amplitude of `before`.
inline Eigen::MatrixXd relocate_amplitudes(Eigen::MatrixXd coefficients, const Pattern& before, const Pattern& after) {
  if (before.empty()) return coefficients;
  std::map<std::size_t, double> amplitude;
  double sum = 0.0;
  for (const auto& e : before) {
    const double a = coefficients(static_cast<Eigen::Index>(e.atom), static_cast<Eigen::Index>(e.measurement));
    amplitude[e.measurement] += a;
    sum += a;
    coefficients(static_cast<Eigen::Index>(e.atom), static_cast<Eigen::Index>(e.measurement)) = 0.0;
  }
  const double mean = sum / static_cast<double>(before.size());
  for (const auto& e : after) {
    auto it = amplitude.find(e.measurement);
    coefficients(static_cast<Eigen::Index>(e.atom), static_cast<Eigen::Index>(e.measurement)) =
        it != amplitude.end() ? it->second : mean;
  }
  return coefficients;
}

}  // namespace gmomp
