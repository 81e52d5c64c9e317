#pragma once

#include <Eigen/Dense>

#include <algorithm>
#include <cstddef>
#include <stdexcept>
#include <string>
#include <vector>

#include "gmomp/spaces.hpp"
#include "gmomp/union_find.hpp"

namespace gmomp {

namespace detail {

inline void check_pattern(const Pattern& pattern, std::size_t measurements, std::size_t atoms) {
  for (const auto& e : pattern) {
    if (e.measurement >= measurements)
      throw std::out_of_range("pattern measurement index " + std::to_string(e.measurement) + " out of range");
    if (e.atom >= atoms) throw std::out_of_range("pattern atom index " + std::to_string(e.atom) + " out of range");
  }
}

// Whether two pairs may coexist in one feasible pattern. Pairs sharing a
// measurement, or sitting on duplicate measurement points, must share the atom.
inline bool compatible(const Entry& a, const Entry& b, double d_measurement, double d_parameter, double tau) {
  if (a.measurement == b.measurement || d_measurement == 0.0) return a.atom == b.atom;
  return d_parameter <= lipschitz_bound(tau, d_measurement);
}

}  // namespace detail

// Dense symmetric distance table of a point space.
class PairwiseDistances {
 public:
  PairwiseDistances() = default;
  explicit PairwiseDistances(const PointSpace& space) : table_(space.size(), space.size()) {
    const auto n = static_cast<Eigen::Index>(space.size());
    for (Eigen::Index b = 0; b < n; ++b) {
      table_(b, b) = 0.0;
      for (Eigen::Index a = b + 1; a < n; ++a) {
        const double d = space.distance(static_cast<std::size_t>(a), static_cast<std::size_t>(b));
        table_(a, b) = d;
        table_(b, a) = d;
      }
    }
  }

  double operator()(std::size_t a, std::size_t b) const {
    return table_(static_cast<Eigen::Index>(a), static_cast<Eigen::Index>(b));
  }
  std::size_t size() const { return static_cast<std::size_t>(table_.rows()); }

 private:
  Eigen::MatrixXd table_;
};

inline bool is_connected_pairwise(const Pattern& pattern, const PointSpace& mspace, double sigma);

// Graph on the pattern's measurement points with edges d <= sigma is
// connected. The general path unions all O(n^2) close pairs; on the real line
// it reduces to checking consecutive gaps of the sorted coordinates.
inline bool is_connected(const Pattern& pattern, const PointSpace& mspace, double sigma) {
  detail::check_pattern(pattern, mspace.size(), static_cast<std::size_t>(-1));
  const auto points = pattern.measurements();
  if (points.size() <= 1 || sigma == kInfinity) return true;

  if (mspace.metric() == MetricKind::absolute_1d) {
    std::vector<double> x;
    x.reserve(points.size());
    for (auto i : points) x.push_back(mspace.coordinates()(static_cast<Eigen::Index>(i), 0));
    std::sort(x.begin(), x.end());
    for (std::size_t a = 1; a < x.size(); ++a)
      if (x[a] - x[a - 1] > sigma) return false;
    return true;
  }
  return is_connected_pairwise(pattern, mspace, sigma);
}

// Union-find over every pair of measurement points; reference path for all metrics.
inline bool is_connected_pairwise(const Pattern& pattern, const PointSpace& mspace, double sigma) {
  detail::check_pattern(pattern, mspace.size(), static_cast<std::size_t>(-1));
  const auto points = pattern.measurements();
  if (points.size() <= 1) return true;
  DisjointSet sets(points.size());
  for (std::size_t a = 0; a < points.size(); ++a)
    for (std::size_t b = a + 1; b < points.size(); ++b)
      if (mspace.distance(points[a], points[b]) <= sigma && sets.unite(a, b) && sets.components() == 1) return true;
  return sets.components() == 1;
}

// d_param(p_j, p_j') <= tau * d_meas(m_i, m_i') for every two pairs of the
// pattern, plus at most one atom per measurement.
inline bool satisfies_lipschitz(const Pattern& pattern, const PointSpace& mspace, const PointSpace& pspace,
                                double tau) {
  detail::check_pattern(pattern, mspace.size(), pspace.size());
  const auto& e = pattern.entries();
  for (std::size_t a = 0; a < e.size(); ++a)
    for (std::size_t b = a + 1; b < e.size(); ++b) {
      const double dm = e[a].measurement == e[b].measurement ? 0.0 : mspace.distance(e[a].measurement, e[b].measurement);
      const double dp = e[a].atom == e[b].atom ? 0.0 : pspace.distance(e[a].atom, e[b].atom);
      if (!detail::compatible(e[a], e[b], dm, dp, tau)) return false;
    }
  return true;
}

inline bool is_feasible(const Pattern& pattern, const PointSpace& mspace, const PointSpace& pspace,
                        const FeasibleParams& params) {
  return satisfies_lipschitz(pattern, mspace, pspace, params.tau) && is_connected(pattern, mspace, params.sigma);
}

// Some cross pair (one from each pattern) is itself within sigma and
// Lipschitz-compatible.
inline bool are_intersecting(const Pattern& a, const Pattern& b, const PointSpace& mspace, const PointSpace& pspace,
                             const FeasibleParams& params) {
  if (a.empty() || b.empty()) throw std::invalid_argument("are_intersecting requires nonempty patterns");
  detail::check_pattern(a, mspace.size(), pspace.size());
  detail::check_pattern(b, mspace.size(), pspace.size());
  for (const auto& x : a)
    for (const auto& y : b) {
      const double dm = mspace.distance(x.measurement, y.measurement);
      if (dm > params.sigma) continue;
      if (pspace.distance(x.atom, y.atom) <= lipschitz_bound(params.tau, dm)) return true;
    }
  return false;
}

}  // namespace gmomp
