#pragma once

#include <Eigen/Dense>

#include <algorithm>
#include <cmath>
#include <compare>
#include <cstddef>
#include <initializer_list>
#include <iterator>
#include <limits>
#include <numbers>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include "gmomp/error.hpp"

namespace gmomp {

inline constexpr double kInfinity = std::numeric_limits<double>::infinity();

// Mean Earth radius used by the geodetic metric.
inline constexpr double kEarthRadiusKm = 6371.0;

// tau * d with the extended-real convention inf * 0 = 0.
inline double lipschitz_bound(double tau, double d) { return d == 0.0 ? 0.0 : tau * d; }

enum class MetricKind {
  absolute_1d,
  euclidean,
  chebyshev,
  haversine_km,
};

inline std::string_view to_string(MetricKind kind) {
  switch (kind) {
    case MetricKind::absolute_1d: return "absolute-1d";
    case MetricKind::euclidean: return "euclidean-nd";
    case MetricKind::chebyshev: return "chebyshev-nd";
    case MetricKind::haversine_km: return "haversine-geodetic-km";
  }
  return "unknown";
}

inline MetricKind metric_from_string(std::string_view name) {
  if (name == "absolute-1d") return MetricKind::absolute_1d;
  if (name == "euclidean-nd") return MetricKind::euclidean;
  if (name == "chebyshev-nd") return MetricKind::chebyshev;
  if (name == "haversine-geodetic-km") return MetricKind::haversine_km;
  throw std::invalid_argument("unknown metric kind '" + std::string(name) + "'");
}

// Finite set of points in a metric space, indexed 0..size()-1. Coordinates
// are stored one point per row.
class PointSpace {
 public:
  PointSpace() : coordinates_(0, 1), metric_(MetricKind::absolute_1d) {}

  PointSpace(Eigen::MatrixXd coordinates, MetricKind metric)
      : coordinates_(std::move(coordinates)), metric_(metric) {
    if (coordinates_.cols() < 1) throw DimensionError("point coordinates need dimension >= 1");
    if (metric_ == MetricKind::absolute_1d && coordinates_.cols() != 1)
      throw DimensionError("absolute-1d metric requires 1-dimensional points, got " +
                           std::to_string(coordinates_.cols()));
    if (metric_ == MetricKind::haversine_km && coordinates_.cols() != 2)
      throw DimensionError("haversine metric requires (lat, lon) points, got dimension " +
                           std::to_string(coordinates_.cols()));
    if (!coordinates_.allFinite()) throw std::invalid_argument("point coordinates must be finite");
  }

  // Points spacing*1, ..., spacing*n on the real line.
  static PointSpace line(std::size_t n, double spacing = 1.0) {
    Eigen::MatrixXd c(static_cast<Eigen::Index>(n), 1);
    for (std::size_t i = 0; i < n; ++i) c(static_cast<Eigen::Index>(i), 0) = spacing * static_cast<double>(i + 1);
    return PointSpace(std::move(c), MetricKind::absolute_1d);
  }

  std::size_t size() const { return static_cast<std::size_t>(coordinates_.rows()); }
  Eigen::Index dimension() const { return coordinates_.cols(); }
  MetricKind metric() const { return metric_; }
  const Eigen::MatrixXd& coordinates() const { return coordinates_; }
  Eigen::VectorXd point(std::size_t i) const {
    check(i);
    return coordinates_.row(static_cast<Eigen::Index>(i)).transpose();
  }

  double distance(std::size_t i, std::size_t i2) const {
    check(i);
    check(i2);
    return between(coordinates_.row(static_cast<Eigen::Index>(i)),
                   coordinates_.row(static_cast<Eigen::Index>(i2)));
  }

  // Distance from an arbitrary coordinate vector to point i.
  double distance_to(const Eigen::Ref<const Eigen::RowVectorXd>& x, std::size_t i) const {
    check(i);
    if (x.size() != coordinates_.cols())
      throw DimensionError("coordinate dimension " + std::to_string(x.size()) + " does not match space dimension " +
                           std::to_string(coordinates_.cols()));
    return between(x, coordinates_.row(static_cast<Eigen::Index>(i)));
  }

 private:
  void check(std::size_t i) const {
    if (i >= size())
      throw std::out_of_range("point index " + std::to_string(i) + " out of range for " + std::to_string(size()) +
                              " points");
  }

  double between(const Eigen::Ref<const Eigen::RowVectorXd>& a, const Eigen::Ref<const Eigen::RowVectorXd>& b) const {
    switch (metric_) {
      case MetricKind::absolute_1d:
        return std::abs(a(0) - b(0));
      case MetricKind::euclidean:
        return (a - b).norm();
      case MetricKind::chebyshev:
        return (a - b).cwiseAbs().maxCoeff();
      case MetricKind::haversine_km: {
        constexpr double rad = std::numbers::pi / 180.0;
        const double lat1 = a(0) * rad, lat2 = b(0) * rad;
        const double dlat = lat2 - lat1, dlon = (b(1) - a(1)) * rad;
        const double s1 = std::sin(dlat / 2.0), s2 = std::sin(dlon / 2.0);
        const double h = s1 * s1 + std::cos(lat1) * std::cos(lat2) * s2 * s2;
        return 2.0 * kEarthRadiusKm * std::asin(std::min(1.0, std::sqrt(h)));
      }
    }
    return 0.0;
  }

  Eigen::MatrixXd coordinates_;
  MetricKind metric_;
};

// Connectivity radius sigma and Lipschitz constant tau; both may be kInfinity.
struct FeasibleParams {
  double sigma = kInfinity;
  double tau = kInfinity;

  FeasibleParams() = default;
  FeasibleParams(double sigma_, double tau_) : sigma(sigma_), tau(tau_) {
    if (std::isnan(sigma) || sigma < 0.0) throw std::invalid_argument("sigma must be a non-negative extended real");
    if (std::isnan(tau) || tau < 0.0) throw std::invalid_argument("tau must be a non-negative extended real");
  }
};

// (atom, measurement) index pair, both 0-based.
struct Entry {
  std::size_t atom = 0;
  std::size_t measurement = 0;
  auto operator<=>(const Entry&) const = default;
};

// Ordered set of (atom, measurement) pairs. The at-most-one-atom-per-
// measurement rule is a feasibility condition, so a Pattern may violate it
// (a run's accumulated support usually does).
class Pattern {
 public:
  Pattern() = default;
  Pattern(std::initializer_list<Entry> entries) : entries_(entries) { normalize(); }
  explicit Pattern(std::vector<Entry> entries) : entries_(std::move(entries)) { normalize(); }

  bool insert(Entry e) {
    auto it = std::lower_bound(entries_.begin(), entries_.end(), e);
    if (it != entries_.end() && *it == e) return false;
    entries_.insert(it, e);
    return true;
  }

  void merge(const Pattern& other) {
    std::vector<Entry> out;
    out.reserve(entries_.size() + other.entries_.size());
    std::set_union(entries_.begin(), entries_.end(), other.entries_.begin(), other.entries_.end(),
                   std::back_inserter(out));
    entries_ = std::move(out);
  }

  bool contains(Entry e) const { return std::binary_search(entries_.begin(), entries_.end(), e); }
  bool empty() const { return entries_.empty(); }
  std::size_t size() const { return entries_.size(); }
  auto begin() const { return entries_.begin(); }
  auto end() const { return entries_.end(); }
  const std::vector<Entry>& entries() const { return entries_; }

  // Distinct measurement indices, ascending.
  std::vector<std::size_t> measurements() const {
    std::vector<std::size_t> m;
    m.reserve(entries_.size());
    for (const auto& e : entries_) m.push_back(e.measurement);
    std::sort(m.begin(), m.end());
    m.erase(std::unique(m.begin(), m.end()), m.end());
    return m;
  }

  bool one_atom_per_measurement() const { return measurements().size() == entries_.size(); }

  bool is_subset_of(const Pattern& other) const {
    return std::includes(other.entries_.begin(), other.entries_.end(), entries_.begin(), entries_.end());
  }

  bool operator==(const Pattern&) const = default;

 private:
  void normalize() {
    std::sort(entries_.begin(), entries_.end());
    entries_.erase(std::unique(entries_.begin(), entries_.end()), entries_.end());
  }

  std::vector<Entry> entries_;
};

}  // namespace gmomp
