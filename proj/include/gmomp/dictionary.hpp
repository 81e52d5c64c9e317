#pragma once

#include <Eigen/Dense>

#include <cmath>
#include <cstddef>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include "gmomp/error.hpp"
#include "gmomp/spaces.hpp"

namespace gmomp {

// Builder kind and numeric parameters; enough to rebuild the dictionary.
struct BuilderInfo {
  std::string kind = "matrix";
  std::vector<std::pair<std::string, double>> parameters;
};

// Divides every column by its Euclidean norm. Zero columns are rejected.
inline Eigen::MatrixXd normalize_columns(Eigen::MatrixXd m) {
  for (Eigen::Index j = 0; j < m.cols(); ++j) {
    const double n = m.col(j).norm();
    if (!(n > 0.0) || !std::isfinite(n))
      throw std::invalid_argument("dictionary column " + std::to_string(j) + " has zero or non-finite norm");
    m.col(j) /= n;
  }
  return m;
}

// Column-normalized atom matrix (T samples x P atoms) with one parameter
// point per atom.
class Dictionary {
 public:
  Dictionary(Eigen::MatrixXd atoms, PointSpace parameters, BuilderInfo info = {})
      : atoms_(normalize_columns(std::move(atoms))), parameters_(std::move(parameters)), info_(std::move(info)) {
    if (parameters_.size() != static_cast<std::size_t>(atoms_.cols()))
      throw DimensionError("dictionary has " + std::to_string(atoms_.cols()) + " atoms but " +
                           std::to_string(parameters_.size()) + " parameter points");
  }

  const Eigen::MatrixXd& atoms() const { return atoms_; }
  const PointSpace& parameters() const { return parameters_; }
  const BuilderInfo& info() const { return info_; }
  std::size_t samples() const { return static_cast<std::size_t>(atoms_.rows()); }
  std::size_t size() const { return static_cast<std::size_t>(atoms_.cols()); }

 private:
  Eigen::MatrixXd atoms_;
  PointSpace parameters_;
  BuilderInfo info_;
};

inline Dictionary identity_dictionary(std::size_t n) {
  const auto size = static_cast<Eigen::Index>(n);
  return Dictionary(Eigen::MatrixXd::Identity(size, size), PointSpace::line(n),
                    {"identity", {{"samples", static_cast<double>(n)}}});
}

// Shifted Gaussians exp(-(t-j)^2 / (2 s^2)) sampled at t = 1..T, one per
// shift j = 1..T. Entries further than 8 s from the shift are exact zeros;
// boundary columns are truncated and renormalized.
inline Dictionary gaussian_conv_dictionary(std::size_t samples, double std_dev) {
  if (samples < 1) throw std::invalid_argument("gaussian dictionary needs at least one sample");
  if (!(std_dev > 0.0) || !std::isfinite(std_dev)) throw std::invalid_argument("std_dev must be positive");
  const auto n = static_cast<Eigen::Index>(samples);
  const double cut = 8.0 * std_dev;
  Eigen::MatrixXd atoms = Eigen::MatrixXd::Zero(n, n);
  for (Eigen::Index j = 0; j < n; ++j)
    for (Eigen::Index t = 0; t < n; ++t) {
      const double d = static_cast<double>(t - j);
      if (std::abs(d) <= cut) atoms(t, j) = std::exp(-d * d / (2.0 * std_dev * std_dev));
    }
  return Dictionary(std::move(atoms), PointSpace::line(samples),
                    {"gaussian", {{"samples", static_cast<double>(samples)}, {"std_dev", std_dev}}});
}

// g(t) = exp(-theta t^2) cos(phi t + psi)
inline double gabor_impulse(double t, double theta, double phi, double psi) {
  return std::exp(-theta * t * t) * std::cos(phi * t + psi);
}

// Shifts g(t - dt*j) sampled at t = dt*i, i, j = 1..T. Parameter points are
// the shifts dt*j (time units of dt).
inline Dictionary gabor_conv_dictionary(std::size_t samples, double theta, double phi, double psi, double dt) {
  if (samples < 1) throw std::invalid_argument("gabor dictionary needs at least one sample");
  if (!(theta > 0.0)) throw std::invalid_argument("gabor bandwidth theta must be positive");
  if (!(dt > 0.0)) throw std::invalid_argument("gabor sample spacing dt must be positive");
  const auto n = static_cast<Eigen::Index>(samples);
  Eigen::MatrixXd atoms(n, n);
  for (Eigen::Index j = 0; j < n; ++j)
    for (Eigen::Index i = 0; i < n; ++i) atoms(i, j) = gabor_impulse(dt * static_cast<double>(i - j), theta, phi, psi);
  return Dictionary(std::move(atoms), PointSpace::line(samples, dt),
                    {"gabor",
                     {{"samples", static_cast<double>(samples)},
                      {"theta", theta},
                      {"phi", phi},
                      {"psi", psi},
                      {"dt", dt}}});
}

// Centered cardinal B-spline of order n: B_1 is the indicator of [-0.5, 0.5)
// and B_n = B_{n-1} * B_1. Evaluated through the uniform-knot Cox-de Boor
// recursion on M_n(x) = B_n(x - n/2), supported on [0, n).
inline double bspline_eval(int order, double t) {
  if (order < 1) throw std::invalid_argument("B-spline order must be >= 1");
  const double x = t + 0.5 * order;
  if (!(x >= 0.0) || x >= static_cast<double>(order)) return 0.0;

  // v[i] holds M_k(x - i); M_1 is the indicator of [0, 1).
  std::vector<double> v(static_cast<std::size_t>(order) + 1, 0.0);
  v[static_cast<std::size_t>(std::floor(x))] = 1.0;
  for (int k = 2; k <= order; ++k) {
    for (int i = 0; i < order; ++i) {
      const double y = x - i;
      v[i] = (y * v[i] + (k - y) * v[i + 1]) / (k - 1);
    }
  }
  return v[0];
}

// All integer shifts 1..T of B_n for n = 1..max_order, sampled at t = 1..T.
// Column (n-1)*T + (s-1) holds order n, shift s; its parameter point is
// (s, n).
inline Dictionary bspline_dictionary(std::size_t samples, int max_order,
                                     MetricKind metric = MetricKind::chebyshev) {
  if (samples < 1) throw std::invalid_argument("bspline dictionary needs at least one sample");
  if (max_order < 1) throw std::invalid_argument("bspline max_order must be >= 1");
  const auto n = static_cast<Eigen::Index>(samples);
  const Eigen::Index cols = n * max_order;
  Eigen::MatrixXd atoms(n, cols);
  Eigen::MatrixXd points(cols, 2);
  for (int order = 1; order <= max_order; ++order)
    for (Eigen::Index s = 0; s < n; ++s) {
      const Eigen::Index c = (order - 1) * n + s;
      for (Eigen::Index t = 0; t < n; ++t) atoms(t, c) = bspline_eval(order, static_cast<double>(t - s));
      points(c, 0) = static_cast<double>(s + 1);
      points(c, 1) = static_cast<double>(order);
    }
  return Dictionary(std::move(atoms), PointSpace(std::move(points), metric),
                    {"bspline", {{"samples", static_cast<double>(samples)}, {"max_order", max_order}}});
}

}  // namespace gmomp
