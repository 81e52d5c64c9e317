#pragma once

// Reference implementations used as test oracles. They follow the
// definitions directly (exhaustive enumeration, BFS, quadrature) and share
// no code with the library beyond its data types.

#include <Eigen/Dense>

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <functional>
#include <limits>
#include <queue>
#include <random>
#include <utility>
#include <vector>

namespace oracle {

using Pair = std::pair<std::size_t, std::size_t>;  // (atom, measurement)

inline Eigen::MatrixXd distance_table(const Eigen::MatrixXd& points, int metric /*0 abs/euclid, 1 chebyshev*/) {
  const auto n = points.rows();
  Eigen::MatrixXd d(n, n);
  for (Eigen::Index a = 0; a < n; ++a)
    for (Eigen::Index b = 0; b < n; ++b) {
      const Eigen::RowVectorXd diff = points.row(a) - points.row(b);
      d(a, b) = metric == 1 ? diff.cwiseAbs().maxCoeff() : std::sqrt(diff.squaredNorm());
    }
  return d;
}

// Breadth-first search on the graph with an edge whenever d <= sigma.
inline bool connected(const std::vector<std::size_t>& nodes, const Eigen::MatrixXd& dm, double sigma) {
  if (nodes.size() <= 1) return true;
  std::vector<char> seen(nodes.size(), 0);
  std::queue<std::size_t> q;
  q.push(0);
  seen[0] = 1;
  std::size_t count = 1;
  while (!q.empty()) {
    const std::size_t a = q.front();
    q.pop();
    for (std::size_t b = 0; b < nodes.size(); ++b)
      if (!seen[b] && dm(static_cast<Eigen::Index>(nodes[a]), static_cast<Eigen::Index>(nodes[b])) <= sigma) {
        seen[b] = 1;
        ++count;
        q.push(b);
      }
  }
  return count == nodes.size();
}

// Feasibility straight from the two defining conditions.
inline bool feasible(const std::vector<Pair>& pattern, const Eigen::MatrixXd& dm, const Eigen::MatrixXd& dp,
                     double sigma, double tau) {
  for (std::size_t a = 0; a < pattern.size(); ++a)
    for (std::size_t b = a + 1; b < pattern.size(); ++b) {
      const auto [ja, ka] = pattern[a];
      const auto [jb, kb] = pattern[b];
      const double m = ka == kb ? 0.0 : dm(static_cast<Eigen::Index>(ka), static_cast<Eigen::Index>(kb));
      const double p = ja == jb ? 0.0 : dp(static_cast<Eigen::Index>(ja), static_cast<Eigen::Index>(jb));
      const double bound = m == 0.0 ? 0.0 : tau * m;
      if (p > bound) return false;
    }
  std::vector<std::size_t> nodes;
  for (const auto& [j, k] : pattern)
    if (std::find(nodes.begin(), nodes.end(), k) == nodes.end()) nodes.push_back(k);
  return connected(nodes, dm, sigma);
}

// Calls visit on every pattern with at most one atom per measurement.
inline void for_each_pattern(std::size_t atoms, std::size_t measurements,
                             const std::function<void(const std::vector<Pair>&)>& visit) {
  std::vector<std::size_t> choice(measurements, 0);  // 0 = none, j + 1 = atom j
  std::vector<Pair> pattern;
  for (;;) {
    pattern.clear();
    for (std::size_t k = 0; k < measurements; ++k)
      if (choice[k]) pattern.emplace_back(choice[k] - 1, k);
    visit(pattern);
    std::size_t k = 0;
    while (k < measurements && ++choice[k] > atoms) choice[k++] = 0;
    if (k == measurements) return;
  }
}

// Largest max-entry value of C over all feasible patterns.
inline double best_infinity_norm(const Eigen::MatrixXd& c, const Eigen::MatrixXd& dm, const Eigen::MatrixXd& dp,
                                 double sigma, double tau) {
  double best = 0.0;
  for_each_pattern(static_cast<std::size_t>(c.rows()), static_cast<std::size_t>(c.cols()), [&](const auto& p) {
    if (p.empty() || !feasible(p, dm, dp, sigma, tau)) return;
    double v = 0.0;
    for (const auto& [j, k] : p) v = std::max(v, c(static_cast<Eigen::Index>(j), static_cast<Eigen::Index>(k)));
    best = std::max(best, v);
  });
  return best;
}

// Babel function by enumerating every l-subset of atoms and every atom
// outside it. Sums run in ascending index order over |G| with G = D^T D.
inline double babel(const Eigen::MatrixXd& d, std::size_t l) {
  const Eigen::MatrixXd g = (d.transpose() * d).cwiseAbs();
  const auto p = static_cast<std::size_t>(g.cols());
  if (l == 0) return 0.0;
  double best = 0.0;
  std::vector<char> mask(p, 0);
  std::fill(mask.begin(), mask.begin() + static_cast<std::ptrdiff_t>(l), 1);
  std::sort(mask.begin(), mask.end());
  do {
    for (std::size_t w = 0; w < p; ++w) {
      if (mask[w]) continue;
      double sum = 0.0;
      for (std::size_t i = 0; i < p; ++i)
        if (mask[i]) sum += g(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(w));
      best = std::max(best, sum);
    }
  } while (std::next_permutation(mask.begin(), mask.end()));
  return best;
}

// Gauss-Legendre nodes and weights on [-1, 1] by Newton iteration.
inline std::pair<std::vector<double>, std::vector<double>> gauss_legendre(int n) {
  std::vector<double> x(static_cast<std::size_t>(n)), w(static_cast<std::size_t>(n));
  for (int i = 0; i < n; ++i) {
    double z = std::cos(M_PI * (i + 0.75) / (n + 0.5));
    double dp = 0.0;
    for (int it = 0; it < 100; ++it) {
      double p0 = 1.0, p1 = z;
      for (int k = 2; k <= n; ++k) {
        const double p2 = ((2.0 * k - 1.0) * z * p1 - (k - 1.0) * p0) / k;
        p0 = p1;
        p1 = p2;
      }
      dp = n * (z * p1 - p0) / (z * z - 1.0);
      const double dz = p1 / dp;
      z -= dz;
      if (std::abs(dz) < 1e-15) break;
    }
    x[static_cast<std::size_t>(i)] = z;
    w[static_cast<std::size_t>(i)] = 2.0 / ((1.0 - z * z) * dp * dp);
  }
  return {x, w};
}

// Centered B-spline of order n as the n-fold convolution of the box on
// [-1/2, 1/2): B_n(t) = int_{t-1/2}^{t+1/2} B_{n-1}(s) ds, with every
// integral split at the half-integer breakpoints and done by Gauss-Legendre.
inline double bspline_quadrature(int order, double t) {
  if (order == 1) return (t >= -0.5 && t < 0.5) ? 1.0 : 0.0;
  static const auto rule = gauss_legendre(4);  // exact for the degree <= 5 pieces up to order 7
  const double a = t - 0.5, b = t + 0.5;
  const double half = 0.5 * (order - 1);  // support of B_{order-1} is [-half, half]
  std::vector<double> cuts{a};
  const double offset = (order - 1) % 2 == 0 ? 0.0 : 0.5;
  for (double k = std::ceil(a - offset) + offset; k < b; k += 1.0)
    if (k > a) cuts.push_back(k);
  cuts.push_back(b);
  double sum = 0.0;
  for (std::size_t s = 0; s + 1 < cuts.size(); ++s) {
    const double lo = std::max(cuts[s], -half), hi = std::min(cuts[s + 1], half);
    if (!(hi > lo)) continue;
    const double mid = 0.5 * (lo + hi), rad = 0.5 * (hi - lo);
    for (std::size_t q = 0; q < rule.first.size(); ++q)
      sum += rule.second[q] * rad * bspline_quadrature(order - 1, mid + rad * rule.first[q]);
  }
  return sum;
}

// Proper coloring search by exhaustive assignment.
inline bool colorable(std::size_t vertices, const std::vector<Pair>& edges, std::size_t colors) {
  std::vector<std::size_t> c(vertices, 0);
  for (;;) {
    bool ok = true;
    for (const auto& [a, b] : edges)
      if (c[a] == c[b]) {
        ok = false;
        break;
      }
    if (ok) return true;
    std::size_t v = 0;
    while (v < vertices && ++c[v] == colors) c[v++] = 0;
    if (v == vertices) return false;
  }
}

// Largest number of unit entries of R reachable by a feasible pattern.
// Entries of R are 0 or 1, so only pairs on ones need enumerating.
inline std::size_t best_unit_count(const Eigen::MatrixXd& r, const Eigen::MatrixXd& dm, const Eigen::MatrixXd& dp,
                                   double sigma, double tau) {
  const auto m = static_cast<std::size_t>(r.cols());
  std::vector<std::vector<std::size_t>> options(m);
  for (std::size_t k = 0; k < m; ++k)
    for (Eigen::Index j = 0; j < r.rows(); ++j)
      if (r(j, static_cast<Eigen::Index>(k)) > 0.0) options[k].push_back(static_cast<std::size_t>(j));
  std::size_t best = 0;
  std::vector<std::size_t> choice(m, 0);
  std::vector<Pair> pattern;
  for (;;) {
    pattern.clear();
    for (std::size_t k = 0; k < m; ++k)
      if (choice[k]) pattern.emplace_back(options[k][choice[k] - 1], k);
    if (pattern.size() > best && feasible(pattern, dm, dp, sigma, tau)) best = pattern.size();
    std::size_t k = 0;
    while (k < m && ++choice[k] > options[k].size()) choice[k++] = 0;
    if (k == m) return best;
  }
}

}  // namespace oracle
