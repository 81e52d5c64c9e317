#pragma once

#include <Eigen/Dense>

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <cstdint>
#include <random>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include "gmomp/dictionary.hpp"
#include "gmomp/feasibility.hpp"
#include "gmomp/parallel.hpp"
#include "gmomp/spaces.hpp"

namespace gmomp {

// Babel function values mu_1(0..max_l) of one dictionary. For every atom the
// l largest off-diagonal |Gram| entries of its column are summed (in
// ascending atom order) and the maximum over atoms is taken; this equals the
// maximum over all atom subsets of size <= l.
class BabelTable {
 public:
  explicit BabelTable(const Dictionary& dict)
      : gram_((dict.atoms().transpose() * dict.atoms()).cwiseAbs()) {}

  std::size_t atoms() const { return static_cast<std::size_t>(gram_.cols()); }

  double operator()(std::size_t l) const {
    const std::size_t p = atoms();
    if (l >= p)
      throw std::invalid_argument("Babel function needs l < P (l = " + std::to_string(l) + ", P = " +
                                  std::to_string(p) + ")");
    if (l == 0) return 0.0;
    double best = 0.0;
    std::vector<std::size_t> order(p - 1);
    for (std::size_t w = 0; w < p; ++w) {
      const auto col = static_cast<Eigen::Index>(w);
      std::size_t n = 0;
      for (std::size_t i = 0; i < p; ++i)
        if (i != w) order[n++] = i;
      std::nth_element(order.begin(), order.begin() + static_cast<std::ptrdiff_t>(l - 1), order.end(),
                       [&](std::size_t a, std::size_t b) {
                         const double va = gram_(static_cast<Eigen::Index>(a), col);
                         const double vb = gram_(static_cast<Eigen::Index>(b), col);
                         return va > vb || (va == vb && a < b);
                       });
      std::sort(order.begin(), order.begin() + static_cast<std::ptrdiff_t>(l));
      double sum = 0.0;
      for (std::size_t i = 0; i < l; ++i) sum += gram_(static_cast<Eigen::Index>(order[i]), col);
      best = std::max(best, sum);
    }
    return best;
  }

 private:
  Eigen::MatrixXd gram_;
};

inline double babel(const Dictionary& dict, std::size_t l) { return BabelTable(dict)(l); }

// mu_1(L) < lambda (1 - mu_1(L - 1))
inline bool exact_recovery_condition(const Dictionary& dict, std::size_t iterations, double lambda) {
  if (iterations < 1 || iterations >= dict.size()) throw std::invalid_argument("need 1 <= L < P");
  if (!(lambda > 0.0 && lambda <= 1.0)) throw std::invalid_argument("weakness must lie in (0, 1]");
  const BabelTable mu(dict);
  return mu(iterations) < lambda * (1.0 - mu(iterations - 1));
}

// beta = mu_1(L) / (1 - mu_1(L - 1)); undefined once mu_1(L - 1) >= 1.
inline double beta_threshold(const Dictionary& dict, std::size_t iterations) {
  if (iterations < 1 || iterations >= dict.size()) throw std::invalid_argument("need 1 <= L < P");
  const BabelTable mu(dict);
  const double prev = mu(iterations - 1);
  if (prev >= 1.0) throw std::domain_error("beta threshold undefined: mu_1(L-1) = " + std::to_string(prev) + " >= 1");
  return mu(iterations) / (1.0 - prev);
}

struct RecoveryReport {
  std::size_t iterations = 0;
  std::vector<double> babel_values;  // mu_1(0..L)
  double lambda = 1.0;
  double beta = 0.0;
  bool condition_exact = false;  // mu_1(L) < lambda (1 - mu_1(L - 1))
  bool condition_beta = false;   // beta <= 1
};

inline RecoveryReport recovery_report(const Dictionary& dict, std::size_t iterations, double lambda = 1.0) {
  if (iterations < 1 || iterations >= dict.size()) throw std::invalid_argument("need 1 <= L < P");
  if (!(lambda > 0.0 && lambda <= 1.0)) throw std::invalid_argument("weakness must lie in (0, 1]");
  const BabelTable mu(dict);
  RecoveryReport r;
  r.iterations = iterations;
  r.lambda = lambda;
  for (std::size_t l = 0; l <= iterations; ++l) r.babel_values.push_back(mu(l));
  const double prev = r.babel_values[iterations - 1];
  const double cur = r.babel_values[iterations];
  if (prev >= 1.0) throw std::domain_error("beta threshold undefined: mu_1(L-1) = " + std::to_string(prev) + " >= 1");
  r.beta = cur / (1.0 - prev);
  r.condition_exact = cur < lambda * (1.0 - prev);
  r.condition_beta = r.beta <= 1.0;
  return r;
}

struct NoiseAdaptedTau {
  double tau_hat;         // Lipschitz constant valid for the noised patterns
  double tau_separation;  // non-intersection margin required of the clean patterns
};

// Lipschitz adaptation for patterns whose parameters move by at most eps_u;
// m is the smallest distance between two distinct measurement points.
inline NoiseAdaptedTau uniform_noise_tau(double tau, double eps_u, double min_distance) {
  if (!(min_distance > 0.0)) throw std::invalid_argument("minimum measurement distance must be positive");
  if (std::isnan(tau) || tau < 0.0) throw std::invalid_argument("tau must be >= 0");
  if (std::isnan(eps_u) || eps_u < 0.0) throw std::invalid_argument("eps_u must be >= 0");
  return {tau + 2.0 * eps_u / min_distance, tau + 4.0 * eps_u / min_distance};
}

// Lower bound (1 - eps_B^k)^(M - k + 1) on the probability that a connected
// length-M pattern with i.i.d. deletions stays connected at radius k sigma.
inline double bernoulli_connectivity_bound(double eps_b, std::size_t k, std::size_t length) {
  if (!(eps_b >= 0.0 && eps_b <= 1.0)) throw std::invalid_argument("eps_B must lie in [0, 1]");
  if (k < 1 || k > length) throw std::invalid_argument("need 1 <= k <= M");
  return std::pow(1.0 - std::pow(eps_b, static_cast<double>(k)), static_cast<double>(length - k + 1));
}

struct MonteCarloEstimate {
  double frequency = 0.0;
  double standard_error = 0.0;
  std::size_t trials = 0;
};

// Empirical frequency with which the path 1..M, after deleting every point
// independently with probability eps_B, stays connected at radius k.
// Trial t draws from a generator seeded with base_seed + t.
inline MonteCarloEstimate connectivity_monte_carlo(double eps_b, std::size_t k, std::size_t length,
                                                   std::size_t trials, std::uint64_t base_seed,
                                                   std::size_t threads = 1) {
  if (!(eps_b >= 0.0 && eps_b <= 1.0)) throw std::invalid_argument("eps_B must lie in [0, 1]");
  if (trials == 0) throw std::invalid_argument("need at least one trial");
  const PointSpace line = PointSpace::line(length);
  std::vector<char> connected(trials, 0);
  parallel_for(trials, threads, [&](std::size_t t) {
    std::mt19937_64 rng(base_seed + t);
    std::bernoulli_distribution deleted(eps_b);
    std::vector<Entry> kept;
    for (std::size_t i = 0; i < length; ++i)
      if (!deleted(rng)) kept.push_back({0, i});
    connected[t] = is_connected(Pattern(std::move(kept)), line, static_cast<double>(k)) ? 1 : 0;
  });
  std::size_t hits = 0;
  for (char c : connected) hits += static_cast<std::size_t>(c);
  MonteCarloEstimate e;
  e.trials = trials;
  e.frequency = static_cast<double>(hits) / static_cast<double>(trials);
  e.standard_error = std::sqrt(e.frequency * (1.0 - e.frequency) / static_cast<double>(trials));
  return e;
}

// Undirected simple graph; edges are oriented (first -> second) for the
// reduction's +1/-1 incidence signs.
struct Graph {
  std::size_t vertices = 0;
  std::vector<std::pair<std::size_t, std::size_t>> edges;

  std::size_t max_degree() const {
    std::vector<std::size_t> deg(vertices, 0);
    for (auto [a, b] : edges) {
      ++deg.at(a);
      ++deg.at(b);
    }
    return deg.empty() ? 0 : *std::max_element(deg.begin(), deg.end());
  }

  bool adjacent(std::size_t a, std::size_t b) const {
    for (auto [x, y] : edges)
      if ((x == a && y == b) || (x == b && y == a)) return true;
    return false;
  }
};

// Structured-selection instance encoding graph coloring: measurement i is the
// unit vector e_i, atom (color c, vertex v) has parameter e'_c (x) chi_v,
// D = I and R[(c, v), i] = 1 iff v = i. With sigma = inf and tau = sqrt(n), a
// selection reaching value M exists iff the graph is colorable.
struct ColoringInstance {
  PointSpace measurements;
  PointSpace parameters;
  Eigen::MatrixXd dictionary;  // identity, (C M) x (C M)
  Eigen::MatrixXd residual;    // (C M) x M
  FeasibleParams params;
  std::size_t degree = 0;                               // n, edges per vertex after padding
  std::size_t edge_count = 0;                           // N, including dangling edges
  std::vector<std::pair<std::size_t, std::size_t>> labels;  // atom -> (color, vertex)

  std::size_t atom(std::size_t color, std::size_t vertex) const { return color * measurements.size() + vertex; }
};

inline ColoringInstance coloring_reduction(const Graph& graph, std::size_t colors) {
  if (colors < 1) throw std::invalid_argument("need at least one color");
  const std::size_t m = graph.vertices;
  if (m < 1) throw std::invalid_argument("graph needs at least one vertex");
  for (auto [a, b] : graph.edges)
    if (a >= m || b >= m || a == b) throw std::invalid_argument("graph edge out of range or a self loop");

  // Pad every vertex to exactly n incident edges with dangling edges that
  // have no second vertex.
  const std::size_t n = std::max<std::size_t>(1, graph.max_degree());
  std::vector<std::size_t> degree(m, 0);
  for (auto [a, b] : graph.edges) {
    ++degree[a];
    ++degree[b];
  }
  const std::size_t real_edges = graph.edges.size();
  std::size_t total = real_edges;
  for (std::size_t v = 0; v < m; ++v) total += n - degree[v];

  Eigen::MatrixXd chi = Eigen::MatrixXd::Zero(static_cast<Eigen::Index>(m), static_cast<Eigen::Index>(total));
  for (std::size_t e = 0; e < real_edges; ++e) {
    chi(static_cast<Eigen::Index>(graph.edges[e].first), static_cast<Eigen::Index>(e)) = 1.0;
    chi(static_cast<Eigen::Index>(graph.edges[e].second), static_cast<Eigen::Index>(e)) = -1.0;
  }
  std::size_t next = real_edges;
  for (std::size_t v = 0; v < m; ++v)
    for (std::size_t d = degree[v]; d < n; ++d) chi(static_cast<Eigen::Index>(v), static_cast<Eigen::Index>(next++)) = 1.0;

  const std::size_t atoms = colors * m;
  Eigen::MatrixXd params = Eigen::MatrixXd::Zero(static_cast<Eigen::Index>(atoms),
                                                 static_cast<Eigen::Index>(colors * total));
  ColoringInstance out;
  out.labels.resize(atoms);
  for (std::size_t c = 0; c < colors; ++c)
    for (std::size_t v = 0; v < m; ++v) {
      const auto a = static_cast<Eigen::Index>(c * m + v);
      params.block(a, static_cast<Eigen::Index>(c * total), 1, static_cast<Eigen::Index>(total)) =
          chi.row(static_cast<Eigen::Index>(v));
      out.labels[static_cast<std::size_t>(a)] = {c, v};
    }

  out.measurements = PointSpace(Eigen::MatrixXd::Identity(static_cast<Eigen::Index>(m), static_cast<Eigen::Index>(m)),
                                MetricKind::euclidean);
  out.parameters = PointSpace(std::move(params), MetricKind::euclidean);
  out.dictionary = Eigen::MatrixXd::Identity(static_cast<Eigen::Index>(atoms), static_cast<Eigen::Index>(atoms));
  out.residual = Eigen::MatrixXd::Zero(static_cast<Eigen::Index>(atoms), static_cast<Eigen::Index>(m));
  for (std::size_t c = 0; c < colors; ++c)
    for (std::size_t v = 0; v < m; ++v) out.residual(static_cast<Eigen::Index>(c * m + v), static_cast<Eigen::Index>(v)) = 1.0;
  out.params = FeasibleParams(kInfinity, std::sqrt(static_cast<double>(n)));
  out.degree = n;
  out.edge_count = total;
  return out;
}

}  // namespace gmomp
