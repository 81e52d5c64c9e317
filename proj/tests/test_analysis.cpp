#include <gtest/gtest.h>

#include <cmath>
#include <random>

#include "fixtures.hpp"
#include "gmomp/analysis.hpp"
#include "oracles.hpp"

using namespace gmomp;

namespace {

// Dictionary whose Gram matrix is exactly g.
Dictionary from_gram(const Eigen::MatrixXd& g) {
  Eigen::LLT<Eigen::MatrixXd> llt(g);
  const Eigen::MatrixXd atoms = llt.matrixL().transpose();
  return Dictionary(atoms, PointSpace::line(static_cast<std::size_t>(g.cols())));
}

Dictionary pair_with_coherence(double c) {
  Eigen::MatrixXd g(2, 2);
  g << 1, c, c, 1;
  return from_gram(g);
}

}  // namespace

TEST(Babel, OrthonormalIsZero) {
  std::mt19937_64 rng(1);
  const Dictionary d = fixtures::orthonormal_dictionary(6, rng);
  const BabelTable mu(d);
  for (std::size_t l = 0; l < 6; ++l) EXPECT_NEAR(mu(l), 0.0, 1e-12);
}

TEST(Babel, SingleCoherence) {
  EXPECT_NEAR(babel(pair_with_coherence(0.5), 1), 0.5, 1e-12);
  EXPECT_THROW(babel(pair_with_coherence(0.5), 2), std::invalid_argument);
}

TEST(Babel, MatchesSubsetEnumeration) {
  std::mt19937_64 rng(2);
  for (int r = 0; r < 10; ++r) {
    const Dictionary d = fixtures::random_dictionary(6, 8, rng);
    const BabelTable mu(d);
    double prev = 0.0;
    for (std::size_t l = 0; l < 8; ++l) {
      EXPECT_NEAR(mu(l), oracle::babel(d.atoms(), l), 1e-12) << "l = " << l;
      EXPECT_GE(mu(l), prev);
      EXPECT_LE(mu(l), static_cast<double>(l) * mu(1) + 1e-12);
      prev = mu(l);
    }
  }
}

TEST(RecoveryCondition, Examples) {
  std::mt19937_64 rng(3);
  const Dictionary ortho = fixtures::orthonormal_dictionary(5, rng);
  for (std::size_t l = 1; l < 5; ++l) EXPECT_TRUE(exact_recovery_condition(ortho, l, 1.0));
  const Dictionary d = pair_with_coherence(0.6);
  EXPECT_TRUE(exact_recovery_condition(d, 1, 1.0));
  EXPECT_FALSE(exact_recovery_condition(d, 1, 0.5));
  EXPECT_THROW(exact_recovery_condition(d, 2, 1.0), std::invalid_argument);
  EXPECT_THROW(exact_recovery_condition(d, 1, 0.0), std::invalid_argument);
}

TEST(BetaThreshold, Examples) {
  std::mt19937_64 rng(4);
  EXPECT_NEAR(beta_threshold(fixtures::orthonormal_dictionary(5, rng), 3), 0.0, 1e-12);
  EXPECT_NEAR(beta_threshold(pair_with_coherence(0.3), 1), 0.3, 1e-12);
  Eigen::MatrixXd g(3, 3);
  g << 1, 0.3, 0.2, 0.3, 1, 0, 0.2, 0, 1;
  const Dictionary d = from_gram(g);
  EXPECT_NEAR(babel(d, 1), 0.3, 1e-12);
  EXPECT_NEAR(babel(d, 2), 0.5, 1e-12);
  EXPECT_NEAR(beta_threshold(d, 2), 0.5 / 0.7, 1e-12);
}

TEST(BetaThreshold, UndefinedWhenBabelReachesOne) {
  // Four copies of nearly the same direction: mu_1(1) is close to 1, mu_1(2) > 1.
  Eigen::MatrixXd a(2, 4);
  a << 1, 1, 1, 1, 0, 0.01, 0.02, 0.03;
  const Dictionary d(a, PointSpace::line(4));
  EXPECT_THROW(beta_threshold(d, 3), std::domain_error);
}

TEST(RecoveryReport, Fields) {
  Eigen::MatrixXd g(3, 3);
  g << 1, 0.3, 0.2, 0.3, 1, 0, 0.2, 0, 1;
  const RecoveryReport r = recovery_report(from_gram(g), 2, 0.9);
  ASSERT_EQ(r.babel_values.size(), 3u);
  EXPECT_EQ(r.babel_values[0], 0.0);
  EXPECT_NEAR(r.beta, 0.5 / 0.7, 1e-12);
  EXPECT_TRUE(r.condition_exact);
  EXPECT_TRUE(r.condition_beta);
  EXPECT_EQ(r.lambda, 0.9);
}

TEST(UniformNoiseTau, Examples) {
  EXPECT_DOUBLE_EQ(uniform_noise_tau(1.0, 6.0, 1.0).tau_hat, 13.0);
  EXPECT_DOUBLE_EQ(uniform_noise_tau(2.5, 0.0, 1.0).tau_hat, 2.5);
  const auto t = uniform_noise_tau(0.0, 1.0, 2.0);
  EXPECT_DOUBLE_EQ(t.tau_hat, 1.0);
  EXPECT_DOUBLE_EQ(t.tau_separation, 2.0);
  EXPECT_THROW(uniform_noise_tau(1.0, 1.0, 0.0), std::invalid_argument);
}

TEST(BernoulliBound, Examples) {
  EXPECT_NEAR(bernoulli_connectivity_bound(0.25, 6, 1000), 0.7843, 1e-4);
  EXPECT_GT(bernoulli_connectivity_bound(0.25, 6, 1000), 0.78);
  EXPECT_EQ(bernoulli_connectivity_bound(0.0, 3, 10), 1.0);
  EXPECT_DOUBLE_EQ(bernoulli_connectivity_bound(0.5, 1, 3), 0.125);
  EXPECT_THROW(bernoulli_connectivity_bound(1.5, 1, 3), std::invalid_argument);
  EXPECT_THROW(bernoulli_connectivity_bound(0.5, 4, 3), std::invalid_argument);
}

TEST(BernoulliBound, MonteCarloStaysAbove) {
  for (auto [eps, k, m] : {std::tuple{0.25, 3u, 100u}, std::tuple{0.1, 2u, 200u}, std::tuple{0.4, 4u, 150u}}) {
    const auto est = connectivity_monte_carlo(eps, k, m, 10000, 77, 2);
    EXPECT_GE(est.frequency, bernoulli_connectivity_bound(eps, k, m) - 3.0 * est.standard_error);
  }
}

TEST(BernoulliBound, MonteCarloIndependentOfThreads) {
  const auto a = connectivity_monte_carlo(0.4, 2, 40, 500, 9, 1);
  const auto b = connectivity_monte_carlo(0.4, 2, 40, 500, 9, 3);
  EXPECT_EQ(a.frequency, b.frequency);
}

TEST(ColoringReduction, TriangleDistances) {
  const Graph k3{3, {{0, 1}, {1, 2}, {0, 2}}};
  const ColoringInstance inst = coloring_reduction(k3, 3);
  EXPECT_EQ(inst.degree, 2u);
  EXPECT_EQ(inst.edge_count, 3u);
  EXPECT_DOUBLE_EQ(inst.params.tau, std::sqrt(2.0));
  EXPECT_NEAR(inst.parameters.distance(inst.atom(1, 0), inst.atom(1, 2)), std::sqrt(6.0), 1e-12);
  EXPECT_NEAR(inst.parameters.distance(inst.atom(0, 0), inst.atom(2, 1)), 2.0, 1e-12);
  EXPECT_NEAR(inst.parameters.distance(inst.atom(0, 1), inst.atom(1, 1)), 2.0, 1e-12);
  EXPECT_EQ(inst.labels[inst.atom(2, 1)], (std::pair<std::size_t, std::size_t>{2, 1}));
}

TEST(ColoringReduction, PathDistances) {
  const ColoringInstance inst = coloring_reduction(Graph{2, {{0, 1}}}, 2);
  EXPECT_EQ(inst.degree, 1u);
  EXPECT_NEAR(inst.parameters.distance(inst.atom(0, 0), inst.atom(0, 1)), 2.0, 1e-12);
  EXPECT_NEAR(inst.parameters.distance(inst.atom(0, 0), inst.atom(1, 1)), std::sqrt(2.0), 1e-12);
}

TEST(ColoringReduction, DanglingEdgesPadDegree) {
  // Star with centre 0: leaves get n - 1 dangling edges each.
  const ColoringInstance inst = coloring_reduction(Graph{4, {{0, 1}, {0, 2}, {0, 3}}}, 2);
  EXPECT_EQ(inst.degree, 3u);
  EXPECT_EQ(inst.edge_count, 3u + 3u * 2u);
  EXPECT_NEAR(inst.parameters.distance(inst.atom(0, 1), inst.atom(0, 2)), std::sqrt(6.0), 1e-12);
  EXPECT_NEAR(inst.parameters.distance(inst.atom(0, 0), inst.atom(0, 2)), std::sqrt(8.0), 1e-12);
}

TEST(ColoringReduction, SelectionReachesMIffColorable) {
  const std::vector<Graph> graphs{
      {1, {}}, {2, {{0, 1}}}, {3, {{0, 1}, {1, 2}, {0, 2}}}, {4, {{0, 1}, {1, 2}, {2, 3}, {3, 0}}},
      {4, {{0, 1}, {1, 2}, {2, 3}, {3, 0}, {0, 2}}}};
  for (const auto& g : graphs)
    for (std::size_t colors = 1; colors <= 3; ++colors) {
      const ColoringInstance inst = coloring_reduction(g, colors);
      const Eigen::MatrixXd c = (inst.dictionary.transpose() * inst.residual).cwiseAbs();
      const Eigen::MatrixXd dm = oracle::distance_table(inst.measurements.coordinates(), 0);
      const Eigen::MatrixXd dp = oracle::distance_table(inst.parameters.coordinates(), 0);
      const std::size_t best = oracle::best_unit_count(c, dm, dp, inst.params.sigma, inst.params.tau);
      EXPECT_EQ(best == g.vertices, oracle::colorable(g.vertices, g.edges, colors))
          << g.vertices << " vertices, " << colors << " colors";
    }
}

TEST(ColoringReduction, RejectsSelfLoops) {
  EXPECT_THROW(coloring_reduction(Graph{2, {{1, 1}}}, 2), std::invalid_argument);
  EXPECT_THROW(coloring_reduction(Graph{2, {}}, 0), std::invalid_argument);
}
