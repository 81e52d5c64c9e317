#include <gtest/gtest.h>

#include <cmath>
#include <random>

#include "gmomp/experiments.hpp"
#include "gmomp/postprocess.hpp"

using namespace gmomp;

namespace {

Pattern diagonal(std::size_t n) {
  Pattern p;
  for (std::size_t i = 0; i < n; ++i) p.insert({i, i});
  return p;
}

}  // namespace

TEST(FitPattern, ExactLine) {
  const PointSpace ms = PointSpace::line(10), ps = PointSpace::line(20);
  Pattern p;
  for (std::size_t i = 0; i < 10; ++i) p.insert({2 * i + 1, i});  // parameter 2(i+1) at measurement i+1
  for (int d : {1, 2, 4}) {
    const FittedStructure f = fit_pattern_polynomial(p, ms, ps, d, 0.0);
    ASSERT_EQ(f.coefficients.size(), static_cast<std::size_t>(d + 1));
    EXPECT_NEAR(f.coefficients[0], 0.0, 1e-9);
    EXPECT_NEAR(f.coefficients[1], 2.0, 1e-9);
    for (int k = 2; k <= d; ++k) EXPECT_NEAR(f.coefficients[static_cast<std::size_t>(k)], 0.0, 1e-9);
    EXPECT_NEAR(f.residual, 0.0, 1e-9);
    EXPECT_EQ(f.lower, 1.0);
    EXPECT_EQ(f.upper, 10.0);
    EXPECT_FALSE(f.rank_deficient);
  }
}

TEST(FitPattern, SinglePairConstant) {
  const PointSpace line = PointSpace::line(8);
  const FittedStructure f = fit_pattern_polynomial(Pattern{{4, 2}}, line, line, 0, 0.0);
  EXPECT_DOUBLE_EQ(f.coefficients[0], 5.0);
  EXPECT_DOUBLE_EQ(f.residual, 0.0);
  EXPECT_DOUBLE_EQ(f(3.0), 5.0);
}

TEST(FitPattern, RankDeficiencyFlagged) {
  const PointSpace line = PointSpace::line(8);
  const FittedStructure f = fit_pattern_polynomial(Pattern{{1, 1}, {3, 2}}, line, line, 4, 0.0);
  EXPECT_TRUE(f.rank_deficient);
  EXPECT_NEAR(f(2.0), 2.0, 1e-9);
  EXPECT_NEAR(f(3.0), 4.0, 1e-9);
}

TEST(FitPattern, RejectsNonLineSpaces) {
  const PointSpace plane(Eigen::MatrixXd::Identity(3, 2), MetricKind::euclidean);
  EXPECT_THROW(fit_pattern_polynomial(Pattern{{0, 0}}, plane, PointSpace::line(3), 1, 0.0), DimensionError);
  EXPECT_THROW(fit_pattern_polynomial(Pattern{}, PointSpace::line(3), PointSpace::line(3), 1, 0.0),
               std::invalid_argument);
}

TEST(FitPattern, PositiveDeltaTradesCoverage) {
  const PointSpace ms = PointSpace::line(12), ps = PointSpace::line(40);
  Pattern p;
  for (std::size_t i = 0; i < 10; ++i) p.insert({5, i});
  const FittedStructure cheap = fit_pattern_polynomial(p, ms, ps, 0, 0.01);
  EXPECT_EQ(cheap.lower, 1.0);
  EXPECT_EQ(cheap.upper, 10.0);
  const FittedStructure costly = fit_pattern_polynomial(p, ms, ps, 0, 5.0);
  EXPECT_EQ(costly.lower, costly.upper);
  EXPECT_DOUBLE_EQ(costly.coefficients[0], 6.0);
  EXPECT_THROW(fit_pattern_polynomial(p, ms, ps, 0, -1.0), std::invalid_argument);
}

TEST(RoundToParameter, NearestWithLowTies) {
  const PointSpace line = PointSpace::line(10);  // p_j = j + 1
  EXPECT_EQ(round_to_parameter(3.4, line), 2u);
  EXPECT_EQ(round_to_parameter(3.5, line), 2u);
  EXPECT_EQ(round_to_parameter(7.0, line), 6u);
  EXPECT_EQ(round_to_parameter(-4.0, line), 0u);
  EXPECT_EQ(round_to_parameter(99.0, line), 9u);
  EXPECT_THROW(round_to_parameter(1.0, PointSpace()), std::invalid_argument);
}

TEST(DenoisePattern, CleanDiagonalUnchanged) {
  const PointSpace line = PointSpace::line(30);
  EXPECT_EQ(denoise_pattern(diagonal(30), line, line, 4, 0.0), diagonal(30));
}

TEST(DenoisePattern, FillsGaps) {
  const PointSpace line = PointSpace::line(20);
  Pattern p;
  for (std::size_t i = 2; i < 18; ++i)
    if (i % 4 != 0) p.insert({i, i});
  const Pattern out = denoise_pattern(p, line, line, 1, 0.0);
  Pattern want;
  for (std::size_t i = 2; i < 18; ++i) want.insert({i, i});
  EXPECT_EQ(out, want);
  EXPECT_TRUE(out.one_atom_per_measurement());
  for (std::size_t m : p.measurements()) EXPECT_TRUE(out.contains({m, m}));
}

TEST(DenoisePattern, IdempotentOnRoundedPolynomial) {
  const PointSpace ms = PointSpace::line(10), ps = PointSpace::line(60);
  Pattern p;
  for (std::size_t i = 0; i < 10; ++i) p.insert({(i + 1) * (i + 2) / 2 - 1, i});  // p = x (x + 1) / 2
  const Pattern once = denoise_pattern(p, ms, ps, 2, 0.0);
  EXPECT_EQ(once, p);
  EXPECT_EQ(denoise_pattern(once, ms, ps, 2, 0.0), once);
}

TEST(DenoisePattern, NoisyConstantRowRoundsBack) {
  const std::size_t n = 128;
  const PointSpace line = PointSpace::line(n);
  Eigen::MatrixXd clean = Eigen::MatrixXd::Zero(n, n);
  clean.row(63).setOnes();
  double on_row = 0.0;
  for (std::uint64_t seed = 0; seed < 100; ++seed) {
    const Eigen::MatrixXd noisy = add_uniform_pattern_noise(clean, 3.0, seed);
    Pattern p;
    for (Eigen::Index k = 0; k < noisy.cols(); ++k)
      for (Eigen::Index j = 0; j < noisy.rows(); ++j)
        if (noisy(j, k) != 0.0) p.insert({static_cast<std::size_t>(j), static_cast<std::size_t>(k)});
    const auto out = denoise_pattern_with_fit(p, line, line, 4, 0.0);
    double worst = 0.0;
    for (std::size_t i = 0; i < n; ++i) worst = std::max(worst, std::abs(out.fit(static_cast<double>(i + 1)) - 64.0));
    bool row = out.pattern.size() == n;
    for (const auto& e : out.pattern) {
      row = row && e.atom == 63;
      on_row += e.atom == 63 ? 1.0 : 0.0;
    }
    if (worst < 0.5) EXPECT_TRUE(row) << "seed " << seed;
  }
  EXPECT_GE(on_row / (100.0 * n), 0.85);
}

TEST(DenoiseAmplitudes, MeanAndLine) {
  const PointSpace line = PointSpace::line(3);
  Eigen::MatrixXd x = Eigen::MatrixXd::Zero(3, 3);
  x(0, 0) = 1.0;
  x(1, 1) = 2.0;
  x(2, 2) = 3.0;
  const Pattern p = diagonal(3);
  const Eigen::MatrixXd mean = denoise_amplitudes(x, p, line, 0);
  for (Eigen::Index i = 0; i < 3; ++i) EXPECT_DOUBLE_EQ(mean(i, i), 2.0);
  EXPECT_NEAR(mean.sum(), x.sum(), 1e-10);
  EXPECT_LE((denoise_amplitudes(x, p, line, 1) - x).cwiseAbs().maxCoeff(), 1e-10);
  EXPECT_EQ(denoise_amplitudes(x, Pattern{{1, 1}}, line, 0), x);
  EXPECT_THROW(denoise_amplitudes(x, Pattern{}, line, 0), std::invalid_argument);
}

TEST(DenoiseAmplitudes, MeanWorksInHigherDimensions) {
  const PointSpace plane(Eigen::MatrixXd::Identity(2, 2), MetricKind::euclidean);
  Eigen::MatrixXd x(1, 2);
  x << 1.0, 3.0;
  const Pattern p{{0, 0}, {0, 1}};
  EXPECT_EQ(denoise_amplitudes(x, p, plane, 0), Eigen::MatrixXd::Constant(1, 2, 2.0));
  EXPECT_THROW(denoise_amplitudes(x, p, plane, 1), DimensionError);
}

TEST(RelocateAmplitudes, MovesAndInpaints) {
  Eigen::MatrixXd x = Eigen::MatrixXd::Zero(4, 3);
  x(0, 0) = 2.0;
  x(3, 2) = 4.0;
  const Eigen::MatrixXd out = relocate_amplitudes(x, Pattern{{0, 0}, {3, 2}}, Pattern{{1, 0}, {1, 1}, {1, 2}});
  EXPECT_EQ(out(1, 0), 2.0);
  EXPECT_EQ(out(1, 1), 3.0);
  EXPECT_EQ(out(1, 2), 4.0);
  EXPECT_EQ(out(0, 0), 0.0);
  EXPECT_EQ(out(3, 2), 0.0);
}
