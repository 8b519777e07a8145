#include <gtest/gtest.h>

#include "ier/errors.hpp"
#include "ier/spectral.hpp"
#include "support.hpp"

namespace ier {
namespace {

RealMatrix mat(std::initializer_list<std::initializer_list<double>> rows) {
  RealMatrix m(static_cast<Eigen::Index>(rows.size()), static_cast<Eigen::Index>(rows.size()));
  Eigen::Index i = 0;
  for (const auto& r : rows) {
    Eigen::Index j = 0;
    for (double v : r) m(i, j++) = v;
    ++i;
  }
  return m;
}

SpectralConfig iterative_only() {
  SpectralConfig cfg;
  cfg.exact_cutoff = 1;
  return cfg;
}

TEST(OperatorNorm, SmallExamples) {
  EXPECT_DOUBLE_EQ(operator_norm_exact(mat({{0, 3}, {3, 0}})), 3.0);
  EXPECT_DOUBLE_EQ(operator_norm_exact(mat({{-5, 0}, {0, 2}})), 5.0);
  EXPECT_EQ(operator_norm_exact(RealMatrix::Zero(4, 4)), 0.0);
  // All-ones off the diagonal: eigenvalues n - 1 and -1.
  RealMatrix j = RealMatrix::Ones(6, 6) - RealMatrix::Identity(6, 6);
  EXPECT_NEAR(operator_norm_exact(j), 5.0, 1e-12);
}

TEST(OperatorNorm, IntegerFixture) {
  RealMatrix m(12, 12);
  for (int i = 0; i < 12; ++i)
    for (int j = 0; j < 12; ++j) m(i, j) = ((i * i + j * j + 3 * i * j) % 9) - 4;
  EXPECT_NEAR(operator_norm_exact(m), 22.551361661441668, 1e-12);
  RngStream rng(0, 0);
  EXPECT_NEAR(operator_norm_iterative(m, {}, rng), 22.551361661441668, 1e-9);
}

TEST(OperatorNorm, RejectsAsymmetric) {
  EXPECT_THROW(operator_norm_exact(mat({{0, 1}, {2, 0}})), AsymmetryError);
  RngStream rng(0, 0);
  EXPECT_THROW(operator_norm_iterative(mat({{0, 1}, {2, 0}}), {}, rng), AsymmetryError);
  EXPECT_THROW(operator_norm_exact(RealMatrix::Zero(2, 3)), DimensionError);
}

TEST(OperatorNorm, SignSymmetric) {
  RngStream gen(4, 4);
  for (int t = 0; t < 20; ++t) {
    const RealMatrix m = testing::random_symmetric_int(10 + t, 5, gen);
    EXPECT_EQ(operator_norm_exact(m), operator_norm_exact(-m));
    EXPECT_EQ(operator_norm(m, iterative_only()), operator_norm(-m, iterative_only()));
  }
}

TEST(OperatorNorm, IterativeMatchesExact) {
  RngStream gen(8, 1);
  for (int n : {2, 3, 8, 33, 64, 120}) {
    for (int t = 0; t < 5; ++t) {
      const RealMatrix m = testing::random_symmetric_int(n, 10, gen);
      const double exact = operator_norm_exact(m);
      const double iter = operator_norm(m, iterative_only());
      EXPECT_NEAR(iter, exact, 1e-8 * std::max(1.0, exact)) << "n=" << n;
    }
  }
}

TEST(OperatorNorm, LowRankAndDegenerateSpectra) {
  // Rank one: invariant subspace after one step.
  Eigen::VectorXd v = Eigen::VectorXd::LinSpaced(40, -1.0, 2.0);
  const RealMatrix r1 = v * v.transpose();
  EXPECT_NEAR(operator_norm(r1, iterative_only()), v.squaredNorm(), 1e-9 * v.squaredNorm());
  // +-lambda pair of equal magnitude.
  RealMatrix d = RealMatrix::Zero(30, 30);
  d(0, 0) = 4;
  d(1, 1) = -4;
  EXPECT_NEAR(operator_norm(d, iterative_only()), 4.0, 1e-9);
  EXPECT_EQ(operator_norm(RealMatrix::Zero(30, 30), iterative_only()), 0.0);
}

TEST(OperatorNorm, ReportsNonConvergenceWithEstimate) {
  RngStream gen(2, 2);
  const RealMatrix m = testing::random_symmetric_int(200, 10, gen);
  SpectralConfig cfg = iterative_only();
  cfg.max_iter = 3;
  RngStream rng(0, 0);
  try {
    operator_norm_iterative(m, cfg, rng);
    FAIL() << "expected NoConvergence";
  } catch (const NoConvergence& e) {
    EXPECT_EQ(e.iterations(), 3);
    EXPECT_GT(e.best_estimate(), 0.0);
    EXPECT_LE(e.best_estimate(), operator_norm_exact(m) * (1 + 1e-12));
  }
}

TEST(OperatorNorm, DeterministicDispatch) {
  RngStream gen(1, 9);
  const RealMatrix m = testing::random_symmetric_int(50, 3, gen);
  EXPECT_EQ(operator_norm(m, iterative_only()), operator_norm(m, iterative_only()));
}

TEST(SpectralConfig, Validates) {
  SpectralConfig cfg;
  EXPECT_NO_THROW(cfg.check());
  EXPECT_EQ(cfg.iteration_cap(10), 1100);
  cfg.tol = 0.0;
  EXPECT_THROW(cfg.check(), ConfigError);
  cfg = {};
  cfg.exact_cutoff = 0;
  EXPECT_THROW(cfg.check(), ConfigError);
  cfg = {};
  cfg.max_iter = -1;
  EXPECT_THROW(cfg.check(), ConfigError);
}

}  // namespace
}  // namespace ier
