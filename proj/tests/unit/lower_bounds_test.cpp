#include <gtest/gtest.h>

#include <cmath>

#include "ier/errors.hpp"
#include "ier/lower_bounds.hpp"
#include "support.hpp"

namespace ier {
namespace {

double rel(double a, double b) { return std::abs(a - b) / std::abs(b); }

struct ChiCase {
  int m;
  double p, gamma;
  double sign_flip;          // closed form == enumeration (mpmath)
  double planted_partition;  // enumeration (mpmath)
};

// Reference values from tests/oracle/oracles.py, which enumerates only the Q
// side in exact arithmetic.
const ChiCase kChiCases[] = {
    {1, 0.3, 0.1, 1.0, 1.0001079796998164345},
    {1, 0.3, 0.25, 1.0, 1.0263622314004967066},
    {1, 0.5, 0.1, 1.0, 1.000064},
    {1, 0.5, 0.25, 1.0, 1.015625},
    {2, 0.3, 0.1, 1.0068181584194532944, 1.0076819960179847705},
    {2, 0.3, 0.25, 1.2899639663690064825, 1.5008618175729801354},
    {2, 0.5, 0.1, 1.004807684096, 1.005319684096},
    {2, 0.5, 0.25, 1.199462890625, 1.324462890625},
};

TEST(SignFlipChiSquare, ClosedFormReferenceValues) {
  for (const auto& c : kChiCases)
    EXPECT_LT(rel(sign_flip_chi_square(3, c.m, c.p, c.gamma), c.sign_flip), 1e-14)
        << c.m << " " << c.p << " " << c.gamma;
  EXPECT_NEAR(sign_flip_chi_square(10, 4, 0.3, 0.05), 1.0389908953240479, 1e-13);
}

TEST(SignFlipChiSquare, BruteForceAgrees) {
  for (const auto& c : kChiCases) {
    const auto family = sign_flip_family({3, c.p, c.gamma});
    ASSERT_EQ(family.size(), 8u);
    const double bf = brute_force_chi_square(er_null_pair(3, c.p), family, c.m);
    EXPECT_LT(rel(bf, c.sign_flip), 1e-12);
  }
}

TEST(PlantedPartitionChiSquare, BruteForceReferenceAndBound) {
  for (const auto& c : kChiCases) {
    const auto family = planted_partition_family({3, c.p, c.gamma});
    const double bf = brute_force_chi_square(er_null_pair(3, c.p), family, c.m);
    EXPECT_LT(rel(bf, c.planted_partition), 1e-12);
    EXPECT_LE(bf, planted_partition_chi_square_bound(3, c.m, c.p, c.gamma));
  }
}

TEST(SignFlipChiSquare, SingleSampleIsAlwaysOne) {
  for (double p : {0.05, 0.2, 0.5})
    for (double g : {0.0, p / 3, p})
      EXPECT_NEAR(sign_flip_chi_square(25, 1, p, g), 1.0, 1e-12);
}

TEST(SignFlipChiSquare, MonotoneAndDomain) {
  EXPECT_EQ(sign_flip_chi_square(10, 3, 0.3, 0.0), 1.0);
  EXPECT_LT(sign_flip_chi_square(10, 3, 0.3, 0.05), sign_flip_chi_square(10, 3, 0.3, 0.1));
  EXPECT_LT(sign_flip_chi_square(10, 3, 0.3, 0.05), sign_flip_chi_square(10, 4, 0.3, 0.05));
  EXPECT_THROW(sign_flip_chi_square(10, 3, 0.3, 0.4), DomainError);
  EXPECT_THROW(sign_flip_chi_square(10, 3, 0.0, 0.0), DomainError);
}

TEST(RiskLowerBound, FromChi) {
  EXPECT_EQ(risk_lower_bound_from_chi(1.0), 1.0);
  EXPECT_NEAR(risk_lower_bound_from_chi(1.0389908953240479), 0.90126943821180807, 1e-13);
  EXPECT_EQ(risk_lower_bound_from_chi(5.0), 0.0);
  EXPECT_EQ(risk_lower_bound_from_chi(1e300), 0.0);
}

TEST(CriticalGamma, ReferenceValues) {
  EXPECT_NEAR(sign_flip_critical_gamma(50, 8, 0.3, 0.05), 0.030449324300247276, 1e-15);
  EXPECT_NEAR(planted_partition_critical_gamma(50, 8, 0.3, 0.05), 0.0048412291827592711,
              1e-15);
}

TEST(CriticalGamma, HoldsTheRiskBoundAtEta) {
  // At the critical gamma the sign-flip chi-square keeps the risk bound >= eta
  // for small gamma^2 / (p(1-p)).
  for (int m : {2, 4, 8}) {
    const double g = sign_flip_critical_gamma(50, m, 0.3, 0.05);
    const double chi = sign_flip_chi_square(50, m, 0.3, g);
    EXPECT_GE(risk_lower_bound_from_chi(chi), 0.05) << m;
  }
}

TEST(PlantedPartitionBound, Validity) {
  EXPECT_TRUE(planted_partition_bound_valid(50, 8, 0.3, std::sqrt(0.3 / (32 * 8 * 50))));
  EXPECT_FALSE(planted_partition_bound_valid(50, 8, 0.3, 0.01));
  EXPECT_NEAR(planted_partition_chi_square_bound(3, 2, 0.5, 0.25), 2.1170000166126746685,
              1e-13);
}

TEST(Constructions, Validate) {
  EXPECT_THROW((SignFlipConstruction{3, 0.6, 0.1}.check()), DomainError);
  EXPECT_THROW((SignFlipConstruction{3, 0.3, 0.4}.check()), DomainError);
  EXPECT_THROW((PlantedPartitionConstruction{1, 0.3, 0.1}.check()), DomainError);
  EXPECT_NO_THROW((PlantedPartitionConstruction{3, 0.5, 0.5}.check()));
}

TEST(Constructions, Shapes) {
  RngStream rng(4, 0);
  const auto sf = sample_sign_flip_alternative({6, 0.3, 0.1}, rng);
  for (int i = 0; i < 6; ++i)
    for (int j = 0; j < 6; ++j)
      if (i != j) EXPECT_NEAR(std::abs(sf.q()(i, j) - 0.3), 0.1, 1e-15);
  const auto pp = planted_partition_alternative({4, 0.3, 0.1}, {1, 1, -1, -1});
  EXPECT_NEAR(pp.q()(0, 1), 0.4, 1e-15);
  EXPECT_NEAR(pp.q()(0, 2), 0.2, 1e-15);
  EXPECT_NEAR(pp.q()(2, 3), 0.4, 1e-15);
  EXPECT_EQ(pp.p(), ProbabilityMatrix::constant(4, 0.3));
  EXPECT_EQ(planted_partition_family({4, 0.3, 0.1}).size(), 16u);
}

TEST(BruteForce, GuardsAndErrors) {
  const auto null_pair = er_null_pair(3, 0.5);
  EXPECT_THROW(brute_force_chi_square(null_pair, {}, 1), DimensionError);
  const auto family = sign_flip_family({3, 0.5, 0.1});
  EXPECT_THROW(brute_force_chi_square(null_pair, family, 5), TooLargeToEnumerate);
  EXPECT_THROW(brute_force_chi_square(er_null_pair(5, 0.5), sign_flip_family({5, 0.5, 0.1}), 2),
               TooLargeToEnumerate);
  // A deterministic null cannot dominate a random alternative.
  const ModelPair degenerate(ProbabilityMatrix::zeros(2), ProbabilityMatrix::zeros(2));
  EXPECT_THROW(brute_force_chi_square(degenerate, {er_null_pair(2, 0.5)}, 1),
               DivergentChiSquare);
}

TEST(BruteForce, NullAgainstItselfIsOne) {
  const auto null_pair = er_null_pair(3, 0.3);
  EXPECT_NEAR(brute_force_chi_square(null_pair, {null_pair}, 2), 1.0, 1e-13);
}

}  // namespace
}  // namespace ier
