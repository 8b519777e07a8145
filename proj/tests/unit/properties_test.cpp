#include <gtest/gtest.h>

#include "ier/frobenius_test.hpp"
#include "ier/operator_test.hpp"
#include "support.hpp"

namespace ier {
namespace {

using testing::random_permutation;
using testing::random_prob;

// Hand-rolled generator: a random pair and populations drawn from it, with
// sizes and sparsity varied across draws.
struct Case {
  ModelPair pair;
  GraphPopulation g, h;
};

Case draw_case(RngStream& gen, int index) {
  const int n = 2 + static_cast<int>(gen.uniform_index(20));
  const int m = 2 + static_cast<int>(gen.uniform_index(5));
  const double hi = gen.bernoulli(0.3) ? 0.05 : 1.0;
  ModelPair pair(random_prob(n, gen, 0.0, hi), random_prob(n, gen, 0.0, hi));
  auto g = sample_population(pair.p(), m, gen.substream(2 * index));
  auto h = sample_population(pair.q(), m, gen.substream(2 * index + 1));
  return {std::move(pair), std::move(g), std::move(h)};
}

TEST(Properties, FunctionalInequalities) {
  RngStream gen(1001, 0);
  for (int t = 0; t < 200; ++t) {
    const Case c = draw_case(gen, t);
    const double s1 = frobenius_separation(c.pair);
    const double s2 = operator_separation(c.pair);
    EXPECT_LE(s1 * s1, frobenius_complexity(c.pair) * (1 + 1e-12));
    EXPECT_LE(s2 * s2, row_sum_complexity(c.pair) * (1 + 1e-12));
    EXPECT_LE(frobenius_norm(c.pair.difference()), frobenius_norm(c.pair.sum()) * (1 + 1e-15));
  }
}

TEST(Properties, SwapSymmetry) {
  RngStream gen(1002, 0);
  for (int t = 0; t < 100; ++t) {
    const Case c = draw_case(gen, t);
    const auto a = frobenius_statistic(c.g, c.h);
    const auto b = frobenius_statistic(c.h, c.g);
    EXPECT_EQ(a.numerator, b.numerator);
    EXPECT_EQ(a.value, b.value);
    EXPECT_EQ(operator_statistic(c.g, c.h).value, operator_statistic(c.h, c.g).value);
    const ModelPair swapped(c.pair.q(), c.pair.p());
    EXPECT_EQ(frobenius_separation(swapped), frobenius_separation(c.pair));
    EXPECT_EQ(operator_separation(swapped), operator_separation(c.pair));
  }
}

TEST(Properties, RelabelingInvariance) {
  RngStream gen(1003, 0);
  for (int t = 0; t < 100; ++t) {
    const Case c = draw_case(gen, t);
    const auto perm = random_permutation(c.pair.n(), gen);
    const auto pq = c.pair.permuted(perm);
    EXPECT_NEAR(frobenius_separation(pq), frobenius_separation(c.pair), 1e-12);
    EXPECT_NEAR(operator_separation(pq), operator_separation(c.pair), 1e-10);
    EXPECT_NEAR(frobenius_complexity(pq), frobenius_complexity(c.pair), 1e-12);
    EXPECT_NEAR(row_sum_complexity(pq), row_sum_complexity(c.pair), 1e-12);
    const auto g = c.g.permuted(perm), h = c.h.permuted(perm);
    EXPECT_EQ(frobenius_statistic(g, h).numerator, frobenius_statistic(c.g, c.h).numerator);
    EXPECT_EQ(operator_statistic(g, h).sum_row_sum, operator_statistic(c.g, c.h).sum_row_sum);
    EXPECT_NEAR(operator_statistic(g, h).value, operator_statistic(c.g, c.h).value, 1e-10);
  }
}

TEST(Properties, IdenticalInputsGiveZero) {
  RngStream gen(1004, 0);
  for (int t = 0; t < 50; ++t) {
    const Case c = draw_case(gen, t);
    EXPECT_EQ(frobenius_statistic(c.g, c.g).numerator, 0);
    EXPECT_EQ(operator_statistic(c.g, c.g).value, 0.0);
    EXPECT_FALSE(frobenius_test(c.g, c.g, 0.05).reject);
    EXPECT_FALSE(operator_test(c.g, c.g, 0.05).reject);
    EXPECT_FALSE(sparse_operator_test(c.g, c.g, 0.05).reject);
  }
}

}  // namespace
}  // namespace ier
