#pragma once

#include <string>
#include <vector>

#include "ier/model.hpp"
#include "ier/rng.hpp"
#include "ier/spectral.hpp"
#include "ier/test_outcome.hpp"

namespace ier {

enum class PermutationStatistic { kFrobenius, kOperator };

/// "t1" / "t2".
std::string to_string(PermutationStatistic s);
/// Throws ConfigError on an unknown name.
PermutationStatistic parse_permutation_statistic(const std::string& name);

struct PermutationResult {
  double observed = 0.0;
  /// (1 + #{b : stat_b >= observed}) / (B + 1).
  double p_value = 1.0;
  int permutations = 0;
  int exceedances = 0;
  /// Permuted statistics in draw order, when retention was requested.
  std::vector<double> null_draws;
  /// Number of statistic evaluations whose spectral iteration did not converge.
  int unconverged = 0;
};

struct PermutationOptions {
  bool keep_draws = false;
  SpectralConfig spectral;
};

/// Monte Carlo permutation p-value. The 2m pooled graphs are relabeled B
/// times by uniform random permutations; the first m pooled positions form
/// the pseudo-G population and the rest pseudo-H, each in permuted order.
/// Permutation b draws from rng.substream(b).
///
/// Throws SampleSizeError when m < 2 for t1, or B < 1; DimensionError on
/// mismatched populations.
PermutationResult permutation_pvalue(const GraphPopulation& g,
                                     const GraphPopulation& h,
                                     PermutationStatistic statistic, int B,
                                     const RngStream& rng,
                                     const PermutationOptions& options = {});

/// Reject iff p_value <= alpha (test ids "perm_t1" / "perm_t2").
TestOutcome permutation_test(const GraphPopulation& g, const GraphPopulation& h,
                             PermutationStatistic statistic, double alpha, int B,
                             const RngStream& rng,
                             const PermutationOptions& options = {});

}  // namespace ier
