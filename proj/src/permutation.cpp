#include "ier/permutation.hpp"

#include <numeric>

#include "ier/errors.hpp"
#include "ier/frobenius_test.hpp"
#include "ier/operator_test.hpp"

namespace ier {

std::string to_string(PermutationStatistic s) {
  return s == PermutationStatistic::kFrobenius ? "t1" : "t2";
}

PermutationStatistic parse_permutation_statistic(const std::string& name) {
  if (name == "t1") return PermutationStatistic::kFrobenius;
  if (name == "t2") return PermutationStatistic::kOperator;
  throw ConfigError("unknown permutation statistic '" + name + "' (expected t1 or t2)");
}

namespace {

struct Evaluated {
  double value;
  bool converged;
};

Evaluated evaluate(PermutationStatistic s, const GraphRefs& g, const GraphRefs& h,
                   const SpectralConfig& cfg) {
  if (s == PermutationStatistic::kFrobenius)
    return {frobenius_statistic(g, h).value, true};
  const OperatorStatistic t = operator_statistic(g, h, cfg);
  return {t.value, t.converged};
}

}  // namespace

PermutationResult permutation_pvalue(const GraphPopulation& g,
                                     const GraphPopulation& h,
                                     PermutationStatistic statistic, int B,
                                     const RngStream& rng,
                                     const PermutationOptions& options) {
  if (B < 1) throw SampleSizeError("permutation count B must be >= 1");
  if (g.m() != h.m()) throw DimensionError("both populations must have the same size m");
  if (g.n() != h.n()) throw DimensionError("populations must share the vertex count");
  const int m = g.m();
  if (statistic == PermutationStatistic::kFrobenius && m < 2)
    throw SampleSizeError("the t1 permutation test needs m >= 2");

  GraphRefs pool = refs(g);
  const GraphRefs hr = refs(h);
  pool.insert(pool.end(), hr.begin(), hr.end());

  PermutationResult out;
  out.permutations = B;
  const Evaluated observed = evaluate(statistic, refs(g), hr, options.spectral);
  out.observed = observed.value;
  out.unconverged += observed.converged ? 0 : 1;
  if (options.keep_draws) out.null_draws.reserve(static_cast<std::size_t>(B));

  std::vector<int> order(pool.size());
  GraphRefs pg(static_cast<std::size_t>(m)), ph(static_cast<std::size_t>(m));
  for (int b = 0; b < B; ++b) {
    RngStream stream = rng.substream(static_cast<std::uint64_t>(b));
    std::iota(order.begin(), order.end(), 0);
    for (std::size_t i = order.size() - 1; i > 0; --i)
      std::swap(order[i], order[stream.uniform_index(i + 1)]);
    for (int k = 0; k < m; ++k) {
      pg[k] = pool[order[k]];
      ph[k] = pool[order[m + k]];
    }
    const Evaluated draw = evaluate(statistic, pg, ph, options.spectral);
    out.unconverged += draw.converged ? 0 : 1;
    if (draw.value >= out.observed) ++out.exceedances;
    if (options.keep_draws) out.null_draws.push_back(draw.value);
  }
  out.p_value = (1.0 + out.exceedances) / (B + 1.0);
  return out;
}

TestOutcome permutation_test(const GraphPopulation& g, const GraphPopulation& h,
                             PermutationStatistic statistic, double alpha, int B,
                             const RngStream& rng,
                             const PermutationOptions& options) {
  if (!(alpha > 0.0 && alpha <= 1.0)) throw DomainError("alpha must lie in (0, 1]");
  const PermutationResult r = permutation_pvalue(g, h, statistic, B, rng, options);

  TestOutcome out;
  out.test = "perm_" + to_string(statistic);
  out.statistic = r.observed;
  out.eta = alpha;
  out.thresholds = {{"p_value", r.p_value}, {"alpha", alpha},
                    {"permutations", static_cast<double>(B)}};
  out.indicators = {{"p_value_at_most_alpha", r.p_value <= alpha}};
  out.guarantee = {"permutation", to_string(statistic) == "t1" ? "frobenius" : "operator",
                   0.0, 0.0, {{"exceedances", static_cast<double>(r.exceedances)}},
                   "type-I error <= alpha under exchangeability (P = Q); no "
                   "separation region is certified"};
  if (r.unconverged > 0) {
    out.flagged = true;
    out.flag_reason = "operator norm iteration did not converge for " +
                      std::to_string(r.unconverged) + " statistic evaluations";
  }
  settle(out);
  return out;
}

}  // namespace ier
