#pragma once

#include <cstdint>
#include <vector>

#include "ier/model.hpp"
#include "ier/rng.hpp"

namespace ier {

// Adversarial constructions for minimax lower bounds. Both start from the
// Erdős–Rényi null pair (P, Q) with every off-diagonal entry equal to p and
// perturb Q by +-gamma:
//   sign flip:         Q_ij = p + eps_ij gamma,   eps_ij i.i.d. uniform signs
//   planted partition: Q_ij = p + gamma v_i v_j,  v uniform in {+-1}^n
// The first is hard for Frobenius-separated testing, the second (a two-block
// stochastic block model) for operator-norm-separated testing.

/// Sign-flip construction; requires 0 < p <= 1/2 and 0 < gamma <= p.
struct SignFlipConstruction {
  int n = 2;
  double p = 0.5;
  double gamma = 0.0;
  void check() const;
};

/// Planted-partition construction; same parameter constraints.
struct PlantedPartitionConstruction {
  int n = 2;
  double p = 0.5;
  double gamma = 0.0;
  void check() const;
};

ModelPair er_null_pair(int n, double p);

/// Draws eps for i < j in row-major order.
ModelPair sample_sign_flip_alternative(const SignFlipConstruction& c,
                                       RngStream& rng);
ModelPair sign_flip_alternative(const SignFlipConstruction& c,
                                const std::vector<int>& signs);

/// Draws v_0, ..., v_{n-1}. v and -v give the same Q; drawing v uniformly
/// weights every distinct Q equally.
ModelPair sample_planted_partition_alternative(
    const PlantedPartitionConstruction& c, RngStream& rng);
ModelPair planted_partition_alternative(const PlantedPartitionConstruction& c,
                                        const std::vector<int>& labels);

/// All 2^(n(n-1)/2) sign-flip alternatives (n <= 7), in sign-mask order.
std::vector<ModelPair> sign_flip_family(const SignFlipConstruction& c);
/// All 2^n labelings (n <= 20), each Q appearing twice.
std::vector<ModelPair> planted_partition_family(const PlantedPartitionConstruction& c);

/// Exact likelihood-ratio second moment of the uniform sign-flip mixture
/// against the null pair:
///   [ (1 + g)^m / 2 + (1 - g)^m / 2 ]^(n(n-1)/2),   g = gamma^2 / (p(1-p)).
/// Requires 0 < p < 1, 0 <= gamma <= min(p, 1-p); throws DomainError.
double sign_flip_chi_square(int n, int m, double p, double gamma);

/// Upper bound exp(m n gamma^2 / p) on the planted-partition second moment.
/// It is a bound, not the exact value, and holds when
/// gamma <= sqrt(p / (32 m n)); see planted_partition_bound_valid.
double planted_partition_chi_square_bound(int n, int m, double p, double gamma);
bool planted_partition_bound_valid(int n, int m, double p, double gamma);

/// clamp(1 - sqrt(chi - 1) / 2, 0, 1): lower bound on the minimax risk.
double risk_lower_bound_from_chi(double chi);

/// (ln(1 + 4(1-eta)^2))^(1/4) sqrt(p/(m n)): largest gamma for which the
/// sign-flip mixture is provably indistinguishable at level eta.
double sign_flip_critical_gamma(int n, int m, double p, double eta);

/// min(sqrt(ln(1 + 4(1-eta)^2)), 1/sqrt(32)) sqrt(p/(m n)).
double planted_partition_critical_gamma(int n, int m, double p, double eta);

/// Exact sum over all 2m-tuples of graphs w = (G_1..G_m, H_1..H_m) of
/// (mean over alternatives of P_alt(w))^2 / P_null(w), by enumeration.
///
/// Throws TooLargeToEnumerate unless n(n-1)/2 * 2m <= 24, DimensionError if
/// the family is empty or sizes disagree, DivergentChiSquare if some w has
/// null probability zero but positive alternative probability.
double brute_force_chi_square(const ModelPair& null_pair,
                              const std::vector<ModelPair>& alternatives, int m);

inline constexpr int kMaxEnumerationBits = 24;

}  // namespace ier
