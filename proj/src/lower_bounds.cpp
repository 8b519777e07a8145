#include "ier/lower_bounds.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>

#include "ier/errors.hpp"
#include "ier/frobenius_test.hpp"

namespace ier {

namespace {

void check_construction(int n, double p, double gamma) {
  if (n < 2) throw DomainError("construction needs n >= 2");
  if (!(p > 0.0 && p <= 0.5)) throw DomainError("construction needs 0 < p <= 1/2");
  if (!(gamma >= 0.0 && gamma <= p))
    throw DomainError("construction needs 0 <= gamma <= p");
}

void check_mnp(int n, int m, double p) {
  if (n < 1 || m < 1) throw DomainError("n and m must be positive");
  if (!(p > 0.0 && p < 1.0)) throw DomainError("p must lie in (0, 1)");
}

ModelPair with_q(int n, double p, const RealMatrix& q) {
  return {ProbabilityMatrix::constant(n, p), ProbabilityMatrix::validate(q)};
}

// Neumaier-compensated running sum.
struct CompensatedSum {
  double sum = 0.0;
  double carry = 0.0;
  void add(double x) {
    const double t = sum + x;
    if (std::abs(sum) >= std::abs(x))
      carry += (sum - t) + x;
    else
      carry += (x - t) + sum;
    sum = t;
  }
  double value() const { return sum + carry; }
};

}  // namespace

void SignFlipConstruction::check() const { check_construction(n, p, gamma); }
void PlantedPartitionConstruction::check() const { check_construction(n, p, gamma); }

ModelPair er_null_pair(int n, double p) {
  return {ProbabilityMatrix::constant(n, p), ProbabilityMatrix::constant(n, p)};
}

ModelPair sign_flip_alternative(const SignFlipConstruction& c,
                                const std::vector<int>& signs) {
  c.check();
  const std::size_t pairs = static_cast<std::size_t>(c.n) * (c.n - 1) / 2;
  if (signs.size() != pairs) throw DimensionError("need one sign per vertex pair");
  RealMatrix q = RealMatrix::Zero(c.n, c.n);
  std::size_t e = 0;
  for (int i = 0; i < c.n; ++i)
    for (int j = i + 1; j < c.n; ++j, ++e) {
      const double v = c.p + (signs[e] > 0 ? c.gamma : -c.gamma);
      q(i, j) = v;
      q(j, i) = v;
    }
  return with_q(c.n, c.p, q);
}

ModelPair sample_sign_flip_alternative(const SignFlipConstruction& c,
                                       RngStream& rng) {
  c.check();
  std::vector<int> signs(static_cast<std::size_t>(c.n) * (c.n - 1) / 2);
  for (auto& s : signs) s = (rng.next_u64() >> 63) ? 1 : -1;
  return sign_flip_alternative(c, signs);
}

ModelPair planted_partition_alternative(const PlantedPartitionConstruction& c,
                                        const std::vector<int>& labels) {
  c.check();
  if (static_cast<int>(labels.size()) != c.n)
    throw DimensionError("need one label per vertex");
  RealMatrix q = RealMatrix::Zero(c.n, c.n);
  for (int i = 0; i < c.n; ++i)
    for (int j = i + 1; j < c.n; ++j) {
      const double v = c.p + c.gamma * (labels[i] > 0 ? 1 : -1) * (labels[j] > 0 ? 1 : -1);
      q(i, j) = v;
      q(j, i) = v;
    }
  return with_q(c.n, c.p, q);
}

ModelPair sample_planted_partition_alternative(
    const PlantedPartitionConstruction& c, RngStream& rng) {
  c.check();
  std::vector<int> labels(static_cast<std::size_t>(c.n));
  for (auto& v : labels) v = (rng.next_u64() >> 63) ? 1 : -1;
  return planted_partition_alternative(c, labels);
}

std::vector<ModelPair> sign_flip_family(const SignFlipConstruction& c) {
  c.check();
  const int pairs = c.n * (c.n - 1) / 2;
  if (pairs > 21) throw TooLargeToEnumerate("sign-flip family too large to list");
  std::vector<ModelPair> out;
  out.reserve(std::size_t{1} << pairs);
  std::vector<int> signs(static_cast<std::size_t>(pairs));
  for (std::uint64_t mask = 0; mask < (std::uint64_t{1} << pairs); ++mask) {
    for (int e = 0; e < pairs; ++e) signs[e] = ((mask >> e) & 1) ? 1 : -1;
    out.push_back(sign_flip_alternative(c, signs));
  }
  return out;
}

std::vector<ModelPair> planted_partition_family(const PlantedPartitionConstruction& c) {
  c.check();
  if (c.n > 20) throw TooLargeToEnumerate("planted-partition family too large to list");
  std::vector<ModelPair> out;
  out.reserve(std::size_t{1} << c.n);
  std::vector<int> labels(static_cast<std::size_t>(c.n));
  for (std::uint64_t mask = 0; mask < (std::uint64_t{1} << c.n); ++mask) {
    for (int i = 0; i < c.n; ++i) labels[i] = ((mask >> i) & 1) ? 1 : -1;
    out.push_back(planted_partition_alternative(c, labels));
  }
  return out;
}

double sign_flip_chi_square(int n, int m, double p, double gamma) {
  check_mnp(n, m, p);
  if (!(gamma >= 0.0 && gamma <= std::min(p, 1.0 - p)))
    throw DomainError("gamma must lie in [0, min(p, 1-p)]");
  const double g = gamma * gamma / (p * (1.0 - p));
  const double per_pair = 0.5 * std::pow(1.0 + g, m) + 0.5 * std::pow(1.0 - g, m);
  const double pairs = 0.5 * n * (n - 1.0);
  return std::pow(per_pair, pairs);
}

double planted_partition_chi_square_bound(int n, int m, double p, double gamma) {
  check_mnp(n, m, p);
  if (!(gamma >= 0.0 && gamma <= std::min(p, 1.0 - p)))
    throw DomainError("gamma must lie in [0, min(p, 1-p)]");
  return std::exp(static_cast<double>(m) * n * gamma * gamma / p);
}

bool planted_partition_bound_valid(int n, int m, double p, double gamma) {
  check_mnp(n, m, p);
  return gamma <= std::sqrt(p / (32.0 * m * n));
}

double risk_lower_bound_from_chi(double chi) {
  if (std::isnan(chi)) throw DomainError("chi-square value is NaN");
  if (chi <= 1.0) return 1.0;
  return std::clamp(1.0 - 0.5 * std::sqrt(chi - 1.0), 0.0, 1.0);
}

double sign_flip_critical_gamma(int n, int m, double p, double eta) {
  check_mnp(n, m, p);
  check_eta(eta);
  const double level = std::pow(std::log(1.0 + 4.0 * (1.0 - eta) * (1.0 - eta)), 0.25);
  return level * std::sqrt(p / (static_cast<double>(m) * n));
}

double planted_partition_critical_gamma(int n, int m, double p, double eta) {
  check_mnp(n, m, p);
  check_eta(eta);
  const double level = std::min(std::sqrt(std::log(1.0 + 4.0 * (1.0 - eta) * (1.0 - eta))),
                                1.0 / std::sqrt(32.0));
  return level * std::sqrt(p / (static_cast<double>(m) * n));
}

double brute_force_chi_square(const ModelPair& null_pair,
                              const std::vector<ModelPair>& alternatives, int m) {
  if (m < 1) throw DomainError("m must be positive");
  if (alternatives.empty()) throw DimensionError("alternative family is empty");
  const int n = null_pair.n();
  for (const auto& a : alternatives)
    if (a.n() != n) throw DimensionError("alternatives must share the vertex count");

  const int edges = n * (n - 1) / 2;
  const long long bits = static_cast<long long>(edges) * 2 * m;
  if (bits > kMaxEnumerationBits) {
    std::ostringstream os;
    os << "enumeration needs " << bits << " outcome bits; the cap is "
       << kMaxEnumerationBits;
    throw TooLargeToEnumerate(os.str());
  }

  // Per model and outcome bit: log P(bit = 0) and log P(bit = 1). Bit
  // s * edges + e is edge e (row-major, i < j) of graph slot s; slots
  // 0..m-1 are drawn from P and m..2m-1 from Q.
  struct LogTable {
    std::vector<double> zero, one;
  };
  auto table_for = [&](const ModelPair& pair) {
    LogTable t;
    t.zero.reserve(static_cast<std::size_t>(bits));
    t.one.reserve(static_cast<std::size_t>(bits));
    for (int s = 0; s < 2 * m; ++s) {
      const ProbabilityMatrix& model = s < m ? pair.p() : pair.q();
      for (int i = 0; i < n; ++i)
        for (int j = i + 1; j < n; ++j) {
          t.one.push_back(std::log(model(i, j)));
          t.zero.push_back(std::log1p(-model(i, j)));
        }
    }
    return t;
  };
  const LogTable null_table = table_for(null_pair);
  std::vector<LogTable> alt_tables;
  alt_tables.reserve(alternatives.size());
  for (const auto& a : alternatives) alt_tables.push_back(table_for(a));

  auto log_prob = [&](const LogTable& t, std::uint64_t omega) {
    double lp = 0.0;
    for (long long b = 0; b < bits; ++b)
      lp += ((omega >> b) & 1) ? t.one[b] : t.zero[b];
    return lp;
  };

  const double inv_family = 1.0 / static_cast<double>(alternatives.size());
  CompensatedSum total;
  const std::uint64_t outcomes = std::uint64_t{1} << bits;
  for (std::uint64_t omega = 0; omega < outcomes; ++omega) {
    CompensatedSum mixture;
    for (const auto& t : alt_tables) mixture.add(std::exp(log_prob(t, omega)));
    const double mean = mixture.value() * inv_family;
    const double lp0 = log_prob(null_table, omega);
    if (mean <= 0.0) continue;
    if (lp0 == -std::numeric_limits<double>::infinity())
      throw DivergentChiSquare(
          "an outcome has zero null probability but positive alternative probability");
    total.add(std::exp(2.0 * std::log(mean) - lp0));
  }
  return total.value();
}

}  // namespace ier
