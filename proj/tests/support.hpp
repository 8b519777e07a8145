#pragma once

// Fixtures shared by the unit tests. The formulas match tests/oracle/oracles.py,
// which produced the frozen reference values.

#include <vector>

#include "ier/model.hpp"
#include "ier/rng.hpp"

namespace ier::testing {

inline RealMatrix fixture_p() {
  RealMatrix p = RealMatrix::Zero(7, 7);
  for (int i = 0; i < 7; ++i)
    for (int j = 0; j < 7; ++j)
      if (i != j) p(i, j) = 0.1 + 0.05 * ((i + j) % 7);
  return p;
}

inline RealMatrix fixture_q() {
  RealMatrix q = RealMatrix::Zero(7, 7);
  for (int i = 0; i < 7; ++i)
    for (int j = 0; j < 7; ++j)
      if (i != j) q(i, j) = 0.2 + 0.03 * ((i * j) % 5);
  return q;
}

inline ModelPair fixture_pair() {
  return {ProbabilityMatrix::validate(fixture_p()), ProbabilityMatrix::validate(fixture_q())};
}

inline AdjacencyMatrix graph_from(int n, bool (*edge)(int, int, int), int k) {
  EdgeMatrix e = EdgeMatrix::Zero(n, n);
  for (int i = 0; i < n; ++i)
    for (int j = i + 1; j < n; ++j)
      if (edge(i, j, k)) e(i, j) = e(j, i) = 1;
  return AdjacencyMatrix::validate(e);
}

inline GraphPopulation fixture_g(int m) {
  std::vector<AdjacencyMatrix> gs;
  for (int k = 0; k < m; ++k)
    gs.push_back(graph_from(
        6, [](int i, int j, int k) { return (3 * i + 5 * j + 7 * k + i * j * k) % 4 == 0; },
        k));
  return GraphPopulation(std::move(gs));
}

inline GraphPopulation fixture_h(int m) {
  std::vector<AdjacencyMatrix> gs;
  for (int k = 0; k < m; ++k)
    gs.push_back(graph_from(
        6, [](int i, int j, int k) { return (2 * i + 3 * j + 11 * k + i * j) % 3 == 0; }, k));
  return GraphPopulation(std::move(gs));
}

/// Random probability matrix with entries in [lo, hi), drawn row-major.
inline ProbabilityMatrix random_prob(int n, RngStream& rng, double lo = 0.0,
                                     double hi = 1.0) {
  RealMatrix p = RealMatrix::Zero(n, n);
  for (int i = 0; i < n; ++i)
    for (int j = i + 1; j < n; ++j) p(i, j) = p(j, i) = lo + (hi - lo) * rng.uniform();
  return ProbabilityMatrix::validate(p);
}

/// Random symmetric integer matrix with entries in [-bound, bound].
inline RealMatrix random_symmetric_int(int n, int bound, RngStream& rng) {
  RealMatrix m(n, n);
  for (int i = 0; i < n; ++i)
    for (int j = i; j < n; ++j) {
      const double v = static_cast<double>(rng.uniform_index(2 * bound + 1)) - bound;
      m(i, j) = m(j, i) = v;
    }
  return m;
}

inline std::vector<int> random_permutation(int n, RngStream& rng) {
  std::vector<int> perm(static_cast<std::size_t>(n));
  for (int i = 0; i < n; ++i) perm[i] = i;
  for (int i = n - 1; i > 0; --i)
    std::swap(perm[i], perm[rng.uniform_index(static_cast<std::uint64_t>(i) + 1)]);
  return perm;
}

}  // namespace ier::testing
