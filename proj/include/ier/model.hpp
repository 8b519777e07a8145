#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include <Eigen/Dense>

#include "ier/rng.hpp"

namespace ier {

using RealMatrix =
    Eigen::Matrix<double, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor>;
using CountMatrix =
    Eigen::Matrix<std::int32_t, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor>;
using EdgeMatrix =
    Eigen::Matrix<std::uint8_t, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor>;

inline constexpr double kSymmetryTolerance = 1e-12;
inline constexpr double kTinyDenominator = 1e-300;

/// Non-fatal findings produced while validating an input matrix.
struct ValidationNotes {
  bool nonzero_diagonal = false;
  std::vector<std::string> messages;
};

/// Population adjacency of an inhomogeneous Erdős–Rényi model: a symmetric
/// matrix with zero diagonal and entries in [0, 1].
///
/// Only the upper triangle of the raw input is read after validation; the
/// stored matrix is mirrored from it, so symmetry is exact.
class ProbabilityMatrix {
 public:
  /// Validates and normalizes `raw`.
  ///
  /// Throws DimensionError for a non-square or empty input, AsymmetryError
  /// when |raw(i,j) - raw(j,i)| exceeds 1e-12, and RangeError when an
  /// off-diagonal entry lies outside [0, 1] by more than 1e-12. Entries within
  /// the slack are clamped. A nonzero diagonal is zeroed and reported in
  /// `notes` if provided.
  static ProbabilityMatrix validate(const RealMatrix& raw,
                                    ValidationNotes* notes = nullptr);

  static ProbabilityMatrix zeros(int n);
  /// Erdős–Rényi model: every off-diagonal entry equals p.
  static ProbabilityMatrix constant(int n, double p);

  int n() const noexcept { return static_cast<int>(entries_.rows()); }
  double operator()(int i, int j) const { return entries_(i, j); }
  const RealMatrix& entries() const noexcept { return entries_; }

  /// Simultaneous relabeling: result(i, j) = this(perm[i], perm[j]).
  ProbabilityMatrix permuted(const std::vector<int>& perm) const;

  friend bool operator==(const ProbabilityMatrix& a,
                         const ProbabilityMatrix& b) {
    return a.entries_ == b.entries_;
  }

 private:
  explicit ProbabilityMatrix(RealMatrix entries) : entries_(std::move(entries)) {}
  RealMatrix entries_;
};

ProbabilityMatrix validate_prob_matrix(const RealMatrix& raw,
                                       ValidationNotes* notes = nullptr);

/// One sampled undirected simple graph as a symmetric 0/1 matrix.
class AdjacencyMatrix {
 public:
  /// Throws DimensionError, AsymmetryError or RangeError (entries not 0/1,
  /// nonzero diagonal).
  static AdjacencyMatrix validate(const EdgeMatrix& raw);
  static AdjacencyMatrix empty(int n);

  int n() const noexcept { return static_cast<int>(edges_.rows()); }
  std::uint8_t operator()(int i, int j) const { return edges_(i, j); }
  const EdgeMatrix& edges() const noexcept { return edges_; }
  std::int64_t edge_count() const;

  AdjacencyMatrix permuted(const std::vector<int>& perm) const;

  friend bool operator==(const AdjacencyMatrix& a, const AdjacencyMatrix& b) {
    return a.edges_ == b.edges_;
  }

 private:
  friend AdjacencyMatrix sample_ier(const ProbabilityMatrix&, RngStream&);
  explicit AdjacencyMatrix(EdgeMatrix edges) : edges_(std::move(edges)) {}
  EdgeMatrix edges_;
};

/// An ordered sample G_1, ..., G_m of graphs on a common vertex set.
class GraphPopulation {
 public:
  /// Throws SampleSizeError if `graphs` is empty, DimensionError if the graphs
  /// disagree on the vertex count.
  explicit GraphPopulation(std::vector<AdjacencyMatrix> graphs);

  int n() const noexcept { return graphs_.front().n(); }
  int m() const noexcept { return static_cast<int>(graphs_.size()); }
  const AdjacencyMatrix& operator[](int k) const { return graphs_[k]; }
  const std::vector<AdjacencyMatrix>& graphs() const noexcept { return graphs_; }

  GraphPopulation permuted(const std::vector<int>& perm) const;

  friend bool operator==(const GraphPopulation&,
                         const GraphPopulation&) = default;

 private:
  std::vector<AdjacencyMatrix> graphs_;
};

/// Non-owning ordered selection of graphs; used to evaluate statistics on
/// relabeled pools without copying adjacency data.
using GraphRefs = std::vector<const AdjacencyMatrix*>;

GraphRefs refs(const GraphPopulation& pop);

/// The pair theta = (P, Q) of population adjacencies being compared.
class ModelPair {
 public:
  /// Throws DimensionError if P and Q differ in size.
  ModelPair(ProbabilityMatrix p, ProbabilityMatrix q);

  int n() const noexcept { return p_.n(); }
  const ProbabilityMatrix& p() const noexcept { return p_; }
  const ProbabilityMatrix& q() const noexcept { return q_; }

  RealMatrix difference() const { return p_.entries() - q_.entries(); }
  RealMatrix sum() const { return p_.entries() + q_.entries(); }

  ModelPair permuted(const std::vector<int>& perm) const {
    return {p_.permuted(perm), q_.permuted(perm)};
  }

 private:
  ProbabilityMatrix p_;
  ProbabilityMatrix q_;
};

double frobenius_norm(const RealMatrix& m);
/// Maximum absolute row sum (the induced infinity norm).
double row_sum_norm(const RealMatrix& m);

/// num/den with 0/0 = 0. A denominator below 1e-300 with a numerator above it
/// throws DegenerateDenominator.
double ratio_or_zero(double num, double den);

/// ||P - Q||_F / sqrt(||P + Q||_F).
double frobenius_separation(const ModelPair& pair);
/// ||P + Q||_F.
double frobenius_complexity(const ModelPair& pair);
/// ||P - Q||_op / sqrt(||P + Q||_r).
double operator_separation(const ModelPair& pair);
/// ||P + Q||_r.
double row_sum_complexity(const ModelPair& pair);

/// Expected number of edges, (1/2) sum_ij P_ij.
double expected_edges(const ProbabilityMatrix& p);
/// max_i sum_j P_ij.
double max_expected_degree(const ProbabilityMatrix& p);

/// Draws one graph. Edge (i, j), i < j, consumes one uniform from `rng` in
/// row-major order.
AdjacencyMatrix sample_ier(const ProbabilityMatrix& p, RngStream& rng);

/// m i.i.d. graphs; graph k is drawn from rng.substream(k).
GraphPopulation sample_population(const ProbabilityMatrix& p, int m,
                                  const RngStream& rng);

}  // namespace ier
