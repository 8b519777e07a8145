#include "ier/model.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include "ier/errors.hpp"
#include "ier/spectral.hpp"

namespace ier {

namespace {

void require_square(Eigen::Index rows, Eigen::Index cols, const char* what) {
  if (rows != cols) {
    std::ostringstream os;
    os << what << " must be square, got " << rows << "x" << cols;
    throw DimensionError(os.str());
  }
  if (rows == 0) throw DimensionError(std::string(what) + " must be non-empty");
}

}  // namespace

ProbabilityMatrix ProbabilityMatrix::validate(const RealMatrix& raw,
                                              ValidationNotes* notes) {
  require_square(raw.rows(), raw.cols(), "probability matrix");
  const Eigen::Index n = raw.rows();
  RealMatrix out = RealMatrix::Zero(n, n);
  for (Eigen::Index i = 0; i < n; ++i) {
    if (!std::isfinite(raw(i, i))) {
      std::ostringstream os;
      os << "non-finite diagonal entry at (" << i << "," << i << ")";
      throw RangeError(os.str());
    }
    if (std::abs(raw(i, i)) > kSymmetryTolerance && notes != nullptr) {
      notes->nonzero_diagonal = true;
      std::ostringstream os;
      os << "diagonal entry (" << i << "," << i << ") = " << raw(i, i)
         << " forced to zero";
      notes->messages.push_back(os.str());
    }
    for (Eigen::Index j = i + 1; j < n; ++j) {
      const double upper = raw(i, j);
      const double lower = raw(j, i);
      if (!std::isfinite(upper) || !std::isfinite(lower)) {
        std::ostringstream os;
        os << "non-finite entry at (" << i << "," << j << ")";
        throw RangeError(os.str());
      }
      if (std::abs(upper - lower) > kSymmetryTolerance) {
        std::ostringstream os;
        os << "matrix is not symmetric: entry (" << i << "," << j
           << ") = " << upper << " but (" << j << "," << i << ") = " << lower;
        throw AsymmetryError(os.str());
      }
      if (upper < -kSymmetryTolerance || upper > 1.0 + kSymmetryTolerance) {
        std::ostringstream os;
        os << "entry (" << i << "," << j << ") = " << upper
           << " is not a probability";
        throw RangeError(os.str());
      }
      const double v = std::clamp(upper, 0.0, 1.0);
      out(i, j) = v;
      out(j, i) = v;
    }
  }
  return ProbabilityMatrix(std::move(out));
}

ProbabilityMatrix ProbabilityMatrix::zeros(int n) {
  require_square(n, n, "probability matrix");
  return ProbabilityMatrix(RealMatrix::Zero(n, n));
}

ProbabilityMatrix ProbabilityMatrix::constant(int n, double p) {
  require_square(n, n, "probability matrix");
  if (!(p >= 0.0 && p <= 1.0)) throw RangeError("edge probability outside [0,1]");
  RealMatrix m = RealMatrix::Constant(n, n, p);
  m.diagonal().setZero();
  return ProbabilityMatrix(std::move(m));
}

ProbabilityMatrix ProbabilityMatrix::permuted(const std::vector<int>& perm) const {
  const int size = n();
  if (static_cast<int>(perm.size()) != size)
    throw DimensionError("permutation length does not match vertex count");
  RealMatrix out(size, size);
  for (int i = 0; i < size; ++i)
    for (int j = 0; j < size; ++j) out(i, j) = entries_(perm[i], perm[j]);
  return ProbabilityMatrix(std::move(out));
}

ProbabilityMatrix validate_prob_matrix(const RealMatrix& raw,
                                       ValidationNotes* notes) {
  return ProbabilityMatrix::validate(raw, notes);
}

AdjacencyMatrix AdjacencyMatrix::validate(const EdgeMatrix& raw) {
  require_square(raw.rows(), raw.cols(), "adjacency matrix");
  const Eigen::Index n = raw.rows();
  for (Eigen::Index i = 0; i < n; ++i) {
    if (raw(i, i) != 0) {
      std::ostringstream os;
      os << "adjacency matrix has a self-loop at (" << i << "," << i << ")";
      throw RangeError(os.str());
    }
    for (Eigen::Index j = i + 1; j < n; ++j) {
      if (raw(i, j) > 1) {
        std::ostringstream os;
        os << "adjacency entry (" << i << "," << j << ") is not 0/1";
        throw RangeError(os.str());
      }
      if (raw(i, j) != raw(j, i)) {
        std::ostringstream os;
        os << "adjacency matrix is not symmetric at (" << i << "," << j << ")";
        throw AsymmetryError(os.str());
      }
    }
  }
  return AdjacencyMatrix(raw);
}

AdjacencyMatrix AdjacencyMatrix::empty(int n) {
  require_square(n, n, "adjacency matrix");
  return AdjacencyMatrix(EdgeMatrix::Zero(n, n));
}

std::int64_t AdjacencyMatrix::edge_count() const {
  return edges_.cast<std::int64_t>().sum() / 2;
}

AdjacencyMatrix AdjacencyMatrix::permuted(const std::vector<int>& perm) const {
  const int size = n();
  if (static_cast<int>(perm.size()) != size)
    throw DimensionError("permutation length does not match vertex count");
  EdgeMatrix out(size, size);
  for (int i = 0; i < size; ++i)
    for (int j = 0; j < size; ++j) out(i, j) = edges_(perm[i], perm[j]);
  return AdjacencyMatrix(std::move(out));
}

GraphPopulation::GraphPopulation(std::vector<AdjacencyMatrix> graphs)
    : graphs_(std::move(graphs)) {
  if (graphs_.empty()) throw SampleSizeError("a population needs at least one graph");
  const int n0 = graphs_.front().n();
  for (const auto& g : graphs_)
    if (g.n() != n0)
      throw DimensionError("graphs in a population must share the vertex count");
}

GraphPopulation GraphPopulation::permuted(const std::vector<int>& perm) const {
  std::vector<AdjacencyMatrix> out;
  out.reserve(graphs_.size());
  for (const auto& g : graphs_) out.push_back(g.permuted(perm));
  return GraphPopulation(std::move(out));
}

GraphRefs refs(const GraphPopulation& pop) {
  GraphRefs out;
  out.reserve(pop.graphs().size());
  for (const auto& g : pop.graphs()) out.push_back(&g);
  return out;
}

ModelPair::ModelPair(ProbabilityMatrix p, ProbabilityMatrix q)
    : p_(std::move(p)), q_(std::move(q)) {
  if (p_.n() != q_.n())
    throw DimensionError("P and Q must have the same vertex count");
}

double frobenius_norm(const RealMatrix& m) {
  require_square(m.rows(), m.cols(), "matrix");
  return m.norm();
}

double row_sum_norm(const RealMatrix& m) {
  require_square(m.rows(), m.cols(), "matrix");
  return m.cwiseAbs().rowwise().sum().maxCoeff();
}

double ratio_or_zero(double num, double den) {
  if (std::abs(den) < kTinyDenominator) {
    if (std::abs(num) < kTinyDenominator) return 0.0;
    throw DegenerateDenominator("nonzero numerator over a vanishing denominator");
  }
  return num / den;
}

double frobenius_separation(const ModelPair& pair) {
  return ratio_or_zero(frobenius_norm(pair.difference()),
                       std::sqrt(frobenius_complexity(pair)));
}

double frobenius_complexity(const ModelPair& pair) {
  return frobenius_norm(pair.sum());
}

double operator_separation(const ModelPair& pair) {
  return ratio_or_zero(operator_norm(pair.difference()),
                       std::sqrt(row_sum_complexity(pair)));
}

double row_sum_complexity(const ModelPair& pair) {
  return row_sum_norm(pair.sum());
}

double expected_edges(const ProbabilityMatrix& p) {
  return 0.5 * p.entries().sum();
}

double max_expected_degree(const ProbabilityMatrix& p) {
  return p.entries().rowwise().sum().maxCoeff();
}

AdjacencyMatrix sample_ier(const ProbabilityMatrix& p, RngStream& rng) {
  const int n = p.n();
  EdgeMatrix edges = EdgeMatrix::Zero(n, n);
  for (int i = 0; i < n; ++i) {
    for (int j = i + 1; j < n; ++j) {
      const std::uint8_t e = rng.bernoulli(p(i, j)) ? 1 : 0;
      edges(i, j) = e;
      edges(j, i) = e;
    }
  }
  return AdjacencyMatrix(std::move(edges));
}

GraphPopulation sample_population(const ProbabilityMatrix& p, int m,
                                  const RngStream& rng) {
  if (m < 1) throw SampleSizeError("population size m must be at least 1");
  std::vector<AdjacencyMatrix> graphs;
  graphs.reserve(static_cast<std::size_t>(m));
  for (int k = 0; k < m; ++k) {
    RngStream sub = rng.substream(static_cast<std::uint64_t>(k));
    graphs.push_back(sample_ier(p, sub));
  }
  return GraphPopulation(std::move(graphs));
}

}  // namespace ier
