#include "ier/spectral.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include <Eigen/Eigenvalues>

#include "ier/errors.hpp"

namespace ier {

namespace {

void require_symmetric(const RealMatrix& m) {
  if (m.rows() != m.cols()) throw DimensionError("operator norm needs a square matrix");
  const double scale = std::max(1.0, m.cwiseAbs().maxCoeff());
  if (m.rows() > 0 && (m - m.transpose()).cwiseAbs().maxCoeff() > kSymmetryTolerance * scale)
    throw AsymmetryError("operator norm needs a symmetric matrix");
}

// +1 or -1 chosen so that sign * M is the same matrix for M and -M: the first
// nonzero entry of the upper triangle (row-major) is made positive. Both
// solvers run on sign * M, which makes the norm of -M bit-identical to the
// norm of M.
double canonical_sign(const RealMatrix& m) {
  const Eigen::Index n = m.rows();
  for (Eigen::Index i = 0; i < n; ++i)
    for (Eigen::Index j = i; j < n; ++j)
      if (m(i, j) != 0.0) return m(i, j) > 0.0 ? 1.0 : -1.0;
  return 1.0;
}

RngStream default_start_stream() { return RngStream(0x1a2c05ULL, 0); }

}  // namespace

void SpectralConfig::check() const {
  if (exact_cutoff < 1) throw ConfigError("spectral exact_cutoff must be >= 1");
  if (!(tol > 0.0)) throw ConfigError("spectral tol must be > 0");
  if (max_iter < 0) throw ConfigError("spectral max_iter must be >= 1 (or 0 for the default)");
}

double operator_norm_exact(const RealMatrix& m) {
  require_symmetric(m);
  if (m.rows() == 0) return 0.0;
  const Eigen::MatrixXd canonical = canonical_sign(m) * m;
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> solver(canonical,
                                                        Eigen::EigenvaluesOnly);
  if (solver.info() != Eigen::Success)
    throw ConvergenceError("symmetric eigensolver failed");
  const auto& ev = solver.eigenvalues();
  return std::max(std::abs(ev(0)), std::abs(ev(ev.size() - 1)));
}

double operator_norm_iterative(const RealMatrix& m, const SpectralConfig& cfg,
                               RngStream& rng) {
  cfg.check();
  require_symmetric(m);
  const Eigen::Index n = m.rows();
  if (n == 0) return 0.0;
  const double scale = m.norm();
  if (scale == 0.0) return 0.0;

  const double sign = canonical_sign(m);
  const int cap = cfg.iteration_cap(static_cast<int>(n));
  const Eigen::Index steps = std::min<Eigen::Index>(n, cap);

  Eigen::MatrixXd basis(n, steps);
  Eigen::VectorXd alpha(steps);
  Eigen::VectorXd beta(steps);

  Eigen::VectorXd v(n);
  for (Eigen::Index i = 0; i < n; ++i) v(i) = 2.0 * rng.uniform() - 1.0;
  v.normalize();

  const double invariant_tol = 64.0 * std::numeric_limits<double>::epsilon() * scale;
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> ritz;
  double estimate = 0.0;

  for (Eigen::Index k = 0; k < steps; ++k) {
    basis.col(k) = v;
    Eigen::VectorXd w = sign * (m * v);
    alpha(k) = v.dot(w);
    w -= alpha(k) * v;
    if (k > 0) w -= beta(k - 1) * basis.col(k - 1);
    // Two passes of classical Gram-Schmidt against the whole basis.
    for (int pass = 0; pass < 2; ++pass) {
      const Eigen::VectorXd coeffs = basis.leftCols(k + 1).transpose() * w;
      w -= basis.leftCols(k + 1) * coeffs;
    }
    beta(k) = w.norm();

    ritz.computeFromTridiagonal(alpha.head(k + 1),
                                beta.head(k), Eigen::ComputeEigenvectors);
    if (ritz.info() != Eigen::Success)
      throw ConvergenceError("tridiagonal eigensolver failed");
    const auto& theta = ritz.eigenvalues();
    const auto& y = ritz.eigenvectors();
    estimate = std::max(std::abs(theta(0)), std::abs(theta(k)));

    const bool invariant = beta(k) <= invariant_tol;
    const double residual =
        std::max(beta(k) * std::abs(y(k, 0)), beta(k) * std::abs(y(k, k)));
    if (invariant || k + 1 == n || residual <= cfg.tol * estimate) return estimate;

    v = w / beta(k);
  }
  throw NoConvergence(estimate, static_cast<int>(steps));
}

double operator_norm(const RealMatrix& m, const SpectralConfig& cfg) {
  RngStream rng = default_start_stream();
  return operator_norm(m, cfg, rng);
}

double operator_norm(const RealMatrix& m, const SpectralConfig& cfg,
                     RngStream& rng) {
  cfg.check();
  if (m.rows() <= cfg.exact_cutoff) return operator_norm_exact(m);
  return operator_norm_iterative(m, cfg, rng);
}

}  // namespace ier
