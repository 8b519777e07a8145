#pragma once

#include "ier/model.hpp"
#include "ier/rng.hpp"

namespace ier {

struct SpectralConfig {
  /// Matrices with n <= exact_cutoff use the dense eigensolver.
  int exact_cutoff = 256;
  /// Relative residual tolerance of the iterative path.
  double tol = 1e-10;
  /// Iteration cap of the iterative path; 0 selects 10 n + 1000.
  int max_iter = 0;

  /// Throws ConfigError when a field is out of range.
  void check() const;
  int iteration_cap(int n) const { return max_iter > 0 ? max_iter : 10 * n + 1000; }
};

/// max |eigenvalue| of a symmetric matrix via a dense eigendecomposition.
/// Throws ConvergenceError if the eigensolver fails.
double operator_norm_exact(const RealMatrix& m);

/// max |eigenvalue| via Lanczos with full reorthogonalization, started from a
/// vector drawn from `rng`. Both extreme Ritz pairs must reach a residual
/// below tol * estimate. Throws NoConvergence (carrying the best estimate)
/// once cfg.iteration_cap(n) steps are exhausted.
double operator_norm_iterative(const RealMatrix& m, const SpectralConfig& cfg,
                               RngStream& rng);

/// Dispatches on cfg.exact_cutoff. The iterative path uses a fixed internal
/// start stream, so the result is a deterministic function of (m, cfg).
double operator_norm(const RealMatrix& m, const SpectralConfig& cfg = {});
double operator_norm(const RealMatrix& m, const SpectralConfig& cfg,
                     RngStream& rng);

}  // namespace ier
