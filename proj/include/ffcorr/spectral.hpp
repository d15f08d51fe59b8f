#pragma once

#include <Eigen/Dense>

#include "ffcorr/linalg.hpp"
#include "ffcorr/model.hpp"

namespace ffcorr {

struct EigenPairs {
  Eigen::VectorXd values;   // ascending
  DenseMatrix vectors;      // orthonormal columns, one per value
};

// Orthonormal zero-energy eigenvectors plus the gap above them.
struct GroundSpaceBasis {
  DenseMatrix basis;        // dim x degeneracy, orthonormal columns
  int degeneracy = 0;
  double gap = 0.0;         // smallest eigenvalue strictly above zero_tol
  double zero_tol = 0.0;

  LinearMap projector() const { return LinearMap::projector(basis); }
};

struct LanczosOptions {
  double tol = 1e-10;        // residual tolerance per eigenpair
  int max_subspace = 256;    // Krylov dimension per restart
  int max_restarts = 64;
  uint64_t seed = 11;
};

// k smallest eigenvalues and orthonormal eigenvectors of a Hermitian map.
// Dense eigendecomposition below the dense threshold; above it, Lanczos with
// full reorthogonalization and locking of converged pairs (restarts resolve
// degenerate eigenvalues). The Hermitian contract is probed on random
// vectors first and a PreconditionError is thrown if it fails.
EigenPairs lowest_eigenpairs(const LinearMap& m, int k, const LanczosOptions& opts = {});

// All eigenvectors with eigenvalue <= zero_tol (default 1e-9 * #terms),
// found by doubling k until the largest returned eigenvalue exceeds
// zero_tol. Confirms H_i v = 0 per term for every basis vector; throws
// NotFrustrationFreeError when the ground energy is above zero_tol.
GroundSpaceBasis ground_space(const HamiltonianSpec& spec, double zero_tol = -1.0,
                              const LanczosOptions& opts = {});

// Both extremal eigenvalues of a Hermitian map; one Lanczos Krylov space
// approximates both ends of the spectrum (dense below a small cutoff).
std::pair<double, double> extremal_eigs(const LinearMap& m, const LanczosOptions& opts = {});

}  // namespace ffcorr
