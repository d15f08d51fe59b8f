#pragma once

#include <Eigen/Dense>
#include <memory>
#include <vector>

#include "ffcorr/model.hpp"

namespace ffcorr {

// Complex amplitudes of length s^n. Basis ordering: site 1 is the most
// significant base-s digit of the index.
using StateVector = Eigen::VectorXcd;

// A node of the matrix-free operator DAG. apply/apply_adjoint must be
// reentrant: no mutable state, scratch lives on the stack of the call.
class MapNode {
 public:
  virtual ~MapNode() = default;
  virtual Eigen::Index dim() const = 0;
  virtual void apply(const StateVector& in, StateVector& out) const = 0;
  virtual void apply_adjoint(const StateVector& in, StateVector& out) const = 0;
};

// Value-semantic handle on an operator exposed only via apply-to-vector.
class LinearMap {
 public:
  LinearMap() = default;
  explicit LinearMap(std::shared_ptr<const MapNode> node) : node_(std::move(node)) {}

  bool empty() const { return !node_; }
  Eigen::Index dim() const;
  StateVector apply(const StateVector& v) const;
  StateVector apply_adjoint(const StateVector& v) const;
  LinearMap adjoint() const;

  static LinearMap identity(Eigen::Index dim);
  // (H_term tensor 1_rest) without materializing the global matrix.
  static LinearMap embed(const TermSpec& term, int local_dim, int n);
  static LinearMap sum(std::vector<LinearMap> parts);
  // Operator-order product: factors[0] * factors[1] * ... ; the rightmost
  // factor is applied to the vector first, matching P = L_c ... L_1.
  static LinearMap product(std::vector<LinearMap> factors);
  // alpha * 1 + beta * m
  static LinearMap affine(Complex alpha, Complex beta, LinearMap m);
  static LinearMap scale(Complex beta, LinearMap m) { return affine(0.0, beta, std::move(m)); }
  // V V^dagger for an orthonormal column basis V.
  static LinearMap projector(DenseMatrix orthonormal_columns);

  const std::shared_ptr<const MapNode>& node() const { return node_; }

 private:
  std::shared_ptr<const MapNode> node_;
};

// out = (H_term tensor 1_rest) in; one-shot convenience over LinearMap::embed.
StateVector apply_local_term(const TermSpec& term, int local_dim, int n,
                             const StateVector& v);

// Sum of apply_local_term over all terms of the spec.
StateVector apply_hamiltonian(const HamiltonianSpec& spec, const StateVector& v);

// H as a reusable map (embeds are precomputed once).
LinearMap hamiltonian_map(const HamiltonianSpec& spec);

// Largest singular value by power iteration on M^dagger M from a seeded
// random start. Throws ConvergenceError with the last two estimates if the
// relative change does not settle below tol within max_iter steps.
struct NormResult {
  double value = 0.0;
  int iterations = 0;
};
NormResult operator_norm(const LinearMap& m, double tol = 1e-12, int max_iter = 200000,
                         uint64_t seed = 7);

// Threshold for dense materialization (default 4096, overridable via the
// FFCORR_DENSE_THRESHOLD environment variable or set_dense_threshold).
Eigen::Index dense_threshold();
void set_dense_threshold(Eigen::Index value);

// Applies M to all basis vectors; refuses above the dense threshold.
DenseMatrix dense_materialize(const LinearMap& m);

// Seeded standard-normal complex vector, used by the iterative solvers.
StateVector random_state(Eigen::Index dim, uint64_t seed);

}  // namespace ffcorr
