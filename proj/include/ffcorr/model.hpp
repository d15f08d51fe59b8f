#pragma once

#include <Eigen/Dense>
#include <complex>
#include <string>
#include <vector>

#include "ffcorr/errors.hpp"

namespace ffcorr {

using Complex = std::complex<double>;
using DenseMatrix = Eigen::MatrixXcd;

// Passed as the chain length where an operation accepts the thermodynamic
// limit (closed-form gap and correlator).
inline constexpr int kInfiniteChain = -1;

// One local Hamiltonian term: a dense matrix acting on the tensor factor of
// its support. Site indices are 1-based. The first listed site is the most
// significant base-s digit of the local basis index, matching the global
// convention (site 1 = most significant digit of the global index).
struct TermSpec {
  std::vector<int> sites;
  DenseMatrix matrix;
  // Declares the matrix idempotent; validate_spec checks it when set.
  bool projector = false;
};

struct HamiltonianSpec {
  int n = 0;          // site count
  int s = 2;          // local dimension per site
  int r = 2;          // interaction range: max support diameter in |pos_i - pos_j|
  std::vector<int> positions;  // integer coordinate per site on a line
  std::vector<TermSpec> terms;
};

struct Violation {
  int term_index = -1;  // -1 for spec-level problems
  std::string message;
};

struct ValidationReport {
  std::vector<Violation> violations;
  bool valid() const { return violations.empty(); }
  std::string to_string() const;
};

// Vertex per term, edge between non-commuting pairs, g = max degree.
struct InteractionGraph {
  int term_count = 0;
  std::vector<std::pair<int, int>> edges;      // 0-based term indices, i < j
  std::vector<std::vector<int>> adjacency;
  int g = 0;
};

// ---- spec construction and checks ----

// Dimension s^n with an overflow guard.
Eigen::Index hilbert_dim(int s, int n);

// Checks every structural and spectral invariant of the spec: Hermitian
// terms with smallest eigenvalue 0 and norm <= 1, supports within range r,
// distinct supports, declared projectors idempotent.
ValidationReport validate_spec(const HamiltonianSpec& spec, double tol = 1e-9);

// Replaces a PSD term by the projector onto its range. Returns the projector
// and a = smallest nonzero eigenvalue, so that a*Pi <= H <= Pi. A term that
// is already a projector comes back unchanged with a = 1.
std::pair<TermSpec, double> projectorize_term(const TermSpec& term, int local_dim,
                                              double tol = 1e-9);

// Projectorizes every term; the returned scale is min_i a_i.
std::pair<HamiltonianSpec, double> projectorize_spec(const HamiltonianSpec& spec,
                                                     double tol = 1e-9);

// Embeds a term's matrix onto a superset of sites (dense, for small joint
// supports). super_sites must contain every site of the term.
DenseMatrix embed_on_sites(const TermSpec& term, const std::vector<int>& super_sites, int s);

// Edges from ||[H_i,H_j]||_F > commutator_tol on the joint support; term
// pairs with disjoint supports commute by construction and are never tested.
InteractionGraph interaction_graph(const HamiltonianSpec& spec,
                                   double commutator_tol = 1e-10);

// ---- XXZ kink chain (built-in exactly solvable model) ----

// n-1 rank-1 projector terms |phi(q)><phi(q)| on (i,i+1), where
// |phi(q)> = (q|10> - |01>)/sqrt(q^2+1). Requires 0 < q <= 1 (q = 1 is
// accepted but gapless as n -> inf), n >= 2.
HamiltonianSpec xxz_spec(double q, int n);

// epsilon = 1 - 2 cos(pi/n) / (q + 1/q); pass kInfiniteChain for n -> inf.
double xxz_gap_closed_form(double q, int n);

// The ground state in the magnetization-1 sector: amplitude
// sqrt((1-q^2)/(1-q^(2n))) * q^(j-1) on the basis state with a single 1 at
// site j. Requires 0 < q < 1.
Eigen::VectorXcd xxz_psi1(double q, int n);

// Closed form of |<psi1|AB|psi1> - <psi1|AGB|psi1>| for the number operators
// A=(1-sigma^z_1)/2, B=(1-sigma^z_{1+d})/2: ((1-q^2)/(1-q^(2n)))^2 q^(2d).
// Pass kInfiniteChain for the n -> inf value (1-q^2)^2 q^(2d).
double xxz_correlator_closed_form(double q, int n, int d);

// xi >= 1/(-2 ln q), valid for 0 < q < 1.
double xxz_xi_lower_bound(double q);

// ---- small operator helpers ----

DenseMatrix pauli_x();
DenseMatrix pauli_y();
DenseMatrix pauli_z();
// (1 - sigma^z)/2, the |1><1| number operator.
DenseMatrix number_operator();

// Single-site observable as a TermSpec (site 1-based, matrix s x s).
TermSpec site_observable(int site, const DenseMatrix& matrix);

}  // namespace ffcorr
