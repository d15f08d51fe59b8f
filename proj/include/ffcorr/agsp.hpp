#pragma once

#include <vector>

#include "ffcorr/detectability.hpp"
#include "ffcorr/linalg.hpp"
#include "ffcorr/model.hpp"
#include "ffcorr/spectral.hpp"

namespace ffcorr {

// Chebyshev polynomial of the first kind by the three-term recurrence.
double chebyshev_T(int m, double x);

// Parameters of Q_m(x) = T_m(2x/(1-delta) - 1) / T_m(2/(1-delta) - 1).
struct ChebyshevParams {
  int m = 0;
  double delta = 0.0;
  double normalization = 1.0;  // T_m(2/(1-delta) - 1)

  // delta = epsilon / (g^2 + epsilon)
  static ChebyshevParams from_gap(int m, double epsilon, int g);
  static ChebyshevParams from_delta(int m, double delta);
};

// Scalar evaluation; Q_m(1) = 1 by construction and
// |Q_m(x)| <= 2 exp(-2 m sqrt(delta)) on [0, 1-delta].
double qm_eval(const ChebyshevParams& params, double x);

// Q_m(Y) for a Hermitian map Y, evaluated by the operator Chebyshev
// recurrence (m applications of the shifted argument per apply).
LinearMap qm_operator(const LinearMap& pdagger_p, const ChebyshevParams& params);

// Q_m(P^dagger P) v with delta computed from the measured gap and g of the
// spec. Convenience wrapper; the heavy pieces can be reused via qm_operator.
StateVector agsp_apply(const HamiltonianSpec& spec, const LayerSchedule& schedule, int m,
                       const StateVector& v);

// Largest m with m < d / ((2c-1)(r-1)): the degrees for which the causal
// cone of A cannot have reached B. Throws DomainError for r = 1 (single-site
// terms: the identity holds for every m and there is nothing to compute).
int max_m_for_distance(int d, int c, int r);

struct ConeRow {
  int m = 0;
  bool guaranteed = false;   // m < d/((2c-1)(r-1))
  double worst_residual = 0.0;  // max over ground-basis vectors
  bool pass = false;         // guaranteed implies residual <= tol
};

struct ConeReport {
  int distance = 0;          // d(A,B)
  int admissible_max_m = 0;
  std::vector<ConeRow> rows;
  int first_failing_m = -1;  // first m with residual > tol, -1 if none seen
  bool pass = false;         // every guaranteed row passed
};

struct ConeOptions {
  double tol = 1e-10;
  int extra_m = 3;  // how far beyond m_max to scan for the cone boundary
};

// Checks <psi| A (P^dagger P)^m B |psi> = <psi| A B |psi> for every ground
// basis vector and every m up to m_max + extra_m, reporting where the
// identity first fails. A and B must have disjoint supports.
ConeReport causal_cone_check(const HamiltonianSpec& spec, const LayerSchedule& schedule,
                             const GroundSpaceBasis& gs, const TermSpec& a,
                             const TermSpec& b, int m_max, const ConeOptions& opts = {});

struct AgspRow {
  int m = 0;
  double delta = 0.0;
  double bound = 0.0;         // 2 exp(-2 m sqrt(delta))
  double measured_norm = 0.0; // ||Q_m(P^dagger P) - G||
  double margin = 0.0;        // bound - measured_norm
  bool pass = false;
};

// ||Q_m(P^dagger P) - G|| against the scalar envelope for each m.
std::vector<AgspRow> agsp_norm_sweep(const HamiltonianSpec& spec, const LayerSchedule& schedule,
                                     const GroundSpaceBasis& gs,
                                     const std::vector<int>& m_list, double tol = 1e-9,
                                     uint64_t seed = 7);

}  // namespace ffcorr
