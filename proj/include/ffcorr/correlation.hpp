#pragma once

#include <vector>

#include "ffcorr/linalg.hpp"
#include "ffcorr/model.hpp"
#include "ffcorr/spectral.hpp"

namespace ffcorr {

struct CorrelationSeries {
  std::vector<int> distances;       // strictly increasing
  std::vector<double> values;       // |<psi|AB|psi> - <psi|AGB|psi>| per distance
  std::vector<double> closed_form;  // oracle values when available (else empty)
};

// |<psi|AB|psi> - <psi|AGB|psi>| with G applied through the orthonormal
// ground basis (never materialized). psi must be a ground state: the
// residual ||H psi|| is checked against ground_tol.
double correlator_deg(const HamiltonianSpec& spec, const GroundSpaceBasis& gs,
                      const StateVector& psi, const TermSpec& a, const TermSpec& b,
                      double ground_tol = 1e-8);

// Evaluates the correlator for B placed at increasing distances from A.
// b_matrix is a single-site observable moved to site a.sites[0] + d.
CorrelationSeries correlation_series(const HamiltonianSpec& spec, const GroundSpaceBasis& gs,
                                     const StateVector& psi, const TermSpec& a,
                                     const DenseMatrix& b_matrix,
                                     const std::vector<int>& d_list,
                                     double ground_tol = 1e-8);

// The analytic XXZ series ((1-q^2)/(1-q^(2n)))^2 q^(2d); n = kInfiniteChain
// gives the thermodynamic-limit series.
CorrelationSeries xxz_analytic_series(double q, int n, const std::vector<int>& d_list);

struct FitResult {
  double xi = 0.0;
  double amplitude = 0.0;  // exp(intercept)
  double r_squared = 0.0;
  int points_used = 0;
};

// Least squares on (d, ln value); slope = -1/xi. Values at or below the
// noise floor (1e-13) are excluded. Throws PreconditionError with fewer than
// 3 usable points and DomainError when the fit has no decay.
FitResult fit_xi(const CorrelationSeries& series, double floor = 1e-13);

// xi = ((2c-1)(r-1)/2) sqrt((g^2 + epsilon)/epsilon); requires epsilon > 0.
double xi_upper_formula(int c, int r, int g, double epsilon);

struct SweepRow {
  double q = 0.0;
  double epsilon = 0.0;   // closed form, n -> inf
  double xi_fit = 0.0;
  double xi_lower = 0.0;  // 1/(-2 ln q)
  double xi_upper = 0.0;  // proof formula with c=2, r=2, g=2
};

struct SweepResult {
  std::vector<SweepRow> rows;
  double slope = 0.0;  // regression of ln xi_fit on ln epsilon
};

// Scaling check on the analytic thermodynamic-limit series across q_grid:
// slope near -1/2 and xi_lower <= xi_fit <= xi_upper per row.
SweepResult xi_scaling_sweep(const std::vector<double>& q_grid, int d_max = 40);

// Von Neumann entropy (natural log) of the reduced state on sites 1..cut.
// psi must be normalized.
double half_chain_entropy(const StateVector& psi, int local_dim, int cut);

}  // namespace ffcorr
