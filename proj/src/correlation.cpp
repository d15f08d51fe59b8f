#include "ffcorr/correlation.hpp"

#include <Eigen/SVD>
#include <algorithm>
#include <cmath>

namespace ffcorr {

double correlator_deg(const HamiltonianSpec& spec, const GroundSpaceBasis& gs,
                      const StateVector& psi, const TermSpec& a, const TermSpec& b,
                      double ground_tol) {
  double residual = apply_hamiltonian(spec, psi).norm();
  if (residual > ground_tol)
    throw PreconditionError("correlator_deg: psi is not a ground state (||H psi|| = " +
                            std::to_string(residual) + ")");

  LinearMap a_map = LinearMap::embed(a, spec.s, spec.n);
  LinearMap b_map = LinearMap::embed(b, spec.s, spec.n);
  StateVector b_psi = b_map.apply(psi);
  StateVector a_dag_psi = a_map.apply_adjoint(psi);

  Complex direct = a_dag_psi.dot(b_psi);
  // <psi|A G B|psi> through the basis, G never materialized
  Eigen::VectorXcd coeffs = gs.basis.adjoint() * b_psi;
  Complex through_g = a_dag_psi.dot(gs.basis * coeffs);
  return std::abs(direct - through_g);
}

CorrelationSeries correlation_series(const HamiltonianSpec& spec, const GroundSpaceBasis& gs,
                                     const StateVector& psi, const TermSpec& a,
                                     const DenseMatrix& b_matrix,
                                     const std::vector<int>& d_list, double ground_tol) {
  if (a.sites.size() != 1)
    throw PreconditionError("correlation_series: A must be a single-site observable");
  CorrelationSeries series;
  int previous = 0;
  for (int d : d_list) {
    if (d <= previous)
      throw DomainError("correlation_series: distances must be strictly increasing");
    previous = d;
    int site_b = a.sites[0] + d;
    if (site_b < 1 || site_b > spec.n)
      throw DomainError("correlation_series: distance reaches past the chain");
    TermSpec b = site_observable(site_b, b_matrix);
    series.distances.push_back(d);
    series.values.push_back(correlator_deg(spec, gs, psi, a, b, ground_tol));
  }
  return series;
}

CorrelationSeries xxz_analytic_series(double q, int n, const std::vector<int>& d_list) {
  CorrelationSeries series;
  for (int d : d_list) {
    series.distances.push_back(d);
    series.values.push_back(xxz_correlator_closed_form(q, n, d));
  }
  return series;
}

FitResult fit_xi(const CorrelationSeries& series, double floor) {
  std::vector<double> xs, ys;
  for (size_t i = 0; i < series.values.size(); ++i) {
    if (series.values[i] > floor) {
      xs.push_back(static_cast<double>(series.distances[i]));
      ys.push_back(std::log(series.values[i]));
    }
  }
  if (xs.size() < 3)
    throw PreconditionError("fit_xi: fewer than 3 points above the noise floor");

  const double count = static_cast<double>(xs.size());
  double sx = 0, sy = 0, sxx = 0, sxy = 0;
  for (size_t i = 0; i < xs.size(); ++i) {
    sx += xs[i];
    sy += ys[i];
    sxx += xs[i] * xs[i];
    sxy += xs[i] * ys[i];
  }
  const double denom = count * sxx - sx * sx;
  const double slope = (count * sxy - sx * sy) / denom;
  const double intercept = (sy - slope * sx) / count;
  if (slope >= 0.0)
    throw DomainError("fit_xi: series does not decay (non-negative slope)");

  double ss_res = 0, ss_tot = 0;
  const double mean = sy / count;
  for (size_t i = 0; i < xs.size(); ++i) {
    double fit = slope * xs[i] + intercept;
    ss_res += (ys[i] - fit) * (ys[i] - fit);
    ss_tot += (ys[i] - mean) * (ys[i] - mean);
  }

  FitResult result;
  result.xi = -1.0 / slope;
  result.amplitude = std::exp(intercept);
  result.r_squared = ss_tot > 0 ? 1.0 - ss_res / ss_tot : 1.0;
  result.points_used = static_cast<int>(xs.size());
  return result;
}

double xi_upper_formula(int c, int r, int g, double epsilon) {
  if (epsilon <= 0.0) throw DomainError("xi_upper_formula: epsilon must be positive");
  const double gg = static_cast<double>(g) * g;
  return (2.0 * c - 1.0) * (r - 1.0) / 2.0 * std::sqrt((gg + epsilon) / epsilon);
}

SweepResult xi_scaling_sweep(const std::vector<double>& q_grid, int d_max) {
  if (d_max < 3) throw DomainError("xi_scaling_sweep: d_max must be >= 3");
  SweepResult result;
  std::vector<double> ln_eps, ln_xi;
  std::vector<int> d_list(d_max);
  for (int d = 1; d <= d_max; ++d) d_list[d - 1] = d;

  for (double q : q_grid) {
    SweepRow row;
    row.q = q;
    row.epsilon = xxz_gap_closed_form(q, kInfiniteChain);
    CorrelationSeries series = xxz_analytic_series(q, kInfiniteChain, d_list);
    row.xi_fit = fit_xi(series).xi;
    row.xi_lower = xxz_xi_lower_bound(q);
    // nearest-neighbour chain constants: two layers, range 2, g = 2
    row.xi_upper = xi_upper_formula(2, 2, 2, row.epsilon);
    result.rows.push_back(row);
    ln_eps.push_back(std::log(row.epsilon));
    ln_xi.push_back(std::log(row.xi_fit));
  }

  // regression of ln xi on ln epsilon
  const double count = static_cast<double>(ln_eps.size());
  if (count >= 2) {
    double sx = 0, sy = 0, sxx = 0, sxy = 0;
    for (size_t i = 0; i < ln_eps.size(); ++i) {
      sx += ln_eps[i];
      sy += ln_xi[i];
      sxx += ln_eps[i] * ln_eps[i];
      sxy += ln_eps[i] * ln_xi[i];
    }
    result.slope = (count * sxy - sx * sy) / (count * sxx - sx * sx);
  }
  return result;
}

double half_chain_entropy(const StateVector& psi, int local_dim, int cut) {
  if (std::abs(psi.norm() - 1.0) > 1e-8)
    throw PreconditionError("half_chain_entropy: state is not normalized");
  int n = 0;
  Eigen::Index dim = 1;
  while (dim < psi.size()) {
    dim *= local_dim;
    ++n;
  }
  if (dim != psi.size())
    throw DimensionError("half_chain_entropy: length is not a power of the local dimension");
  if (cut < 1 || cut >= n)
    throw DomainError("half_chain_entropy: cut must satisfy 1 <= cut < n");

  const Eigen::Index rows = hilbert_dim(local_dim, cut);
  const Eigen::Index cols = hilbert_dim(local_dim, n - cut);
  // site 1 is the most significant digit, so the first `cut` sites form the
  // row index of the row-major reshape
  DenseMatrix amplitude(rows, cols);
  for (Eigen::Index i = 0; i < rows; ++i)
    for (Eigen::Index j = 0; j < cols; ++j) amplitude(i, j) = psi(i * cols + j);

  Eigen::JacobiSVD<DenseMatrix> svd(amplitude);
  double entropy = 0.0;
  for (Eigen::Index i = 0; i < svd.singularValues().size(); ++i) {
    double p = svd.singularValues()(i);
    p *= p;
    if (p > 1e-300) entropy -= p * std::log(p);
  }
  return entropy;
}

}  // namespace ffcorr
