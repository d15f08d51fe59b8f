#include "ffcorr/agsp.hpp"

#include <algorithm>
#include <cmath>

namespace ffcorr {

double chebyshev_T(int m, double x) {
  if (m < 0) throw DomainError("chebyshev_T: degree must be >= 0");
  if (m == 0) return 1.0;
  if (m == 1) return x;
  double prev = 1.0, cur = x;
  for (int k = 2; k <= m; ++k) {
    double next = 2.0 * x * cur - prev;
    prev = cur;
    cur = next;
  }
  return cur;
}

ChebyshevParams ChebyshevParams::from_gap(int m, double epsilon, int g) {
  if (epsilon <= 0.0) throw DomainError("ChebyshevParams: epsilon must be positive");
  if (g < 1) throw DomainError("ChebyshevParams: g must be >= 1");
  return from_delta(m, epsilon / (static_cast<double>(g) * g + epsilon));
}

ChebyshevParams ChebyshevParams::from_delta(int m, double delta) {
  if (!(delta > 0.0) || !(delta < 1.0))
    throw DomainError("ChebyshevParams: delta must lie in (0, 1)");
  if (m < 0) throw DomainError("ChebyshevParams: degree must be >= 0");
  ChebyshevParams params;
  params.m = m;
  params.delta = delta;
  params.normalization = chebyshev_T(m, 2.0 / (1.0 - delta) - 1.0);
  return params;
}

double qm_eval(const ChebyshevParams& params, double x) {
  return chebyshev_T(params.m, 2.0 * x / (1.0 - params.delta) - 1.0) / params.normalization;
}

namespace {

// T_m(Y)/normalization by the operator three-term recurrence: m applications
// of Y per apply, no monomial expansion.
class ChebyshevOperatorNode final : public MapNode {
 public:
  ChebyshevOperatorNode(LinearMap argument, int m, double normalization)
      : argument_(std::move(argument)), m_(m), inv_norm_(1.0 / normalization) {}

  Eigen::Index dim() const override { return argument_.dim(); }

  void apply(const StateVector& in, StateVector& out) const override {
    run(in, out, /*adjoint=*/false);
  }
  void apply_adjoint(const StateVector& in, StateVector& out) const override {
    run(in, out, /*adjoint=*/true);
  }

 private:
  void run(const StateVector& in, StateVector& out, bool adjoint) const {
    if (m_ == 0) {
      out = inv_norm_ * in;
      return;
    }
    StateVector prev = in;
    StateVector cur = adjoint ? argument_.apply_adjoint(in) : argument_.apply(in);
    for (int k = 2; k <= m_; ++k) {
      StateVector next = adjoint ? argument_.apply_adjoint(cur) : argument_.apply(cur);
      next = 2.0 * next - prev;
      prev = std::move(cur);
      cur = std::move(next);
    }
    out = inv_norm_ * cur;
  }

  LinearMap argument_;
  int m_;
  double inv_norm_;
};

}  // namespace

LinearMap qm_operator(const LinearMap& pdagger_p, const ChebyshevParams& params) {
  // argument 2 X/(1-delta) - 1 of the numerator polynomial
  LinearMap shifted = LinearMap::affine(-1.0, 2.0 / (1.0 - params.delta), pdagger_p);
  return LinearMap(std::make_shared<ChebyshevOperatorNode>(std::move(shifted), params.m,
                                                           params.normalization));
}

StateVector agsp_apply(const HamiltonianSpec& spec, const LayerSchedule& schedule, int m,
                       const StateVector& v) {
  GroundSpaceBasis gs = ground_space(spec);
  InteractionGraph graph = interaction_graph(spec);
  ChebyshevParams params = ChebyshevParams::from_gap(m, gs.gap, std::max(graph.g, 1));
  LinearMap p = build_P(spec, schedule);
  LinearMap pdp = LinearMap::product({p.adjoint(), p});
  return qm_operator(pdp, params).apply(v);
}

int max_m_for_distance(int d, int c, int r) {
  if (d < 1) throw DomainError("max_m_for_distance: d must be >= 1");
  if (c < 1) throw DomainError("max_m_for_distance: c must be >= 1");
  if (r == 1)
    throw DomainError(
        "max_m_for_distance: r = 1 is degenerate (single-site terms commute with any "
        "observable at distance >= 1, so the identity holds for every m)");
  if (r < 1) throw DomainError("max_m_for_distance: r must be >= 1");
  const int denom = (2 * c - 1) * (r - 1);
  // largest m strictly below d/denom
  return (d % denom == 0) ? d / denom - 1 : d / denom;
}

namespace {

int observable_distance(const HamiltonianSpec& spec, const TermSpec& a, const TermSpec& b) {
  for (int site_a : a.sites)
    for (int site_b : b.sites)
      if (site_a == site_b)
        throw PreconditionError("causal_cone_check: observables must have disjoint supports");
  int d = -1;
  for (int site_a : a.sites) {
    for (int site_b : b.sites) {
      int dist = std::abs(spec.positions[site_a - 1] - spec.positions[site_b - 1]);
      d = (d < 0) ? dist : std::min(d, dist);
    }
  }
  if (d <= 0)
    throw PreconditionError("causal_cone_check: observables sit at distance 0");
  return d;
}

}  // namespace

ConeReport causal_cone_check(const HamiltonianSpec& spec, const LayerSchedule& schedule,
                             const GroundSpaceBasis& gs, const TermSpec& a,
                             const TermSpec& b, int m_max, const ConeOptions& opts) {
  ConeReport report;
  report.distance = observable_distance(spec, a, b);
  report.admissible_max_m =
      max_m_for_distance(report.distance, schedule.layer_count, spec.r);

  LinearMap p = build_P(spec, schedule);
  LinearMap pdp = LinearMap::product({p.adjoint(), p});
  LinearMap a_map = LinearMap::embed(a, spec.s, spec.n);
  LinearMap b_map = LinearMap::embed(b, spec.s, spec.n);

  const int scan_max = std::max(m_max, report.admissible_max_m) + opts.extra_m;
  report.pass = true;

  // per ground-basis vector: reference value and the running (P^dagger P)^m B psi
  std::vector<StateVector> b_psi(gs.degeneracy);
  std::vector<StateVector> a_dag_psi(gs.degeneracy);
  std::vector<Complex> reference(gs.degeneracy);
  for (int kcol = 0; kcol < gs.degeneracy; ++kcol) {
    StateVector psi = gs.basis.col(kcol);
    b_psi[kcol] = b_map.apply(psi);
    a_dag_psi[kcol] = a_map.apply_adjoint(psi);
    reference[kcol] = a_dag_psi[kcol].dot(b_psi[kcol]);
  }

  for (int m = 1; m <= scan_max; ++m) {
    ConeRow row;
    row.m = m;
    row.guaranteed = m <= report.admissible_max_m;
    for (int kcol = 0; kcol < gs.degeneracy; ++kcol) {
      b_psi[kcol] = pdp.apply(b_psi[kcol]);
      Complex value = a_dag_psi[kcol].dot(b_psi[kcol]);
      row.worst_residual = std::max(row.worst_residual, std::abs(value - reference[kcol]));
    }
    row.pass = !row.guaranteed || row.worst_residual <= opts.tol;
    if (!row.pass) report.pass = false;
    if (report.first_failing_m < 0 && row.worst_residual > opts.tol)
      report.first_failing_m = m;
    report.rows.push_back(row);
  }
  return report;
}

std::vector<AgspRow> agsp_norm_sweep(const HamiltonianSpec& spec, const LayerSchedule& schedule,
                                     const GroundSpaceBasis& gs,
                                     const std::vector<int>& m_list, double tol,
                                     uint64_t seed) {
  InteractionGraph graph = interaction_graph(spec);
  const int g = std::max(graph.g, 1);
  LinearMap p = build_P(spec, schedule);
  LinearMap pdp = LinearMap::product({p.adjoint(), p});
  LinearMap g_proj = gs.projector();

  std::vector<AgspRow> rows;
  rows.reserve(m_list.size());
  for (int m : m_list) {
    ChebyshevParams params = ChebyshevParams::from_gap(m, gs.gap, g);
    LinearMap diff =
        LinearMap::sum({qm_operator(pdp, params), LinearMap::scale(-1.0, g_proj)});
    AgspRow row;
    row.m = m;
    row.delta = params.delta;
    row.bound = 2.0 * std::exp(-2.0 * m * std::sqrt(params.delta));
    row.measured_norm = operator_norm(diff, 1e-12, 200000, seed + m).value;
    row.margin = row.bound - row.measured_norm;
    row.pass = row.measured_norm <= row.bound + tol;
    rows.push_back(row);
  }
  return rows;
}

}  // namespace ffcorr
