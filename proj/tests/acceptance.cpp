// Acceptance suite: one check per criterion, each printing a pass/fail line.
// Run with a criterion number (1-9) or no argument for all of them.

#include <chrono>
#include <cmath>
#include <cstdio>
#include <cstring>
#include <string>
#include <vector>

#include "ffcorr/agsp.hpp"
#include "ffcorr/correlation.hpp"
#include "ffcorr/detectability.hpp"
#include "ffcorr/model.hpp"
#include "ffcorr/spectral.hpp"
#include "oracle.hpp"

using namespace ffcorr;

namespace {

const std::vector<double> kQGrid{0.3, 0.5, 0.7, 0.9};
const std::vector<int> kNGrid{3, 4, 5, 6, 7, 8, 9, 10};

struct Check {
  bool ok = true;
  std::string detail;

  void fail(const std::string& msg) {
    ok = false;
    if (!detail.empty()) detail += "; ";
    detail += msg;
  }
};

std::string point(double q, int n) {
  char buf[64];
  std::snprintf(buf, sizeof(buf), "(q=%.2f, n=%d)", q, n);
  return buf;
}

// 1. numerically computed gap vs the closed form, 1e-8, full grid
Check criterion_gap_oracle() {
  Check check;
  double worst = 0.0;
  for (double q : kQGrid) {
    for (int n : kNGrid) {
      GroundSpaceBasis gs = ground_space(xxz_spec(q, n));
      double residual = std::abs(gs.gap - xxz_gap_closed_form(q, n));
      worst = std::max(worst, residual);
      if (residual > 1e-8) check.fail("gap mismatch " + std::to_string(residual) + " at " + point(q, n));
      if (gs.degeneracy != n + 1)
        check.fail("degeneracy " + std::to_string(gs.degeneracy) + " != n+1 at " + point(q, n));
    }
  }
  check.detail += "worst |eps - closed form| = " + std::to_string(worst);
  return check;
}

// 2. ||P-G|| <= 1/sqrt(1+eps/g^2) and 0 <= P^dagger P - G <= (1-delta) 1
Check criterion_detectability() {
  Check check;
  double worst_margin = 1.0;
  for (double q : kQGrid) {
    for (int n : kNGrid) {
      DLReport report = dl_check(xxz_spec(q, n));
      worst_margin = std::min(worst_margin, report.margin);
      if (report.dl_norm > report.bound + 1e-8)
        check.fail("norm above the bound at " + point(q, n));
      if (report.pp_lambda_min < -1e-9)
        check.fail("P^dagger P - G not PSD at " + point(q, n));
      if (report.pp_lambda_max > 1.0 - report.delta + 1e-9)
        check.fail("P^dagger P - G above 1-delta at " + point(q, n));
    }
  }
  check.detail += "smallest bound margin = " + std::to_string(worst_margin);
  return check;
}

// 3. the Remark: 1 - ||P-G|| equals eps to 1e-8 with the even/odd order
Check criterion_remark() {
  Check check;
  std::vector<RemarkRow> rows = remark_scan(kQGrid, kNGrid, 1e-8);
  double worst = 0.0;
  int failures = 0;
  for (const auto& row : rows) {
    worst = std::max(worst, row.residual);
    if (!row.pass) {
      ++failures;
      check.fail("residual " + std::to_string(row.residual) + " at " + point(row.q, row.n));
    }
  }
  char buf[96];
  std::snprintf(buf, sizeof(buf), "%zu points, worst residual %.3e, %d failed", rows.size(),
                worst, failures);
  check.detail += buf;
  return check;
}

// 4. causal-cone identity at n=10 for d in 4..8, every ground vector
Check criterion_causal_cone() {
  Check check;
  const double q = 0.5;
  const int n = 10;
  HamiltonianSpec spec = xxz_spec(q, n);
  GroundSpaceBasis gs = ground_space(spec);
  LayerSchedule schedule = greedy_color(interaction_graph(spec));
  double worst = 0.0;
  for (int d = 4; d <= 8; ++d) {
    TermSpec a = site_observable(1, number_operator());
    TermSpec b = site_observable(1 + d, number_operator());
    ConeReport report = causal_cone_check(spec, schedule, gs, a, b,
                                          max_m_for_distance(d, schedule.layer_count, spec.r));
    for (const auto& row : report.rows) {
      if (!row.guaranteed) continue;
      worst = std::max(worst, row.worst_residual);
      if (row.worst_residual > 1e-10)
        check.fail("identity residual " + std::to_string(row.worst_residual) + " at d=" +
                   std::to_string(d) + ", m=" + std::to_string(row.m));
    }
  }
  char buf[64];
  std::snprintf(buf, sizeof(buf), "worst admissible-m residual %.3e", worst);
  check.detail += buf;
  return check;
}

// 5. correlator against the closed form, 1e-10, all distances on the grid
Check criterion_correlator_oracle() {
  Check check;
  double worst = 0.0;
  for (double q : kQGrid) {
    for (int n : kNGrid) {
      HamiltonianSpec spec = xxz_spec(q, n);
      GroundSpaceBasis gs = ground_space(spec);
      StateVector psi = xxz_psi1(q, n);
      TermSpec a = site_observable(1, number_operator());
      for (int d = 1; d <= n - 1; ++d) {
        TermSpec b = site_observable(1 + d, number_operator());
        double value = correlator_deg(spec, gs, psi, a, b);
        double residual = std::abs(value - xxz_correlator_closed_form(q, n, d));
        worst = std::max(worst, residual);
        if (residual > 1e-10)
          check.fail("correlator off by " + std::to_string(residual) + " at " + point(q, n) +
                     ", d=" + std::to_string(d));
      }
    }
  }
  char buf[64];
  std::snprintf(buf, sizeof(buf), "worst |measured - closed form| %.3e", worst);
  check.detail += buf;
  return check;
}

// 6. operator AGSP bound for m in 1..10 plus the scalar envelope to m = 30
Check criterion_agsp_bound() {
  Check check;
  std::vector<int> m_list;
  for (int m = 1; m <= 10; ++m) m_list.push_back(m);
  double worst_margin = 1.0;
  for (double q : {0.5, 0.9}) {
    for (int n : {6, 8}) {
      HamiltonianSpec spec = xxz_spec(q, n);
      GroundSpaceBasis gs = ground_space(spec);
      LayerSchedule schedule = greedy_color(interaction_graph(spec));
      for (const auto& row : agsp_norm_sweep(spec, schedule, gs, m_list)) {
        worst_margin = std::min(worst_margin, row.margin);
        if (!row.pass)
          check.fail("operator bound violated at " + point(q, n) + ", m=" + std::to_string(row.m));
      }
    }
  }

  for (int m = 1; m <= 30; ++m) {
    for (double delta : {0.01, 0.05, 0.1, 0.2, 0.3, 0.5}) {
      ChebyshevParams params = ChebyshevParams::from_delta(m, delta);
      const double bound = 2.0 * std::exp(-2.0 * m * std::sqrt(delta));
      const int points = 10000;
      for (int i = 0; i <= points; ++i) {
        double x = (1.0 - delta) * i / points;
        if (std::abs(qm_eval(params, x)) > bound) {
          check.fail("scalar envelope violated at m=" + std::to_string(m));
          break;
        }
      }
    }
  }
  char buf[64];
  std::snprintf(buf, sizeof(buf), "smallest operator-bound margin %.3e", worst_margin);
  check.detail += buf;
  return check;
}

// 7. scaling of the fitted correlation length against the gap
Check criterion_scaling() {
  Check check;
  std::vector<double> q_grid;
  for (int i = 0; i < 10; ++i) q_grid.push_back(0.90 + 0.01 * i);
  SweepResult sweep = xi_scaling_sweep(q_grid);
  if (sweep.slope < -0.55 || sweep.slope > -0.45)
    check.fail("slope " + std::to_string(sweep.slope) + " outside [-0.55, -0.45]");
  for (const auto& row : sweep.rows) {
    if (row.xi_lower > row.xi_fit + 1e-9)
      check.fail("xi_fit below the lower bound at q=" + std::to_string(row.q));
    if (row.xi_fit > row.xi_upper + 1e-9)
      check.fail("xi_fit above the upper bound at q=" + std::to_string(row.q));
  }
  char buf[48];
  std::snprintf(buf, sizeof(buf), "slope %.4f", sweep.slope);
  check.detail += buf;
  return check;
}

// 8. matrix-free operators vs independent dense constructions, n <= 6
Check criterion_dense_equivalence() {
  Check check;
  const double q = 0.6;
  double worst = 0.0;
  for (int n = 2; n <= 6; ++n) {
    HamiltonianSpec spec = xxz_spec(q, n);
    GroundSpaceBasis gs = ground_space(spec);
    InteractionGraph graph = interaction_graph(spec);
    LayerSchedule schedule = greedy_color(graph);

    oracle::Matrix h_dense = oracle::xxz_hamiltonian(q, n);
    oracle::Matrix l1_dense = oracle::xxz_layer(q, n, 1);
    oracle::Matrix l2_dense = oracle::xxz_layer(q, n, 0);
    oracle::Matrix p_dense = oracle::xxz_P(q, n);
    oracle::Matrix g_dense = oracle::kernel_projector(h_dense);

    const int m = 3;
    ChebyshevParams params = ChebyshevParams::from_gap(m, gs.gap, std::max(graph.g, 1));
    oracle::Matrix qm_dense = oracle::matrix_function(
        p_dense.adjoint() * p_dense, [&](double x) { return qm_eval(params, x); });

    LinearMap h = hamiltonian_map(spec);
    LinearMap l1 = build_layer(spec, schedule, 1);
    LinearMap l2 = schedule.layer_count >= 2 ? build_layer(spec, schedule, 2)
                                             : LinearMap::identity(h.dim());
    LinearMap p = build_P(spec, schedule);
    LinearMap pdp = LinearMap::product({p.adjoint(), p});
    LinearMap qm = qm_operator(pdp, params);
    LinearMap g = gs.projector();

    struct Pair {
      const char* name;
      LinearMap map;
      const oracle::Matrix& dense;
    };
    const Pair pairs[] = {{"H", h, h_dense},   {"L1", l1, l1_dense}, {"L2", l2, l2_dense},
                          {"P", p, p_dense},   {"Qm", qm, qm_dense}, {"G", g, g_dense}};
    for (const auto& pair : pairs) {
      for (uint64_t seed = 0; seed < 4; ++seed) {
        StateVector v = random_state(h.dim(), 7000 + 13 * n + seed);
        v.normalize();
        double diff = (pair.map.apply(v) - pair.dense * v).cwiseAbs().maxCoeff();
        worst = std::max(worst, diff);
        if (diff > 1e-9)
          check.fail(std::string(pair.name) + " differs from dense by " + std::to_string(diff) +
                     " at n=" + std::to_string(n));
      }
    }
  }
  char buf[64];
  std::snprintf(buf, sizeof(buf), "worst entrywise deviation %.3e", worst);
  check.detail += buf;
  return check;
}

// 9. projectorization brackets: a eps' <= eps <= eps'
Check criterion_projectorization() {
  Check check;
  const double q = 0.5;
  const int n = 6;
  for (double a : {0.3, 0.7}) {
    HamiltonianSpec scaled = xxz_spec(q, n);
    for (auto& term : scaled.terms) {
      term.matrix *= a;
      term.projector = false;
    }
    auto [projected, a_measured] = projectorize_spec(scaled);
    double eps = ground_space(scaled).gap;
    double eps_prime = ground_space(projected).gap;
    char buf[96];
    std::snprintf(buf, sizeof(buf), "a=%.1f: eps=%.6f eps'=%.6f; ", a, eps, eps_prime);
    check.detail += buf;
    if (std::abs(a_measured - a) > 1e-9)
      check.fail("measured scale " + std::to_string(a_measured) + " != " + std::to_string(a));
    if (a_measured * eps_prime > eps + 1e-9) check.fail("a eps' > eps for a=" + std::to_string(a));
    if (eps > eps_prime + 1e-9) check.fail("eps > eps' for a=" + std::to_string(a));
  }

  // mixed scales: the bracket holds with a = min_i a_i
  HamiltonianSpec mixed = xxz_spec(q, n);
  for (size_t t = 0; t < mixed.terms.size(); ++t) {
    mixed.terms[t].matrix *= (t % 2 == 0 ? 0.3 : 0.7);
    mixed.terms[t].projector = false;
  }
  auto [projected, a_min] = projectorize_spec(mixed);
  double eps = ground_space(mixed).gap;
  double eps_prime = ground_space(projected).gap;
  if (a_min * eps_prime > eps + 1e-9) check.fail("mixed: a eps' > eps");
  if (eps > eps_prime + 1e-9) check.fail("mixed: eps > eps'");
  return check;
}

struct Criterion {
  int number;
  const char* name;
  Check (*run)();
};

const Criterion kCriteria[] = {
    {1, "XXZ gap oracle", criterion_gap_oracle},
    {2, "detectability lemma bound", criterion_detectability},
    {3, "Remark equality 1-||P-G|| = eps", criterion_remark},
    {4, "causal-cone identity", criterion_causal_cone},
    {5, "correlator closed-form oracle", criterion_correlator_oracle},
    {6, "AGSP norm bound", criterion_agsp_bound},
    {7, "correlation-length scaling", criterion_scaling},
    {8, "dense-oracle equivalence", criterion_dense_equivalence},
    {9, "projectorization bracket", criterion_projectorization},
};

}  // namespace

int main(int argc, char** argv) {
  int only = 0;
  if (argc > 1) only = std::atoi(argv[1]);

  bool all_ok = true;
  for (const auto& criterion : kCriteria) {
    if (only != 0 && criterion.number != only) continue;
    auto start = std::chrono::steady_clock::now();
    Check check;
    try {
      check = criterion.run();
    } catch (const std::exception& e) {
      check.ok = false;
      check.detail = std::string("exception: ") + e.what();
    }
    double seconds =
        std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    std::printf("[%s] criterion %d: %s (%s) [%.1fs]\n", check.ok ? "PASS" : "FAIL",
                criterion.number, criterion.name, check.detail.c_str(), seconds);
    std::fflush(stdout);
    all_ok = all_ok && check.ok;
  }
  return all_ok ? 0 : 1;
}
