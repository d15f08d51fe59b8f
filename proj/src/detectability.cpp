#include "ffcorr/detectability.hpp"

#include <algorithm>
#include <cmath>

namespace ffcorr {

std::vector<std::vector<int>> LayerSchedule::layers() const {
  std::vector<std::vector<int>> out(layer_count);
  for (size_t t = 0; t < color.size(); ++t) out[color[t] - 1].push_back(static_cast<int>(t));
  return out;
}

LayerSchedule greedy_color(const InteractionGraph& graph) {
  LayerSchedule schedule;
  schedule.color.assign(graph.term_count, 0);
  for (int t = 0; t < graph.term_count; ++t) {
    std::vector<bool> used(graph.term_count + 2, false);
    for (int neighbor : graph.adjacency[t])
      if (neighbor < t) used[schedule.color[neighbor]] = true;
    int c = 1;
    while (used[c]) ++c;
    schedule.color[t] = c;
    schedule.layer_count = std::max(schedule.layer_count, c);
  }
  return schedule;
}

LinearMap build_layer(const HamiltonianSpec& spec, const LayerSchedule& schedule, int layer) {
  if (layer < 1 || layer > schedule.layer_count)
    throw DomainError("build_layer: layer index out of range");
  if (schedule.color.size() != spec.terms.size())
    throw DimensionError("schedule does not match the spec's term count");
  std::vector<LinearMap> factors;
  for (size_t t = 0; t < spec.terms.size(); ++t) {
    if (schedule.color[t] != layer) continue;
    factors.push_back(LinearMap::affine(
        1.0, -1.0, LinearMap::embed(spec.terms[t], spec.s, spec.n)));
  }
  if (factors.empty()) return LinearMap::identity(hilbert_dim(spec.s, spec.n));
  return LinearMap::product(std::move(factors));
}

LinearMap build_P(const HamiltonianSpec& spec, const LayerSchedule& schedule) {
  // operator order L_c ... L_1: layer 1 is the rightmost factor
  std::vector<LinearMap> factors;
  for (int layer = schedule.layer_count; layer >= 1; --layer)
    factors.push_back(build_layer(spec, schedule, layer));
  return LinearMap::product(std::move(factors));
}

namespace {

LinearMap build_P_reversed(const HamiltonianSpec& spec, const LayerSchedule& schedule) {
  std::vector<LinearMap> factors;
  for (int layer = 1; layer <= schedule.layer_count; ++layer)
    factors.push_back(build_layer(spec, schedule, layer));
  return LinearMap::product(std::move(factors));
}

}  // namespace

DLReport dl_check(const HamiltonianSpec& spec, const DLOptions& opts) {
  GroundSpaceBasis gs = ground_space(spec);
  InteractionGraph graph = interaction_graph(spec);
  LayerSchedule schedule = greedy_color(graph);

  DLReport report;
  report.epsilon = gs.gap;
  report.degeneracy = gs.degeneracy;
  report.g = graph.g;
  report.c = schedule.layer_count;
  report.delta = gs.gap / (static_cast<double>(graph.g) * graph.g + gs.gap);

  LinearMap p = opts.reversed_layers ? build_P_reversed(spec, schedule)
                                     : build_P(spec, schedule);
  LinearMap g_proj = gs.projector();
  LinearMap p_minus_g = LinearMap::sum({p, LinearMap::scale(-1.0, g_proj)});
  report.dl_norm = operator_norm(p_minus_g, 1e-12, opts.max_iter, opts.seed).value;

  // g = 0 means every pair of terms commutes, where P equals G exactly and
  // the bound degenerates to 0.
  report.bound =
      graph.g > 0 ? 1.0 / std::sqrt(1.0 + gs.gap / (static_cast<double>(graph.g) * graph.g))
                  : 0.0;
  report.margin = report.bound - report.dl_norm;
  report.pass = report.dl_norm <= report.bound + opts.tol;

  LinearMap pp_minus_g = LinearMap::sum(
      {LinearMap::product({p.adjoint(), p}), LinearMap::scale(-1.0, g_proj)});
  LanczosOptions lopts;
  lopts.seed = opts.seed + 1;
  std::tie(report.pp_lambda_min, report.pp_lambda_max) = extremal_eigs(pp_minus_g, lopts);
  report.pp_pass = report.pp_lambda_min >= -opts.eig_tol &&
                   report.pp_lambda_max <= 1.0 - report.delta + opts.eig_tol;
  return report;
}

std::vector<RemarkRow> remark_scan(const std::vector<double>& q_grid,
                                   const std::vector<int>& n_grid, double tol,
                                   const DLOptions& opts) {
  std::vector<RemarkRow> rows;
  rows.reserve(q_grid.size() * n_grid.size());
  for (double q : q_grid) {
    for (int n : n_grid) {
      HamiltonianSpec spec = xxz_spec(q, n);
      DLOptions point = opts;
      point.seed = opts.seed + 1000003ull * rows.size();
      DLReport dl = dl_check(spec, point);
      RemarkRow row;
      row.q = q;
      row.n = n;
      row.epsilon = dl.epsilon;
      row.dl_norm = dl.dl_norm;
      row.residual = std::abs((1.0 - dl.dl_norm) - dl.epsilon);
      row.bound = dl.bound;
      row.pass = row.residual <= tol;
      rows.push_back(row);
    }
  }
  return rows;
}

}  // namespace ffcorr
