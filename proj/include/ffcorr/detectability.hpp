#pragma once

#include <vector>

#include "ffcorr/linalg.hpp"
#include "ffcorr/model.hpp"
#include "ffcorr/spectral.hpp"

namespace ffcorr {

// Proper coloring of the interaction graph. Terms with color j form layer
// L_j; the product is applied in ascending color, P = L_c ... L_1.
struct LayerSchedule {
  int layer_count = 0;
  std::vector<int> color;  // per term, 1-based colors
  // Term indices per layer, ascending within each layer.
  std::vector<std::vector<int>> layers() const;
};

// Greedy coloring in ascending term-index order; c <= g+1 always, and the
// 1D nearest-neighbour chain gets the even/odd split with c = 2.
LayerSchedule greedy_color(const InteractionGraph& graph);

// Product of the complements (1 - H_i) of one layer, ascending term index.
LinearMap build_layer(const HamiltonianSpec& spec, const LayerSchedule& schedule, int layer);

// P = L_c ... L_1 (layer 1 acts first on kets).
LinearMap build_P(const HamiltonianSpec& spec, const LayerSchedule& schedule);

struct DLReport {
  double epsilon = 0.0;
  int degeneracy = 0;
  int g = 0;
  int c = 0;
  double dl_norm = 0.0;      // ||P - G||
  double bound = 0.0;        // 1/sqrt(1 + epsilon/g^2); 0 when g = 0
  double margin = 0.0;       // bound - dl_norm
  bool pass = false;
  double delta = 0.0;        // epsilon / (g^2 + epsilon)
  double pp_lambda_min = 0.0;  // extremal eigenvalues of P^dagger P - G
  double pp_lambda_max = 0.0;
  bool pp_pass = false;      // 0 <= P^dagger P - G <= (1-delta)*1 within tol
};

struct DLOptions {
  double tol = 1e-8;          // slack for the norm bound
  double eig_tol = 1e-9;      // slack for the operator-inequality check
  uint64_t seed = 7;
  int max_iter = 200000;
  bool reversed_layers = false;  // apply layers in descending color instead
};

// Measures ||P - G|| against the detectability-lemma bound and checks the
// operator inequality 0 <= P^dagger P - G <= (1-delta)*1.
DLReport dl_check(const HamiltonianSpec& spec, const DLOptions& opts = {});

struct RemarkRow {
  double q = 0.0;
  int n = 0;
  double epsilon = 0.0;
  double dl_norm = 0.0;
  double residual = 0.0;  // |(1 - ||P-G||) - epsilon|
  double bound = 0.0;
  bool pass = false;
};

// Tests the observed equality 1 - ||P - G|| = epsilon on the XXZ chain with
// the even/odd two-layer ordering, point by point. The equality is reported,
// never assumed: rows with residual > tol come back flagged.
std::vector<RemarkRow> remark_scan(const std::vector<double>& q_grid,
                                   const std::vector<int>& n_grid, double tol = 1e-8,
                                   const DLOptions& opts = {});

}  // namespace ffcorr
