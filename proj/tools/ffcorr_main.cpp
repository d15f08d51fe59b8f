// ffcorr command line driver: validations, detectability-lemma checks, AGSP
// sweeps, causal-cone checks, correlator series, scaling sweeps and entropy
// probes, all emitting deterministic CSV.
//
// Exit codes: 0 pass, 1 validation failure, 2 I/O or parse error,
// 3 bound violation, 4 solver non-convergence.

#include <atomic>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <iostream>
#include <memory>
#include <sstream>
#include <string>
#include <thread>
#include <vector>

#include <CLI11.hpp>

#include "ffcorr/agsp.hpp"
#include "ffcorr/correlation.hpp"
#include "ffcorr/detectability.hpp"
#include "ffcorr/grid.hpp"
#include "ffcorr/model.hpp"
#include "ffcorr/model_io.hpp"
#include "ffcorr/spectral.hpp"
#include "ffcorr/version.hpp"

using namespace ffcorr;

namespace {

constexpr int kExitPass = 0;
constexpr int kExitValidation = 1;
constexpr int kExitIo = 2;
constexpr int kExitBound = 3;
constexpr int kExitNoConvergence = 4;

struct Options {
  std::string model = "xxz";
  std::string file;
  double q = 0.5;
  int n = 6;
  std::string q_grid;
  std::string n_grid;
  std::string m_grid = "1:10:1";
  double tol = -1.0;  // command-specific default when negative
  uint64_t seed = 7;
  int threads = 1;
  std::string out;
  bool force = false;
  int max_iter = 200000;
  bool reversed = false;
  int site_a = 1;
  int site_b = -1;
  int m_max = -1;
  int cut = -1;
  std::string observable = "num";
};

uint64_t fnv1a(const std::string& text) {
  uint64_t hash = 1469598103934665603ull;
  for (unsigned char c : text) {
    hash ^= c;
    hash *= 1099511628211ull;
  }
  return hash;
}

std::string fmt(double value) {
  char buf[40];
  std::snprintf(buf, sizeof(buf), "%.15g", value);
  return buf;
}

// Output sink: stdout or --out file, with the standard comment header.
class CsvWriter {
 public:
  CsvWriter(const Options& opts, const std::string& config, const std::string& columns) {
    if (!opts.out.empty()) {
      file_.open(opts.out, std::ios::binary);  // LF line endings everywhere
      if (!file_) throw ParseError("cannot open output file: " + opts.out);
      stream_ = &file_;
    } else {
      stream_ = &std::cout;
    }
    char hash[24];
    std::snprintf(hash, sizeof(hash), "%016llx",
                  static_cast<unsigned long long>(fnv1a(config)));
    *stream_ << "# ffcorr " << kVersion << "\n";
    *stream_ << "# config " << hash << " " << config << "\n";
    *stream_ << columns << "\n";
  }

  void row(const std::vector<std::string>& cells) {
    for (size_t i = 0; i < cells.size(); ++i) {
      if (i) *stream_ << ",";
      *stream_ << cells[i];
    }
    *stream_ << "\n";
  }

 private:
  std::ofstream file_;
  std::ostream* stream_ = nullptr;
};

template <typename F>
void parallel_for(int count, int threads, F&& fn) {
  if (threads <= 1 || count <= 1) {
    for (int i = 0; i < count; ++i) fn(i);
    return;
  }
  std::atomic<int> next{0};
  std::vector<std::thread> pool;
  const int workers = std::min(threads, count);
  pool.reserve(workers);
  for (int t = 0; t < workers; ++t) {
    pool.emplace_back([&] {
      for (;;) {
        int i = next.fetch_add(1);
        if (i >= count) return;
        fn(i);
      }
    });
  }
  for (auto& thread : pool) thread.join();
}

HamiltonianSpec build_model(const Options& opts, double q, int n) {
  HamiltonianSpec spec;
  if (!opts.file.empty()) {
    spec = load_spec_file(opts.file);
  } else if (opts.model == "xxz") {
    if (q == 1.0)
      std::cerr << "warning: q = 1 is gapless in the infinite-chain limit\n";
    spec = xxz_spec(q, n);
  } else {
    throw ValidationError("unknown model: " + opts.model);
  }

  // desk-scale guard: a state vector of dimension s^n
  Eigen::Index dim = hilbert_dim(spec.s, spec.n);
  if (dim > 16384 && !opts.force) {
    std::ostringstream msg;
    msg << "state dimension " << dim << " exceeds the desk-scale guard of 16384 "
        << "(~" << (dim * 16) / (1024 * 1024) << " MiB per vector, and dense checks grow "
        << "quadratically); pass --force to proceed";
    throw ValidationError(msg.str());
  }
  return spec;
}

DenseMatrix observable_matrix(const std::string& name) {
  if (name == "num") return number_operator();
  if (name == "z") return pauli_z();
  throw ValidationError("unknown observable (expected num or z): " + name);
}

std::vector<double> q_points(const Options& opts, const char* fallback = nullptr) {
  if (!opts.q_grid.empty()) return parse_grid(opts.q_grid);
  if (fallback) return parse_grid(fallback);
  return {opts.q};
}

std::vector<int> n_points(const Options& opts, const char* fallback = nullptr) {
  if (!opts.n_grid.empty()) return parse_int_grid(opts.n_grid);
  if (fallback) return parse_int_grid(fallback);
  return {opts.n};
}

// ---- commands ----

int cmd_validate(const Options& opts) {
  HamiltonianSpec spec;
  try {
    spec = build_model(opts, opts.q, opts.n);
  } catch (const ParseError& e) {
    std::cout << "{\"valid\": false, \"violations\": [{\"term\": 0, \"message\": \""
              << e.what() << "\"}]}\n";
    throw;
  }

  ValidationReport report = validate_spec(spec);
  std::vector<std::pair<int, std::string>> problems;
  for (const auto& v : report.violations) problems.emplace_back(v.term_index, v.message);

  if (report.valid()) {
    try {
      ground_space(spec);
    } catch (const NotFrustrationFreeError& e) {
      problems.emplace_back(-1, e.what());
    } catch (const InconsistencyError& e) {
      problems.emplace_back(-1, e.what());
    }
  }

  std::ostream* out = &std::cout;
  std::ofstream file;
  if (!opts.out.empty()) {
    file.open(opts.out, std::ios::binary);
    if (!file) throw ParseError("cannot open output file: " + opts.out);
    out = &file;
  }
  *out << "{\"valid\": " << (problems.empty() ? "true" : "false") << ", \"violations\": [";
  for (size_t i = 0; i < problems.size(); ++i) {
    if (i) *out << ", ";
    *out << "{\"term\": " << problems[i].first + 1 << ", \"message\": \"" << problems[i].second
         << "\"}";
  }
  *out << "]}\n";
  return problems.empty() ? kExitPass : kExitValidation;
}

int cmd_dl(const Options& opts) {
  const double tol = opts.tol > 0 ? opts.tol : 1e-8;
  std::vector<std::pair<double, int>> points;
  std::string label = opts.file.empty() ? "xxz" : opts.file;
  if (opts.file.empty()) {
    for (double q : q_points(opts))
      for (int n : n_points(opts)) points.emplace_back(q, n);
  } else {
    points.emplace_back(0.0, 0);
  }

  std::ostringstream config;
  config << "dl model=" << label << " q-grid=" << (opts.q_grid.empty() ? fmt(opts.q) : opts.q_grid)
         << " n-grid=" << (opts.n_grid.empty() ? std::to_string(opts.n) : opts.n_grid)
         << " tol=" << fmt(tol) << " seed=" << opts.seed << " reversed=" << opts.reversed;
  CsvWriter csv(opts, config.str(),
                "model,q,n,epsilon,degeneracy,g,c,dl_norm,bound,margin,delta,"
                "pp_lambda_min,pp_lambda_max,pass");

  std::vector<DLReport> reports(points.size());
  std::vector<HamiltonianSpec> specs(points.size());
  for (size_t i = 0; i < points.size(); ++i)
    specs[i] = opts.file.empty() ? build_model(opts, points[i].first, points[i].second)
                                 : build_model(opts, opts.q, opts.n);

  std::atomic<bool> convergence_failure{false};
  parallel_for(static_cast<int>(points.size()), opts.threads, [&](int i) {
    DLOptions dl_opts;
    dl_opts.tol = tol;
    dl_opts.seed = opts.seed + 1000003ull * i;
    dl_opts.max_iter = opts.max_iter;
    dl_opts.reversed_layers = opts.reversed;
    try {
      reports[i] = dl_check(specs[i], dl_opts);
    } catch (const ConvergenceError&) {
      convergence_failure.store(true);
    }
  });
  if (convergence_failure.load())
    throw ConvergenceError("dl: solver did not converge on at least one grid point", 0, 0,
                           opts.max_iter);

  bool violated = false;
  for (size_t i = 0; i < points.size(); ++i) {
    const DLReport& r = reports[i];
    bool ok = r.pass && r.pp_pass;
    violated = violated || !ok;
    csv.row({label, opts.file.empty() ? fmt(points[i].first) : "",
             opts.file.empty() ? std::to_string(points[i].second) : std::to_string(specs[i].n),
             fmt(r.epsilon), std::to_string(r.degeneracy), std::to_string(r.g),
             std::to_string(r.c), fmt(r.dl_norm), fmt(r.bound), fmt(r.margin), fmt(r.delta),
             fmt(r.pp_lambda_min), fmt(r.pp_lambda_max), ok ? "1" : "0"});
  }
  return violated ? kExitBound : kExitPass;
}

int cmd_remark(const Options& opts) {
  const double tol = opts.tol > 0 ? opts.tol : 1e-8;
  std::vector<double> qs = q_points(opts, "0.3:0.9:0.2");
  std::vector<int> ns = n_points(opts, "4:10:2");

  std::vector<std::pair<double, int>> points;
  for (double q : qs)
    for (int n : ns) points.emplace_back(q, n);

  std::ostringstream config;
  config << "remark q-grid=" << (opts.q_grid.empty() ? "0.3:0.9:0.2" : opts.q_grid)
         << " n-grid=" << (opts.n_grid.empty() ? "4:10:2" : opts.n_grid) << " tol=" << fmt(tol)
         << " seed=" << opts.seed << " reversed=" << opts.reversed;
  CsvWriter csv(opts, config.str(), "q,n,epsilon,dl_norm,residual,bound,pass");

  std::vector<RemarkRow> rows(points.size());
  std::atomic<bool> convergence_failure{false};
  parallel_for(static_cast<int>(points.size()), opts.threads, [&](int i) {
    DLOptions dl_opts;
    dl_opts.seed = opts.seed + 1000003ull * i;
    dl_opts.max_iter = opts.max_iter;
    dl_opts.reversed_layers = opts.reversed;
    try {
      HamiltonianSpec spec = build_model(opts, points[i].first, points[i].second);
      DLReport dl = dl_check(spec, dl_opts);
      RemarkRow row;
      row.q = points[i].first;
      row.n = points[i].second;
      row.epsilon = dl.epsilon;
      row.dl_norm = dl.dl_norm;
      row.residual = std::abs((1.0 - dl.dl_norm) - dl.epsilon);
      row.bound = dl.bound;
      row.pass = row.residual <= tol;
      rows[i] = row;
    } catch (const ConvergenceError&) {
      convergence_failure.store(true);
    }
  });
  if (convergence_failure.load())
    throw ConvergenceError("remark: solver did not converge on at least one grid point", 0, 0,
                           opts.max_iter);

  bool violated = false;
  for (const auto& row : rows) {
    violated = violated || !row.pass;
    csv.row({fmt(row.q), std::to_string(row.n), fmt(row.epsilon), fmt(row.dl_norm),
             fmt(row.residual), fmt(row.bound), row.pass ? "1" : "0"});
  }
  return violated ? kExitBound : kExitPass;
}

int cmd_agsp(const Options& opts) {
  const double tol = opts.tol > 0 ? opts.tol : 1e-9;
  HamiltonianSpec spec = build_model(opts, opts.q, opts.n);
  GroundSpaceBasis gs = ground_space(spec);
  LayerSchedule schedule = greedy_color(interaction_graph(spec));
  std::vector<int> m_list = parse_int_grid(opts.m_grid);

  std::ostringstream config;
  config << "agsp model=" << (opts.file.empty() ? "xxz" : opts.file) << " q=" << fmt(opts.q)
         << " n=" << opts.n << " m-grid=" << opts.m_grid << " tol=" << fmt(tol)
         << " seed=" << opts.seed;
  CsvWriter csv(opts, config.str(), "m,delta,bound,measured_norm,margin");

  bool violated = false;
  for (const auto& row : agsp_norm_sweep(spec, schedule, gs, m_list, tol, opts.seed)) {
    violated = violated || !row.pass;
    csv.row({std::to_string(row.m), fmt(row.delta), fmt(row.bound), fmt(row.measured_norm),
             fmt(row.margin)});
  }
  return violated ? kExitBound : kExitPass;
}

int cmd_cone(const Options& opts) {
  const double tol = opts.tol > 0 ? opts.tol : 1e-10;
  HamiltonianSpec spec = build_model(opts, opts.q, opts.n);
  GroundSpaceBasis gs = ground_space(spec);
  LayerSchedule schedule = greedy_color(interaction_graph(spec));

  const int site_b = opts.site_b > 0 ? opts.site_b : spec.n - 1;
  DenseMatrix local = observable_matrix(opts.observable);
  TermSpec a = site_observable(opts.site_a, local);
  TermSpec b = site_observable(site_b, local);

  ConeOptions cone_opts;
  cone_opts.tol = tol;
  int m_max = opts.m_max;

  std::ostringstream config;
  config << "cone model=" << (opts.file.empty() ? "xxz" : opts.file) << " q=" << fmt(opts.q)
         << " n=" << opts.n << " a=" << opts.site_a << " b=" << site_b
         << " observable=" << opts.observable << " tol=" << fmt(tol);
  CsvWriter csv(opts, config.str(), "m,d,guaranteed,worst_residual,pass");

  ConeReport report = causal_cone_check(
      spec, schedule, gs, a, b,
      m_max > 0 ? m_max : max_m_for_distance(spec.positions[site_b - 1] -
                                                 spec.positions[opts.site_a - 1],
                                             schedule.layer_count, spec.r),
      cone_opts);
  for (const auto& row : report.rows)
    csv.row({std::to_string(row.m), std::to_string(report.distance), row.guaranteed ? "1" : "0",
             fmt(row.worst_residual), row.pass ? "1" : "0"});
  return report.pass ? kExitPass : kExitBound;
}

int cmd_corr(const Options& opts) {
  const double tol = opts.tol > 0 ? opts.tol : 1e-10;
  HamiltonianSpec spec = build_model(opts, opts.q, opts.n);
  GroundSpaceBasis gs = ground_space(spec);
  const bool is_xxz = opts.file.empty();

  StateVector psi;
  if (is_xxz && opts.q < 1.0) {
    psi = xxz_psi1(opts.q, opts.n);
  } else {
    psi = gs.basis.col(0);
  }

  std::vector<int> d_list;
  for (int d = 1; d <= spec.n - opts.site_a; ++d) d_list.push_back(d);

  std::ostringstream config;
  config << "corr model=" << (is_xxz ? "xxz" : opts.file) << " q=" << fmt(opts.q)
         << " n=" << opts.n << " a=" << opts.site_a << " observable=" << opts.observable
         << " tol=" << fmt(tol);
  CsvWriter csv(opts, config.str(), "d,value,closed_form,abs_err");

  TermSpec a = site_observable(opts.site_a, observable_matrix(opts.observable));
  CorrelationSeries series =
      correlation_series(spec, gs, psi, a, observable_matrix(opts.observable), d_list);

  bool violated = false;
  for (size_t i = 0; i < series.distances.size(); ++i) {
    std::string closed, err;
    if (is_xxz && opts.q < 1.0 && opts.observable == "num" && opts.site_a == 1) {
      double reference = xxz_correlator_closed_form(opts.q, opts.n, series.distances[i]);
      double abs_err = std::abs(series.values[i] - reference);
      closed = fmt(reference);
      err = fmt(abs_err);
      if (abs_err > tol) violated = true;
    }
    csv.row({std::to_string(series.distances[i]), fmt(series.values[i]), closed, err});
  }
  return violated ? kExitBound : kExitPass;
}

int cmd_sweep(const Options& opts) {
  std::vector<double> qs = q_points(opts, "0.90:0.99:0.01");
  std::ostringstream config;
  config << "sweep q-grid=" << (opts.q_grid.empty() ? "0.90:0.99:0.01" : opts.q_grid);
  CsvWriter csv(opts, config.str(), "q,epsilon,xi_fit,xi_lower,xi_upper,slope");

  SweepResult sweep = xi_scaling_sweep(qs);
  bool violated = sweep.slope < -0.55 || sweep.slope > -0.45;
  for (const auto& row : sweep.rows) {
    if (row.xi_lower > row.xi_fit + 1e-9 || row.xi_fit > row.xi_upper + 1e-9) violated = true;
    csv.row({fmt(row.q), fmt(row.epsilon), fmt(row.xi_fit), fmt(row.xi_lower), fmt(row.xi_upper),
             fmt(sweep.slope)});
  }
  return violated ? kExitBound : kExitPass;
}

int cmd_entropy(const Options& opts) {
  HamiltonianSpec spec = build_model(opts, opts.q, opts.n);
  StateVector psi;
  if (opts.file.empty() && opts.q < 1.0) {
    psi = xxz_psi1(opts.q, opts.n);
  } else {
    psi = ground_space(spec).basis.col(0);
  }

  std::ostringstream config;
  config << "entropy model=" << (opts.file.empty() ? "xxz" : opts.file) << " q=" << fmt(opts.q)
         << " n=" << opts.n << " cut=" << opts.cut;
  CsvWriter csv(opts, config.str(), "cut,entropy");

  std::vector<int> cuts;
  if (opts.cut > 0)
    cuts.push_back(opts.cut);
  else
    for (int cut = 1; cut < spec.n; ++cut) cuts.push_back(cut);
  for (int cut : cuts) csv.row({std::to_string(cut), fmt(half_chain_entropy(psi, spec.s, cut))});
  return kExitPass;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"numerical checks for frustration-free spin chains"};
  app.require_subcommand(1);

  Options opts;
  std::string command;

  auto add_common = [&](CLI::App* sub) {
    sub->add_option("--model", opts.model, "builtin model name (xxz)");
    sub->add_option("--file", opts.file, "JSON model file instead of a builtin");
    sub->add_option("--q", opts.q, "xxz parameter q in (0, 1]");
    sub->add_option("--n", opts.n, "chain length");
    sub->add_option("--q-grid", opts.q_grid, "grid start:stop:step for q");
    sub->add_option("--n-grid", opts.n_grid, "grid start:stop:step for n");
    sub->add_option("--tol", opts.tol, "check tolerance (command-specific default)");
    sub->add_option("--seed", opts.seed, "seed for the iterative solvers");
    sub->add_option("--threads", opts.threads, "worker threads for grid scans");
    sub->add_option("--out", opts.out, "output file (default stdout)");
    sub->add_option("--max-iter", opts.max_iter, "power-iteration cap");
    sub->add_flag("--force", opts.force, "disable the desk-scale guard (n <= 14 at s=2)");
    sub->callback([&, sub] { command = sub->get_name(); });
  };

  add_common(app.add_subcommand("validate", "check every spec invariant"));
  add_common(app.add_subcommand("dl", "detectability-lemma report"));
  CLI::App* remark = app.add_subcommand("remark", "scan 1-||P-G|| against epsilon");
  add_common(remark);
  remark->add_flag("--reversed", opts.reversed, "apply layers in reversed order");
  CLI::App* dl = app.get_subcommand("dl");
  dl->add_flag("--reversed", opts.reversed, "apply layers in reversed order");
  CLI::App* agsp = app.add_subcommand("agsp", "Chebyshev AGSP norm sweep");
  add_common(agsp);
  agsp->add_option("--m-grid", opts.m_grid, "polynomial degrees start:stop:step");
  CLI::App* cone = app.add_subcommand("cone", "causal-cone identity check");
  add_common(cone);
  cone->add_option("--a", opts.site_a, "site of observable A");
  cone->add_option("--b", opts.site_b, "site of observable B");
  cone->add_option("--m-max", opts.m_max, "largest m to require (default: admissible range)");
  cone->add_option("--observable", opts.observable, "single-site observable: num or z");
  CLI::App* corr = app.add_subcommand("corr", "degenerate correlator series");
  add_common(corr);
  corr->add_option("--a", opts.site_a, "site of observable A");
  corr->add_option("--observable", opts.observable, "single-site observable: num or z");
  add_common(app.add_subcommand("sweep", "correlation length vs gap scaling"));
  CLI::App* entropy = app.add_subcommand("entropy", "half-chain entanglement entropy");
  add_common(entropy);
  entropy->add_option("--cut", opts.cut, "cut position (default: every cut)");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    int code = app.exit(e);
    return code == 0 ? kExitPass : kExitIo;
  }

  try {
    if (command == "validate") return cmd_validate(opts);
    if (command == "dl") return cmd_dl(opts);
    if (command == "remark") return cmd_remark(opts);
    if (command == "agsp") return cmd_agsp(opts);
    if (command == "cone") return cmd_cone(opts);
    if (command == "corr") return cmd_corr(opts);
    if (command == "sweep") return cmd_sweep(opts);
    if (command == "entropy") return cmd_entropy(opts);
    std::cerr << "unknown command\n";
    return kExitIo;
  } catch (const ParseError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitIo;
  } catch (const ConvergenceError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitNoConvergence;
  } catch (const Error& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitValidation;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitValidation;
  }
}
