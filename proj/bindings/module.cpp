#include <pybind11/complex.h>
#include <pybind11/eigen.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include "ffcorr/agsp.hpp"
#include "ffcorr/correlation.hpp"
#include "ffcorr/detectability.hpp"
#include "ffcorr/linalg.hpp"
#include "ffcorr/model.hpp"
#include "ffcorr/model_io.hpp"
#include "ffcorr/spectral.hpp"
#include "ffcorr/version.hpp"

namespace py = pybind11;
using namespace ffcorr;

namespace {

DenseMatrix observable_by_name(const std::string& name) {
  if (name == "num") return number_operator();
  if (name == "z") return pauli_z();
  throw DomainError("unknown observable (expected num or z): " + name);
}

}  // namespace

PYBIND11_MODULE(_core, m) {
  m.doc() = "frustration-free spin-chain checks: detectability lemma, Chebyshev "
            "approximate ground-space projector, correlators and scaling";
  m.attr("__version__") = kVersion;
  m.attr("INFINITE_CHAIN") = kInfiniteChain;

  py::register_exception<ParseError>(m, "ModelParseError", PyExc_ValueError);
  py::register_exception<DomainError>(m, "DomainError", PyExc_ValueError);
  py::register_exception<NotFrustrationFreeError>(m, "NotFrustrationFreeError",
                                                  PyExc_RuntimeError);
  py::register_exception<ConvergenceError>(m, "SolverConvergenceError", PyExc_RuntimeError);

  py::class_<HamiltonianSpec>(m, "HamiltonianSpec")
      .def_readonly("n", &HamiltonianSpec::n)
      .def_readonly("local_dim", &HamiltonianSpec::s)
      .def_readonly("range", &HamiltonianSpec::r)
      .def_readonly("positions", &HamiltonianSpec::positions)
      .def_property_readonly("term_count",
                             [](const HamiltonianSpec& s) { return s.terms.size(); })
      .def("term_sites",
           [](const HamiltonianSpec& s, size_t t) { return s.terms.at(t).sites; })
      .def("term_matrix",
           [](const HamiltonianSpec& s, size_t t) { return s.terms.at(t).matrix; })
      .def("to_json", &spec_to_json)
      .def("save", &save_spec_file);

  py::class_<GroundSpaceBasis>(m, "GroundSpaceBasis")
      .def_readonly("degeneracy", &GroundSpaceBasis::degeneracy)
      .def_readonly("gap", &GroundSpaceBasis::gap)
      .def_readonly("zero_tol", &GroundSpaceBasis::zero_tol)
      .def_readonly("basis", &GroundSpaceBasis::basis);

  py::class_<InteractionGraph>(m, "InteractionGraph")
      .def_readonly("g", &InteractionGraph::g)
      .def_readonly("edges", &InteractionGraph::edges);

  py::class_<LayerSchedule>(m, "LayerSchedule")
      .def_readonly("layer_count", &LayerSchedule::layer_count)
      .def_readonly("colors", &LayerSchedule::color);

  py::class_<DLReport>(m, "DLReport")
      .def_readonly("epsilon", &DLReport::epsilon)
      .def_readonly("degeneracy", &DLReport::degeneracy)
      .def_readonly("g", &DLReport::g)
      .def_readonly("c", &DLReport::c)
      .def_readonly("dl_norm", &DLReport::dl_norm)
      .def_readonly("bound", &DLReport::bound)
      .def_readonly("margin", &DLReport::margin)
      .def_readonly("passed", &DLReport::pass)
      .def_readonly("delta", &DLReport::delta)
      .def_readonly("pp_lambda_min", &DLReport::pp_lambda_min)
      .def_readonly("pp_lambda_max", &DLReport::pp_lambda_max)
      .def_readonly("pp_passed", &DLReport::pp_pass);

  py::class_<RemarkRow>(m, "RemarkRow")
      .def_readonly("q", &RemarkRow::q)
      .def_readonly("n", &RemarkRow::n)
      .def_readonly("epsilon", &RemarkRow::epsilon)
      .def_readonly("dl_norm", &RemarkRow::dl_norm)
      .def_readonly("residual", &RemarkRow::residual)
      .def_readonly("bound", &RemarkRow::bound)
      .def_readonly("passed", &RemarkRow::pass);

  py::class_<AgspRow>(m, "AgspRow")
      .def_readonly("m", &AgspRow::m)
      .def_readonly("delta", &AgspRow::delta)
      .def_readonly("bound", &AgspRow::bound)
      .def_readonly("measured_norm", &AgspRow::measured_norm)
      .def_readonly("margin", &AgspRow::margin)
      .def_readonly("passed", &AgspRow::pass);

  py::class_<ConeRow>(m, "ConeRow")
      .def_readonly("m", &ConeRow::m)
      .def_readonly("guaranteed", &ConeRow::guaranteed)
      .def_readonly("worst_residual", &ConeRow::worst_residual)
      .def_readonly("passed", &ConeRow::pass);

  py::class_<ConeReport>(m, "ConeReport")
      .def_readonly("distance", &ConeReport::distance)
      .def_readonly("admissible_max_m", &ConeReport::admissible_max_m)
      .def_readonly("rows", &ConeReport::rows)
      .def_readonly("first_failing_m", &ConeReport::first_failing_m)
      .def_readonly("passed", &ConeReport::pass);

  py::class_<FitResult>(m, "FitResult")
      .def_readonly("xi", &FitResult::xi)
      .def_readonly("amplitude", &FitResult::amplitude)
      .def_readonly("r_squared", &FitResult::r_squared)
      .def_readonly("points_used", &FitResult::points_used);

  py::class_<SweepRow>(m, "SweepRow")
      .def_readonly("q", &SweepRow::q)
      .def_readonly("epsilon", &SweepRow::epsilon)
      .def_readonly("xi_fit", &SweepRow::xi_fit)
      .def_readonly("xi_lower", &SweepRow::xi_lower)
      .def_readonly("xi_upper", &SweepRow::xi_upper);

  py::class_<SweepResult>(m, "SweepResult")
      .def_readonly("rows", &SweepResult::rows)
      .def_readonly("slope", &SweepResult::slope);

  // model construction and closed forms
  m.def("xxz_spec", &xxz_spec, py::arg("q"), py::arg("n"));
  m.def("load_spec", &load_spec_file, py::arg("path"));
  m.def("validate_spec",
        [](const HamiltonianSpec& spec, double tol) {
          std::vector<std::pair<int, std::string>> out;
          for (const auto& v : validate_spec(spec, tol).violations)
            out.emplace_back(v.term_index, v.message);
          return out;
        },
        py::arg("spec"), py::arg("tol") = 1e-9);
  m.def("xxz_gap_closed_form", &xxz_gap_closed_form, py::arg("q"), py::arg("n"));
  m.def("xxz_psi1", &xxz_psi1, py::arg("q"), py::arg("n"));
  m.def("xxz_correlator_closed_form", &xxz_correlator_closed_form, py::arg("q"), py::arg("n"),
        py::arg("d"));
  m.def("xxz_xi_lower_bound", &xxz_xi_lower_bound, py::arg("q"));
  m.def("interaction_graph", &interaction_graph, py::arg("spec"),
        py::arg("commutator_tol") = 1e-10);
  m.def("greedy_color", &greedy_color, py::arg("graph"));

  // operator application and spectra
  m.def("apply_hamiltonian", &apply_hamiltonian, py::arg("spec"), py::arg("v"));
  m.def("apply_dl_operator",
        [](const HamiltonianSpec& spec, const StateVector& v) {
          LayerSchedule schedule = greedy_color(interaction_graph(spec));
          return build_P(spec, schedule).apply(v);
        },
        py::arg("spec"), py::arg("v"));
  m.def("ground_space",
        [](const HamiltonianSpec& spec, double zero_tol) {
          return ground_space(spec, zero_tol);
        },
        py::arg("spec"), py::arg("zero_tol") = -1.0);

  // detectability lemma
  m.def("dl_check",
        [](const HamiltonianSpec& spec, double tol, uint64_t seed, bool reversed) {
          DLOptions opts;
          if (tol > 0) opts.tol = tol;
          opts.seed = seed;
          opts.reversed_layers = reversed;
          return dl_check(spec, opts);
        },
        py::arg("spec"), py::arg("tol") = -1.0, py::arg("seed") = 7,
        py::arg("reversed") = false);
  m.def("remark_scan",
        [](const std::vector<double>& qs, const std::vector<int>& ns, double tol) {
          return remark_scan(qs, ns, tol);
        },
        py::arg("q_grid"), py::arg("n_grid"), py::arg("tol") = 1e-8);

  // Chebyshev AGSP
  m.def("chebyshev_T", &chebyshev_T, py::arg("m"), py::arg("x"));
  m.def("qm_eval",
        [](int m, double delta, double x) {
          return qm_eval(ChebyshevParams::from_delta(m, delta), x);
        },
        py::arg("m"), py::arg("delta"), py::arg("x"));
  m.def("agsp_apply",
        [](const HamiltonianSpec& spec, int m, const StateVector& v) {
          LayerSchedule schedule = greedy_color(interaction_graph(spec));
          return agsp_apply(spec, schedule, m, v);
        },
        py::arg("spec"), py::arg("m"), py::arg("v"));
  m.def("agsp_norm_sweep",
        [](const HamiltonianSpec& spec, const std::vector<int>& m_list, double tol,
           uint64_t seed) {
          GroundSpaceBasis gs = ground_space(spec);
          LayerSchedule schedule = greedy_color(interaction_graph(spec));
          return agsp_norm_sweep(spec, schedule, gs, m_list, tol, seed);
        },
        py::arg("spec"), py::arg("m_list"), py::arg("tol") = 1e-9, py::arg("seed") = 7);
  m.def("max_m_for_distance", &max_m_for_distance, py::arg("d"), py::arg("c"), py::arg("r"));
  m.def("causal_cone_check",
        [](const HamiltonianSpec& spec, int a_site, int b_site, int m_max,
           const std::string& observable, double tol) {
          GroundSpaceBasis gs = ground_space(spec);
          LayerSchedule schedule = greedy_color(interaction_graph(spec));
          DenseMatrix local = observable_by_name(observable);
          ConeOptions opts;
          opts.tol = tol;
          return causal_cone_check(spec, schedule, gs, site_observable(a_site, local),
                                   site_observable(b_site, local), m_max, opts);
        },
        py::arg("spec"), py::arg("a_site"), py::arg("b_site"), py::arg("m_max"),
        py::arg("observable") = "num", py::arg("tol") = 1e-10);

  // correlators and scaling
  m.def("correlator_deg",
        [](const HamiltonianSpec& spec, const StateVector& psi, int a_site, int b_site,
           const std::string& observable) {
          GroundSpaceBasis gs = ground_space(spec);
          DenseMatrix local = observable_by_name(observable);
          return correlator_deg(spec, gs, psi, site_observable(a_site, local),
                                site_observable(b_site, local));
        },
        py::arg("spec"), py::arg("psi"), py::arg("a_site"), py::arg("b_site"),
        py::arg("observable") = "num");
  m.def("correlation_series",
        [](const HamiltonianSpec& spec, const StateVector& psi, int a_site,
           const std::vector<int>& d_list, const std::string& observable) {
          GroundSpaceBasis gs = ground_space(spec);
          DenseMatrix local = observable_by_name(observable);
          CorrelationSeries series = correlation_series(
              spec, gs, psi, site_observable(a_site, local), local, d_list);
          return std::make_pair(series.distances, series.values);
        },
        py::arg("spec"), py::arg("psi"), py::arg("a_site"), py::arg("d_list"),
        py::arg("observable") = "num");
  m.def("fit_xi",
        [](const std::vector<int>& distances, const std::vector<double>& values) {
          CorrelationSeries series;
          series.distances = distances;
          series.values = values;
          return fit_xi(series);
        },
        py::arg("distances"), py::arg("values"));
  m.def("xi_upper_formula", &xi_upper_formula, py::arg("c"), py::arg("r"), py::arg("g"),
        py::arg("epsilon"));
  m.def("xi_scaling_sweep",
        [](const std::vector<double>& qs, int d_max) { return xi_scaling_sweep(qs, d_max); },
        py::arg("q_grid"), py::arg("d_max") = 40);
  m.def("half_chain_entropy", &half_chain_entropy, py::arg("psi"), py::arg("local_dim"),
        py::arg("cut"));
}
