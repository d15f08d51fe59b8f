#include "ffcorr/model_io.hpp"

#include <fstream>
#include <sstream>

#include <json.hpp>

namespace ffcorr {

namespace {

using nlohmann::json;

ParseError term_error(size_t index, const std::string& what) {
  std::ostringstream msg;
  msg << "term " << index + 1 << ": " << what;
  return ParseError(msg.str());
}

}  // namespace

HamiltonianSpec load_spec(std::istream& in) {
  json root;
  try {
    root = json::parse(in);
  } catch (const json::exception& e) {
    throw ParseError(std::string("invalid JSON: ") + e.what());
  }

  HamiltonianSpec spec;
  try {
    spec.n = root.at("n").get<int>();
    spec.s = root.at("local_dim").get<int>();
    spec.r = root.at("range").get<int>();
    spec.positions = root.at("positions").get<std::vector<int>>();
  } catch (const json::exception& e) {
    throw ParseError(std::string("bad header field: ") + e.what());
  }

  if (!root.contains("terms") || !root["terms"].is_array())
    throw ParseError("missing terms array");

  for (size_t t = 0; t < root["terms"].size(); ++t) {
    const json& jt = root["terms"][t];
    TermSpec term;
    try {
      term.sites = jt.at("sites").get<std::vector<int>>();
    } catch (const json::exception& e) {
      throw term_error(t, std::string("bad sites: ") + e.what());
    }
    if (term.sites.empty()) throw term_error(t, "empty sites list");

    Eigen::Index dim;
    try {
      dim = hilbert_dim(spec.s, static_cast<int>(term.sites.size()));
    } catch (const DomainError& e) {
      throw term_error(t, e.what());
    }
    const json& jm = jt.contains("matrix") ? jt["matrix"] : json();
    if (!jm.is_array() || jm.size() != static_cast<size_t>(dim * dim))
      throw term_error(t, "matrix must be a row-major list of s^|sites| squared [re,im] pairs");

    term.matrix.resize(dim, dim);
    for (Eigen::Index row = 0; row < dim; ++row) {
      for (Eigen::Index col = 0; col < dim; ++col) {
        const json& entry = jm[static_cast<size_t>(row * dim + col)];
        if (!entry.is_array() || entry.size() != 2 || !entry[0].is_number() ||
            !entry[1].is_number())
          throw term_error(t, "matrix entries must be [re, im] pairs");
        term.matrix(row, col) = Complex(entry[0].get<double>(), entry[1].get<double>());
      }
    }
    term.projector = jt.value("projector", false);
    spec.terms.push_back(std::move(term));
  }
  return spec;
}

HamiltonianSpec load_spec_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ParseError("cannot open model file: " + path);
  return load_spec(in);
}

std::string spec_to_json(const HamiltonianSpec& spec) {
  json root;
  root["n"] = spec.n;
  root["local_dim"] = spec.s;
  root["range"] = spec.r;
  root["positions"] = spec.positions;
  root["terms"] = json::array();
  for (const auto& term : spec.terms) {
    json jt;
    jt["sites"] = term.sites;
    json jm = json::array();
    for (Eigen::Index row = 0; row < term.matrix.rows(); ++row)
      for (Eigen::Index col = 0; col < term.matrix.cols(); ++col)
        jm.push_back({term.matrix(row, col).real(), term.matrix(row, col).imag()});
    jt["matrix"] = std::move(jm);
    if (term.projector) jt["projector"] = true;
    root["terms"].push_back(std::move(jt));
  }
  return root.dump(2);
}

void save_spec_file(const HamiltonianSpec& spec, const std::string& path) {
  std::ofstream out(path);
  if (!out) throw ParseError("cannot open output file: " + path);
  out << spec_to_json(spec) << "\n";
}

}  // namespace ffcorr
