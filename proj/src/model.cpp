#include "ffcorr/model.hpp"

#include <Eigen/Eigenvalues>
#include <algorithm>
#include <cmath>
#include <set>
#include <sstream>

namespace ffcorr {

namespace {

constexpr double kPi = 3.14159265358979323846;

int support_diameter(const std::vector<int>& sites, const std::vector<int>& positions) {
  int lo = positions[sites.front() - 1];
  int hi = lo;
  for (int site : sites) {
    lo = std::min(lo, positions[site - 1]);
    hi = std::max(hi, positions[site - 1]);
  }
  return hi - lo;
}

}  // namespace

std::string ValidationReport::to_string() const {
  if (valid()) return "valid";
  std::ostringstream out;
  for (const auto& v : violations) {
    if (v.term_index >= 0)
      out << "term " << v.term_index + 1 << ": ";
    out << v.message << "\n";
  }
  return out.str();
}

Eigen::Index hilbert_dim(int s, int n) {
  if (s < 2) throw DomainError("local dimension must be >= 2");
  if (n < 1) throw DomainError("site count must be >= 1");
  Eigen::Index dim = 1;
  for (int i = 0; i < n; ++i) {
    if (dim > (Eigen::Index{1} << 62) / s)
      throw DomainError("state space dimension overflows: s^n too large");
    dim *= s;
  }
  return dim;
}

ValidationReport validate_spec(const HamiltonianSpec& spec, double tol) {
  ValidationReport report;
  auto flag = [&report](int term, const std::string& msg) {
    report.violations.push_back({term, msg});
  };

  if (spec.n < 1) flag(-1, "site count must be >= 1");
  if (spec.s < 2) flag(-1, "local dimension must be >= 2");
  if (spec.r < 1) flag(-1, "interaction range must be >= 1");
  if (static_cast<int>(spec.positions.size()) != spec.n)
    flag(-1, "positions must list one coordinate per site");
  if (!report.valid()) return report;

  std::set<std::vector<int>> seen_supports;
  for (size_t t = 0; t < spec.terms.size(); ++t) {
    const TermSpec& term = spec.terms[t];
    const int ti = static_cast<int>(t);
    if (term.sites.empty()) {
      flag(ti, "support is empty");
      continue;
    }
    bool sites_ok = true;
    std::set<int> distinct(term.sites.begin(), term.sites.end());
    if (distinct.size() != term.sites.size()) {
      flag(ti, "support lists a site twice");
      sites_ok = false;
    }
    for (int site : term.sites) {
      if (site < 1 || site > spec.n) {
        flag(ti, "site index out of range");
        sites_ok = false;
        break;
      }
    }
    if (!sites_ok) continue;

    if (support_diameter(term.sites, spec.positions) > spec.r)
      flag(ti, "support diameter exceeds the interaction range");

    std::vector<int> sorted(term.sites.begin(), term.sites.end());
    std::sort(sorted.begin(), sorted.end());
    if (!seen_supports.insert(sorted).second)
      flag(ti, "duplicate support: another term acts on the same sites");

    Eigen::Index want = hilbert_dim(spec.s, static_cast<int>(term.sites.size()));
    if (term.matrix.rows() != want || term.matrix.cols() != want) {
      flag(ti, "matrix dimension does not match s^|support|");
      continue;
    }

    double scale = std::max(1.0, term.matrix.norm());
    if ((term.matrix - term.matrix.adjoint()).norm() > tol * scale) {
      flag(ti, "matrix is not Hermitian");
      continue;
    }

    Eigen::SelfAdjointEigenSolver<DenseMatrix> eig(term.matrix, Eigen::EigenvaluesOnly);
    double lo = eig.eigenvalues().minCoeff();
    double hi = eig.eigenvalues().maxCoeff();
    if (std::abs(lo) > tol) {
      std::ostringstream msg;
      msg << "smallest eigenvalue is " << lo << ", expected 0";
      flag(ti, msg.str());
    }
    if (hi > 1.0 + tol) {
      std::ostringstream msg;
      msg << "operator norm " << hi << " exceeds 1";
      flag(ti, msg.str());
    }
    if (term.projector && (term.matrix * term.matrix - term.matrix).norm() > tol * scale)
      flag(ti, "declared a projector but H^2 != H");
  }
  return report;
}

std::pair<TermSpec, double> projectorize_term(const TermSpec& term, int local_dim,
                                              double tol) {
  const DenseMatrix& h = term.matrix;
  double scale = std::max(1.0, h.norm());
  if ((h - h.adjoint()).norm() > tol * scale)
    throw PreconditionError("projectorize_term: matrix is not Hermitian");

  if ((h * h - h).norm() <= tol * scale) {
    TermSpec out = term;
    out.projector = true;
    return {out, 1.0};
  }

  Eigen::SelfAdjointEigenSolver<DenseMatrix> eig(h);
  if (eig.eigenvalues().minCoeff() < -tol)
    throw PreconditionError("projectorize_term: matrix has a negative eigenvalue");

  DenseMatrix pi = DenseMatrix::Zero(h.rows(), h.cols());
  double a = 0.0;
  for (Eigen::Index i = 0; i < eig.eigenvalues().size(); ++i) {
    double lambda = eig.eigenvalues()(i);
    if (lambda > tol) {
      pi += eig.eigenvectors().col(i) * eig.eigenvectors().col(i).adjoint();
      a = (a == 0.0) ? lambda : std::min(a, lambda);
    }
  }
  (void)local_dim;
  TermSpec out = term;
  out.matrix = std::move(pi);
  out.projector = true;
  return {out, a == 0.0 ? 1.0 : a};
}

std::pair<HamiltonianSpec, double> projectorize_spec(const HamiltonianSpec& spec, double tol) {
  HamiltonianSpec out = spec;
  double a_min = 1.0;
  for (auto& term : out.terms) {
    auto [projected, a] = projectorize_term(term, spec.s, tol);
    term = std::move(projected);
    a_min = std::min(a_min, a);
  }
  return {out, a_min};
}

DenseMatrix embed_on_sites(const TermSpec& term, const std::vector<int>& super_sites, int s) {
  const int k = static_cast<int>(term.sites.size());
  const int kk = static_cast<int>(super_sites.size());
  // local digit position of each term site within the superset ordering
  std::vector<int> place(k, -1);
  for (int t = 0; t < k; ++t) {
    for (int u = 0; u < kk; ++u)
      if (super_sites[u] == term.sites[t]) place[t] = u;
    if (place[t] < 0)
      throw DimensionError("embed_on_sites: superset does not contain a term site");
  }

  const Eigen::Index local = hilbert_dim(s, k);
  const Eigen::Index joint = hilbert_dim(s, kk);
  std::vector<Eigen::Index> stride(kk);
  {
    Eigen::Index acc = 1;
    for (int u = kk - 1; u >= 0; --u) {
      stride[u] = acc;
      acc *= s;
    }
  }
  // offset of each local basis state inside the joint index
  std::vector<Eigen::Index> offset(local, 0);
  for (Eigen::Index l = 0; l < local; ++l) {
    Eigen::Index rem = l;
    for (int t = k - 1; t >= 0; --t) {
      offset[l] += (rem % s) * stride[place[t]];
      rem /= s;
    }
  }

  DenseMatrix out = DenseMatrix::Zero(joint, joint);
  // enumerate joint indices with all term-site digits zero
  std::vector<int> rest_places;
  for (int u = 0; u < kk; ++u)
    if (std::find(place.begin(), place.end(), u) == place.end()) rest_places.push_back(u);
  const Eigen::Index rest_count = hilbert_dim(s, static_cast<int>(rest_places.size()));
  for (Eigen::Index rc = 0; rc < rest_count; ++rc) {
    Eigen::Index base = 0;
    Eigen::Index rem = rc;
    for (int t = static_cast<int>(rest_places.size()) - 1; t >= 0; --t) {
      base += (rem % s) * stride[rest_places[t]];
      rem /= s;
    }
    for (Eigen::Index row = 0; row < local; ++row)
      for (Eigen::Index col = 0; col < local; ++col)
        out(base + offset[row], base + offset[col]) = term.matrix(row, col);
  }
  return out;
}

InteractionGraph interaction_graph(const HamiltonianSpec& spec, double commutator_tol) {
  InteractionGraph graph;
  graph.term_count = static_cast<int>(spec.terms.size());
  graph.adjacency.resize(graph.term_count);

  for (int i = 0; i < graph.term_count; ++i) {
    for (int j = i + 1; j < graph.term_count; ++j) {
      const auto& a = spec.terms[i].sites;
      const auto& b = spec.terms[j].sites;
      bool overlap = false;
      for (int site : a)
        if (std::find(b.begin(), b.end(), site) != b.end()) overlap = true;
      if (!overlap) continue;  // disjoint supports commute by construction

      std::vector<int> joint(a.begin(), a.end());
      for (int site : b)
        if (std::find(joint.begin(), joint.end(), site) == joint.end()) joint.push_back(site);
      std::sort(joint.begin(), joint.end());

      DenseMatrix ma = embed_on_sites(spec.terms[i], joint, spec.s);
      DenseMatrix mb = embed_on_sites(spec.terms[j], joint, spec.s);
      if ((ma * mb - mb * ma).norm() > commutator_tol) {
        graph.edges.emplace_back(i, j);
        graph.adjacency[i].push_back(j);
        graph.adjacency[j].push_back(i);
      }
    }
  }
  for (const auto& neighbors : graph.adjacency)
    graph.g = std::max(graph.g, static_cast<int>(neighbors.size()));
  return graph;
}

HamiltonianSpec xxz_spec(double q, int n) {
  if (!(q > 0.0) || q > 1.0)
    throw DomainError("xxz_spec: q must satisfy 0 < q <= 1");
  if (n < 2) throw DomainError("xxz_spec: n must be >= 2");

  Eigen::VectorXcd phi = Eigen::VectorXcd::Zero(4);
  phi(2) = q;    // |10>
  phi(1) = -1.0; // |01>
  phi /= std::sqrt(q * q + 1.0);

  HamiltonianSpec spec;
  spec.n = n;
  spec.s = 2;
  spec.r = 2;
  spec.positions.resize(n);
  for (int i = 0; i < n; ++i) spec.positions[i] = i + 1;
  for (int i = 1; i < n; ++i) {
    TermSpec term;
    term.sites = {i, i + 1};
    term.matrix = phi * phi.adjoint();
    term.projector = true;
    spec.terms.push_back(std::move(term));
  }
  return spec;
}

double xxz_gap_closed_form(double q, int n) {
  if (!(q > 0.0) || q > 1.0)
    throw DomainError("xxz_gap_closed_form: q must satisfy 0 < q <= 1");
  double cosine = 1.0;
  if (n != kInfiniteChain) {
    if (n < 2) throw DomainError("xxz_gap_closed_form: n must be >= 2");
    cosine = std::cos(kPi / n);
  }
  return 1.0 - 2.0 / (q + 1.0 / q) * cosine;
}

Eigen::VectorXcd xxz_psi1(double q, int n) {
  if (!(q > 0.0) || q >= 1.0)
    throw DomainError("xxz_psi1: q must satisfy 0 < q < 1");
  if (n < 2) throw DomainError("xxz_psi1: n must be >= 2");
  const Eigen::Index dim = hilbert_dim(2, n);
  Eigen::VectorXcd psi = Eigen::VectorXcd::Zero(dim);
  const double norm = std::sqrt((1.0 - q * q) / (1.0 - std::pow(q, 2 * n)));
  for (int j = 1; j <= n; ++j) {
    // single 1 at site j; site 1 is the most significant bit
    const Eigen::Index index = Eigen::Index{1} << (n - j);
    psi(index) = norm * std::pow(q, j - 1);
  }
  return psi;
}

double xxz_correlator_closed_form(double q, int n, int d) {
  if (!(q > 0.0) || q >= 1.0)
    throw DomainError("xxz_correlator_closed_form: q must satisfy 0 < q < 1");
  if (d < 1) throw DomainError("xxz_correlator_closed_form: d must be >= 1");
  double prefactor;
  if (n == kInfiniteChain) {
    prefactor = 1.0 - q * q;
  } else {
    if (d > n - 1) throw DomainError("xxz_correlator_closed_form: d must be <= n-1");
    prefactor = (1.0 - q * q) / (1.0 - std::pow(q, 2 * n));
  }
  return prefactor * prefactor * std::pow(q, 2 * d);
}

double xxz_xi_lower_bound(double q) {
  if (!(q > 0.0) || q >= 1.0)
    throw DomainError("xxz_xi_lower_bound: q must satisfy 0 < q < 1 (unbounded at q = 1)");
  return 1.0 / (-2.0 * std::log(q));
}

DenseMatrix pauli_x() {
  DenseMatrix m(2, 2);
  m << 0, 1, 1, 0;
  return m;
}

DenseMatrix pauli_y() {
  DenseMatrix m(2, 2);
  m << Complex(0, 0), Complex(0, -1), Complex(0, 1), Complex(0, 0);
  return m;
}

DenseMatrix pauli_z() {
  DenseMatrix m(2, 2);
  m << 1, 0, 0, -1;
  return m;
}

DenseMatrix number_operator() {
  DenseMatrix m(2, 2);
  m << 0, 0, 0, 1;
  return m;
}

TermSpec site_observable(int site, const DenseMatrix& matrix) {
  TermSpec term;
  term.sites = {site};
  term.matrix = matrix;
  return term;
}

}  // namespace ffcorr
