#include "ffcorr/linalg.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <cstdlib>
#include <random>
#include <utility>

namespace ffcorr {

namespace {

// Embed of a local term: gathers the support sub-vector for every
// configuration of the remaining sites, applies the small dense matrix and
// scatters back. Cost O(s^n * s^|support|).
class EmbedNode final : public MapNode {
 public:
  EmbedNode(const TermSpec& term, int local_dim, int n)
      : s_(local_dim), dim_(hilbert_dim(local_dim, n)) {
    const int k = static_cast<int>(term.sites.size());
    const Eigen::Index local = hilbert_dim(local_dim, k);
    if (term.matrix.rows() != local || term.matrix.cols() != local)
      throw DimensionError("embed: matrix dimension does not match s^|support|");
    for (int site : term.sites)
      if (site < 1 || site > n) throw DimensionError("embed: site index out of range");

    matrix_ = term.matrix;
    adjoint_ = term.matrix.adjoint();

    std::vector<Eigen::Index> stride(n);
    Eigen::Index acc = 1;
    for (int site = n; site >= 1; --site) {
      stride[site - 1] = acc;
      acc *= s_;
    }
    // offset of each local basis state; first listed site = most significant
    offsets_.resize(local);
    for (Eigen::Index l = 0; l < local; ++l) {
      Eigen::Index rem = l, off = 0;
      for (int t = k - 1; t >= 0; --t) {
        off += (rem % s_) * stride[term.sites[t] - 1];
        rem /= s_;
      }
      offsets_[l] = off;
    }
    std::vector<bool> on_support(n, false);
    for (int site : term.sites) on_support[site - 1] = true;
    for (int site = 1; site <= n; ++site)
      if (!on_support[site - 1]) rest_strides_.push_back(stride[site - 1]);
  }

  Eigen::Index dim() const override { return dim_; }

  void apply(const StateVector& in, StateVector& out) const override {
    run(matrix_, in, out);
  }
  void apply_adjoint(const StateVector& in, StateVector& out) const override {
    run(adjoint_, in, out);
  }

 private:
  void run(const DenseMatrix& mat, const StateVector& in, StateVector& out) const {
    if (in.size() != dim_) throw DimensionError("embed: vector length is not s^n");
    out.resize(dim_);
    const Eigen::Index local = static_cast<Eigen::Index>(offsets_.size());
    Eigen::VectorXcd gathered(local), image(local);
    std::vector<int> digits(rest_strides_.size(), 0);
    Eigen::Index base = 0;
    Eigen::Index rest_count = 1;
    for (size_t t = 0; t < rest_strides_.size(); ++t) rest_count *= s_;
    for (Eigen::Index rc = 0; rc < rest_count; ++rc) {
      for (Eigen::Index l = 0; l < local; ++l) gathered(l) = in(base + offsets_[l]);
      image.noalias() = mat * gathered;
      for (Eigen::Index l = 0; l < local; ++l) out(base + offsets_[l]) = image(l);
      for (int t = static_cast<int>(rest_strides_.size()) - 1; t >= 0; --t) {
        base += rest_strides_[t];
        if (++digits[t] < s_) break;
        digits[t] = 0;
        base -= s_ * rest_strides_[t];
      }
    }
  }

  int s_;
  Eigen::Index dim_;
  DenseMatrix matrix_, adjoint_;
  std::vector<Eigen::Index> offsets_;
  std::vector<Eigen::Index> rest_strides_;
};

class IdentityNode final : public MapNode {
 public:
  explicit IdentityNode(Eigen::Index dim) : dim_(dim) {}
  Eigen::Index dim() const override { return dim_; }
  void apply(const StateVector& in, StateVector& out) const override { out = in; }
  void apply_adjoint(const StateVector& in, StateVector& out) const override { out = in; }

 private:
  Eigen::Index dim_;
};

class SumNode final : public MapNode {
 public:
  explicit SumNode(std::vector<LinearMap> parts) : parts_(std::move(parts)) {
    if (parts_.empty()) throw DimensionError("sum: no parts");
    for (const auto& p : parts_)
      if (p.dim() != parts_.front().dim()) throw DimensionError("sum: dimension mismatch");
  }
  Eigen::Index dim() const override { return parts_.front().dim(); }
  void apply(const StateVector& in, StateVector& out) const override {
    out = parts_.front().apply(in);
    for (size_t i = 1; i < parts_.size(); ++i) out += parts_[i].apply(in);
  }
  void apply_adjoint(const StateVector& in, StateVector& out) const override {
    out = parts_.front().apply_adjoint(in);
    for (size_t i = 1; i < parts_.size(); ++i) out += parts_[i].apply_adjoint(in);
  }

 private:
  std::vector<LinearMap> parts_;
};

class ProductNode final : public MapNode {
 public:
  explicit ProductNode(std::vector<LinearMap> factors) : factors_(std::move(factors)) {
    if (factors_.empty()) throw DimensionError("product: no factors");
    for (const auto& f : factors_)
      if (f.dim() != factors_.front().dim()) throw DimensionError("product: dimension mismatch");
  }
  Eigen::Index dim() const override { return factors_.front().dim(); }
  // operator order: factors_[0] * ... * factors_[last]; rightmost acts first
  void apply(const StateVector& in, StateVector& out) const override {
    out = factors_.back().apply(in);
    for (int i = static_cast<int>(factors_.size()) - 2; i >= 0; --i)
      out = factors_[i].apply(out);
  }
  void apply_adjoint(const StateVector& in, StateVector& out) const override {
    out = factors_.front().apply_adjoint(in);
    for (size_t i = 1; i < factors_.size(); ++i) out = factors_[i].apply_adjoint(out);
  }

 private:
  std::vector<LinearMap> factors_;
};

class AffineNode final : public MapNode {
 public:
  AffineNode(Complex alpha, Complex beta, LinearMap m)
      : alpha_(alpha), beta_(beta), map_(std::move(m)) {}
  Eigen::Index dim() const override { return map_.dim(); }
  void apply(const StateVector& in, StateVector& out) const override {
    out = map_.apply(in);
    out = alpha_ * in + beta_ * out;
  }
  void apply_adjoint(const StateVector& in, StateVector& out) const override {
    out = map_.apply_adjoint(in);
    out = std::conj(alpha_) * in + std::conj(beta_) * out;
  }

 private:
  Complex alpha_, beta_;
  LinearMap map_;
};

class AdjointNode final : public MapNode {
 public:
  explicit AdjointNode(LinearMap m) : map_(std::move(m)) {}
  Eigen::Index dim() const override { return map_.dim(); }
  void apply(const StateVector& in, StateVector& out) const override {
    out = map_.apply_adjoint(in);
  }
  void apply_adjoint(const StateVector& in, StateVector& out) const override {
    out = map_.apply(in);
  }

 private:
  LinearMap map_;
};

class ProjectorNode final : public MapNode {
 public:
  explicit ProjectorNode(DenseMatrix basis) : basis_(std::move(basis)) {
    if (basis_.cols() > basis_.rows())
      throw DimensionError("projector: more columns than the space dimension");
  }
  Eigen::Index dim() const override { return basis_.rows(); }
  void apply(const StateVector& in, StateVector& out) const override {
    out.noalias() = basis_ * (basis_.adjoint() * in);
  }
  void apply_adjoint(const StateVector& in, StateVector& out) const override {
    apply(in, out);  // V V^dagger is self-adjoint
  }

 private:
  DenseMatrix basis_;
};

std::atomic<Eigen::Index> g_dense_threshold{0};  // 0 = uninitialized

Eigen::Index initial_dense_threshold() {
  if (const char* env = std::getenv("FFCORR_DENSE_THRESHOLD")) {
    char* end = nullptr;
    long value = std::strtol(env, &end, 10);
    if (end != env && value > 0) return static_cast<Eigen::Index>(value);
  }
  return 4096;
}

}  // namespace

Eigen::Index LinearMap::dim() const {
  if (!node_) throw DimensionError("empty LinearMap");
  return node_->dim();
}

StateVector LinearMap::apply(const StateVector& v) const {
  if (!node_) throw DimensionError("empty LinearMap");
  if (v.size() != node_->dim()) throw DimensionError("apply: vector dimension mismatch");
  StateVector out;
  node_->apply(v, out);
  return out;
}

StateVector LinearMap::apply_adjoint(const StateVector& v) const {
  if (!node_) throw DimensionError("empty LinearMap");
  if (v.size() != node_->dim()) throw DimensionError("apply_adjoint: vector dimension mismatch");
  StateVector out;
  node_->apply_adjoint(v, out);
  return out;
}

LinearMap LinearMap::adjoint() const {
  return LinearMap(std::make_shared<AdjointNode>(*this));
}

LinearMap LinearMap::identity(Eigen::Index dim) {
  return LinearMap(std::make_shared<IdentityNode>(dim));
}

LinearMap LinearMap::embed(const TermSpec& term, int local_dim, int n) {
  return LinearMap(std::make_shared<EmbedNode>(term, local_dim, n));
}

LinearMap LinearMap::sum(std::vector<LinearMap> parts) {
  return LinearMap(std::make_shared<SumNode>(std::move(parts)));
}

LinearMap LinearMap::product(std::vector<LinearMap> factors) {
  return LinearMap(std::make_shared<ProductNode>(std::move(factors)));
}

LinearMap LinearMap::affine(Complex alpha, Complex beta, LinearMap m) {
  return LinearMap(std::make_shared<AffineNode>(alpha, beta, std::move(m)));
}

LinearMap LinearMap::projector(DenseMatrix orthonormal_columns) {
  return LinearMap(std::make_shared<ProjectorNode>(std::move(orthonormal_columns)));
}

StateVector apply_local_term(const TermSpec& term, int local_dim, int n,
                             const StateVector& v) {
  return LinearMap::embed(term, local_dim, n).apply(v);
}

StateVector apply_hamiltonian(const HamiltonianSpec& spec, const StateVector& v) {
  return hamiltonian_map(spec).apply(v);
}

LinearMap hamiltonian_map(const HamiltonianSpec& spec) {
  std::vector<LinearMap> parts;
  parts.reserve(spec.terms.size());
  for (const auto& term : spec.terms)
    parts.push_back(LinearMap::embed(term, spec.s, spec.n));
  if (parts.empty()) {
    // no terms: H = 0
    return LinearMap::scale(0.0, LinearMap::identity(hilbert_dim(spec.s, spec.n)));
  }
  return LinearMap::sum(std::move(parts));
}

StateVector random_state(Eigen::Index dim, uint64_t seed) {
  std::mt19937_64 rng(seed);
  std::normal_distribution<double> normal(0.0, 1.0);
  StateVector v(dim);
  for (Eigen::Index i = 0; i < dim; ++i) {
    double re = normal(rng);
    double im = normal(rng);
    v(i) = Complex(re, im);
  }
  return v;
}

NormResult operator_norm(const LinearMap& m, double tol, int max_iter, uint64_t seed) {
  const Eigen::Index dim = m.dim();
  StateVector v = random_state(dim, seed);
  v.normalize();

  // Below this the iterate is rounding noise (the apply and apply_adjoint
  // paths round differently, so the effective M^dagger M is not quite
  // Hermitian and the relative-change test would never settle on it).
  constexpr double kNoiseFloor = 1e-13;

  double previous = -1.0;
  double sigma = 0.0;
  int stable = 0;
  int at_floor = 0;
  for (int it = 1; it <= max_iter; ++it) {
    StateVector w = m.apply(v);
    sigma = w.norm();
    if (sigma == 0.0) return {0.0, it};  // v in the kernel of M^dagger M
    if (sigma <= kNoiseFloor) {
      if (++at_floor >= 5) return {sigma, it};
    } else {
      at_floor = 0;
    }
    StateVector u = m.apply_adjoint(w);
    double nu = u.norm();
    if (nu == 0.0) return {sigma, it};
    v = u / nu;
    if (previous >= 0.0 && std::abs(sigma - previous) <= tol * std::max(sigma, 1e-300)) {
      if (++stable >= 3) return {sigma, it};
    } else {
      stable = 0;
    }
    previous = sigma;
  }
  throw ConvergenceError("operator_norm: power iteration did not settle", sigma, previous,
                         max_iter);
}

Eigen::Index dense_threshold() {
  Eigen::Index value = g_dense_threshold.load();
  if (value == 0) {
    value = initial_dense_threshold();
    g_dense_threshold.store(value);
  }
  return value;
}

void set_dense_threshold(Eigen::Index value) {
  if (value < 1) throw DomainError("dense threshold must be positive");
  g_dense_threshold.store(value);
}

DenseMatrix dense_materialize(const LinearMap& m) {
  const Eigen::Index dim = m.dim();
  if (dim > dense_threshold())
    throw DimensionError("dense_materialize: dimension exceeds the dense threshold");
  DenseMatrix out(dim, dim);
  StateVector basis = StateVector::Zero(dim);
  for (Eigen::Index j = 0; j < dim; ++j) {
    basis(j) = 1.0;
    out.col(j) = m.apply(basis);
    basis(j) = 0.0;
  }
  return out;
}

}  // namespace ffcorr
