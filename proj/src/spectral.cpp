#include "ffcorr/spectral.hpp"

#include <Eigen/Eigenvalues>
#include <algorithm>
#include <cmath>
#include <sstream>
#include <vector>

namespace ffcorr {

namespace {

void check_hermitian_probe(const LinearMap& m, uint64_t seed) {
  const Eigen::Index dim = m.dim();
  StateVector v = random_state(dim, seed ^ 0x9e3779b97f4a7c15ull);
  StateVector w = random_state(dim, seed ^ 0xc2b2ae3d27d4eb4full);
  v.normalize();
  w.normalize();
  StateVector mv = m.apply(v);
  StateVector mw = m.apply(w);
  Complex lhs = w.dot(mv);   // <w, Mv>
  Complex rhs = mw.dot(v);   // <Mw, v>
  double scale = mv.norm() + mw.norm() + 1e-300;
  if (std::abs(lhs - rhs) > 1e-8 * scale)
    throw PreconditionError("map is not Hermitian (adjoint probe failed)");
}

struct TriRitz {
  Eigen::VectorXd values;
  Eigen::MatrixXd vectors;  // columns, in the Krylov coordinates
};

TriRitz ritz_of_tridiagonal(const std::vector<double>& alpha, const std::vector<double>& beta) {
  const int m = static_cast<int>(alpha.size());
  Eigen::MatrixXd t = Eigen::MatrixXd::Zero(m, m);
  for (int i = 0; i < m; ++i) t(i, i) = alpha[i];
  for (int i = 0; i + 1 < m; ++i) {
    t(i, i + 1) = beta[i];
    t(i + 1, i) = beta[i];
  }
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> eig(t);
  return {eig.eigenvalues(), eig.eigenvectors()};
}

// Orthogonalize v against the columns of each basis block (two passes).
void orthogonalize(StateVector& v, const std::vector<const DenseMatrix*>& blocks,
                   const std::vector<StateVector>& krylov) {
  for (int pass = 0; pass < 2; ++pass) {
    for (const DenseMatrix* block : blocks)
      if (block && block->cols() > 0) v -= *block * (block->adjoint() * v);
    for (const auto& u : krylov) v -= u * u.dot(v);
  }
}

struct RunResult {
  std::vector<double> values;
  std::vector<StateVector> vectors;
  std::vector<double> residuals;
  bool breakdown = false;
};

// One Lanczos pass with full reorthogonalization against the Krylov basis
// and previously locked vectors.
RunResult lanczos_pass(const LinearMap& m, const DenseMatrix& locked, uint64_t seed,
                       int max_subspace, double breakdown_tol) {
  const Eigen::Index dim = m.dim();
  const int cap = static_cast<int>(std::min<Eigen::Index>(max_subspace, dim - locked.cols()));
  RunResult result;
  if (cap <= 0) return result;

  std::vector<const DenseMatrix*> blocks{&locked};
  std::vector<StateVector> basis;
  StateVector v = random_state(dim, seed);
  orthogonalize(v, blocks, basis);
  double norm = v.norm();
  if (norm < 1e-12) return result;  // space exhausted
  basis.push_back(v / norm);

  std::vector<double> alpha, beta;
  double final_beta = 0.0;
  for (int j = 0; j < cap; ++j) {
    StateVector w = m.apply(basis[j]);
    double a = basis[j].dot(w).real();
    alpha.push_back(a);
    w -= a * basis[j];
    if (j > 0) w -= beta[j - 1] * basis[j - 1];
    orthogonalize(w, blocks, basis);
    double b = w.norm();
    if (b <= breakdown_tol) {
      result.breakdown = true;
      final_beta = 0.0;
      break;
    }
    if (j + 1 == cap) {
      final_beta = b;
      break;
    }
    beta.push_back(b);
    basis.push_back(w / b);
  }

  TriRitz ritz = ritz_of_tridiagonal(alpha, beta);
  const int count = static_cast<int>(ritz.values.size());
  result.values.resize(count);
  result.residuals.resize(count);
  result.vectors.resize(count);
  for (int i = 0; i < count; ++i) {
    result.values[i] = ritz.values(i);
    result.residuals[i] = std::abs(final_beta * ritz.vectors(count - 1, i));
    StateVector y = StateVector::Zero(dim);
    for (int j = 0; j < count; ++j) y += ritz.vectors(j, i) * basis[j];
    result.vectors[i] = std::move(y);
  }
  return result;
}

EigenPairs dense_lowest(const LinearMap& m, int k) {
  DenseMatrix dense = dense_materialize(m);
  double scale = std::max(1.0, dense.norm());
  if ((dense - dense.adjoint()).norm() > 1e-9 * scale)
    throw PreconditionError("map is not Hermitian (dense check failed)");
  Eigen::SelfAdjointEigenSolver<DenseMatrix> eig(dense);
  EigenPairs out;
  out.values = eig.eigenvalues().head(k);
  out.vectors = eig.eigenvectors().leftCols(k);
  return out;
}

}  // namespace

EigenPairs lowest_eigenpairs(const LinearMap& m, int k, const LanczosOptions& opts) {
  const Eigen::Index dim = m.dim();
  if (k < 1 || k > dim) throw DomainError("lowest_eigenpairs: k must be in [1, dim]");
  if (dim <= dense_threshold()) return dense_lowest(m, k);

  check_hermitian_probe(m, opts.seed);

  DenseMatrix locked(dim, 0);
  std::vector<double> locked_values;
  int subspace = opts.max_subspace;
  double worst_residual = 0.0;
  bool saturated = false;  // a deflated restart found nothing new below the k-th value

  for (int restart = 0; restart < opts.max_restarts; ++restart) {
    if (static_cast<int>(locked_values.size()) >= k && saturated) break;
    RunResult run = lanczos_pass(m, locked, opts.seed + 1315423911ull * (restart + 1),
                                 subspace, 1e-13);
    if (run.values.empty()) break;  // space exhausted: everything is locked

    // Lock the converged prefix only. A single Krylov space carries one
    // vector per degenerate eigenvalue, so restarts (deflated against the
    // locked set) are what resolve multiplicities; locking beyond the
    // prefix could let a not-yet-found copy of a smaller eigenvalue slip
    // past the k requested pairs.
    int locked_this_round = 0;
    double smallest_locked_this_round = 0.0;
    for (size_t i = 0; i < run.values.size(); ++i) {
      double tol_i = opts.tol * std::max(1.0, std::abs(run.values[i]));
      if (run.residuals[i] > tol_i) {
        worst_residual = run.residuals[i];
        break;
      }
      StateVector y = run.vectors[i];
      std::vector<const DenseMatrix*> blocks{&locked};
      orthogonalize(y, blocks, {});
      double norm = y.norm();
      if (norm < 1e-8) continue;  // already represented in the locked set
      y /= norm;
      locked.conservativeResize(Eigen::NoChange, locked.cols() + 1);
      locked.col(locked.cols() - 1) = y;
      locked_values.push_back(run.values[i]);
      if (locked_this_round == 0) smallest_locked_this_round = run.values[i];
      ++locked_this_round;
    }
    if (locked_this_round == 0) {
      subspace = std::min<int>(subspace * 2, static_cast<int>(dim));
      continue;
    }
    if (static_cast<int>(locked_values.size()) >= k) {
      std::vector<double> sorted = locked_values;
      std::nth_element(sorted.begin(), sorted.begin() + (k - 1), sorted.end());
      saturated = smallest_locked_this_round >= sorted[k - 1] - opts.tol;
    }
  }

  if (static_cast<int>(locked_values.size()) < k) {
    std::ostringstream msg;
    msg << "lowest_eigenpairs: only " << locked_values.size() << " of " << k
        << " eigenpairs converged (last residual " << worst_residual << ")";
    throw ConvergenceError(msg.str(), worst_residual, opts.tol, opts.max_restarts);
  }

  std::vector<int> order(locked_values.size());
  for (size_t i = 0; i < order.size(); ++i) order[i] = static_cast<int>(i);
  std::sort(order.begin(), order.end(),
            [&](int a, int b) { return locked_values[a] < locked_values[b]; });

  EigenPairs out;
  out.values.resize(k);
  out.vectors.resize(dim, k);
  for (int i = 0; i < k; ++i) {
    out.values(i) = locked_values[order[i]];
    out.vectors.col(i) = locked.col(order[i]);
  }
  return out;
}

GroundSpaceBasis ground_space(const HamiltonianSpec& spec, double zero_tol,
                              const LanczosOptions& opts) {
  if (spec.terms.empty()) throw DomainError("ground_space: spec has no terms");
  if (zero_tol <= 0.0) zero_tol = 1e-9 * static_cast<double>(spec.terms.size());

  const Eigen::Index dim = hilbert_dim(spec.s, spec.n);
  LinearMap h = hamiltonian_map(spec);

  Eigen::VectorXd values;
  DenseMatrix vectors;
  if (dim <= dense_threshold()) {
    EigenPairs pairs = dense_lowest(h, static_cast<int>(dim));
    values = pairs.values;
    vectors = pairs.vectors;
  } else {
    int k = static_cast<int>(std::min<Eigen::Index>(8, dim));
    for (;;) {
      EigenPairs pairs = lowest_eigenpairs(h, k, opts);
      if (pairs.values(k - 1) > zero_tol || k == dim) {
        values = pairs.values;
        vectors = pairs.vectors;
        break;
      }
      k = static_cast<int>(std::min<Eigen::Index>(2 * k, dim));
    }
  }

  int degeneracy = 0;
  while (degeneracy < values.size() && values(degeneracy) <= zero_tol) ++degeneracy;
  if (degeneracy == 0) {
    std::ostringstream msg;
    msg << "not frustration-free: ground energy " << values(0) << " exceeds zero tolerance "
        << zero_tol;
    throw NotFrustrationFreeError(msg.str());
  }
  if (degeneracy == values.size())
    throw Error("ground_space: no eigenvalue above zero tolerance; gap undefined");

  GroundSpaceBasis gs;
  gs.basis = vectors.leftCols(degeneracy);
  gs.degeneracy = degeneracy;
  gs.gap = values(degeneracy);
  gs.zero_tol = zero_tol;

  // frustration-freeness is per-term: every basis vector must be annihilated
  // by every individual term
  const double per_term_tol = std::max(zero_tol, 1e-9);
  for (const auto& term : spec.terms) {
    LinearMap embedded = LinearMap::embed(term, spec.s, spec.n);
    for (int c = 0; c < gs.degeneracy; ++c) {
      double residual = embedded.apply(gs.basis.col(c)).norm();
      if (residual > per_term_tol) {
        std::ostringstream msg;
        msg << "zero total energy but a term residual is " << residual
            << "; per-term frustration-freeness fails";
        throw InconsistencyError(msg.str());
      }
    }
  }
  return gs;
}

std::pair<double, double> extremal_eigs(const LinearMap& m, const LanczosOptions& opts) {
  const Eigen::Index dim = m.dim();
  if (dim <= std::min<Eigen::Index>(64, dense_threshold())) {
    DenseMatrix dense = dense_materialize(m);
    double scale = std::max(1.0, dense.norm());
    if ((dense - dense.adjoint()).norm() > 1e-9 * scale)
      throw PreconditionError("map is not Hermitian (dense check failed)");
    Eigen::SelfAdjointEigenSolver<DenseMatrix> eig(dense, Eigen::EigenvaluesOnly);
    return {eig.eigenvalues().minCoeff(), eig.eigenvalues().maxCoeff()};
  }

  check_hermitian_probe(m, opts.seed);

  // One growing Krylov space approximates both ends of the spectrum.
  std::vector<StateVector> basis;
  std::vector<double> alpha, beta;
  const DenseMatrix empty(dim, 0);
  std::vector<const DenseMatrix*> blocks{&empty};

  StateVector v = random_state(dim, opts.seed + 77);
  v.normalize();
  basis.push_back(v);

  const int cap = static_cast<int>(std::min<Eigen::Index>(opts.max_subspace * 4, dim));
  double final_beta = 0.0;
  bool breakdown = false;
  double lo = 0.0, hi = 0.0, lo_res = 1.0, hi_res = 1.0;

  for (int j = 0; j < cap; ++j) {
    StateVector w = m.apply(basis[j]);
    double a = basis[j].dot(w).real();
    alpha.push_back(a);
    w -= a * basis[j];
    if (j > 0) w -= beta[j - 1] * basis[j - 1];
    orthogonalize(w, blocks, basis);
    double b = w.norm();
    if (b <= 1e-13) {
      breakdown = true;
      final_beta = 0.0;
    } else {
      final_beta = b;
    }

    const bool last = breakdown || j + 1 == cap;
    if (last || (j + 1) % 10 == 0) {
      TriRitz ritz = ritz_of_tridiagonal(alpha, beta);
      const int mm = static_cast<int>(ritz.values.size());
      lo = ritz.values(0);
      hi = ritz.values(mm - 1);
      lo_res = std::abs(final_beta * ritz.vectors(mm - 1, 0));
      hi_res = std::abs(final_beta * ritz.vectors(mm - 1, mm - 1));
      double tol_lo = opts.tol * std::max(1.0, std::abs(lo));
      double tol_hi = opts.tol * std::max(1.0, std::abs(hi));
      if (lo_res <= tol_lo && hi_res <= tol_hi) return {lo, hi};
    }
    if (breakdown) break;
    beta.push_back(b);
    basis.push_back(w / b);
  }
  if (breakdown) return {lo, hi};
  throw ConvergenceError("extremal_eigs: Lanczos did not converge", hi, lo,
                         static_cast<int>(alpha.size()));
}

}  // namespace ffcorr
