#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>

#include "ffcorr/model.hpp"
#include "ffcorr/spectral.hpp"
#include "oracle.hpp"

using namespace ffcorr;

namespace {

// Two projector terms pinning conflicting states on overlapping pairs:
// |00><00| wants sites (1,2) away from 00, the complement on (2,3) pins them.
HamiltonianSpec frustrated_toy() {
  HamiltonianSpec spec;
  spec.n = 3;
  spec.s = 2;
  spec.r = 2;
  spec.positions = {1, 2, 3};
  DenseMatrix pin00 = DenseMatrix::Zero(4, 4);
  pin00(0, 0) = 1.0;
  TermSpec t1;
  t1.sites = {1, 2};
  t1.matrix = DenseMatrix::Identity(4, 4) - pin00;  // forces (1,2) = |00>
  t1.projector = true;
  DenseMatrix pin11 = DenseMatrix::Zero(4, 4);
  pin11(3, 3) = 1.0;
  TermSpec t2;
  t2.sites = {2, 3};
  t2.matrix = DenseMatrix::Identity(4, 4) - pin11;  // forces (2,3) = |11>
  t2.projector = true;
  spec.terms = {t1, t2};
  return spec;
}

LinearMap diag_map(std::vector<double> entries) {
  TermSpec term;
  term.sites = {1};
  const int d = static_cast<int>(entries.size());
  term.matrix = DenseMatrix::Zero(d, d);
  for (int i = 0; i < d; ++i) term.matrix(i, i) = entries[i];
  return LinearMap::embed(term, d, 1);
}

}  // namespace

TEST_CASE("lowest_eigenpairs on a known diagonal spectrum") {
  EigenPairs pairs = lowest_eigenpairs(diag_map({0, 0, 1, 3}), 3);
  CHECK(pairs.values(0) == doctest::Approx(0.0).epsilon(1e-12));
  CHECK(pairs.values(1) == doctest::Approx(0.0).epsilon(1e-12));
  CHECK(pairs.values(2) == doctest::Approx(1.0).epsilon(1e-12));
}

TEST_CASE("lowest_eigenpairs resolves the xxz spectrum") {
  HamiltonianSpec spec = xxz_spec(0.5, 4);
  EigenPairs pairs = lowest_eigenpairs(hamiltonian_map(spec), 6);
  for (int i = 0; i < 5; ++i) CHECK(std::abs(pairs.values(i)) <= 1e-10);
  CHECK(pairs.values(5) == doctest::Approx(0.4343145750507619).epsilon(1e-9));

  // orthonormal eigenvectors
  DenseMatrix gram = pairs.vectors.adjoint() * pairs.vectors;
  CHECK((gram - DenseMatrix::Identity(6, 6)).norm() <= 1e-10);
}

TEST_CASE("Lanczos path agrees with the dense path") {
  HamiltonianSpec spec = xxz_spec(0.6, 6);  // dim 64, kernel multiplicity 7
  EigenPairs dense = lowest_eigenpairs(hamiltonian_map(spec), 9);

  Eigen::Index saved = dense_threshold();
  set_dense_threshold(4);  // force the iterative path
  EigenPairs lanczos = lowest_eigenpairs(hamiltonian_map(spec), 9);
  set_dense_threshold(saved);

  for (int i = 0; i < 9; ++i)
    CHECK(lanczos.values(i) == doctest::Approx(dense.values(i)).epsilon(1e-8));
  DenseMatrix gram = lanczos.vectors.adjoint() * lanczos.vectors;
  CHECK((gram - DenseMatrix::Identity(9, 9)).norm() <= 1e-8);

  // residuals of the iterative eigenpairs
  LinearMap h = hamiltonian_map(spec);
  for (int i = 0; i < 9; ++i) {
    StateVector v = lanczos.vectors.col(i);
    CHECK((h.apply(v) - lanczos.values(i) * v).norm() <= 1e-8);
  }
}

TEST_CASE("non-Hermitian input is rejected") {
  TermSpec term;
  term.sites = {1};
  term.matrix = DenseMatrix::Zero(2, 2);
  term.matrix(0, 1) = 1.0;  // raising operator
  LinearMap m = LinearMap::embed(term, 2, 1);
  CHECK_THROWS_AS(lowest_eigenpairs(m, 1), PreconditionError);

  Eigen::Index saved = dense_threshold();
  set_dense_threshold(1);  // iterative path probes with random vectors
  TermSpec wide;
  wide.sites = {1, 2, 3};
  wide.matrix = DenseMatrix::Zero(8, 8);
  wide.matrix(0, 5) = 1.0;
  CHECK_THROWS_AS(lowest_eigenpairs(LinearMap::embed(wide, 2, 3), 2), PreconditionError);
  set_dense_threshold(saved);
}

TEST_CASE("ground_space on the xxz chain") {
  HamiltonianSpec spec = xxz_spec(0.5, 4);
  GroundSpaceBasis gs = ground_space(spec);
  CHECK(gs.degeneracy == 5);
  CHECK(gs.gap == doctest::Approx(0.4343145750507619).epsilon(1e-9));

  // basis columns are orthonormal and annihilated per term
  DenseMatrix gram = gs.basis.adjoint() * gs.basis;
  CHECK((gram - DenseMatrix::Identity(5, 5)).norm() <= 1e-10);
  for (const auto& term : spec.terms) {
    LinearMap embedded = LinearMap::embed(term, spec.s, spec.n);
    for (int c = 0; c < gs.degeneracy; ++c)
      CHECK(embedded.apply(gs.basis.col(c)).norm() <= 1e-9);
  }
}

TEST_CASE("xxz ground degeneracy is n+1 across the grid") {
  for (double q : {0.3, 0.7}) {
    for (int n : {3, 4, 5, 6}) {
      GroundSpaceBasis gs = ground_space(xxz_spec(q, n));
      CHECK(gs.degeneracy == n + 1);
      CHECK(gs.gap == doctest::Approx(xxz_gap_closed_form(q, n)).epsilon(1e-9));
    }
  }
}

TEST_CASE("single projector term: degeneracy 3, gap 1") {
  HamiltonianSpec spec = xxz_spec(0.5, 2);
  GroundSpaceBasis gs = ground_space(spec);
  CHECK(gs.degeneracy == 3);
  CHECK(gs.gap == doctest::Approx(1.0).epsilon(1e-12));
}

TEST_CASE("frustrated toy model is rejected") {
  HamiltonianSpec spec = frustrated_toy();
  REQUIRE(validate_spec(spec).valid());
  // dense oracle confirms a positive ground energy first
  DenseMatrix h = oracle::embed_contiguous(spec.terms[0].matrix, 1, 2, 3) +
                  oracle::embed_contiguous(spec.terms[1].matrix, 2, 2, 3);
  CHECK(oracle::eig(h).values.minCoeff() > 1e-3);
  CHECK_THROWS_AS(ground_space(spec), NotFrustrationFreeError);
}

TEST_CASE("projectorized spectra bracket the original gap") {
  // scale the xxz projectors down so the terms are no longer projectors
  for (double a : {0.3, 0.7}) {
    HamiltonianSpec scaled = xxz_spec(0.5, 5);
    for (auto& term : scaled.terms) {
      term.matrix *= a;
      term.projector = false;
    }
    REQUIRE(validate_spec(scaled).valid());

    auto [projected, a_measured] = projectorize_spec(scaled);
    CHECK(a_measured == doctest::Approx(a).epsilon(1e-10));

    double eps = ground_space(scaled).gap;
    double eps_prime = ground_space(projected).gap;
    CHECK(a_measured * eps_prime <= eps + 1e-9);
    CHECK(eps <= eps_prime + 1e-9);
  }
}

TEST_CASE("extremal_eigs") {
  SUBCASE("projector spectrum is (0, 1)") {
    DenseMatrix basis(8, 3);
    basis.setZero();
    basis(0, 0) = 1.0;
    basis(3, 1) = 1.0;
    basis(5, 2) = 1.0;
    auto [lo, hi] = extremal_eigs(LinearMap::projector(basis));
    CHECK(lo == doctest::Approx(0.0).epsilon(1e-10));
    CHECK(hi == doctest::Approx(1.0).epsilon(1e-10));
  }
  SUBCASE("zero map") {
    auto [lo, hi] = extremal_eigs(LinearMap::scale(0.0, LinearMap::identity(16)));
    CHECK(lo == doctest::Approx(0.0));
    CHECK(hi == doctest::Approx(0.0));
  }
  SUBCASE("iterative path matches dense on the xxz Hamiltonian") {
    // dim 128 is above the dense cutoff of extremal_eigs, so this runs Lanczos
    HamiltonianSpec spec = xxz_spec(0.4, 7);
    oracle::Spectrum s = oracle::eig(oracle::xxz_hamiltonian(0.4, 7));
    auto [lo, hi] = extremal_eigs(hamiltonian_map(spec));
    CHECK(lo == doctest::Approx(s.values.minCoeff()).epsilon(1e-9));
    CHECK(hi == doctest::Approx(s.values.maxCoeff()).epsilon(1e-9));
  }
}
