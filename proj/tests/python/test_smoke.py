import math

import numpy as np
import pytest

import ffcorr


def test_version():
    assert ffcorr.__version__


def test_xxz_spec_valid():
    spec = ffcorr.xxz_spec(0.5, 6)
    assert spec.n == 6
    assert spec.term_count == 5
    assert ffcorr.validate_spec(spec) == []


def test_gap_matches_closed_form():
    for q, n in [(0.5, 4), (0.9, 6)]:
        gs = ffcorr.ground_space(ffcorr.xxz_spec(q, n))
        assert gs.degeneracy == n + 1
        assert abs(gs.gap - ffcorr.xxz_gap_closed_form(q, n)) < 1e-8


def test_psi1_is_ground_state():
    spec = ffcorr.xxz_spec(0.7, 5)
    psi = ffcorr.xxz_psi1(0.7, 5)
    assert abs(np.linalg.norm(psi) - 1.0) < 1e-12
    assert np.linalg.norm(ffcorr.apply_hamiltonian(spec, psi)) < 1e-10
    # the layered product fixes ground states
    assert np.linalg.norm(ffcorr.apply_dl_operator(spec, psi) - psi) < 1e-12


def test_detectability_lemma():
    report = ffcorr.dl_check(ffcorr.xxz_spec(0.5, 4))
    assert report.passed and report.pp_passed
    assert report.dl_norm <= report.bound + 1e-8
    # observed equality from the scan: 1 - ||P-G|| == epsilon
    assert abs((1.0 - report.dl_norm) - report.epsilon) < 1e-8


def test_correlator_matches_closed_form():
    q, n = 0.5, 5
    spec = ffcorr.xxz_spec(q, n)
    psi = ffcorr.xxz_psi1(q, n)
    for d in (1, 2, 3):
        value = ffcorr.correlator_deg(spec, psi, 1, 1 + d)
        assert abs(value - ffcorr.xxz_correlator_closed_form(q, n, d)) < 1e-10


def test_agsp_bound():
    rows = ffcorr.agsp_norm_sweep(ffcorr.xxz_spec(0.5, 5), [1, 2, 3])
    assert all(row.passed for row in rows)


def test_causal_cone():
    report = ffcorr.causal_cone_check(ffcorr.xxz_spec(0.5, 8), 1, 7, 1)
    assert report.distance == 6
    assert report.passed


def test_scaling_sweep():
    sweep = ffcorr.xi_scaling_sweep([0.90 + 0.01 * i for i in range(10)])
    assert -0.55 <= sweep.slope <= -0.45
    for row in sweep.rows:
        assert row.xi_lower <= row.xi_fit + 1e-9 <= row.xi_upper + 1e-9


def test_entropy():
    psi = np.zeros(16, dtype=complex)
    psi[0] = 1.0
    assert ffcorr.half_chain_entropy(psi, 2, 2) < 1e-12
    bell = np.zeros(4, dtype=complex)
    bell[0] = bell[3] = 1 / math.sqrt(2)
    assert abs(ffcorr.half_chain_entropy(bell, 2, 1) - math.log(2)) < 1e-12


def test_domain_errors_surface_as_value_errors():
    with pytest.raises(ValueError):
        ffcorr.xxz_spec(1.5, 4)
