import math

import numpy as np
import pytest
import scipy.linalg
from hypothesis import given
from hypothesis import strategies as st

from ptbrach import linalg
from ptbrach.errors import ZeroVectorError
from strategies import hermitian2, matrices2, states2


def taylor_exp(m, t, terms=40):
    """exp(-i m t) by a plain power series; fine for the modest norms used here."""
    out = np.eye(len(m), dtype=complex)
    term = np.eye(len(m), dtype=complex)
    for k in range(1, terms):
        term = term @ (-1j * t * m) / k
        out = out + term
    return out


def test_pauli_roundtrip_exact_example():
    m = np.array([[1 + 2j, 3 - 1j], [0.5j, -2]])
    dec = linalg.pauli_decompose(m)
    assert dec.trace_part == pytest.approx((m[0, 0] + m[1, 1]) / 2)
    np.testing.assert_allclose(dec.vector_part, [(3 - 1j + 0.5j) / 2, 1j * ((3 - 1j) - 0.5j) / 2,
                                                 (1 + 2j + 2) / 2])
    np.testing.assert_allclose(dec.reconstruct(), m, atol=1e-15)


@given(matrices2())
def test_pauli_roundtrip(m):
    assert np.max(np.abs(linalg.pauli_decompose(m).reconstruct() - m)) < 1e-14


def test_mat_exp2_against_taylor_series():
    # traceless Hermitian generator with Pauli vector (0.3, 1.0, 0.4)
    h = 0.3 * linalg.SIGMA_X + 1.0 * linalg.SIGMA_Y + 0.4 * linalg.SIGMA_Z
    ref = taylor_exp(h, 0.7, terms=20)
    np.testing.assert_allclose(linalg.mat_exp2(h, 0.7), ref, atol=1e-14)


@given(matrices2(), st.floats(min_value=-2, max_value=2))
def test_mat_exp2_matches_scipy(m, t):
    ref = scipy.linalg.expm(-1j * m * t)
    got = linalg.mat_exp2(m, t)
    assert np.max(np.abs(got - ref)) <= 1e-11 * max(1.0, np.max(np.abs(ref)))


@given(hermitian2(), st.floats(min_value=-50, max_value=50))
def test_mat_exp2_unitary_for_hermitian(h, t):
    assert linalg.unitarity_residual(linalg.mat_exp2(h, t)) < 1e-12


@given(matrices2(), st.floats(min_value=-1, max_value=1), st.floats(min_value=-1, max_value=1))
def test_mat_exp2_semigroup(m, t1, t2):
    lhs = linalg.mat_exp2(m, t1) @ linalg.mat_exp2(m, t2)
    rhs = linalg.mat_exp2(m, t1 + t2)
    assert np.max(np.abs(lhs - rhs)) <= 1e-11 * max(1.0, np.max(np.abs(rhs)))


def test_mat_exp2_nilpotent_is_linear():
    n = np.array([[0, 1], [0, 0]], dtype=complex)
    np.testing.assert_allclose(linalg.mat_exp2(n, 2.5), np.eye(2) - 2.5j * n, atol=1e-15)
    # exceptional-point PT matrix: (r e^{i th}, s; s, r e^{-i th}) with s = r sin th
    ep = np.array([[1j, 1], [1, -1j]])
    np.testing.assert_allclose(linalg.mat_exp2(ep, 0.8), np.eye(2) - 0.8j * ep, atol=1e-14)


def test_mat_exp2_hbar_scales_time():
    h = np.array([[0.2, 1 - 1j], [1 + 1j, -0.7]])
    np.testing.assert_allclose(linalg.mat_exp2(h, 3.0, hbar=2.0), linalg.mat_exp2(h, 1.5),
                               atol=1e-14)


def test_mat_exp2_rejects_nonfinite_time():
    with pytest.raises(ValueError):
        linalg.mat_exp2(np.eye(2), float("nan"))


def test_mat_exp4_hermitian_and_general(rng):
    a = rng.normal(size=(4, 4)) + 1j * rng.normal(size=(4, 4))
    h = 0.25 * (a + a.conj().T)
    for m in (h, 0.3 * a):
        np.testing.assert_allclose(linalg.mat_exp4(m, 0.9), taylor_exp(m, 0.9, terms=60),
                                   atol=1e-12)
    assert linalg.unitarity_residual(linalg.mat_exp4(h, 123.4)) < 1e-12


@given(matrices2())
def test_eig2_residual(m):
    e = linalg.eig2(m)
    if e.degenerate:
        return
    scale = max(1.0, np.linalg.norm(m))
    for lam, v in zip(e.values, e.vectors.T):
        assert abs(np.linalg.norm(v) - 1) < 1e-12
        assert np.linalg.norm(m @ v - lam * v) < 1e-11 * scale


@given(matrices2())
def test_eig2_values_match_lapack(m):
    e = linalg.eig2(m)
    ref = np.linalg.eigvals(m)
    if e.degenerate:
        return
    gap = abs(ref[1] - ref[0])
    err = min(np.max(np.abs(e.values - ref)), np.max(np.abs(e.values - ref[::-1])))
    assert err < 1e-9 * max(1.0, np.linalg.norm(m)) / max(gap, 1e-3)


def test_eig2_flags_degenerate_and_identity():
    assert linalg.eig2(np.eye(2) * 3).degenerate
    np.testing.assert_allclose(linalg.eig2(np.eye(2) * 3).vectors, np.eye(2))
    jordan = linalg.eig2(np.array([[2, 1], [0, 2]]))
    assert jordan.degenerate
    np.testing.assert_allclose(jordan.values, [2, 2])


def test_eig2_sorted_by_real_part():
    e = linalg.eig2(np.diag([3.0, -1.0]))
    np.testing.assert_allclose(e.values, [-1, 3])


def test_as_state_rejects_zero_vector():
    with pytest.raises(ZeroVectorError):
        linalg.as_state([0, 0])
    with pytest.raises(ValueError):
        linalg.as_state([1, 0, 0], dim=2)


@given(states2(), states2())
def test_ray_fidelity_symmetric_and_phase_blind(a, b):
    f = linalg.ray_fidelity(a, b)
    assert 0 <= f <= 1 + 1e-12
    assert f == pytest.approx(linalg.ray_fidelity(b, a), abs=1e-14)
    assert linalg.ray_fidelity(a, np.exp(0.7j) * 3 * a) == pytest.approx(1.0, abs=1e-14)


def test_psd_sqrt_squares_back(rng):
    a = rng.normal(size=(4, 4)) + 1j * rng.normal(size=(4, 4))
    m = a @ a.conj().T
    root = linalg.psd_sqrt(m)
    np.testing.assert_allclose(root @ root, m, atol=1e-12)
    with pytest.raises(ValueError):
        linalg.psd_sqrt(-np.eye(2))


def test_commutator_of_paulis():
    np.testing.assert_allclose(linalg.commutator(linalg.SIGMA_X, linalg.SIGMA_Y),
                               2j * linalg.SIGMA_Z)
    assert linalg.is_hermitian(linalg.SIGMA_Y)
    assert not linalg.is_hermitian(np.array([[0, 1], [0, 0]]))
    assert math.isclose(linalg.hermiticity_residual(np.array([[0, 1], [0, 0]])), 1.0)
