import math

import numpy as np
import pytest
import scipy.linalg
from hypothesis import given
from hypothesis import strategies as st

from ptbrach import linalg, pt
from ptbrach.errors import BrokenPTError
from strategies import states2, unbroken_params

UP = np.array([1, 0], dtype=complex)
DOWN = np.array([0, 1], dtype=complex)


def test_matrix_layout_and_symmetry():
    p = pt.PTParams(r=0.5, s=1.2, theta=0.8)
    h = p.matrix()
    np.testing.assert_allclose(h, [[0.5 * np.exp(0.8j), 1.2], [1.2, 0.5 * np.exp(-0.8j)]])
    # PT symmetry: P H* P = H
    np.testing.assert_allclose(pt.PARITY @ h.conj() @ pt.PARITY, h)


def test_unbroken_region_and_errors():
    assert pt.PTParams(0.5, 1.0, 1.0).unbroken
    assert not pt.PTParams(2.0, 1.0, math.pi / 2).unbroken
    with pytest.raises(BrokenPTError) as broken:
        pt.pt_eigensystem(pt.PTParams(2.0, 1.0, math.pi / 2))
    assert broken.value.code == "BROKEN_PT" and broken.value.tag is None
    with pytest.raises(BrokenPTError) as boundary:
        pt.pt_evolve(pt.PTParams(1.0, 1.0, math.pi / 2), UP, 1.0)
    assert boundary.value.tag == "EXCEPTIONAL"
    assert boundary.value.to_dict()["tag"] == "EXCEPTIONAL"


@given(unbroken_params())
def test_alpha_and_omega_definitions(p):
    assert math.sin(p.alpha) == pytest.approx(p.r * math.sin(p.theta) / p.s, abs=1e-12)
    assert p.omega == pytest.approx(2 * math.sqrt(p.s ** 2 - (p.r * math.sin(p.theta)) ** 2),
                                    rel=1e-12)
    assert p.omega == pytest.approx(2 * abs(p.s) * math.cos(p.alpha), rel=1e-12)


@given(unbroken_params())
def test_eigenvalues_match_lapack(p):
    e = pt.pt_eigensystem(p)
    ref = np.sort(np.linalg.eigvals(p.matrix()).real)
    assert e.e_minus == pytest.approx(ref[0], abs=1e-12)
    assert e.e_plus == pytest.approx(ref[1], abs=1e-12)
    assert e.e_plus - e.e_minus == pytest.approx(p.omega, abs=1e-12)


@given(unbroken_params())
def test_eigenvectors_and_cpt_norms(p):
    e = pt.pt_eigensystem(p)
    h = p.matrix()
    frame = pt.c_operator(p)
    for lam, v in ((e.e_plus, e.v_plus), (e.e_minus, e.v_minus)):
        np.testing.assert_allclose(h @ v, lam * v, atol=1e-12)
        assert pt.cpt_norm(v, frame) == pytest.approx(math.sqrt(2 * math.cos(e.alpha)), abs=1e-12)
    assert abs(pt.cpt_inner(e.v_plus, e.v_minus, frame)) < 1e-12


@given(unbroken_params())
def test_c_operator_algebra(p):
    res = pt.c_operator_residuals(p)
    assert set(res) == {"C2_minus_1", "C_H", "C_PT"}
    assert max(res.values()) < 1e-12


@given(unbroken_params())
def test_metric_is_positive_and_makes_h_self_adjoint(p):
    g = pt.c_operator(p).metric
    assert linalg.hermiticity_residual(g) < 1e-14
    assert np.min(np.linalg.eigvalsh(g)) > 0
    h = p.matrix()
    np.testing.assert_allclose(h.conj().T @ g, g @ h, atol=1e-12)


@given(unbroken_params(), states2(), states2())
def test_cpt_inner_is_a_hermitian_form(p, a, b):
    frame = pt.c_operator(p)
    ab, ba = pt.cpt_inner(a, b, frame), pt.cpt_inner(b, a, frame)
    assert ab == pytest.approx(ba.conjugate(), abs=1e-12)
    assert pt.cpt_inner(a, 2j * b, frame) == pytest.approx(2j * ab, abs=1e-12)
    assert pt.cpt_inner(a, a, frame).real > 0


def test_cpt_norm_of_basis_state():
    p = pt.PTParams.from_alpha(1.0, 0.6)
    frame = pt.c_operator(p)
    assert pt.cpt_inner(UP, UP, frame).real == pytest.approx(1 / math.cos(0.6))


@given(unbroken_params(), st.floats(min_value=0, max_value=30))
def test_pt_evolve_matches_scipy_and_closed_form(p, t):
    ref = scipy.linalg.expm(-1j * p.matrix() * t) @ UP
    got = pt.pt_evolve(p, UP, t)
    np.testing.assert_allclose(got, ref, atol=1e-10)
    np.testing.assert_allclose(pt.pt_evolve_up(p, t), got, atol=1e-12)


@given(unbroken_params(), states2())
def test_cpt_norm_conserved(p, psi):
    frame = pt.c_operator(p)
    n0 = pt.cpt_inner(psi, psi, frame).real
    for t in np.linspace(0, 10 * math.pi / p.omega, 25):
        out = pt.pt_evolve(p, psi, t)
        assert pt.cpt_inner(out, out, frame).real == pytest.approx(n0, rel=1e-10)


def test_dirac_norm_not_conserved():
    p = pt.PTParams.from_alpha(1.0, 0.8)
    norms = [np.linalg.norm(pt.pt_evolve(p, UP, t)) for t in np.linspace(0, 6, 50)]
    assert max(norms) - min(norms) > 0.1


def test_from_alpha_roundtrip():
    for alpha in (-1.4, -0.3, 0.0, 0.5, 1.2):
        p = pt.PTParams.from_alpha(2.0, alpha)
        assert p.omega == pytest.approx(2.0)
        assert p.alpha == pytest.approx(alpha, abs=1e-12)
        assert p.r >= 0


@given(unbroken_params())
def test_spin_flip_time_matches_scan(p):
    tau = pt.spin_flip_time(p)
    assert pt.spin_flip_scan(p) == pytest.approx(tau, abs=1e-9)
    out = pt.pt_evolve(p, UP, tau)
    assert abs(out[0]) < 1e-10 * np.linalg.norm(out)


def test_spin_flip_branches():
    omega = 1.0
    fast = pt.PTParams.from_alpha(omega, -0.6)
    slow = pt.PTParams.from_alpha(omega, 0.6)
    assert pt.spin_flip_time(fast) == pytest.approx(math.pi - 1.2)
    assert pt.spin_flip_time(slow) == pytest.approx(math.pi + 1.2)
    assert pt.spin_flip_time(pt.PTParams(0.0, 0.5, 0.0)) == pytest.approx(math.pi)


def test_spin_flip_saturates_cpt_distance_bound():
    for alpha in np.linspace(-1.5, 0.0, 16):
        p = pt.PTParams.from_alpha(1.0, alpha)
        frame = pt.c_operator(p)
        bound = pt.cpt_fs_distance(UP, DOWN, frame) / p.omega
        assert bound == pytest.approx(math.pi - 2 * abs(alpha), abs=1e-12)
        assert pt.spin_flip_time(p) >= bound - 1e-12


def test_spin_flip_time_vanishes_towards_boundary():
    taus = [pt.spin_flip_time(pt.PTParams.from_alpha(1.0, -a))
            for a in np.linspace(0, math.pi / 2 - 1e-3, 50)]
    assert all(b < a for a, b in zip(taus, taus[1:]))
    assert taus[-1] < 0.01 * math.pi


@given(unbroken_params())
def test_hermitian_equivalent(p):
    eq = pt.hermitian_equivalent(p)
    res = pt.equivalence_residuals(p, eq)
    assert max(res.values()) < 1e-11
    np.testing.assert_allclose(eq.exp_half_q @ eq.exp_minus_half_q, np.eye(2), atol=1e-12)
    np.testing.assert_allclose(scipy.linalg.expm(eq.Q), pt.c_operator(p).C @ pt.PARITY,
                               atol=1e-11)


@given(unbroken_params(), states2())
def test_equivalence_maps_cpt_norm_to_dirac_norm(p, psi):
    eq = pt.hermitian_equivalent(p)
    frame = pt.c_operator(p)
    image = eq.exp_minus_half_q @ psi
    assert np.vdot(image, image).real == pytest.approx(pt.cpt_inner(psi, psi, frame).real,
                                                       rel=1e-11)
    t = 1.3
    lhs = eq.exp_minus_half_q @ pt.pt_evolve(p, psi, t)
    rhs = scipy.linalg.expm(-1j * eq.H_tilde * t) @ image
    np.testing.assert_allclose(lhs, rhs, atol=1e-10)


def test_hermitian_limit_is_identity_map():
    p = pt.PTParams(0.7, 1.0, 0.0)  # real symmetric matrix, alpha = 0
    eq = pt.hermitian_equivalent(p)
    np.testing.assert_allclose(eq.Q, 0, atol=1e-14)
    np.testing.assert_allclose(eq.H_tilde, p.matrix(), atol=1e-14)


def test_random_unbroken_params_stay_inside(rng):
    for _ in range(200):
        p = pt.random_unbroken_params(rng)
        assert p.unbroken and abs(p.alpha) <= 1.3 + 1e-12
        assert isinstance(p.r, float)


def test_effective_field_reconstructs_matrix():
    p = pt.PTParams(0.4, -0.9, 2.2)
    c = pt.effective_field(p)
    m = p.r * math.cos(p.theta) * np.eye(2) + np.tensordot(c, linalg.PAULI, axes=1)
    np.testing.assert_allclose(m, p.matrix(), atol=1e-15)
