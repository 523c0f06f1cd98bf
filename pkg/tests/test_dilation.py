import math

import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st

from ptbrach import dilation, linalg, pt
from ptbrach.errors import BrokenPTError, CompletionFailure
from strategies import states2, unbroken_params


@given(unbroken_params(), st.floats(min_value=0, max_value=20), states2())
def test_unitary_dilation_reproduces_ray(p, t, psi):
    res = dilation.unitary_dilation(p, t)
    assert linalg.unitarity_residual(res.unitary4) < 1e-12
    out = res.unitary4 @ dilation.embed(psi)
    target = pt.pt_evolve(p, psi, t)
    assert linalg.ray_fidelity(dilation.project(out), target) > 1 - 1e-10
    deficit = 1 - np.linalg.norm(res.contraction @ psi) ** 2
    assert np.linalg.norm(dilation.auxiliary(out)) ** 2 == pytest.approx(deficit, abs=1e-10)


@given(unbroken_params(), st.floats(min_value=0, max_value=20))
def test_contraction_is_rescaled_propagator(p, t):
    res = dilation.unitary_dilation(p, t)
    prop = linalg.mat_exp2(p.matrix(), t)
    np.testing.assert_allclose(res.contraction * res.sigma_max, prop, atol=1e-11 * res.sigma_max)
    assert np.linalg.norm(res.contraction, 2) == pytest.approx(1.0, abs=1e-12)
    assert res.sigma_max == pytest.approx(np.linalg.norm(prop, 2), rel=1e-12)


def test_unitary_dilation_at_zero_is_identity():
    res = dilation.unitary_dilation(pt.PTParams(0.3, 1.0, 1.0), 0.0)
    np.testing.assert_allclose(res.unitary4[:2, :2], np.eye(2), atol=1e-15)
    np.testing.assert_allclose(res.unitary4[:2, 2:], 0, atol=1e-7)


def test_hermitian_case_needs_no_auxiliary_space():
    p = pt.PTParams(0.5, 1.0, 0.0)
    res = dilation.unitary_dilation(p, 2.0)
    assert res.sigma_max == pytest.approx(1.0)
    np.testing.assert_allclose(res.unitary4[:2, 2:], 0, atol=1e-7)


def test_dilation_refuses_broken_parameters():
    with pytest.raises(BrokenPTError):
        dilation.unitary_dilation(pt.PTParams(3.0, 1.0, 1.2), 1.0)


@given(unbroken_params())
def test_povm_frame_is_tight(p):
    frame = dilation.povm_frame(p)
    np.testing.assert_allclose(frame.frame_operator, 2 * np.eye(2), atol=1e-12)
    assert frame.tightness < 1e-12
    np.testing.assert_allclose(np.diag(frame.gram).real, 1.0, atol=1e-14)


@given(unbroken_params())
def test_naimark_completion_is_orthonormal(p):
    frame = dilation.povm_frame(p)
    basis, weights = dilation.naimark_completion(frame.vectors)
    np.testing.assert_allclose(weights, 0.5, atol=1e-12)
    np.testing.assert_allclose(basis.conj().T @ basis, np.eye(4), atol=1e-12)
    np.testing.assert_allclose(basis[:2].T, np.sqrt(weights)[:, None] * frame.vectors, atol=1e-14)


def test_naimark_completion_with_uneven_weights():
    # three unit vectors at 0, 45 and 90 degrees: no equal weighting resolves 1
    vectors = np.array([[1, 0], [1 / math.sqrt(2), 1 / math.sqrt(2)], [0, 1]], dtype=complex)
    weights = dilation._tight_weights(vectors, 1e-10)
    np.testing.assert_allclose((vectors.T * weights) @ vectors.conj(), np.eye(2), atol=1e-10)


def test_naimark_completion_failure():
    vectors = np.array([[1, 0], [1, 0]], dtype=complex)
    with pytest.raises(CompletionFailure):
        dilation.naimark_completion(vectors)


@given(unbroken_params())
def test_fixed_dilation_hamiltonian(p):
    res = dilation.fixed_dilation_hamiltonian(p, t_grid=np.linspace(0, 3, 7))
    h4 = res.hamiltonian4
    assert linalg.hermiticity_residual(h4) < 1e-12
    np.testing.assert_allclose(np.linalg.eigvalsh(h4),
                               np.sort(dilation.povm_frame(p).eigenvalues), atol=1e-10)
    fid = res.diagnostics["fidelity"]
    assert fid[0] == pytest.approx(1.0)
    assert np.all((fid >= -1e-12) & (fid <= 1 + 1e-12))


def test_fixed_dilation_default_grid_and_custom_eigenvalues():
    p = pt.PTParams.from_alpha(1.0, 0.4)
    res = dilation.fixed_dilation_hamiltonian(p)
    assert len(res.diagnostics["t"]) == 101
    assert res.diagnostics["t"][-1] == pytest.approx(2 * math.pi / p.omega)
    custom = dilation.fixed_dilation_hamiltonian(p, [1.0, -1.0, 2.0, -2.0], t_grid=[0.0])
    np.testing.assert_allclose(np.linalg.eigvalsh(custom.hamiltonian4), [-2, -1, 1, 2], atol=1e-12)
    with pytest.raises(ValueError):
        dilation.fixed_dilation_hamiltonian(p, [1.0, 2.0])


def test_fixed_dilation_is_exact_in_hermitian_limit():
    p = pt.PTParams(0.5, 1.0, 0.0)
    fid = dilation.fixed_dilation_hamiltonian(p).diagnostics["fidelity"]
    np.testing.assert_allclose(fid, 1.0, atol=1e-12)
