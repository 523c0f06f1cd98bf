"""Small dense complex linear algebra (2x2 and 4x4).

Matrices and state vectors are plain ``numpy`` complex arrays. The 2x2 routines
use closed forms built on the Pauli decomposition ``M = c0*1 + c.sigma``.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import NamedTuple

import numpy as np
import scipy.linalg

from .config import resolve_hbar
from .errors import ZeroVectorError

IDENTITY2 = np.eye(2, dtype=complex)
SIGMA_X = np.array([[0, 1], [1, 0]], dtype=complex)
SIGMA_Y = np.array([[0, -1j], [1j, 0]], dtype=complex)
SIGMA_Z = np.array([[1, 0], [0, -1]], dtype=complex)
PAULI = np.stack([SIGMA_X, SIGMA_Y, SIGMA_Z])

DEGENERATE_TOL = 1e-12


def as_matrix(m, dim: int | None = None) -> np.ndarray:
    arr = np.asarray(m, dtype=complex)
    if arr.ndim != 2 or arr.shape[0] != arr.shape[1]:
        raise ValueError(f"expected a square matrix, got shape {arr.shape}")
    if dim is not None and arr.shape[0] != dim:
        raise ValueError(f"expected a {dim}x{dim} matrix, got shape {arr.shape}")
    if not np.all(np.isfinite(arr)):
        raise ValueError("matrix has non-finite entries")
    return arr


def as_state(psi, dim: int | None = None) -> np.ndarray:
    arr = np.asarray(psi, dtype=complex).reshape(-1)
    if dim is not None and arr.shape[0] != dim:
        raise ValueError(f"expected a {dim}-component state, got {arr.shape[0]}")
    if not np.all(np.isfinite(arr)):
        raise ValueError("state has non-finite components")
    if not np.any(arr):
        raise ZeroVectorError("state vector is zero")
    return arr


def normalize(psi) -> np.ndarray:
    psi = as_state(psi)
    return psi / np.linalg.norm(psi)


def dagger(m: np.ndarray) -> np.ndarray:
    return np.conj(np.swapaxes(m, -1, -2))


def hermiticity_residual(m) -> float:
    m = np.asarray(m, dtype=complex)
    return float(np.max(np.abs(m - dagger(m))))


def is_hermitian(m, tol: float = 1e-13) -> bool:
    return hermiticity_residual(m) <= tol


def unitarity_residual(u) -> float:
    u = np.asarray(u, dtype=complex)
    return float(np.max(np.abs(dagger(u) @ u - np.eye(u.shape[-1]))))


def commutator(a: np.ndarray, b: np.ndarray) -> np.ndarray:
    return a @ b - b @ a


@dataclass(frozen=True)
class PauliDecomposition:
    trace_part: complex
    vector_part: np.ndarray  # coefficients of sigma_x, sigma_y, sigma_z

    def reconstruct(self) -> np.ndarray:
        return self.trace_part * IDENTITY2 + np.tensordot(self.vector_part, PAULI, axes=1)

    @property
    def squared_length(self) -> complex:
        """c.c without conjugation; its square root is half the eigenvalue gap."""
        return complex(np.sum(self.vector_part * self.vector_part))


def pauli_decompose(m) -> PauliDecomposition:
    m = as_matrix(m, 2)
    c0 = 0.5 * (m[0, 0] + m[1, 1])
    c = np.array(
        [
            0.5 * (m[0, 1] + m[1, 0]),
            0.5j * (m[0, 1] - m[1, 0]),
            0.5 * (m[0, 0] - m[1, 1]),
        ]
    )
    return PauliDecomposition(complex(c0), c)


def _cos_sinc_series(z2: complex, terms: int = 14) -> tuple[complex, complex]:
    # cos(z) and sin(z)/z as power series in z**2; exact branch-free near z = 0.
    cos_sum, sinc_sum = 0j, 0j
    cos_term, sinc_term = 1 + 0j, 1 + 0j
    for n in range(terms):
        cos_sum += cos_term
        sinc_sum += sinc_term
        cos_term *= -z2 / ((2 * n + 1) * (2 * n + 2))
        sinc_term *= -z2 / ((2 * n + 2) * (2 * n + 3))
    return cos_sum, sinc_sum


def mat_exp2(m, t: float, hbar: float | None = None) -> np.ndarray:
    """Propagator ``exp(-i M t / hbar)`` for a 2x2 matrix.

    Uses ``exp(-i tau (c0 + c.sigma)) = exp(-i c0 tau) [cos(k tau) - i sin(k tau)/k c.sigma]``
    with ``k = sqrt(c.c)``. For complex ``c`` the same identity holds by analytic
    continuation; it is even in ``k``, so the branch of the root does not matter.
    Small ``k tau`` switches to the power series, which also covers nilpotent
    (exceptional) matrices where ``c.c = 0``.
    """
    hbar = resolve_hbar(hbar)
    if not np.isfinite(t):
        raise ValueError("t must be finite")
    dec = pauli_decompose(m)
    tau = t / hbar
    z2 = dec.squared_length * tau * tau
    if abs(z2) < 1e-2:
        cos_part, sinc_part = _cos_sinc_series(z2)
    else:
        z = np.sqrt(z2)
        cos_part, sinc_part = np.cos(z), np.sin(z) / z
    generator = np.tensordot(dec.vector_part, PAULI, axes=1)
    return np.exp(-1j * dec.trace_part * tau) * (
        cos_part * IDENTITY2 - 1j * tau * sinc_part * generator
    )


class Eig2(NamedTuple):
    values: np.ndarray  # shape (2,), ascending real part
    vectors: np.ndarray  # columns are unit eigenvectors
    degenerate: bool


def eig2(m, tol: float = DEGENERATE_TOL) -> Eig2:
    """Closed-form eigenpairs of a 2x2 matrix.

    Eigenvalues are ``c0 -/+ sqrt(c.c)``. ``degenerate`` is set when they agree
    within ``tol`` times the Frobenius norm; for a defective matrix the two
    returned vectors then coincide.
    """
    m = as_matrix(m, 2)
    dec = pauli_decompose(m)
    k = np.sqrt(dec.squared_length)
    values = np.array([dec.trace_part - k, dec.trace_part + k])
    order = np.lexsort((values.imag, values.real))
    values = values[order]
    scale = np.linalg.norm(m)
    degenerate = bool(abs(values[1] - values[0]) <= tol * scale) if scale > 0 else True

    (a, b), (c, d) = m
    vectors = np.empty((2, 2), dtype=complex)
    for j, lam in enumerate(values):
        candidates = (np.array([b, lam - a]), np.array([lam - d, c]))
        v = max(candidates, key=np.linalg.norm)
        norm = np.linalg.norm(v)
        if norm <= tol * max(scale, 1.0):
            # m is (numerically) a multiple of the identity
            v = np.eye(2, dtype=complex)[j]
            norm = 1.0
        vectors[:, j] = v / norm
    return Eig2(values, vectors, degenerate)


def mat_exp4(m, t: float, hbar: float | None = None) -> np.ndarray:
    """Propagator ``exp(-i M t / hbar)`` for a 4x4 matrix.

    Hermitian input goes through ``eigh`` (exactly unitary up to rounding);
    anything else uses scaling-and-squaring Pade from scipy.
    """
    hbar = resolve_hbar(hbar)
    m = as_matrix(m, 4)
    if is_hermitian(m, 1e-14 * max(1.0, float(np.max(np.abs(m))))):
        herm = 0.5 * (m + dagger(m))
        w, v = np.linalg.eigh(herm)
        return (v * np.exp(-1j * w * t / hbar)) @ dagger(v)
    return scipy.linalg.expm(-1j * m * t / hbar)


def psd_sqrt(m: np.ndarray, clip: float = 1e-12) -> np.ndarray:
    """Square root of a Hermitian positive semidefinite matrix.

    Eigenvalues with magnitude below ``clip`` are set to zero.
    """
    herm = 0.5 * (m + dagger(m))
    w, v = np.linalg.eigh(herm)
    w = np.where(np.abs(w) < clip, 0.0, w)
    if np.any(w < 0):
        raise ValueError(f"matrix is not positive semidefinite (min eigenvalue {w.min():.3e})")
    return (v * np.sqrt(w)) @ dagger(v)


def ray_fidelity(a, b) -> float:
    """|<a|b>|^2 / (|a|^2 |b|^2): 1 when the two vectors span the same ray."""
    a = as_state(a)
    b = as_state(b)
    overlap = np.vdot(a, b)
    return float(abs(overlap) ** 2 / (np.vdot(a, a).real * np.vdot(b, b).real))


def same_ray(a, b, tol: float = 1e-10) -> bool:
    return ray_fidelity(a, b) >= 1.0 - tol
