"""Four-dimensional Hermitian/unitary embeddings of PT-symmetric 2x2 dynamics.

Two constructions:

* ``unitary_dilation`` rescales the propagator to a contraction V(t) and
  completes it to the 4x4 unitary [[V, (1 - VV^+)^(1/2)], [(1 - V^+V)^(1/2), -V^+]].
  Projecting onto the first two components reproduces the PT ray exactly.
* ``fixed_dilation_hamiltonian`` lifts the four normalised eigenvectors of H
  and H^+ to an orthonormal basis of C^4 (Naimark completion) and uses them as
  eigenvectors of a fixed Hermitian H4. Whether its projected motion follows
  the PT evolution is measured, not assumed.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np
from scipy.optimize import nnls

from .config import resolve_hbar
from .errors import CompletionFailure
from .linalg import as_state, dagger, eig2, mat_exp2, mat_exp4, ray_fidelity
from .pt import PTParams, pt_eigensystem, pt_evolve

CLIP = 1e-12


def embed(psi) -> np.ndarray:
    psi = as_state(psi, 2)
    return np.concatenate([psi, np.zeros(2, dtype=complex)])


def project(psi4) -> np.ndarray:
    return np.asarray(psi4, dtype=complex)[:2]


def auxiliary(psi4) -> np.ndarray:
    return np.asarray(psi4, dtype=complex)[2:]


@dataclass(frozen=True)
class Frame4:
    vectors: np.ndarray  # (4, 2): rows are unit eigenvectors of H (+, -) then of H^+ (+, -)
    eigenvalues: np.ndarray  # matching eigenvalue of each row
    frame_operator: np.ndarray
    tightness: float  # max |F - (tr F / 2) 1|

    @property
    def gram(self) -> np.ndarray:
        return self.vectors.conj() @ self.vectors.T


def _unit(v: np.ndarray) -> np.ndarray:
    return v / np.linalg.norm(v)


def povm_frame(p: PTParams) -> Frame4:
    """Normalised eigenvectors of H and of H^+ and their frame operator."""
    eig = pt_eigensystem(p)
    adj = eig2(dagger(p.matrix()))
    # H^+ has the conjugate (here identical, real) spectrum; match by value
    lookup = {}
    for lam, vec in zip(adj.values, adj.vectors.T):
        target = "plus" if abs(lam - eig.e_plus) <= abs(lam - eig.e_minus) else "minus"
        lookup[target] = vec
    if len(lookup) != 2:
        raise CompletionFailure("could not pair the eigenvectors of H^dagger with those of H")
    vectors = np.array(
        [_unit(eig.v_plus), _unit(eig.v_minus), _unit(lookup["plus"]), _unit(lookup["minus"])]
    )
    eigenvalues = np.array([eig.e_plus, eig.e_minus, eig.e_plus, eig.e_minus])
    frame_op = vectors.T @ vectors.conj()
    tight = float(np.max(np.abs(frame_op - 0.5 * np.trace(frame_op).real * np.eye(2))))
    return Frame4(vectors, eigenvalues, frame_op, tight)


@dataclass(frozen=True)
class DilationResult:
    """Output of either dilation variant. Exactly one of ``unitary4`` and
    ``hamiltonian4`` is set."""

    unitary4: np.ndarray | None = None
    hamiltonian4: np.ndarray | None = None
    contraction: np.ndarray | None = None
    sigma_max: float | None = None
    basis4: np.ndarray | None = None  # columns: orthonormal lifts of the frame
    weights: np.ndarray | None = None
    diagnostics: dict = field(default_factory=dict)

    embed = staticmethod(embed)
    project = staticmethod(project)


def unitary_dilation(p: PTParams, t: float, hbar: float | None = None) -> DilationResult:
    """4x4 unitary whose top-left block is exp(-iHt/hbar) / sigma_max.

    The defect blocks come from one SVD V = W S X^+, so that
    (1 - VV^+)^(1/2) = W (1 - S^2)^(1/2) W^+ and (1 - V^+V)^(1/2) = X (1 - S^2)^(1/2) X^+
    intertwine exactly and the largest singular value is exactly 1.
    """
    p.require_unbroken()
    prop = mat_exp2(p.matrix(), t, hbar)
    w, s, xh = np.linalg.svd(prop)
    sigma_max = float(s[0])
    s = s / sigma_max
    s[0] = 1.0
    defect = np.sqrt(np.clip(1.0 - s * s, 0.0, None))
    x = dagger(xh)
    v = (w * s) @ xh
    top_right = (w * defect) @ dagger(w)
    bottom_left = (x * defect) @ xh
    u4 = np.block([[v, top_right], [bottom_left, -dagger(v)]])
    return DilationResult(unitary4=u4, contraction=v, sigma_max=sigma_max)


def dilated_state(p: PTParams, psi, t: float, hbar: float | None = None) -> np.ndarray:
    return unitary_dilation(p, t, hbar).unitary4 @ embed(psi)


def _tight_weights(vectors: np.ndarray, tol: float) -> np.ndarray:
    """Non-negative w_k with sum_k w_k |f_k><f_k| = 1."""
    frame_op = vectors.T @ vectors.conj()
    c = 0.5 * np.trace(frame_op).real
    if np.max(np.abs(frame_op - c * np.eye(2))) <= tol * c:
        return np.full(len(vectors), 1.0 / c)
    # real linear system over the four real parameters of a 2x2 Hermitian matrix
    cols = []
    for f in vectors:
        proj = np.outer(f, f.conj())
        cols.append([proj[0, 0].real, proj[1, 1].real, proj[0, 1].real, proj[0, 1].imag])
    a = np.array(cols).T
    weights, residual = nnls(a, np.array([1.0, 1.0, 0.0, 0.0]))
    if residual > tol:
        raise CompletionFailure(
            f"frame admits no weighting that resolves the identity (residual {residual:.3e})"
        )
    return weights


def naimark_completion(vectors: np.ndarray, tol: float = 1e-10,
                       clip: float = CLIP) -> tuple[np.ndarray, np.ndarray]:
    """Orthonormal basis of C^4 whose top halves are sqrt(w_k) f_k.

    The 2x4 matrix G = [sqrt(w_k) f_k] has orthonormal rows; the lower block is
    taken from the unit eigenspace of 1 - G^+ G (eigenvalues below ``clip``
    clipped to 0). Returns (W, weights) with the lifts as columns of W.
    """
    weights = _tight_weights(vectors, tol)
    g = (vectors * np.sqrt(weights)[:, None]).T
    resid = np.eye(4) - dagger(g) @ g
    resid = 0.5 * (resid + dagger(resid))
    lam, vecs = np.linalg.eigh(resid)
    lam = np.where(np.abs(lam) < clip, 0.0, lam)
    keep = np.abs(lam - 1.0) <= np.sqrt(tol)
    if np.count_nonzero(keep) != 2 or np.any((lam > clip) & ~keep):
        raise CompletionFailure(f"1 - G^+G is not a rank-2 projector (eigenvalues {lam})")
    lower = dagger(vecs[:, keep])
    basis = np.vstack([g, lower])
    if np.max(np.abs(dagger(basis) @ basis - np.eye(4))) > tol:
        raise CompletionFailure("completed basis is not orthonormal within tolerance")
    return basis, weights


def fixed_dilation_hamiltonian(p: PTParams, eigenvalue_assignment=None,
                               t_grid=None, hbar: float | None = None,
                               tol: float = 1e-10) -> DilationResult:
    """Hermitian H4 = sum_k lambda_k |w_k><w_k| over the Naimark lifts of the
    H / H^+ eigenvector frame, with a fidelity profile of its projected motion
    against the PT evolution of (1, 0)."""
    hbar = resolve_hbar(hbar)
    frame = povm_frame(p)
    lam = frame.eigenvalues if eigenvalue_assignment is None else np.asarray(
        eigenvalue_assignment, dtype=float)
    if lam.shape != (4,):
        raise ValueError("eigenvalue assignment needs four values")
    basis, weights = naimark_completion(frame.vectors, tol=tol)
    h4 = (basis * lam) @ dagger(basis)
    h4 = 0.5 * (h4 + dagger(h4))

    if t_grid is None:
        t_grid = np.linspace(0.0, 2 * np.pi * hbar / p.omega, 101)
    start = np.array([1.0, 0.0], dtype=complex)
    fidelities = []
    for t in t_grid:
        lifted = project(mat_exp4(h4, t, hbar) @ embed(start))
        target = pt_evolve(p, start, t, hbar)
        fidelities.append(ray_fidelity(lifted, target) if np.linalg.norm(lifted) > 0 else 0.0)
    diagnostics = {
        "t": np.asarray(t_grid, dtype=float),
        "fidelity": np.array(fidelities),
        "frame_tightness": frame.tightness,
    }
    return DilationResult(hamiltonian4=h4, basis4=basis, weights=weights, diagnostics=diagnostics)
