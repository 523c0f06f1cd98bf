"""PT-symmetric 2x2 Hamiltonians H = [[r e^{i th}, s], [s, r e^{-i th}]].

In the unbroken region s^2 > r^2 sin^2(th) the spectrum is real, the angle
alpha with sin(alpha) = (r/s) sin(th) lies in (-pi/2, pi/2), and the gap is
omega = 2 |s| cos(alpha). T acts as complex conjugation and P swaps components.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .config import resolve_hbar
from .errors import BrokenPTError, NotPositiveError
from .linalg import (
    SIGMA_X,
    as_state,
    dagger,
    eig2,
    hermiticity_residual,
    mat_exp2,
)
from .scan import first_zero

PARITY = SIGMA_X.copy()
BOUNDARY_TOL = 1e-12
FIRST_COMPONENT = np.array([1.0, 0.0], dtype=complex)
SECOND_COMPONENT = np.array([0.0, 1.0], dtype=complex)


@dataclass(frozen=True)
class PTParams:
    r: float
    s: float
    theta: float

    @property
    def discriminant(self) -> float:
        """s^2 - r^2 sin^2(theta); positive exactly in the unbroken region."""
        return self.s ** 2 - (self.r * math.sin(self.theta)) ** 2

    @property
    def unbroken(self) -> bool:
        return self.discriminant > BOUNDARY_TOL * max(self.s ** 2, 1e-300)

    def require_unbroken(self) -> "PTParams":
        scale = max(self.s ** 2, (self.r * math.sin(self.theta)) ** 2)
        disc = self.discriminant
        if abs(disc) <= BOUNDARY_TOL * scale:
            raise BrokenPTError(
                f"exceptional point: s^2 = r^2 sin^2(theta) for {self}", tag="EXCEPTIONAL"
            )
        if disc < 0:
            raise BrokenPTError(f"PT symmetry is broken (s^2 < r^2 sin^2(theta)) for {self}")
        return self

    @property
    def sin_alpha(self) -> float:
        self.require_unbroken()
        return self.r * math.sin(self.theta) / self.s

    @property
    def alpha(self) -> float:
        return math.asin(self.sin_alpha)

    @property
    def cos_alpha(self) -> float:
        self.require_unbroken()
        return math.sqrt(self.discriminant) / abs(self.s)

    @property
    def omega(self) -> float:
        self.require_unbroken()
        return 2.0 * math.sqrt(self.discriminant)

    def matrix(self) -> np.ndarray:
        d = self.r * np.exp(1j * self.theta)
        return np.array([[d, self.s], [self.s, np.conj(d)]], dtype=complex)

    @classmethod
    def from_alpha(cls, omega: float, alpha: float, theta: float = -math.pi / 2) -> "PTParams":
        """Unbroken parameters with gap ``omega`` and the given alpha, s > 0.

        r is taken from sin(alpha) = (r/s) sin(theta); if that makes r negative,
        theta is reflected so that r >= 0. The default theta = -pi/2 gives the
        fast spin-flip branch for alpha < 0.
        """
        if not abs(alpha) < math.pi / 2:
            raise BrokenPTError(f"|alpha| must be < pi/2, got {alpha}")
        s = omega / (2.0 * math.cos(alpha))
        sin_t = math.sin(theta)
        if sin_t == 0.0:
            if alpha != 0.0:
                raise ValueError("theta with sin(theta) = 0 only gives alpha = 0")
            return cls(0.0, s, theta)
        r = s * math.sin(alpha) / sin_t
        if r < 0:
            theta = -theta
        return cls(abs(r), s, theta)


def effective_field(p: PTParams) -> np.ndarray:
    """Complex field (s, 0, i r sin(theta)) multiplying sigma in H."""
    return np.array([p.s, 0.0, 1j * p.r * math.sin(p.theta)], dtype=complex)


@dataclass(frozen=True)
class PTEigensystem:
    e_plus: float
    e_minus: float
    v_plus: np.ndarray
    v_minus: np.ndarray
    alpha: float


def pt_eigensystem(p: PTParams) -> PTEigensystem:
    """Real eigenvalues r cos(th) +/- sqrt(s^2 - r^2 sin^2 th) and the
    unnormalised eigenvectors (e^{ia/2}, e^{-ia/2}) and (i e^{-ia/2}, -i e^{ia/2}).

    The first vector has eigenvalue r cos(th) + s cos(a); for s < 0 it is
    therefore the lower level and the labels are swapped.
    """
    p.require_unbroken()
    a = p.alpha
    half = np.exp(0.5j * a)
    u = np.array([half, np.conj(half)])
    w = np.array([1j * np.conj(half), -1j * half])
    root = math.sqrt(p.discriminant)
    centre = p.r * math.cos(p.theta)
    if p.s > 0:
        return PTEigensystem(centre + root, centre - root, u, w, a)
    return PTEigensystem(centre + root, centre - root, w, u, a)


@dataclass(frozen=True)
class CPTFrame:
    C: np.ndarray
    P: np.ndarray
    alpha: float

    @property
    def metric(self) -> np.ndarray:
        """Gram matrix G of the CPT inner product, <a|b> = a^dagger G b; G = (CP)^T = PC."""
        return (self.C @ self.P).T


def c_operator(p: PTParams) -> CPTFrame:
    a = p.alpha
    cos_a, sin_a = math.cos(a), math.sin(a)
    c = np.array([[1j * sin_a, 1.0], [1.0, -1j * sin_a]], dtype=complex) / cos_a
    return CPTFrame(C=c, P=PARITY.copy(), alpha=a)


def c_operator_residuals(p: PTParams, frame: CPTFrame | None = None) -> dict[str, float]:
    """Max-abs residuals of C^2 = 1, [C, H] = 0 and [C, PT] = 0.

    [C, PT] acts on x as C P x* - P (C x)*, so it vanishes iff C P = P C*.
    """
    frame = frame or c_operator(p)
    c, par, h = frame.C, frame.P, p.matrix()
    return {
        "C2_minus_1": float(np.max(np.abs(c @ c - np.eye(2)))),
        "C_H": float(np.max(np.abs(c @ h - h @ c))),
        "C_PT": float(np.max(np.abs(c @ par - par @ np.conj(c)))),
    }


def cpt_inner(a, b, frame: CPTFrame) -> complex:
    """<a|b> = (C P a*)^T b."""
    a = np.asarray(a, dtype=complex)
    b = np.asarray(b, dtype=complex)
    cpt_a = frame.C @ (frame.P @ np.conj(a))
    return complex(cpt_a @ b)


def cpt_norm(a, frame: CPTFrame) -> float:
    return math.sqrt(cpt_inner(a, a, frame).real)


def cpt_fs_distance(a, b, frame: CPTFrame) -> float:
    """Fubini-Study distance between two rays measured with the CPT inner product."""
    overlap = abs(cpt_inner(a, b, frame))
    norms = math.sqrt(cpt_inner(a, a, frame).real * cpt_inner(b, b, frame).real)
    return 2.0 * math.acos(min(1.0, overlap / norms))


def pt_evolve(p: PTParams, psi, t: float, hbar: float | None = None) -> np.ndarray:
    p.require_unbroken()
    return mat_exp2(p.matrix(), t, hbar) @ as_state(psi, 2)


def pt_evolve_up(p: PTParams, t, hbar: float | None = None) -> np.ndarray:
    """Closed-form evolution of (1, 0); rows are time points.

    exp(-i t r cos th / hbar) / cos a * (cos(x - sgn(s) a), -i sgn(s) sin x),
    with x = omega t / (2 hbar). For s > 0 this is the familiar
    (cos(x - a), -i sin x) form.
    """
    hbar = resolve_hbar(hbar)
    p.require_unbroken()
    t = np.asarray(t, dtype=float)
    sign = 1.0 if p.s > 0 else -1.0
    a = p.alpha
    x = p.omega * t / (2 * hbar)
    phase = np.exp(-1j * t * p.r * math.cos(p.theta) / hbar) / math.cos(a)
    return np.stack([phase * np.cos(x - sign * a), -1j * sign * phase * np.sin(x)], axis=-1)


def spin_flip_time(p: PTParams, hbar: float | None = None) -> float:
    """First t > 0 at which the evolved (1, 0) is proportional to (0, 1).

    The first component vanishes when x - sgn(s) a = pi/2, giving
    t = (pi + 2 sgn(s) a) hbar / omega; this is (pi - 2|a|) hbar / omega when
    sgn(s) a < 0 and tends to zero as |a| -> pi/2 at fixed omega.
    """
    hbar = resolve_hbar(hbar)
    p.require_unbroken()
    sign = 1.0 if p.s > 0 else -1.0
    return (math.pi + 2.0 * sign * p.alpha) * hbar / p.omega


@dataclass(frozen=True)
class EquivalenceMap:
    Q: np.ndarray
    H_tilde: np.ndarray
    exp_half_q: np.ndarray
    exp_minus_half_q: np.ndarray


def hermitian_equivalent(p: PTParams, tol: float = 1e-12) -> EquivalenceMap:
    """Q = log(CP) and the isospectral Hermitian H~ = e^{-Q/2} H e^{Q/2}.

    CP is Hermitian positive in the unbroken region, so every function of it is
    taken through its eigendecomposition (principal logarithm, real spectrum).
    """
    frame = c_operator(p)
    cp = frame.C @ frame.P
    cp = 0.5 * (cp + dagger(cp))
    w, v = np.linalg.eigh(cp)
    if w.min() <= tol * max(1.0, w.max()):
        raise NotPositiveError(f"CP is not positive definite (eigenvalues {w})")
    vh = dagger(v)
    q = (v * np.log(w)) @ vh
    up = (v * np.sqrt(w)) @ vh
    down = (v / np.sqrt(w)) @ vh
    h_tilde = down @ p.matrix() @ up
    return EquivalenceMap(Q=q, H_tilde=h_tilde, exp_half_q=up, exp_minus_half_q=down)


def equivalence_residuals(p: PTParams, eq: EquivalenceMap | None = None) -> dict[str, float]:
    eq = eq or hermitian_equivalent(p)
    h = p.matrix()
    eig_h = eig2(h).values
    eig_ht = eig2(eq.H_tilde).values
    return {
        "hermiticity": hermiticity_residual(eq.H_tilde),
        "spectrum": float(np.max(np.abs(eig_h - eig_ht))),
        "round_trip": float(np.max(np.abs(eq.exp_half_q @ eq.H_tilde @ eq.exp_minus_half_q - h))),
    }


def spin_flip_scan(p: PTParams, n_steps: int = 20_000, hbar: float | None = None) -> float | None:
    """Independent estimate of the spin-flip time: first zero of the first
    component of exp(-iHt/hbar)(1, 0), located on a dense grid and refined by
    root bracketing. The propagator here comes from a LAPACK eigendecomposition,
    not from the closed forms used elsewhere in this module."""
    hbar = resolve_hbar(hbar)
    p.require_unbroken()
    lam, vecs = np.linalg.eig(p.matrix())
    coeff = np.linalg.solve(vecs, FIRST_COMPONENT)
    row = vecs[0] * coeff
    t_max = 2.1 * math.pi * hbar / p.omega

    def first_component(ts):
        ts = np.atleast_1d(np.asarray(ts, dtype=float))
        return np.exp(-1j * np.outer(ts, lam) / hbar) @ row

    return first_zero(first_component, t_max, n_steps, threshold=0.5)


def random_unbroken_params(rng: np.random.Generator, alpha_max: float = 1.3,
                           s_range: tuple[float, float] = (0.3, 3.0)) -> PTParams:
    """Random parameters strictly inside the unbroken region (|alpha| <= alpha_max)."""
    alpha = float(rng.uniform(-alpha_max, alpha_max))
    s = float(rng.uniform(*s_range) * rng.choice([-1.0, 1.0]))
    theta = float(rng.uniform(-math.pi, math.pi))
    if abs(math.sin(theta)) < 0.1:
        theta = math.copysign(0.1, theta) + theta
    r = s * math.sin(alpha) / math.sin(theta)
    if r < 0:
        r, theta = -r, (theta + 2 * math.pi) % (2 * math.pi) - math.pi
    return PTParams(r, s, theta)
