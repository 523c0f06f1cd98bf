"""Hermitian quantum brachistochrone on a two-level system.

Distances are Fubini-Study (Bloch-sphere) angles; times carry hbar from
:mod:`ptbrach.config` unless passed explicitly.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction

import numpy as np

from .config import resolve_hbar
from .errors import BadGapError, BadSpecError, ParallelStatesError, UnreachableError
from .linalg import IDENTITY2, as_matrix, as_state, dagger, mat_exp2, normalize
from .scan import first_zero

PARALLEL_TOL = 1e-12


def _check_gap(omega: float) -> float:
    omega = float(omega)
    if not (np.isfinite(omega) and omega > 0):
        raise BadGapError(f"energy gap must be positive, got {omega}")
    return omega


def _split_overlap(psi1, psi2) -> tuple[complex, float]:
    """Overlap <psi1|psi2> of the normalised states and the length of the part
    of psi2 orthogonal to psi1 (computed directly, not as sqrt(1 - |a|^2))."""
    u = normalize(psi1)
    v = normalize(psi2)
    a = np.vdot(u, v)
    b = float(np.linalg.norm(v - a * u))
    return complex(a), b


def fs_distance(psi1, psi2) -> float:
    """Fubini-Study distance ``2 arccos(|<1|2>| / (|1| |2|))``, in [0, pi].

    Evaluated as ``2 atan2(|b|, |a|)`` so that nearby states keep full precision.
    """
    a, b = _split_overlap(psi1, psi2)
    return 2.0 * math.atan2(b, abs(a))


def bloch_angles(psi) -> tuple[float, float]:
    """Polar and azimuthal angles of the ray, in the form (cos(th/2), sin(th/2) e^{i phi}).

    At the poles the azimuth is reported as 0.
    """
    psi = normalize(psi)
    theta = 2.0 * math.atan2(abs(psi[1]), abs(psi[0]))
    if abs(psi[0]) == 0.0 or abs(psi[1]) == 0.0:
        return theta, 0.0
    phi = float(np.angle(psi[1]) - np.angle(psi[0])) % (2 * math.pi)
    return theta, phi


def bloch_vector(theta: float, phi: float) -> np.ndarray:
    return np.array(
        [math.sin(theta) * math.cos(phi), math.sin(theta) * math.sin(phi), math.cos(theta)]
    )


def great_circle_distance(angles1, angles2) -> float:
    n1 = bloch_vector(*angles1)
    n2 = bloch_vector(*angles2)
    return math.atan2(float(np.linalg.norm(np.cross(n1, n2))), float(np.dot(n1, n2)))


@dataclass(frozen=True)
class HermitianParams:
    """H = [[s, r e^{-i theta}], [r e^{i theta}, u]] with r >= 0."""

    r: float
    s: float
    u: float
    theta: float

    def __post_init__(self):
        if self.r < 0:
            raise ValueError(f"r must be non-negative, got {self.r}")

    @property
    def omega(self) -> float:
        return math.hypot(self.s - self.u, 2 * self.r)

    def matrix(self) -> np.ndarray:
        off = self.r * np.exp(-1j * self.theta)
        return np.array([[self.s, off], [np.conj(off), self.u]], dtype=complex)


@dataclass(frozen=True)
class BrachistochroneSolution:
    hamiltonian: np.ndarray
    e_plus: np.ndarray
    e_minus: np.ndarray
    gap: float
    min_time: float
    distance: float


def optimal_hamiltonian(psi_i, psi_f, omega: float, hbar: float | None = None
                        ) -> BrachistochroneSolution:
    """Trace-free Hamiltonian with gap ``omega`` that moves ``psi_i`` onto ``psi_f``
    along the Bloch-sphere geodesic.

    With ``alpha = s_min / 2`` the two states are written as equal superpositions
    ``(|E-> + e^{+i alpha}|E+>)/sqrt2`` and ``(|E-> + e^{-i alpha}|E+>)/sqrt2``;
    ``psi_f`` is rephased so that ``<psi_i|psi_f> = e^{-i alpha} cos(alpha)``.
    This pairing makes ``exp(-iHt/hbar)`` traverse the short arc, reaching
    ``psi_f`` at ``t = s_min hbar / omega``. Antipodal inputs are handled by the
    same formulas at ``alpha = pi/2`` (one of infinitely many geodesics).
    """
    hbar = resolve_hbar(hbar)
    omega = _check_gap(omega)
    psi_i = normalize(psi_i)
    psi_f = normalize(psi_f)
    a, b = _split_overlap(psi_i, psi_f)
    if b <= PARALLEL_TOL:
        raise ParallelStatesError("initial and final states are the same ray")
    alpha = math.atan2(b, abs(a))
    if abs(a) > 0:
        psi_f = psi_f * np.exp(-1j * alpha) * abs(a) / a

    sin_a = math.sin(alpha)
    e_minus = (1j / (math.sqrt(2) * sin_a)) * (
        np.exp(-1j * alpha) * psi_i - np.exp(1j * alpha) * psi_f
    )
    e_plus = (1j / (math.sqrt(2) * sin_a)) * (psi_f - psi_i)
    h = 0.5 * omega * (np.outer(e_plus, e_plus.conj()) - np.outer(e_minus, e_minus.conj()))
    h = 0.5 * (h + dagger(h))
    distance = 2 * alpha
    return BrachistochroneSolution(
        hamiltonian=h,
        e_plus=e_plus,
        e_minus=e_minus,
        gap=omega,
        min_time=distance * hbar / omega,
        distance=distance,
    )


def evolve(h, psi, t: float, hbar: float | None = None) -> np.ndarray:
    return mat_exp2(h, t, hbar) @ as_state(psi, 2)


def expectation(h, psi) -> complex:
    psi = as_state(psi)
    return complex(np.vdot(psi, h @ psi) / np.vdot(psi, psi).real)


def mean_adjusted(h, psi) -> np.ndarray:
    h = as_matrix(h, 2)
    return h - expectation(h, psi) * IDENTITY2


def energy_uncertainty(h, psi) -> float:
    """Delta H = |(H - <H>) psi| for normalised psi and Hermitian H."""
    h = as_matrix(h)
    psi = normalize(psi)
    shifted = h @ psi - expectation(h, psi) * psi
    return float(np.linalg.norm(shifted))


def aa_speed(h, psi, hbar: float | None = None) -> float:
    """Fubini-Study speed ``ds/dt = 2 Delta H / hbar``."""
    return 2.0 * energy_uncertainty(h, psi) / resolve_hbar(hbar)


def passage_time(omega: float, hbar: float | None = None) -> float:
    return math.pi * resolve_hbar(hbar) / _check_gap(omega)


def variational_time(params: HermitianParams, b_mag: float, hbar: float | None = None) -> float:
    """First time at which ``H(params)`` carries (1, 0) to a state whose second
    component has modulus ``b_mag``: ``(2 hbar/omega) arcsin(omega b / 2r)``."""
    hbar = resolve_hbar(hbar)
    if not 0.0 <= b_mag <= 1.0:
        raise ValueError(f"b_mag must lie in [0, 1], got {b_mag}")
    if b_mag == 0.0:
        return 0.0
    omega = params.omega
    if params.r <= 0 or omega <= 0:
        raise UnreachableError("H is diagonal and never rotates (1, 0)")
    arg = omega * b_mag / (2 * params.r)
    if arg > 1.0:
        if arg - 1.0 > 1e-14:
            raise UnreachableError(f"|b| = {b_mag} unreachable: arcsin argument {arg:.6g} > 1")
        arg = 1.0
    return 2.0 * hbar / omega * math.asin(arg)


def min_time(psi_i, psi_f, omega: float, hbar: float | None = None) -> float:
    """``tau = 2 hbar arcsin|b| / omega`` with ``b`` the component of psi_f
    orthogonal to psi_i (arcsin|b| evaluated as atan2(|b|, |a|))."""
    hbar = resolve_hbar(hbar)
    omega = _check_gap(omega)
    a, b = _split_overlap(psi_i, psi_f)
    return 2.0 * hbar * math.atan2(b, abs(a)) / omega


# --- three-level constrained evolution -------------------------------------


@dataclass(frozen=True)
class ThreeLevelSpec:
    omega_ji: float
    omega_ki: float
    alpha: float = math.pi / 4
    beta: float = math.pi / 4
    phi: float = 0.0
    varphi: float = 0.0

    def __post_init__(self):
        if not (self.omega_ji > 0 and self.omega_ki >= self.omega_ji):
            raise BadSpecError(
                f"need omega_ki >= omega_ji > 0, got omega_ji={self.omega_ji}, "
                f"omega_ki={self.omega_ki}"
            )

    @property
    def weights(self) -> np.ndarray:
        ca, sa = math.cos(self.alpha), math.sin(self.alpha)
        cb, sb = math.cos(self.beta), math.sin(self.beta)
        return np.array([ca * ca, sa * sa * cb * cb, sa * sa * sb * sb])

    def energies(self, e_i: float = 0.0) -> np.ndarray:
        return np.array([e_i, e_i + self.omega_ji, e_i + self.omega_ki])

    def state(self) -> np.ndarray:
        ca, sa = math.cos(self.alpha), math.sin(self.alpha)
        cb, sb = math.cos(self.beta), math.sin(self.beta)
        return np.array(
            [ca, sa * cb * np.exp(1j * self.phi), sa * sb * np.exp(1j * self.varphi)]
        )

    def survival_amplitude(self, t, hbar: float | None = None):
        """<psi_I| exp(-iHt/hbar) |psi_I> with E_i = 0."""
        hbar = resolve_hbar(hbar)
        t = np.asarray(t, dtype=float)
        w = self.weights
        return (
            w[0]
            + w[1] * np.exp(-1j * self.omega_ji * t / hbar)
            + w[2] * np.exp(-1j * self.omega_ki * t / hbar)
        )

    def dispersion_squared(self) -> float:
        w = self.weights
        e = self.energies()
        mean = float(np.dot(w, e))
        return float(np.dot(w, (e - mean) ** 2))


@dataclass(frozen=True)
class ThreeLevelResult:
    feasible: bool
    time: float | None
    ratio: tuple[int, int] | None  # (m, n) with omega_ki/omega_ji = (2m-1)/(2n-1)
    min_overlap: float


def odd_ratio(x: float, tol: float = 1e-9, max_index: int = 50) -> tuple[int, int] | None:
    """(m, n) in lowest terms with (2m-1)/(2n-1) within ``tol`` of ``x``, or None."""
    best = None
    for n in range(1, max_index + 1):
        q = 2 * n - 1
        p = round(x * q)
        if p % 2 == 0 or p <= 0:
            continue
        if abs(x - p / q) <= tol * max(1.0, x):
            frac = Fraction(p, q)
            best = ((frac.numerator + 1) // 2, (frac.denominator + 1) // 2)
            break
    if best is None or best[0] > max_index:
        return None
    return best


def three_level_orthogonality(spec: ThreeLevelSpec, hbar: float | None = None,
                              ratio_tol: float = 1e-9) -> ThreeLevelResult:
    """When does the three-level state first become orthogonal to itself?

    For alpha = beta = pi/4 the survival amplitude vanishes only if both phases
    are odd multiples of pi, i.e. omega_ki/omega_ji = (2m-1)/(2n-1); the first
    time is (2n-1) pi hbar / omega_ji with the fraction in lowest terms. Other
    angles are resolved by scanning t in (0, 20 pi hbar/omega_ji].
    """
    hbar = resolve_hbar(hbar)
    unit = math.pi * hbar / spec.omega_ji
    t_max = 20 * unit
    if math.isclose(spec.alpha, math.pi / 4, abs_tol=1e-15) and math.isclose(
        spec.beta, math.pi / 4, abs_tol=1e-15
    ):
        ratio = odd_ratio(spec.omega_ki / spec.omega_ji, tol=ratio_tol)
        if ratio is not None:
            return ThreeLevelResult(True, (2 * ratio[1] - 1) * unit, ratio, 0.0)
        ts = np.arange(1, 200_001) * (1e-4 * unit)
        return ThreeLevelResult(
            False, None, None, float(np.min(np.abs(spec.survival_amplitude(ts, hbar))))
        )

    n_steps = 200_000
    root = first_zero(lambda t: spec.survival_amplitude(t, hbar), t_max, n_steps,
                      t_min=1e-4 * unit, threshold=1e-2)
    if root is not None and abs(spec.survival_amplitude(root, hbar)) < 1e-8:
        return ThreeLevelResult(True, root, None, float(abs(spec.survival_amplitude(root, hbar))))
    ts = np.linspace(1e-4 * unit, t_max, n_steps)
    return ThreeLevelResult(
        False, None, None, float(np.min(np.abs(spec.survival_amplitude(ts, hbar))))
    )
