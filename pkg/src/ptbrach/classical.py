"""Complex classical trajectories of the oscillator H = p^2 + x^2.

Hamilton's equations dx/dt = 2p, dp/dt = -2x are integrated with fixed-step
RK4 in the complex plane. Every orbit of energy E is an ellipse with foci at
the turning points +/- sqrt(E).
"""

from __future__ import annotations

import cmath
import math
from dataclasses import dataclass
from typing import Callable

import numpy as np

from .errors import NoClosureError, StepTooLargeError

DEFAULT_DT = 1e-4
ENERGY_DRIFT_TOL = 1e-10
CLOSURE_TOL = 1e-8
# angular frequency of dx/dt = 2p, dp/dt = -2x is 2, so the nominal period is pi
NOMINAL_PERIOD = math.pi


def hamiltonian(x, p):
    return p * p + x * x


def rhs(x, p):
    return 2.0 * p, -2.0 * x


def rk4_step(x, p, dt: float, field: Callable = rhs):
    k1x, k1p = field(x, p)
    k2x, k2p = field(x + 0.5 * dt * k1x, p + 0.5 * dt * k1p)
    k3x, k3p = field(x + 0.5 * dt * k2x, p + 0.5 * dt * k2p)
    k4x, k4p = field(x + dt * k3x, p + dt * k3p)
    return (
        x + dt / 6.0 * (k1x + 2 * k2x + 2 * k3x + k4x),
        p + dt / 6.0 * (k1p + 2 * k2p + 2 * k3p + k4p),
    )


def initial_momentum(x0: complex, energy: complex, branch: int = 1) -> complex:
    """Root of E - x0^2; branch=+1 picks the root with Re p >= 0 (rightward motion)."""
    root = cmath.sqrt(complex(energy) - complex(x0) ** 2)
    if root.real < 0 or (root.real == 0 and root.imag < 0):
        root = -root
    return root if branch >= 0 else -root


@dataclass(frozen=True)
class PhasePoint:
    x: complex
    p: complex
    t: float


@dataclass(frozen=True)
class ClassicalTrajectory:
    t: np.ndarray
    x: np.ndarray
    p: np.ndarray
    energy: complex
    dt: float

    def __len__(self) -> int:
        return len(self.t)

    def point(self, i: int) -> PhasePoint:
        return PhasePoint(complex(self.x[i]), complex(self.p[i]), float(self.t[i]))

    def energy_error(self) -> float:
        return float(np.max(np.abs(hamiltonian(self.x, self.p) - self.energy)))


def _drift_budget(energy: complex, scale: float, duration: float, tol: float) -> float:
    # per unit time, relative to |E| or to the size of the cancelling terms
    return tol * max(abs(energy), scale, 1.0) * max(duration, 1.0)


def integrate_orbit(x0: complex, energy: complex = 1.0, dt: float = DEFAULT_DT,
                    t_max: float = NOMINAL_PERIOD, branch: int = 1,
                    drift_tol: float = ENERGY_DRIFT_TOL) -> ClassicalTrajectory:
    """Fixed-step RK4 trajectory from (x0, p0) with p0 = +/-sqrt(E - x0^2).

    Raises StepTooLargeError if |H - E| exceeds ``drift_tol`` times
    max(|E|, |x|^2 + |p|^2, 1) per unit time.
    """
    if not dt > 0:
        raise ValueError(f"dt must be positive, got {dt}")
    n = int(math.ceil(t_max / dt - 1e-9))
    x = complex(x0)
    p = initial_momentum(x, energy, branch)
    xs = np.empty(n + 1, dtype=complex)
    ps = np.empty(n + 1, dtype=complex)
    xs[0], ps[0] = x, p
    for i in range(1, n + 1):
        x, p = rk4_step(x, p, dt)
        xs[i], ps[i] = x, p
    traj = ClassicalTrajectory(np.arange(n + 1) * dt, xs, ps, complex(energy), dt)
    scale = float(np.max(np.abs(xs) ** 2 + np.abs(ps) ** 2))
    err = traj.energy_error()
    if err > _drift_budget(energy, scale, t_max, drift_tol):
        raise StepTooLargeError(f"energy drift {err:.3e} exceeds tolerance at dt={dt}")
    return traj


def _refine_crossing(x, p, t, dt, g, iterations: int = 4):
    """Root of g over one step [t, t + dt] starting from the state (x, p) at t.

    Starts from linear interpolation of g between the bracketing steps, then
    polishes with secant iterations using partial RK4 steps.
    """
    g0 = g(x, p)
    x1, p1 = rk4_step(x, p, dt)
    g1 = g(x1, p1)
    h_lo, g_lo, h_hi, g_hi = 0.0, g0, dt, g1
    h = dt * g0 / (g0 - g1)
    for _ in range(iterations):
        xh, ph = rk4_step(x, p, h)
        gh = g(xh, ph)
        if gh == 0.0:
            break
        if (gh > 0) == (g_lo > 0):
            h_lo, g_lo = h, gh
        else:
            h_hi, g_hi = h, gh
        h = h_lo - g_lo * (h_hi - h_lo) / (g_hi - g_lo)
    xh, ph = rk4_step(x, p, h)
    return t + h, xh, ph


@dataclass(frozen=True)
class Return:
    period: float
    closure_error: float
    point: PhasePoint


def first_return(x0: complex, energy: complex = 1.0, dt: float = DEFAULT_DT, branch: int = 1,
                 max_periods: float = 10.0, closure_tol: float = CLOSURE_TOL) -> Return:
    """First return of the phase point to its start.

    The displacement from the start, projected on the initial velocity, turns
    from negative to positive as the orbit passes the start; the step where
    that happens (with the point already close) is refined to the crossing.
    """
    x_start = complex(x0)
    p_start = initial_momentum(x_start, energy, branch)
    vx, vp = rhs(x_start, p_start)
    speed2 = abs(vx) ** 2 + abs(vp) ** 2
    if speed2 == 0.0:
        raise NoClosureError("phase point is an equilibrium")
    near = 10.0 * math.sqrt(speed2) * dt

    def g(x, p):
        dx, dp = x - x_start, p - p_start
        return (dx * vx.conjugate() + dp * vp.conjugate()).real

    x, p, t = x_start, p_start, 0.0
    g_prev = 0.0
    n_max = int(max_periods * NOMINAL_PERIOD / dt)
    min_steps = 10
    for i in range(1, n_max + 1):
        x_new, p_new = rk4_step(x, p, dt)
        g_new = g(x_new, p_new)
        if i > min_steps and g_prev < 0.0 <= g_new:
            dist = math.hypot(abs(x_new - x_start), abs(p_new - p_start))
            if dist < near:
                t_ret, xr, pr = _refine_crossing(x, p, t, dt, g)
                err = math.hypot(abs(xr - x_start), abs(pr - p_start))
                if err > closure_tol * max(1.0, math.hypot(abs(x_start), abs(p_start))):
                    raise NoClosureError(f"closest return misses start by {err:.3e}")
                return Return(t_ret, err, PhasePoint(xr, pr, t_ret))
        x, p, t, g_prev = x_new, p_new, i * dt, g_new
    raise NoClosureError(f"no return within {max_periods} nominal periods")


def orbit_period(x0: complex, energy: complex = 1.0, dt: float = DEFAULT_DT,
                 branch: int = 1) -> float:
    return first_return(x0, energy, dt, branch).period


def foci_invariant(traj: ClassicalTrajectory, foci: complex | None = None) -> float:
    """Max deviation of |x - f| + |x + f| from its mean along the trajectory.

    ``f`` defaults to the turning point sqrt(E) (so +/-1 at E = 1). A small value
    certifies that the orbit is an ellipse with those foci.
    """
    f = cmath.sqrt(traj.energy) if foci is None else complex(foci)
    total = np.abs(traj.x - f) + np.abs(traj.x + f)
    return float(np.max(np.abs(total - total.mean())))


@dataclass(frozen=True)
class Flight:
    total: float
    in_potential: float
    free_before: float
    free_after: float
    exit_point: complex


def switched_flight(a: float, switch_mode: str = "immediate", dt: float = DEFAULT_DT,
                    branch: int = 1) -> Flight:
    """Time for an E = 1 particle to go from x = -a to x = +a when the potential
    x^2 is switched on at ``switch_mode`` and off again on the positive real axis.

    Free motion (V = 0) at E = 1 has p = 1, i.e. speed dx/dt = 2.
    ``at_turning_point`` switches on at x = -1 (real half-oscillation);
    ``immediate`` switches on at x = -a, where conserving E = 1 forces the
    imaginary momentum p = i sqrt(a^2 - 1) and the particle crosses to the
    positive axis along an ellipse through the complex plane.
    """
    if a < 1:
        raise ValueError(f"a must be >= 1, got {a}")
    energy = 1.0
    free_speed = 2.0 * math.sqrt(energy)
    if switch_mode == "at_turning_point":
        x_on = -1.0
    elif switch_mode == "immediate":
        x_on = -float(a)
    else:
        raise ValueError(f"unknown switch mode {switch_mode!r}")
    free_before = (x_on + a) / free_speed

    x = complex(x_on)
    p = cmath.sqrt(energy - x * x)
    if p.real < 0 or (p.real == 0 and p.imag < 0):
        p = -p
    if branch < 0:
        p = p.conjugate()

    # leave the start before looking for the return to the real axis
    t = 0.0
    x, p = rk4_step(x, p, dt)
    t += dt

    # complex motion stops on the real axis; real motion stops where the
    # velocity reverses at the right turning point
    real_motion = abs(x.imag) < 1e-14

    def on_axis(xx, pp):
        return (2.0 * pp).real if real_motion else xx.imag

    n_max = int(2 * NOMINAL_PERIOD / dt)
    prev = on_axis(x, p)
    for _ in range(n_max):
        xn, pn = rk4_step(x, p, dt)
        cur = on_axis(xn, pn)
        if (prev > 0) != (cur > 0) and xn.real > 0:
            t_cross, xc, _ = _refine_crossing(x, p, t, dt, on_axis)
            exit_x = xc.real
            free_after = max(a - exit_x, 0.0) / free_speed
            return Flight(free_before + t_cross + free_after, t_cross, free_before,
                          free_after, xc)
        x, p, t, prev = xn, pn, t + dt, cur
    raise NoClosureError("particle never reached the positive real axis")
