"""Invariant suite behind ``ptbrach verify``.

Each check draws what it needs from a seeded generator and returns the worst
observed residual next to its tolerance, so the report is reproducible
byte-for-byte for a given seed.
"""

from __future__ import annotations

import math
from dataclasses import asdict, dataclass
from typing import Callable

import numpy as np

from . import classical, dilation, hermitian, linalg, pt


@dataclass(frozen=True)
class Check:
    name: str
    module: str
    value: float
    tolerance: float
    passed: bool


def _check(name, module, value, tolerance, *, at_least=False) -> Check:
    value = float(value)
    passed = value >= tolerance if at_least else value <= tolerance
    return Check(name, module, value, tolerance, bool(passed))


def random_state(rng, dim=2) -> np.ndarray:
    v = rng.normal(size=dim) + 1j * rng.normal(size=dim)
    return v / np.linalg.norm(v)


def random_hermitian(rng, dim=2, scale=1.0) -> np.ndarray:
    a = rng.normal(size=(dim, dim)) + 1j * rng.normal(size=(dim, dim))
    return scale * 0.5 * (a + a.conj().T)


def random_complex(rng, dim=2) -> np.ndarray:
    return rng.normal(size=(dim, dim)) + 1j * rng.normal(size=(dim, dim))


# --- linalg ----------------------------------------------------------------


def check_pauli_roundtrip(rng):
    worst = max(
        np.max(np.abs(linalg.pauli_decompose(m).reconstruct() - m))
        for m in (random_complex(rng) for _ in range(50))
    )
    return _check("pauli_roundtrip", "linalg", worst, 1e-14)


def check_exp_unitarity(rng):
    worst = 0.0
    for _ in range(20):
        t = rng.uniform(-100, 100)
        worst = max(worst, linalg.unitarity_residual(linalg.mat_exp2(random_hermitian(rng), t)))
        worst = max(worst, linalg.unitarity_residual(linalg.mat_exp4(random_hermitian(rng, 4), t)))
    return _check("exp_unitarity", "linalg", worst, 1e-12)


def check_exp_semigroup(rng):
    worst = 0.0
    for _ in range(20):
        m = random_complex(rng)
        t1, t2 = rng.uniform(-1, 1, size=2)
        lhs = linalg.mat_exp2(m, t1) @ linalg.mat_exp2(m, t2)
        worst = max(worst, np.max(np.abs(lhs - linalg.mat_exp2(m, t1 + t2))))
    return _check("exp_semigroup", "linalg", worst, 1e-11)


def check_eig2_residual(rng):
    worst = 0.0
    for _ in range(50):
        m = random_complex(rng) if rng.random() < 0.5 else random_hermitian(rng)
        e = linalg.eig2(m)
        if e.degenerate:
            continue
        for lam, v in zip(e.values, e.vectors.T):
            worst = max(worst, np.linalg.norm(m @ v - lam * v))
    return _check("eig2_residual", "linalg", worst, 1e-12)


# --- hermitian brachistochrone ----------------------------------------------


def check_uncertainty_bound(rng):
    worst_excess, equality = -np.inf, 0.0
    for _ in range(3):
        h = random_hermitian(rng)
        w, v = np.linalg.eigh(h)
        half_gap = 0.5 * (w[1] - w[0])
        states = rng.normal(size=(10_000, 2)) + 1j * rng.normal(size=(10_000, 2))
        states /= np.linalg.norm(states, axis=1, keepdims=True)
        hs = states @ h.T
        mean = np.einsum("ij,ij->i", states.conj(), hs).real
        spread = np.linalg.norm(hs - mean[:, None] * states, axis=1)
        worst_excess = max(worst_excess, float(np.max(spread - half_gap)))
        balanced = (v[:, 0] + v[:, 1]) / math.sqrt(2)
        equality = max(equality, abs(hermitian.energy_uncertainty(h, balanced) - half_gap))
    return [
        _check("uncertainty_bound_excess", "hermitian", max(worst_excess, 0.0), 1e-12),
        _check("uncertainty_bound_equality", "hermitian", equality, 1e-12),
    ]


def check_min_time_distance(rng):
    worst = 0.0
    for _ in range(100):
        a, b = random_state(rng), random_state(rng)
        omega = rng.uniform(0.2, 5.0)
        tau = hermitian.min_time(a, b, omega)
        worst = max(worst, abs(tau - hermitian.fs_distance(a, b) / omega))
    return _check("min_time_equals_distance_over_speed", "hermitian", worst, 1e-12)


def check_optimal_reaches_target(rng):
    worst = 0.0
    for _ in range(50):
        a, b = random_state(rng), random_state(rng)
        sol = hermitian.optimal_hamiltonian(a, b, rng.uniform(0.2, 5.0))
        out = hermitian.evolve(sol.hamiltonian, a, sol.min_time)
        worst = max(worst, 1.0 - linalg.ray_fidelity(out, b))
    return _check("optimal_hamiltonian_reaches_target", "hermitian", worst, 1e-10)


def check_spin_flip_hamiltonian(rng):
    sol = hermitian.optimal_hamiltonian([1, 0], [0, 1], 1.0)
    expected = np.array([[0, -0.5], [-0.5, 0]])
    return [
        _check("spin_flip_hamiltonian", "hermitian",
               np.max(np.abs(sol.hamiltonian - expected)), 1e-13),
        _check("spin_flip_time", "hermitian", abs(sol.min_time - math.pi), 1e-12),
    ]


def check_three_level(rng):
    spec = hermitian.ThreeLevelSpec(omega_ji=1.0, omega_ki=3.0)
    res = hermitian.three_level_orthogonality(spec)
    tau_p = math.pi / (2 * math.sqrt(spec.dispersion_squared()))
    return [
        _check("three_level_sqrt6", "hermitian", abs(res.time / tau_p - math.sqrt(6)), 1e-9),
        _check("three_level_dispersion", "hermitian", abs(spec.dispersion_squared() - 1.5), 1e-12),
    ]


# --- PT-symmetric ----------------------------------------------------------


def _pt_samples(rng, n=50):
    return [pt.random_unbroken_params(rng) for _ in range(n)]


def check_pt_eigensystem(rng):
    worst_val, worst_norm = 0.0, 0.0
    for p in _pt_samples(rng):
        e = pt.pt_eigensystem(p)
        ref = linalg.eig2(p.matrix()).values
        worst_val = max(worst_val, np.max(np.abs(np.array([e.e_minus, e.e_plus]) - ref)))
        frame = pt.c_operator(p)
        target = math.sqrt(2 * math.cos(e.alpha))
        for v in (e.v_plus, e.v_minus):
            worst_norm = max(worst_norm, abs(pt.cpt_norm(v, frame) - target))
    return [
        _check("pt_eigenvalues", "pt", worst_val, 1e-12),
        _check("pt_cpt_norms", "pt", worst_norm, 1e-12),
    ]


def check_c_algebra(rng):
    worst = 0.0
    for p in _pt_samples(rng):
        worst = max(worst, *pt.c_operator_residuals(p).values())
    return _check("c_operator_algebra", "pt", worst, 1e-12)


def check_pt_evolution(rng):
    worst_closed, worst_norm = 0.0, 0.0
    for p in _pt_samples(rng, 20):
        frame = pt.c_operator(p)
        ts = np.linspace(0, 10 * math.pi / p.omega, 200)
        closed = pt.pt_evolve_up(p, ts)
        for t, ref in zip(ts, closed):
            psi = pt.pt_evolve(p, [1, 0], t)
            worst_closed = max(worst_closed, np.max(np.abs(psi - ref)))
            worst_norm = max(worst_norm, abs(pt.cpt_inner(psi, psi, frame).real - 1 / p.cos_alpha))
    return [
        _check("pt_evolve_closed_form", "pt", worst_closed, 1e-12),
        _check("cpt_norm_conservation", "pt", worst_norm, 1e-10),
    ]


def spin_flip_sweep(omega: float, alphas) -> list[dict]:
    """Fast-branch spin-flip table: one row per |alpha| (rows sorted by alpha)."""
    rows = []
    tau_p = hermitian.passage_time(omega)
    up, down = np.array([1, 0], dtype=complex), np.array([0, 1], dtype=complex)
    for a in sorted(float(x) for x in alphas):
        p = pt.PTParams.from_alpha(omega, -abs(a))
        tau = pt.spin_flip_time(p)
        frame = pt.c_operator(p)
        rows.append({
            "alpha": a,
            "r": p.r,
            "s": p.s,
            "theta": p.theta,
            "tau": tau,
            "tau_scan": pt.spin_flip_scan(p),
            "tau_over_tau_p": tau / tau_p,
            "cpt_overlap": abs(pt.cpt_inner(up, down, frame)),
            "fleming_bound": pt.cpt_fs_distance(up, down, frame) / p.omega,
        })
    return rows


def check_spin_flip(rng):
    alphas = np.linspace(0.0, math.pi / 2 - 0.005, 100)
    rows = spin_flip_sweep(1.0, alphas)
    taus = np.array([r["tau"] for r in rows])
    scan_gap = max(abs(r["tau"] - r["tau_scan"]) for r in rows)
    overlaps = [r["cpt_overlap"] for r in rows if r["alpha"] > 0]
    bound_gap = max(r["fleming_bound"] - r["tau"] for r in rows)
    return [
        _check("spin_flip_monotone_steps", "pt", float(np.max(np.diff(taus))), 0.0),
        _check("spin_flip_scan_agreement", "pt", scan_gap, 1e-9),
        _check("spin_flip_end_ratio", "pt", rows[-1]["tau_over_tau_p"], 0.01),
        _check("cpt_overlap_nonzero", "pt", min(overlaps), 1e-300, at_least=True),
        _check("fleming_bound_respected", "pt", max(bound_gap, 0.0), 1e-12),
    ]


def check_equivalence(rng):
    worst_spec, worst_herm, worst_trip = 0.0, 0.0, 0.0
    for p in _pt_samples(rng):
        res = pt.equivalence_residuals(p)
        worst_spec = max(worst_spec, res["spectrum"])
        worst_herm = max(worst_herm, res["hermiticity"])
        worst_trip = max(worst_trip, res["round_trip"])
    return [
        _check("equivalence_spectrum", "pt", worst_spec, 1e-11),
        _check("equivalence_hermiticity", "pt", worst_herm, 1e-11),
        _check("equivalence_round_trip", "pt", worst_trip, 1e-11),
    ]


# --- dilation ----------------------------------------------------------------


def check_unitary_dilation(rng):
    worst_u, worst_fid, worst_norm = 0.0, 0.0, 0.0
    for p in _pt_samples(rng, 20):
        psi = random_state(rng)
        for t in np.linspace(0, 4 * math.pi / p.omega, 100):
            res = dilation.unitary_dilation(p, t)
            worst_u = max(worst_u, linalg.unitarity_residual(res.unitary4))
            out = res.unitary4 @ dilation.embed(psi)
            target = pt.pt_evolve(p, psi, t)
            worst_fid = max(worst_fid, 1 - linalg.ray_fidelity(dilation.project(out), target))
            deficit = 1 - np.linalg.norm(res.contraction @ psi) ** 2
            aux = np.linalg.norm(dilation.auxiliary(out)) ** 2
            worst_norm = max(worst_norm, abs(aux - deficit))
    return [
        _check("dilation_unitarity", "dilation", worst_u, 1e-11),
        _check("dilation_projection_fidelity", "dilation", worst_fid, 1e-10),
        _check("dilation_norm_bookkeeping", "dilation", worst_norm, 1e-10),
    ]


def check_fixed_dilation(rng):
    worst_herm, worst_spec = 0.0, 0.0
    for p in _pt_samples(rng, 20):
        res = dilation.fixed_dilation_hamiltonian(p, t_grid=[0.0])
        lam = dilation.povm_frame(p).eigenvalues
        worst_herm = max(worst_herm, linalg.hermiticity_residual(res.hamiltonian4))
        got = np.linalg.eigvalsh(res.hamiltonian4)
        worst_spec = max(worst_spec, np.max(np.abs(got - np.sort(lam))))
    return [
        _check("fixed_dilation_hermitian", "dilation", worst_herm, 1e-12),
        _check("fixed_dilation_spectrum", "dilation", worst_spec, 1e-10),
    ]


# --- classical -------------------------------------------------------------


def check_classical(rng):
    starts = [complex(rng.uniform(-3, 3), rng.uniform(-3, 3)) for _ in range(3)]
    periods, closures, foci, energy = [], [], [], []
    for x0 in starts:
        ret = classical.first_return(x0, 1.0)
        periods.append(ret.period)
        closures.append(ret.closure_error)
        traj = classical.integrate_orbit(x0, 1.0, t_max=ret.period)
        foci.append(classical.foci_invariant(traj))
        energy.append(traj.energy_error())
    spread = (max(periods) - min(periods)) / np.mean(periods)
    halves = [classical.switched_flight(a, "immediate").in_potential for a in (2.0, 10.0)]
    return [
        _check("orbit_closure", "classical", max(closures), 1e-8),
        _check("orbit_period_spread", "classical", spread, 1e-6),
        _check("orbit_foci", "classical", max(foci), 1e-6),
        _check("orbit_energy", "classical", max(energy), 1e-8),
        _check("switched_flight_half_period",
               "classical", max(abs(h - np.mean(periods) / 2) for h in halves), 1e-6),
    ]


CHECKS: list[Callable] = [
    check_pauli_roundtrip,
    check_exp_unitarity,
    check_exp_semigroup,
    check_eig2_residual,
    check_uncertainty_bound,
    check_min_time_distance,
    check_optimal_reaches_target,
    check_spin_flip_hamiltonian,
    check_three_level,
    check_pt_eigensystem,
    check_c_algebra,
    check_pt_evolution,
    check_spin_flip,
    check_equivalence,
    check_unitary_dilation,
    check_fixed_dilation,
    check_classical,
]


def run_suite(seed: int = 0) -> list[Check]:
    rng = np.random.default_rng(seed)
    results: list[Check] = []
    for fn in CHECKS:
        out = fn(rng)
        results.extend(out if isinstance(out, list) else [out])
    return results


def suite_report(seed: int = 0) -> dict:
    checks = run_suite(seed)
    return {
        "passed": all(c.passed for c in checks),
        "checks": [asdict(c) for c in checks],
    }
