"""Command-line front end.

Every subcommand prints one JSON object (``command``, ``config``, ``inputs``,
``outputs``, ``checks``) or, for trajectories and sweeps, CSV. Floats are
written with ``repr`` so values round-trip to the last bit.

Exit codes: 0 success, 1 invariant-suite failure, 2 bad arguments or a domain
error (the error object is printed on stdout).
"""

from __future__ import annotations

import argparse
import csv
import json
import math
import re
import sys
from typing import Any, Sequence

import numpy as np

from . import classical, config, dilation, hermitian, linalg, pt, verify
from .errors import PTBrachError


def parse_complex(text: str) -> complex:
    """Parse ``re,im`` or a literal such as ``1-2i``, ``0.5i``, ``3``."""
    text = text.strip()
    if "," in text:
        re_part, im_part = text.split(",", 1)
        return complex(float(re_part), float(im_part))
    return _complex_literal(text)


def _complex_literal(text: str) -> complex:
    literal = text.replace(" ", "").replace("i", "j")
    if literal in ("j", "+j", "-j"):
        literal = literal.replace("j", "1j")
    literal = re.sub(r"(^|[-+])j", r"\g<1>1j", literal)
    try:
        return complex(literal)
    except ValueError as exc:
        raise argparse.ArgumentTypeError(f"not a complex number: {text!r}") from exc


def parse_state(text: str) -> np.ndarray:
    """Comma-separated components, each a complex literal: ``1,0`` or ``0.6,0.8i``."""
    parts = [p for p in text.split(",") if p.strip()]
    if len(parts) < 2:
        raise argparse.ArgumentTypeError(f"state needs at least two components: {text!r}")
    return np.array([_complex_literal(p) for p in parts], dtype=complex)


def parse_grid(text: str) -> np.ndarray:
    """``start:stop:step`` (inclusive of stop) or a comma-separated list."""
    try:
        if ":" in text:
            start, stop, step = (float(x) for x in text.split(":"))
            if step <= 0:
                raise ValueError
            n = int(math.floor((stop - start) / step + 1e-9)) + 1
            grid = start + step * np.arange(max(n, 0))
        else:
            grid = np.array([float(x) for x in text.split(",") if x.strip()])
        if grid.size == 0:
            raise ValueError
        return grid
    except ValueError as exc:
        raise argparse.ArgumentTypeError(f"bad grid {text!r}") from exc


def _complex_arg(text: str) -> complex:
    try:
        return parse_complex(text)
    except (ValueError, argparse.ArgumentTypeError) as exc:
        raise argparse.ArgumentTypeError(str(exc)) from exc


def to_jsonable(obj: Any) -> Any:
    if isinstance(obj, dict):
        return {str(k): to_jsonable(v) for k, v in obj.items()}
    if isinstance(obj, (list, tuple)):
        return [to_jsonable(v) for v in obj]
    if isinstance(obj, np.ndarray):
        if np.iscomplexobj(obj):
            return {"re": obj.real.tolist(), "im": obj.imag.tolist()}
        return obj.tolist()
    if isinstance(obj, (complex, np.complexfloating)):
        return {"re": float(obj.real), "im": float(obj.imag)}
    if isinstance(obj, np.generic):
        return obj.item()
    return obj


def _emit_json(payload: dict, stream) -> None:
    stream.write(json.dumps(to_jsonable(payload), indent=2, sort_keys=False))
    stream.write("\n")


def _emit_csv(header: Sequence[str], rows, stream) -> None:
    writer = csv.writer(stream, lineterminator="\n")
    writer.writerow(header)
    for row in rows:
        writer.writerow([repr(float(v)) if isinstance(v, (float, np.floating)) else v
                         for v in row])


def _pt_params(args) -> pt.PTParams:
    return pt.PTParams(args.r, args.s, args.theta)


# --- subcommands -------------------------------------------------------------


def cmd_optimal_h(args):
    sol = hermitian.optimal_hamiltonian(args.psi_i, args.psi_f, args.omega)
    outputs = {
        "H": sol.hamiltonian,
        "E_plus": sol.e_plus,
        "E_minus": sol.e_minus,
        "gap": sol.gap,
        "tau": sol.min_time,
        "distance": sol.distance,
    }
    reached = hermitian.evolve(sol.hamiltonian, args.psi_i, sol.min_time)
    checks = {
        "hermiticity_residual": linalg.hermiticity_residual(sol.hamiltonian),
        "target_fidelity": linalg.ray_fidelity(reached, args.psi_f),
    }
    return {"psi_i": args.psi_i, "psi_f": args.psi_f, "omega": args.omega}, outputs, checks


def cmd_min_time(args):
    tau = hermitian.min_time(args.psi_i, args.psi_f, args.omega)
    dist = hermitian.fs_distance(args.psi_i, args.psi_f)
    outputs = {"tau": tau, "distance": dist, "passage_time": hermitian.passage_time(args.omega)}
    checks = {"rate_times_time_minus_distance": tau * args.omega / config.get_hbar() - dist}
    return {"psi_i": args.psi_i, "psi_f": args.psi_f, "omega": args.omega}, outputs, checks


def cmd_three_level(args):
    spec = hermitian.ThreeLevelSpec(args.omega_ji, args.omega_ki, args.alpha, args.beta,
                                    args.phi, args.varphi)
    res = hermitian.three_level_orthogonality(spec)
    dispersion2 = spec.dispersion_squared()
    tau_p = math.pi * config.get_hbar() / (2 * math.sqrt(dispersion2))
    outputs = {
        "feasible": res.feasible,
        "T": res.time,
        "ratio_mn": list(res.ratio) if res.ratio else None,
        "min_overlap": res.min_overlap,
        "dispersion_squared": dispersion2,
        "tau_p": tau_p,
        "T_over_tau_p": res.time / tau_p if res.time is not None else None,
    }
    checks = {}
    if res.time is not None:
        checks["overlap_at_T"] = float(abs(spec.survival_amplitude(res.time)))
    return vars_subset(args, "omega_ji omega_ki alpha beta phi varphi"), outputs, checks


def cmd_pt_eig(args):
    p = _pt_params(args)
    eig = pt.pt_eigensystem(p)
    frame = pt.c_operator(p)
    outputs = {
        "E_plus": eig.e_plus,
        "E_minus": eig.e_minus,
        "v_plus": eig.v_plus,
        "v_minus": eig.v_minus,
        "alpha": eig.alpha,
        "omega": p.omega,
        "C": frame.C,
        "field": pt.effective_field(p),
    }
    checks = dict(pt.c_operator_residuals(p, frame))
    checks["cpt_norm_plus"] = pt.cpt_norm(eig.v_plus, frame)
    checks["cpt_norm_minus"] = pt.cpt_norm(eig.v_minus, frame)
    checks["sqrt_2cos_alpha"] = math.sqrt(2 * math.cos(eig.alpha))
    return vars_subset(args, "r s theta"), outputs, checks


def cmd_pt_evolve(args):
    p = _pt_params(args)
    frame = pt.c_operator(p)
    ts = np.linspace(0.0, args.t_max, args.steps + 1)
    rows = []
    for t in ts:
        psi = pt.pt_evolve(p, args.psi, t)
        rows.append([t, psi[0].real, psi[0].imag, psi[1].real, psi[1].imag,
                     float(np.linalg.norm(psi)), pt.cpt_inner(psi, psi, frame).real])
    header = ["t", "re0", "im0", "re1", "im1", "dirac_norm", "cpt_norm2"]
    return vars_subset(args, "r s theta psi t_max steps"), {"header": header, "rows": rows}, {}


def cmd_pt_spinflip(args):
    rows = verify.spin_flip_sweep(args.omega, args.alpha_grid)
    taus = [r["tau"] for r in rows]
    checks = {
        "monotone_decreasing": bool(all(b < a for a, b in zip(taus, taus[1:]))),
        "max_scan_gap": max(abs(r["tau"] - r["tau_scan"]) for r in rows),
    }
    header = list(rows[0].keys()) if rows else []
    table = {"header": header, "rows": [[r[k] for k in header] for r in rows]}
    return {"omega": args.omega, "alpha_grid": args.alpha_grid}, table, checks


def cmd_equiv(args):
    p = _pt_params(args)
    eq = pt.hermitian_equivalent(p)
    outputs = {"Q": eq.Q, "H_tilde": eq.H_tilde, "H": p.matrix()}
    return vars_subset(args, "r s theta"), outputs, pt.equivalence_residuals(p, eq)


def cmd_dilate(args):
    p = _pt_params(args)
    ts = np.linspace(0.0, args.t_max, args.steps + 1)
    psi = linalg.normalize(args.psi)
    if args.variant == "unitary":
        rows = []
        for t in ts:
            res = dilation.unitary_dilation(p, t)
            out = res.unitary4 @ dilation.embed(psi)
            target = pt.pt_evolve(p, psi, t)
            deficit = 1 - np.linalg.norm(res.contraction @ psi) ** 2
            rows.append([t, linalg.ray_fidelity(dilation.project(out), target), res.sigma_max,
                         linalg.unitarity_residual(res.unitary4), deficit,
                         float(np.linalg.norm(dilation.auxiliary(out)) ** 2)])
        header = ["t", "fidelity", "sigma_max", "unitarity_residual", "norm_deficit", "aux_norm2"]
        checks = {"min_fidelity": min(r[1] for r in rows)}
    else:
        assignment = args.eigenvalues if args.eigenvalues is not None else None
        res = dilation.fixed_dilation_hamiltonian(p, assignment, t_grid=ts)
        fid = res.diagnostics["fidelity"]
        rows = [[t, f] for t, f in zip(ts, fid)]
        header = ["t", "fidelity"]
        checks = {
            "hermiticity_residual": linalg.hermiticity_residual(res.hamiltonian4),
            "min_fidelity": float(np.min(fid)),
            "frame_tightness": res.diagnostics["frame_tightness"],
        }
        if args.format != "csv":
            return (vars_subset(args, "r s theta variant t_max steps"),
                    {"H4": res.hamiltonian4, "header": header, "rows": rows}, checks)
    inputs = vars_subset(args, "r s theta variant t_max steps")
    return inputs, {"header": header, "rows": rows}, checks


def cmd_classical_orbit(args):
    traj = classical.integrate_orbit(args.x0, args.energy, dt=args.dt, t_max=args.t_max,
                                     branch=args.branch)
    idx = np.arange(0, len(traj), args.every)
    energies = classical.hamiltonian(traj.x[idx], traj.p[idx])
    rows = [[traj.t[i], traj.x[i].real, traj.x[i].imag, traj.p[i].real, traj.p[i].imag,
             e.real, e.imag] for i, e in zip(idx, energies)]
    header = ["t", "re_x", "im_x", "re_p", "im_p", "re_E", "im_E"]
    checks = {"energy_error": traj.energy_error(), "foci_invariant": classical.foci_invariant(traj)}
    return vars_subset(args, "x0 energy dt t_max branch"), {"header": header, "rows": rows}, checks


def cmd_switched_flight(args):
    period = classical.orbit_period(2j, 1.0, dt=args.dt)
    rows = []
    for a in sorted(args.a_grid):
        f = classical.switched_flight(a, args.mode, dt=args.dt)
        # free motion from -a to +a at speed 2
        rows.append([a, f.total, f.in_potential, f.free_before, f.free_after, a,
                     period / 2])
    header = ["a", "total", "in_potential", "free_before", "free_after", "free_only",
              "half_period"]
    checks = {
        "measured_period": period,
        "stated_period": 2 * math.pi,
        "max_in_potential_minus_half_period": max(abs(r[2] - period / 2) for r in rows),
    }
    return {"a_grid": args.a_grid, "mode": args.mode}, {"header": header, "rows": rows}, checks


def cmd_verify(args):
    report = verify.suite_report(args.seed)
    return {"seed": args.seed}, {"passed": report["passed"]}, report["checks"]


def vars_subset(args, names: str) -> dict:
    return {name: getattr(args, name) for name in names.split()}


TABLE_COMMANDS = {"pt-evolve", "pt-spinflip", "dilate", "classical-orbit", "switched-flight"}
CSV_DEFAULT = {"pt-evolve", "classical-orbit"}


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="ptbrach", description=__doc__.splitlines()[0])
    parser.add_argument("--hbar", type=float, default=None,
                        help=f"reduced Planck constant (default ${config.HBAR_ENV} or 1)")
    parser.add_argument("--format", choices=["json", "csv"], default=None)
    parser.add_argument("--tolerances", default=None, help="JSON file of tolerance overrides")
    sub = parser.add_subparsers(dest="command", required=True)

    def states(sp):
        sp.add_argument("--psi-i", type=parse_state, required=True)
        sp.add_argument("--psi-f", type=parse_state, required=True)
        sp.add_argument("--omega", type=float, required=True)

    def pt_args(sp):
        sp.add_argument("--r", type=float, required=True)
        sp.add_argument("--s", type=float, required=True)
        sp.add_argument("--theta", type=float, required=True)

    sp = sub.add_parser("optimal-h", help="optimal Hamiltonian and time for psi_i -> psi_f")
    states(sp)
    sp.set_defaults(func=cmd_optimal_h)

    sp = sub.add_parser("min-time", help="minimum Hermitian evolution time")
    states(sp)
    sp.set_defaults(func=cmd_min_time)

    sp = sub.add_parser("three-level", help="orthogonalisation time of a three-level state")
    sp.add_argument("--omega-ji", type=float, required=True)
    sp.add_argument("--omega-ki", type=float, required=True)
    sp.add_argument("--alpha", type=float, default=math.pi / 4)
    sp.add_argument("--beta", type=float, default=math.pi / 4)
    sp.add_argument("--phi", type=float, default=0.0)
    sp.add_argument("--varphi", type=float, default=0.0)
    sp.set_defaults(func=cmd_three_level)

    sp = sub.add_parser("pt-eig", help="PT eigensystem, C operator and CPT norms")
    pt_args(sp)
    sp.set_defaults(func=cmd_pt_eig)

    sp = sub.add_parser("pt-evolve", help="PT evolution trajectory")
    pt_args(sp)
    sp.add_argument("--psi", type=parse_state, default=np.array([1, 0], dtype=complex))
    sp.add_argument("--t-max", type=float, default=2 * math.pi)
    sp.add_argument("--steps", type=int, default=200)
    sp.set_defaults(func=cmd_pt_evolve)

    sp = sub.add_parser("pt-spinflip", help="spin-flip time over an alpha grid at fixed omega")
    sp.add_argument("--omega", type=float, required=True)
    sp.add_argument("--alpha-grid", type=parse_grid, required=True)
    sp.set_defaults(func=cmd_pt_spinflip)

    sp = sub.add_parser("equiv", help="Q = log(CP) and the equivalent Hermitian Hamiltonian")
    pt_args(sp)
    sp.set_defaults(func=cmd_equiv)

    sp = sub.add_parser("dilate", help="4x4 dilation of the PT evolution")
    pt_args(sp)
    sp.add_argument("--variant", choices=["unitary", "fixed"], default="unitary")
    sp.add_argument("--psi", type=parse_state, default=np.array([1, 0], dtype=complex))
    sp.add_argument("--eigenvalues", type=parse_grid, default=None,
                    help="fixed variant: four eigenvalues for the H and H^+ frame vectors")
    sp.add_argument("--t-max", type=float, default=2 * math.pi)
    sp.add_argument("--steps", type=int, default=100)
    sp.set_defaults(func=cmd_dilate)

    sp = sub.add_parser("classical-orbit", help="complex orbit of H = p^2 + x^2")
    sp.add_argument("--x0", type=_complex_arg, required=True)
    sp.add_argument("--energy", type=_complex_arg, default=1 + 0j)
    sp.add_argument("--dt", type=float, default=classical.DEFAULT_DT)
    sp.add_argument("--t-max", type=float, default=math.pi)
    sp.add_argument("--branch", type=int, choices=[1, -1], default=1)
    sp.add_argument("--every", type=int, default=100, help="write every n-th step")
    sp.set_defaults(func=cmd_classical_orbit)

    sp = sub.add_parser("switched-flight", help="flight time with the potential switched on/off")
    sp.add_argument("--a-grid", type=parse_grid, default=np.array([2.0, 10.0, 100.0]))
    sp.add_argument("--mode", choices=["immediate", "at_turning_point"], default="immediate")
    sp.add_argument("--dt", type=float, default=classical.DEFAULT_DT)
    sp.set_defaults(func=cmd_switched_flight)

    sp = sub.add_parser("verify", help="run the invariant suite")
    sp.add_argument("--seed", type=int, default=0)
    sp.set_defaults(func=cmd_verify)
    return parser


def main(argv: Sequence[str] | None = None, stdout=None, stderr=None) -> int:
    stdout = stdout or sys.stdout
    stderr = stderr or sys.stderr
    argv = list(sys.argv[1:] if argv is None else argv)
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return int(exc.code or 0)

    if args.format is None:
        args.format = "csv" if args.command in CSV_DEFAULT else "json"
    try:
        tolerances = config.load_tolerances(args.tolerances)
        hbar = args.hbar if args.hbar is not None else config.hbar_from_env()
        hbar = config.resolve_hbar(hbar)
    except (OSError, ValueError) as exc:
        stderr.write(f"ptbrach: error: {exc}\n")
        return 2

    run_config = {"hbar": hbar, "format": args.format, "tolerances": tolerances}
    if args.command == "verify":
        run_config["seed"] = args.seed
    try:
        with config.hbar_context(hbar):
            inputs, outputs, checks = args.func(args)
    except PTBrachError as exc:
        stderr.write(f"ptbrach: {exc.code}: {exc}\n")
        _emit_json({"command": args.command, "error": exc.to_dict()}, stdout)
        return 2

    if args.format == "csv" and args.command in TABLE_COMMANDS:
        _emit_csv(outputs["header"], outputs["rows"], stdout)
    else:
        _emit_json({"command": argv, "config": run_config, "inputs": inputs,
                    "outputs": outputs, "checks": checks}, stdout)

    if args.command == "verify":
        failed = [c["name"] for c in checks if not c["passed"]]
        for name in failed:
            stderr.write(f"ptbrach verify: FAILED {name}\n")
        return 1 if failed else 0
    return 0


if __name__ == "__main__":
    sys.exit(main())
