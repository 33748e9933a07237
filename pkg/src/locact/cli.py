"""Command-line front end.

Grammar: ``locact <analyze|witness|fhn|rd-cell|genericity> [flags]``.
Every tolerance is exposed as ``--tol.<name>=<value>``; output is
machine-first JSON (17-significant-digit floats, fixed key order) plus CSV
where a command emits trajectories or sweeps.

Exit codes: 0 = a verdict/report was produced, 2 = input error,
3 = no witness available (``witness`` on a non-Active system).
"""

from __future__ import annotations

import argparse
import json
import os
import sys as _sysmod
from dataclasses import dataclass, field

import numpy as np

from . import activity, complexity, genericity, linsys, nonlinear, signals
from .errors import LocactError, StageError
from .serialize import dumps_canonical, format_csv_row

_TOL_KEYS = {
    "proj_tol", "spec_tol", "exp_tol", "sym_tol",
    "cert_tol", "eigvec_in_imP_tol", "imag_tol",
    "T_max", "T_scan_step", "quad_steps_per_unit_time",
    "on_axis_tol", "resid_tol", "axis_val_tol", "cluster_tol",
    "newton_tol", "genericity_tol",
}


@dataclass
class RunConfig:
    command: str
    overrides: dict = field(default_factory=dict)
    seed: int = 0
    output: str | None = None
    fmt: str = "json"


class InputError(Exception):
    pass


def _extract_tol_flags(argv):
    """Pull ``--tol.<name>=<value>`` tokens out of argv before argparse."""
    overrides = {}
    rest = []
    for token in argv:
        if token.startswith("--tol."):
            body = token[len("--tol."):]
            if "=" not in body:
                raise InputError(f"malformed tolerance flag: {token}")
            key, _, value = body.partition("=")
            if key not in _TOL_KEYS:
                raise InputError(
                    f"unknown tolerance key '{key}' "
                    f"(known: {', '.join(sorted(_TOL_KEYS))})"
                )
            try:
                overrides[key] = float(value)
            except ValueError as exc:
                raise InputError(f"bad tolerance value in {token}") from exc
        else:
            rest.append(token)
    return overrides, rest


def _witness_config(overrides):
    kwargs = {}
    for key in ("T_max", "T_scan_step", "cert_tol", "eigvec_in_imP_tol"):
        if key in overrides:
            kwargs[key] = overrides[key]
    if "quad_steps_per_unit_time" in overrides:
        kwargs["quad_steps_per_unit_time"] = int(overrides["quad_steps_per_unit_time"])
    return activity.WitnessSearchConfig(**kwargs)


def _classifier_tols(overrides):
    kwargs = {}
    for key in ("on_axis_tol", "resid_tol", "axis_val_tol", "cluster_tol"):
        if key in overrides:
            kwargs[key] = overrides[key]
    return complexity.ClassifierTolerances(**kwargs)


def _load_system(matrix_path, projection_path, overrides):
    try:
        A = linsys.load_matrix(matrix_path)
        P = linsys.load_matrix(projection_path)
    except (OSError, ValueError, LocactError) as exc:
        raise InputError(str(exc)) from exc
    try:
        return linsys.make_system(A, P, proj_tol=overrides.get("proj_tol",
                                                               linsys.PROJ_TOL))
    except LocactError as exc:
        raise InputError(str(exc)) from exc


def _emit(text, output):
    if output:
        with open(output, "w", encoding="utf-8") as fh:
            fh.write(text)
    else:
        _sysmod.stdout.write(text)
        if not text.endswith("\n"):
            _sysmod.stdout.write("\n")


def cmd_analyze_linear(matrix_path, projection_path, overrides, output=None):
    sys = _load_system(matrix_path, projection_path, overrides)
    cfg = _witness_config(overrides)
    verdict = activity.classify_activity(sys, cfg)
    try:
        gen = genericity.report_to_json(
            genericity.in_generic_M(sys, tol=overrides.get("genericity_tol", 1e-8))
        )
    except LocactError as exc:
        gen = {"error": str(exc)}
    report = {"activity": activity.verdict_to_json(verdict), "genericity": gen}
    _emit(dumps_canonical(report) + "\n", output)
    return 0


def cmd_witness(matrix_path, projection_path, overrides, output=None,
                csv_path=None):
    sys = _load_system(matrix_path, projection_path, overrides)
    cfg = _witness_config(overrides)
    verdict = activity.classify_activity(sys, cfg)
    if verdict.status != activity.ACTIVE or verdict.witness is None:
        report = {"status": verdict.status, "witness": None,
                  "notes": verdict.notes}
        _emit(dumps_canonical(report) + "\n", output)
        return 3
    wit = verdict.witness
    steps = activity.default_quad_steps(wit.T, cfg)
    traj = linsys.solve_forced(sys, wit.signal, wit.T, steps)
    u_vals = signals.eval_signal(wit.signal, traj.times)
    integrand = np.einsum("ij,ij->i", traj.states, u_vals @ sys.P.T)
    header = ["t"] + [f"x{i + 1}" for i in range(sys.n)] \
        + [f"u{i + 1}" for i in range(sys.n)] + ["integrand"]
    lines = [",".join(header)]
    for i in range(traj.times.size):
        lines.append(format_csv_row(
            [traj.times[i], *traj.states[i], *u_vals[i], integrand[i]]
        ))
    csv_text = "\n".join(lines) + "\n"
    if csv_path:
        with open(csv_path, "w", encoding="utf-8") as fh:
            fh.write(csv_text)
    report = {
        "status": verdict.status,
        "witness": {
            "signal": signals.signal_to_json(wit.signal),
            "T": wit.T,
            "W": wit.W,
            "quadrature_error_estimate": wit.quadrature_error_estimate,
        },
        "notes": verdict.notes,
        "trajectory_csv": csv_path,
    }
    _emit(dumps_canonical(report) + "\n", output)
    if not csv_path:
        _sysmod.stdout.write(csv_text)
    return 0


def _fhn_point_report(mu, beta, gamma, xi, cfg, tols, x_guess=None):
    sys = nonlinear.fhn_system(mu, beta, gamma, xi)
    guess = x_guess if x_guess is not None else \
        nonlinear.fhn_equilibrium_guesses(mu, beta, gamma, xi)[0]
    return nonlinear.analyze_equilibrium_pipeline(sys, guess, cfg)


def cmd_fhn(mu, beta, gamma, xi, overrides, output=None, sweep=None,
            sweep_csv=None):
    cfg = _witness_config(overrides)
    tols = _classifier_tols(overrides)
    report = {"params": {"mu": mu, "beta": beta, "gamma": gamma, "xi": xi}}
    try:
        report["pipeline"] = _fhn_point_report(mu, beta, gamma, xi, cfg, tols)
    except StageError as exc:
        report["pipeline"] = {"error": str(exc), "stage": exc.stage}

    if sweep is not None:
        lo, hi, count = sweep
        mus = np.linspace(lo, hi, count)
        rows = []
        x_guess = None
        abscissas = []
        for m in mus:
            try:
                sysm = nonlinear.fhn_system(m, beta, gamma, xi)
                guess = x_guess if x_guess is not None else \
                    nonlinear.fhn_equilibrium_guesses(m, beta, gamma, xi)[0]
                eq = nonlinear.find_equilibrium(sysm, guess)
                x_guess = eq.x_star
                max_re = float(np.linalg.eigvals(eq.jacobian_full).real.max())
                rf = complexity.fhn_rational(float(eq.x_star[0]), beta, xi)
                edge = complexity.edge_of_chaos_classify(rf, tols)
                rows.append((float(m), float(eq.x_star[0]), float(eq.x_star[1]),
                             max_re, edge.edge_of_chaos))
                abscissas.append((float(m), max_re))
            except LocactError as exc:
                rows.append((float(m), "error", str(exc), "", ""))
        csv_lines = ["mu,x_d,y_d,maxReEig_full,edge_of_chaos"]
        csv_lines += [format_csv_row(r) for r in rows]
        csv_text = "\n".join(csv_lines) + "\n"
        if sweep_csv:
            with open(sweep_csv, "w", encoding="utf-8") as fh:
                fh.write(csv_text)
        mu_star = None
        for (m0, p0), (m1, p1) in zip(abscissas[:-1], abscissas[1:]):
            if np.sign(p0) != np.sign(p1) and p0 != 0.0:
                try:
                    res = nonlinear.hopf_locate(
                        lambda m: nonlinear.fhn_system(m, beta, gamma, xi),
                        m0, m1, tol=1e-6,
                    )
                    mu_star = {"mu": res.mu_star, "is_hopf": res.is_hopf,
                               "equilibrium": res.equilibrium.tolist()}
                except LocactError as exc:
                    mu_star = {"error": str(exc)}
                break
        report["sweep"] = {"points": len(rows), "csv": sweep_csv,
                           "hopf": mu_star}
        if not sweep_csv:
            report["sweep"]["rows"] = [list(r) for r in rows]
    _emit(dumps_canonical(report) + "\n", output)
    return 0


_RD_KINETICS = ("fhn", "linear")


def cmd_rd_cell(spec_path, overrides, output=None):
    try:
        with open(spec_path, "r", encoding="utf-8") as fh:
            spec = json.load(fh)
    except (OSError, json.JSONDecodeError) as exc:
        raise InputError(f"cannot read model spec: {exc}") from exc
    try:
        N = int(spec.get("N", 1))
        boundary = spec.get("boundary", "dirichlet")
        m = int(spec["m"])
        n = int(spec["n"])
        D = [float(d) for d in spec["D"]]
        kin = spec["kinetics"]
        kind = kin["type"]
    except (KeyError, TypeError, ValueError) as exc:
        raise InputError(f"malformed model spec: {exc}") from exc
    if kind not in _RD_KINETICS:
        raise InputError(f"unknown kinetics '{kind}' (choose from {_RD_KINETICS})")
    if not (1 <= m <= n):
        raise InputError(f"need 1 <= m <= n, got m={m}, n={n}")
    if len(D) != m:
        raise InputError(f"expected {m} diffusion coefficients, got {len(D)}")

    if kind == "fhn":
        if (m, n) != (1, 2):
            raise InputError("fhn kinetics requires m=1, n=2")
        params = {k: float(kin.get(k, d)) for k, d in
                  (("mu", 0.05), ("beta", 1.28), ("gamma", 0.12), ("xi", 0.1))}
        base = nonlinear.fhn_system(**params)
        f_a = lambda x: np.asarray(base.f(x))[:1]
        f_b = lambda x: np.asarray(base.f(x))[1:]
        default_guess = nonlinear.fhn_equilibrium_guesses(**params)[0]
    else:
        try:
            A_kin = np.asarray(kin["A"], dtype=float)
        except (KeyError, ValueError) as exc:
            raise InputError(f"linear kinetics needs a matrix 'A': {exc}") from exc
        if A_kin.shape != (n, n):
            raise InputError(f"kinetics matrix must be {n}x{n}")
        f_a = lambda x: A_kin[:m] @ np.asarray(x, dtype=float)
        f_b = lambda x: A_kin[m:] @ np.asarray(x, dtype=float)
        default_guess = np.zeros(n)

    try:
        cell = nonlinear.rd_single_cell(f_a, f_b, D, m, n)
        lap = nonlinear.discrete_laplacian(N, boundary)
    except (LocactError, ValueError) as exc:
        raise InputError(str(exc)) from exc
    cfg = _witness_config(overrides)
    guesses = spec.get("guesses") or [default_guess.tolist()]
    reports = []
    for guess in guesses:
        try:
            reports.append(nonlinear.analyze_equilibrium_pipeline(
                cell, np.asarray(guess, dtype=float), cfg))
        except StageError as exc:
            reports.append({"error": str(exc), "stage": exc.stage})
    out = {
        "spec": {"N": N, "boundary": boundary, "m": m, "n": n, "D": D,
                 "kinetics": kind},
        "laplacian": lap.tolist(),
        "reports": reports,
    }
    _emit(dumps_canonical(out) + "\n", output)
    return 0


def cmd_genericity(n, samples, seed, overrides, output=None):
    if n < 1:
        raise InputError("n must be at least 1")
    if samples < 1:
        raise InputError("samples must be at least 1")
    tol = overrides.get("genericity_tol", 1e-8)
    fraction = genericity.sample_density_M(n, samples, seed, tol=tol)
    report = {"n": n, "samples": samples, "seed": seed,
              "fraction": fraction, "tol": tol}
    _emit(dumps_canonical(report) + "\n", output)
    return 0


def _parse_sweep(text):
    parts = text.split(":")
    if len(parts) != 3:
        raise InputError("--sweep expects lo:hi:steps")
    try:
        lo, hi, count = float(parts[0]), float(parts[1]), int(parts[2])
    except ValueError as exc:
        raise InputError(f"bad --sweep value: {exc}") from exc
    if count < 2 or not lo < hi:
        raise InputError("--sweep needs lo < hi and steps >= 2")
    return lo, hi, count


def build_parser():
    parser = argparse.ArgumentParser(
        prog="locact",
        description="Local activity / passivity analysis of linear and "
                    "linearized port systems",
        epilog="Tolerances: every knob is exposed as --tol.<name>=<value>; "
               "known names: " + ", ".join(sorted(_TOL_KEYS)),
    )
    parser.add_argument("--seed", type=int, default=None,
                        help="RNG seed (fallback: env LOCACT_SEED, then 0)")
    parser.add_argument("--output", type=str, default=None,
                        help="write the JSON report here instead of stdout")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("analyze", help="classify a linear port system (A, P)")
    p.add_argument("matrix", help="path to the system matrix A (JSON or text)")
    p.add_argument("projection", help="path to the projection matrix P")

    p = sub.add_parser("witness", help="emit a verified activity witness + CSV")
    p.add_argument("matrix")
    p.add_argument("projection")
    p.add_argument("--csv", type=str, default=None,
                   help="write the sampled trajectory CSV here")

    p = sub.add_parser("fhn", help="FitzHugh-Nagumo pipeline / parameter sweep")
    p.add_argument("--mu", type=float, default=0.05)
    p.add_argument("--beta", type=float, default=1.28)
    p.add_argument("--gamma", type=float, default=0.12)
    p.add_argument("--xi", type=float, default=0.1)
    p.add_argument("--sweep", type=str, default=None, metavar="LO:HI:STEPS")
    p.add_argument("--sweep-csv", type=str, default=None)

    p = sub.add_parser("rd-cell", help="single reaction-diffusion cell pipeline")
    p.add_argument("spec", help="path to the model spec JSON")

    p = sub.add_parser("genericity", help="statistical density of the generic set")
    p.add_argument("--n", type=int, required=True)
    p.add_argument("--samples", type=int, default=1000)

    return parser


def main(argv=None) -> int:
    argv = list(_sysmod.argv[1:] if argv is None else argv)
    try:
        overrides, rest = _extract_tol_flags(argv)
        parser = build_parser()
        try:
            args = parser.parse_args(rest)
        except SystemExit as exc:
            return 2 if exc.code not in (0, None) else 0
        seed = args.seed
        if seed is None:
            seed = int(os.environ.get("LOCACT_SEED", "0"))
        cfg = RunConfig(command=args.command, overrides=overrides, seed=seed,
                        output=args.output)
        if cfg.command == "analyze":
            return cmd_analyze_linear(args.matrix, args.projection,
                                      cfg.overrides, output=cfg.output)
        if cfg.command == "witness":
            return cmd_witness(args.matrix, args.projection, cfg.overrides,
                               output=cfg.output, csv_path=args.csv)
        if cfg.command == "fhn":
            sweep = _parse_sweep(args.sweep) if args.sweep else None
            return cmd_fhn(args.mu, args.beta, args.gamma, args.xi,
                           cfg.overrides, output=cfg.output, sweep=sweep,
                           sweep_csv=args.sweep_csv)
        if cfg.command == "rd-cell":
            return cmd_rd_cell(args.spec, cfg.overrides, output=cfg.output)
        if cfg.command == "genericity":
            return cmd_genericity(args.n, args.samples, cfg.seed, cfg.overrides,
                                  output=cfg.output)
        raise InputError(f"unknown command {cfg.command!r}")
    except InputError as exc:
        _sysmod.stdout.write(dumps_canonical({"error": str(exc)}) + "\n")
        return 2
    except LocactError as exc:
        _sysmod.stdout.write(dumps_canonical(
            {"error": f"{type(exc).__name__}: {exc}"}) + "\n")
        return 2


if __name__ == "__main__":
    raise SystemExit(main())
