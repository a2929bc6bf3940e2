"""Command-line interface: solve, sweep, verify, info.

Exit codes: 0 success, 2 infeasible budget, 3 parse/input error,
4 assumption violated, 5 verification failed.
"""

from __future__ import annotations

import argparse
import dataclasses
import json
import sys
from dataclasses import dataclass

import numpy as np

from .distortions import DistortionSpec, gamma_grid, parse_distortion
from .errors import (AssumptionA1Violated, AssumptionA4Violated,
                     DegenerateProjection, InfeasibleRadius, IngestError,
                     InvalidDistortion, NotConcave, RadiusOutOfRange,
                     RhoDegenerate, VerificationFailed, WassriskError)
from .grids import MomentTarget, grid_mean, grid_std
from .oracle import OracleConfig, verify
from .references import ReferenceDistribution, load_samples_csv, sample_quantile
from .solver import (DEFAULT_GRID_N, PenaltySpec, ProblemSpec, Regime,
                     _resolve, check_assumption_a4, solve_ball,
                     solve_moment_set)

EXIT_OK = 0
EXIT_INFEASIBLE = 2
EXIT_PARSE = 3
EXIT_ASSUMPTION = 4
EXIT_VERIFY = 5


class _ParseError(Exception):
    pass


@dataclass
class RunConfig:
    reference: str = "normal:0,1"
    distortion: str = "cvar:0.7"
    mu: float = 0.0
    sigma: float = 1.0
    delta: float = 0.0
    eps: float | None = None
    grid_n: int = DEFAULT_GRID_N
    seed: int = 1
    out: str | None = None
    format: str = "json"
    allow_var: bool = False
    samples: int = 10_000
    ascent_iters: int = 500
    step: float = 0.1
    self_test_corrupt: bool = False


def parse_reference(text: str) -> ReferenceDistribution:
    head, sep, rest = text.partition(":")
    head = head.strip().lower()
    if not sep:
        raise _ParseError(f"malformed reference spec: {text!r}")
    try:
        if head == "normal":
            m, s = (float(x) for x in rest.split(","))
            return ReferenceDistribution.normal(m, s)
        if head == "uniform":
            lo, hi = (float(x) for x in rest.split(","))
            return ReferenceDistribution.uniform(lo, hi)
        if head == "empirical":
            return ReferenceDistribution.empirical(load_samples_csv(rest))
    except IngestError:
        raise
    except (ValueError, OSError) as exc:
        raise _ParseError(f"malformed reference spec {text!r}: {exc}") from None
    raise _ParseError(f"unknown reference kind: {head!r}")


def _build_problem(cfg: RunConfig) -> ProblemSpec:
    return ProblemSpec(
        reference=parse_reference(cfg.reference),
        distortion=parse_distortion(cfg.distortion),
        target=MomentTarget(cfg.mu, cfg.sigma),
        penalty=PenaltySpec(cfg.delta),
        radius_sq=cfg.eps,
        n=cfg.grid_n,
        allow_var=cfg.allow_var,
    )


def _dump_json(obj, out: str | None) -> None:
    text = json.dumps(obj, indent=2)
    if out:
        with open(out, "w") as fh:
            fh.write(text + "\n")
    else:
        sys.stdout.write(text + "\n")


def _fmt(x) -> str:
    # repr keeps >= 12 significant digits and is byte-stable across runs
    return "" if x is None else repr(float(x))


def cmd_solve(cfg: RunConfig) -> int:
    spec = _build_problem(cfg)
    sol = solve_ball(spec) if spec.radius_sq is not None else solve_moment_set(spec)
    d = sol.diagnostics
    result = {
        "regime": sol.regime.value,
        "value": sol.value,
        "risk_part": sol.risk_part,
        "achieved_distance_sq": sol.achieved_distance_sq,
        "eps_min": d.eps_min,
        "eps_max": d.eps_max,
        "rho": d.rho,
        "delta_star": d.delta_star,
        "eps_star": d.eps_star,
        "used_isotonic": d.used_isotonic,
    }
    if d.warning:
        result["warning"] = d.warning
    if cfg.format == "csv":
        if not cfg.out:
            raise _ParseError("--format csv needs --out for the quantile table")
        u = sol.optimal_quantile.midpoints()
        fgrid = sample_quantile(spec.reference, spec.n)
        with open(cfg.out, "w", newline="") as fh:
            fh.write("u,optimal_quantile,reference_quantile\n")
            for ui, qi, fi in zip(u, sol.optimal_quantile.values, fgrid.values):
                fh.write(f"{_fmt(ui)},{_fmt(qi)},{_fmt(fi)}\n")
        _dump_json(result, None)
    else:
        _dump_json(result, cfg.out)
    return EXIT_OK


def cmd_sweep(cfg: RunConfig, axis: str, lo: float, hi: float, steps: int) -> int:
    if steps < 2:
        raise _ParseError(f"sweep needs at least 2 steps, got {steps}")
    if axis not in ("delta", "eps"):
        raise _ParseError(f"sweep axis must be 'delta' or 'eps', got {axis!r}")
    lines = ["axis_value,regime,value,achieved_distance_sq,delta_star_or_eps_star"]
    for x in np.linspace(lo, hi, steps):
        point = dataclasses.replace(cfg)
        if axis == "delta":
            point.delta = float(x)
        else:
            point.eps = float(x)
        spec = _build_problem(point)
        try:
            sol = (solve_ball(spec) if spec.radius_sq is not None
                   else solve_moment_set(spec))
        except InfeasibleRadius:
            lines.append(f"{_fmt(x)},{Regime.INFEASIBLE.value},,,")
            continue
        star = (sol.diagnostics.delta_star if axis == "eps"
                else sol.diagnostics.eps_star)
        lines.append(
            f"{_fmt(x)},{sol.regime.value},{_fmt(sol.value)},"
            f"{_fmt(sol.achieved_distance_sq)},{_fmt(star)}")
    text = "\n".join(lines) + "\n"
    if cfg.out:
        with open(cfg.out, "w", newline="") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)
    return EXIT_OK


def cmd_verify(cfg: RunConfig) -> int:
    spec = _build_problem(cfg)
    ocfg = OracleConfig(
        samples=cfg.samples, ascent_iters=cfg.ascent_iters, step=cfg.step,
        seed=cfg.seed, corrupt_offset=0.1 if cfg.self_test_corrupt else 0.0)
    try:
        report = verify(spec, ocfg)
    except VerificationFailed as exc:
        _dump_json(_report_json(exc.report), cfg.out)
        print(f"verification failed: {exc}", file=sys.stderr)
        return EXIT_VERIFY
    _dump_json(_report_json(report), cfg.out)
    return EXIT_OK


def _report_json(report) -> dict:
    return {
        "passed": report.passed,
        "best_value": report.best_value,
        "closed_form_value": report.closed_form_value,
        "gap": report.gap,
        "violations": report.violations,
        "samples": report.samples,
        "seed": report.seed,
        "best_grid": [float(v) for v in report.best_grid.values],
    }


def cmd_info(cfg: RunConfig) -> int:
    """Diagnostics without solving: bounds, correlation, concavity."""
    ref = parse_reference(cfg.reference)
    dist = parse_distortion(cfg.distortion)
    if dist.kind == "var" and not cfg.allow_var:
        raise AssumptionA1Violated(
            "VaR distortion: the spectral weight is a point mass, so grid "
            "results are discretization-dependent; pass --allow-var to proceed")
    gamma = gamma_grid(dist, cfg.grid_n)
    fgrid = sample_quantile(ref, cfg.grid_n)
    info = {
        "reference": cfg.reference,
        "distortion": cfg.distortion,
        "grid_n": cfg.grid_n,
        "mu_f_grid": grid_mean(fgrid),
        "sigma_f_grid": grid_std(fgrid),
        "sigma0": gamma.sigma0,
        "is_concave": gamma.is_concave,
        "satisfies_a1": gamma.satisfies_a1,
    }
    if not gamma.satisfies_a1:
        info.update(rho=None, eps_min=None, eps_max=None,
                    warning="sigma0 = 0: Assumption 2.1 fails")
    else:
        spec = _build_problem(cfg)
        ws = _resolve(spec)
        info.update(rho=ws.rho_eff, eps_min=ws.eps_min, eps_max=ws.eps_max)
        if not gamma.is_concave:
            hi = max(1.0, 4.0 * cfg.delta)
            rep = check_assumption_a4(spec, np.geomspace(hi / 64.0, hi, 8))
            info["a4_check"] = {
                "passed": rep.passed,
                "corr_to_reference_increasing": rep.corr_to_reference_increasing,
                "family_corr_decreasing": rep.family_corr_decreasing,
                "first_violation": rep.first_violation,
            }
    _dump_json(info, cfg.out)
    return EXIT_OK


def _load_config_file(path: str) -> dict:
    """Flat key=value file mirroring the long flags."""
    out = {}
    try:
        with open(path) as fh:
            for ln, line in enumerate(fh, start=1):
                s = line.strip()
                if not s or s.startswith("#"):
                    continue
                key, sep, val = s.partition("=")
                if not sep:
                    raise _ParseError(f"{path}: line {ln}: expected key=value")
                out[key.strip().lower().replace("-", "_")] = val.strip()
    except OSError as exc:
        raise _ParseError(f"cannot read config file {path}: {exc}") from None
    return out


_CONFIG_CASTS = {
    "mu": float, "sigma": float, "delta": float, "eps": float,
    "grid_n": int, "seed": int, "samples": int, "ascent_iters": int,
    "step": float,
    "allow_var": lambda s: s.lower() in ("1", "true", "yes", "on"),
    "self_test_corrupt": lambda s: s.lower() in ("1", "true", "yes", "on"),
}


def _apply_config(args: argparse.Namespace) -> RunConfig:
    cfg = RunConfig()
    if getattr(args, "config", None):
        file_vals = _load_config_file(args.config)
        for key, raw in file_vals.items():
            if not hasattr(cfg, key):
                raise _ParseError(f"unknown config key: {key!r}")
            try:
                setattr(cfg, key, _CONFIG_CASTS.get(key, str)(raw))
            except ValueError:
                raise _ParseError(f"bad value for config key {key!r}: {raw!r}") from None
    for key in RunConfig.__dataclass_fields__:
        val = getattr(args, key, None)
        if val is not None:
            setattr(cfg, key, val)
    return cfg


def _add_common(p: argparse.ArgumentParser) -> None:
    p.add_argument("--reference", help="normal:mu,sigma | uniform:lo,hi | empirical:path")
    p.add_argument("--distortion",
                   help="cvar:a | var:a | dualpower:b | piecewise:x,y;... | gammafile:path")
    p.add_argument("--mu", type=float, help="target mean")
    p.add_argument("--sigma", type=float, help="target standard deviation")
    p.add_argument("--delta", type=float, help="penalty rate (default 0)")
    p.add_argument("--eps", type=float, help="squared-distance budget (ball variant)")
    p.add_argument("--grid-n", dest="grid_n", type=int, help="grid size (default 10000)")
    p.add_argument("--seed", type=int, help="oracle RNG seed")
    p.add_argument("--out", help="output path (default stdout)")
    p.add_argument("--format", choices=["json", "csv"], help="solve output format")
    p.add_argument("--allow-var", dest="allow_var", action="store_const", const=True,
                   help="opt in to discretization-dependent VaR results")
    p.add_argument("--config", help="key=value file with the same names as the flags")


def build_parser() -> argparse.ArgumentParser:
    ap = argparse.ArgumentParser(
        prog="wassrisk",
        description="Robust distortion risk over moment sets with a "
                    "Wasserstein-distance penalty")
    sub = ap.add_subparsers(dest="command", required=True)

    p = sub.add_parser("solve", help="solve one problem instance")
    _add_common(p)

    p = sub.add_parser("sweep", help="solve along a parameter axis, emit CSV")
    _add_common(p)
    p.add_argument("--axis", choices=["delta", "eps"], required=True)
    p.add_argument("--from", dest="lo", type=float, required=True)
    p.add_argument("--to", dest="hi", type=float, required=True)
    p.add_argument("--steps", type=int, required=True)

    p = sub.add_parser("verify", help="brute-force check of the solver value")
    _add_common(p)
    p.add_argument("--samples", type=int, help="random feasible grids to draw")
    p.add_argument("--ascent-iters", dest="ascent_iters", type=int,
                   help="gradient-ascent iterations per start")
    p.add_argument("--step", type=float, help="initial ascent step size")
    p.add_argument("--self-test-corrupt", dest="self_test_corrupt",
                   action="store_const", const=True,
                   help="bias the solver value by +0.1 to prove the check can fail")

    p = sub.add_parser("info", help="diagnostics without solving")
    _add_common(p)
    return ap


def main(argv=None) -> int:
    ap = build_parser()
    try:
        args = ap.parse_args(argv)
    except SystemExit as exc:
        return EXIT_OK if exc.code in (0, None) else EXIT_PARSE
    try:
        cfg = _apply_config(args)
        if args.command == "solve":
            return cmd_solve(cfg)
        if args.command == "sweep":
            return cmd_sweep(cfg, args.axis, args.lo, args.hi, args.steps)
        if args.command == "verify":
            return cmd_verify(cfg)
        return cmd_info(cfg)
    except InfeasibleRadius as exc:
        print(str(exc), file=sys.stderr)
        return EXIT_INFEASIBLE
    except (_ParseError, IngestError, InvalidDistortion, ValueError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_PARSE
    except (AssumptionA1Violated, AssumptionA4Violated, NotConcave,
            RhoDegenerate, DegenerateProjection, RadiusOutOfRange) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_ASSUMPTION
    except VerificationFailed as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_VERIFY
    except WassriskError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1


def entrypoint() -> None:
    sys.exit(main())


if __name__ == "__main__":
    entrypoint()
