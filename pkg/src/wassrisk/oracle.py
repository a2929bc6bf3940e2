"""Brute-force verification of solver values.

The oracle never trusts the closed forms: it samples random feasible
quantile grids, runs a projected gradient ascent from the best of them,
and checks that (a) nothing beats the solver value beyond tolerance and
(b) the best point found comes close enough to it.  Deliberately slow
and independent; meant for n around a few hundred.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .errors import SamplingExhausted, VerificationFailed
from .grids import QuantileGrid
from .isotonic import isotonic_project
from .solver import (ProblemSpec, _grid_objective, _resolve, _standardize,
                     solve_ball, solve_moment_set)

_MAX_ATTEMPTS = 1_000


@dataclass(frozen=True)
class OracleConfig:
    """Sampling and ascent budget.

    gap_tol is the largest accepted shortfall of the empirical best below
    the closed form (default calibrated for n around 200); corrupt_offset
    shifts the solver value and exists so the harness can prove it fails
    when the solver lies.
    """

    samples: int = 10_000
    ascent_iters: int = 500
    step: float = 0.1
    seed: int = 1
    ascent_starts: int = 10
    gap_tol: float = 1e-2
    corrupt_offset: float = 0.0

    def __post_init__(self):
        if self.samples <= 0 or self.ascent_iters <= 0 or self.step <= 0.0:
            raise ValueError("samples, ascent_iters and step must be positive")
        if self.ascent_starts <= 0 or self.gap_tol <= 0.0:
            raise ValueError("ascent_starts and gap_tol must be positive")


@dataclass(frozen=True, eq=False)
class OracleReport:
    best_value: float
    closed_form_value: float
    gap: float
    violations: int
    samples: int
    seed: int
    passed: bool
    best_grid: QuantileGrid


def _base_shape(n: int, rng: np.random.Generator) -> np.ndarray:
    """Random non-decreasing shape from nonnegative increments.

    Four increment laws give qualitatively different profiles: smooth
    random walks, sparse bursts with long flats, a single step at a
    random cell, and power ramps.  The variety matters: step-like and
    ramp-like grids are where tail-weighted objectives peak, and a
    sampler that never produces them never gets near the optimum.
    """
    kind = int(rng.integers(4))
    if kind == 0:
        inc = rng.exponential(1.0, size=n)
    elif kind == 1:
        k = float(np.exp(rng.uniform(np.log(0.02), np.log(1.0))))
        inc = rng.gamma(k, 1.0, size=n)
    elif kind == 2:
        inc = np.zeros(n)
        inc[int(rng.integers(1, n))] = 1.0
    else:
        p = float(np.exp(rng.uniform(np.log(0.5), np.log(8.0))))
        u = (2.0 * np.arange(1, n + 1) - 1.0) / (2.0 * n)
        return u**p
    return np.cumsum(inc)


def _sample_values(ws, eps: float | None, rng: np.random.Generator) -> np.ndarray:
    """One random feasible grid as a raw value vector.

    A random non-decreasing shape is mixed with the standardized
    reference grid by a random weight lam, then standardized to the
    target moments.  When a ball budget is in force and the draw lands
    outside, lam is pushed toward 1 and the shape redrawn: mixing toward
    F drives the distance down to eps_min, so any budget above eps_min
    is eventually met.
    """
    n = ws.f.size
    f_shape = (ws.f - np.mean(ws.f)) / np.std(ws.f)
    lam = float(rng.uniform())
    for _ in range(_MAX_ATTEMPTS):
        base = _base_shape(n, rng)
        base = base - base.mean()
        sd = np.sqrt(np.mean(base**2))
        if sd == 0.0:
            continue
        mix = (1.0 - lam) * (base / sd) + lam * f_shape
        qv, _, _ = _standardize(ws, mix)
        if eps is None:
            return qv
        if float(np.mean((ws.f - qv) ** 2)) <= eps:
            return qv
        lam += (1.0 - lam) * 0.5
    raise SamplingExhausted(
        f"no feasible grid found in {_MAX_ATTEMPTS} attempts "
        f"(eps={eps!r} may be too close to eps_min)")


def sample_feasible(spec: ProblemSpec, rng: np.random.Generator) -> QuantileGrid:
    """Draw one random grid from the feasible set of the problem."""
    ws = _resolve(spec)
    return QuantileGrid(_sample_values(ws, spec.radius_sq, rng))


def _shrink_into_ball(ws, qv: np.ndarray, eps: float,
                      f_aligned: np.ndarray) -> np.ndarray:
    """Mix toward the standardized reference until the budget holds."""
    if float(np.mean((ws.f - qv) ** 2)) <= eps:
        return qv
    lo, hi = 0.0, 1.0
    for _ in range(60):
        mid = 0.5 * (lo + hi)
        cand, _, _ = _standardize(ws, (1.0 - mid) * qv + mid * f_aligned)
        if float(np.mean((ws.f - cand) ** 2)) <= eps:
            hi = mid
        else:
            lo = mid
    out, _, _ = _standardize(ws, (1.0 - hi) * qv + hi * f_aligned)
    return out


def projected_ascent(spec: ProblemSpec, start: QuantileGrid,
                     cfg: OracleConfig) -> QuantileGrid:
    """Hill-climb the penalized objective inside the feasible set.

    Each iteration takes a gradient step, projects back to monotone,
    re-standardizes, and shrinks into the ball when one is in force.
    Steps that fail to improve halve the step size, so the objective is
    non-decreasing across iterations and an optimizer is a fixed point.
    """
    ws = _resolve(spec)
    eps = spec.radius_sq
    f_aligned, _, _ = _standardize(ws, ws.f)
    q = np.asarray(start.values, dtype=float)
    best_v, _, _ = _grid_objective(ws, q)
    step = cfg.step
    for _ in range(cfg.ascent_iters):
        grad = ws.w - 2.0 * ws.delta * (q - ws.f)
        cand = q + step * grad
        cand = isotonic_project(cand).projected
        cand, _, _ = _standardize(ws, cand)
        if eps is not None:
            cand = _shrink_into_ball(ws, cand, float(eps), f_aligned)
        v, _, _ = _grid_objective(ws, cand)
        if v > best_v + 1e-12:
            q, best_v = cand, v
        else:
            step *= 0.5
            if step < 1e-12:
                break
    return QuantileGrid(q)


def verify(spec: ProblemSpec, cfg: OracleConfig = OracleConfig()) -> OracleReport:
    """Compare the solver value against random search plus ascent.

    Passes iff no sampled or ascended grid beats the solver value by more
    than 1e-9 and the empirical best lands within cfg.gap_tol below it.
    On failure raises VerificationFailed carrying the report (and thus
    the offending grid).  Identical seeds give identical reports.
    """
    ws = _resolve(spec)
    closed = (solve_ball(spec) if spec.radius_sq is not None
              else solve_moment_set(spec)).value
    closed += cfg.corrupt_offset
    eps = spec.radius_sq
    rng = np.random.default_rng(cfg.seed)

    violations = 0
    top: list[tuple[float, np.ndarray]] = []
    best_v, best_q = -np.inf, None
    for _ in range(cfg.samples):
        qv = _sample_values(ws, eps, rng)
        v, _, _ = _grid_objective(ws, qv)
        if v > closed + 1e-9:
            violations += 1
        if v > best_v:
            best_v, best_q = v, qv
        top.append((v, qv))
        top.sort(key=lambda t: -t[0])
        del top[cfg.ascent_starts:]

    for v0, qv in top:
        refined = projected_ascent(spec, QuantileGrid(qv), cfg)
        v, _, _ = _grid_objective(ws, refined.values)
        if v > closed + 1e-9:
            violations += 1
        if v > best_v:
            best_v, best_q = v, refined.values

    gap = closed - best_v
    passed = violations == 0 and gap <= cfg.gap_tol
    report = OracleReport(
        best_value=best_v, closed_form_value=closed, gap=gap,
        violations=violations, samples=cfg.samples, seed=cfg.seed,
        passed=passed, best_grid=QuantileGrid(best_q))
    if not passed:
        raise VerificationFailed(
            f"verification failed: gap={gap!r}, violations={violations}",
            report=report)
    return report
