"""Worst-case distortion risk with a linear Wasserstein penalty.

The problem solved here is

    sup_G  H_g(G) - delta * d_W^2(F, G)

over all distributions G with prescribed mean/std (mu, sigma), optionally
further restricted to the ball d_W^2(F, G) <= eps.  On the midpoint grid
the objective depends on G only through the score vector

    s_delta = gamma + 2 delta F^{-1},

and the optimizer is the standardization of s_delta when it is monotone
(concave distortions always are), or of its isotonic projection r_delta
otherwise.  The optimal value has the closed form

    mu - delta (eps_min + 2 sigma sigma_F) + sigma std(r_delta).

For the ball there is a budget threshold delta_star(eps): penalties at or
above it keep the unconstrained family member inside the ball (Interior),
smaller penalties pin the solution to the sphere of radius eps via the
family member at delta_star (Boundary).  Every closed form is re-checked
against a direct grid evaluation; disagreement raises InternalCheckFailed
because it can only mean a bug.

All scalar statistics (means, stds, correlations) are grid moments under
the uniform 1/n cell measure, which is what makes these identities exact
at finite n.
"""

from __future__ import annotations

import enum
import math
from dataclasses import dataclass

import numpy as np

from .distortions import DistortionSpec, GammaGrid, gamma_grid
from .errors import (AssumptionA1Violated, AssumptionA4Violated,
                     DegenerateProjection, GridSizeMismatch, InfeasibleRadius,
                     InternalCheckFailed, MomentMismatch, NotConcave,
                     RadiusOutOfRange, RhoDegenerate)
from .grids import MomentTarget, QuantileGrid
from .isotonic import isotonic_project
from .references import ReferenceDistribution, sample_quantile

DEFAULT_GRID_N = 10_000

_A1_TOL = 1e-12
_RHO_TOL = 1e-9
_BISECT_TOL = 1e-10
_MONOTONE_SLACK = 1e-12


class Regime(str, enum.Enum):
    """Which branch of the solution applies."""

    INFEASIBLE = "Infeasible"
    DEGENERATE = "Degenerate"
    BOUNDARY = "Boundary"
    INTERIOR = "Interior"
    UNCONSTRAINED = "Unconstrained"
    MOMENT_ONLY = "MomentOnly"


@dataclass(frozen=True)
class PenaltySpec:
    """Linear penalty phi(x) = delta * x on the squared distance."""

    delta: float

    def __post_init__(self):
        if not np.isfinite(self.delta) or self.delta < 0.0:
            raise ValueError(f"penalty rate must be finite and >= 0, got {self.delta}")


@dataclass(frozen=True, eq=False)
class ProblemSpec:
    """Full problem statement: reference, distortion, moments, penalty.

    radius_sq is the squared-distance budget eps for the ball variant;
    None means the moment-only problem.  allow_var opts in to quantile
    distortions whose grid results are discretization-dependent.
    """

    reference: ReferenceDistribution
    distortion: DistortionSpec
    target: MomentTarget
    penalty: PenaltySpec
    radius_sq: float | None = None
    n: int = DEFAULT_GRID_N
    allow_var: bool = False

    def __post_init__(self):
        if self.n < 2:
            raise ValueError(f"grid size must be >= 2, got {self.n}")
        if self.radius_sq is not None and not np.isfinite(self.radius_sq):
            raise ValueError("radius_sq must be finite when given")


@dataclass(frozen=True)
class SolverDiagnostics:
    eps_min: float
    eps_max: float
    rho: float
    sigma0: float
    sigma_delta: float
    mu_delta: float
    delta_star: float | None
    eps_star: float | None
    used_isotonic: bool
    warning: str | None = None


@dataclass(frozen=True, eq=False)
class Solution:
    regime: Regime
    optimal_quantile: QuantileGrid
    value: float
    risk_part: float
    achieved_distance_sq: float
    diagnostics: SolverDiagnostics


@dataclass(eq=False)
class _Workspace:
    """Resolved arrays and grid scalars shared by every operation."""

    spec: ProblemSpec
    f: np.ndarray
    w: np.ndarray
    gamma: GammaGrid
    mu: float
    sigma: float
    delta: float
    mu_f: float
    sigma_f: float
    sigma0: float
    concave: bool
    rho_raw: float
    rho_eff: float
    rhat0: np.ndarray | None
    eps_min: float
    eps_max: float


def _mean(v: np.ndarray) -> float:
    return float(np.mean(v))


def _std(v: np.ndarray) -> float:
    return float(np.sqrt(np.mean((v - np.mean(v)) ** 2)))


def _corr_vec(a: np.ndarray, b: np.ndarray) -> float:
    da = a - np.mean(a)
    db = b - np.mean(b)
    sa = math.sqrt(float(np.mean(da**2)))
    sb = math.sqrt(float(np.mean(db**2)))
    c = float(np.mean(da * db)) / (sa * sb)
    return min(1.0, max(-1.0, c))


def _resolve(spec: ProblemSpec) -> _Workspace:
    if spec.distortion.kind == "var" and not spec.allow_var:
        raise AssumptionA1Violated(
            "VaR distortion: the spectral weight is a point mass, so grid "
            "results are discretization-dependent; pass allow_var to proceed")
    gamma = gamma_grid(spec.distortion, spec.n)
    if not gamma.satisfies_a1:
        raise AssumptionA1Violated("sigma0 = 0: Assumption 2.1 fails")
    fgrid = sample_quantile(spec.reference, spec.n)
    f = fgrid.values
    mu_f = _mean(f)
    sigma_f = _std(f)
    rho_raw = _corr_vec(f, gamma.weights)
    if gamma.is_concave:
        rhat0, rho_eff = None, rho_raw
    else:
        rhat0 = isotonic_project(gamma.weights).projected
        if _std(rhat0) == 0.0:
            raise DegenerateProjection(
                "isotonic projection of the spectral weights is constant")
        rho_eff = _corr_vec(f, rhat0)
    mu, sigma = spec.target.mu, spec.target.sigma
    eps_min = (mu_f - mu) ** 2 + (sigma_f - sigma) ** 2
    eps_max = eps_min + 2.0 * sigma * sigma_f * (1.0 - rho_eff)
    return _Workspace(
        spec=spec, f=f, w=gamma.weights, gamma=gamma, mu=mu, sigma=sigma,
        delta=spec.penalty.delta, mu_f=mu_f, sigma_f=sigma_f,
        sigma0=gamma.sigma0, concave=gamma.is_concave, rho_raw=rho_raw,
        rho_eff=rho_eff, rhat0=rhat0, eps_min=eps_min, eps_max=eps_max)


def _check_close(a: float, b: float, tol: float, what: str) -> None:
    if abs(a - b) > tol * max(1.0, abs(a), abs(b)):
        raise InternalCheckFailed(
            f"{what}: closed form {b!r} and grid evaluation {a!r} "
            f"disagree beyond {tol}")


def _score(ws: _Workspace, delta: float) -> np.ndarray:
    return ws.w + 2.0 * delta * ws.f


def _projected_score(ws: _Workspace, delta: float,
                     force: bool = False) -> tuple[np.ndarray, bool]:
    """Score vector projected onto the monotone cone when needed.

    Returns (vector, used_isotonic).  Monotone scores pass through
    untouched unless force is set, in which case the projection (an exact
    identity on monotone input) runs anyway.
    """
    s = _score(ws, delta)
    monotone = bool(np.all(np.diff(s) >= 0.0))
    if monotone and not force:
        return s, False
    return isotonic_project(s).projected, not monotone


def _sigma_delta_closed(ws: _Workspace, delta: float) -> float:
    return math.sqrt(ws.sigma0**2 + 4.0 * delta**2 * ws.sigma_f**2
                     + 4.0 * delta * ws.sigma0 * ws.sigma_f * ws.rho_raw)


def _standardize(ws: _Workspace, v: np.ndarray) -> tuple[np.ndarray, float, float]:
    m = _mean(v)
    s = _std(v)
    if s == 0.0:
        raise DegenerateProjection("score projection is constant; no optimizer")
    return ws.mu + ws.sigma * ((v - m) / s), m, s


def _grid_objective(ws: _Workspace, qv: np.ndarray) -> tuple[float, float, float]:
    risk = float(np.mean(ws.w * qv))
    ach = float(np.mean((ws.f - qv) ** 2))
    return risk - ws.delta * ach, risk, ach


def _eps_star_at(ws: _Workspace, delta: float, proj: np.ndarray | None = None) -> float:
    if proj is None:
        proj, _ = _projected_score(ws, delta)
    return ws.eps_min + 2.0 * ws.sigma * ws.sigma_f * (1.0 - _corr_vec(ws.f, proj))


def epsilon_bounds(spec: ProblemSpec) -> tuple[float, float]:
    """(eps_min, eps_max): the ball radii between which the problem is
    neither empty nor equivalent to the moment-only one.

    eps_min is the squared distance from F to the nearest point of the
    moment set; eps_max adds the correlation slack 2 sigma sigma_F
    (1 - rho), with rho measured against the isotonic projection of the
    weights for non-concave distortions.
    """
    ws = _resolve(spec)
    return ws.eps_min, ws.eps_max


def f_of_delta(spec: ProblemSpec, delta: float) -> float:
    """Correlation between F and the family member at penalty delta.

    Closed form for concave distortions only; strictly increasing in
    delta from rho at 0 toward 1.
    """
    if not np.isfinite(delta) or delta < 0.0:
        raise ValueError(f"delta must be finite and >= 0, got {delta}")
    ws = _resolve(spec)
    if not ws.concave:
        raise NotConcave(
            "f(delta) has a closed form only for concave distortions; "
            "use epsilon_star, which evaluates corr(F, r_delta) directly")
    return _f_closed(ws, delta)


def _f_closed(ws: _Workspace, delta: float) -> float:
    num = 2.0 * delta * ws.sigma_f**2 + ws.sigma0 * ws.sigma_f * ws.rho_raw
    return num / (ws.sigma_f * _sigma_delta_closed(ws, delta))


def delta_star(spec: ProblemSpec, eps: float) -> float:
    """Budget threshold: the penalty whose family member sits exactly on
    the sphere of squared radius eps.

    Concave distortions use the closed form (positive quadratic root);
    otherwise the strictly increasing map delta -> corr(F, r_delta) is
    bisected with an expanding bracket.  Requires eps strictly inside
    (eps_min, eps_max) and rho < 1 - 1e-9.
    """
    ws = _resolve(spec)
    return _delta_star_resolved(ws, eps)


def _delta_star_resolved(ws: _Workspace, eps: float) -> float:
    if not np.isfinite(eps):
        raise RadiusOutOfRange(f"eps must be finite, got {eps}")
    if ws.rho_eff >= 1.0 - _RHO_TOL:
        raise RhoDegenerate(
            "reference quantile and spectral weights are perfectly "
            "correlated; the threshold equation has no root")
    if not (ws.eps_min < eps < ws.eps_max):
        raise RadiusOutOfRange(
            f"eps={eps!r} outside (eps_min, eps_max) = "
            f"({ws.eps_min!r}, {ws.eps_max!r})")
    target = 1.0 - (eps - ws.eps_min) / (2.0 * ws.sigma * ws.sigma_f)
    if ws.concave:
        s0, sf, rho = ws.sigma0, ws.sigma_f, ws.rho_raw
        span = ws.eps_min + 2.0 * ws.sigma * ws.sigma_f - eps
        wide = ws.eps_min + 4.0 * ws.sigma * ws.sigma_f - eps
        ds = (-s0 * rho / (2.0 * sf)
              + s0 * span * math.sqrt(1.0 - rho**2)
              / (2.0 * sf * math.sqrt(wide * (eps - ws.eps_min))))
        _check_close(_f_closed(ws, ds), target, 1e-8, "f(delta_star)")
        return ds
    return _delta_star_bisect(ws, target)


def _delta_star_bisect(ws: _Workspace, target: float) -> float:
    def fn(d: float) -> float:
        proj, _ = _projected_score(ws, d)
        return _corr_vec(ws.f, proj)

    evals: list[tuple[float, float]] = [(0.0, ws.rho_eff)]
    lo, hi = 0.0, 1.0
    fhi = fn(hi)
    evals.append((hi, fhi))
    while fhi < target:
        if hi > 2.0**60:
            raise AssumptionA4Violated(
                "corr(F, r_delta) failed to reach its target under bracket "
                "expansion; the correlation map looks non-monotone or stuck")
        lo, hi = hi, 2.0 * hi
        fhi = fn(hi)
        evals.append((hi, fhi))
    while hi - lo > _BISECT_TOL:
        mid = 0.5 * (lo + hi)
        fm = fn(mid)
        evals.append((mid, fm))
        if fm < target:
            lo = mid
        else:
            hi = mid
    evals.sort()
    for (d0, c0), (d1, c1) in zip(evals, evals[1:]):
        if c1 < c0 - _MONOTONE_SLACK:
            raise AssumptionA4Violated(
                f"corr(F, r_delta) decreased from {c0!r} to {c1!r} between "
                f"delta={d0!r} and delta={d1!r}")
    ds = 0.5 * (lo + hi)
    _check_close(fn(ds), target, 1e-8, "corr(F, r_delta_star)")
    return ds


def epsilon_star(spec: ProblemSpec, delta: float) -> float:
    """Squared distance of the family member at penalty delta from F.

    eps_star(delta) = eps_min + 2 sigma sigma_F (1 - corr(F, r_delta));
    decreasing in delta from eps_max toward eps_min.
    """
    if not np.isfinite(delta) or delta < 0.0:
        raise ValueError(f"delta must be finite and >= 0, got {delta}")
    ws = _resolve(spec)
    if ws.rho_eff >= 1.0 - _RHO_TOL:
        raise RhoDegenerate(
            "reference quantile and spectral weights are perfectly "
            "correlated; the whole family collapses onto F")
    if ws.concave:
        return ws.eps_min + 2.0 * ws.sigma * ws.sigma_f * (1.0 - _f_closed(ws, delta))
    return _eps_star_at(ws, delta)


def _diagnostics(ws: _Workspace, sigma_delta: float, mu_delta: float,
                 used_isotonic: bool, dstar: float | None,
                 estar: float | None, warning: str | None = None) -> SolverDiagnostics:
    return SolverDiagnostics(
        eps_min=ws.eps_min, eps_max=ws.eps_max, rho=ws.rho_eff,
        sigma0=ws.sigma0, sigma_delta=sigma_delta, mu_delta=mu_delta,
        delta_star=dstar, eps_star=estar, used_isotonic=used_isotonic,
        warning=warning)


def _moment_pieces(ws: _Workspace, force_isotonic: bool):
    proj, used = _projected_score(ws, ws.delta, force=force_isotonic)
    qv, mu_d, sd = _standardize(ws, proj)
    value, risk, ach = _grid_objective(ws, qv)
    closed = (ws.mu - ws.delta * (ws.eps_min + 2.0 * ws.sigma * ws.sigma_f)
              + ws.sigma * sd)
    _check_close(value, closed, 1e-9, "moment-set value")
    estar = _eps_star_at(ws, ws.delta, proj)
    return qv, value, risk, ach, mu_d, sd, used, estar


def solve_moment_set(spec: ProblemSpec, *, _force_isotonic: bool = False) -> Solution:
    """Worst case over the full moment set M(mu, sigma).

    The optimizer is the standardized (possibly isotonic-projected) score
    gamma + 2 delta F^{-1}; the reported value is the grid objective,
    cross-checked against the closed form to 1e-9.
    """
    ws = _resolve(spec)
    qv, value, risk, ach, mu_d, sd, used, estar = _moment_pieces(ws, _force_isotonic)
    diag = _diagnostics(ws, sd, mu_d, used, None, estar)
    return Solution(Regime.MOMENT_ONLY, QuantileGrid(qv), value, risk, ach, diag)


def _degenerate_solution(ws: _Workspace, warning: str | None) -> Solution:
    qv, _, sf = _standardize(ws, ws.f)
    value, risk, ach = _grid_objective(ws, qv)
    closed = ws.mu + ws.sigma * ws.sigma0 * ws.rho_raw - ws.delta * ws.eps_min
    _check_close(value, closed, 1e-8, "degenerate value")
    proj, used = _projected_score(ws, ws.delta)
    mu_d, sd = _mean(proj), _std(proj)
    estar = _eps_star_at(ws, ws.delta, proj)
    diag = _diagnostics(ws, sd, mu_d, used, None, estar, warning=warning)
    return Solution(Regime.DEGENERATE, QuantileGrid(qv), value, risk, ach, diag)


def _a4_gate(ws: _Workspace, dstar: float, boundary: bool) -> None:
    """Spot-check Assumption 4.1 around the working penalty range.

    (a) corr(F, r_delta) must be non-decreasing on a geometric grid
    spanning the threshold; (b), needed only on the Boundary branch,
    corr(s_delta, r_dprime) must be non-increasing for dprime > delta.
    """
    base = max(dstar, ws.delta, 1e-3)
    grid = np.unique(np.concatenate(
        [np.geomspace(base / 32.0, base * 32.0, 9), [dstar, ws.delta]]))
    grid = grid[grid > 0.0]
    rhats = {d: _projected_score(ws, d)[0] for d in grid}
    cs = [(d, _corr_vec(ws.f, rhats[d])) for d in grid]
    for (d0, c0), (d1, c1) in zip(cs, cs[1:]):
        if c1 < c0 - _MONOTONE_SLACK:
            raise AssumptionA4Violated(
                f"corr(F, r_delta) decreased between delta={d0!r} and {d1!r}")
    if boundary:
        s = _score(ws, ws.delta)
        above = [d for d in grid if d > ws.delta]
        pairs = [(d, _corr_vec(s, rhats[d])) for d in above]
        for (d0, c0), (d1, c1) in zip(pairs, pairs[1:]):
            if c1 > c0 + _MONOTONE_SLACK:
                raise AssumptionA4Violated(
                    f"corr(gamma + 2 delta F, r_dprime) increased between "
                    f"dprime={d0!r} and {d1!r}")


def solve_ball(spec: ProblemSpec, *, _force_isotonic: bool = False) -> Solution:
    """Worst case over the moment set intersected with the eps-ball.

    Dispatch on the budget: below eps_min the set is empty (raises
    InfeasibleRadius); at eps_min only the standardized reference grid
    is feasible (Degenerate); at or above eps_max the constraint is
    slack (Unconstrained, identical to the moment-only solve); otherwise
    the penalty is compared with the threshold delta_star(eps).
    """
    ws = _resolve(spec)
    if spec.radius_sq is None:
        raise ValueError("solve_ball requires radius_sq on the problem spec")
    eps = float(spec.radius_sq)
    tol = _RHO_TOL * max(1.0, ws.eps_min)
    if eps < ws.eps_min - tol:
        raise InfeasibleRadius(
            f"epsilon below eps_min: set is empty "
            f"(eps={eps!r}, eps_min={ws.eps_min!r})")
    if eps <= ws.eps_min + tol:
        return _degenerate_solution(ws, None)
    if ws.rho_eff >= 1.0 - _RHO_TOL:
        return _degenerate_solution(
            ws, "rho = 1: every family member coincides with the "
                "standardized reference; ball budget is irrelevant")
    if eps >= ws.eps_max:
        qv, value, risk, ach, mu_d, sd, used, estar = _moment_pieces(
            ws, _force_isotonic)
        diag = _diagnostics(ws, sd, mu_d, used, None, estar)
        return Solution(Regime.UNCONSTRAINED, QuantileGrid(qv), value, risk,
                        ach, diag)

    dstar = _delta_star_resolved(ws, eps)
    if not ws.concave:
        _a4_gate(ws, dstar, boundary=ws.delta < dstar)

    if ws.delta >= dstar:
        qv, value, risk, ach, mu_d, sd, used, estar = _moment_pieces(
            ws, _force_isotonic)
        if ach > eps + 1e-9:
            raise InternalCheckFailed(
                f"interior solution left the ball: d^2={ach!r} > eps={eps!r}")
        diag = _diagnostics(ws, sd, mu_d, used, dstar, estar)
        return Solution(Regime.INTERIOR, QuantileGrid(qv), value, risk, ach,
                        diag)

    # Boundary: the solution is the family member at delta_star, valued
    # under the caller's penalty.
    proj_star, used_star = _projected_score(ws, dstar, force=_force_isotonic)
    qv, mu_star, sd_star = _standardize(ws, proj_star)
    value, risk, ach = _grid_objective(ws, qv)
    if abs(ach - eps) > 1e-6 * max(1.0, eps):
        raise InternalCheckFailed(
            f"boundary solution missed the sphere: d^2={ach!r} vs eps={eps!r}")
    s_d = _score(ws, ws.delta)
    sd_d = _std(s_d)
    cross = _corr_vec(s_d, proj_star)
    closed = (ws.mu - ws.delta * (ws.eps_min + 2.0 * ws.sigma * ws.sigma_f)
              + ws.sigma * sd_d * cross)
    _check_close(value, closed, 1e-8, "boundary value (covariance route)")
    if ws.concave:
        # scalar route: the same correlation from grid moments alone
        num = (ws.sigma0**2
               + 2.0 * (ws.delta + dstar) * ws.sigma0 * ws.sigma_f * ws.rho_raw
               + 4.0 * ws.delta * dstar * ws.sigma_f**2)
        closed2 = (ws.mu - ws.delta * (ws.eps_min + 2.0 * ws.sigma * ws.sigma_f)
                   + ws.sigma * num / _sigma_delta_closed(ws, dstar))
        _check_close(value, closed2, 1e-8, "boundary value (scalar route)")
    estar = _eps_star_at(ws, ws.delta)
    diag = _diagnostics(ws, sd_star, mu_star, used_star, dstar, estar)
    return Solution(Regime.BOUNDARY, QuantileGrid(qv), value, risk, ach, diag)


def objective_eval(spec: ProblemSpec, q: QuantileGrid) -> float:
    """Penalized objective of an arbitrary feasible grid.

    The grid must carry the target moments within 1e-6; the ball budget,
    if any, is not enforced here.
    """
    ws = _resolve(spec)
    if q.n != ws.spec.n:
        raise GridSizeMismatch(f"grid has {q.n} cells, problem uses {ws.spec.n}")
    qm, qs = _mean(q.values), _std(q.values)
    if abs(qm - ws.mu) > 1e-6 or abs(qs - ws.sigma) > 1e-6:
        raise MomentMismatch(
            f"grid moments ({qm}, {qs}) do not match target ({ws.mu}, {ws.sigma})")
    value, _, _ = _grid_objective(ws, q.values)
    return value


def objective_along_family(spec: ProblemSpec, delta_bar: float) -> float:
    """Objective of the family member G_{delta_bar} under penalty delta.

    Closed form for concave distortions; strictly decreasing in
    delta_bar beyond delta, which is what pins Boundary solutions at
    delta_star.
    """
    if not np.isfinite(delta_bar) or delta_bar < 0.0:
        raise ValueError(f"delta_bar must be finite and >= 0, got {delta_bar}")
    ws = _resolve(spec)
    if not ws.concave:
        raise NotConcave("family objective closed form needs a concave distortion")
    sd_bar = _sigma_delta_closed(ws, delta_bar)
    h = (ws.sigma * sd_bar
         + 2.0 * (ws.delta - delta_bar) * (ws.sigma / sd_bar)
         * (2.0 * delta_bar * ws.sigma_f**2
            + ws.sigma0 * ws.sigma_f * ws.rho_raw))
    return ws.mu - ws.delta * (ws.eps_min + 2.0 * ws.sigma * ws.sigma_f) + h


@dataclass(frozen=True)
class A4Report:
    """Numerical monotonicity audit of the two correlation maps."""

    applicable: bool
    corr_to_reference_increasing: bool | None
    family_corr_decreasing: bool | None
    first_violation: tuple[float, float] | None
    note: str = ""

    @property
    def passed(self) -> bool:
        return bool(self.applicable
                    and self.corr_to_reference_increasing
                    and self.family_corr_decreasing)


def check_assumption_a4(spec: ProblemSpec, delta_grid) -> A4Report:
    """Evaluate Assumption 4.1 on a penalty grid.

    (a) delta -> corr(F, r_delta) must be non-decreasing; (b) for each
    grid delta, dprime -> corr(gamma + 2 delta F^{-1}, r_dprime) must be
    non-increasing on the grid points beyond delta.  Concave distortions
    satisfy (a) identically (the map is f(delta)); a constant weight
    vector makes the whole question inapplicable.
    """
    ds = np.unique(np.asarray(delta_grid, dtype=float))
    if ds.size < 2 or np.any(~np.isfinite(ds)) or np.any(ds < 0.0):
        raise ValueError("delta_grid must hold >= 2 finite nonnegative points")
    gamma = gamma_grid(spec.distortion, spec.n)
    if not gamma.satisfies_a1:
        return A4Report(False, None, None, None, note="sigma0 = 0: not applicable")
    ws = _resolve(spec)
    rhats = {d: _projected_score(ws, d)[0] for d in ds}
    cs = [(float(d), _corr_vec(ws.f, rhats[d])) for d in ds]
    inc, first = True, None
    for (d0, c0), (d1, c1) in zip(cs, cs[1:]):
        if c1 < c0 - _MONOTONE_SLACK:
            inc, first = False, (d0, d1)
            break
    dec = True
    for d in ds:
        s = _score(ws, float(d))
        pairs = [(float(dp), _corr_vec(s, rhats[dp])) for dp in ds if dp > d]
        for (d0, c0), (d1, c1) in zip(pairs, pairs[1:]):
            if c1 > c0 + _MONOTONE_SLACK:
                dec = False
                if first is None:
                    first = (d0, d1)
                break
        if not dec:
            break
    note = "concave: corr(F, r_delta) equals f(delta)" if ws.concave else ""
    return A4Report(True, inc, dec, first, note=note)
