"""Regenerate the figure-data CSVs behind the value-vs-penalty and
value-vs-radius curves.

For each distortion preset this sweeps the penalty rate at a few fixed
ball radii, and the radius at a few fixed penalty rates, writing one CSV
per curve through the CLI so the files are byte-stable across runs.

Usage:
    python3 scripts/make_figure_data.py [--outdir figure_data] [--grid-n 10000]
"""

import argparse
import pathlib
import sys

from wassrisk.cli import main as cli_main
from wassrisk.solver import ProblemSpec, PenaltySpec, epsilon_bounds
from wassrisk.distortions import parse_distortion
from wassrisk.grids import MomentTarget
from wassrisk.references import ReferenceDistribution

REFERENCE = "normal:0,1"
TARGET = ("--mu", "0", "--sigma", "1")

# (label, distortion string, fixed radii for delta sweeps, fixed rates
#  for eps sweeps); None in the radius list means "use eps_max".
CURVES = [
    ("dual_power_5", "dualpower:5", [0.085, 0.13, None], [0.0, 0.15, 0.35]),
    ("cvar_0.7", "cvar:0.7", [0.16, 0.32, None], [0.0, 0.15, 0.35]),
]


def _bounds(distortion: str, grid_n: int) -> tuple[float, float]:
    spec = ProblemSpec(
        ReferenceDistribution.normal(0.0, 1.0),
        parse_distortion(distortion),
        MomentTarget(0.0, 1.0),
        PenaltySpec(0.0),
        n=grid_n,
    )
    return epsilon_bounds(spec)


def _sweep(args: list[str], out: pathlib.Path) -> None:
    rc = cli_main(args + ["--out", str(out)])
    if rc != 0:
        raise SystemExit(f"sweep failed with exit code {rc}: {out.name}")
    print(f"wrote {out}")


def main(argv=None) -> int:
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--outdir", default="figure_data", help="output directory")
    ap.add_argument("--grid-n", type=int, default=10_000, dest="grid_n")
    ap.add_argument("--steps", type=int, default=81, help="points per curve")
    ns = ap.parse_args(argv)

    outdir = pathlib.Path(ns.outdir)
    outdir.mkdir(parents=True, exist_ok=True)
    common = ["--reference", REFERENCE, *TARGET, "--grid-n", str(ns.grid_n)]

    for label, dist, radii, rates in CURVES:
        eps_min, eps_max = _bounds(dist, ns.grid_n)
        for eps in radii:
            eps_val = eps_max if eps is None else eps
            tag = "eps_max" if eps is None else f"eps_{eps_val:g}"
            _sweep(
                ["sweep", "--distortion", dist, *common,
                 "--eps", repr(eps_val), "--axis", "delta",
                 "--from", "0", "--to", "3", "--steps", str(ns.steps)],
                outdir / f"{label}_value_vs_delta_{tag}.csv",
            )
        for delta in rates:
            _sweep(
                ["sweep", "--distortion", dist, *common,
                 "--delta", repr(delta), "--axis", "eps",
                 "--from", repr(eps_min), "--to", repr(1.2 * eps_max),
                 "--steps", str(ns.steps)],
                outdir / f"{label}_value_vs_eps_delta_{delta:g}.csv",
            )
    return 0


if __name__ == "__main__":
    sys.exit(main())
