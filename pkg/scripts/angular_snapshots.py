"""Angular density of the thermal ensemble at selected times (units of tau_rot).

One CSV block per time with columns theta, phi, density; the location of the
density maximum and the grid normalization go to stderr.
"""

import argparse
import sys

import numpy as np

from elliptic_alignment.dynamics import TAU_ROT, PulseParams
from elliptic_alignment.observables import angular_distribution
from elliptic_alignment.output import render
from elliptic_alignment.thermal import EnsembleSpec, ensemble_members


def main():
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("--a2", type=float, default=1 / 3)
    ap.add_argument("--xi", type=float, default=11.1)
    ap.add_argument("--temperature", type=float, default=20.0)
    ap.add_argument("--jmax", type=int, default=32)
    ap.add_argument("--at", type=float, nargs="+", default=[0.25, 0.375, 0.75])
    ap.add_argument("-o", "--output")
    args = ap.parse_args()

    spec, pulse = EnsembleSpec(args.temperature), PulseParams(args.a2, args.xi)
    cols = {"t_over_taurot": [], "theta": [], "phi": [], "density": []}
    for tau in args.at:
        grid = angular_distribution(ensemble_members(spec, pulse, tau * TAU_ROT, args.jmax))
        th, ph = np.meshgrid(grid.theta, grid.phi, indexing="ij")
        cols["t_over_taurot"].append(np.full(th.size, tau))
        cols["theta"].append(th.ravel())
        cols["phi"].append(ph.ravel())
        cols["density"].append(grid.density.ravel())
        theta, phi = grid.argmax()
        print(f"t = {tau:g} tau_rot: norm {grid.total():.8f}, max at theta {theta:.3f}, phi {phi:.3f}",
              file=sys.stderr)
    meta = {"a2": args.a2, "xi": args.xi, "temperature_dimensionless": args.temperature,
            "j_max": args.jmax}
    text = render({k: np.concatenate(v) for k, v in cols.items()}, meta, "csv")
    if args.output:
        with open(args.output, "w") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)


if __name__ == "__main__":
    main()
