"""Finite Gaussian pulse versus the sudden kick for |0,0>, as the pulse width halves."""

import argparse
import sys

from elliptic_alignment.dynamics import PulseParams
from elliptic_alignment.output import render
from elliptic_alignment.validation import DEFAULT_FWHMS, is_monotone_decreasing, sudden_convergence


def main():
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("--a2", type=float, default=1 / 3)
    ap.add_argument("--xi", type=float, default=11.1)
    ap.add_argument("--jmax", type=int, default=28)
    args = ap.parse_args()

    rows = sudden_convergence(PulseParams(args.a2, args.xi), DEFAULT_FWHMS, j_max=args.jmax)
    cols = {
        "fwhm_over_taurot": [r.fwhm for r in rows],
        "max_trace_deviation": [r.max_trace_deviation for r in rows],
        "trace_distance": [r.trace_distance for r in rows],
    }
    monotone = is_monotone_decreasing(rows)
    sys.stdout.write(render(cols, {"a2": args.a2, "xi": args.xi, "monotone_decreasing": monotone}, "csv"))
    return 0 if monotone else 3


if __name__ == "__main__":
    sys.exit(main())
