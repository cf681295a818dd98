"""Kerr signals (<cos^2 theta_i> - 1/3)^2 for a CO2 sample kicked by a 25 TW/cm^2, 100 fs pulse.

The default temperature is 296 K.  Also reports how far <cos^2 theta_x>
strays from 1/3, which is small only when the thermal ensemble is hot.
"""

import argparse
import sys

import numpy as np

from elliptic_alignment.constants import get_molecule
from elliptic_alignment.dynamics import TAU_ROT, PulseParams
from elliptic_alignment.observables import kerr_signal
from elliptic_alignment.output import render
from elliptic_alignment.thermal import ensemble_trace


def main():
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("--a2", type=float, default=1 / 3)
    ap.add_argument("--kelvin", type=float, default=296.0)
    ap.add_argument("--intensity-twcm2", type=float, default=25.0)
    ap.add_argument("--fwhm-fs", type=float, default=100.0)
    ap.add_argument("--samples", type=int, default=2048)
    ap.add_argument("-o", "--output")
    args = ap.parse_args()

    co2 = get_molecule("CO2")
    pulse = PulseParams.from_physical(args.a2, co2.pulse(args.intensity_twcm2, args.fwhm_fs))
    spec = co2.ensemble(co2.reduced_temperature(args.kelvin))
    trace = ensemble_trace(spec, pulse, np.linspace(0, TAU_ROT, args.samples))
    cols = {"t_ps": trace.times / TAU_ROT * co2.tau_rot_seconds * 1e12}
    for axis in "xyz":
        cols["kerr_" + axis] = kerr_signal(trace, axis)
    ratio = cols["kerr_x"].max() / cols["kerr_y"].max()
    meta = {"a2": args.a2, "xi": pulse.xi, "temperature_K": args.kelvin,
            "temperature_dimensionless": spec.temperature, "j_max": trace.meta["j_max"]}
    print(f"xi {pulse.xi:.3f}, T/B {spec.temperature:.1f}, j_max {trace.meta['j_max']}", file=sys.stderr)
    print(f"max |x - 1/3| = {np.max(np.abs(trace.cos2x - 1 / 3)):.4f}, "
          f"peak Kerr x/y = {ratio:.4f}", file=sys.stderr)
    text = render(cols, meta, "csv")
    if args.output:
        with open(args.output, "w") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)


if __name__ == "__main__":
    main()
