"""Peak alignment along x, y, z versus a^2 and the crossing points of the curves."""

import argparse
import sys
import time

from elliptic_alignment.output import render
from elliptic_alignment.scan import default_a2_grid, default_times, ellipticity_scan, find_crossing
from elliptic_alignment.thermal import EnsembleSpec


def main():
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("--xi", type=float, default=11.1)
    ap.add_argument("--temperature", type=float, default=20.0)
    ap.add_argument("--points", type=int, default=51)
    ap.add_argument("--samples", type=int, default=4096)
    ap.add_argument("--workers", type=int, default=1)
    ap.add_argument("-o", "--output")
    args = ap.parse_args()

    start = time.perf_counter()
    scan = ellipticity_scan(EnsembleSpec(args.temperature), args.xi, default_a2_grid(args.points),
                            default_times(args.samples), workers=args.workers)
    elapsed = time.perf_counter() - start
    meta = {"xi": args.xi, "temperature_dimensionless": args.temperature}
    for pair in (("z", "y"), ("z", "x")):
        cross = find_crossing(scan, pair)
        meta["crossing_" + "".join(pair)] = cross.a2
        print(f"crossing {pair}: a2 = {cross.a2:.4f}; all sign changes {cross.candidates}",
              file=sys.stderr)
    print(f"{args.points} points in {elapsed:.1f} s", file=sys.stderr)
    cols = {"a2": scan.a2_grid, "max_cos2x": scan.max_cos2x, "max_cos2y": scan.max_cos2y,
            "max_cos2z": scan.max_cos2z}
    text = render(cols, meta, "csv")
    if args.output:
        with open(args.output, "w") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)


if __name__ == "__main__":
    main()
