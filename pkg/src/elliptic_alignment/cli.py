"""Command-line front end.

    elliptic-align simulate      [options]   alignment traces over time
    elliptic-align scan          [options]   peak alignment versus a^2, crossings
    elliptic-align distribution  [options]   angular density grids
    elliptic-align validate-sudden [options] finite pulse vs sudden kick
    elliptic-align constants     [options]   bundled molecular constants

Exit status: 0 success, 2 invalid input, 3 numerical convergence failure.
"""

from __future__ import annotations

import argparse
import sys

import numpy as np

from . import __version__
from .config import COMMANDS, FORMATS, RunConfig
from .constants import get_molecule, load_molecules
from .dynamics import TAU_ROT, kick_strength_from_pulse
from .errors import ConvergenceError, ValidationError
from .observables import angular_distribution
from .output import render
from .scan import default_a2_grid, ellipticity_scan, find_crossing, symmetric_center
from .thermal import ensemble_members, ensemble_trace
from .validation import is_monotone_decreasing, sudden_convergence

EXIT_OK, EXIT_INVALID, EXIT_CONVERGENCE = 0, 2, 3


def _common_meta(cfg: RunConfig, pulse, spec) -> dict:
    meta = {
        "program": f"elliptic_alignment {__version__}",
        "command": cfg.command,
        "molecule": cfg.molecule,
        "a2": pulse.a2,
        "b2": pulse.b2,
        "xi": pulse.xi,
        "temperature_dimensionless": spec.temperature,
        "temperature_K": get_molecule(cfg.molecule).kelvin(spec.temperature),
        "spin_rule": spec.spin_rule,
        "weight_cutoff": spec.weight_cutoff,
    }
    if pulse.physical is not None:
        meta["intensity_TWcm2"] = cfg.intensity_TWcm2
        meta["fwhm_fs"] = cfg.fwhm_fs
    return meta


def run_simulate(cfg: RunConfig):
    pulse, spec = cfg.resolve()
    times = np.linspace(0.0, cfg.periods * TAU_ROT, cfg.time_samples)
    trace = ensemble_trace(spec, pulse, times, j_max=cfg.jmax)
    meta = _common_meta(cfg, pulse, spec)
    meta.update(
        j_max=trace.meta["j_max"],
        units="time in units of tau_rot = pi hbar / B; observables dimensionless",
        tau_rot_ps=get_molecule(cfg.molecule).tau_rot_seconds * 1e12,
        symmetry_center_yz=symmetric_center(trace),
        sum_rule_error=trace.sum_rule_error(),
    )
    columns = {
        "t_over_taurot": times / TAU_ROT,
        "cos2x": trace.cos2x,
        "cos2y": trace.cos2y,
        "cos2z": trace.cos2z,
    }
    summary = [f"j_max = {trace.meta['j_max']}", f"y/z symmetry centre = {meta['symmetry_center_yz']:.4f}"]
    return columns, meta, summary


def run_scan(cfg: RunConfig):
    pulse, spec = cfg.resolve()
    times = np.linspace(0.0, cfg.periods * TAU_ROT, cfg.time_samples)
    result = ellipticity_scan(
        spec, pulse.xi, default_a2_grid(cfg.a2_steps), times, j_max=cfg.jmax, workers=cfg.workers
    )
    meta = _common_meta(cfg, pulse, spec)
    meta.pop("a2")
    meta.pop("b2")
    summary = []
    for pair in (("z", "y"), ("z", "x")):
        key = "crossing_" + "".join(pair)
        try:
            cross = find_crossing(result, pair)
        except ConvergenceError as exc:
            meta[key] = "none"
            summary.append(f"{key}: {exc}")
            continue
        meta[key] = cross.a2
        meta[key + "_candidates"] = cross.candidates
        summary.append(f"{key} = {cross.a2:.4f} (all sign changes: {', '.join(f'{c:.4f}' for c in cross.candidates)})")
    meta["j_max"] = result.meta["j_max"]
    columns = {
        "a2": result.a2_grid,
        "max_cos2x": result.max_cos2x,
        "max_cos2y": result.max_cos2y,
        "max_cos2z": result.max_cos2z,
    }
    for a in "xyz":
        columns[f"t_peak_{a}_over_taurot"] = result.t_peak[a] / TAU_ROT
    return columns, meta, summary


def run_distribution(cfg: RunConfig):
    pulse, spec = cfg.resolve()
    if cfg.jmax is not None:
        j_max = cfg.jmax
    else:
        probe = ensemble_trace(spec, pulse, np.linspace(0.0, TAU_ROT, 257))
        j_max = probe.meta["j_max"]
    meta = _common_meta(cfg, pulse, spec)
    meta.update(j_max=j_max, units="density per steradian; t in units of tau_rot")
    cols = {"t_over_taurot": [], "theta": [], "phi": [], "density": []}
    summary = []
    for tau in cfg.distribution_times_taurot:
        members = ensemble_members(spec, pulse, tau * TAU_ROT, j_max)
        grid = angular_distribution(members, cfg.grid_theta, cfg.grid_phi)
        th, ph = np.meshgrid(grid.theta, grid.phi, indexing="ij")
        cols["t_over_taurot"].append(np.full(th.size, tau))
        cols["theta"].append(th.ravel())
        cols["phi"].append(ph.ravel())
        cols["density"].append(grid.density.ravel())
        peak = grid.argmax()
        meta[f"norm_at_{tau!r}"] = grid.total()
        summary.append(
            f"t = {tau:g} tau_rot: total {grid.total():.8f}, "
            f"max density at theta={peak[0]:.3f}, phi={peak[1]:.3f}"
        )
    columns = {k: np.concatenate(v) for k, v in cols.items()}
    return columns, meta, summary


def run_validate_sudden(cfg: RunConfig):
    pulse, _ = cfg.resolve()
    kwargs = {} if cfg.jmax is None else {"j_max": cfg.jmax}
    rows = sudden_convergence(pulse, cfg.sudden_fwhms_taurot, **kwargs)
    monotone = is_monotone_decreasing(rows)
    meta = {
        "program": f"elliptic_alignment {__version__}",
        "command": cfg.command,
        "a2": pulse.a2,
        "xi": pulse.xi,
        "initial_state": "|0,0>",
        "monotone_decreasing": monotone,
        "units": "fwhm in units of tau_rot; deviation is max_t |<cos^2 theta_z>| difference",
    }
    columns = {
        "fwhm_over_taurot": np.array([r.fwhm for r in rows]),
        "max_trace_deviation": np.array([r.max_trace_deviation for r in rows]),
        "trace_distance": np.array([r.trace_distance for r in rows]),
    }
    summary = [f"fwhm {r.fwhm:.3e}: deviation {r.max_trace_deviation:.3e}" for r in rows]
    if not monotone:
        summary.append("deviation is NOT monotone in the pulse width")
    return columns, meta, summary, (EXIT_OK if monotone else EXIT_CONVERGENCE)


def run_constants(cfg: RunConfig):
    names = sorted(load_molecules())
    mols = [get_molecule(n) for n in names]
    columns = {
        "molecule": names,
        "rotational_constant_cm": [m.rotational_constant_cm for m in mols],
        "delta_alpha_A3": [m.delta_alpha_A3 for m in mols],
        "spin_rule": [m.spin_rule for m in mols],
        "tau_rot_ps": [m.tau_rot_seconds * 1e12 for m in mols],
    }
    meta = {"program": f"elliptic_alignment {__version__}", "command": "constants"}
    if cfg.intensity_TWcm2 is not None:
        columns["xi"] = [kick_strength_from_pulse(m.pulse(cfg.intensity_TWcm2, cfg.fwhm_fs)) for m in mols]
        meta.update(intensity_TWcm2=cfg.intensity_TWcm2, fwhm_fs=cfg.fwhm_fs)
    return columns, meta, []


RUNNERS = {
    "simulate": run_simulate,
    "scan": run_scan,
    "distribution": run_distribution,
    "validate-sudden": run_validate_sudden,
    "constants": run_constants,
}


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--config", help="run configuration file ([run] section)")
    common.add_argument("--molecule", help="bundled molecule (default CO2)")
    common.add_argument("--a2", type=float, help="squared half-axis along x, in [0, 1]")
    common.add_argument("--xi", type=float, help="dimensionless kick strength")
    common.add_argument("--intensity-twcm2", type=float, dest="intensity_TWcm2",
                        help="peak intensity in TW/cm^2 (with --fwhm-fs, replaces --xi)")
    common.add_argument("--fwhm-fs", type=float, dest="fwhm_fs", help="intensity FWHM in fs")
    common.add_argument("--temperature", type=float, dest="temperature_dimensionless",
                        help="reduced temperature kT/B")
    common.add_argument("--temperature-k", type=float, dest="temperature_K",
                        help="temperature in kelvin (replaces --temperature)")
    common.add_argument("--spin-rule", help="even_j_only | odd_j_only | all_j | weighted")
    common.add_argument("--jmax", type=int, help="basis truncation (default: adaptive)")
    common.add_argument("--times", type=int, dest="time_samples", help="time samples per run")
    common.add_argument("--periods", type=float, help="simulated span in rotational periods")
    common.add_argument("--a2-steps", type=int, dest="a2_steps", help="points on the a^2 grid")
    common.add_argument("--at", type=float, nargs="+", dest="distribution_times_taurot",
                        help="distribution times in units of tau_rot (negative: before the kick)")
    common.add_argument("--workers", type=int, help="parallel scan points")
    common.add_argument("--output", "-o", help="output file (default stdout)")
    common.add_argument("--format", choices=FORMATS)
    common.add_argument("--save-config", help="write the resolved configuration here")

    parser = argparse.ArgumentParser(
        prog="elliptic-align",
        description="Field-free alignment of linear molecules kicked by elliptic pulses.",
    )
    parser.add_argument("--version", action="version", version=__version__)
    sub = parser.add_subparsers(dest="command", required=True)
    for name in COMMANDS:
        sub.add_parser(name, parents=[common])
    return parser


def config_from_args(args) -> RunConfig:
    cfg = RunConfig.load(args.config) if args.config else RunConfig()
    overrides = {
        k: getattr(args, k)
        for k in ("molecule", "a2", "xi", "intensity_TWcm2", "fwhm_fs",
                  "temperature_dimensionless", "temperature_K", "spin_rule", "jmax",
                  "time_samples", "periods", "a2_steps", "workers", "output", "format")
    }
    if args.distribution_times_taurot:
        overrides["distribution_times_taurot"] = tuple(args.distribution_times_taurot)
    overrides["command"] = args.command
    return cfg.with_overrides(**overrides)


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    try:
        cfg = config_from_args(args)
        if args.save_config:
            with open(args.save_config, "w") as fh:
                fh.write(cfg.to_ini())
        result = RUNNERS[cfg.command](cfg)
        columns, meta, summary = result[:3]
        status = result[3] if len(result) > 3 else EXIT_OK
        text = render(columns, meta, cfg.format)
        if cfg.output:
            with open(cfg.output, "w") as fh:
                fh.write(text)
        else:
            sys.stdout.write(text)
        for line in summary:
            print(line, file=sys.stderr)
        return status
    except ValidationError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_INVALID
    except ConvergenceError as exc:
        print(f"convergence failure: {exc}", file=sys.stderr)
        return EXIT_CONVERGENCE
    except OSError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_INVALID


if __name__ == "__main__":
    sys.exit(main())
