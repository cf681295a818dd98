"""Finite-pulse propagation versus the sudden kick."""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .dynamics import (
    TAU_ROT,
    PulseParams,
    WavePacket,
    apply_kick,
    free_evolve,
    integrate_timedependent,
    prepare_kick,
)
from .observables import state_trace

DEFAULT_FWHMS = tuple(1e-2 / 2**k for k in range(7)) + (1e-4,)


@dataclass
class SuddenComparison:
    fwhm: float  # in units of tau_rot
    max_trace_deviation: float  # max_t |<cos^2 theta_z>_sudden - <cos^2 theta_z>_pulse|
    trace_distance: float


def compare_sudden(
    pulse: PulseParams,
    fwhm: float,
    j0: int = 0,
    m0: int = 0,
    j_max: int = 28,
    n_times: int = 1024,
    half_width: float = 5.0,
    steps_per_fwhm: int = 100,
) -> SuddenComparison:
    """Kick |j0, m0> with a Gaussian pulse of the given FWHM (units of tau_rot).

    Both routes start from the same state before the pulse; the sudden route
    evolves freely to the pulse centre, kicks, and evolves on.  The two
    post-pulse states are compared over one rotational period.
    """
    width = fwhm * TAU_ROT
    t_start = -half_width * width
    initial = WavePacket.basis_state(j0, m0, j_max, t=t_start)
    finite = integrate_timedependent(
        initial, pulse, width, half_width=half_width, steps_per_fwhm=steps_per_fwhm
    )
    kick = prepare_kick(initial.block, pulse.a2)
    sudden = apply_kick(free_evolve(initial, -t_start), kick, pulse.xi)
    sudden = free_evolve(sudden, finite.t - sudden.t)

    times = finite.t + np.linspace(0.0, TAU_ROT, n_times)
    dev = np.max(np.abs(state_trace(sudden, times).cos2z - state_trace(finite, times).cos2z))
    overlap = abs(np.vdot(sudden.coeffs, finite.coeffs))
    distance = float(np.sqrt(max(0.0, 1.0 - overlap**2)))
    return SuddenComparison(fwhm, float(dev), distance)


def sudden_convergence(pulse: PulseParams, fwhms=DEFAULT_FWHMS, **kwargs) -> list[SuddenComparison]:
    return [compare_sudden(pulse, f, **kwargs) for f in fwhms]


def is_monotone_decreasing(rows: list[SuddenComparison]) -> bool:
    devs = [r.max_trace_deviation for r in rows]
    return all(b < a for a, b in zip(devs, devs[1:]))
