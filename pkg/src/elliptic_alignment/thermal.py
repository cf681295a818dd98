"""Boltzmann averaging over initial rotational states |j0, m0>."""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .angular import BasisBlock, observables
from .dynamics import PulseParams, WavePacket, apply_kick, free_evolve, prepare_kick
from .errors import ConvergenceError, ValidationError
from .observables import TraceSeries, density_trace

SPIN_RULES = ("even_j_only", "odd_j_only", "all_j", "weighted")

# exp(-700) is still a normal double
_EXP_FLOOR = 700.0


@dataclass(frozen=True)
class EnsembleSpec:
    """Thermal ensemble at reduced temperature kT/B.

    ``weight_cutoff`` is the tolerated Boltzmann weight dropped from the
    high-j tail.  Truncation happens on whole j levels so the retained
    ensemble stays isotropic.
    """

    temperature: float
    spin_rule: str = "even_j_only"
    g_even: float = 1.0
    g_odd: float = 1.0
    weight_cutoff: float = 1e-6

    def __post_init__(self):
        if not self.temperature >= 0:
            raise ValidationError(f"temperature must be non-negative, got {self.temperature}")
        if self.spin_rule not in SPIN_RULES:
            raise ValidationError(f"unknown spin rule {self.spin_rule!r}")
        if not 0 <= self.weight_cutoff < 1:
            raise ValidationError("weight_cutoff must lie in [0, 1)")
        ge, go = self.degeneracies()
        if ge < 0 or go < 0 or ge + go == 0:
            raise ValidationError("nuclear spin weights must be non-negative and not both zero")

    def degeneracies(self) -> tuple[float, float]:
        return {
            "even_j_only": (1.0, 0.0),
            "odd_j_only": (0.0, 1.0),
            "all_j": (1.0, 1.0),
            "weighted": (float(self.g_even), float(self.g_odd)),
        }[self.spin_rule]


def _level_weights(spec: EnsembleSpec) -> list[tuple[int, float]]:
    """(j, per-substate weight) for every populated level, normalized, ascending j."""
    g = spec.degeneracies()
    levels = [j for j in range(2) if g[j % 2] > 0]
    j_low = levels[0]
    e_low = j_low * (j_low + 1)
    if spec.temperature == 0:
        return [(j_low, 1.0)]
    out = []
    j = j_low
    while True:
        reduced = (j * (j + 1) - e_low) / spec.temperature
        if reduced > _EXP_FLOOR:
            break
        if g[j % 2] > 0:
            out.append((j, g[j % 2] * math.exp(-reduced)))
        j += 1
    z = math.fsum((2 * j + 1) * w for j, w in out)
    return [(j, w / z) for j, w in out]


def enumerate_initial_states(spec: EnsembleSpec, j_max: int | None = None):
    """Initial states (j0, m0, weight) in decreasing-weight order.

    Whole j levels are kept, most populated first, until the dropped weight
    falls below ``spec.weight_cutoff``; weights are then renormalized.  If
    ``j_max`` is given and a retained level lies above it, the truncated
    basis cannot hold the ensemble and ConvergenceError is raised.
    """
    levels = sorted(_level_weights(spec), key=lambda jw: (-jw[1], jw[0]))
    kept, total = [], 0.0
    for j, w in levels:
        if total >= 1.0 - spec.weight_cutoff:
            break
        kept.append((j, w))
        total += (2 * j + 1) * w
    if j_max is not None:
        too_high = [j for j, _ in kept if j > j_max]
        if too_high:
            dropped = math.fsum((2 * j + 1) * w for j, w in kept if j > j_max)
            raise ConvergenceError(
                f"j_max={j_max} discards thermal weight {dropped:.2e} "
                f"(levels up to j={max(too_high)} needed at T={spec.temperature})"
            )
    states = [(j, m, w / total) for j, w in kept for m in range(-j, j + 1)]
    return states


def thermal_j_max(spec: EnsembleSpec) -> int:
    return max(j for j, _, _ in enumerate_initial_states(spec))


def _block_densities(spec: EnsembleSpec, pulse: PulseParams, j_max: int, kicked: bool = True):
    """Post-kick density matrix for every (j-parity, m-parity) block.

    States |j0, m0> and |j0, -m0> give identical traces (the interaction and
    the observables are even under phi -> -phi), so only m0 >= 0 is
    propagated, with doubled weight for m0 > 0.
    """
    folded: dict[tuple[int, int], list[tuple[int, int, float]]] = {}
    for j, m, w in enumerate_initial_states(spec, j_max):
        if m < 0:
            continue
        folded.setdefault((j % 2, m % 2), []).append((j, m, w if m == 0 else 2.0 * w))
    out = []
    for (jp, mp), members in sorted(folded.items()):
        block = BasisBlock(jp, mp, j_max)
        cols = np.array([block.index(j, m) for j, m, _ in members])
        weights = np.array([w for _, _, w in members])
        if kicked:
            u = prepare_kick(block, pulse.a2).unitary(pulse.xi)[:, cols]
        else:
            u = np.eye(block.dim)[:, cols]
        rho = (u * weights) @ u.conj().T
        out.append((block, rho))
    return out


def ensemble_trace_fixed(spec: EnsembleSpec, pulse: PulseParams, times, j_max: int) -> TraceSeries:
    """Thermally averaged trace on a fixed basis truncation.

    The ensemble is kicked at t = 0; negative times report the pre-kick
    (isotropic) ensemble.
    """
    times = np.asarray(times, dtype=float)
    if np.any(np.diff(times) <= 0):
        raise ValidationError("time grid must be strictly increasing")
    totals = {a: np.zeros_like(times) for a in "xyz"}
    before = times < 0
    for kicked, mask in ((False, before), (True, ~before)):
        if not mask.any():
            continue
        for block, rho in _block_densities(spec, pulse, j_max, kicked=kicked):
            vals = density_trace(block, rho, observables(block), times[mask])
            for a in "xyz":
                totals[a][mask] += vals[a]
    return TraceSeries(
        times,
        totals["x"],
        totals["y"],
        totals["z"],
        meta={"j_max": j_max, "a2": pulse.a2, "xi": pulse.xi, "temperature": spec.temperature},
    )


def ensemble_trace(
    spec: EnsembleSpec,
    pulse: PulseParams,
    times,
    j_max: int | None = None,
    tol: float = 1e-6,
    j_max_limit: int = 160,
) -> TraceSeries:
    """Thermally averaged alignment trace with adaptive basis truncation.

    Without an explicit ``j_max`` the truncation starts at the highest
    thermal level plus 4*ceil(sqrt(xi)) and the margin doubles until adding
    four more j shells changes every sample by at most ``tol``.
    """
    if j_max is not None:
        return ensemble_trace_fixed(spec, pulse, times, j_max)
    j_thermal = thermal_j_max(spec)
    margin = 4 * math.ceil(math.sqrt(pulse.xi))
    while True:
        j_max = j_thermal + margin
        if j_max + 4 > j_max_limit:
            raise ConvergenceError(
                f"basis truncation did not converge below j_max={j_max_limit} (xi={pulse.xi})"
            )
        coarse = ensemble_trace_fixed(spec, pulse, times, j_max)
        fine = ensemble_trace_fixed(spec, pulse, times, j_max + 4)
        change = max(float(np.max(np.abs(coarse.axis(a) - fine.axis(a)))) for a in "xyz")
        if change <= tol:
            coarse.meta["truncation_change"] = change
            return coarse
        margin = max(2 * margin, 4)


def ensemble_members(spec: EnsembleSpec, pulse: PulseParams, t: float, j_max: int):
    """(WavePacket, weight) for every thermal member at time t.

    Members are kicked at t = 0; a negative ``t`` gives the pre-kick states.
    No m-folding here: |j0, m0> and |j0, -m0> have mirror-image densities.
    """
    out = []
    for j, m, w in enumerate_initial_states(spec, j_max):
        packet = WavePacket.basis_state(j, m, j_max)
        if t >= 0:
            packet = apply_kick(packet, prepare_kick(packet.block, pulse.a2), pulse.xi)
        out.append((free_evolve(packet, t), w))
    return out
