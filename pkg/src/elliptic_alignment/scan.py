"""Ellipticity sweeps: peak alignment versus a^2 and where the curves cross."""

from __future__ import annotations

from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field

import numpy as np

from .dynamics import PulseParams, TAU_ROT
from .errors import ConvergenceError, ValidationError
from .observables import TraceSeries
from .thermal import EnsembleSpec, ensemble_trace

DEFAULT_TIME_SAMPLES = 4096
DEFAULT_A2_POINTS = 51


def default_times(n: int = DEFAULT_TIME_SAMPLES) -> np.ndarray:
    """n samples covering one rotational period, both ends included."""
    return np.linspace(0.0, TAU_ROT, n)


def default_a2_grid(n: int = DEFAULT_A2_POINTS) -> np.ndarray:
    return np.linspace(0.0, 1.0, n)


def max_over_time(trace: TraceSeries, axis: str) -> tuple[float, float]:
    """Global maximum of one observable, refined by a parabola through three samples."""
    t = trace.times
    if len(t) < 3 or t[-1] - t[0] < TAU_ROT * (1 - 1e-9):
        raise ValidationError("trace must cover at least one rotational period")
    y = trace.axis(axis)
    i = int(np.argmax(y))
    if i == 0 or i == len(y) - 1:
        return float(t[i]), float(y[i])
    y0, y1, y2 = y[i - 1], y[i], y[i + 1]
    curv = y0 - 2 * y1 + y2
    if curv >= 0:
        return float(t[i]), float(y1)
    # vertex offset in units of the (local) step
    delta = 0.5 * (y0 - y2) / curv
    h = 0.5 * (t[i + 1] - t[i - 1])
    return float(t[i] + delta * h), float(y1 - 0.25 * (y0 - y2) * delta)


@dataclass
class ScanResult:
    a2_grid: np.ndarray
    max_cos2x: np.ndarray
    max_cos2y: np.ndarray
    max_cos2z: np.ndarray
    t_peak: dict = field(default_factory=dict)
    meta: dict = field(default_factory=dict)

    def curve(self, axis: str) -> np.ndarray:
        return getattr(self, "max_cos2" + axis)

    def mirrored(self) -> "ScanResult":
        """The same scan relabelled by a^2 -> 1 - a^2 (x and y exchanged)."""
        return ScanResult(
            1.0 - self.a2_grid[::-1],
            self.max_cos2y[::-1].copy(),
            self.max_cos2x[::-1].copy(),
            self.max_cos2z[::-1].copy(),
            meta=dict(self.meta),
        )


def ellipticity_scan(
    spec: EnsembleSpec,
    xi: float,
    a2_grid=None,
    times=None,
    j_max: int | None = None,
    workers: int = 1,
) -> ScanResult:
    a2_grid = default_a2_grid() if a2_grid is None else np.asarray(a2_grid, dtype=float)
    times = default_times() if times is None else np.asarray(times, dtype=float)

    def point(a2):
        trace = ensemble_trace(spec, PulseParams(float(a2), xi), times, j_max=j_max)
        return [max_over_time(trace, a) for a in "xyz"], trace.meta["j_max"]

    if workers > 1:
        with ThreadPoolExecutor(workers) as pool:
            results = list(pool.map(point, a2_grid))
    else:
        results = [point(a2) for a2 in a2_grid]
    peaks = {a: np.array([r[0][k][1] for r in results]) for k, a in enumerate("xyz")}
    t_peak = {a: np.array([r[0][k][0] for r in results]) for k, a in enumerate("xyz")}
    return ScanResult(
        a2_grid,
        peaks["x"],
        peaks["y"],
        peaks["z"],
        t_peak=t_peak,
        meta={
            "xi": xi,
            "temperature": spec.temperature,
            "j_max": [r[1] for r in results],
            "time_samples": len(times),
        },
    )


@dataclass
class Crossing:
    a2: float
    candidates: list


# where the y/z (or x/z) symmetry argument puts the optimum for each pair
_EXPECTED = {("z", "y"): 1.0 / 3.0, ("z", "x"): 2.0 / 3.0}


def find_crossing(scan: ScanResult, pair=("z", "y")) -> Crossing:
    """Root of max_first(a^2) - max_second(a^2) by linear interpolation.

    With several sign changes the one nearest the symmetric-ellipticity
    prediction (1/3 for z-y, 2/3 for z-x) is returned; all are listed in
    ``candidates``.
    """
    pair = tuple(pair)
    if pair not in _EXPECTED:
        raise ValidationError(f"unsupported pair {pair}")
    a = scan.a2_grid
    d = scan.curve(pair[0]) - scan.curve(pair[1])
    roots = []
    for i in range(len(a) - 1):
        if d[i] == 0.0:
            roots.append(float(a[i]))
        elif d[i] * d[i + 1] < 0:
            roots.append(float(a[i] + (a[i + 1] - a[i]) * d[i] / (d[i] - d[i + 1])))
    if d[-1] == 0.0:
        roots.append(float(a[-1]))
    if not roots:
        raise ConvergenceError(f"max curves {pair} never cross on the scanned grid")
    target = _EXPECTED[pair]
    best = min(roots, key=lambda r: (abs(r - target), r))
    return Crossing(best, roots)


def symmetric_center(trace: TraceSeries) -> float:
    """Time-averaged midpoint of the y and z traces."""
    return float(np.mean(0.5 * (trace.cos2y + trace.cos2z)))


def revival_times(n_max: int = 4) -> np.ndarray:
    return np.arange(1, n_max + 1) * TAU_ROT / 4.0


def _window(t, center, half_width):
    # indices within +-half_width of center on the pi-periodic time axis, in time order
    offset = np.mod(np.mod(t, TAU_ROT) - center + TAU_ROT / 2, TAU_ROT) - TAU_ROT / 2
    idx = np.nonzero(np.abs(offset) <= half_width)[0]
    order = np.argsort(offset[idx])
    return idx[order], offset[idx][order]


@dataclass
class Revival:
    n: int
    time: float
    value: float
    excursion: float
    interior: bool


def revival_extrema(
    trace: TraceSeries, axis: str, window: float = 0.03 * TAU_ROT, baseline: float | None = None
) -> list[Revival]:
    """Strongest excursion of one observable near each quarter period n*pi/4.

    Within +-window of t_n the sample farthest from ``baseline`` (default:
    the y/z symmetry centre) is taken as the revival peak.  ``interior``
    is False when that sample sits on the window edge, i.e. the revival is
    not centred near t_n.
    """
    base = symmetric_center(trace) if baseline is None else baseline
    f = trace.axis(axis) - base
    out = []
    for n, tn in enumerate(revival_times(), start=1):
        idx, offset = _window(trace.times, tn, window)
        k = int(np.argmax(np.abs(f[idx])))
        out.append(
            Revival(n, float(tn + offset[k]), float(f[idx[k]] + base), float(f[idx[k]]),
                    0 < k < len(idx) - 1)
        )
    return out


def quiet_level(trace: TraceSeries, axis: str, window: float = 0.03 * TAU_ROT) -> float:
    """Largest deviation from the y/z centre near the odd eighths (2p+1)*pi/8."""
    f = trace.axis(axis) - symmetric_center(trace)
    level = 0.0
    for p in range(4):
        idx, _ = _window(trace.times, (2 * p + 1) * TAU_ROT / 8, window)
        level = max(level, float(np.max(np.abs(f[idx]))))
    return level
