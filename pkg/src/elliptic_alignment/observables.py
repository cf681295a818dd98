"""Expectation values, alignment traces, angular densities and Kerr signals."""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np

from .angular import BasisBlock, OperatorMatrix, observables
from .dynamics import WavePacket
from .errors import ValidationError

AXES = ("x", "y", "z")


@dataclass
class TraceSeries:
    """<cos^2 theta_i>(t) for i = x, y, z on a common time grid (units hbar/B)."""

    times: np.ndarray
    cos2x: np.ndarray
    cos2y: np.ndarray
    cos2z: np.ndarray
    meta: dict = field(default_factory=dict)

    def __post_init__(self):
        self.times = np.asarray(self.times, dtype=float)
        n = len(self.times)
        for name in ("cos2x", "cos2y", "cos2z"):
            arr = np.asarray(getattr(self, name), dtype=float)
            if arr.shape != (n,):
                raise ValidationError(f"{name} has shape {arr.shape}, expected ({n},)")
            setattr(self, name, arr)

    def axis(self, name: str) -> np.ndarray:
        if name not in AXES:
            raise ValidationError(f"unknown axis {name!r}")
        return getattr(self, "cos2" + name)

    def sum_rule_error(self) -> float:
        return float(np.max(np.abs(self.cos2x + self.cos2y + self.cos2z - 1.0)))


def expectation(state: WavePacket, M: OperatorMatrix) -> float:
    if state.block != M.block:
        raise ValidationError("state and operator live on different blocks")
    value = np.vdot(state.coeffs, M.entries @ state.coeffs)
    if abs(value.imag) > 1e-12:
        raise ValidationError(f"expectation value has imaginary part {value.imag:.3e}")
    return float(value.real)


def density_trace(
    block: BasisBlock, rho: np.ndarray, ops: dict[str, OperatorMatrix], times
) -> dict[str, np.ndarray]:
    """Tr[rho(t) M] for a density matrix given at t = 0 and evolving under J^2.

    The operators only couple levels whose energy differences are a handful
    of integers, so the bilinear form is first collapsed onto (j, j') pairs
    and the time dependence is a short sum of exponentials.
    """
    times = np.asarray(times, dtype=float)
    j_levels, j_index = np.unique(block.j, return_inverse=True)
    n_lev = len(j_levels)
    energy = (j_levels * (j_levels + 1)).astype(float)
    project = np.zeros((n_lev, block.dim))
    project[j_index, np.arange(block.dim)] = 1.0
    out = {}
    for name, op in ops.items():
        # Q[r, c] = rho[c, r] M[r, c]; <M>(t) = sum Q[r, c] exp(i (E_r - E_c) t)
        q = rho.T * op.entries
        g = project @ q @ project.T
        rows, cols = np.nonzero(np.abs(g) > 0)
        if len(rows) == 0:
            out[name] = np.zeros_like(times)
            continue
        freq = energy[rows] - energy[cols]
        phase = np.exp(1j * np.outer(times, freq))
        out[name] = (phase @ g[rows, cols]).real
    return out


def state_trace(state: WavePacket, times) -> TraceSeries:
    """Alignment trace of a single wave packet; ``times`` are absolute."""
    psi = state.coeffs
    rho = np.outer(psi, psi.conj())
    shifted = np.asarray(times, dtype=float) - state.t
    vals = density_trace(state.block, rho, observables(state.block), shifted)
    return TraceSeries(times, vals["x"], vals["y"], vals["z"])


def kerr_signal(trace: TraceSeries, axis: str, scale: float = 1.0) -> np.ndarray:
    """Probe defocusing signal, proportional to (<cos^2 theta_axis> - 1/3)^2."""
    return scale * (trace.axis(axis) - 1.0 / 3.0) ** 2


# -- spherical harmonics on a grid -------------------------------------------


def normalized_legendre(j_max: int, x: np.ndarray) -> np.ndarray:
    """Orthonormal associated Legendre functions with Condon-Shortley phase.

    Returns an array of shape (j_max + 1, j_max + 1, len(x)) holding
    Theta_j^m(x) for 0 <= m <= j, normalized so that
    Y_jm = Theta_j^m(cos theta) exp(i m phi) is orthonormal on the sphere.
    Uses the standard upward recursion in j at fixed m, stable well beyond
    j = 40.
    """
    x = np.asarray(x, dtype=float)
    s = np.sqrt(np.clip(1.0 - x * x, 0.0, None))
    out = np.zeros((j_max + 1, j_max + 1) + x.shape)
    pmm = np.full(x.shape, 1.0 / math.sqrt(4.0 * math.pi))
    for m in range(j_max + 1):
        if m > 0:
            pmm = -math.sqrt((2 * m + 1) / (2 * m)) * s * pmm
        out[m, m] = pmm
        if m + 1 <= j_max:
            out[m + 1, m] = math.sqrt(2 * m + 3) * x * pmm
        for j in range(m + 2, j_max + 1):
            a = math.sqrt((4 * j * j - 1) / (j * j - m * m))
            b = math.sqrt(((j - 1) ** 2 - m * m) / (4 * (j - 1) ** 2 - 1))
            out[j, m] = a * (x * out[j - 1, m] - b * out[j - 2, m])
    return out


def spherical_harmonics(block: BasisBlock, theta, phi) -> tuple[np.ndarray, np.ndarray]:
    """Separable factors of Y_jm for every row of ``block``.

    Returns (polar, azimuthal) with shapes (n_theta, dim) and (n_phi, dim) so
    that Y_row(theta_a, phi_b) = polar[a, row] * azimuthal[b, row].
    """
    leg = normalized_legendre(block.j_max, np.cos(np.asarray(theta, dtype=float)))
    mabs = np.abs(block.m)
    polar = leg[block.j, mabs].T.copy()
    # Y_{j,-m} = (-1)^m conj(Y_{j,m})
    neg = block.m < 0
    polar[:, neg] *= (-1.0) ** mabs[neg]
    azimuthal = np.exp(1j * np.outer(np.asarray(phi, dtype=float), block.m))
    return polar, azimuthal


@dataclass
class AngularGrid:
    """Probability density of the molecular axis on a (theta, phi) grid.

    theta nodes are Gauss-Legendre in cos(theta), phi nodes are uniform, so
    ``total()`` integrates band-limited densities exactly.
    """

    theta: np.ndarray
    phi: np.ndarray
    density: np.ndarray
    theta_weights: np.ndarray
    phi_weight: float

    def total(self) -> float:
        return float(self.theta_weights @ self.density.sum(axis=1) * self.phi_weight)

    def argmax(self) -> tuple[float, float]:
        a, b = np.unravel_index(np.argmax(self.density), self.density.shape)
        return float(self.theta[a]), float(self.phi[b])


def angular_grid_nodes(n_theta: int, n_phi: int):
    x, w = np.polynomial.legendre.leggauss(n_theta)
    theta = np.arccos(x[::-1])
    return theta, w[::-1], np.arange(n_phi) * (2.0 * math.pi / n_phi), 2.0 * math.pi / n_phi


def angular_distribution(
    members, n_theta: int | None = None, n_phi: int | None = None
) -> AngularGrid:
    """Incoherent sum of |psi_k(theta, phi)|^2 over weighted wave packets.

    ``members`` is an iterable of (WavePacket, weight).  Grid sizes are at
    least 64 x 64 and are raised where needed so that the grid quadrature
    is exact for the largest j present.
    """
    members = list(members)
    if not members:
        raise ValidationError("angular_distribution needs at least one member")
    j_top = max(p.block.j_max for p, _ in members)
    n_theta = max(n_theta or 64, j_top + 2)
    n_phi = max(n_phi or 64, 2 * j_top + 2)
    theta, w_theta, phi, w_phi = angular_grid_nodes(n_theta, n_phi)
    density = np.zeros((n_theta, n_phi))
    cache = {}
    for packet, weight in members:
        if packet.block not in cache:
            cache[packet.block] = spherical_harmonics(packet.block, theta, phi)
        polar, azimuthal = cache[packet.block]
        amp = (polar * packet.coeffs) @ azimuthal.T
        density += weight * np.abs(amp) ** 2
    return AngularGrid(theta, phi, density, w_theta, w_phi)
