"""Sudden kick and field-free evolution of a rigid linear rotor.

Units: energies in B, time in hbar/B, so H0 = J^2 has eigenvalues j(j+1)
and the rotational period is pi.  The cycle-averaged interaction of the
elliptic pulse is

    V(t) = -(delta_alpha / 4) E(t)^2 * O,
    O    = (a^2 - b^2) cos^2(theta_x) + b^2 sin^2(theta_z),

and in the sudden limit the pulse acts as the unitary exp(i xi O).
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from functools import lru_cache

import numpy as np
import scipy.sparse as sp
from scipy import constants
from scipy.sparse.linalg import expm_multiply

from .angular import BasisBlock, OperatorMatrix, build_cos2_theta_x, build_cos2_theta_z
from .errors import ConvergenceError, ValidationError

#: Rotational period in units of hbar/B.
TAU_ROT = math.pi

# integral of exp(-4 ln2 t^2 / fwhm^2) dt, per unit fwhm
_GAUSS_AREA = math.sqrt(math.pi / (4.0 * math.log(2.0)))


@dataclass(frozen=True)
class PhysicalPulse:
    """Pulse in laboratory units.

    peak_intensity in W/cm^2, fwhm (of the intensity envelope) in seconds,
    delta_alpha in C m^2/V.
    """

    peak_intensity: float
    fwhm: float
    delta_alpha: float
    envelope: str = "gaussian"


@dataclass(frozen=True)
class PulseParams:
    a2: float
    xi: float
    physical: PhysicalPulse | None = None

    def __post_init__(self):
        if not 0.0 <= self.a2 <= 1.0:
            raise ValidationError(f"a2 must lie in [0, 1], got {self.a2}")
        if not self.xi >= 0.0:
            raise ValidationError(f"xi must be non-negative, got {self.xi}")
        if self.physical is not None and not self.physical.delta_alpha > 0:
            raise ValidationError("delta_alpha must be positive")

    @property
    def b2(self) -> float:
        return 1.0 - self.a2

    @classmethod
    def from_physical(cls, a2: float, physical: PhysicalPulse) -> "PulseParams":
        return cls(a2=a2, xi=kick_strength_from_pulse(physical), physical=physical)


def polarizability_volume_to_si(volume_A3: float) -> float:
    """Polarizability volume in cubic angstrom to C m^2/V."""
    return 4.0 * math.pi * constants.epsilon_0 * volume_A3 * 1e-30


def kick_strength_from_pulse(physical: PhysicalPulse) -> float:
    """Dimensionless kick strength xi = delta_alpha/(4 hbar) * integral E(t)^2 dt.

    E(t) is the envelope amplitude of the carrier, so the cycle-averaged
    intensity is c eps0 E^2 / 2 for any ellipticity with a^2 + b^2 = 1.
    """
    if physical.envelope != "gaussian":
        raise ValidationError(f"unknown envelope {physical.envelope!r}")
    if physical.peak_intensity < 0 or physical.fwhm <= 0 or physical.delta_alpha <= 0:
        raise ValidationError("intensity must be >= 0, fwhm and delta_alpha > 0")
    intensity = physical.peak_intensity * 1e4  # W/m^2
    fluence = intensity * physical.fwhm * _GAUSS_AREA
    field_sq_integral = 2.0 * fluence / (constants.c * constants.epsilon_0)
    return physical.delta_alpha / (4.0 * constants.hbar) * field_sq_integral


@dataclass(frozen=True)
class WavePacket:
    block: BasisBlock
    coeffs: np.ndarray = field(compare=False)
    t: float = 0.0

    def __post_init__(self):
        coeffs = np.array(self.coeffs, dtype=complex)
        if coeffs.shape != (self.block.dim,):
            raise ValidationError(
                f"coefficient vector of shape {coeffs.shape} does not fit block dim {self.block.dim}"
            )
        coeffs.setflags(write=False)
        object.__setattr__(self, "coeffs", coeffs)

    @classmethod
    def basis_state(cls, j: int, m: int, j_max: int, t: float = 0.0) -> "WavePacket":
        block = BasisBlock.containing(j, m, j_max)
        return cls(block, block.basis_vector(j, m), t)

    def norm(self) -> float:
        return float(np.linalg.norm(self.coeffs))


@dataclass(frozen=True)
class KickOperator:
    block: BasisBlock
    eigenvalues: np.ndarray = field(compare=False)
    eigenvectors: np.ndarray = field(compare=False)
    a2: float = 0.0

    def matrix(self) -> np.ndarray:
        v = self.eigenvectors
        return (v * self.eigenvalues) @ v.T

    def unitary(self, xi: float) -> np.ndarray:
        """exp(i xi O) as a dense matrix."""
        v = self.eigenvectors
        return (v * np.exp(1j * xi * self.eigenvalues)) @ v.T


def interaction_operator(block: BasisBlock, a2: float) -> OperatorMatrix:
    """(a^2 - b^2) cos^2(theta_x) + b^2 (1 - cos^2(theta_z))."""
    if not 0.0 <= a2 <= 1.0:
        raise ValidationError(f"a2 must lie in [0, 1], got {a2}")
    b2 = 1.0 - a2
    mx = build_cos2_theta_x(block).entries
    mz = build_cos2_theta_z(block).entries
    return OperatorMatrix(block, (a2 - b2) * mx + b2 * (np.eye(block.dim) - mz))


@lru_cache(maxsize=32)
def prepare_kick(block: BasisBlock, a2: float) -> KickOperator:
    op = interaction_operator(block, a2).entries
    try:
        lam, vec = np.linalg.eigh(op)
    except np.linalg.LinAlgError as exc:
        raise ConvergenceError(f"eigendecomposition failed for {block}, a2={a2}") from exc
    lam.setflags(write=False)
    vec.setflags(write=False)
    return KickOperator(block, lam, vec, a2)


def apply_kick(state: WavePacket, kick: KickOperator, xi: float) -> WavePacket:
    if state.block != kick.block:
        raise ValidationError("state and kick operator live on different blocks")
    v = kick.eigenvectors
    coeffs = v @ (np.exp(1j * xi * kick.eigenvalues) * (v.T @ state.coeffs))
    return WavePacket(state.block, coeffs, state.t)


def free_evolve(state: WavePacket, dt: float) -> WavePacket:
    phases = np.exp(-1j * state.block.rotational_energies() * dt)
    return WavePacket(state.block, phases * state.coeffs, state.t + dt)


def gaussian_envelope(t, fwhm: float, center: float = 0.0):
    """Gaussian intensity profile normalized to unit area."""
    return np.exp(-4.0 * math.log(2.0) * ((t - center) / fwhm) ** 2) / (fwhm * _GAUSS_AREA)


def integrate_timedependent(
    initial: WavePacket,
    pulse: PulseParams,
    fwhm: float,
    center: float = 0.0,
    steps_per_fwhm: int = 100,
    half_width: float = 5.0,
    norm_tol: float = 1e-8,
) -> WavePacket:
    """Propagate i d(psi)/dt = [J^2 - xi s(t) O] psi across a finite pulse.

    ``s`` is a unit-area Gaussian of the given FWHM (units of hbar/B)
    centred at ``center``.  The state must start at or before
    ``center - half_width * fwhm``; it is returned at
    ``center + half_width * fwhm``.  The stepper is the fourth-order
    Magnus scheme; each step exponential is applied with
    ``scipy.sparse.linalg.expm_multiply``, so it does not share the
    eigendecomposition used by the sudden kick.
    """
    if fwhm <= 0:
        raise ValidationError("fwhm must be positive")
    if steps_per_fwhm < 100:
        raise ValidationError("the envelope needs at least 100 steps per fwhm")
    t_start = center - half_width * fwhm
    if initial.t > t_start + 1e-12:
        raise ValidationError(
            f"initial state at t={initial.t} starts inside the pulse window (t >= {t_start})"
        )
    state = free_evolve(initial, t_start - initial.t)
    block = state.block
    h0 = sp.diags(block.rotational_energies())
    op = sp.csr_matrix(interaction_operator(block, pulse.a2).entries)
    comm = (h0 @ op - op @ h0).tocsr()

    n_steps = int(math.ceil(2 * half_width * steps_per_fwhm))
    dt = 2 * half_width * fwhm / n_steps
    # two-point Gauss-Legendre nodes within each step
    g1, g2 = 0.5 - math.sqrt(3) / 6, 0.5 + math.sqrt(3) / 6
    psi = np.array(state.coeffs)
    for k in range(n_steps):
        t0 = t_start + k * dt
        s1 = pulse.xi * gaussian_envelope(t0 + g1 * dt, fwhm, center)
        s2 = pulse.xi * gaussian_envelope(t0 + g2 * dt, fwhm, center)
        # H_i = H0 - s_i O ; [H2, H1] = (s2 - s1) [H0, O]
        h_avg = h0 - 0.5 * (s1 + s2) * op
        omega = -1j * dt * h_avg - (math.sqrt(3) / 12) * dt**2 * (s2 - s1) * comm
        psi = expm_multiply(omega, psi)
    drift = abs(np.linalg.norm(psi) - 1.0)
    if drift > norm_tol:
        raise ConvergenceError(f"norm drift {drift:.2e} exceeds {norm_tol:.0e}; reduce the step")
    return WavePacket(block, psi, t_start + n_steps * dt)
