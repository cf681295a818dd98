"""Matrix elements of the alignment observables on the |j,m> basis.

Three observables are supported::

    cos^2(theta_z)
    cos^2(theta_x) = cos^2(phi) sin^2(theta)
    cos^2(theta_y) = sin^2(phi) sin^2(theta)

All angles are measured in the frame whose quantization axis z is normal to
the polarization ellipse.  Spherical harmonics carry the Condon-Shortley
phase, which makes every matrix element real.  Each operator only couples
states with dj in {0, +-2} and dm in {0, +-2}, so a basis splits into four
independent blocks labelled by the parities of j and m.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from functools import lru_cache

import numpy as np

from .errors import ValidationError

_PARITY_NAMES = {"even": 0, "odd": 1, 0: 0, 1: 1}


def parity(value) -> int:
    """Normalize a parity label ('even'/'odd'/0/1) to 0 or 1."""
    try:
        return _PARITY_NAMES[value]
    except (KeyError, TypeError):
        raise ValidationError(f"invalid parity {value!r}") from None


@dataclass(frozen=True)
class BasisBlock:
    """All |j,m> with j <= j_max and fixed parities of j and m.

    States are ordered by j, then by m.  ``index(j, m)`` and ``states[row]``
    are inverse maps.
    """

    j_parity: int
    m_parity: int
    j_max: int
    states: tuple = field(init=False, repr=False, compare=False)
    j: np.ndarray = field(init=False, repr=False, compare=False)
    m: np.ndarray = field(init=False, repr=False, compare=False)
    _rows: dict = field(init=False, repr=False, compare=False)

    def __post_init__(self):
        jp, mp = parity(self.j_parity), parity(self.m_parity)
        object.__setattr__(self, "j_parity", jp)
        object.__setattr__(self, "m_parity", mp)
        if int(self.j_max) != self.j_max or self.j_max < 0:
            raise ValidationError(f"j_max must be a non-negative integer, got {self.j_max}")
        object.__setattr__(self, "j_max", int(self.j_max))
        states = tuple(
            (j, m)
            for j in range(jp, self.j_max + 1, 2)
            for m in range(-j, j + 1)
            if (m - mp) % 2 == 0
        )
        if not states:
            raise ValidationError(
                f"empty block: j_parity={jp}, m_parity={mp}, j_max={self.j_max}"
            )
        j_arr = np.array([s[0] for s in states])
        m_arr = np.array([s[1] for s in states])
        j_arr.setflags(write=False)
        m_arr.setflags(write=False)
        object.__setattr__(self, "states", states)
        object.__setattr__(self, "j", j_arr)
        object.__setattr__(self, "m", m_arr)
        object.__setattr__(self, "_rows", {s: r for r, s in enumerate(states)})

    @classmethod
    def containing(cls, j: int, m: int, j_max: int) -> "BasisBlock":
        """The block that holds the state |j, m>."""
        if abs(m) > j or j > j_max:
            raise ValidationError(f"|{j},{m}> is not in a basis truncated at j_max={j_max}")
        return cls(j % 2, m % 2, j_max)

    @property
    def dim(self) -> int:
        return len(self.states)

    def index(self, j: int, m: int) -> int:
        try:
            return self._rows[(j, m)]
        except KeyError:
            raise ValidationError(f"|{j},{m}> is not in {self}") from None

    def __contains__(self, jm) -> bool:
        return tuple(jm) in self._rows

    def rotational_energies(self) -> np.ndarray:
        """j(j+1) for every row, in units of the rotational constant."""
        return (self.j * (self.j + 1)).astype(float)

    def basis_vector(self, j: int, m: int) -> np.ndarray:
        vec = np.zeros(self.dim, dtype=complex)
        vec[self.index(j, m)] = 1.0
        return vec


@dataclass(frozen=True)
class OperatorMatrix:
    """Dense real symmetric matrix of an angular observable on one block."""

    block: BasisBlock
    entries: np.ndarray = field(compare=False)

    def __post_init__(self):
        entries = np.asarray(self.entries, dtype=float)
        if entries.shape != (self.block.dim, self.block.dim):
            raise ValidationError(
                f"operator shape {entries.shape} does not match block dim {self.block.dim}"
            )
        entries.setflags(write=False)
        object.__setattr__(self, "entries", entries)

    def __add__(self, other):
        self._check(other)
        return OperatorMatrix(self.block, self.entries + other.entries)

    def __sub__(self, other):
        self._check(other)
        return OperatorMatrix(self.block, self.entries - other.entries)

    def __rmul__(self, scalar):
        return OperatorMatrix(self.block, float(scalar) * self.entries)

    def _check(self, other):
        if self.block != other.block:
            raise ValidationError("operators live on different blocks")

    @classmethod
    def identity(cls, block: BasisBlock) -> "OperatorMatrix":
        return cls(block, np.eye(block.dim))


# -- closed-form coefficients ------------------------------------------------


def _check_jm(j, m):
    if j < 0 or abs(m) > j:
        raise ValidationError(f"invalid angular momentum pair (j={j}, m={m})")


def _c(j, m):
    # cos(theta) coupling between |j-1,m> and |j,m>; zero when |j-1,m> does not exist
    if abs(m) >= j:
        return 0.0
    return math.sqrt((j - m) * (j + m) / ((2 * j - 1) * (2 * j + 1)))


def c_coeff(j: int, m: int) -> float:
    """sqrt((j-m)(j+m) / ((2j-1)(2j+1))), the <j-1,m|cos(theta)|j,m> element."""
    _check_jm(j, m)
    return _c(j, m)


def coeff_A(j: int, m: int) -> float:
    _check_jm(j, m)
    return (1.0 - _c(j, m) ** 2 - _c(j + 1, m) ** 2) / 2.0


def coeff_B(j: int, m: int) -> float:
    """Coupling of |j,m> to |j-2,m>; zero if the lower state does not exist."""
    _check_jm(j, m)
    return -_c(j - 1, m) * _c(j, m) / 2.0


def coeff_C(j: int, m: int) -> float:
    """Coupling of |j,m> to |j,m+2>; zero if m+2 > j."""
    _check_jm(j, m)
    num = (j - m) * (j - m - 1) * (j + m + 2) * (j + m + 1)
    if num <= 0:
        return 0.0
    return -math.sqrt(num) / (2.0 * (2 * j - 1) * (2 * j + 3))


def coeff_D(j: int, m: int) -> float:
    """Coupling of |j,m> to |j+2,m+2>.

    The factorial ratio (j+m+4)!/(j+m)! is evaluated as a four-term product.
    """
    _check_jm(j, m)
    n = j + m
    ratio = (n + 1) * (n + 2) * (n + 3) * (n + 4)
    return math.sqrt(ratio / ((2 * j + 1) * (2 * j + 5))) / (4.0 * (2 * j + 3))


# -- operator builders ---------------------------------------------------------


@lru_cache(maxsize=64)
def build_cos2_theta_z(block: BasisBlock) -> OperatorMatrix:
    out = np.zeros((block.dim, block.dim))
    for col, (j, m) in enumerate(block.states):
        out[col, col] = _c(j, m) ** 2 + _c(j + 1, m) ** 2
        if (j + 2, m) in block:
            row = block.index(j + 2, m)
            out[row, col] = out[col, row] = _c(j + 1, m) * _c(j + 2, m)
    return OperatorMatrix(block, out)


def _fill_cos2_phi_sin2_theta(block: BasisBlock, dm_sign: float) -> np.ndarray:
    # dm_sign = +1 gives cos^2(phi) sin^2(theta), -1 gives sin^2(phi) sin^2(theta):
    # the two differ only in the sign of the dm = +-2 couplings.
    out = np.zeros((block.dim, block.dim))
    for col, (j, m) in enumerate(block.states):
        out[col, col] = coeff_A(j, m)
        if (j + 2, m) in block:
            row = block.index(j + 2, m)
            out[row, col] = out[col, row] = coeff_B(j + 2, m)
        if (j, m + 2) in block:
            row = block.index(j, m + 2)
            out[row, col] = out[col, row] = dm_sign * coeff_C(j, m)
        if (j + 2, m + 2) in block:
            row = block.index(j + 2, m + 2)
            out[row, col] = out[col, row] = dm_sign * coeff_D(j, m)
        if (j + 2, m - 2) in block:
            row = block.index(j + 2, m - 2)
            out[row, col] = out[col, row] = dm_sign * coeff_D(j, -m)
    return out


@lru_cache(maxsize=64)
def build_cos2_theta_x(block: BasisBlock) -> OperatorMatrix:
    return OperatorMatrix(block, _fill_cos2_phi_sin2_theta(block, +1.0))


@lru_cache(maxsize=64)
def build_cos2_theta_y(block: BasisBlock) -> OperatorMatrix:
    """cos^2(theta_y) as I - cos^2(theta_z) - cos^2(theta_x), so the sum rule is exact."""
    mz = build_cos2_theta_z(block).entries
    mx = build_cos2_theta_x(block).entries
    return OperatorMatrix(block, np.eye(block.dim) - mz - mx)


def build_cos2_theta_y_direct(block: BasisBlock) -> OperatorMatrix:
    """Closed-form cos^2(theta_y), independent of the sum rule."""
    return OperatorMatrix(block, _fill_cos2_phi_sin2_theta(block, -1.0))


def observables(block: BasisBlock) -> dict[str, OperatorMatrix]:
    return {
        "x": build_cos2_theta_x(block),
        "y": build_cos2_theta_y(block),
        "z": build_cos2_theta_z(block),
    }
