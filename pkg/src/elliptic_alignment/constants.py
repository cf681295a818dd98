"""Bundled molecular constants and laboratory-unit conversions."""

from __future__ import annotations

import configparser
import math
from dataclasses import dataclass
from functools import lru_cache
from importlib import resources

from scipy import constants

from .dynamics import PhysicalPulse, polarizability_volume_to_si
from .errors import ValidationError
from .thermal import EnsembleSpec


@dataclass(frozen=True)
class Molecule:
    name: str
    rotational_constant_cm: float
    delta_alpha_A3: float
    spin_rule: str = "all_j"
    g_even: float = 1.0
    g_odd: float = 1.0

    @property
    def rotational_constant_joule(self) -> float:
        return constants.h * constants.c * 100.0 * self.rotational_constant_cm

    @property
    def delta_alpha_si(self) -> float:
        return polarizability_volume_to_si(self.delta_alpha_A3)

    @property
    def tau_rot_seconds(self) -> float:
        """Full rotational revival period pi*hbar/B."""
        return math.pi * constants.hbar / self.rotational_constant_joule

    def reduced_temperature(self, kelvin: float) -> float:
        return constants.k * kelvin / self.rotational_constant_joule

    def kelvin(self, reduced: float) -> float:
        return reduced * self.rotational_constant_joule / constants.k

    def pulse(self, intensity_TWcm2: float, fwhm_fs: float) -> PhysicalPulse:
        return PhysicalPulse(intensity_TWcm2 * 1e12, fwhm_fs * 1e-15, self.delta_alpha_si)

    def ensemble(self, reduced_temperature: float, weight_cutoff: float = 1e-6) -> EnsembleSpec:
        return EnsembleSpec(
            reduced_temperature, self.spin_rule, self.g_even, self.g_odd, weight_cutoff
        )


@lru_cache(maxsize=None)
def load_molecules() -> dict[str, Molecule]:
    parser = configparser.ConfigParser()
    text = resources.files("elliptic_alignment").joinpath("data/molecules.ini").read_text()
    parser.read_string(text)
    out = {}
    for name in parser.sections():
        sec = parser[name]
        out[name] = Molecule(
            name,
            sec.getfloat("rotational_constant_cm"),
            sec.getfloat("delta_alpha_A3"),
            sec.get("spin_rule", "all_j"),
            sec.getfloat("g_even", 1.0),
            sec.getfloat("g_odd", 1.0),
        )
    return out


def get_molecule(name: str) -> Molecule:
    molecules = load_molecules()
    try:
        return molecules[name]
    except KeyError:
        raise ValidationError(
            f"unknown molecule {name!r}; bundled: {', '.join(sorted(molecules))}"
        ) from None
