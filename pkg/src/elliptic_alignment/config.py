"""Run configuration: flat key = value files with unit-suffixed keys.

A config file holds a single ``[run]`` section::

    [run]
    command = simulate
    a2 = 0.3333333333333333
    xi = 11.1
    temperature_dimensionless = 20.0

Physical alternatives (``intensity_TWcm2`` + ``fwhm_fs`` instead of
``xi``, ``temperature_K`` instead of ``temperature_dimensionless``) are
converted once, in :meth:`RunConfig.resolve`, using the bundled constants of
``molecule``.
"""

from __future__ import annotations

import configparser
import io
import math
from dataclasses import dataclass, fields, replace

from .constants import get_molecule
from .dynamics import PulseParams, kick_strength_from_pulse
from .errors import ValidationError
from .thermal import SPIN_RULES, EnsembleSpec

COMMANDS = ("simulate", "scan", "distribution", "validate-sudden", "constants")
FORMATS = ("csv", "json")
SECTION = "run"


@dataclass(frozen=True)
class RunConfig:
    command: str = "simulate"
    molecule: str = "CO2"
    a2: float = 1.0 / 3.0
    xi: float | None = 11.1
    intensity_TWcm2: float | None = None
    fwhm_fs: float | None = None
    temperature_dimensionless: float | None = 20.0
    temperature_K: float | None = None
    spin_rule: str | None = None
    weight_cutoff: float = 1e-6
    jmax: int | None = None
    time_samples: int = 4096
    periods: float = 1.0
    a2_steps: int = 51
    distribution_times_taurot: tuple = (0.25, 0.375, 0.75)
    grid_theta: int = 64
    grid_phi: int = 64
    sudden_fwhms_taurot: tuple = tuple(1e-2 / 2**k for k in range(7)) + (1e-4,)
    workers: int = 1
    output: str | None = None
    format: str = "csv"

    def __post_init__(self):
        if self.command not in COMMANDS:
            raise ValidationError(f"unknown command {self.command!r}")
        if self.format not in FORMATS:
            raise ValidationError(f"unknown output format {self.format!r}")
        if self.xi is not None and self.intensity_TWcm2 is not None:
            raise ValidationError("give either xi or intensity_TWcm2/fwhm_fs, not both")
        if (self.intensity_TWcm2 is None) != (self.fwhm_fs is None):
            raise ValidationError("intensity_TWcm2 and fwhm_fs must be given together")
        if self.xi is None and self.intensity_TWcm2 is None:
            raise ValidationError("no kick strength: set xi or intensity_TWcm2 + fwhm_fs")
        if self.temperature_dimensionless is not None and self.temperature_K is not None:
            raise ValidationError("give either temperature_dimensionless or temperature_K")
        if self.temperature_dimensionless is None and self.temperature_K is None:
            raise ValidationError("no temperature given")
        if self.spin_rule is not None and self.spin_rule not in SPIN_RULES:
            raise ValidationError(f"unknown spin rule {self.spin_rule!r}")
        if self.time_samples < 3 or self.a2_steps < 2:
            raise ValidationError("time_samples must be >= 3 and a2_steps >= 2")
        if self.periods <= 0:
            raise ValidationError("periods must be positive")
        for name in ("a2", "xi", "intensity_TWcm2", "fwhm_fs", "temperature_dimensionless",
                     "temperature_K", "weight_cutoff"):
            value = getattr(self, name)
            if value is not None and not math.isfinite(value):
                raise ValidationError(f"{name} must be finite")

    # -- resolution to dimensionless engine inputs --------------------------

    def resolve(self) -> tuple[PulseParams, EnsembleSpec]:
        mol = get_molecule(self.molecule)
        if self.xi is not None:
            pulse = PulseParams(self.a2, self.xi)
        else:
            physical = mol.pulse(self.intensity_TWcm2, self.fwhm_fs)
            pulse = PulseParams(self.a2, kick_strength_from_pulse(physical), physical)
        if self.temperature_dimensionless is not None:
            reduced = self.temperature_dimensionless
        else:
            reduced = mol.reduced_temperature(self.temperature_K)
        spec = mol.ensemble(reduced, self.weight_cutoff)
        if self.spin_rule is not None:
            spec = replace(spec, spin_rule=self.spin_rule)
        return pulse, spec

    def with_overrides(self, **overrides) -> "RunConfig":
        """Replace the given (non-None) fields, dropping whatever they supersede."""
        changes = {k: v for k, v in overrides.items() if v is not None}
        if "intensity_TWcm2" in changes or "fwhm_fs" in changes:
            changes.setdefault("xi", None)
        elif "xi" in changes:
            changes.update(intensity_TWcm2=None, fwhm_fs=None)
        if "temperature_K" in changes:
            changes.setdefault("temperature_dimensionless", None)
        elif "temperature_dimensionless" in changes:
            changes["temperature_K"] = None
        return replace(self, **changes)

    # -- serialization -------------------------------------------------------

    def to_ini(self) -> str:
        parser = _parser()
        parser[SECTION] = {}
        for f in fields(self):
            value = getattr(self, f.name)
            if value is None:
                continue
            parser[SECTION][f.name] = _format(value)
        buf = io.StringIO()
        parser.write(buf)
        return buf.getvalue()

    @classmethod
    def from_ini(cls, text: str) -> "RunConfig":
        parser = _parser()
        try:
            parser.read_string(text)
        except configparser.Error as exc:
            raise ValidationError(f"malformed config: {exc}") from None
        if SECTION not in parser:
            raise ValidationError(f"config has no [{SECTION}] section")
        known = {f.name for f in fields(cls)}
        raw = dict(parser[SECTION])
        unknown = set(raw) - set(known)
        if unknown:
            raise ValidationError(f"unknown config keys: {', '.join(sorted(unknown))}")
        values = {name: _parse(name, text_value) for name, text_value in raw.items()}
        # absent keys take their defaults, except where a default would
        # collide with the physical alternative given in the file
        if "intensity_TWcm2" in values and "xi" not in values:
            values["xi"] = None
        if "temperature_K" in values and "temperature_dimensionless" not in values:
            values["temperature_dimensionless"] = None
        return cls(**values)

    @classmethod
    def load(cls, path) -> "RunConfig":
        with open(path) as fh:
            return cls.from_ini(fh.read())


_INT_KEYS = {"jmax", "time_samples", "a2_steps", "grid_theta", "grid_phi", "workers"}
_STR_KEYS = {"command", "molecule", "spin_rule", "output", "format"}
_TUPLE_KEYS = {"distribution_times_taurot", "sudden_fwhms_taurot"}


def _parser() -> configparser.ConfigParser:
    parser = configparser.ConfigParser()
    parser.optionxform = str  # keep unit suffixes like TWcm2 case-sensitive
    return parser


def _format(value) -> str:
    if isinstance(value, tuple):
        return ", ".join(repr(float(v)) for v in value)
    if isinstance(value, float):
        return repr(value)
    return str(value)


def _parse(name: str, text: str):
    try:
        if name in _STR_KEYS:
            return text
        if name in _INT_KEYS:
            return None if text == "auto" else int(text)
        if name in _TUPLE_KEYS:
            return tuple(float(v) for v in text.split(",") if v.strip())
        return float(text)
    except ValueError:
        raise ValidationError(f"cannot parse {name} = {text!r}") from None
