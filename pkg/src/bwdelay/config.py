"""Run configuration: flat dotted key-value files, named presets, fingerprints.

The text format is one `section.key = value` pair per line with '#' comments,
chosen over flags so presets diff cleanly.  CEP angles live in units of pi
inside the config layer (cep = 0.5 means pi/2) and become radians only when
the physics-level PulseSpec is built; this keeps serialization round-trips
bit-exact.
"""

from __future__ import annotations

import hashlib
import math
from dataclasses import dataclass, field

from .errors import ParseError, ValidationError
from .kinematics import GammaProbe
from .probability import (
    DEFAULT_AZIMUTHAL,
    DEFAULT_POLAR,
    DEFAULT_RADIAL,
    default_p_max,
)
from .pulse import PulseSpec, pulse_length

VERSION = "0.1.0"

MIN_RADIAL = DEFAULT_RADIAL // 2
MIN_POLAR = DEFAULT_POLAR // 2
MIN_AZIMUTHAL = DEFAULT_AZIMUTHAL // 2


@dataclass(frozen=True, slots=True)
class PulseEntry:
    """One pulse block as configured; cep_pi is the CEP in units of pi."""

    xi: float
    omega: float
    cycles: int
    cep_pi: float = 0.0

    def to_spec(self) -> PulseSpec:
        return PulseSpec(
            xi=self.xi,
            omega=self.omega,
            n_cycles=self.cycles,
            cep=self.cep_pi * math.pi,
        )


@dataclass(frozen=True, slots=True)
class DelaySpec:
    """Separation values: a single D, an inclusive range, or an explicit list."""

    form: str  # "single" | "range" | "values"
    single: float = 0.0
    start: float = 0.0
    stop: float = 0.0
    step: float = 0.0
    values: tuple[float, ...] = ()

    def expand(self) -> tuple[float, ...]:
        if self.form == "single":
            return (self.single,)
        if self.form == "values":
            return self.values
        n = int(math.floor((self.stop - self.start) / self.step + 0.5)) + 1
        return tuple(self.start + i * self.step for i in range(n))


@dataclass(frozen=True, slots=True)
class GridSpec:
    radial: int = DEFAULT_RADIAL
    polar: int = DEFAULT_POLAR
    azimuthal: int = DEFAULT_AZIMUTHAL
    p_max: float | None = None  # None: pick from the pulse strengths

    def resolve_p_max(self, pulses) -> float:
        if self.p_max is not None:
            return self.p_max
        return default_p_max([p.to_spec() for p in pulses])


@dataclass(frozen=True, slots=True)
class RunConfig:
    omega_gamma: float
    pulses: tuple[PulseEntry, ...]
    delay: DelaySpec
    grid: GridSpec = field(default_factory=GridSpec)

    def gamma(self) -> GammaProbe:
        return GammaProbe(omega_gamma=self.omega_gamma)

    def pulse_specs(self) -> tuple[PulseSpec, ...]:
        return tuple(p.to_spec() for p in self.pulses)


def validate(config: RunConfig) -> RunConfig:
    """Check the cross-field invariants, naming the offending field."""
    if config.omega_gamma <= 0.0:
        raise ValidationError("gamma.omega must be positive")
    if not 1 <= len(config.pulses) <= 2:
        raise ValidationError("pulse count must be 1 or 2")
    for i, p in enumerate(config.pulses, start=1):
        if p.xi < 0.0:
            raise ValidationError(f"pulse{i}.xi must be nonnegative")
        if p.omega <= 0.0:
            raise ValidationError(f"pulse{i}.omega must be positive")
        if p.cycles < 1:
            raise ValidationError(f"pulse{i}.cycles must be a positive integer")
    delays = config.delay.expand()
    if len(delays) == 0:
        raise ValidationError("delay range is empty")
    if any(d < 0.0 for d in delays):
        raise ValidationError("delay values must be nonnegative")
    if config.delay.form == "range" and config.delay.step <= 0.0:
        raise ValidationError("delay.step must be positive")
    g = config.grid
    if g.radial < MIN_RADIAL:
        raise ValidationError(f"grid.radial must be >= {MIN_RADIAL}")
    if g.polar < MIN_POLAR:
        raise ValidationError(f"grid.polar must be >= {MIN_POLAR}")
    if g.azimuthal < MIN_AZIMUTHAL:
        raise ValidationError(f"grid.azimuthal must be >= {MIN_AZIMUTHAL}")
    if g.p_max is not None and g.p_max <= 0.0:
        raise ValidationError("grid.pmax must be positive")
    return config


# -- text format ---------------------------------------------------------------

_GRID_INT = ("radial", "polar", "azimuthal")


def _fmt(x: float) -> str:
    return f"{x:.17g}"


def parse_config(text: str) -> RunConfig:
    """Parse the flat key-value format; diagnostics carry line numbers."""
    entries: dict[str, str] = {}
    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        if "=" not in line:
            raise ParseError(f"line {lineno}: expected 'key = value', got {raw!r}")
        key, _, value = line.partition("=")
        key, value = key.strip(), value.strip()
        if not key or not value:
            raise ParseError(f"line {lineno}: empty key or value in {raw!r}")
        if key in entries:
            raise ParseError(f"line {lineno}: duplicate key {key!r}")
        entries[key] = value

    def take_float(key: str):
        v = entries.pop(key, None)
        if v is None:
            return None
        try:
            return float(v)
        except ValueError:
            raise ParseError(f"key {key!r}: not a number: {v!r}") from None

    def take_int(key: str):
        v = entries.pop(key, None)
        if v is None:
            return None
        try:
            return int(v)
        except ValueError:
            raise ParseError(f"key {key!r}: not an integer: {v!r}") from None

    omega_gamma = take_float("gamma.omega")
    if omega_gamma is None:
        raise ParseError("missing required key 'gamma.omega'")

    pulses = []
    for i in (1, 2):
        prefix = f"pulse{i}."
        block = {k for k in entries if k.startswith(prefix)}
        if not block:
            if i == 1 and any(k.startswith("pulse2.") for k in entries):
                raise ParseError("pulse2 block given without pulse1")
            continue
        xi = take_float(prefix + "xi")
        omega = take_float(prefix + "omega")
        if xi is None or omega is None:
            raise ParseError(f"pulse{i} needs both xi and omega")
        cycles = take_int(prefix + "cycles")
        if cycles is None:
            raise ParseError(f"pulse{i} needs cycles")
        cep_pi = take_float(prefix + "cep")
        pulses.append(
            PulseEntry(xi=xi, omega=omega, cycles=cycles,
                       cep_pi=0.0 if cep_pi is None else cep_pi)
        )
    if not pulses:
        raise ParseError("at least one pulse block (pulse1.*) is required")

    d_single = take_float("delay.d")
    d_start = take_float("delay.start")
    d_stop = take_float("delay.stop")
    d_step = take_float("delay.step")
    d_values = entries.pop("delay.values", None)
    forms = sum(
        [d_single is not None, d_start is not None or d_stop is not None
         or d_step is not None, d_values is not None]
    )
    if forms > 1:
        raise ParseError("delay block mixes d / start,stop,step / values forms")
    if d_single is not None:
        delay = DelaySpec(form="single", single=d_single)
    elif d_values is not None:
        try:
            vals = tuple(float(v) for v in d_values.split(","))
        except ValueError:
            raise ParseError(f"delay.values: not a number list: {d_values!r}") from None
        if not vals:
            raise ParseError("delay.values is empty")
        delay = DelaySpec(form="values", values=vals)
    elif d_start is not None or d_stop is not None or d_step is not None:
        if d_start is None or d_stop is None or d_step is None:
            raise ParseError("delay range needs all of start, stop, step")
        delay = DelaySpec(form="range", start=d_start, stop=d_stop, step=d_step)
    else:
        delay = DelaySpec(form="single", single=0.0)

    grid_kwargs = {}
    for k in _GRID_INT:
        v = take_int(f"grid.{k}")
        if v is not None:
            grid_kwargs[k] = v
    pmax = take_float("grid.pmax")
    if pmax is not None:
        grid_kwargs["p_max"] = pmax

    if entries:
        stray = sorted(entries)[0]
        raise ParseError(f"unknown key {stray!r}")

    return validate(
        RunConfig(
            omega_gamma=omega_gamma,
            pulses=tuple(pulses),
            delay=delay,
            grid=GridSpec(**grid_kwargs),
        )
    )


def serialize_config(config: RunConfig) -> str:
    """Canonical text form; identical configs serialize identically."""
    lines = [f"gamma.omega = {_fmt(config.omega_gamma)}"]
    for i, p in enumerate(config.pulses, start=1):
        lines.append(f"pulse{i}.xi = {_fmt(p.xi)}")
        lines.append(f"pulse{i}.omega = {_fmt(p.omega)}")
        lines.append(f"pulse{i}.cycles = {p.cycles}")
        lines.append(f"pulse{i}.cep = {_fmt(p.cep_pi)}")
    d = config.delay
    if d.form == "single":
        lines.append(f"delay.d = {_fmt(d.single)}")
    elif d.form == "range":
        lines.append(f"delay.start = {_fmt(d.start)}")
        lines.append(f"delay.stop = {_fmt(d.stop)}")
        lines.append(f"delay.step = {_fmt(d.step)}")
    else:
        lines.append("delay.values = " + ", ".join(_fmt(v) for v in d.values))
    g = config.grid
    lines.append(f"grid.radial = {g.radial}")
    lines.append(f"grid.polar = {g.polar}")
    lines.append(f"grid.azimuthal = {g.azimuthal}")
    if g.p_max is not None:
        lines.append(f"grid.pmax = {_fmt(g.p_max)}")
    return "\n".join(lines) + "\n"


def fingerprint(config: RunConfig) -> str:
    """12-hex-digit digest of the canonical serialization."""
    return hashlib.sha256(serialize_config(config).encode()).hexdigest()[:12]


# -- presets -------------------------------------------------------------------

_P1 = PulseEntry(xi=0.1, omega=1.01, cycles=4, cep_pi=0.0)
_P2 = PulseEntry(xi=0.6, omega=0.3535, cycles=4, cep_pi=0.0)
_P2X = PulseEntry(xi=1.0, omega=0.3535, cycles=4, cep_pi=0.0)
_A = _P1
_A15 = PulseEntry(xi=0.15, omega=1.01, cycles=4, cep_pi=0.0)
_B = PulseEntry(xi=0.2, omega=0.808, cycles=3, cep_pi=0.5)
_B2 = PulseEntry(xi=1.0, omega=0.35, cycles=4, cep_pi=0.25)

_SWEEP = DelaySpec(form="range", start=0.0, stop=15.0, step=0.1)
_L1 = pulse_length(_P1.to_spec())
_FIG2_DELAYS = DelaySpec(form="values", values=(0.0, 0.06 * _L1, 0.13 * _L1))


def _pair(entry: PulseEntry, delay: DelaySpec) -> RunConfig:
    return RunConfig(omega_gamma=1.01, pulses=(entry, entry), delay=delay)


def _mixed(first: PulseEntry, second: PulseEntry, delay: DelaySpec) -> RunConfig:
    return RunConfig(omega_gamma=1.01, pulses=(first, second), delay=delay)


def _single(entry: PulseEntry) -> RunConfig:
    return RunConfig(
        omega_gamma=1.01, pulses=(entry,), delay=DelaySpec(form="single", single=0.0)
    )


PRESETS: dict[str, RunConfig] = {
    "P1": _pair(_P1, _SWEEP),
    "P2": _pair(_P2, _SWEEP),
    "p2-xi1": _pair(_P2X, _SWEEP),
    "A": _single(_A),
    "B": _single(_B),
    "B2": _single(_B2),
    "fig2": _pair(_P1, _FIG2_DELAYS),
    "fig3-blue": _pair(_P1, _SWEEP),
    "fig3-green": _pair(_P2, _SWEEP),
    "fig4": _mixed(_A, _B, _SWEEP),
    "fig5": _mixed(_A, _B2, _SWEEP),
    "fig5-xia15": _mixed(_A15, _B2, _SWEEP),
}


def load_config(source: str) -> RunConfig:
    """Resolve a preset name, or read and parse a config file path."""
    if source in PRESETS:
        return validate(PRESETS[source])
    try:
        with open(source, encoding="utf-8") as fh:
            text = fh.read()
    except OSError as exc:
        raise ParseError(
            f"{source!r} is neither a preset ({', '.join(sorted(PRESETS))}) "
            f"nor a readable file: {exc}"
        ) from None
    return parse_config(text)
