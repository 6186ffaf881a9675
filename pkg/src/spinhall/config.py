"""Run configuration: JSON schema, validation, defaults and manifests.

A config file is a JSON object with optional blocks ``medium``,
``stack``, ``beam``, ``sweep`` and ``output``; missing keys take the
defaults below (which reproduce the asymmetric four-field setup of the
"fig2-ctl" preset).  An empty file means "all defaults".  Every value
is validated against its domain type at load time.
"""

from __future__ import annotations

import dataclasses
import json
from dataclasses import dataclass, field
from datetime import datetime, timezone
from pathlib import Path

from . import __version__
from .errors import ParseError, ValidationError
from .medium import (ControlFieldSet, EffectiveCouplings, MediumParams,
                     effective_couplings)
from .multilayer import LayerStack, RESONANT_DENOMINATOR_FLOOR
from .presets import preset_config
from .shifts import BREWSTER_FLOOR, QUADRATURE_REL_CHANGE, BeamParams
from .sweep import GOLDEN_TOL_DEG, WINDOW_REFINE_TOL

__all__ = ["RunConfig", "RunManifest", "load_config", "write_config", "TOLERANCES"]

TOLERANCES = {
    "brewster_floor_abs_rp": BREWSTER_FLOOR,
    "resonant_denominator_floor": RESONANT_DENOMINATOR_FLOOR,
    "golden_section_tol_deg": GOLDEN_TOL_DEG,
    "window_refine_tol_gamma": WINDOW_REFINE_TOL,
    "quadrature_rel_change": QUADRATURE_REL_CHANGE,
}


@dataclass(frozen=True)
class MediumConfig:
    gamma_b: float = 1.0
    gamma_e: float = 1.0
    eta: float = 0.1
    amplitudes: tuple = (1.5, 3.0, 2.5, 0.9)
    phases: tuple = (0.0, 0.0, 0.0, 0.0)
    # optional direct couplings [re, im]; set when the field-set route is
    # degenerate (vanishing upper legs)
    alpha: tuple | None = None
    beta: tuple | None = None
    omega_total: float | None = None


@dataclass(frozen=True)
class StackConfig:
    eps1: tuple = (2.25, 0.0)
    eps3: tuple = (2.25, 0.0)
    thickness_d: float = 0.4e-6
    lam: float = 780e-9


@dataclass(frozen=True)
class BeamConfig:
    w0_lambdas: float = 50.0


@dataclass(frozen=True)
class SweepConfig:
    theta_deg: tuple = (30.0, 38.0, 801)
    detuning: tuple = (-6.0, 6.0, 601)
    eta_list: tuple | None = None


@dataclass(frozen=True)
class OutputConfig:
    out: str = "spinhall_out.csv"
    format: str = "csv"
    manifest_header: bool = False


@dataclass(frozen=True)
class RunConfig:
    medium: MediumConfig = field(default_factory=MediumConfig)
    stack: StackConfig = field(default_factory=StackConfig)
    beam: BeamConfig = field(default_factory=BeamConfig)
    sweep: SweepConfig = field(default_factory=SweepConfig)
    output: OutputConfig = field(default_factory=OutputConfig)

    def field_set(self) -> ControlFieldSet:
        a, p = self.medium.amplitudes, self.medium.phases
        return ControlFieldSet.from_amplitudes(*a, *p)

    def build(self):
        """Validated (MediumParams, LayerStack, BeamParams) triple.

        The stack's eps2 is seeded as vacuum; evaluation replaces it per
        detuning from the medium response.
        """
        try:
            m = self.medium
            if m.alpha is not None or m.beta is not None or m.omega_total is not None:
                if None in (m.alpha, m.beta, m.omega_total):
                    raise ValidationError(
                        "direct couplings need all of alpha, beta, omega_total")
                couplings = EffectiveCouplings(
                    complex(*m.alpha), complex(*m.beta), float(m.omega_total))
            else:
                couplings = effective_couplings(self.field_set())
            medium = MediumParams(gamma_b=m.gamma_b, gamma_e=m.gamma_e,
                                  eta=m.eta, couplings=couplings)
            stack = LayerStack(eps2=1.0 + 0j,
                               eps1=complex(*self.stack.eps1),
                               eps3=complex(*self.stack.eps3),
                               thickness_d=self.stack.thickness_d)
            beam = BeamParams(w0=self.beam.w0_lambdas * self.stack.lam,
                              lam=self.stack.lam,
                              eps_incident=float(self.stack.eps1[0]))
        except (ValueError, TypeError) as exc:
            raise ValidationError(str(exc)) from exc
        return medium, stack, beam

    def to_dict(self) -> dict:
        return dataclasses.asdict(self)


_BLOCKS = {"medium": MediumConfig, "stack": StackConfig, "beam": BeamConfig,
           "sweep": SweepConfig, "output": OutputConfig}
_TUPLE_FIELDS = {"amplitudes", "phases", "alpha", "beta", "eps1", "eps3",
                 "theta_deg", "detuning", "eta_list"}


def _build_block(cls, data: dict, block: str):
    known = {f.name for f in dataclasses.fields(cls)}
    unknown = set(data) - known
    if unknown:
        raise ValidationError(f"unknown key(s) in '{block}': {sorted(unknown)}")
    coerced = {}
    for key, value in data.items():
        if key in _TUPLE_FIELDS and value is not None:
            if not isinstance(value, (list, tuple)):
                raise ValidationError(f"'{block}.{key}' must be a list")
            value = tuple(value)
        coerced[key] = value
    return cls(**coerced)


def config_from_dict(data: dict) -> RunConfig:
    unknown = set(data) - set(_BLOCKS)
    if unknown:
        raise ValidationError(f"unknown top-level key(s): {sorted(unknown)}")
    blocks = {}
    for name, cls in _BLOCKS.items():
        blocks[name] = _build_block(cls, data.get(name, {}), name)
    cfg = RunConfig(**blocks)
    _validate(cfg)
    return cfg


def _validate(cfg: RunConfig):
    m = cfg.medium
    if m.eta < 0:
        raise ValidationError("eta must be >= 0")
    if m.gamma_b <= 0 or m.gamma_e <= 0:
        raise ValidationError("gamma_b and gamma_e must be > 0")
    if len(m.amplitudes) != 4 or len(m.phases) != 4:
        raise ValidationError("amplitudes and phases must each have 4 entries")
    if any(a < 0 for a in m.amplitudes):
        raise ValidationError("field amplitudes must be >= 0")
    if cfg.stack.thickness_d < 0:
        raise ValidationError("thickness_d must be >= 0")
    if cfg.stack.lam <= 0:
        raise ValidationError("lam must be > 0")
    if cfg.beam.w0_lambdas <= 0:
        raise ValidationError("w0_lambdas must be > 0")
    if cfg.output.format not in ("csv", "json"):
        raise ValidationError("output format must be 'csv' or 'json'")
    for name, rng in (("theta_deg", cfg.sweep.theta_deg),
                      ("detuning", cfg.sweep.detuning)):
        if len(rng) != 3 or rng[2] < 2 or not rng[0] < rng[1]:
            raise ValidationError(f"sweep.{name} must be [min, max, count>=2] with min < max")
    # construct the domain objects so their own invariants run too
    cfg.build()


def load_config(path=None, preset: str | None = None) -> RunConfig:
    """Config from a JSON file and/or a named preset, over the defaults.

    Precedence: defaults < preset < file.  An empty or absent file
    contributes nothing.
    """
    merged: dict = {}
    if preset is not None:
        try:
            _merge(merged, preset_config(preset))
        except KeyError as exc:
            raise ValidationError(str(exc)) from exc
    if path is not None:
        text = Path(path).read_text(encoding="utf-8")
        if text.strip():
            try:
                data = json.loads(text)
            except json.JSONDecodeError as exc:
                raise ParseError(f"{path}: line {exc.lineno} col {exc.colno}: {exc.msg}") from exc
            if not isinstance(data, dict):
                raise ParseError(f"{path}: top level must be a JSON object")
            _merge(merged, data)
    return config_from_dict(merged)


def _merge(base: dict, extra: dict):
    for key, value in extra.items():
        if isinstance(value, dict) and isinstance(base.get(key), dict):
            _merge(base[key], value)
        else:
            base[key] = value


def write_config(cfg: RunConfig, path) -> None:
    Path(path).write_text(json.dumps(cfg.to_dict(), indent=2, sort_keys=True) + "\n",
                          encoding="utf-8")


@dataclass(frozen=True)
class RunManifest:
    """Reproducibility record emitted alongside every data file."""

    command: list
    config: dict
    row_count: int
    flagged_count: int
    tool: str = "spinhall"
    version: str = __version__
    timestamp_utc: str = ""
    tolerances: dict = field(default_factory=lambda: dict(TOLERANCES))

    @classmethod
    def for_run(cls, command, cfg: RunConfig, row_count: int,
                flagged_count: int) -> "RunManifest":
        return cls(command=list(command), config=cfg.to_dict(),
                   row_count=row_count, flagged_count=flagged_count,
                   timestamp_utc=datetime.now(timezone.utc).isoformat())

    def to_json(self) -> str:
        return json.dumps(dataclasses.asdict(self), indent=2, sort_keys=True)

    def write(self, data_path) -> Path:
        path = Path(str(data_path) + ".manifest.json")
        path.write_text(self.to_json() + "\n", encoding="utf-8")
        return path
