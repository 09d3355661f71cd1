"""Flat key-value run configuration.

Files are UTF-8 text, one `key = value` per line, `#` starts a comment,
dotted keys group related settings. Lists use brackets: `[0.1, 0.01]`.
Booleans are the words true / false. Parsing reports the first error with
its line number; duplicate keys are rejected by name.

Every key is declared in the schema below with a type and a default; keys a
mode does not consume are simply ignored by that mode, but unknown keys are
always an error. Mode-specific requirements (which blocks must be present,
eps_list shape) are validated after the file parses.
"""
from __future__ import annotations

import hashlib
from dataclasses import dataclass, field

MODES = (
    "kinetic-homogeneous",
    "kinetic-1d",
    "twophase-rdt",
    "twophase-bn",
    "euler-mix",
    "limit-study",
    "validate-exchange",
    "validate-collision",
)

_REQUIRED = object()
MAX_SPECIES = 4


class ConfigError(ValueError):
    """Malformed configuration; message carries the location."""


@dataclass(frozen=True)
class _Field:
    kind: str  # int | float | bool | str | float_list
    default: object
    choices: tuple = ()


def _schema() -> dict:
    s = {
        "mode": _Field("str", _REQUIRED, MODES),
        "seed": _Field("int", 0),
        "output_dir": _Field("str", "out"),
        "deterministic": _Field("bool", False),
        "snapshot_cadence": _Field("int", 1),
        # velocity grid
        "grid.dim": _Field("int", 2),
        "grid.nodes_per_axis": _Field("int", 16),
        "grid.v_max": _Field("float", 5.0),
        # spatial domain for kinetic-1d / limit-study
        "space.x_cells": _Field("int", 24),
        "space.x_length": _Field("float", 1.0),
        "space.bc": _Field("str", "periodic", ("periodic", "reflective")),
        # kinetic scaling
        "kinetic.eps": _Field("float", 1.0),
        "kinetic.kappa": _Field("float", 1.0),
        "kinetic.eps_list": _Field("float_list", ()),
        # collision kernel; angular_mass is the total angular mass A
        "kernel.family": _Field("str", "pseudo_maxwellian", ("pseudo_maxwellian", "hard_sphere", "vhs")),
        "kernel.gamma": _Field("float", 0.0),
        "kernel.angular_mass": _Field("float", 1.0),
        "kernel.cross_angular_mass": _Field("float", -1.0),  # -1: same as angular_mass
        "kernel.n_angular": _Field("int", 8),
        "collision.fixup": _Field("bool", True),
        "collision.equilibrium_correction": _Field("bool", False),
        # species and initial Maxwellian data
        "species.count": _Field("int", 2),
        "init.style": _Field("str", "uniform", ("uniform", "segregated")),
        # time stepping for kinetic modes
        "time.dt": _Field("float", 0.0),  # 0: from the stability bound
        "time.n_steps": _Field("int", 0),
        "time.t_final": _Field("float", 0.0),
        # control volumes
        "volumes.count": _Field("int", 1),
        "volumes.rule": _Field("str", "threshold", ("threshold", "fraction")),
        # macroscopic solvers
        "macro.x_cells": _Field("int", 64),
        "macro.x_length": _Field("float", 1.0),
        "macro.bc": _Field("str", "periodic", ("periodic", "transmissive")),
        "macro.cfl": _Field("float", 0.45),
        "macro.dt": _Field("float", 0.0),
        "macro.t_final": _Field("float", 0.1),
        "eos.c": _Field("float", 1.0),
        "eos.gamma": _Field("float", 2.0),
        "relax.tau": _Field("float", 0.0),  # 0: derive from the interface widths
        "relax.eps": _Field("float", 0.0),
        "relax.lambda": _Field("float", 1.0),
        "relax.rho": _Field("float", 1.0),
        "relax.eta1": _Field("float", 0.0),
        "relax.eta2": _Field("float", 0.0),
        "relax.zeta": _Field("float", 0.0),
        "relax.xi": _Field("float", 0.0),
        "bn.p_interface": _Field("str", "alpha_weighted", ("alpha_weighted", "P1", "P2")),
        # macroscopic initial data: two-entry lists give left/right halves,
        # one entry is uniform; 'sine' profiles modulate the first entry
        "macro_init.profile": _Field("str", "riemann", ("riemann", "uniform", "sine")),
        "macro_init.alpha1": _Field("float_list", (0.5,)),
        "macro_init.rho1": _Field("float_list", (1.0,)),
        "macro_init.rho2": _Field("float_list", (1.0,)),
        "macro_init.u1": _Field("float_list", (0.0,)),
        "macro_init.u2": _Field("float_list", (0.0,)),
        "macro_init.amplitude": _Field("float", 0.1),
        "macro_init.T": _Field("float", 1.0),
        # limit study
        "limit.t_final": _Field("float", 0.15),
        "limit.transient_fraction": _Field("float", 0.3),
        # validation suite
        "validate.prefix": _Field("str", ""),
        "validate.tolerance_scale": _Field("float", 1.0),
    }
    for k in range(1, MAX_SPECIES + 1):
        s[f"species.{k}.mass"] = _Field("float", 1.0)
        s[f"species.{k}.n"] = _Field("float", 1.0)
        s[f"species.{k}.u_x"] = _Field("float", 0.0)
        s[f"species.{k}.u_y"] = _Field("float", 0.0)
        s[f"species.{k}.u_z"] = _Field("float", 0.0)
        s[f"species.{k}.T"] = _Field("float", 1.0)
        s[f"species.{k}.bimodal_delta"] = _Field("float", 0.0)
        s[f"species.{k}.rho"] = _Field("float_list", (1.0,))
    return s


SCHEMA = _schema()


@dataclass(frozen=True)
class RunConfig:
    """Fully resolved configuration: every schema key has a value."""

    mode: str
    values: dict = field(repr=False)
    lines: dict = field(repr=False, default_factory=dict)

    def get(self, key: str):
        try:
            return self.values[key]
        except KeyError:
            raise KeyError(f"key {key!r} is not in the schema") from None

    @property
    def seed(self) -> int:
        return self.values["seed"]

    @property
    def output_dir(self) -> str:
        return self.values["output_dir"]

    @property
    def deterministic(self) -> bool:
        return self.values["deterministic"]

    @property
    def snapshot_cadence(self) -> int:
        return self.values["snapshot_cadence"]

    @property
    def eps_list(self):
        return self.values["kinetic.eps_list"]

    def with_value(self, key: str, value) -> "RunConfig":
        if key not in SCHEMA:
            raise KeyError(f"key {key!r} is not in the schema")
        vals = dict(self.values)
        vals[key] = value
        return RunConfig(mode=vals["mode"], values=vals, lines=self.lines)


def _parse_scalar(kind: str, raw: str, line_no: int, key: str):
    if kind == "int":
        try:
            return int(raw)
        except ValueError:
            raise ConfigError(f"line {line_no}: key '{key}' expects an integer, got {raw!r}")
    if kind == "float":
        try:
            return float(raw)
        except ValueError:
            raise ConfigError(f"line {line_no}: key '{key}' expects a number, got {raw!r}")
    if kind == "bool":
        if raw == "true":
            return True
        if raw == "false":
            return False
        raise ConfigError(f"line {line_no}: key '{key}' expects true or false, got {raw!r}")
    if kind == "str":
        return raw
    raise AssertionError(kind)


def _parse_value(spec: _Field, raw: str, line_no: int, key: str):
    if spec.kind == "float_list":
        if not (raw.startswith("[") and raw.endswith("]")):
            raise ConfigError(f"line {line_no}: key '{key}' expects a bracketed list, got {raw!r}")
        body = raw[1:-1].strip()
        if not body:
            return ()
        return tuple(
            _parse_scalar("float", item.strip(), line_no, key) for item in body.split(",")
        )
    val = _parse_scalar(spec.kind, raw, line_no, key)
    if spec.choices and val not in spec.choices:
        opts = ", ".join(str(c) for c in spec.choices)
        raise ConfigError(f"line {line_no}: key '{key}' must be one of {{{opts}}}, got {val!r}")
    return val


# keys that must appear explicitly in the file for each mode
_MODE_REQUIRED = {
    "kinetic-homogeneous": ("species.count",),
    "kinetic-1d": ("species.count", "space.x_cells"),
    "twophase-rdt": ("macro.t_final",),
    "twophase-bn": ("macro.t_final",),
    "euler-mix": ("macro.t_final", "species.count"),
    "limit-study": ("kinetic.eps_list", "species.count", "space.x_cells"),
    "validate-exchange": (),
    "validate-collision": (),
}


def _validate_mode(values: dict, lines: dict, present: set):
    mode = values["mode"]
    for key in _MODE_REQUIRED[mode]:
        if key not in present:
            raise ConfigError(f"mode '{mode}' requires key '{key}'")
    eps_list = values["kinetic.eps_list"]
    if mode == "limit-study":
        loc = f"line {lines['kinetic.eps_list']}: " if "kinetic.eps_list" in lines else ""
        if len(eps_list) < 2:
            raise ConfigError(f"{loc}limit-study needs at least two eps values")
        if any(e <= 0.0 for e in eps_list):
            raise ConfigError(f"{loc}eps_list entries must be positive")
        if any(b >= a for a, b in zip(eps_list, eps_list[1:])):
            raise ConfigError(f"{loc}eps_list must be strictly decreasing")
        if values["init.style"] != "segregated":
            raise ConfigError("limit-study requires init.style = segregated")
    if values["init.style"] == "segregated" and values["species.count"] != 2:
        raise ConfigError("segregated initial data is defined for exactly two species")
    count = values["species.count"]
    if not 1 <= count <= MAX_SPECIES:
        loc = f"line {lines['species.count']}: " if "species.count" in lines else ""
        raise ConfigError(f"{loc}species.count must be between 1 and {MAX_SPECIES}")
    for scalar, name in (
        ("kinetic.eps", "kinetic.eps"),
        ("kinetic.kappa", "kinetic.kappa"),
        ("grid.v_max", "grid.v_max"),
        ("space.x_length", "space.x_length"),
        ("macro.x_length", "macro.x_length"),
    ):
        if values[scalar] <= 0.0:
            loc = f"line {lines[scalar]}: " if scalar in lines else ""
            raise ConfigError(f"{loc}{name} must be positive")
    if values["time.n_steps"] < 0:
        raise ConfigError("time.n_steps must be nonnegative")
    if values["snapshot_cadence"] < 1:
        raise ConfigError("snapshot_cadence must be at least 1")


def parse_config(text: str) -> RunConfig:
    """Parse and fully validate one configuration file."""
    values = {}
    lines = {}
    for line_no, raw_line in enumerate(text.splitlines(), start=1):
        line = raw_line.split("#", 1)[0].strip()
        if not line:
            continue
        if "=" not in line:
            raise ConfigError(f"line {line_no}: expected 'key = value', got {raw_line.strip()!r}")
        key, _, raw = line.partition("=")
        key = key.strip()
        raw = raw.strip()
        if key not in SCHEMA:
            raise ConfigError(f"line {line_no}: unknown key '{key}'")
        if key in values:
            raise ConfigError(f"line {line_no}: duplicate key '{key}'")
        if not raw:
            raise ConfigError(f"line {line_no}: key '{key}' has no value")
        values[key] = _parse_value(SCHEMA[key], raw, line_no, key)
        lines[key] = line_no
    if "mode" not in values:
        raise ConfigError("missing required key 'mode'")
    present = set(values)
    for key, spec in SCHEMA.items():
        if key not in values:
            if spec.default is _REQUIRED:
                raise ConfigError(f"missing required key '{key}'")
            values[key] = spec.default
    _validate_mode(values, lines, present)
    return RunConfig(mode=values["mode"], values=values, lines=lines)


def load_config(path: str) -> RunConfig:
    with open(path, "r", encoding="utf-8") as fh:
        return parse_config(fh.read())


def _render_value(val) -> str:
    if isinstance(val, bool):
        return "true" if val else "false"
    if isinstance(val, tuple):
        return "[" + ",".join(f"{x:.17g}" for x in val) + "]"
    if isinstance(val, float):
        return f"{val:.17g}"
    return str(val)


def canonical_values(cfg: RunConfig) -> dict:
    """Every resolved key rendered as text, sorted, output_dir excluded."""
    return {
        key: _render_value(cfg.values[key])
        for key in sorted(cfg.values)
        if key != "output_dir"
    }


def config_hash(cfg: RunConfig) -> str:
    """Stable short hash of the resolved configuration.

    output_dir is excluded: pointing the same run at a different directory
    must not change where artifacts land inside it. Worker count is a CLI
    concern and never part of the config.
    """
    parts = [f"{k}={v}" for k, v in canonical_values(cfg).items()]
    digest = hashlib.sha256("\n".join(parts).encode("utf-8")).hexdigest()
    return digest[:12]
