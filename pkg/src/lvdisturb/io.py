"""Run configuration (TOML) and file formats for trajectories and fields."""

from __future__ import annotations

import json
import math
import re
from dataclasses import dataclass, field, fields
from importlib import resources
from pathlib import Path
from typing import Any

import numpy as np

try:
    import tomllib
except ModuleNotFoundError:  # Python < 3.11
    import tomli as tomllib

from .errors import ConfigError, DataFormatError, InvalidInputError, LVError
from .integrators import IntegrationSpec, Trajectory
from .model import Disturbance, NoiseSpec, NondimParams, State
from .spatial import Field, GridSpec

__all__ = [
    "PDEConfig",
    "RunConfig",
    "default_config_path",
    "load_config",
    "parse_config",
    "write_trajectory_csv",
    "read_trajectory_csv",
    "write_field_csv",
    "write_pgm",
]

_NUM = "number"
_INT = "integer"
_BOOL = "boolean"
_STR = "string"

_MODEL_KEYS = {f.name: _NUM for f in fields(NondimParams)}
_DIST_KEYS = {"amp_prey_A": _NUM, "amp_pred_Abar": _NUM, "omega": _NUM, "phi": _NUM}
_NOISE_KEYS = {"kind": _STR, "intensity": _NUM, "tau": _NUM, "seed": _INT}
_INTEG_KEYS = {
    "method": _STR, "t0": _NUM, "t1": _NUM, "dt": _NUM, "sample_every": _NUM,
    "abs_tol": _NUM, "rel_tol": _NUM, "clamp_negative": _BOOL, "r0": _NUM, "c0": _NUM,
}
_GRID_KEYS = {
    "nx": _INT, "ny": _INT, "h": _NUM, "d1": _NUM, "d2": _NUM, "dt": _NUM, "t1": _NUM,
    "snapshot_every": _NUM, "init": _STR, "r0": _NUM, "c0": _NUM, "perturbation": _NUM,
    "seed": _INT, "reacting": _BOOL,
}
_OUTPUT_KEYS = {"csv": _STR, "plot": _STR, "out_dir": _STR}
_SECTIONS = ("model", "disturbance", "integration", "grid", "output", "metadata")
GRID_INITS = ("uniform", "random", "zero")


@dataclass(frozen=True)
class PDEConfig:
    grid: GridSpec
    dt: float
    t1: float
    snapshot_every: float
    init: str = "uniform"
    r0: float = 2.0
    c0: float = 1.0
    perturbation: float = 0.0
    seed: int = 0
    reacting: bool = True

    def initial_field(self) -> Field:
        gs = self.grid
        if self.init == "zero":
            return Field.uniform(gs, 0.0, 0.0)
        f = Field.uniform(gs, self.r0, self.c0)
        if self.init == "random":
            rng = np.random.Generator(np.random.PCG64(self.seed))
            pr = self.perturbation * rng.uniform(-1.0, 1.0, (gs.nx, gs.ny))
            pc = self.perturbation * rng.uniform(-1.0, 1.0, (gs.nx, gs.ny))
            f = Field(np.maximum(f.r + pr, 0.0), np.maximum(f.c + pc, 0.0), 0.0)
        return f


@dataclass(frozen=True)
class RunConfig:
    model: NondimParams
    disturbance: Disturbance
    integration: IntegrationSpec
    initial: State
    pde: PDEConfig | None = None
    output: dict[str, str] = field(default_factory=dict)
    metadata: dict[str, Any] = field(default_factory=dict)

    def with_seed(self, seed: int) -> "RunConfig":
        n = self.disturbance.noise
        noise = NoiseSpec(n.kind, n.intensity, n.tau, int(seed))
        d = self.disturbance
        dist = Disturbance(d.amp_prey_A, d.amp_pred_Abar, d.omega, d.phi, noise)
        return RunConfig(self.model, dist, self.integration, self.initial, self.pde, self.output, self.metadata)


def default_config_path() -> Path:
    return Path(str(resources.files("lvdisturb") / "data" / "default.toml"))


def _check_table(table: dict, schema: dict, section: str) -> dict:
    if not isinstance(table, dict):
        raise ConfigError("must be a table", section)
    for key, value in table.items():
        full = f"{section}.{key}"
        if key not in schema:
            raise ConfigError(f"unknown key (allowed: {', '.join(sorted(schema))})", full)
        kind = schema[key]
        if kind == _NUM:
            if isinstance(value, bool) or not isinstance(value, (int, float)):
                raise ConfigError(f"must be a number, got {value!r}", full)
            if not math.isfinite(value):
                raise ConfigError(f"must be finite, got {value!r}", full)
        elif kind == _INT and (isinstance(value, bool) or not isinstance(value, int)):
            raise ConfigError(f"must be an integer, got {value!r}", full)
        elif kind == _BOOL and not isinstance(value, bool):
            raise ConfigError(f"must be true or false, got {value!r}", full)
        elif kind == _STR and not isinstance(value, str):
            raise ConfigError(f"must be a string, got {value!r}", full)
    return {k: (float(v) if schema[k] == _NUM else v) for k, v in table.items()}


def _nonneg(values: dict, section: str, names) -> None:
    for name in names:
        if name in values and values[name] < 0:
            raise ConfigError(f"must be >= 0, got {values[name]}", f"{section}.{name}")


def _build(section: str, ctor, **kwargs):
    """Call a validating constructor and name the offending key on failure."""
    try:
        return ctor(**kwargs)
    except ConfigError:
        raise
    except LVError as exc:
        msg = str(exc)
        key = msg.split(" ", 1)[0]
        if key in kwargs:
            raise ConfigError(msg.split(" ", 1)[1], f"{section}.{key}") from None
        raise ConfigError(msg, section) from None


def parse_config(data: dict) -> RunConfig:
    """Validate a parsed TOML document and build a :class:`RunConfig`."""
    for key in data:
        if key not in _SECTIONS:
            raise ConfigError(f"unknown section (allowed: {', '.join(_SECTIONS)})", key)
    if "model" not in data:
        raise ConfigError("missing required section", "model")
    model = _check_table(data["model"], _MODEL_KEYS, "model")
    for key in _MODEL_KEYS:
        if key not in model:
            raise ConfigError("missing required key", f"model.{key}")
    _nonneg(model, "model", _MODEL_KEYS)
    params = _build("model", NondimParams, **model)

    dist_tab = dict(data.get("disturbance", {}))
    noise_tab = dist_tab.pop("noise", {})
    dist_vals = _check_table(dist_tab, _DIST_KEYS, "disturbance")
    noise_vals = _check_table(noise_tab, _NOISE_KEYS, "disturbance.noise")
    _nonneg(dist_vals, "disturbance", ("amp_prey_A", "amp_pred_Abar", "omega"))
    _nonneg(noise_vals, "disturbance.noise", ("intensity",))
    if "phi" in dist_vals and not (-math.pi < dist_vals["phi"] <= math.pi):
        raise ConfigError(f"must lie in (-pi, pi], got {dist_vals['phi']}", "disturbance.phi")
    if "seed" in noise_vals and not 0 <= noise_vals["seed"] < 2**64:
        raise ConfigError("must be a 64-bit unsigned integer", "disturbance.noise.seed")
    noise = _build("disturbance.noise", NoiseSpec, **noise_vals)
    dist = _build("disturbance", Disturbance, noise=noise, **dist_vals)

    integ = _check_table(data.get("integration", {}), _INTEG_KEYS, "integration")
    r0 = integ.pop("r0", 2.0)
    c0 = integ.pop("c0", 1.0)
    if r0 < 0:
        raise ConfigError(f"must be >= 0, got {r0}", "integration.r0")
    if c0 < 0:
        raise ConfigError(f"must be >= 0, got {c0}", "integration.c0")
    spec = _build("integration", IntegrationSpec, **integ)
    if noise.kind != "none" and spec.method != "euler-maruyama":
        raise ConfigError(
            f"noise kind {noise.kind!r} requires 'euler-maruyama', got {spec.method!r}", "integration.method"
        )

    pde = None
    if "grid" in data:
        g = _check_table(data["grid"], _GRID_KEYS, "grid")
        gs_keys = {k: g.pop(k) for k in ("nx", "ny", "h", "d1", "d2") if k in g}
        _nonneg(gs_keys, "grid", ("d1", "d2"))
        for k in ("nx", "ny"):
            if k in gs_keys and gs_keys[k] < 3:
                raise ConfigError(f"must be >= 3, got {gs_keys[k]}", f"grid.{k}")
        if "h" in gs_keys and not gs_keys["h"] > 0:
            raise ConfigError(f"must be > 0, got {gs_keys['h']}", "grid.h")
        gs = _build("grid", GridSpec, **gs_keys)
        g.setdefault("dt", spec.dt)
        g.setdefault("t1", spec.t1)
        g.setdefault("snapshot_every", max(g["dt"], (g["t1"] - spec.t0) / 10))
        g.setdefault("r0", r0)
        g.setdefault("c0", c0)
        if not g["dt"] > 0:
            raise ConfigError(f"must be > 0, got {g['dt']}", "grid.dt")
        if not g["t1"] > 0:
            raise ConfigError(f"must be > 0, got {g['t1']}", "grid.t1")
        if not g["snapshot_every"] >= g["dt"]:
            raise ConfigError(f"must be >= grid.dt, got {g['snapshot_every']}", "grid.snapshot_every")
        if g.get("init", "uniform") not in GRID_INITS:
            raise ConfigError(f"must be one of {GRID_INITS}, got {g['init']!r}", "grid.init")
        _nonneg(g, "grid", ("r0", "c0", "perturbation"))
        pde = PDEConfig(grid=gs, **g)

    output = _check_table(data.get("output", {}), _OUTPUT_KEYS, "output")
    metadata = data.get("metadata", {})
    if not isinstance(metadata, dict):
        raise ConfigError("must be a table", "metadata")
    return RunConfig(params, dist, spec, State(r0, c0), pde, output, dict(metadata))


def load_config(path) -> RunConfig:
    path = Path(path)
    try:
        text = path.read_text(encoding="utf-8")
    except OSError as exc:
        raise ConfigError(f"cannot read config: {exc.strerror or exc}", str(path)) from None
    try:
        data = tomllib.loads(text)
    except tomllib.TOMLDecodeError as exc:
        raise ConfigError(f"TOML parse error: {exc}", str(path)) from None
    return parse_config(data)


# -- trajectories -------------------------------------------------------------

def _fmt(x: float) -> str:
    return format(float(x), ".17g")


def write_trajectory_csv(traj: Trajectory, path) -> None:
    """Write ``t,r,c`` rows with 17 significant digits and a ``# meta:`` header."""
    lines = []
    if traj.meta:
        lines.append("# meta: " + json.dumps(traj.meta, sort_keys=True, default=float))
        lines.append(f"# clamp_events: {len(traj.clamp_events)}")
    lines.append("t,r,c")
    for t, r, c in zip(traj.times, traj.r, traj.c):
        lines.append(f"{_fmt(t)},{_fmt(r)},{_fmt(c)}")
    Path(path).write_text("\n".join(lines) + "\n", encoding="utf-8")


def read_trajectory_csv(path) -> Trajectory:
    meta: dict = {}
    header_seen = False
    rows: list[tuple[float, float, float]] = []
    with open(path, encoding="utf-8") as fh:
        for lineno, raw in enumerate(fh, start=1):
            line = raw.strip()
            if not line:
                continue
            if line.startswith("#"):
                m = re.match(r"#\s*meta:\s*(.*)$", line)
                if m:
                    try:
                        meta = json.loads(m.group(1))
                    except json.JSONDecodeError as exc:
                        raise DataFormatError(f"line {lineno}: malformed meta block ({exc.msg})") from None
                continue
            if not header_seen:
                if [h.strip() for h in line.split(",")] != ["t", "r", "c"]:
                    raise DataFormatError(f"line {lineno}: expected header 't,r,c', got {line!r}")
                header_seen = True
                continue
            parts = line.split(",")
            if len(parts) != 3:
                raise DataFormatError(f"row {lineno}: expected 3 fields, got {len(parts)}")
            try:
                rows.append(tuple(float(p) for p in parts))
            except ValueError:
                raise DataFormatError(f"row {lineno}: non-numeric value in {line!r}") from None
    if not header_seen:
        raise DataFormatError("missing 't,r,c' header")
    arr = np.array(rows, dtype=float).reshape(-1, 3)
    try:
        return Trajectory(arr[:, 0], arr[:, 1], arr[:, 2], meta=meta)
    except InvalidInputError as exc:
        raise DataFormatError(str(exc)) from None


# -- fields -------------------------------------------------------------------

def write_field_csv(grid: np.ndarray, path) -> None:
    """Row-major matrix, one grid row per line."""
    np.savetxt(path, np.asarray(grid, dtype=float), delimiter=",", fmt="%.17g")


def write_pgm(grid: np.ndarray, path) -> None:
    """Binary 8-bit PGM (P5), scaled linearly from [0, max] to [0, 255]."""
    g = np.asarray(grid, dtype=float)
    top = float(g.max()) if g.size else 0.0
    if top > 0:
        px = np.clip(np.rint(np.clip(g, 0.0, None) / top * 255.0), 0, 255).astype(np.uint8)
    else:
        px = np.zeros(g.shape, dtype=np.uint8)
    rows, cols = px.shape
    with open(path, "wb") as fh:
        fh.write(f"P5\n{cols} {rows}\n255\n".encode("ascii"))
        fh.write(px.tobytes())
