"""Declarative scenario configs (JSON, schema ``maskquant/1``).

Lengths are given in natural units: radii in w0, axial positions in z_R.
A sweep is a scalar, a strictly increasing list, or ``{"start", "stop", "num"}``.
"""

import json
import math
from dataclasses import dataclass, field

import numpy as np

from .errors import MaskQuantError
from .gaussian import SqueezeSpec
from .mask import basis_for, radius_from_transmission
from .modes import DEFAULT_RAYLEIGH_RANGE, DEFAULT_WAVELENGTH, BeamGeometry, ModeIndex
from .numerics import QuadratureSpec

SCHEMA = "maskquant/1"

_TOP_KEYS = {"schema", "beam", "mask", "inputs", "engine", "output", "grid"}
_ENGINE_KEYS = {
    "basis", "p_max", "l_max", "n_max", "relative_tolerance", "absolute_tolerance",
    "max_subdivisions", "seed", "ch_starts", "ch_state", "workers", "side",
}


class ConfigError(MaskQuantError, ValueError):
    """The scenario config does not validate."""


def _require(cond, msg):
    if not cond:
        raise ConfigError(msg)


def _number(value, what):
    _require(isinstance(value, (int, float)) and not isinstance(value, bool), f"{what} must be a number")
    _require(math.isfinite(value), f"{what} must be finite")
    return float(value)


def parse_sweep(value, what):
    """Scalar, strictly increasing list, or {start, stop, num} -> tuple of floats."""
    if isinstance(value, dict):
        _require(set(value) == {"start", "stop", "num"}, f"{what} range needs start, stop and num")
        num = value["num"]
        _require(isinstance(num, int) and num >= 1, f"{what}.num must be a positive integer")
        start, stop = _number(value["start"], f"{what}.start"), _number(value["stop"], f"{what}.stop")
        _require(num == 1 or stop > start, f"{what} range must increase")
        points = tuple(float(x) for x in np.linspace(start, stop, num))
    elif isinstance(value, list):
        _require(len(value) > 0, f"{what} list is empty")
        points = tuple(_number(v, what) for v in value)
    else:
        points = (_number(value, what),)
    _require(all(b > a for a, b in zip(points, points[1:])), f"{what} must be strictly increasing")
    return points


def _mode(key):
    if isinstance(key, (list, tuple)) and len(key) == 2:
        l, p = key
    elif isinstance(key, str):
        parts = key.strip().strip("()").split(",")
        _require(len(parts) == 2, f"bad mode key {key!r}")
        try:
            l, p = int(parts[0]), int(parts[1])
        except ValueError:
            raise ConfigError(f"bad mode key {key!r}") from None
    else:
        raise ConfigError(f"bad mode key {key!r}")
    _require(isinstance(l, int) and isinstance(p, int) and p >= 0, f"bad mode key {key!r}")
    return ModeIndex(l, p)


@dataclass(frozen=True)
class InputSpec:
    squeeze: SqueezeSpec = SqueezeSpec()
    photons: int = 0
    amplitude: complex = 0j


@dataclass(frozen=True)
class ScenarioConfig:
    beam: BeamGeometry
    radii: tuple
    z0s: tuple
    inputs: dict
    basis: tuple
    quadrature: QuadratureSpec
    n_max: int = 24
    seed: int = 0
    ch_starts: int = 12
    ch_state: str = "entangled"
    workers: int = 1
    side: str = "output"
    grid_half_width: float = 3.0
    grid_n: int = 101
    output: str = ""
    raw: dict = field(default_factory=dict, compare=False)

    @property
    def zr(self):
        return self.beam.rayleigh_range

    def radius_m(self, radius_over_w0):
        return radius_over_w0 * self.beam.w0

    def z0_m(self, z0_over_zr):
        return z0_over_zr * self.zr

    def squeeze_specs(self):
        return {m: self.inputs.get(m, InputSpec()).squeeze for m in self.basis}

    def resolved(self):
        """Fully resolved config as plain JSON data (echoed into CSV headers)."""
        return {
            "schema": SCHEMA,
            "beam": {"w0": self.beam.w0, "wavelength": self.beam.wavelength, "rayleigh_range": self.zr},
            "mask": {"type": "iris", "radius_over_w0": list(self.radii), "z0_over_zR": list(self.z0s)},
            "inputs": {
                str(m): {
                    "r": s.squeeze.r,
                    "theta": s.squeeze.theta,
                    "alpha": [complex(s.squeeze.alpha).real, complex(s.squeeze.alpha).imag],
                    "photons": s.photons,
                    "amplitude": [s.amplitude.real, s.amplitude.imag],
                }
                for m, s in sorted(self.inputs.items())
            },
            "engine": {
                "basis": [[m.l, m.p] for m in self.basis],
                "n_max": self.n_max,
                "relative_tolerance": self.quadrature.relative_tolerance,
                "absolute_tolerance": self.quadrature.absolute_tolerance,
                "max_subdivisions": self.quadrature.max_subdivisions,
                "seed": self.seed,
                "ch_starts": self.ch_starts,
                "ch_state": self.ch_state,
                "workers": self.workers,
                "side": self.side,
            },
            "grid": {"half_width_over_w0": self.grid_half_width, "n": self.grid_n},
            "output": {"path": self.output},
        }


def _beam(data):
    _require(isinstance(data, dict), "beam must be an object")
    unknown = set(data) - {"w0", "z_R", "rayleigh_range", "wavelength"}
    _require(not unknown, f"unknown beam keys {sorted(unknown)}")
    wavelength = _number(data.get("wavelength", DEFAULT_WAVELENGTH), "beam.wavelength")
    zr_key = "z_R" if "z_R" in data else "rayleigh_range"
    _require(not ("w0" in data and zr_key in data), "give beam.w0 or beam.z_R, not both")
    try:
        if "w0" in data:
            return BeamGeometry(_number(data["w0"], "beam.w0"), wavelength)
        zr = _number(data.get(zr_key, DEFAULT_RAYLEIGH_RANGE), "beam.z_R")
        _require(zr > 0, "beam.z_R must be positive")
        return BeamGeometry.from_rayleigh_range(zr, wavelength)
    except MaskQuantError as exc:
        if isinstance(exc, ConfigError):
            raise
        raise ConfigError(str(exc)) from None


def _mask(data, beam):
    _require(isinstance(data, dict), "mask must be an object")
    unknown = set(data) - {"type", "radius_over_w0", "transmission_fraction", "z0_over_zR"}
    _require(not unknown, f"unknown mask keys {sorted(unknown)}")
    _require(data.get("type", "iris") == "iris", "only mask.type 'iris' is supported")
    has_r = "radius_over_w0" in data
    has_f = "transmission_fraction" in data
    _require(has_r != has_f, "give exactly one of mask.radius_over_w0 and mask.transmission_fraction")
    if has_r:
        radii = parse_sweep(data["radius_over_w0"], "mask.radius_over_w0")
        _require(all(r >= 0 for r in radii), "iris radii must be non-negative")
    else:
        fractions = parse_sweep(data["transmission_fraction"], "mask.transmission_fraction")
        _require(all(0 < f < 1 for f in fractions), "transmission fractions must lie in (0, 1)")
        radii = tuple(radius_from_transmission(beam, f) / beam.w0 for f in fractions)
    z0s = parse_sweep(data.get("z0_over_zR", 0.0), "mask.z0_over_zR")
    return radii, z0s


def _inputs(data):
    _require(isinstance(data, dict), "inputs must be an object keyed by mode, e.g. \"(0,0)\"")
    out = {}
    for key, spec in data.items():
        m = _mode(key)
        _require(isinstance(spec, dict), f"inputs[{key}] must be an object")
        unknown = set(spec) - {"r", "theta", "alpha", "photons", "amplitude"}
        _require(not unknown, f"unknown keys in inputs[{key}]: {sorted(unknown)}")
        r = _number(spec.get("r", 0.0), f"inputs[{key}].r")
        _require(r >= 0, f"inputs[{key}].r must be >= 0")
        theta = _number(spec.get("theta", 0.0), f"inputs[{key}].theta")
        alpha = _complex(spec.get("alpha", [0.0, 0.0]), f"inputs[{key}].alpha")
        amplitude = _complex(spec.get("amplitude", [0.0, 0.0]), f"inputs[{key}].amplitude")
        photons = spec.get("photons", 0)
        _require(isinstance(photons, int) and photons >= 0, f"inputs[{key}].photons must be a count")
        out[m] = InputSpec(SqueezeSpec(r, theta, alpha), photons, amplitude)
    return out


def _complex(value, what):
    if isinstance(value, (int, float)) and not isinstance(value, bool):
        return complex(_number(value, what))
    _require(isinstance(value, list) and len(value) == 2, f"{what} must be [re, im]")
    return complex(_number(value[0], what), _number(value[1], what))


def _int(engine, key, default, lo):
    value = engine.get(key, default)
    _require(isinstance(value, int) and not isinstance(value, bool) and value >= lo, f"engine.{key} must be an integer >= {lo}")
    return value


def load_config(data):
    """Validate a parsed JSON object (or a path to one) into a ScenarioConfig."""
    if isinstance(data, str):
        try:
            with open(data, encoding="utf-8") as fh:
                data = json.load(fh)
        except OSError as exc:
            raise ConfigError(f"cannot read config: {exc}") from None
        except json.JSONDecodeError as exc:
            raise ConfigError(f"config is not valid JSON: {exc}") from None
    _require(isinstance(data, dict), "config must be a JSON object")
    _require(data.get("schema") == SCHEMA, f"config schema must be {SCHEMA!r}")
    unknown = set(data) - _TOP_KEYS
    _require(not unknown, f"unknown top-level keys {sorted(unknown)}")

    beam = _beam(data.get("beam", {}))
    _require("mask" in data, "config needs a mask section")
    radii, z0s = _mask(data["mask"], beam)
    inputs = _inputs(data.get("inputs", {}))

    engine = data.get("engine", {})
    _require(isinstance(engine, dict), "engine must be an object")
    unknown = set(engine) - _ENGINE_KEYS
    _require(not unknown, f"unknown engine keys {sorted(unknown)}")
    if "basis" in engine:
        _require(isinstance(engine["basis"], list) and engine["basis"], "engine.basis must be a non-empty list")
        basis = tuple(_mode(m) for m in engine["basis"])
        _require(len(set(basis)) == len(basis), "engine.basis has duplicates")
    else:
        basis = basis_for(_int(engine, "p_max", 1, 0), _int(engine, "l_max", 0, 0))
    for m in inputs:
        _require(m in basis, f"input mode {m} is not in the basis")

    n_max = _int(engine, "n_max", 24, 0)
    _require(n_max % 2 == 0, "engine.n_max must be even")
    try:
        quad = QuadratureSpec(
            relative_tolerance=_number(engine.get("relative_tolerance", 1e-12), "engine.relative_tolerance"),
            absolute_tolerance=_number(engine.get("absolute_tolerance", 1e-14), "engine.absolute_tolerance"),
            max_subdivisions=_int(engine, "max_subdivisions", 2000, 1),
        )
    except ConfigError:
        raise
    except (MaskQuantError, ValueError) as exc:
        raise ConfigError(str(exc)) from None
    ch_state = engine.get("ch_state", "entangled")
    _require(ch_state in ("entangled", "reduced"), "engine.ch_state must be 'entangled' or 'reduced'")
    side = engine.get("side", "output")
    _require(side in ("input", "output"), "engine.side must be 'input' or 'output'")

    grid = data.get("grid", {})
    _require(isinstance(grid, dict), "grid must be an object")
    half = _number(grid.get("half_width_over_w0", 3.0), "grid.half_width_over_w0")
    _require(half > 0, "grid.half_width_over_w0 must be positive")
    grid_n = _int(grid, "n", 101, 2)

    output = data.get("output", {})
    _require(isinstance(output, dict), "output must be an object")
    path = output.get("path", "")
    _require(isinstance(path, str), "output.path must be a string")

    return ScenarioConfig(
        beam=beam,
        radii=radii,
        z0s=z0s,
        inputs=inputs,
        basis=basis,
        quadrature=quad,
        n_max=n_max,
        seed=_int(engine, "seed", 0, 0),
        ch_starts=_int(engine, "ch_starts", 12, 1),
        ch_state=ch_state,
        workers=_int(engine, "workers", 1, 1),
        side=side,
        grid_half_width=half,
        grid_n=grid_n,
        output=path,
        raw=data,
    )
