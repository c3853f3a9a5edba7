"""Run configuration: INI schema, presets and conversion to scene objects.

Schema (unknown sections or keys are rejected)::

    [scene]
    omega = 1                 # numbers accept pi, e.g. "pi/3"
    theta = pi/3
    phi_inc = 0               # incidence azimuth (scatter, nearfield)
    eps0 = 1
    mu0 = 1
    eps1 = 3
    mu1 = 2
    impedance = constant 2    # or: reciprocal_cosine <a> <b>  -> 1/(a + b cos t)
    outer = circle 0 0 0.5    # circle <cx> <cy> <r>
    inner = kite 0.2 0.1 -0.2 0.1
                              # kite <radius> <bend> <ox> <oy>
                              # peanut <a> <b> <ox> <oy>
                              # apple <c0> <c1> <c2> <d> <ox> <oy>
    sources = -0.1 0.35  0.1 0.3  -0.3 0.55  0.15 0.6   # z1..z4 (verify, converge)
    direction = 0             # far-field direction t for the verify table

    [numeric]
    n = 8, 16, 32, 64         # node half-counts, same on both curves
    directions = 64           # far-field directions M
    grid_c = 0.8
    grid_m = 128
    clearance = auto          # or a length
    tangential = hilbert      # or differentiation

    [output]
    dir = out
    prefix = run
"""

import ast
import configparser
import operator
from dataclasses import dataclass

import numpy as np

from .errors import ConfigError
from .fields import SourcePoints
from .geometry import apple, make_circle, make_kite, make_radial, peanut
from .system import Impedance, ScatteringScene

SCHEMA = {
    "scene": {"omega", "theta", "phi_inc", "eps0", "mu0", "eps1", "mu1", "impedance",
              "outer", "inner", "sources", "direction"},
    "numeric": {"n", "directions", "grid_c", "grid_m", "clearance", "tangential"},
    "output": {"dir", "prefix"},
}
REQUIRED_SCENE = ("omega", "theta", "eps0", "mu0", "eps1", "mu1", "impedance", "outer", "inner")

_OPS = {ast.Add: operator.add, ast.Sub: operator.sub, ast.Mult: operator.mul,
        ast.Div: operator.truediv, ast.Pow: operator.pow, ast.USub: operator.neg,
        ast.UAdd: operator.pos}


def parse_number(text):
    """Evaluate a real literal that may use ``pi`` and ``+ - * / **``."""

    def ev(node):
        if isinstance(node, ast.Expression):
            return ev(node.body)
        if isinstance(node, ast.Constant) and isinstance(node.value, (int, float)):
            return float(node.value)
        if isinstance(node, ast.Name) and node.id == "pi":
            return np.pi
        if isinstance(node, ast.BinOp) and type(node.op) in _OPS:
            return _OPS[type(node.op)](ev(node.left), ev(node.right))
        if isinstance(node, ast.UnaryOp) and type(node.op) in _OPS:
            return _OPS[type(node.op)](ev(node.operand))
        raise ValueError
    try:
        value = ev(ast.parse(text.strip(), mode="eval"))
    except (SyntaxError, ValueError, ZeroDivisionError, TypeError):
        raise ConfigError(f"not a number: {text!r}") from None
    if not np.isfinite(value):
        raise ConfigError(f"not a finite number: {text!r}")
    return value


def _numbers(text, key, count=None):
    parts = text.replace(",", " ").split()
    vals = [parse_number(p) for p in parts]
    if count is not None and len(vals) != count:
        raise ConfigError(f"{key}: expected {count} numbers, got {len(vals)}")
    return vals


def parse_curve(text, key):
    kind, _, rest = text.strip().partition(" ")
    try:
        if kind == "circle":
            cx, cy, r = _numbers(rest, key, 3)
            return make_circle((cx, cy), r)
        if kind == "kite":
            a, b, ox, oy = _numbers(rest, key, 4)
            return make_kite(a, b, (ox, oy))
        if kind == "peanut":
            a, b, ox, oy = _numbers(rest, key, 4)
            return make_radial(peanut(a, b), (ox, oy))
        if kind == "apple":
            c0, c1, c2, d, ox, oy = _numbers(rest, key, 6)
            return make_radial(apple(c0, c1, c2, d), (ox, oy))
    except ConfigError:
        raise
    except ValueError as exc:
        raise ConfigError(f"{key}: {exc}") from exc
    raise ConfigError(f"{key}: unknown curve kind {kind!r}")


def parse_impedance(text):
    kind, _, rest = text.strip().partition(" ")
    try:
        if kind == "constant":
            return Impedance.constant(*_numbers(rest, "impedance", 1))
        if kind == "reciprocal_cosine":
            return Impedance.reciprocal_cosine(*_numbers(rest, "impedance", 2))
    except ConfigError:
        raise
    except ValueError as exc:
        raise ConfigError(f"impedance: {exc}") from exc
    raise ConfigError(f"impedance: unknown rule {kind!r}")


@dataclass(frozen=True)
class RunConfig:
    raw: dict
    scene: ScatteringScene
    sources: SourcePoints
    direction: float
    n_list: tuple
    directions: int
    grid_c: float
    grid_m: int
    clearance: float
    tangential: str
    out_dir: str
    prefix: str

    def echo(self):
        return {sec: dict(sorted(vals.items())) for sec, vals in sorted(self.raw.items())}


def read_ini(text, source="<config>"):
    parser = configparser.ConfigParser(interpolation=None, inline_comment_prefixes=("#", ";"))
    try:
        parser.read_string(text, source=source)
    except configparser.Error as exc:
        raise ConfigError(str(exc)) from exc
    raw = {}
    for section in parser.sections():
        if section not in SCHEMA:
            raise ConfigError(f"{source}: unknown section [{section}]")
        raw[section] = {}
        for key, value in parser.items(section):
            if key not in SCHEMA[section]:
                raise ConfigError(f"{source}: unknown key {key!r} in [{section}]")
            raw[section][key] = value
    return raw


def merge(base, override):
    out = {sec: dict(vals) for sec, vals in base.items()}
    for sec, vals in override.items():
        out.setdefault(sec, {}).update(vals)
    return out


def build(raw, n_override=None, out_override=None):
    """Resolve a raw ``{section: {key: text}}`` mapping into a :class:`RunConfig`."""
    raw = merge({"numeric": {}, "output": {}}, raw)
    if n_override is not None:
        raw["numeric"]["n"] = n_override
    if out_override is not None:
        raw["output"]["dir"] = out_override
    scene_raw = raw.get("scene", {})
    missing = [k for k in REQUIRED_SCENE if k not in scene_raw]
    if missing:
        raise ConfigError(f"[scene] is missing {', '.join(missing)}")
    num = raw["numeric"]

    try:
        n_list = tuple(int(v) for v in num.get("n", "32").replace(",", " ").split())
    except ValueError:
        raise ConfigError(f"n: expected integers, got {num.get('n')!r}") from None
    if not n_list or min(n_list) < 2:
        raise ConfigError("n: need at least one value >= 2")
    try:
        directions = int(num.get("directions", "64"))
        grid_m = int(num.get("grid_m", "128"))
    except ValueError as exc:
        raise ConfigError(str(exc)) from None
    if directions < 1 or grid_m < 1:
        raise ConfigError("directions and grid_m must be positive")
    grid_c = parse_number(num.get("grid_c", "1"))
    if grid_c <= 0:
        raise ConfigError("grid_c must be positive")
    clear_txt = num.get("clearance", "auto").strip()
    clearance = None if clear_txt == "auto" else parse_number(clear_txt)
    tangential = num.get("tangential", "hilbert").strip()
    if tangential not in ("hilbert", "differentiation"):
        raise ConfigError(f"tangential: unknown route {tangential!r}")

    sources = None
    if "sources" in scene_raw:
        z = _numbers(scene_raw["sources"], "sources", 8)
        sources = SourcePoints(tuple(z[0:2]), tuple(z[2:4]), tuple(z[4:6]), tuple(z[6:8]))

    try:
        scene = ScatteringScene(
            omega=parse_number(scene_raw["omega"]),
            theta=parse_number(scene_raw["theta"]),
            phi_inc=parse_number(scene_raw.get("phi_inc", "0")),
            eps0=parse_number(scene_raw["eps0"]),
            mu0=parse_number(scene_raw["mu0"]),
            eps1=parse_number(scene_raw["eps1"]),
            mu1=parse_number(scene_raw["mu1"]),
            impedance=parse_impedance(scene_raw["impedance"]),
            outer=parse_curve(scene_raw["outer"], "outer"),
            inner=parse_curve(scene_raw["inner"], "inner"),
            n0=n_list[0], n1=n_list[0],
        )
    except ConfigError:
        raise
    except ValueError as exc:  # geometry and parameter errors are config problems here
        raise ConfigError(f"[scene]: {exc}") from exc

    return RunConfig(
        raw=raw, scene=scene, sources=sources,
        direction=parse_number(scene_raw.get("direction", "0")),
        n_list=n_list, directions=directions, grid_c=grid_c, grid_m=grid_m,
        clearance=clearance, tangential=tangential,
        out_dir=raw["output"].get("dir", "out"), prefix=raw["output"].get("prefix", "run"),
    )


_EXAMPLE1 = """
[scene]
omega = 1
theta = pi/3
phi_inc = 0
eps0 = 1
mu0 = 1
eps1 = 3
mu1 = 2
impedance = constant 2
outer = circle 0 0 0.5
inner = kite 0.2 0.1 -0.2 0.1
sources = -0.1 0.35  0.1 0.3  -0.3 0.55  0.15 0.6
direction = 0
[numeric]
n = 8, 16, 32, 64
[output]
prefix = example1
"""

_EXAMPLE2 = """
[scene]
omega = 2
theta = pi/4
phi_inc = 0
eps0 = 2
mu0 = 1
eps1 = 4
mu1 = 2
impedance = reciprocal_cosine 1 0.2
outer = peanut 0.5 0.1 0 0
inner = apple 0.45 0.3 -0.1 0.7 -0.25 0.05
sources = 0.2 0.2  -0.5 -0.2  0.4 0.55  -0.3 -0.6
direction = pi/4
[numeric]
n = 8, 16, 32, 64
[output]
prefix = example2
"""

_EXAMPLE3 = """
[scene]
omega = 6
theta = pi/4
phi_inc = pi/2
eps0 = 1
mu0 = 1
eps1 = 3
mu1 = 2
impedance = constant 2
outer = circle 0 0 0.5
inner = kite 0.2 0.1 -0.2 0.1
[numeric]
n = 64
grid_c = 0.8
grid_m = 128
[output]
prefix = example3
"""

_EXAMPLE4 = """
[scene]
omega = 1
theta = pi/6
phi_inc = pi/6
eps0 = 1
mu0 = 1
eps1 = 6
mu1 = 4
impedance = reciprocal_cosine 1 0.2
outer = peanut 0.5 0.1 0 0
inner = apple 0.45 0.3 -0.1 0.7 0.25 -0.05
[numeric]
n = 64
grid_c = 1
grid_m = 128
[output]
prefix = example4
"""

PRESETS = {"example1": _EXAMPLE1, "example2": _EXAMPLE2,
           "example3": _EXAMPLE3, "example4": _EXAMPLE4}


def preset_raw(name):
    if name not in PRESETS:
        raise ConfigError(f"unknown preset {name!r}; choose from {', '.join(PRESETS)}")
    return read_ini(PRESETS[name], source=f"preset {name}")


def load(config_path=None, preset=None, n_override=None, out_override=None):
    """Preset values first, then the config file on top, then command-line overrides."""
    if config_path is None and preset is None:
        raise ConfigError("give --config, --preset or both")
    raw = preset_raw(preset) if preset else {}
    if config_path is not None:
        try:
            with open(config_path, encoding="utf-8") as fh:
                text = fh.read()
        except OSError as exc:
            raise ConfigError(f"cannot read config: {exc}") from exc
        raw = merge(raw, read_ini(text, source=str(config_path)))
    return build(raw, n_override, out_override)
