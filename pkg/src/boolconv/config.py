"""Scenario configuration files.

A scenario is a TOML document with four tables::

    [numeric]
    precision = "extended"      # or "double"
    seed = 0
    [numeric.tolerances]
    "T2.2" = 0.05

    [measures.mu]
    family = "pareto"
    alpha = 1.5

    [[pipeline]]
    name = "mu2"
    op = "bool_add"
    args = ["mu", "mu"]

    [[outputs]]
    kind = "verify"
    theorem = "T2.2"
    target = "mu"
    n = 2

Floats are kept as their decimal text so that they are read at the active
working precision. Tolerances can be overridden from the environment with
``BOOLCONV_TOL_<ID>`` (``T2.2`` becomes ``BOOLCONV_TOL_T2_2``).
"""
from __future__ import annotations

import os
from dataclasses import dataclass, field

try:
    import tomllib
except ModuleNotFoundError:  # Python < 3.11
    import tomli as tomllib

from . import boolean_max as bm
from .asymptotics import THEOREMS
from .boolean_conv import bool_add, bool_add_power, bool_mult
from .errors import ConfigError
from .free_additive import belinschi_nica, free_power
from .measures import Atomic, GridDensity, Mixture, ParetoTail, Semicircle, StandardCauchy, bernoulli, dirac

PRECISIONS = ("double", "extended")
FAMILIES = ("pareto", "dirac", "bernoulli", "atomic", "semicircle", "cauchy", "grid", "mixture")
OUTPUT_KINDS = ("invert", "tails", "verify", "contrast")
HANDLE_OPS = ("bool_add", "bool_add_power", "bool_mult", "bn_map", "free_power")
MAX_OPS = ("bool_max_power", "free_max_power", "classical_max_power", "bool_max_conv", "x_map", "x_inv")

DEFAULT_TOLERANCES = {
    "T2.2": 0.05, "P2.3": 0.05, "E2.4": 0.02, "T2.5": 0.1, "T2.6": 0.1, "R5.3": 0.1, "L5.1": 0.05,
    "T3.1": 0.05, "T3.2": 0.05, "T3.3": 0.05, "T3.4": 0.05, "T3.5": 0.05, "P6.6": 0.05,
    "Burgers": 1.9, "classical_breiman": 0.1,
}


def _env_key(theorem: str) -> str:
    return "BOOLCONV_TOL_" + theorem.upper().replace(".", "_")


@dataclass
class ScenarioConfig:
    measures: dict
    pipeline: list
    outputs: list
    precision: str = "double"
    seed: int = 0
    tolerances: dict = field(default_factory=dict)
    source: str = ""

    def tolerance(self, theorem: str) -> float:
        raw = os.environ.get(_env_key(theorem))
        if raw is not None:
            try:
                return float(raw)
            except ValueError:
                raise ConfigError(f"{_env_key(theorem)}={raw!r} is not a number") from None
        return float(self.tolerances.get(theorem, DEFAULT_TOLERANCES.get(theorem, 0.05)))

    def names(self) -> set:
        return set(self.measures) | {step["name"] for step in self.pipeline}


# ------------------------------------------------------------------ parsing


def loads(text: str, source: str = "<string>") -> ScenarioConfig:
    try:
        doc = tomllib.loads(text, parse_float=str)
    except tomllib.TOMLDecodeError as e:
        raise ConfigError(f"{source}: {e}") from None
    return from_dict(doc, source)


def load(path) -> ScenarioConfig:
    try:
        with open(path, "rb") as fh:
            text = fh.read().decode("utf-8")
    except OSError as e:
        raise ConfigError(f"cannot read config {path}: {e}") from None
    return loads(text, str(path))


def from_dict(doc: dict, source: str = "<dict>") -> ScenarioConfig:
    unknown = set(doc) - {"numeric", "measures", "pipeline", "outputs"}
    if unknown:
        raise ConfigError(f"unknown top-level table(s): {sorted(unknown)}")
    numeric = doc.get("numeric", {})
    precision = numeric.get("precision", "double")
    if precision not in PRECISIONS:
        raise ConfigError(f"numeric.precision must be one of {PRECISIONS}")
    try:
        seed = int(numeric.get("seed", 0))
    except (TypeError, ValueError):
        raise ConfigError("numeric.seed must be an integer") from None
    if not 0 <= seed < 2**64:
        raise ConfigError("numeric.seed must fit in an unsigned 64-bit integer")
    tolerances = {}
    for k, v in numeric.get("tolerances", {}).items():
        try:
            tolerances[k] = float(v)
        except (TypeError, ValueError):
            raise ConfigError(f"tolerance for {k} is not a number") from None
    measures = doc.get("measures", {})
    if not isinstance(measures, dict):
        raise ConfigError("[measures] must be a table")
    for name, spec in measures.items():
        if not isinstance(spec, dict) or "family" not in spec:
            raise ConfigError(f"measure {name!r} needs a 'family' key")
    pipeline = doc.get("pipeline", [])
    outputs = doc.get("outputs", [])
    if not pipeline and not outputs:
        raise ConfigError("config has an empty pipeline and no outputs")
    cfg = ScenarioConfig(dict(measures), list(pipeline), list(outputs), precision, seed, tolerances, source)
    validate(cfg)
    return cfg


def validate(cfg: ScenarioConfig) -> None:
    known = set(cfg.measures)
    for name, spec in cfg.measures.items():
        if spec.get("family") not in FAMILIES:
            raise ConfigError(f"measure {name!r}: unknown family {spec.get('family')!r}")
    for k, step in enumerate(cfg.pipeline):
        if not isinstance(step, dict) or "name" not in step or "op" not in step:
            raise ConfigError(f"pipeline step {k} needs 'name' and 'op'")
        if step["op"] not in HANDLE_OPS + MAX_OPS:
            raise ConfigError(f"pipeline step {step['name']!r}: unknown op {step['op']!r}")
        if step["name"] in known:
            raise ConfigError(f"pipeline step {step['name']!r} redefines a name")
        args = step.get("args", [])
        if not args:
            raise ConfigError(f"pipeline step {step['name']!r} has no args")
        for a in args:
            if a not in known:
                raise ConfigError(f"pipeline step {step['name']!r} references undeclared {a!r}")
        known.add(step["name"])
    for k, out in enumerate(cfg.outputs):
        kind = out.get("kind")
        if kind not in OUTPUT_KINDS:
            raise ConfigError(f"output {k}: kind must be one of {OUTPUT_KINDS}")
        if kind == "verify" and out.get("theorem") not in THEOREMS:
            raise ConfigError(f"output {k}: theorem must be one of {THEOREMS}")
        refs = [out.get("target")] + [out[r] for r in ("nu",) if r in out] + list(out.get("exact", []))
        for r in refs:
            if r not in known:
                raise ConfigError(f"output {k} references undeclared {r!r}")


# ------------------------------------------------------------------ building


def build_measure(spec: dict, resolve=None):
    """Measure from a ``{family: ..., params...}`` table."""
    spec = dict(spec)
    fam = spec.pop("family")
    try:
        if fam == "pareto":
            return ParetoTail(spec["alpha"], spec.get("xm", 1))
        if fam == "dirac":
            return dirac(spec["a"])
        if fam == "bernoulli":
            return bernoulli(spec.get("a", -1), spec.get("b", 1))
        if fam == "atomic":
            return Atomic(tuple(tuple(p) for p in spec["atoms"]))
        if fam == "semicircle":
            return Semicircle(spec.get("variance", 1))
        if fam == "cauchy":
            return StandardCauchy()
        if fam == "grid":
            return GridDensity(tuple(spec["xs"]), tuple(spec["ws"]))
        if fam == "mixture":
            if resolve is None:
                raise ConfigError("mixture components need named measures")
            return Mixture(tuple((w, resolve(n)) for w, n in spec["components"]))
    except KeyError as e:
        raise ConfigError(f"family {fam!r} is missing parameter {e}") from None
    except (TypeError, ValueError) as e:
        raise ConfigError(f"family {fam!r}: {e}") from None
    raise ConfigError(f"unknown measure family {fam!r}")


def parse_inline(text: str):
    """``family:key=value,...`` (e.g. ``pareto:alpha=1.5``) to a measure."""
    fam, _, rest = text.partition(":")
    spec = {"family": fam.strip()}
    for item in filter(None, (s.strip() for s in rest.split(","))):
        k, sep, v = item.partition("=")
        if not sep:
            raise ConfigError(f"bad inline parameter {item!r}")
        spec[k.strip()] = v.strip()
    return build_measure(spec)


def build(cfg: ScenarioConfig) -> dict:
    """Resolve every declared measure and pipeline step to an object."""
    env: dict = {}

    def resolve(name):
        if name in env:
            return env[name]
        if name not in cfg.measures:
            raise ConfigError(f"undeclared measure {name!r}")
        env[name] = build_measure(cfg.measures[name], resolve)
        return env[name]

    for name in cfg.measures:
        resolve(name)
    for step in cfg.pipeline:
        env[step["name"]] = _apply(step, [env[a] for a in step["args"]])
    return env


def _dist(x):
    return x if isinstance(x, bm.DistFunction) else bm.from_measure(x)


def _apply(step, args):
    op = step["op"]
    try:
        if op == "bool_add":
            return bool_add(*args)
        if op == "bool_add_power":
            return bool_add_power(args[0], step["t"])
        if op == "bool_mult":
            return bool_mult(args[0], args[1], check=step.get("check", True))
        if op == "bn_map":
            return belinschi_nica(args[0], step["t"])
        if op == "free_power":
            return free_power(args[0], step["t"])
        if op == "bool_max_conv":
            return bm.bool_max_conv(_dist(args[0]), _dist(args[1]))
        if op == "x_map":
            return bm.x_map(_dist(args[0]))
        if op == "x_inv":
            return bm.x_inv(_dist(args[0]))
        fn = {"bool_max_power": bm.bool_max_power, "free_max_power": bm.free_max_power,
              "classical_max_power": bm.classical_max_power}[op]
        return fn(_dist(args[0]), int(step["n"]))
    except KeyError as e:
        raise ConfigError(f"pipeline step {step['name']!r} is missing {e}") from None
    except IndexError:
        raise ConfigError(f"pipeline step {step['name']!r} has too few args") from None
