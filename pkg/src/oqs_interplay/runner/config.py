"""Flat ``key = value`` run configuration.

One model per file::

    model = collision
    omega_s = 1.5
    theta = 0.98 * pi / 2
    ...

Numeric values may be simple arithmetic over numbers and ``pi``. Blank lines
and ``#`` comments are ignored. A lone ``[model-name]`` header line may stand
in for the ``model`` key.
"""

from __future__ import annotations

import ast
import operator
from dataclasses import dataclass, field
from typing import Any, Callable

import numpy as np

from ..quantifiers import QuadratureSpec
from ..spin_boson import GadConfig, JcmConfig, NmadConfig
from ..spin_spin import CentralSpinConfig, CollisionConfig
from ..states import NS1, BlochVector

MODELS = ("collision", "central-spin", "nmad", "gad", "jcm")


class ConfigError(ValueError):
    pass


@dataclass(frozen=True)
class RunSpec:
    model: str
    parameters: Any
    output_path: str | None = None
    emit_plot: bool = False
    quadrature: QuadratureSpec = field(default_factory=QuadratureSpec)


_BINOPS = {ast.Add: operator.add, ast.Sub: operator.sub, ast.Mult: operator.mul, ast.Div: operator.truediv, ast.Pow: operator.pow}
_CONSTS = {"pi": np.pi, "inf": np.inf}


def _eval_number(text: str) -> float:
    def ev(node):
        if isinstance(node, ast.Expression):
            return ev(node.body)
        if isinstance(node, ast.Constant) and isinstance(node.value, (int, float)) and not isinstance(node.value, bool):
            return float(node.value)
        if isinstance(node, ast.Name) and node.id in _CONSTS:
            return _CONSTS[node.id]
        if isinstance(node, ast.UnaryOp) and isinstance(node.op, (ast.USub, ast.UAdd)):
            v = ev(node.operand)
            return -v if isinstance(node.op, ast.USub) else v
        if isinstance(node, ast.BinOp) and type(node.op) in _BINOPS:
            return _BINOPS[type(node.op)](ev(node.left), ev(node.right))
        raise ValueError(text)

    return ev(ast.parse(text.strip(), mode="eval"))


def _real(key: str, text: str) -> float:
    try:
        return _eval_number(text)
    except (ValueError, SyntaxError, ZeroDivisionError):
        raise ConfigError(f"{key}: expected a number, got {text!r}") from None


def _integer(key: str, text: str) -> int:
    v = _real(key, text)
    if v != int(v):
        raise ConfigError(f"{key}: expected an integer, got {text!r}")
    return int(v)


def _boolean(key: str, text: str) -> bool:
    t = text.strip().lower()
    if t in ("1", "true", "yes", "on"):
        return True
    if t in ("0", "false", "no", "off"):
        return False
    raise ConfigError(f"{key}: expected a boolean, got {text!r}")


def _bloch(key: str, text: str) -> BlochVector:
    if text.strip().lower() == "ns1":
        return NS1
    parts = text.split(",")
    if len(parts) != 3:
        raise ConfigError(f"{key}: expected three comma-separated Bloch components, got {text!r}")
    try:
        return BlochVector(*(_real(key, p) for p in parts))
    except ValueError as e:
        raise ConfigError(f"{key}: {e}") from None


def parse_quadrature(text: str) -> QuadratureSpec:
    parts = text.split(",")
    if len(parts) != 2:
        raise ConfigError(f"quadrature: expected NTHETA,NPHI, got {text!r}")
    try:
        return QuadratureSpec(_integer("quadrature", parts[0]), _integer("quadrature", parts[1]))
    except ConfigError:
        raise
    except ValueError as e:
        raise ConfigError(f"quadrature: {e}") from None


# key -> (parser, default); a default of REQUIRED means the key must be given
REQUIRED = object()
_Parser = Callable[[str, str], Any]

_COMMON: dict[str, tuple[_Parser, Any]] = {
    "output": (lambda k, v: v.strip(), None),
    "plot": (_boolean, False),
    "quadrature": (lambda k, v: parse_quadrature(v), None),
    "initial_state": (_bloch, NS1),
}

_GRID = {
    "t_max": (_real, None),
    "t_step": (_real, None),
    "n_samples": (_integer, 400),
}

_SCHEMAS: dict[str, dict[str, tuple[_Parser, Any]]] = {
    "collision": {
        "omega_s": (_real, REQUIRED),
        "omega_r": (_real, REQUIRED),
        "beta": (_real, REQUIRED),
        "g_sr": (_real, REQUIRED),
        "tau": (_real, REQUIRED),
        "theta": (_real, REQUIRED),
        "n_collisions": (_integer, 100),
    },
    "central-spin": {
        "omega0": (_real, REQUIRED),
        "omega": (_real, REQUIRED),
        "beta": (_real, REQUIRED),
        "epsilon": (_real, REQUIRED),
        "n_bath": (_integer, REQUIRED),
        **_GRID,
    },
    "nmad": {
        "omega0": (_real, REQUIRED),
        "lambda": (_real, REQUIRED),
        "gamma0": (_real, REQUIRED),
        "reg_epsilon": (_real, 1e-9),
        **_GRID,
    },
    "gad": {
        "omega0": (_real, REQUIRED),
        "beta": (_real, REQUIRED),
        "gamma": (_real, REQUIRED),
        "dt": (_real, 1e-3),
        **_GRID,
    },
    "jcm": {
        "omega0": (_real, REQUIRED),
        "omega_c": (_real, REQUIRED),
        "beta": (_real, REQUIRED),
        "g": (_real, REQUIRED),
        "n_max": (_integer, 32),
        "tau": (_real, None),
        **_GRID,
    },
}

# Default sampling windows for the continuous-time models.
DEFAULT_T_MAX = {"central-spin": 50.0, "nmad": 60.0, "gad": 100.0}
DEFAULT_T_STEP = {"jcm": 0.5}


def time_grid(model: str, t_max: float | None, t_step: float | None, n_samples: int) -> tuple[float, ...]:
    if n_samples < 1:
        raise ConfigError(f"n_samples: must be at least 1, got {n_samples}")
    if t_max is not None and t_step is not None:
        raise ConfigError("t_max and t_step are mutually exclusive")
    if t_step is None and t_max is None:
        t_step = DEFAULT_T_STEP.get(model)
        t_max = DEFAULT_T_MAX.get(model)
    if t_step is not None:
        if not t_step > 0:
            raise ConfigError(f"t_step: must be positive, got {t_step}")
        return tuple(float(t_step * k) for k in range(n_samples))
    if not t_max > 0:
        raise ConfigError(f"t_max: must be positive, got {t_max}")
    return tuple(float(x) for x in np.linspace(0.0, t_max, n_samples))


def _split_lines(text: str) -> tuple[str | None, list[tuple[int, str, str]]]:
    header = None
    pairs = []
    for lineno, raw in enumerate(text.splitlines(), 1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        if line.startswith("[") and line.endswith("]"):
            if header is not None:
                raise ConfigError(f"line {lineno}: only one model section is allowed")
            header = line[1:-1].strip()
            continue
        if "=" not in line:
            raise ConfigError(f"line {lineno}: expected 'key = value', got {raw.strip()!r}")
        key, value = line.split("=", 1)
        pairs.append((lineno, key.strip(), value.strip()))
    return header, pairs


def parse_config(text: str) -> RunSpec:
    header, pairs = _split_lines(text)
    raw: dict[str, str] = {}
    for lineno, key, value in pairs:
        if key in raw:
            raise ConfigError(f"{key}: given twice (line {lineno})")
        raw[key] = value
    model = raw.pop("model", None) or header
    if header is not None and model != header:
        raise ConfigError(f"model: section [{header}] conflicts with model = {model}")
    if model is None:
        raise ConfigError("model: missing required key")
    if model not in MODELS:
        raise ConfigError(f"model: must be one of {', '.join(MODELS)}, got {model!r}")

    schema = {**_COMMON, **_SCHEMAS[model]}
    unknown = sorted(set(raw) - set(schema))
    if unknown:
        raise ConfigError(f"{unknown[0]}: unknown key for model {model}")
    values: dict[str, Any] = {}
    for key, (parse, default) in schema.items():
        if key in raw:
            values[key] = parse(key, raw[key])
        elif default is REQUIRED:
            raise ConfigError(f"{key}: missing required key for model {model}")
        else:
            values[key] = default

    try:
        params = _build(model, values)
    except ConfigError:
        raise
    except ValueError as e:
        raise ConfigError(str(e)) from None
    return RunSpec(
        model=model,
        parameters=params,
        output_path=values["output"],
        emit_plot=values["plot"],
        quadrature=values["quadrature"] or QuadratureSpec(),
    )


def _build(model: str, v: dict[str, Any]):
    init = v["initial_state"]
    if model == "collision":
        return CollisionConfig(v["omega_s"], v["omega_r"], v["beta"], v["g_sr"], v["tau"], v["theta"], v["n_collisions"], init)
    if model == "jcm" and v.get("tau") is not None:
        if v["t_step"] is not None:
            raise ConfigError("tau and t_step are aliases; give only one")
        v["t_step"] = v["tau"]
    grid = time_grid(model, v["t_max"], v["t_step"], v["n_samples"])
    if model == "central-spin":
        return CentralSpinConfig(v["omega0"], v["omega"], v["beta"], v["epsilon"], v["n_bath"], grid, init)
    if model == "nmad":
        return NmadConfig(v["omega0"], v["lambda"], v["gamma0"], grid, v["reg_epsilon"], init)
    if model == "gad":
        return GadConfig(v["omega0"], v["beta"], v["gamma"], grid, v["dt"], init)
    return JcmConfig(v["omega0"], v["omega_c"], v["beta"], v["g"], v["n_max"], grid, init)
