"""Config ingestion: strict YAML schema, family/function builders.

Unknown keys are hard errors — a silently ignored typo in `d` or `lambda`
would invalidate a verification without anyone noticing.
"""

from __future__ import annotations

import math

import numpy as np
import yaml

from .families import FlatDisc, PlaneBundle, ProductSlab, SphereShell
from .fields import (ScalarTestFunction, coordinate_profile, radial_bump,
                     radial_cap)
from .geometry import coordinate_subspace


class SchemaError(ValueError):
    """Config shape violation; carries the offending field path."""

    def __init__(self, path: str, message: str):
        self.path = path
        super().__init__(f"{path}: {message}")


_FAMILY_KEYS = {
    "circle": {"required": {"radius"}, "optional": {"n", "center", "multiplicity"}},
    "sphere": {"required": {"radius"}, "optional": {"n", "center", "multiplicity"}},
    "disc": {"required": {"m", "n", "radius"},
             "optional": {"center", "multiplicity", "axes"}},
    "bundle": {"required": {"k"},
               "optional": {"n", "clip", "window", "weight", "targetMass"}},
    "slab": {"required": {"axes", "lo", "hi"},
             "optional": {"n", "density", "unbounded"}},
}

_FUNCTION_KEYS = {
    "radialBump": {"required": {"radius"}, "optional": {"center", "height"}},
    "radialCap": {"required": {"inner", "outer"}, "optional": {"center", "height"}},
    "coordinateProfile": {"required": {"axis", "scale"}, "optional": {"height"}},
    "zero": {"required": set(), "optional": set()},
}

_EXPERIMENT_KEYS = {
    "isoperimetric": {"required": {"family", "d", "h", "sMin"},
                      "optional": {"sMax", "deltaSource", "centers", "gridSpacing"}},
    "ball-iso": {"required": {"family", "r"}, "optional": {"center", "h"}},
    "size-iso": {"required": {"family", "d"}, "optional": set()},
    "sobolev-avg": {"required": {"family", "function", "d", "lambda", "r", "h"},
                    "optional": {"betaN"}},
    "sobolev-rect": {"required": {"family", "function", "d", "h"}, "optional": set()},
    "poincare": {"required": {"family", "function", "r", "h"}, "optional": {"center"}},
    "blowup": {"required": {"blowupKind", "p", "steps"},
               "optional": {"n", "expectDivergence"}},
    "decomposition": {"required": {"family", "function", "h"},
                      "optional": {"yPoints", "tol"}},
    "weak-embedding": {"required": {"p", "q"}, "optional": {"instances", "atoms"}},
}

_TOP_KEYS = {"required": {"experiments"},
             "optional": {"seed", "outputDir", "betaN", "reportTolerance"}}
_JOB_COMMON = {"name", "kind"}


def _check_keys(mapping, spec, path: str) -> None:
    if not isinstance(mapping, dict):
        raise SchemaError(path, f"expected a mapping, got {type(mapping).__name__}")
    keys = set(mapping)
    unknown = keys - spec["required"] - spec["optional"]
    if unknown:
        raise SchemaError(f"{path}.{sorted(unknown)[0]}", "unknown key")
    missing = spec["required"] - keys
    if missing:
        raise SchemaError(f"{path}.{sorted(missing)[0]}", "required key missing")


def _tagged(mapping, table, path: str) -> str:
    if not isinstance(mapping, dict) or "tag" not in mapping:
        raise SchemaError(path, "expected a mapping with a 'tag' key")
    tag = mapping["tag"]
    if tag not in table:
        raise SchemaError(f"{path}.tag", f"unknown tag {tag!r}")
    body = {k: v for k, v in mapping.items() if k != "tag"}
    _check_keys(body, table[tag], path)
    return tag


def _number(value, path: str, allow_inf: bool = False) -> float:
    if isinstance(value, str) and allow_inf and value in ("inf", "Infinity"):
        return math.inf
    if isinstance(value, bool) or not isinstance(value, (int, float)):
        raise SchemaError(path, f"expected a number, got {value!r}")
    return float(value)


def build_family(spec: dict, path: str = "family"):
    tag = _tagged(spec, _FAMILY_KEYS, path)
    if tag in ("circle", "sphere"):
        m = 1 if tag == "circle" else 2
        n = int(spec.get("n", m + 1))
        return SphereShell(m, n, _number(spec["radius"], f"{path}.radius"),
                           center=spec.get("center"),
                           multiplicity=float(spec.get("multiplicity", 1.0)))
    if tag == "disc":
        m, n = int(spec["m"]), int(spec["n"])
        axes = spec.get("axes", list(range(m)))
        return FlatDisc(coordinate_subspace(n, axes),
                        _number(spec["radius"], f"{path}.radius"),
                        center=spec.get("center"),
                        multiplicity=float(spec.get("multiplicity", 1.0)))
    if tag == "bundle":
        n = int(spec.get("n", 2))
        clip = spec.get("clip", 1.0)
        return PlaneBundle.parallel_lines(
            int(spec["k"]),
            weight=spec.get("weight"),
            clip=None if clip is None else float(clip),
            window=spec.get("window"),
            target_mass=spec.get("targetMass"),
            n=n,
        )
    axes = spec["axes"]
    n = int(spec.get("n", len(spec["lo"])))
    return ProductSlab(coordinate_subspace(n, axes), spec["lo"], spec["hi"],
                       density=float(spec.get("density", 1.0)),
                       unbounded=bool(spec.get("unbounded", False)))


def build_function(spec: dict, n: int, path: str = "function") -> ScalarTestFunction:
    tag = _tagged(spec, _FUNCTION_KEYS, path)
    if tag == "zero":
        return ScalarTestFunction(lambda x: 0.0, lambda x: np.zeros(n),
                                  np.zeros(n), None, name="zero")
    height = float(spec.get("height", 1.0))
    if tag == "radialBump":
        center = np.asarray(spec.get("center", np.zeros(n)), dtype=float)
        return radial_bump(center, _number(spec["radius"], f"{path}.radius"), height)
    if tag == "radialCap":
        center = np.asarray(spec.get("center", np.zeros(n)), dtype=float)
        return radial_cap(center, _number(spec["inner"], f"{path}.inner"),
                          _number(spec["outer"], f"{path}.outer"), height)
    return coordinate_profile(n, int(spec["axis"]),
                              _number(spec["scale"], f"{path}.scale"), height)


def validate_config(doc) -> dict:
    """Structural validation of a parsed config document."""
    _check_keys(doc, _TOP_KEYS, "config")
    if not isinstance(doc["experiments"], list):
        raise SchemaError("config.experiments", "expected a list")
    for i, job in enumerate(doc["experiments"]):
        path = f"config.experiments[{i}]"
        if not isinstance(job, dict):
            raise SchemaError(path, "expected a mapping")
        for key in _JOB_COMMON:
            if key not in job:
                raise SchemaError(f"{path}.{key}", "required key missing")
        kind = job["kind"]
        if kind not in _EXPERIMENT_KEYS:
            raise SchemaError(f"{path}.kind", f"unknown experiment kind {kind!r}")
        body = {k: v for k, v in job.items() if k not in _JOB_COMMON}
        _check_keys(body, _EXPERIMENT_KEYS[kind], path)
        if "family" in job:
            _tagged(job["family"], _FAMILY_KEYS, f"{path}.family")
        if "function" in job:
            _tagged(job["function"], _FUNCTION_KEYS, f"{path}.function")
    return doc


def load_config(path) -> dict:
    with open(path, "r", encoding="utf-8") as fh:
        try:
            doc = yaml.safe_load(fh)
        except yaml.YAMLError as exc:
            raise SchemaError("config", f"unparseable document: {exc}") from exc
    if doc is None:
        doc = {}
    if "experiments" not in doc:
        doc.setdefault("experiments", [])
    return validate_config(doc)
