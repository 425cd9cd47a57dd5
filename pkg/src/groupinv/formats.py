"""JSON wire formats: matrices, rule instances, and report serialization.

Matrix schema (used by every CLI command):

    {"rows": m, "cols": n, "data": [[re, im], ...]}   # row-major, length m*n

Additive instance schema:

    {"theorem": "T2.1"|"C2.2"|"C2.3"|"T2.4"|"C2.5",
     "lambda": [re, im], "a": <matrix>, "b": <matrix>}

Block instance schema:

    {"theorem": "T3.1"|"C3.2"|"T3.3"|"C3.4"|"T3.5"|"C3.6",
     "lambda": [re, im], "A": <matrix>, "B": <matrix>, "C": <matrix>, "D": <matrix>}

Both instance schemas accept an optional "provenance" object
{"generator": ..., "seed": ..., "config": ...} which is carried through to
reports untouched.
"""

from __future__ import annotations

import json
import math
from pathlib import Path

import numpy as np

from .errors import MatrixFormatError

ADDITIVE_THEOREMS = ("T2.1", "C2.2", "C2.3", "T2.4", "C2.5")
BLOCK_THEOREMS = ("T3.1", "C3.2", "T3.3", "C3.4", "T3.5", "C3.6")
ALL_THEOREMS = ADDITIVE_THEOREMS + BLOCK_THEOREMS


def matrix_to_json(a: np.ndarray) -> dict:
    a = np.asarray(a, dtype=np.complex128)
    return {
        "rows": int(a.shape[0]),
        "cols": int(a.shape[1]),
        "data": [[float(z.real), float(z.imag)] for z in a.ravel(order="C")],
    }


def matrix_from_json(obj) -> np.ndarray:
    if not isinstance(obj, dict):
        raise MatrixFormatError("matrix payload must be an object")
    try:
        rows = int(obj["rows"])
        cols = int(obj["cols"])
        data = obj["data"]
    except (KeyError, TypeError, ValueError) as exc:
        raise MatrixFormatError(f"matrix payload missing or malformed field: {exc}")
    if rows < 1 or cols < 1:
        raise MatrixFormatError(f"rows and cols must be positive, got {rows}x{cols}")
    if not isinstance(data, list) or len(data) != rows * cols:
        raise MatrixFormatError(
            f"data length {len(data) if isinstance(data, list) else '?'} != rows*cols = {rows * cols}"
        )
    flat = np.empty(rows * cols, dtype=np.complex128)
    for i, entry in enumerate(data):
        if not isinstance(entry, (list, tuple)) or len(entry) != 2:
            raise MatrixFormatError(f"data[{i}] must be a [re, im] pair")
        re, im = float(entry[0]), float(entry[1])
        if not (math.isfinite(re) and math.isfinite(im)):
            raise MatrixFormatError(f"data[{i}] contains a non-finite value")
        flat[i] = complex(re, im)
    return flat.reshape(rows, cols)


def complex_to_json(z: complex) -> list[float]:
    z = complex(z)
    if not (math.isfinite(z.real) and math.isfinite(z.imag)):
        raise MatrixFormatError("lambda must be finite")
    return [z.real, z.imag]


def complex_from_json(obj) -> complex:
    if isinstance(obj, (int, float)):
        return complex(obj)
    if isinstance(obj, (list, tuple)) and len(obj) == 2:
        re, im = float(obj[0]), float(obj[1])
        if not (math.isfinite(re) and math.isfinite(im)):
            raise MatrixFormatError("lambda must be finite")
        return complex(re, im)
    raise MatrixFormatError("lambda must be a number or a [re, im] pair")


def load_matrix(path) -> np.ndarray:
    with open(path, "r", encoding="utf-8") as fh:
        return matrix_from_json(json.load(fh))


def save_matrix(path, a: np.ndarray) -> None:
    Path(path).write_text(json.dumps(matrix_to_json(a), indent=2) + "\n", encoding="utf-8")


def additive_instance_to_json(scenario, provenance: dict | None = None) -> dict:
    obj = {
        "theorem": scenario.theorem,
        "lambda": complex_to_json(scenario.lam),
        "a": matrix_to_json(scenario.a),
        "b": matrix_to_json(scenario.b),
    }
    if provenance:
        obj["provenance"] = provenance
    return obj


def block_instance_to_json(scenario, provenance: dict | None = None) -> dict:
    obj = {
        "theorem": scenario.theorem,
        "lambda": complex_to_json(scenario.lam),
        "A": matrix_to_json(scenario.A),
        "B": matrix_to_json(scenario.B),
        "C": matrix_to_json(scenario.C),
        "D": matrix_to_json(scenario.D),
    }
    if provenance:
        obj["provenance"] = provenance
    return obj


def instance_from_json(obj):
    """Parse an additive or block instance; returns (scenario, provenance)."""
    from .additive import AdditiveScenario
    from .blockmat import BlockScenario

    if not isinstance(obj, dict):
        raise MatrixFormatError("instance payload must be an object")
    theorem = obj.get("theorem")
    if theorem not in ALL_THEOREMS:
        raise MatrixFormatError(f"unknown theorem tag {theorem!r}; expected one of {ALL_THEOREMS}")
    lam = complex_from_json(obj.get("lambda", 0.0))
    provenance = obj.get("provenance") or {}
    if theorem in ADDITIVE_THEOREMS:
        for key in ("a", "b"):
            if key not in obj:
                raise MatrixFormatError(f"additive instance missing matrix {key!r}")
        scenario = AdditiveScenario(
            theorem=theorem,
            lam=lam,
            a=matrix_from_json(obj["a"]),
            b=matrix_from_json(obj["b"]),
        )
    else:
        for key in ("A", "B", "C", "D"):
            if key not in obj:
                raise MatrixFormatError(f"block instance missing matrix {key!r}")
        scenario = BlockScenario(
            theorem=theorem,
            lam=lam,
            A=matrix_from_json(obj["A"]),
            B=matrix_from_json(obj["B"]),
            C=matrix_from_json(obj["C"]),
            D=matrix_from_json(obj["D"]),
        )
    return scenario, provenance


def load_instance(path):
    with open(path, "r", encoding="utf-8") as fh:
        return instance_from_json(json.load(fh))


def save_instance(path, scenario, provenance: dict | None = None) -> None:
    from .additive import AdditiveScenario

    if isinstance(scenario, AdditiveScenario):
        obj = additive_instance_to_json(scenario, provenance)
    else:
        obj = block_instance_to_json(scenario, provenance)
    Path(path).write_text(json.dumps(obj, indent=2) + "\n", encoding="utf-8")


def dumps_report(obj: dict) -> str:
    """Canonical JSON used for all reports; stable byte-for-byte per content."""
    return json.dumps(obj, indent=2, sort_keys=False) + "\n"
