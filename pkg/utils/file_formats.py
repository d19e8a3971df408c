# -*- coding: utf-8 -*-
"""
File Formats
============

Module Overview (for future devs)
---------------------------------
JSON readers / writers for everything the CLI and the page exchange:

- matrix:   {"dim": d, "entries": [[re, im], ...]}          (d*d entries, row-major)
- state:    {"dim": d, "amplitudes": [[re, im], ...]}
- spec:     {"variant": "samples", "m": m, "tau": [re, im], "samples": [[re, im], ...]}
            {"variant": "named", "tag": "frft", "x": 0.5}    (also power/s, identity, conjugate)
- circuit:  {"width": w, "num_ancillae": mu, "gates": [{"kind": ..., ...}, ...]}

Important:
- Floats are written with Python's shortest repr, so a re-read gives the same doubles.
- Every parse problem surfaces as FormatError (exit code 2), never a bare KeyError.
"""

from __future__ import annotations

import json
import math
from pathlib import Path
from typing import Any, Dict, List, Mapping, Union

import numpy as np

from synth.circuit import Circuit, Gate
from synth.errors import FormatError, SynthesisError
from synth.funcsynth import FunctionSpec

PathLike = Union[str, Path]


# ----------------------------
# Generic JSON helpers
# ----------------------------
def dumps_canonical(payload: Any) -> str:
    """Sorted keys, fixed separators, trailing newline."""
    return json.dumps(payload, sort_keys=True, indent=2, ensure_ascii=True, allow_nan=False) + "\n"


def write_json(path: PathLike, payload: Any) -> None:
    Path(path).write_text(dumps_canonical(payload), encoding="utf-8")


def read_json(path: PathLike) -> Any:
    try:
        return json.loads(Path(path).read_text(encoding="utf-8"))
    except FileNotFoundError as e:
        raise FormatError(f"file not found: {path}") from e
    except (OSError, UnicodeDecodeError, json.JSONDecodeError) as e:
        raise FormatError(f"{path}: not valid JSON ({e})") from e


def _require(obj: Mapping[str, Any], key: str, what: str) -> Any:
    if not isinstance(obj, Mapping):
        raise FormatError(f"{what} must be a JSON object")
    if key not in obj:
        raise FormatError(f"{what} is missing '{key}'")
    return obj[key]


def _pair_to_complex(pair: Any, what: str) -> complex:
    if not isinstance(pair, (list, tuple)) or len(pair) != 2:
        raise FormatError(f"{what}: expected [re, im], got {pair!r}")
    try:
        re_part, im_part = float(pair[0]), float(pair[1])
    except (TypeError, ValueError) as e:
        raise FormatError(f"{what}: non-numeric entry {pair!r}") from e
    if not (math.isfinite(re_part) and math.isfinite(im_part)):
        raise FormatError(f"{what}: non-finite entry {pair!r}")
    return complex(re_part, im_part)


def _complex_to_pair(z: complex) -> List[float]:
    z = complex(z)
    return [float(z.real), float(z.imag)]


def _int_field(obj: Mapping[str, Any], key: str, what: str) -> int:
    value = _require(obj, key, what)
    if isinstance(value, bool) or not isinstance(value, int):
        raise FormatError(f"{what}: '{key}' must be an integer, got {value!r}")
    return value


# ----------------------------
# Matrix / state
# ----------------------------
def matrix_to_dict(M: np.ndarray) -> Dict[str, Any]:
    arr = np.asarray(M, dtype=complex)
    return {"dim": int(arr.shape[0]), "entries": [_complex_to_pair(z) for z in arr.reshape(-1)]}


def matrix_from_dict(obj: Mapping[str, Any]) -> np.ndarray:
    dim = _int_field(obj, "dim", "matrix")
    entries = _require(obj, "entries", "matrix")
    if dim < 1:
        raise FormatError(f"matrix: dim must be >= 1, got {dim}")
    if not isinstance(entries, list) or len(entries) != dim * dim:
        raise FormatError(f"matrix: expected {dim * dim} entries for dim={dim}")
    values = [_pair_to_complex(p, f"matrix entry {i}") for i, p in enumerate(entries)]
    return np.array(values, dtype=complex).reshape(dim, dim)


def read_matrix(path: PathLike) -> np.ndarray:
    return matrix_from_dict(read_json(path))


def write_matrix(path: PathLike, M: np.ndarray) -> None:
    write_json(path, matrix_to_dict(M))


def state_to_dict(psi: np.ndarray) -> Dict[str, Any]:
    vec = np.asarray(psi, dtype=complex).reshape(-1)
    return {"dim": int(vec.shape[0]), "amplitudes": [_complex_to_pair(z) for z in vec]}


def state_from_dict(obj: Mapping[str, Any]) -> np.ndarray:
    dim = _int_field(obj, "dim", "state")
    amps = _require(obj, "amplitudes", "state")
    if not isinstance(amps, list) or len(amps) != dim:
        raise FormatError(f"state: expected {dim} amplitudes")
    return np.array([_pair_to_complex(p, f"amplitude {i}") for i, p in enumerate(amps)], dtype=complex)


def read_state(path: PathLike) -> np.ndarray:
    return state_from_dict(read_json(path))


def write_state(path: PathLike, psi: np.ndarray) -> None:
    write_json(path, state_to_dict(psi))


# ----------------------------
# Function specs
# ----------------------------
def spec_to_dict(spec: FunctionSpec) -> Dict[str, Any]:
    if spec.variant == "samples":
        return {
            "variant": "samples",
            "m": spec.m,
            "tau": _complex_to_pair(spec.tau),
            "samples": [_complex_to_pair(v) for v in spec.samples],
        }
    out: Dict[str, Any] = {"variant": "named", "tag": spec.tag}
    if spec.tag == "frft":
        out["x"] = spec.x
    if spec.tag == "power":
        out["s"] = spec.s
    return out


def spec_from_dict(obj: Mapping[str, Any]) -> FunctionSpec:
    variant = _require(obj, "variant", "function spec")
    try:
        if variant == "samples":
            m = _int_field(obj, "m", "function spec")
            tau = _pair_to_complex(obj.get("tau", [1.0, 0.0]), "function spec tau")
            raw = _require(obj, "samples", "function spec")
            if not isinstance(raw, list):
                raise FormatError("function spec: 'samples' must be a list")
            samples = tuple(_pair_to_complex(p, f"sample {i}") for i, p in enumerate(raw))
            return FunctionSpec(variant="samples", m=m, tau=tau, samples=samples)
        if variant == "named":
            tag = _require(obj, "tag", "function spec")
            x = obj.get("x")
            s = obj.get("s")
            return FunctionSpec(
                variant="named",
                tag=tag,
                x=None if x is None else float(x),
                s=None if s is None else float(s),
            )
    except FormatError:
        raise
    except (SynthesisError, TypeError, ValueError) as e:
        raise FormatError(f"function spec: {e}") from e
    raise FormatError(f"function spec: unknown variant {variant!r}")


def read_spec(path: PathLike) -> FunctionSpec:
    return spec_from_dict(read_json(path))


def write_spec(path: PathLike, spec: FunctionSpec) -> None:
    write_json(path, spec_to_dict(spec))


# ----------------------------
# Circuits
# ----------------------------
def gate_to_dict(gate: Gate) -> Dict[str, Any]:
    out: Dict[str, Any] = {"kind": gate.kind}
    if gate.kind in ("h", "x"):
        out["qubit"] = gate.qubits[0]
    elif gate.kind in ("cnot", "cphase"):
        out["control"] = gate.controls[0]
        out["target"] = gate.qubits[0]
        if gate.kind == "cphase":
            out["theta"] = gate.theta
    elif gate.kind == "swap":
        out["a"], out["b"] = gate.qubits
    else:
        out["qubits"] = list(gate.qubits)
        out["matrix"] = matrix_to_dict(gate.matrix)
        if gate.kind == "ccomposite":
            out["controls"] = list(gate.controls)
            out["control_values"] = list(gate.control_values)
    if gate.tag:
        out["tag"] = gate.tag
    return out


def gate_from_dict(obj: Mapping[str, Any]) -> Gate:
    kind = _require(obj, "kind", "gate")
    tag = str(obj.get("tag", ""))
    try:
        if kind in ("h", "x"):
            return Gate(kind, (_int_field(obj, "qubit", kind),), tag=tag)
        if kind == "cnot":
            return Gate(kind, (_int_field(obj, "target", kind),), controls=(_int_field(obj, "control", kind),), tag=tag)
        if kind == "cphase":
            theta = float(_require(obj, "theta", kind))
            return Gate(
                kind,
                (_int_field(obj, "target", kind),),
                controls=(_int_field(obj, "control", kind),),
                theta=theta,
                tag=tag,
            )
        if kind == "swap":
            return Gate(kind, (_int_field(obj, "a", kind), _int_field(obj, "b", kind)), tag=tag)
        if kind in ("composite", "ccomposite"):
            qubits = tuple(int(q) for q in _require(obj, "qubits", kind))
            matrix = matrix_from_dict(_require(obj, "matrix", kind))
            controls = tuple(int(c) for c in obj.get("controls", ()))
            values = tuple(int(v) for v in obj.get("control_values", ()))
            return Gate(kind, qubits, matrix=matrix, controls=controls, control_values=values, tag=tag)
    except FormatError:
        raise
    except (SynthesisError, TypeError, ValueError) as e:
        raise FormatError(f"{kind} gate: {e}") from e
    raise FormatError(f"unknown gate kind {kind!r}")


def circuit_to_dict(c: Circuit) -> Dict[str, Any]:
    return {
        "width": c.width,
        "num_ancillae": c.num_ancillae,
        "gates": [gate_to_dict(g) for g in c.gates],
    }


def circuit_from_dict(obj: Mapping[str, Any]) -> Circuit:
    width = _int_field(obj, "width", "circuit")
    gates = _require(obj, "gates", "circuit")
    if not isinstance(gates, list):
        raise FormatError("circuit: 'gates' must be a list")
    num_ancillae = _int_field(obj, "num_ancillae", "circuit") if "num_ancillae" in obj else 0
    parsed = tuple(gate_from_dict(g) for g in gates)
    try:
        return Circuit(width, parsed, num_ancillae)
    except SynthesisError as e:
        raise FormatError(f"circuit: {e}") from e


def read_circuit(path: PathLike) -> Circuit:
    return circuit_from_dict(read_json(path))


def write_circuit(path: PathLike, c: Circuit) -> None:
    write_json(path, circuit_to_dict(c))
