"""JSON (de)serialisation of quantum groups.

Layout of a quantum-group file::

    {
      "format": "qidem-quantum-group", "version": 1,
      "metadata": {"name": ..., "provenance": ...},
      "dim": n,
      "basis": [label, ...],
      "mult": [[i, j, k, re, im], ...],          # e_i e_j has coefficient on e_k
      "star": [[i, j, re, im], ...],             # e_i^* has coefficient on e_j
      "unit": [[re, im], ...],
      "coproduct": [[i, j, k, re, im], ...],     # Delta(e_i) has coefficient on e_j (x) e_k
      "counit": [[re, im], ...]
    }

Complex numbers are ``[re, im]`` pairs; sparse lists omit zeros. Coproduct
entries may also be given as ``[i, jk, re, im]`` with ``jk = j*n + k``.
"""

from __future__ import annotations

import json
from pathlib import Path

import numpy as np

from .algebra import AlgebraData
from .hopf import QuantumGroup, validate, ValidationReport

FORMAT = "qidem-quantum-group"


class SchemaError(ValueError):
    pass


def _complex(pair, where: str) -> complex:
    if (not isinstance(pair, (list, tuple)) or len(pair) != 2
            or not all(isinstance(x, (int, float)) and not isinstance(x, bool) for x in pair)):
        raise SchemaError(f"{where}: expected [re, im], got {pair!r}")
    return complex(pair[0], pair[1])


def _index(x, n: int, where: str) -> int:
    if not isinstance(x, int) or isinstance(x, bool) or not 0 <= x < n:
        raise SchemaError(f"{where}: index {x!r} out of range [0, {n})")
    return x


def _dense(values, n: int, where: str) -> np.ndarray:
    if not isinstance(values, list) or len(values) != n:
        raise SchemaError(f"{where}: expected a list of {n} [re, im] pairs")
    return np.array([_complex(v, f"{where}[{i}]") for i, v in enumerate(values)])


def _sparse(entries, n: int, rank: int, where: str) -> np.ndarray:
    if not isinstance(entries, list):
        raise SchemaError(f"{where}: expected a list of sparse entries")
    out = np.zeros((n,) * rank, dtype=complex)
    for e in entries:
        if not isinstance(e, list) or len(e) != rank + 2:
            raise SchemaError(f"{where}: malformed entry {e!r}")
        idx = tuple(_index(x, n, where) for x in e[:rank])
        out[idx] += _complex(e[rank:], where)
    return out


def _coproduct(entries, n: int) -> np.ndarray:
    if not isinstance(entries, list):
        raise SchemaError("coproduct: expected a list of sparse entries")
    D = np.zeros((n * n, n), dtype=complex)
    for e in entries:
        if not isinstance(e, list) or len(e) not in (4, 5):
            raise SchemaError(f"coproduct: malformed entry {e!r}")
        i = _index(e[0], n, "coproduct")
        if len(e) == 5:
            jk = _index(e[1], n, "coproduct") * n + _index(e[2], n, "coproduct")
        else:
            jk = _index(e[1], n * n, "coproduct")
        D[jk, i] += _complex(e[-2:], "coproduct")
    return D


def parse_dict(data: dict):
    """Return ``(algebra, coproduct, counit, metadata)`` without validating axioms."""
    if not isinstance(data, dict):
        raise SchemaError("top level must be a JSON object")
    if data.get("format", FORMAT) != FORMAT:
        raise SchemaError(f"unknown format {data.get('format')!r}")
    for key in ("dim", "basis", "mult", "star", "unit", "coproduct"):
        if key not in data:
            raise SchemaError(f"missing field {key!r}")
    n = data["dim"]
    if not isinstance(n, int) or isinstance(n, bool) or n < 1:
        raise SchemaError("dim must be a positive integer")
    basis = data["basis"]
    if not isinstance(basis, list) or len(basis) != n or not all(isinstance(b, str) for b in basis):
        raise SchemaError(f"basis must be a list of {n} strings")
    mult = _sparse(data["mult"], n, 3, "mult")
    star_entries = _sparse(data["star"], n, 2, "star")
    star = star_entries.T  # column i = coordinates of e_i^*
    unit = _dense(data["unit"], n, "unit")
    cop = _coproduct(data["coproduct"], n)
    counit = _dense(data["counit"], n, "counit") if data.get("counit") is not None else None
    meta = data.get("metadata", {})
    if not isinstance(meta, dict):
        raise SchemaError("metadata must be an object")
    return AlgebraData(mult, star, unit, basis), cop, counit, meta


def from_dict(data: dict, tol: float | None = None) -> QuantumGroup:
    alg, cop, counit, meta = parse_dict(data)
    return QuantumGroup(alg, cop, counit, name=str(meta.get("name", "")), metadata=meta, tol=tol)


def check_dict(data: dict, tol: float | None = None) -> ValidationReport:
    alg, cop, counit, _ = parse_dict(data)
    report, _ = validate(alg, cop, counit, tol)
    return report


def load_json(path) -> dict:
    try:
        return json.loads(Path(path).read_text())
    except json.JSONDecodeError as exc:
        raise SchemaError(f"{path}: invalid JSON ({exc})") from exc


def parse(path, tol: float | None = None) -> QuantumGroup:
    return from_dict(load_json(path), tol)


def _pair(z: complex) -> list[float]:
    return [float(z.real), float(z.imag)]


def to_dict(qg: QuantumGroup) -> dict:
    alg = qg.algebra
    n = qg.dim
    mult = [[int(i), int(j), int(k), *_pair(alg.mult[i, j, k])]
            for i, j, k in zip(*np.nonzero(alg.mult))]
    star = [[int(i), int(j), *_pair(alg.star[j, i])]
            for j, i in sorted(zip(*np.nonzero(alg.star)), key=lambda t: (t[1], t[0]))]
    cop = qg.cop
    coproduct = [[int(i), int(j), int(k), *_pair(cop[j, k, i])]
                 for i, j, k in sorted(((i, j, k) for j, k, i in zip(*np.nonzero(cop))))]
    meta = dict(qg.metadata)
    meta.setdefault("name", qg.name)
    return {
        "format": FORMAT,
        "version": 1,
        "metadata": meta,
        "dim": n,
        "basis": list(alg.labels),
        "mult": mult,
        "star": star,
        "unit": [_pair(z) for z in alg.unit],
        "coproduct": coproduct,
        "counit": [_pair(z) for z in qg.counit],
    }


def dumps(qg: QuantumGroup) -> str:
    """Canonical text: one sparse entry or dense value per line."""
    data = to_dict(qg)
    parts = []
    for key, value in data.items():
        if isinstance(value, list) and value and isinstance(value[0], list):
            body = ",\n".join("  " + json.dumps(v) for v in value)
            parts.append(f" {json.dumps(key)}: [\n{body}\n ]")
        else:
            parts.append(f" {json.dumps(key)}: {json.dumps(value)}")
    return "{\n" + ",\n".join(parts) + "\n}"


def write(qg: QuantumGroup, path) -> None:
    Path(path).write_text(dumps(qg) + "\n")
