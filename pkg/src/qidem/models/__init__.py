"""Built-in finite quantum groups with known idempotent states."""

from __future__ import annotations

import functools
from importlib import resources

import numpy as np

from ..algebra import AlgebraData
from ..hopf import QuantumGroup
from .groups import (
    CayleyTable,
    cyclic,
    dihedral,
    direct_product,
    is_normal,
    quaternion,
    subgroup_oracle,
    symmetric,
)

__all__ = [
    "CayleyTable", "BUILTINS", "builtin", "builtin_group", "function_algebra",
    "group_algebra", "kac_paljutkin", "subgroup_oracle", "is_normal", "oracle_states",
    "match_oracle",
]


def function_algebra(G: CayleyTable) -> QuantumGroup:
    """``C(G)``: pointwise product, ``Delta(d_g) = sum_{ab=g} d_a (x) d_b``."""
    n = G.order
    mult = np.zeros((n, n, n))
    for g in range(n):
        mult[g, g, g] = 1.0
    cop = np.zeros((n * n, n))
    for a in range(n):
        for b in range(n):
            cop[a * n + b, G.mul(a, b)] = 1.0
    counit = np.zeros(n)
    counit[G.identity] = 1.0
    alg = AlgebraData(mult, np.eye(n), np.ones(n), [f"d[{s}]" for s in G.labels])
    return QuantumGroup(alg, cop, counit, name=f"fun:{G.name}",
                        metadata={"name": f"fun:{G.name}", "kind": "function", "group": G.name,
                                  "provenance": "function algebra of a finite group"})


def group_algebra(G: CayleyTable) -> QuantumGroup:
    """``C[G]``: ``l_g l_k = l_{gk}``, ``l_g^* = l_{g^-1}``, ``Delta(l_g) = l_g (x) l_g``."""
    n = G.order
    mult = np.zeros((n, n, n))
    star = np.zeros((n, n))
    cop = np.zeros((n * n, n))
    for a in range(n):
        star[G.inverse[a], a] = 1.0
        cop[a * n + a, a] = 1.0
        for b in range(n):
            mult[a, b, G.mul(a, b)] = 1.0
    unit = np.zeros(n)
    unit[G.identity] = 1.0
    alg = AlgebraData(mult, star, unit, [f"l[{s}]" for s in G.labels])
    return QuantumGroup(alg, cop, np.ones(n), name=f"grp:{G.name}",
                        metadata={"name": f"grp:{G.name}", "kind": "group", "group": G.name,
                                  "provenance": "group algebra of a finite group"})


def kac_paljutkin_path():
    return resources.files(__package__).joinpath("data", "kp8.json")


def kac_paljutkin() -> QuantumGroup:
    """The 8-dimensional Kac-Paljutkin quantum group, loaded from the data file.

    Loading runs the full axiom validator; any failure raises ``AxiomError``.
    """
    from ..io import from_dict, load_json

    with resources.as_file(kac_paljutkin_path()) as path:
        return from_dict(load_json(path))


_GROUPS = {
    "Z2": lambda: cyclic(2),
    "Z3": lambda: cyclic(3),
    "Z4": lambda: cyclic(4),
    "Z2xZ2": lambda: direct_product(cyclic(2), cyclic(2)),
    "S3": lambda: symmetric(3),
    "D4": lambda: dihedral(4),
    "Q8": quaternion,
}

BUILTINS = ("fun:Z2", "fun:Z3", "fun:Z4", "fun:Z2xZ2", "fun:S3", "fun:D4",
            "grp:S3", "grp:D4", "grp:Q8", "kp8")


@functools.lru_cache(maxsize=None)
def builtin_group(name: str) -> CayleyTable:
    """Cayley table behind a ``fun:``/``grp:`` builtin (or a bare group name)."""
    key = name.split(":", 1)[-1]
    if key not in _GROUPS:
        raise KeyError(f"unknown group {name!r}")
    G = _GROUPS[key]()
    return CayleyTable(G.table, G.inverse, G.identity, G.labels, key)


@functools.lru_cache(maxsize=None)
def builtin(name: str) -> QuantumGroup:
    if name == "kp8":
        return kac_paljutkin()
    kind, _, group = name.partition(":")
    if kind not in ("fun", "grp") or group not in _GROUPS:
        raise KeyError(f"unknown builtin {name!r}; choose from {', '.join(BUILTINS)}")
    G = builtin_group(group)
    return function_algebra(G) if kind == "fun" else group_algebra(G)


def oracle_states(qg: QuantumGroup) -> list[tuple[frozenset, np.ndarray]] | None:
    """Idempotent states predicted by the subgroup lattice, for ``C(G)`` and ``C[G]``.

    On ``C(G)`` these are uniform measures on subgroups, on ``C[G]`` the
    indicator functions of subgroups. Returns ``None`` for other models.
    """
    kind = qg.metadata.get("kind")
    group = qg.metadata.get("group")
    if kind not in ("function", "group") or group not in _GROUPS:
        return None
    G = builtin_group(group)
    out = []
    for H in subgroup_oracle(G):
        v = np.zeros(G.order)
        v[sorted(H)] = 1.0 / len(H) if kind == "function" else 1.0
        out.append((H, v))
    return out


def match_oracle(qg: QuantumGroup, states, tol: float = 1e-8) -> list[frozenset] | None:
    """Subgroup behind each state, or ``None`` if the model has no oracle or a
    state is unmatched, or the counts differ."""
    oracle = oracle_states(qg)
    if oracle is None or len(oracle) != len(states):
        return None
    out = []
    for st in states:
        hits = [H for H, v in oracle if np.max(np.abs(st.phi.values - v)) <= tol]
        if len(hits) != 1:
            return None
        out.append(hits[0])
    return out if len(set(out)) == len(out) else None
