"""Finite groups as Cayley tables, and a brute-force subgroup enumerator."""

from __future__ import annotations

import itertools
from dataclasses import dataclass
from typing import Callable, Hashable, Sequence

import numpy as np


class CayleyError(ValueError):
    pass


@dataclass(frozen=True)
class CayleyTable:
    table: np.ndarray       # table[a, b] = index of a*b
    inverse: np.ndarray
    identity: int
    labels: tuple[str, ...]
    name: str = ""

    @property
    def order(self) -> int:
        return len(self.labels)

    def mul(self, a: int, b: int) -> int:
        return int(self.table[a, b])

    def index(self, label: str) -> int:
        return self.labels.index(label)

    def check(self) -> None:
        n = self.order
        t = self.table
        if t.shape != (n, n):
            raise CayleyError("table shape does not match order")
        rng = np.arange(n)
        for row in t:
            if not np.array_equal(np.sort(row), rng):
                raise CayleyError("rows are not permutations")
        for col in t.T:
            if not np.array_equal(np.sort(col), rng):
                raise CayleyError("columns are not permutations")
        if not (np.array_equal(t[self.identity], rng) and np.array_equal(t[:, self.identity], rng)):
            raise CayleyError("identity law fails")
        if not np.all(t[rng, self.inverse] == self.identity):
            raise CayleyError("inverse law fails")
        if not np.array_equal(t[t[:, :, None], rng[None, None, :]], t[rng[:, None, None], t[None, :, :]]):
            raise CayleyError("table is not associative")


def from_elements(elements: Sequence[Hashable], op: Callable, labels: Sequence[str],
                  name: str = "") -> CayleyTable:
    index = {e: i for i, e in enumerate(elements)}
    n = len(elements)
    table = np.empty((n, n), dtype=int)
    for i, a in enumerate(elements):
        for j, b in enumerate(elements):
            c = op(a, b)
            if c not in index:
                raise CayleyError(f"{a!r} * {b!r} = {c!r} leaves the element set")
            table[i, j] = index[c]
    identity = next((i for i in range(n) if all(table[i, j] == j for j in range(n))), None)
    if identity is None:
        raise CayleyError("operation has no identity")
    inverse = []
    for i in range(n):
        inv = np.flatnonzero(table[i] == identity)
        if inv.size == 0:
            raise CayleyError(f"{elements[i]!r} has no inverse")
        inverse.append(int(inv[0]))
    inverse = np.array(inverse)
    G = CayleyTable(table, inverse, identity, tuple(labels), name)
    G.check()
    return G


def cyclic(n: int) -> CayleyTable:
    return from_elements(list(range(n)), lambda a, b: (a + b) % n, [str(i) for i in range(n)], f"Z{n}")


def direct_product(G: CayleyTable, H: CayleyTable) -> CayleyTable:
    elems = [(a, b) for a in range(G.order) for b in range(H.order)]
    labels = [f"({G.labels[a]},{H.labels[b]})" for a, b in elems]
    return from_elements(elems, lambda x, y: (G.mul(x[0], y[0]), H.mul(x[1], y[1])), labels,
                         f"{G.name}x{H.name}")


def _compose(p: tuple, q: tuple) -> tuple:
    # (p*q)(i) = p(q(i)): apply q first
    return tuple(p[i] for i in q)


def _cycle_label(perm: tuple) -> str:
    seen, cycles = set(), []
    for start in range(len(perm)):
        if start in seen or perm[start] == start:
            seen.add(start)
            continue
        cyc, i = [], start
        while i not in seen:
            seen.add(i)
            cyc.append(str(i + 1))
            i = perm[i]
        cycles.append("(" + "".join(cyc) + ")")
    return "".join(cycles) or "e"


def symmetric(n: int) -> CayleyTable:
    elems = sorted(itertools.permutations(range(n)), key=lambda p: (_cycle_label(p) != "e", len(_cycle_label(p)), _cycle_label(p)))
    return from_elements(elems, _compose, [_cycle_label(p) for p in elems], f"S{n}")


def dihedral(n: int) -> CayleyTable:
    """Symmetries of the regular n-gon (order 2n): ``r^k`` and ``s r^k``."""
    elems = [(0, k) for k in range(n)] + [(1, k) for k in range(n)]

    def op(x, y):
        # s^a r^b * s^c r^d = s^(a+c) r^((-1)^c b + d)
        a, b = x
        c, d = y
        return ((a + c) % 2, ((-b if c else b) + d) % n)

    labels = [("e" if k == 0 else f"r{k}") for k in range(n)] + [f"sr{k}" if k else "s" for k in range(n)]
    return from_elements(elems, op, labels, f"D{n}")


def quaternion() -> CayleyTable:
    names = ["1", "i", "j", "k"]
    # unit quaternions as (sign, basis) with basis products
    prod = {
        (0, 0): (1, 0), (0, 1): (1, 1), (0, 2): (1, 2), (0, 3): (1, 3),
        (1, 0): (1, 1), (1, 1): (-1, 0), (1, 2): (1, 3), (1, 3): (-1, 2),
        (2, 0): (1, 2), (2, 1): (-1, 3), (2, 2): (-1, 0), (2, 3): (1, 1),
        (3, 0): (1, 3), (3, 1): (1, 2), (3, 2): (-1, 1), (3, 3): (-1, 0),
    }
    elems = [(s, b) for s in (1, -1) for b in range(4)]

    def op(x, y):
        s, b = prod[(x[1], y[1])]
        return (x[0] * y[0] * s, b)

    labels = [("" if s == 1 else "-") + names[b] for s, b in elems]
    return from_elements(elems, op, labels, "Q8")


def closure(G: CayleyTable, gens) -> frozenset[int]:
    elems = {G.identity}
    frontier = set(int(g) for g in gens)
    while frontier:
        elems |= frontier
        frontier = {G.mul(a, b) for a in elems for b in elems} - elems
    return frozenset(elems)


def subgroup_oracle(G: CayleyTable) -> list[frozenset[int]]:
    """All subgroups, by closing cyclic subgroups under pairwise joins."""
    if G.order > 24:
        raise ValueError("subgroup enumeration is limited to groups of order <= 24")
    subs = {closure(G, [g]) for g in range(G.order)}
    frontier = set(subs)
    while frontier:
        new = set()
        for H in frontier:
            for K in subs:
                J = closure(G, H | K)
                if J not in subs:
                    new.add(J)
        subs |= new
        frontier = new
    return sorted(subs, key=lambda s: (len(s), sorted(s)))


def is_normal(G: CayleyTable, H: frozenset[int]) -> bool:
    return all(G.mul(G.mul(g, h), int(G.inverse[g])) in H for g in range(G.order) for h in H)
