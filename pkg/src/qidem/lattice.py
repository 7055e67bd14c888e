"""Partial order, Hasse diagram and meet/join of idempotent states."""

from __future__ import annotations

import json
from dataclasses import dataclass, field

import numpy as np

from . import config
from .coidalgebra import (
    Coidalgebra,
    CoidalgebraError,
    SUBSPACE_TOL,
    coidalgebra_of,
    contained_in,
    expected_projection,
    h_orthonormal_basis,
    haar_equivalence_report,
    idempotent_of_coidalgebra,
    known_subgroups,
    projector,
)
from .hopf import QuantumGroup
from .presubgroups import PreSubgroup, bbs_order
from .states import Functional, IdempotentState, is_idempotent_state, order_le, presubgroup_of


class LatticeError(ValueError):
    pass


def _same(a: IdempotentState, b: IdempotentState, tol: float) -> bool:
    return a.phi.distance(b.phi) <= tol


def hasse_reduction(order: np.ndarray) -> list[tuple[int, int]]:
    """Covering pairs ``(i, j)``, ``i < j``, of a strict order given as a boolean matrix."""
    m = order.shape[0]
    strict = order & ~np.eye(m, dtype=bool)
    edges = []
    for i in range(m):
        for j in range(m):
            if strict[i, j] and not np.any(strict[i, :] & strict[:, j]):
                edges.append((i, j))
    return edges


def _bounds(order: np.ndarray, i: int, j: int, lower: bool) -> int | None:
    """Index of the greatest lower (or least upper) bound inside the set, if any."""
    if lower:
        cands = np.flatnonzero(order[:, i] & order[:, j])
        best = [k for k in cands if all(order[c, k] for c in cands)]
    else:
        cands = np.flatnonzero(order[i, :] & order[j, :])
        best = [k for k in cands if all(order[k, c] for c in cands)]
    return int(best[0]) if len(best) == 1 else None


@dataclass
class IdempotentLattice:
    owner: QuantumGroup
    elements: list[IdempotentState]
    order: np.ndarray
    hasse_edges: list[tuple[int, int]]
    coidalgebras: list[Coidalgebra]
    meets: np.ndarray | None = None
    joins: np.ndarray | None = None
    exhaustive: bool = False
    tol: float = field(default_factory=config.get_tol)

    def __len__(self) -> int:
        return len(self.elements)

    @property
    def bottom(self) -> int:
        return int(np.flatnonzero(self.order.all(axis=1))[0])

    @property
    def top(self) -> int:
        return int(np.flatnonzero(self.order.all(axis=0))[0])

    def index_of(self, st: IdempotentState | Functional) -> int | None:
        phi = st.phi if isinstance(st, IdempotentState) else st
        for i, el in enumerate(self.elements):
            if el.phi.distance(phi) <= SUBSPACE_TOL:
                return i
        return None

    def join(self, i: int | IdempotentState, j: int | IdempotentState) -> IdempotentState:
        """State join: the coidalgebra of the result is ``C_i ∩ C_j``."""
        Ci, Cj = self._coid(i), self._coid(j)
        return idempotent_of_coidalgebra(intersect(Ci, Cj), self.tol)

    def meet(self, i: int | IdempotentState, j: int | IdempotentState) -> IdempotentState:
        """State meet: the coidalgebra of the result is generated by ``C_i ∪ C_j``."""
        Ci, Cj = self._coid(i), self._coid(j)
        return idempotent_of_coidalgebra(generated(Ci, Cj), self.tol)

    def _coid(self, x) -> Coidalgebra:
        if isinstance(x, (int, np.integer)):
            return self.coidalgebras[int(x)]
        return coidalgebra_of(x)


def intersect(C1: Coidalgebra, C2: Coidalgebra, tol: float = SUBSPACE_TOL) -> Coidalgebra:
    qg = C1.owner
    n = qg.dim
    M = np.vstack([np.eye(n) - C1.expectation, np.eye(n) - C2.expectation])
    _, s, vh = np.linalg.svd(M)
    rank = int(np.sum(s > 1e-9))
    try:
        return expected_projection(qg, vh[rank:].conj().T, tol)
    except CoidalgebraError as exc:
        raise LatticeError(f"intersection of coidalgebras is not a coidalgebra: {exc}") from exc


def generated(C1: Coidalgebra, C2: Coidalgebra, tol: float = SUBSPACE_TOL) -> Coidalgebra:
    """*-algebra generated by two coidalgebras; certified as a coidalgebra."""
    qg = C1.owner
    alg = qg.algebra
    basis = h_orthonormal_basis(qg, np.hstack([C1.basis, C2.basis, alg.unit[:, None]]))
    while True:
        d = basis.shape[1]
        prods = [alg.product(basis[:, a], basis[:, b]) for a in range(d) for b in range(d)]
        new = h_orthonormal_basis(qg, np.column_stack([basis, *prods]))
        if new.shape[1] == d:
            break
        basis = new
    try:
        return expected_projection(qg, basis, tol)
    except CoidalgebraError as exc:
        raise LatticeError(f"generated *-algebra is not a right coidalgebra: {exc}") from exc


def build_lattice(states, tol: float | None = None, exhaustive: bool = False) -> IdempotentLattice:
    """Order matrix, Hasse diagram and coidalgebras of certified idempotents.

    ``meets``/``joins`` index tables are filled only when the set is closed
    under the coidalgebra-side operations.
    """
    tol = config.resolve(tol)
    states = list(states)
    if not states:
        raise LatticeError("empty set of states")
    qg = states[0].owner
    for st in states:
        if not is_idempotent_state(st.phi, max(tol, 1e-9)):
            raise LatticeError("build_lattice needs certified idempotent states")
    m = len(states)
    order = np.zeros((m, m), dtype=bool)
    for i in range(m):
        for j in range(m):
            order[i, j] = order_le(states[i].phi, states[j].phi, tol, check_idempotent=False)
    for i in range(m):
        if not order[i, i]:
            raise LatticeError(f"order is not reflexive at {i}")
        for j in range(i + 1, m):
            if order[i, j] and order[j, i]:
                raise LatticeError(f"states {i} and {j} are mutually below each other (duplicate)")
    o = order.astype(int)
    if np.any((o @ o > 0) & ~order):
        raise LatticeError("order is not transitive")
    coids = [coidalgebra_of(st) for st in states]
    lat = IdempotentLattice(qg, states, order, hasse_reduction(order), coids,
                            exhaustive=exhaustive, tol=tol)
    if not np.all(order[lat.bottom, :]) or not np.all(order[:, lat.top]):
        raise LatticeError("set lacks a bottom or a top")
    meets = np.full((m, m), -1)
    joins = np.full((m, m), -1)
    for i in range(m):
        for j in range(i, m):
            mi = lat.index_of(lat.meet(i, j))
            jo = lat.index_of(lat.join(i, j))
            meets[i, j] = meets[j, i] = -1 if mi is None else mi
            joins[i, j] = joins[j, i] = -1 if jo is None else jo
    if np.all(meets >= 0) and np.all(joins >= 0):
        lat.meets, lat.joins = meets, joins
    return lat


def closure(states, tol: float | None = None, max_rounds: int = 8) -> list[IdempotentState]:
    """Add meets and joins (computed on coidalgebras) until the set is closed."""
    tol = config.resolve(tol)
    states = list(states)
    coids = [coidalgebra_of(st) for st in states]
    for _ in range(max_rounds):
        added = False
        m = len(states)
        for i in range(m):
            for j in range(i + 1, m):
                for C in (intersect(coids[i], coids[j]), generated(coids[i], coids[j])):
                    st = idempotent_of_coidalgebra(C, tol)
                    if not any(_same(st, old, SUBSPACE_TOL) for old in states):
                        states.append(st)
                        coids.append(C)
                        added = True
        if not added:
            break
    return states


def order_isomorphism_check(lat: IdempotentLattice) -> list[tuple[int, int]]:
    """Pairs where state order, BBS order and reverse coidalgebra inclusion disagree."""
    qg = lat.owner
    bad = []
    for i, si in enumerate(lat.elements):
        for j, sj in enumerate(lat.elements):
            state = bool(lat.order[i, j])
            bbs = bbs_order(PreSubgroup(si.f), PreSubgroup(sj.f), lat.tol * 10)
            incl = contained_in(qg, lat.coidalgebras[j].basis, lat.coidalgebras[i].basis)
            if not state == bbs == incl:
                bad.append((i, j))
    return bad


def poset_meet(lat: IdempotentLattice, i: int, j: int) -> int | None:
    return _bounds(lat.order, i, j, lower=True)


def poset_join(lat: IdempotentLattice, i: int, j: int) -> int | None:
    return _bounds(lat.order, i, j, lower=False)


# export ---------------------------------------------------------------------


def _num(x: float) -> float:
    # round-off noise would otherwise leak into the text as 1e-17-style values
    return 0.0 if abs(x) < 1e-12 else float(f"{x:.12g}")


def _pairs(v: np.ndarray) -> list[list[float]]:
    return [[_num(z.real), _num(z.imag)] for z in v]


def haar_flags(lat: IdempotentLattice) -> list[bool]:
    subs = known_subgroups(lat.elements, lat.tol)
    return [haar_equivalence_report(st, subs).is_haar for st in lat.elements]


def to_json(lat: IdempotentLattice) -> str:
    flags = haar_flags(lat)
    qg = lat.owner
    data = {
        "format": "qidem-lattice",
        "version": 1,
        "quantum_group": qg.name,
        "dim": qg.dim,
        "exhaustive": bool(lat.exhaustive),
        "elements": [
            {
                "index": i,
                "state": _pairs(st.phi.values),
                "rho": _pairs(st.rho.coords),
                "f": _pairs(st.f.coords),
                "p": _pairs(st.p.coords),
                "haar": flags[i],
                "coidalgebra_dim": lat.coidalgebras[i].dim,
            }
            for i, st in enumerate(lat.elements)
        ],
        "edges": [list(e) for e in lat.hasse_edges],
    }
    return json.dumps(data, indent=1)


def _node_label(lat: IdempotentLattice, i: int) -> str:
    tags = []
    if i == lat.bottom:
        tags.append("eps")
    if i == lat.top:
        tags.append("h")
    tag = f" {'/'.join(tags)}" if tags else ""
    return f"{i}{tag} dim C={lat.coidalgebras[i].dim}"


def to_dot(lat: IdempotentLattice) -> str:
    lines = [f"digraph idempotents {{",
             f'  label="{lat.owner.name or "quantum group"}'
             f'{"" if lat.exhaustive else " (non-exhaustive)"}";',
             "  rankdir=BT;"]
    for i in range(len(lat)):
        lines.append(f'  s{i} [label="{_node_label(lat, i)}"];')
    for i, j in lat.hasse_edges:
        lines.append(f"  s{i} -> s{j};")
    lines.append("}")
    return "\n".join(lines)


def export(lat: IdempotentLattice, fmt: str = "dot") -> str:
    if fmt == "dot":
        return to_dot(lat)
    if fmt == "json":
        return to_json(lat)
    raise ValueError(f"unknown export format {fmt!r}; use 'dot' or 'json'")


def states_from_json(text: str, qg: QuantumGroup, tol: float | None = None) -> list[IdempotentState]:
    """Re-read exported states and re-certify each one."""
    data = json.loads(text)
    if data.get("format") != "qidem-lattice" or data.get("dim") != qg.dim:
        raise LatticeError("not a lattice export for this quantum group")
    out = []
    for el in data["elements"]:
        vals = np.array([complex(a, b) for a, b in el["state"]])
        out.append(presubgroup_of(Functional(qg, vals), max(config.resolve(tol), 1e-9)))
    return out
