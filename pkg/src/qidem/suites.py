"""Residual suites checking the structural correspondences on discovered idempotents.

Each suite returns a list of :class:`Item`; a suite passes when every item
does. Exceptions raised by a certification step become failing items with an
infinite residual, so a single bad state never hides the rest of the report.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .coidalgebra import (
    CoidalgebraError,
    coidalgebra_of,
    coidalgebra_roundtrip,
    expectation_of_state,
    haar_equivalence_report,
    known_subgroups,
    multiplicativity_on_image_check,
)
from .lattice import build_lattice, order_isomorphism_check
from .presubgroups import (
    CertificationError,
    PreSubgroup,
    is_grouplike_projection,
    state_of_presubgroup,
    to_grouplike,
    to_presubgroup,
)
from .states import (
    StateError,
    counit_functional,
    haar_functional,
    idempotent_invariants,
    lemma_gb_check,
    order_le,
    presubgroup_of,
)

SUITE_TOL = 1e-8
SUITES = ("bijection", "rescaling", "order", "remark", "lemma-gb", "haar-equivalence",
          "multiplicativity")

_FAILURES = (StateError, CertificationError, CoidalgebraError, ValueError, np.linalg.LinAlgError)


@dataclass(frozen=True)
class Item:
    name: str
    value: float
    passed: bool


def _item(name: str, value: float, tol: float = SUITE_TOL) -> Item:
    value = float(value)
    return Item(name, value, bool(value <= tol))


def _guard(name: str, fn) -> list[Item]:
    try:
        return fn()
    except _FAILURES as exc:
        return [Item(f"{name} ({type(exc).__name__}: {exc})", float("inf"), False)]


def bijection(states, rng_seed: int = 0) -> list[Item]:
    out = []
    for i, st in enumerate(states):
        def one(st=st, i=i):
            res = idempotent_invariants(st)
            items = [_item(f"state {i}: {k}", v) for k, v in res.items()]
            f = PreSubgroup(st.f)
            omega = state_of_presubgroup(f)
            items.append(_item(f"state {i}: phi -> f -> omega_ff", omega.distance(st.phi)))
            items.append(_item(f"state {i}: f -> omega_ff -> f",
                               presubgroup_of(omega).f.distance(st.f)))
            return items
        out += _guard(f"state {i}", one)
    return out


def rescaling(states, rng_seed: int = 0) -> list[Item]:
    out = []
    for i, st in enumerate(states):
        def one(st=st, i=i):
            p = to_grouplike(PreSubgroup(st.f)).p
            back = to_presubgroup(p).f
            gl = is_grouplike_projection(st.f / st.owner.counit_of(st.f).real)
            return [
                _item(f"state {i}: f -> p -> f", back.distance(st.f)),
                _item(f"state {i}: p matches record", p.distance(st.p)),
                Item(f"state {i}: f/eps(f) group-like", 0.0 if gl else 1.0, gl),
            ]
        out += _guard(f"state {i}", one)
    return out


def order(states, rng_seed: int = 0) -> list[Item]:
    def run():
        lat = build_lattice(states)
        bad = order_isomorphism_check(lat)
        qg = lat.owner
        return [
            Item("pairs where state/BBS/inclusion orders disagree", float(len(bad)), not bad),
            _item("bottom is the counit", lat.elements[lat.bottom].phi.distance(counit_functional(qg))),
            _item("top is the Haar state", lat.elements[lat.top].phi.distance(haar_functional(qg))),
        ]
    return _guard("lattice", run)


def expectation_roundtrip(states, rng_seed: int = 0) -> list[Item]:
    out = []
    for i, st in enumerate(states):
        def one(st=st, i=i):
            expectation_of_state(st)
            C = coidalgebra_of(st)
            cert = max(C.residuals().values())
            return [
                _item(f"state {i}: image of T_phi is a coidalgebra", cert),
                _item(f"state {i}: eps o E_C = phi", coidalgebra_roundtrip(st)),
            ]
        out += _guard(f"state {i}", one)
    return out


def shifted_state_identity(states, rng_seed: int = 0, samples: int = 100) -> list[Item]:
    rng = np.random.default_rng(rng_seed)
    out = []
    for i, g in enumerate(states):
        for j, f in enumerate(states):
            if not order_le(g.phi, f.phi):
                continue
            qg = f.owner

            def one(f=f, g=g, i=i, j=j):
                worst = 0.0
                for _ in range(samples):
                    b = qg.element(rng.normal(size=qg.dim) + 1j * rng.normal(size=qg.dim))
                    worst = max(worst, lemma_gb_check(f.phi, g.phi, b))
                return [_item(f"pair g={i}, f={j}: f * g_b = g(b) f", worst)]
            out += _guard(f"pair g={i}, f={j}", one)
    return out


def haar_equivalence(states, rng_seed: int = 0) -> list[Item]:
    subs = known_subgroups(states)
    out = []
    for i, st in enumerate(states):
        def one(st=st, i=i):
            r = haar_equivalence_report(st, subs)
            name = (f"state {i}: haar={r.is_haar} central={r.f_central} "
                    f"quotient={r.quotient_type}")
            return [Item(name, 0.0, True)]
        out += _guard(f"state {i}", one)
    return out


def multiplicativity(states, rng_seed: int = 0, pairs: int = 100) -> list[Item]:
    return [_item(f"state {i}: E(E(a)E(b)) = E(a)E(b)",
                  multiplicativity_on_image_check(st, pairs, rng_seed + i))
            for i, st in enumerate(states)]


_RUNNERS = {
    "bijection": bijection,
    "rescaling": rescaling,
    "order": order,
    "remark": expectation_roundtrip,
    "lemma-gb": shifted_state_identity,
    "haar-equivalence": haar_equivalence,
    "multiplicativity": multiplicativity,
}


def run_suite(what: str, states, rng_seed: int = 0) -> list[Item]:
    if what not in _RUNNERS:
        raise ValueError(f"unknown suite {what!r}; choose from {', '.join(SUITES)}")
    return _RUNNERS[what](list(states), rng_seed=rng_seed)
