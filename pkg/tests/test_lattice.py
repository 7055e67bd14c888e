import functools
import json

import networkx as nx
import numpy as np
import pytest

from qidem.lattice import (
    LatticeError,
    build_lattice,
    closure,
    export,
    hasse_reduction,
    order_isomorphism_check,
    poset_join,
    poset_meet,
    states_from_json,
)
from qidem.models import builtin, builtin_group, match_oracle, subgroup_oracle
from qidem.models.groups import closure as generate
from qidem.states import is_idempotent_state
from tests.conftest import found


@functools.lru_cache(maxsize=None)
def lattice(name):
    qg = builtin(name)
    states = found(name)
    return build_lattice(states, exhaustive=match_oracle(qg, list(states)) is not None)


def subgroup_hasse(name, reverse=False):
    """Hasse diagram of the subgroup lattice, via networkx transitive reduction."""
    G = builtin_group(name)
    subs = subgroup_oracle(G)
    D = nx.DiGraph()
    D.add_nodes_from(subs)
    for H in subs:
        for K in subs:
            if H < K:
                D.add_edge(K, H) if reverse else D.add_edge(H, K)
    return nx.transitive_reduction(D)


def test_z2_chain():
    lat = lattice("fun:Z2")
    assert len(lat) == 2 and lat.hasse_edges == [(0, 1)]
    dot = export(lat, "dot")
    assert dot.count("->") == 1 and dot.count("[label=") == 2


@pytest.mark.parametrize("name, reverse", [("fun:S3", False), ("grp:S3", True),
                                           ("fun:D4", False), ("grp:Q8", True)])
def test_lattice_is_isomorphic_to_subgroup_lattice(name, reverse):
    # C(G): h_H < h_K iff H in K; C[G]: 1_H < 1_K iff K in H
    lat = lattice(name)
    subs = match_oracle(builtin(name), lat.elements)
    assert subs is not None
    for i, H in enumerate(subs):
        for j, K in enumerate(subs):
            assert lat.order[i, j] == ((K <= H) if reverse else (H <= K))
    hasse = subgroup_hasse(name, reverse)
    got = {(subs[i], subs[j]) for i, j in lat.hasse_edges}
    assert got == set(hasse.edges)


def test_s3_hasse_edge_count():
    # e below 4 subgroups, each of those below S3
    assert len(lattice("fun:S3").hasse_edges) == 8
    assert subgroup_hasse("fun:S3").number_of_edges() == 8
    assert len(lattice("grp:S3").hasse_edges) == 8


def test_meet_and_join_in_s3():
    lat = lattice("fun:S3")
    G = builtin_group("S3")
    subs = match_oracle(builtin("fun:S3"), lat.elements)
    idx = {H: i for i, H in enumerate(subs)}

    def sub(*labels):
        return generate(G, [G.index(s) for s in labels])

    i, j = idx[sub("(12)")], idx[sub("(123)")]
    assert lat.index_of(lat.meet(i, j)) == idx[sub("e")] == lat.bottom
    assert lat.index_of(lat.join(i, j)) == idx[frozenset(range(6))] == lat.top


def test_meet_join_with_top_and_idempotent_law(model_name):
    lat = lattice(model_name)
    for i in range(len(lat)):
        assert lat.index_of(lat.meet(i, lat.top)) == i
        assert lat.index_of(lat.join(i, lat.top)) == lat.top
        assert lat.index_of(lat.meet(i, i)) == i


def test_coidalgebra_operations_agree_with_poset(model_name):
    lat = lattice(model_name)
    assert lat.meets is not None and lat.joins is not None
    for i in range(len(lat)):
        for j in range(len(lat)):
            m, J = poset_meet(lat, i, j), poset_join(lat, i, j)
            if m is not None:
                assert lat.meets[i, j] == m
            if J is not None:
                assert lat.joins[i, j] == J


def test_three_orders_agree(model_name):
    assert order_isomorphism_check(lattice(model_name)) == []


def test_duplicates_are_rejected():
    states = list(found("fun:Z4"))
    with pytest.raises(LatticeError):
        build_lattice(states + [states[1]])


def test_closure_recovers_missing_joins():
    states = list(found("fun:D4"))
    lat = lattice("fun:D4")
    keep = [i for i in range(len(lat)) if i != lat.top]
    restored = closure([states[i] for i in keep])
    assert len(restored) == len(states)


def test_hasse_reduction_of_chain():
    order = np.triu(np.ones((4, 4), dtype=bool))
    assert hasse_reduction(order) == [(0, 1), (1, 2), (2, 3)]


def test_json_export_roundtrip_kp8():
    qg = builtin("kp8")
    lat = lattice("kp8")
    text = export(lat, "json")
    data = json.loads(text)
    assert data["exhaustive"] is False
    assert sum(e["haar"] for e in data["elements"]) == 6
    again = states_from_json(text, qg)
    for a, b in zip(again, lat.elements):
        assert is_idempotent_state(a.phi)
        assert a.phi.distance(b.phi) < 1e-10


def test_exhaustive_flag_for_oracle_models():
    assert json.loads(export(lattice("fun:S3"), "json"))["exhaustive"] is True
    assert "non-exhaustive" in export(lattice("kp8"), "dot")


def test_unknown_format():
    with pytest.raises(ValueError):
        export(lattice("fun:Z2"), "svg")
