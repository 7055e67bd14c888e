import itertools

import numpy as np
import pytest

from qidem.io import dumps, from_dict, load_json, to_dict
from qidem.models import (
    BUILTINS,
    builtin,
    builtin_group,
    is_normal,
    kac_paljutkin_path,
    match_oracle,
    oracle_states,
    subgroup_oracle,
)
from qidem.models.groups import CayleyError, cyclic, from_elements


def brute_force_subgroups(G):
    out = set()
    for r in range(1, G.order + 1):
        for S in itertools.combinations(range(G.order), r):
            S = frozenset(S)
            if G.identity in S and all(G.mul(a, b) in S for a in S for b in S):
                out.add(S)
    return out


@pytest.mark.parametrize("name, count", [("Z2", 2), ("Z3", 2), ("Z4", 3), ("Z2xZ2", 5),
                                         ("S3", 6), ("D4", 10), ("Q8", 6)])
def test_subgroup_oracle(name, count):
    G = builtin_group(name)
    G.check()
    subs = subgroup_oracle(G)
    assert len(subs) == count
    assert set(subs) == brute_force_subgroups(G)


@pytest.mark.parametrize("name, normal", [("S3", 3), ("D4", 6), ("Q8", 6)])
def test_normal_subgroup_counts(name, normal):
    G = builtin_group(name)
    assert sum(is_normal(G, H) for H in subgroup_oracle(G)) == normal


def test_group_presentations():
    S3 = builtin_group("S3")
    assert S3.labels[S3.identity] == "e"
    r = S3.index("(123)")
    assert S3.mul(r, S3.mul(r, r)) == S3.identity
    Q8 = builtin_group("Q8")
    i, j, k = (Q8.index(x) for x in "ijk")
    assert Q8.mul(i, j) == k
    assert Q8.mul(i, i) == Q8.index("-1")
    D4 = builtin_group("D4")
    s, r1 = D4.index("s"), D4.index("r1")
    assert D4.mul(D4.mul(s, r1), s) == D4.inverse[r1]


def test_non_closed_operation_is_rejected():
    with pytest.raises(CayleyError):
        from_elements([0, 1, 2], lambda a, b: (a + b) % 4, ["0", "1", "2"])


def test_cyclic_is_abelian():
    G = cyclic(5)
    assert np.array_equal(G.table, G.table.T)


def test_unknown_builtin():
    with pytest.raises(KeyError):
        builtin("fun:A5")


def test_builtins_are_cached():
    assert builtin("kp8") is builtin("kp8")
    assert len(BUILTINS) == 10


def test_kp8_data_file_roundtrips_canonically():
    text = kac_paljutkin_path().read_text()
    qg = from_dict(load_json(kac_paljutkin_path()))
    assert dumps(qg) + "\n" == text
    assert qg.dim == 8 and qg.algebra.labels[:4] == ("e1", "e2", "e3", "e4")


def test_oracle_states_only_for_group_models():
    assert oracle_states(builtin("kp8")) is None
    assert len(oracle_states(builtin("grp:D4"))) == 10


def test_match_oracle_rejects_partial_sets():
    from tests.conftest import found
    states = list(found("fun:S3"))
    assert match_oracle(builtin("fun:S3"), states) is not None
    assert match_oracle(builtin("fun:S3"), states[:-1]) is None
