import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from qidem.coidalgebra import (
    CoidalgebraError,
    coidalgebra_of,
    expectation_of_state,
    haar_equivalence_report,
    known_subgroups,
    multiplicativity_on_image_check,
    quotient_coidalgebra,
    coidalgebra_roundtrip,
    state_of_coidalgebra,
    subspace_distance,
)
from qidem.models import builtin, builtin_group, is_normal, match_oracle
from qidem.presubgroups import PreSubgroup, quantum_subgroup_from_central, to_presubgroup
from qidem.states import Functional
from tests.conftest import found

seeds = st.integers(0, 2**32 - 1)


@pytest.mark.parametrize("name", ["fun:S3", "fun:D4", "fun:Z2xZ2"])
def test_coidalgebra_dimension_is_index(name):
    # functions constant on cosets of H: |G| / |H|
    qg = builtin(name)
    states = found(name)
    subgroups = match_oracle(qg, list(states))
    assert subgroups is not None
    for s, H in zip(states, subgroups):
        assert coidalgebra_of(s).dim == qg.dim // len(H)


def test_kp8_coidalgebra_dimensions():
    # regression values from the default search
    assert sorted(coidalgebra_of(s).dim for s in found("kp8")) == [1, 2, 2, 2, 4, 4, 4, 8]


def test_expectation_rejects_non_idempotent():
    qg = builtin("fun:Z4")
    with pytest.raises(Exception):
        expectation_of_state(Functional(qg, [0, 1, 0, 0]))


def test_counit_and_haar_extremes():
    qg = builtin("kp8")
    states = found("kp8")
    assert coidalgebra_of(states[0]).dim == qg.dim          # eps: T = id
    C_top = coidalgebra_of(states[-1])                       # h: scalars
    assert C_top.dim == 1
    assert np.allclose(C_top.expectation @ qg.algebra.unit, qg.algebra.unit)


def test_state_of_coidalgebra_roundtrip(model_name):
    for s in found(model_name):
        assert coidalgebra_roundtrip(s) < 1e-9


def test_quotient_matches_image_for_every_subgroup():
    qg = builtin("kp8")
    for sub in known_subgroups(found("kp8")):
        Q = quotient_coidalgebra(sub)  # raises on mismatch
        assert state_of_coidalgebra(Q).distance(sub.haar_idempotent()) < 1e-9


def test_literal_quotient_side_is_not_a_right_coidalgebra_for_non_normal_subgroup():
    G = builtin_group("fun:S3")
    qg = builtin("fun:S3")
    H = [G.identity, G.index("(12)")]
    v = np.zeros(6)
    v[H] = 1
    sub = quantum_subgroup_from_central(to_presubgroup(qg.element(v)))
    right = quotient_coidalgebra(sub)
    literal = quotient_coidalgebra(sub, literal=True)
    assert right.dim == literal.dim == 3
    assert subspace_distance(qg, right.basis, literal.basis) > 1e-3
    assert literal.residuals()["Delta(C) in A (x) C"] > 1e-3
    # for a normal subgroup both sides coincide
    A3 = [G.identity, G.index("(123)"), G.index("(132)")]
    w = np.zeros(6)
    w[A3] = 1
    sub3 = quantum_subgroup_from_central(to_presubgroup(qg.element(w)))
    assert subspace_distance(qg, quotient_coidalgebra(sub3).basis,
                             quotient_coidalgebra(sub3, literal=True).basis) < 1e-9


def test_haar_equivalence_on_kp8():
    states = found("kp8")
    subs = known_subgroups(states)
    reports = [haar_equivalence_report(s, subs) for s in states]
    assert sum(r.is_haar for r in reports) == 6
    assert all(r.consistent for r in reports)
    assert any(not (r.is_haar or r.f_central or r.quotient_type) for r in reports)


def test_haar_equivalence_flags_non_normal_subgroups_of_group_algebra():
    qg = builtin("grp:S3")
    states = found("grp:S3")
    subs = known_subgroups(states)
    G = builtin_group("S3")
    for s, H in zip(states, match_oracle(qg, list(states))):
        assert haar_equivalence_report(s, subs).is_haar == is_normal(G, H)


@settings(max_examples=15, deadline=None)
@given(seed=seeds, name=st.sampled_from(["kp8", "grp:D4", "fun:S3"]))
def test_expectation_is_bimodule_and_positive(seed, name):
    for s in found(name):
        C = coidalgebra_of(s)
        res = C.residuals(np.random.default_rng(seed), samples=3)
        assert max(res.values()) < 1e-8


def test_multiplicativity_on_image(model_name):
    for s in found(model_name):
        assert multiplicativity_on_image_check(s, pairs=10) < 1e-9


def test_group_algebra_transposition_subgroup():
    qg = builtin("grp:S3")
    G = builtin_group("S3")
    states = list(found("grp:S3"))
    H = frozenset([G.identity, G.index("(12)")])
    s = states[match_oracle(qg, states).index(H)]
    expected = np.zeros(6)
    expected[list(H)] = 1 / np.sqrt(2)
    assert np.allclose(s.f.coords, expected)
    r = haar_equivalence_report(s, known_subgroups(states))
    assert (r.is_haar, r.f_central, r.quotient_type) == (False, False, False)
