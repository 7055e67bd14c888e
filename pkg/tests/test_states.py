import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from qidem.models import builtin, builtin_group
from qidem.states import (
    Functional,
    StateError,
    antipode_invariance_check,
    cesaro_idempotent,
    convolve,
    counit_functional,
    density_element,
    haar_functional,
    idempotent_invariants,
    is_idempotent_state,
    is_state,
    lemma_gb_check,
    order_le,
    presubgroup_of,
    shifted,
    vector_state,
)
from tests.conftest import found

seeds = st.integers(0, 2**32 - 1)
MODELS = ["kp8", "grp:S3", "fun:D4"]


def random_state(qg, seed):
    r = np.random.default_rng(seed)
    u = qg.element(r.normal(size=qg.dim) + 1j * r.normal(size=qg.dim))
    psi = vector_state(u, u)
    return Functional(qg, psi.values / (psi.values @ qg.algebra.unit))


def point_mass(name, g):
    qg = builtin(name)
    v = np.zeros(qg.dim)
    v[g] = 1
    return Functional(qg, v)


@settings(max_examples=20, deadline=None)
@given(seed=seeds, name=st.sampled_from(MODELS))
def test_counit_is_unit_and_haar_absorbs(seed, name):
    qg = builtin(name)
    psi = random_state(qg, seed)
    eps, h = counit_functional(qg), haar_functional(qg)
    assert convolve(eps, psi).distance(psi) < 1e-10
    assert convolve(psi, eps).distance(psi) < 1e-10
    assert convolve(psi, h).distance(h) < 1e-10
    assert convolve(h, psi).distance(h) < 1e-10


@settings(max_examples=20, deadline=None)
@given(seed=seeds, name=st.sampled_from(MODELS))
def test_convolution_is_associative_and_preserves_states(seed, name):
    qg = builtin(name)
    a, b, c = (random_state(qg, seed + k) for k in range(3))
    assert convolve(convolve(a, b), c).distance(convolve(a, convolve(b, c))) < 1e-10
    assert is_state(convolve(a, b), 1e-9)


def test_vector_state_of_unit_is_haar():
    qg = builtin("kp8")
    assert vector_state(qg.one(), qg.one()).distance(haar_functional(qg)) < 1e-12


def test_counit_density_on_function_algebra():
    # eps(d_g) = [g = e] = h(rho d_g) forces rho = |G| d_e
    qg = builtin("fun:S3")
    G = builtin_group("fun:S3")
    rho = density_element(counit_functional(qg))
    expected = np.zeros(6)
    expected[G.identity] = 6
    assert np.allclose(rho.coords, expected)


def test_non_state_is_rejected():
    qg = builtin("fun:Z2")
    bad = Functional(qg, [1.5, -0.5])
    assert not is_state(bad)
    with pytest.raises(StateError):
        presubgroup_of(bad)
    with pytest.raises(StateError):
        cesaro_idempotent(bad)


def test_point_mass_is_not_idempotent():
    assert not is_idempotent_state(point_mass("fun:Z4", 1))


@pytest.mark.parametrize("g, support", [(1, [0, 1, 2, 3]), (2, [0, 2]), (3, [0, 1, 2, 3])])
def test_cesaro_limit_of_point_mass_is_uniform_on_generated_subgroup(g, support):
    st_ = cesaro_idempotent(point_mass("fun:Z4", g))
    expected = np.zeros(4)
    expected[support] = 1 / len(support)
    assert np.allclose(st_.phi.values, expected, atol=1e-9)


def test_cesaro_on_s3_transposition():
    G = builtin_group("fun:S3")
    g = G.index("(12)")
    st_ = cesaro_idempotent(point_mass("fun:S3", g))
    expected = np.zeros(6)
    expected[[G.identity, g]] = 0.5
    assert np.allclose(st_.phi.values, expected, atol=1e-9)


def test_order_extremes():
    qg = builtin("kp8")
    eps, h = counit_functional(qg), haar_functional(qg)
    for s in found("kp8"):
        assert order_le(eps, s.phi)
        assert order_le(s.phi, h)
    assert not order_le(h, eps)


def test_order_requires_idempotents():
    qg = builtin("fun:Z4")
    with pytest.raises(StateError):
        order_le(point_mass("fun:Z4", 1), haar_functional(qg))


def test_shifted_functional():
    qg = builtin("kp8")
    r = np.random.default_rng(0)
    a = qg.element(r.normal(size=8))
    b = qg.element(r.normal(size=8))
    h = haar_functional(qg)
    assert np.isclose(shifted(h, b)(a), h(a * b))


def test_shifted_identity_precondition_is_enforced():
    qg = builtin("fun:S3")
    h = haar_functional(qg)
    eps = counit_functional(qg)
    # g = h, f = eps does not satisfy g * f = f
    with pytest.raises(StateError):
        lemma_gb_check(eps, h, qg.one())


def test_idempotents_are_antipode_invariant(model_name):
    for s in found(model_name):
        assert antipode_invariance_check(s.phi) < 1e-9


def test_invariants_of_discovered_states(model_name):
    for s in found(model_name):
        assert max(idempotent_invariants(s).values()) < 1e-8
