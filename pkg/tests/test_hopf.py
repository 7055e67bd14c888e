import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from qidem.algebra import AlgebraData
from qidem.hopf import AxiomError, QuantumGroup, pentagon_residual, validate, validate_group
from qidem.models import builtin, builtin_group

seeds = st.integers(0, 2**32 - 1)
MODELS = ["fun:S3", "grp:Q8", "kp8", "fun:D4"]


def test_builtin_validates(model_name):
    qg = builtin(model_name)
    assert qg.report.ok
    assert qg.report.max_residual() <= 1e-9
    assert pentagon_residual(qg.V, qg.dim) <= 1e-9


@pytest.mark.parametrize("name", ["fun:S3", "fun:D4", "fun:Z4"])
def test_function_algebra_haar_data(name):
    # uniform measure, eta = delta_e, S(delta_g) = delta_{g^-1}
    qg = builtin(name)
    G = builtin_group(name)
    n = G.order
    assert np.allclose(qg.haar, np.full(n, 1 / n))
    eta = np.zeros(n)
    eta[G.identity] = 1
    assert np.allclose(qg.eta, eta)
    S = np.zeros((n, n))
    S[G.inverse, np.arange(n)] = 1
    assert np.allclose(qg.antipode, S)


@pytest.mark.parametrize("name", ["grp:S3", "grp:Q8"])
def test_group_algebra_haar_data(name):
    # h(l_g) = [g = e], eta = average of all l_g, counit = 1
    qg = builtin(name)
    G = builtin_group(name)
    n = G.order
    h = np.zeros(n)
    h[G.identity] = 1
    assert np.allclose(qg.haar, h)
    assert np.allclose(qg.eta, np.full(n, 1 / n))
    assert np.allclose(qg.counit, np.ones(n))


def test_kp8_haar_is_normalised_regular_trace():
    # Kac type: h(a) = Tr(L_a) / dim A, computed straight from the structure constants
    qg = builtin("kp8")
    m = qg.algebra.mult
    traces = np.array([np.trace(m[i].T) for i in range(qg.dim)]) / qg.dim
    assert np.allclose(qg.haar, traces)
    labels = qg.algebra.labels
    assert np.isclose(qg.haar[labels.index("e1")], 1 / 8)
    assert np.isclose(qg.haar[labels.index("a11")], 1 / 4)
    assert np.isclose(qg.haar[labels.index("a12")], 0)


def test_kp8_is_neither_commutative_nor_cocommutative():
    qg = builtin("kp8")
    assert not qg.is_commutative()
    assert not qg.is_cocommutative()


def test_commutativity_flags():
    assert builtin("fun:S3").is_commutative() and not builtin("fun:S3").is_cocommutative()
    assert builtin("grp:S3").is_cocommutative() and not builtin("grp:S3").is_commutative()


def test_nonassociative_product_is_rejected():
    qg = builtin("fun:Z2")
    mult = np.array(qg.algebra.mult)
    mult[1, 1, 0] = 0.5
    alg = AlgebraData(mult, qg.algebra.star, qg.algebra.unit)
    report, _ = validate(alg, qg.coproduct)
    assert not report.ok
    assert "associativity" in report.failures()
    with pytest.raises(AxiomError):
        QuantumGroup(alg, qg.coproduct)


def test_non_coassociative_coproduct_is_rejected():
    qg = builtin("fun:Z3")
    D = np.array(qg.coproduct)
    D[:, [1, 2]] = D[:, [2, 1]]  # Delta(d_1) <-> Delta(d_2)
    with pytest.raises(AxiomError) as exc:
        QuantumGroup(qg.algebra, D)
    assert not exc.value.report.ok


def test_wrong_counit_is_rejected():
    qg = builtin("fun:Z2")
    report, _ = validate(qg.algebra, qg.coproduct, np.array([0.0, 1.0]))
    assert not report.ok


def test_revalidation_is_clean():
    assert validate_group(builtin("kp8")).ok


@settings(max_examples=20, deadline=None)
@given(seed=seeds, name=st.sampled_from(MODELS))
def test_haar_invariance_and_antipode_on_random_elements(seed, name):
    qg = builtin(name)
    n = qg.dim
    r = np.random.default_rng(seed)
    a = r.normal(size=n) + 1j * r.normal(size=n)
    D = (qg.coproduct @ a).reshape(n, n)
    one = qg.algebra.unit
    h_a = qg.haar @ a
    assert np.allclose(D @ qg.haar, h_a * one)           # (id (x) h) Delta(a)
    assert np.allclose(qg.haar @ D, h_a * one)           # (h (x) id) Delta(a)
    # m (S (x) id) Delta(a) = eps(a) 1
    m = qg.algebra.mult
    lhs = np.einsum("jk,pj,pkl->l", D, qg.antipode, m)
    assert np.allclose(lhs, (qg.counit @ a) * one)


@settings(max_examples=20, deadline=None)
@given(seed=seeds, name=st.sampled_from(MODELS))
def test_V_implements_coproduct_times_one_tensor_b(seed, name):
    qg = builtin(name)
    n = qg.dim
    r = np.random.default_rng(seed)
    a = r.normal(size=n) + 1j * r.normal(size=n)
    b = r.normal(size=n) + 1j * r.normal(size=n)
    lhs = qg.V @ np.kron(a, b)
    rhs = qg.tensor_product(qg.coproduct @ a, np.kron(qg.algebra.unit, b))
    assert np.allclose(lhs, rhs)
