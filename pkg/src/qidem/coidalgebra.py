"""Right coidalgebras and conditional expectations.

Subspaces of the algebra are carried as matrices whose columns form an
orthonormal basis for the Haar inner product; comparisons go through the
associated orthogonal projections, so they never depend on a basis choice.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from . import config
from .algebra import AlgebraElement, is_positive
from .hopf import QuantumGroup
from .presubgroups import PreSubgroup, QuantumSubgroup, is_subgroup
from .states import Functional, IdempotentState, StateError, is_idempotent_state, presubgroup_of

SUBSPACE_TOL = 1e-8
RANK_TOL = 1e-9


class CoidalgebraError(ValueError):
    pass


def _chol(qg: QuantumGroup) -> np.ndarray:
    return np.linalg.cholesky(qg.gram)


def h_orthonormal_basis(qg: QuantumGroup, vectors: np.ndarray, rank_tol: float = RANK_TOL) -> np.ndarray:
    """Haar-orthonormal basis of the column space of ``vectors``."""
    if vectors.size == 0:
        return np.zeros((qg.dim, 0), complex)
    ch = _chol(qg).conj().T  # ||x||_h = ||ch x||
    U, s, _ = np.linalg.svd(ch @ vectors, full_matrices=False)
    rank = int(np.sum(s > rank_tol * max(1.0, s[0] if s.size else 1.0)))
    return np.linalg.solve(ch, U[:, :rank])


def projector(qg: QuantumGroup, basis: np.ndarray) -> np.ndarray:
    """Haar-orthogonal projection onto the span of an h-orthonormal basis."""
    return basis @ basis.conj().T @ qg.gram


def subspace_distance(qg: QuantumGroup, b1: np.ndarray, b2: np.ndarray) -> float:
    return float(np.max(np.abs(projector(qg, b1) - projector(qg, b2)), initial=0.0))


def contained_in(qg: QuantumGroup, small: np.ndarray, big: np.ndarray, tol: float = SUBSPACE_TOL) -> bool:
    P = projector(qg, big)
    return bool(np.max(np.abs(P @ small - small), initial=0.0) <= tol)


@dataclass(frozen=True)
class Coidalgebra:
    owner: QuantumGroup
    basis: np.ndarray
    expectation: np.ndarray

    @property
    def dim(self) -> int:
        return self.basis.shape[1]

    def contains(self, a: AlgebraElement, tol: float = SUBSPACE_TOL) -> bool:
        return float(np.linalg.norm(self.expectation @ a.coords - a.coords)) <= tol

    def residuals(self, rng: np.random.Generator | None = None, samples: int = 20) -> dict[str, float]:
        """Defects of the right-coidalgebra and conditional-expectation axioms."""
        qg = self.owner
        alg = qg.algebra
        B, E = self.basis, self.expectation
        n, d = qg.dim, self.dim
        rng = rng or np.random.default_rng(0)
        unit = float(np.linalg.norm(E @ alg.unit - alg.unit))
        prods = np.array([[alg.product(B[:, a], B[:, b]) for b in range(d)] for a in range(d)]).reshape(-1, n).T
        closed_mult = float(np.max(np.abs(E @ prods - prods), initial=0.0))
        adj = alg.star @ np.conj(B)
        closed_star = float(np.max(np.abs(E @ adj - adj), initial=0.0))
        # Delta(C) in A (x) C: (id (x) (id - E)) Delta(c) = 0
        comp = np.kron(np.eye(n), np.eye(n) - E)
        coid = float(np.max(np.abs(comp @ qg.coproduct @ B), initial=0.0))
        idem = float(np.max(np.abs(E @ E - E)))
        haar = float(np.max(np.abs(qg.haar @ E - qg.haar)))
        bimod = 0.0
        for _ in range(samples):
            a = rng.normal(size=n) + 1j * rng.normal(size=n)
            c1 = B @ (rng.normal(size=d) + 1j * rng.normal(size=d))
            c2 = B @ (rng.normal(size=d) + 1j * rng.normal(size=d))
            lhs = E @ alg.product(alg.product(c1, a), c2)
            rhs = alg.product(alg.product(c1, E @ a), c2)
            bimod = max(bimod, float(np.linalg.norm(lhs - rhs)))
        return {
            "unital": unit,
            "closed under product": closed_mult,
            "closed under *": closed_star,
            "Delta(C) in A (x) C": coid,
            "E idempotent": idem,
            "h o E = h": haar,
            "E bimodule map": bimod,
        }

    def certify(self, tol: float = SUBSPACE_TOL) -> None:
        bad = {k: v for k, v in self.residuals().items() if v > tol}
        if bad:
            raise CoidalgebraError(f"coidalgebra certification failed: {bad}")


def expected_projection(qg: QuantumGroup, vectors: np.ndarray, tol: float = SUBSPACE_TOL) -> Coidalgebra:
    """Coidalgebra spanned by ``vectors`` with its Haar-preserving expectation.

    The expectation is the Haar-orthogonal projection, which is a
    conditional expectation because the Haar state is a trace; the
    bimodule property is still checked.
    """
    basis = h_orthonormal_basis(qg, np.asarray(vectors, complex).reshape(qg.dim, -1))
    C = Coidalgebra(qg, basis, projector(qg, basis))
    C.certify(tol)
    return C


def expectation_of_state(phi: Functional | IdempotentState, tol: float = SUBSPACE_TOL,
                         samples: int = 20, rng_seed: int = 0) -> np.ndarray:
    """Matrix of ``T_phi = (id (x) phi) o Delta`` after checking it is a
    right-invariant conditional expectation."""
    phi = phi.phi if isinstance(phi, IdempotentState) else phi
    qg = phi.owner
    if not is_idempotent_state(phi, max(config.get_tol(), 1e-9)):
        raise StateError("expectation_of_state needs an idempotent state")
    n = qg.dim
    T = np.einsum("jki,k->ji", qg.cop, phi.values)
    checks = {
        "idempotent": np.max(np.abs(T @ T - T)),
        "unital": np.linalg.norm(T @ qg.algebra.unit - qg.algebra.unit),
        "h o T = h": np.linalg.norm(qg.haar @ T - qg.haar),
        # Delta o T = (id (x) T) o Delta
        "right invariant": np.max(np.abs(qg.coproduct @ T - np.kron(np.eye(n), T) @ qg.coproduct)),
    }
    bad = {k: float(v) for k, v in checks.items() if v > tol}
    if bad:
        raise CoidalgebraError(f"T_phi is not a conditional expectation: {bad}")
    rng = np.random.default_rng(rng_seed)
    alg = qg.algebra
    for _ in range(samples):
        b = qg.element(rng.normal(size=n) + 1j * rng.normal(size=n))
        a = b.adjoint() * b
        if not is_positive(qg.element(T @ a.coords), tol * max(1.0, float(np.linalg.norm(a.coords)))):
            raise CoidalgebraError("T_phi does not preserve positivity")
    return T


def image_coidalgebra(qg: QuantumGroup, T: np.ndarray, tol: float = SUBSPACE_TOL) -> Coidalgebra:
    return expected_projection(qg, T, tol)


def state_of_coidalgebra(C: Coidalgebra, tol: float | None = None) -> Functional:
    """``eps o E_C``; must be an idempotent state."""
    tol = config.resolve(tol)
    phi = Functional(C.owner, C.owner.counit @ C.expectation)
    if not is_idempotent_state(phi, max(tol, 1e-9)):
        raise CoidalgebraError("eps o E_C is not an idempotent state")
    return phi


def coidalgebra_of(st: IdempotentState | Functional, tol: float = SUBSPACE_TOL) -> Coidalgebra:
    phi = st.phi if isinstance(st, IdempotentState) else st
    return image_coidalgebra(phi.owner, expectation_of_state(phi, tol), tol)


def _fixed_subspace(qg: QuantumGroup, M: np.ndarray) -> np.ndarray:
    _, s, vh = np.linalg.svd(M)
    rank = int(np.sum(s > RANK_TOL * max(1.0, s[0])))
    return vh[rank:].conj().T


def quotient_coidalgebra(sub: QuantumSubgroup, literal: bool = False,
                         tol: float = SUBSPACE_TOL, check_agreement: bool = True) -> Coidalgebra:
    """Fixed points of the subgroup's coaction.

    Default: ``{a : (id (x) pi) Delta(a) = a (x) 1_B}``, which is a right
    coidalgebra. With ``literal=True`` the mirrored condition
    ``(pi (x) id) Delta(a) = 1_B (x) a`` is used instead; that space is a left
    coidalgebra in general and is returned without the right-coidalgebra
    certification or agreement check.
    """
    qg, B = sub.parent, sub.target
    n, d = qg.dim, B.dim
    if literal:
        M = np.kron(sub.pi, np.eye(n)) @ qg.coproduct - np.kron(B.algebra.unit[:, None], np.eye(n))
    else:
        M = np.kron(np.eye(n), sub.pi) @ qg.coproduct - np.kron(np.eye(n), B.algebra.unit[:, None])
    fixed = _fixed_subspace(qg, M)
    basis = h_orthonormal_basis(qg, fixed)
    C = Coidalgebra(qg, basis, projector(qg, basis))
    if literal:
        return C
    C.certify(tol)
    if check_agreement:
        T = expectation_of_state(sub.haar_idempotent(), tol)
        other = image_coidalgebra(qg, T, tol)
        if subspace_distance(qg, C.basis, other.basis) > tol:
            raise CoidalgebraError("quotient coidalgebra differs from the image of T_{h_B o pi}")
    return C


def multiplicativity_on_image_check(phi: Functional | IdempotentState, pairs: int = 100,
                                    rng_seed: int = 0) -> float:
    """Max of ``||E(E(a)E(b)) - E(a)E(b)||`` over random pairs, ``E = T_phi``."""
    phi = phi.phi if isinstance(phi, IdempotentState) else phi
    qg = phi.owner
    alg = qg.algebra
    T = np.einsum("jki,k->ji", qg.cop, phi.values)
    rng = np.random.default_rng(rng_seed)
    n = qg.dim
    worst = 0.0
    for _ in range(pairs):
        a = rng.normal(size=n) + 1j * rng.normal(size=n)
        b = rng.normal(size=n) + 1j * rng.normal(size=n)
        prod = alg.product(T @ a, T @ b)
        worst = max(worst, float(np.linalg.norm(T @ prod - prod)))
    return worst


@dataclass(frozen=True)
class HaarEquivalenceReport:
    is_haar: bool
    f_central: bool
    quotient_type: bool
    witness_subgroup: QuantumSubgroup | None = None

    @property
    def consistent(self) -> bool:
        return self.is_haar == self.f_central == self.quotient_type


def known_subgroups(states, tol: float | None = None) -> list[QuantumSubgroup]:
    """Quantum subgroups built from every central pre-subgroup among ``states``."""
    from .presubgroups import quantum_subgroup_from_central

    out = []
    for st in states:
        f = PreSubgroup(st.f)
        if is_subgroup(f, tol):
            out.append(quantum_subgroup_from_central(f, tol))
    return out


def haar_equivalence_report(st: IdempotentState, subgroups: list[QuantumSubgroup],
                            tol: float = SUBSPACE_TOL) -> HaarEquivalenceReport:
    """Evaluate the three characterisations of Haar idempotents separately.

    Raises ``CoidalgebraError`` when they disagree.
    """
    qg = st.owner
    central = is_subgroup(PreSubgroup(st.f), max(config.get_tol(), 1e-9))
    witness = None
    for sub in subgroups:
        if sub.haar_idempotent().distance(st.phi) <= tol:
            witness = sub
            break
    C = coidalgebra_of(st, tol)
    quotient = False
    for sub in subgroups:
        Q = quotient_coidalgebra(sub, tol=tol, check_agreement=False)
        if subspace_distance(qg, Q.basis, C.basis) <= tol:
            quotient = True
            break
    report = HaarEquivalenceReport(witness is not None, central, quotient, witness)
    if not report.consistent:
        raise CoidalgebraError(
            f"Haar characterisations disagree: haar={report.is_haar}, "
            f"central={report.f_central}, quotient={report.quotient_type}")
    return report


def coidalgebra_roundtrip(st: IdempotentState, tol: float = SUBSPACE_TOL) -> float:
    """``|| eps o E_{C_phi} - phi ||`` where ``C_phi`` is the image of ``T_phi``."""
    C = coidalgebra_of(st, tol)
    return state_of_coidalgebra(C).distance(st.phi)


def idempotent_of_coidalgebra(C: Coidalgebra, tol: float | None = None) -> IdempotentState:
    return presubgroup_of(state_of_coidalgebra(C, tol), tol)
