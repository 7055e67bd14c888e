"""Finite quantum groups: coproduct, counit, Haar data, antipode and the
multiplicative unitary, with full axiom validation.

The coproduct is stored as an ``n^2 x n`` matrix whose column ``i`` is
``Delta(e_i)`` in the basis ``e_j (x) e_k`` (index ``j*n + k``). The GNS space
of the Haar state is identified with the algebra itself, so the
multiplicative unitary is a plain ``n^2 x n^2`` matrix acting on tensor
coordinates.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from . import config, kernels
from .algebra import AlgebraData, AlgebraElement, TensorElement, _frozen


class AxiomError(ValueError):
    """A candidate quantum group failed validation; carries the report."""

    def __init__(self, report: ValidationReport):
        self.report = report
        super().__init__("quantum group axioms failed: " + ", ".join(report.failures()))


@dataclass
class Check:
    name: str
    residual: float
    passed: bool
    detail: str = ""


@dataclass
class ValidationReport:
    checks: dict[str, Check] = field(default_factory=dict)

    def add(self, name: str, residual: float, tol: float, detail: str = "") -> Check:
        residual = float(residual)
        chk = Check(name, residual, bool(np.isfinite(residual) and residual <= tol), detail)
        self.checks[name] = chk
        return chk

    def fail(self, name: str, detail: str) -> Check:
        chk = Check(name, float("inf"), False, detail)
        self.checks[name] = chk
        return chk

    @property
    def ok(self) -> bool:
        return all(c.passed for c in self.checks.values())

    def failures(self) -> list[str]:
        return [c.name for c in self.checks.values() if not c.passed]

    def max_residual(self) -> float:
        return max((c.residual for c in self.checks.values()), default=0.0)

    def format(self) -> str:
        lines = []
        for c in self.checks.values():
            status = "PASS" if c.passed else "FAIL"
            extra = f"  ({c.detail})" if c.detail else ""
            lines.append(f"{status}  {c.name:<32} {c.residual:.3e}{extra}")
        return "\n".join(lines)


def _null_space(M: np.ndarray, tol: float) -> np.ndarray:
    """Orthonormal basis (columns) of the numerical kernel of ``M``."""
    if M.shape[0] == 0:
        return np.eye(M.shape[1], dtype=complex)
    _, s, vh = np.linalg.svd(M)
    scale = max(1.0, s[0] if s.size else 1.0)
    rank = int(np.sum(s > tol * scale))
    return vh[rank:].conj().T


def _rank(M: np.ndarray, tol: float) -> int:
    s = np.linalg.svd(M, compute_uv=False)
    scale = max(1.0, s[0] if s.size else 1.0)
    return int(np.sum(s > tol * scale))


# solvers on raw data ------------------------------------------------------
# Each takes the algebra, the coproduct as a rank-3 array cop[j, k, i] and
# returns numpy arrays; QuantumGroup wraps them.


def _derive_counit(alg: AlgebraData, cop: np.ndarray) -> np.ndarray:
    # (eps (x) id) Delta(e_i) = e_i:  sum_j cop[j, k, i] eps_j = delta_ik
    n = alg.dim
    M = np.transpose(cop, (2, 1, 0)).reshape(n * n, n)
    rhs = np.eye(n, dtype=complex).reshape(n * n)
    eps, *_ = np.linalg.lstsq(M, rhs, rcond=None)
    return eps


def _haar_system(alg: AlgebraData, cop: np.ndarray) -> tuple[np.ndarray, np.ndarray]:
    n = alg.dim
    u = alg.unit
    eye = np.eye(n)
    # (id (x) h) Delta(e_i) - h_i 1 = 0, row (i, j): sum_k cop[j,k,i] h_k - u_j h_i
    right = np.transpose(cop, (2, 0, 1)) - np.einsum("j,ik->ijk", u, eye)
    # (h (x) id) Delta(e_i) - h_i 1 = 0, row (i, k): sum_j cop[j,k,i] h_j - u_k h_i
    left = np.transpose(cop, (2, 1, 0)) - np.einsum("k,ij->ikj", u, eye)
    hom = np.vstack([right.reshape(n * n, n), left.reshape(n * n, n)])
    return hom, u


def _solve_haar(alg: AlgebraData, cop: np.ndarray, tol: float) -> np.ndarray:
    hom, u = _haar_system(alg, cop)
    kernel = _null_space(hom, tol)
    if kernel.shape[1] != 1:
        raise ValueError(f"invariance system has a {kernel.shape[1]}-dimensional solution space")
    system = np.vstack([hom, u[None, :]])
    rhs = np.zeros(system.shape[0], complex)
    rhs[-1] = 1.0
    h, *_ = np.linalg.lstsq(system, rhs, rcond=None)
    return h


def _gram(alg: AlgebraData, h: np.ndarray) -> np.ndarray:
    # G[i, j] = h(e_i^* e_j)
    prods = np.einsum("ai,ajk->ijk", alg.star, alg.mult)
    return prods @ h


def _solve_haar_element(alg: AlgebraData, eps: np.ndarray, tol: float) -> np.ndarray:
    n = alg.dim
    eye = np.eye(n)
    blocks = []
    for i in range(n):
        e = alg.basis_vector(i)
        blocks.append(alg.right_matrix(e) - eps[i] * eye)  # eta e_i
        blocks.append(alg.left_matrix(e) - eps[i] * eye)   # e_i eta
    kernel = _null_space(np.vstack(blocks), tol)
    if kernel.shape[1] != 1:
        raise ValueError(f"Haar element solution space has dimension {kernel.shape[1]}")
    eta = kernel[:, 0]
    norm = eps @ eta
    if abs(norm) <= tol:
        raise ValueError("Haar element candidate has vanishing counit")
    return eta / norm


def _solve_antipode(alg: AlgebraData, cop: np.ndarray, eps: np.ndarray, tol: float) -> np.ndarray:
    n = alg.dim
    m = alg.mult
    # unknown S[l, j] = coefficient of e_l in S(e_j), flattened row-major
    # m (S (x) id) Delta(e_i) = sum_{j,k,l} cop[j,k,i] S[l,j] m[l,k,p]
    K1 = np.einsum("jki,lkp->iplj", cop, m).reshape(n * n, n * n)
    # m (id (x) S) Delta(e_i) = sum_{j,k,l} cop[j,k,i] S[l,k] m[j,l,p]
    K2 = np.einsum("jki,jlp->iplk", cop, m).reshape(n * n, n * n)
    rhs = np.einsum("i,p->ip", eps, alg.unit).reshape(n * n)
    system = np.vstack([K1, K2])
    if _rank(system, tol) != n * n:
        raise ValueError("antipode equations do not determine a unique map")
    sol, *_ = np.linalg.lstsq(system, np.concatenate([rhs, rhs]), rcond=None)
    return sol.reshape(n, n)


def _mult_unitary(alg: AlgebraData, cop: np.ndarray) -> np.ndarray:
    # V(e_a (x) e_b) = Delta(e_a)(1 (x) e_b) = sum cop[j,k,a] m[k,b,l] e_j (x) e_l
    n = alg.dim
    return np.einsum("jka,kbl->jlab", cop, alg.mult).reshape(n * n, n * n)


def _left_cancellation(alg: AlgebraData, cop: np.ndarray) -> np.ndarray:
    # Delta(e_b)(e_a (x) 1) = sum cop[j,k,b] m[j,a,p] e_p (x) e_k
    n = alg.dim
    return np.einsum("jkb,jap->pkba", cop, alg.mult).reshape(n * n, n * n)


def pentagon_residual(V: np.ndarray, n: int) -> float:
    eye = np.eye(n)
    V12 = np.kron(V, eye)
    V23 = np.kron(eye, V)
    perm = np.arange(n ** 3).reshape(n, n, n).transpose(0, 2, 1).reshape(-1)
    V13 = V12[np.ix_(perm, perm)]
    return float(np.max(np.abs(V12 @ V13 @ V23 - V23 @ V12)))


def validate(alg: AlgebraData, coproduct, counit=None, tol: float | None = None):
    """Check every finite quantum group axiom on raw data.

    Returns ``(report, cache)``; ``cache`` holds whatever derived data could
    be computed (counit, haar, gram, eta, antipode, V) and is only
    trustworthy when ``report.ok``.
    """
    tol = config.resolve(tol)
    report = ValidationReport()
    cache: dict[str, np.ndarray] = {}
    n = alg.dim
    D = np.array(coproduct, dtype=complex)
    if D.shape != (n * n, n):
        report.fail("coproduct shape", f"expected ({n * n}, {n}), got {D.shape}")
        return report, cache
    cop = D.reshape(n, n, n)
    eye_n = np.eye(n)

    report.add("associativity", alg.associativity_residual(), tol)
    report.add("unit", alg.unit_residual(), tol)
    report.add("star involutive", alg.star_involution_residual(), tol)
    report.add("star anti-multiplicative", alg.star_antimultiplicative_residual(), tol)

    # Delta is a unital *-homomorphism
    report.add("coproduct unital", np.max(np.abs(D @ alg.unit - np.kron(alg.unit, alg.unit))), tol)
    m = alg.mult
    lhs = np.einsum("ijp,xp->ijx", m, D)
    rhs = np.einsum("abi,cdj,acp,bdq->ijpq", cop, cop, m, m).reshape(n, n, n * n)
    report.add("coproduct multiplicative", np.max(np.abs(lhs - rhs)), tol)
    star2 = np.kron(alg.star, alg.star)
    report.add("coproduct *-preserving",
               np.max(np.abs(D @ alg.star - star2 @ np.conj(D))), tol)

    coassoc_l = np.einsum("jki,abj->abki", cop, cop)  # (Delta (x) id) Delta
    coassoc_r = np.einsum("jki,bck->jbci", cop, cop)  # (id (x) Delta) Delta
    report.add("coassociativity", np.max(np.abs(coassoc_l - coassoc_r)), tol)

    V = _mult_unitary(alg, cop)
    W = _left_cancellation(alg, cop)
    rank_v, rank_w = _rank(V, tol), _rank(W, tol)
    report.add("cancellation Delta(b)(1(x)a)", float(n * n - rank_v), 0.5, f"rank {rank_v}/{n * n}")
    report.add("cancellation Delta(b)(a(x)1)", float(n * n - rank_w), 0.5, f"rank {rank_w}/{n * n}")

    derived = _derive_counit(alg, cop)
    if counit is None:
        eps = derived
    else:
        eps = np.array(counit, dtype=complex)
        if eps.shape != (n,):
            report.fail("counit", f"counit must have length {n}")
            return report, cache
        report.add("counit supplied = derived", np.max(np.abs(eps - derived)), tol)
    cache["counit"] = eps
    left_law = np.einsum("j,jki->ki", eps, cop)
    right_law = np.einsum("k,jki->ji", eps, cop)
    report.add("counit law", max(np.max(np.abs(left_law - eye_n)), np.max(np.abs(right_law - eye_n))), tol)
    char = np.max(np.abs(m @ eps - np.outer(eps, eps)))
    char = max(char, abs(eps @ alg.unit - 1), np.max(np.abs(eps @ alg.star - np.conj(eps))))
    report.add("counit is a character", char, tol)

    try:
        h = _solve_haar(alg, cop, tol)
    except ValueError as exc:
        report.fail("Haar state", str(exc))
        return report, cache
    cache["haar"] = h
    hom, _ = _haar_system(alg, cop)
    report.add("Haar bi-invariance", np.max(np.abs(hom @ h)), tol)
    report.add("Haar normalised", abs(h @ alg.unit - 1), tol)
    gram = _gram(alg, h)
    cache["gram"] = gram
    herm = np.max(np.abs(gram - gram.conj().T))
    evals = np.linalg.eigvalsh((gram + gram.conj().T) / 2)
    report.add("Gram Hermitian", herm, tol)
    min_eig = float(evals.min())
    report.add("Haar faithful state", 0.0 if min_eig > 1e-12 else 1.0, tol, f"min Gram eigenvalue {min_eig:.3e}")
    trace = np.max(np.abs((m - np.transpose(m, (1, 0, 2))) @ h))
    report.add("Haar trace", trace, tol)

    try:
        eta = _solve_haar_element(alg, eps, tol)
    except ValueError as exc:
        report.fail("Haar element", str(exc))
        return report, cache
    cache["eta"] = eta
    eta_sq = alg.product(eta, eta)
    proj = max(np.max(np.abs(eta_sq - eta)), np.max(np.abs(alg.adjoint_coords(eta) - eta)))
    report.add("Haar element projection", proj, tol)
    absorb = max(
        np.max(np.abs(alg.right_matrix(eta) - np.outer(eta, eps))),
        np.max(np.abs(alg.left_matrix(eta) - np.outer(eta, eps))),
    )
    report.add("Haar element absorbs", absorb, tol)

    try:
        S = _solve_antipode(alg, cop, eps, tol)
    except ValueError as exc:
        report.fail("antipode", str(exc))
        return report, cache
    cache["antipode"] = S
    anti = np.max(np.abs(np.einsum("kp,ijp->kij", S, m) - np.einsum("aj,bi,abk->kij", S, S, m)))
    report.add("antipode anti-multiplicative", anti, tol)
    report.add("Haar antipode-invariant", np.max(np.abs(h @ S - h)), tol)
    report.add("counit antipode-invariant", np.max(np.abs(eps @ S - eps)), tol)

    cache["V"] = V
    GG = np.kron(gram, gram)
    iso = np.max(np.abs(V.conj().T @ GG @ V - GG))
    vstar = np.linalg.solve(GG, V.conj().T @ GG)
    coiso = np.max(np.abs(V @ vstar - np.eye(n * n)))
    report.add("V unitary", max(iso, coiso), tol)
    report.add("pentagon", pentagon_residual(V, n), tol)
    return report, cache


class QuantumGroup:
    """A validated finite quantum group with cached Haar data.

    Construction runs :func:`validate` and raises :class:`AxiomError` unless
    every axiom holds. Instances are immutable afterwards.
    """

    def __init__(self, algebra: AlgebraData, coproduct, counit=None, *, name: str = "",
                 metadata: dict | None = None, tol: float | None = None):
        report, cache = validate(algebra, coproduct, counit, tol)
        if not report.ok:
            raise AxiomError(report)
        n = algebra.dim
        self.algebra = algebra
        self.dim = n
        self.name = name
        self.metadata = dict(metadata or {})
        self.report = report
        self.coproduct = _frozen(coproduct)
        self.cop = _frozen(self.coproduct.reshape(n, n, n))
        self.counit = _frozen(cache["counit"])
        self.haar = _frozen(cache["haar"])
        self.gram = _frozen(cache["gram"])
        self.eta = _frozen(cache["eta"])
        self.antipode = _frozen(cache["antipode"])
        self.V = _frozen(cache["V"])
        self._gram_inv = _frozen(np.linalg.inv(self.gram))

    def __repr__(self):
        return f"QuantumGroup({self.name or 'unnamed'}, dim={self.dim})"

    # element helpers
    def element(self, coords) -> AlgebraElement:
        return AlgebraElement(self, coords)

    def basis(self, i: int) -> AlgebraElement:
        return AlgebraElement(self, self.algebra.basis_vector(i))

    def one(self) -> AlgebraElement:
        return AlgebraElement(self, self.algebra.unit)

    def label_index(self, label: str) -> int:
        return self.algebra.labels.index(label)

    def is_commutative(self, tol: float | None = None) -> bool:
        m = self.algebra.mult
        return bool(np.max(np.abs(m - np.transpose(m, (1, 0, 2)))) <= config.resolve(tol))

    def is_cocommutative(self, tol: float | None = None) -> bool:
        return bool(np.max(np.abs(self.cop - np.transpose(self.cop, (1, 0, 2)))) <= config.resolve(tol))

    # linear maps
    def counit_of(self, a: AlgebraElement) -> complex:
        return complex(self.counit @ a.coords)

    def haar_of(self, a: AlgebraElement) -> complex:
        return complex(self.haar @ a.coords)

    def haar_element(self) -> AlgebraElement:
        return self.element(self.eta)

    def apply_antipode(self, a: AlgebraElement) -> AlgebraElement:
        return self.element(self.antipode @ a.coords)

    def tensor_product(self, x: np.ndarray, y: np.ndarray) -> np.ndarray:
        """Product in A (x) A of two tensor coordinate vectors."""
        n = self.dim
        m = self.algebra.mult
        X, Y = x.reshape(n, n), y.reshape(n, n)
        return np.einsum("ij,kl,ikp,jlq->pq", X, Y, m, m).reshape(n * n)

    def gram_adjoint(self, M: np.ndarray) -> np.ndarray:
        """Adjoint of an operator on A with respect to the Haar inner product."""
        return self._gram_inv @ M.conj().T @ self.gram

    def convolve_values(self, psi1: np.ndarray, psi2: np.ndarray) -> np.ndarray:
        return kernels.convolve(psi1, psi2, self.cop)


def coproduct_apply(a: AlgebraElement) -> TensorElement:
    qg = a.owner
    return TensorElement(qg, qg.coproduct @ a.coords)


def solve_haar_state(qg: QuantumGroup):
    from .states import Functional
    return Functional(qg, qg.haar)


def solve_haar_element(qg: QuantumGroup) -> AlgebraElement:
    return qg.haar_element()


def solve_antipode(qg: QuantumGroup) -> np.ndarray:
    return np.array(qg.antipode)


def multiplicative_unitary(qg: QuantumGroup) -> np.ndarray:
    return np.array(qg.V)


def validate_group(qg: QuantumGroup, tol: float | None = None) -> ValidationReport:
    """Re-run the axiom suite on an existing quantum group."""
    report, _ = validate(qg.algebra, qg.coproduct, qg.counit, tol)
    return report
