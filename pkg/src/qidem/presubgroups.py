"""Pre-subgroups, group-like projections, quantum subgroups and the search
for idempotent states.

A pre-subgroup is a unit vector ``f`` with ``eps(f) > 0`` and
``V(f (x) f) = f (x) f``; rescaling by ``eps(f)`` turns it into a group-like
projection ``p`` (``p^2 = p = p^*``, ``Delta(p)(1 (x) p) = p (x) p``), and
``f -> omega_{f,f}`` maps it to an idempotent state.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np
import scipy.linalg

from . import config, kernels
from .algebra import AlgebraData, AlgebraElement, _frozen, haar_inner, is_central
from .hopf import QuantumGroup
from .states import (
    Functional,
    IdempotentState,
    StateError,
    counit_functional,
    haar_functional,
    is_idempotent_state,
    is_state,
    order_le,
    presubgroup_of,
    vector_state,
)


class CertificationError(ValueError):
    pass


@dataclass(frozen=True)
class PreSubgroup:
    f: AlgebraElement

    @property
    def owner(self) -> QuantumGroup:
        return self.f.owner


@dataclass(frozen=True)
class GroupLikeProjection:
    p: AlgebraElement

    @property
    def owner(self) -> QuantumGroup:
        return self.p.owner


def _fixed_by_V(qg: QuantumGroup, x: np.ndarray, y: np.ndarray) -> float:
    xy = np.kron(x, y)
    return float(np.linalg.norm(qg.V @ xy - xy))


def presubgroup_residuals(f: AlgebraElement) -> dict[str, float]:
    qg = f.owner
    eps = qg.counit_of(f)
    return {
        "unit vector": abs(haar_inner(f, f) - 1),
        "eps(f) > 0": max(abs(eps.imag), -eps.real),
        "V(f(x)f) = f(x)f": _fixed_by_V(qg, f.coords, f.coords),
    }


def is_presubgroup(f: AlgebraElement, tol: float | None = None) -> bool:
    tol = config.resolve(tol)
    res = presubgroup_residuals(f)
    eps = f.owner.counit_of(f)
    return (res["unit vector"] <= tol and abs(eps.imag) <= tol and eps.real > tol
            and res["V(f(x)f) = f(x)f"] <= tol)


def is_grouplike_projection(p: AlgebraElement, tol: float | None = None) -> bool:
    tol = config.resolve(tol)
    if np.linalg.norm(p.coords) <= tol:
        return False
    if (p * p).distance(p) > tol or p.distance(p.adjoint()) > tol:
        return False
    return _fixed_by_V(p.owner, p.coords, p.coords) <= tol


def to_grouplike(f: PreSubgroup | AlgebraElement, tol: float | None = None) -> GroupLikeProjection:
    tol = config.resolve(tol)
    f = f.f if isinstance(f, PreSubgroup) else f
    eps = f.owner.counit_of(f).real
    if eps <= tol:
        raise CertificationError("pre-subgroup has non-positive counit")
    p = f / eps
    if not is_grouplike_projection(p, tol):
        raise CertificationError("f / eps(f) is not a group-like projection")
    return GroupLikeProjection(p)


def to_presubgroup(p: GroupLikeProjection | AlgebraElement, tol: float | None = None) -> PreSubgroup:
    tol = config.resolve(tol)
    p = p.p if isinstance(p, GroupLikeProjection) else p
    hp = p.owner.haar_of(p).real
    if hp <= tol:
        raise CertificationError(f"h(p) = {hp:.3e} vanishes for a non-zero projection")
    f = p / np.sqrt(hp)
    if not is_presubgroup(f, tol):
        raise CertificationError("p / sqrt(h(p)) is not a pre-subgroup")
    return PreSubgroup(f)


def bbs_order(g: PreSubgroup, f: PreSubgroup, tol: float | None = None) -> bool:
    """``g < f`` iff ``V(f (x) g) = f (x) g``."""
    return _fixed_by_V(f.owner, f.f.coords, g.f.coords) <= config.resolve(tol)


def state_of_presubgroup(f: PreSubgroup, tol: float | None = None) -> Functional:
    """``omega_{f,f}``; checks it is idempotent and maps back to ``f``."""
    tol = config.resolve(tol)
    phi = vector_state(f.f, f.f)
    back = presubgroup_of(phi, tol)
    if back.f.distance(f.f) > tol * 10:
        raise CertificationError("omega_{f,f} does not map back to f")
    return phi


def is_subgroup(f: PreSubgroup, tol: float | None = None) -> bool:
    return is_central(f.f, tol)


# quantum subgroups ---------------------------------------------------------


@dataclass(frozen=True)
class QuantumSubgroup:
    parent: QuantumGroup
    target: QuantumGroup
    pi: np.ndarray
    source_f: AlgebraElement | None = None

    def apply(self, a: AlgebraElement) -> AlgebraElement:
        return self.target.element(self.pi @ a.coords)

    def haar_idempotent(self) -> Functional:
        """``h_B o pi``."""
        return Functional(self.parent, self.target.haar @ self.pi)

    def morphism_residuals(self) -> dict[str, float]:
        A, B, P = self.parent, self.target, self.pi
        n, d = A.dim, B.dim
        s = np.linalg.svd(P, compute_uv=False)
        mult = np.max(np.abs(
            np.einsum("ijk,lk->ijl", A.algebra.mult, P)
            - np.einsum("ai,bj,abl->ijl", P, P, B.algebra.mult)))
        star = np.max(np.abs(P @ A.algebra.star - B.algebra.star @ np.conj(P)))
        unital = np.max(np.abs(P @ A.algebra.unit - B.algebra.unit))
        cop = np.max(np.abs(B.coproduct @ P - np.kron(P, P) @ A.coproduct))
        return {
            "surjective": 0.0 if np.sum(s > 1e-9 * max(1.0, s[0])) == d else 1.0,
            "multiplicative": float(mult),
            "*-preserving": float(star),
            "unital": float(unital),
            "Delta_B pi = (pi (x) pi) Delta": float(cop),
        }


def quantum_subgroup_from_central(f: PreSubgroup, tol: float | None = None) -> QuantumSubgroup:
    """Quantum subgroup ``A f~`` cut out by a central pre-subgroup ``f``.

    ``f~ = f / eps(f)``; the coproduct is ``a -> Delta(a)(f~ (x) f~)`` and the
    restriction map is ``a -> a f~``. The basis of ``A f~`` is chosen among
    the products ``e_i f~`` by pivoted QR.
    """
    tol = config.resolve(tol)
    qg = f.owner
    if not is_central(f.f, tol):
        raise CertificationError("pre-subgroup is not central")
    alg = qg.algebra
    ftil = f.f.coords / qg.counit_of(f.f).real
    R = alg.right_matrix(ftil)  # column i = e_i f~
    _, diag, piv = scipy.linalg.qr(R, pivoting=True)
    d = np.abs(np.diag(diag))
    rank = int(np.sum(d > 1e-9 * max(1.0, d[0])))
    idx = np.sort(piv[:rank])
    Q = R[:, idx]
    Qp = np.linalg.pinv(Q)
    mult = np.empty((rank, rank, rank), complex)
    for a in range(rank):
        for b in range(rank):
            mult[a, b] = Qp @ alg.product(Q[:, a], Q[:, b])
    star = Qp @ (alg.star @ np.conj(Q))
    unit = Qp @ ftil
    labels = [f"{alg.labels[i]}*p" for i in idx]
    sub_alg = AlgebraData(mult, star, unit, labels)
    R2 = np.kron(R, R)
    cop = np.kron(Qp, Qp) @ R2 @ qg.coproduct @ Q
    counit = qg.counit @ Q
    name = f"{qg.name}/sub{rank}" if qg.name else ""
    target = QuantumGroup(sub_alg, cop, counit, name=name, tol=max(tol, 1e-9))
    sub = QuantumSubgroup(parent=qg, target=target, pi=_frozen(Qp @ R), source_f=f.f)
    bad = {k: v for k, v in sub.morphism_residuals().items() if v > max(tol, 1e-9)}
    if bad:
        raise CertificationError(f"restriction map is not a quantum group morphism: {bad}")
    return sub


# Gauss-Newton on the group-like equations ---------------------------------


def gauss_newton(p0: np.ndarray, qg: QuantumGroup, max_iter: int = 200,
                 stop: float = 1e-14) -> tuple[np.ndarray, float]:
    """Least-squares solve of ``p^2 = p``, ``p = p^*``, ``V(p (x) p) = p (x) p``.

    Real-ified unknown ``(Re p, Im p)``; full Gauss-Newton steps, halved while
    the residual norm increases. Returns ``(p, residual_norm)``.
    """
    alg = qg.algebra
    n = qg.dim
    x = np.concatenate([np.real(p0), np.imag(p0)]).astype(float)

    def evaluate(x):
        r, J = kernels.grouplike_system(x[:n] + 1j * x[n:], alg.mult, alg.star, qg.V)
        rr = np.concatenate([r.real, r.imag])
        return rr, J, float(np.linalg.norm(rr))

    rr, J, cost = evaluate(x)
    for _ in range(max_iter):
        if cost <= stop:
            break
        step, *_ = np.linalg.lstsq(J, -rr, rcond=None)
        t = 1.0
        while True:
            trial = x + t * step
            rr_t, J_t, cost_t = evaluate(trial)
            if cost_t < cost or t < 1e-3:
                break
            t *= 0.5
        if cost_t >= cost:
            break
        x, rr, J, cost = trial, rr_t, J_t, cost_t
    return x[:n] + 1j * x[n:], cost


def grouplike_from_candidate(p0: np.ndarray, qg: QuantumGroup,
                             tol: float | None = None) -> AlgebraElement | None:
    """Polish an approximate group-like projection; ``None`` if it is not one."""
    tol = config.resolve(tol)
    p, _ = gauss_newton(np.asarray(p0, complex), qg)
    cand = qg.element(p)
    if np.linalg.norm(p) < 1e-6 or not is_grouplike_projection(cand, tol):
        return None
    return cand


def idempotent_from_grouplike(p: AlgebraElement, tol: float | None = None) -> IdempotentState:
    tol = config.resolve(tol)
    f = to_presubgroup(GroupLikeProjection(p), tol)
    phi = state_of_presubgroup(f, tol)
    return presubgroup_of(phi, tol)


def _random_projection(qg: QuantumGroup, rng: np.random.Generator) -> np.ndarray:
    """Spectral projection of a random self-adjoint element onto a random
    union of eigenvalue clusters."""
    alg = qg.algebra
    n = qg.dim
    b = rng.normal(size=n) + 1j * rng.normal(size=n)
    a = b + alg.adjoint_coords(b)
    chol = np.linalg.cholesky(qg.gram)
    ch = chol.conj().T
    M = ch @ alg.left_matrix(a) @ np.linalg.inv(ch)
    w, U = np.linalg.eigh((M + M.conj().T) / 2)
    clusters = np.concatenate([[0], np.cumsum(np.diff(w) > 1e-6)])
    keep = rng.random(clusters[-1] + 1) < 0.5
    mask = keep[clusters]
    Pm = U[:, mask] @ U[:, mask].conj().T
    PL = np.linalg.solve(ch, Pm @ ch)
    return PL @ alg.unit


@dataclass
class SearchResult:
    """Idempotent states found by :func:`search_idempotents`.

    The search is heuristic; ``exhaustive`` is always ``False`` here and only
    an external oracle can certify completeness.
    """

    states: list[IdempotentState]
    exhaustive: bool = False
    stats: dict = field(default_factory=dict)

    def __iter__(self):
        return iter(self.states)

    def __len__(self):
        return len(self.states)

    def __getitem__(self, i):
        return self.states[i]


def _sort_states(states: list[IdempotentState], tol: float) -> list[IdempotentState]:
    below = []
    for s in states:
        count = sum(order_le(t.phi, s.phi, tol, check_idempotent=False) for t in states)
        below.append(count)

    def key(i):
        p = states[i].p.coords
        return (below[i], tuple(np.round(np.concatenate([p.real, p.imag]), 9)))

    return [states[i] for i in sorted(range(len(states)), key=key)]


def search_idempotents(qg: QuantumGroup, seeds: int = 64, rng_seed: int = 0,
                       tol: float | None = None, dedup_tol: float = config.SEARCH_DEDUP_TOL,
                       cesaro_iter: int = 10_000, close: bool = True) -> SearchResult:
    """Collect certified idempotent states from several heuristics.

    Sources: the counit and the Haar state; Cesaro limits of basis-point
    vector states and of ``seeds`` random vector states; Gauss-Newton on the
    group-like equations from ``2 * seeds`` random starts (half perturbed
    random projections, half self-adjoint Gaussians centred at ``1/2``). Every hit is certified as a
    group-like projection and deduplicated on ``p``. With ``close`` the set is
    then closed under meet and join, computed on the coidalgebra side.
    """
    from .states import cesaro_idempotent

    tol = config.resolve(tol)
    rng = np.random.default_rng(rng_seed)
    n = qg.dim
    found: list[IdempotentState] = []
    stats = {"cesaro": 0, "gauss_newton": 0, "rejected": 0}

    def add(st: IdempotentState | None, source: str) -> None:
        if st is None:
            stats["rejected"] += 1
            return
        for old in found:
            if old.p.distance(st.p) <= dedup_tol:
                return
        found.append(st)
        stats[source] = stats.get(source, 0) + 1

    add(presubgroup_of(counit_functional(qg), tol), "fixed")
    add(presubgroup_of(haar_functional(qg), tol), "fixed")

    starts = []
    for i in range(n):
        u = qg.basis(i)
        starts.append(u / np.sqrt(haar_inner(u, u).real))
    for _ in range(seeds):
        v = qg.element(rng.normal(size=n) + 1j * rng.normal(size=n))
        starts.append(v / np.sqrt(haar_inner(v, v).real))
    for u in starts:
        psi = vector_state(u, u)
        if not is_state(psi, 1e-8):
            continue
        try:
            add(cesaro_idempotent(psi, cesaro_iter, tol), "cesaro")
        except (StateError, CertificationError, ValueError):
            stats["rejected"] += 1

    for k in range(2 * seeds):
        if k % 2 == 0:
            p0 = _random_projection(qg, rng) + 0.3 * rng.normal(size=n)
        else:
            b = rng.normal(size=n) + 1j * rng.normal(size=n)
            p0 = 0.5 * qg.algebra.unit + 0.5 * (b + qg.algebra.adjoint_coords(b))
        p = grouplike_from_candidate(p0, qg, tol)
        if p is None:
            stats["rejected"] += 1
            continue
        if any(old.p.distance(p) <= dedup_tol for old in found):
            continue  # known already; skip the certification cost
        try:
            add(idempotent_from_grouplike(p, tol), "gauss_newton")
        except (StateError, CertificationError, ValueError):
            stats["rejected"] += 1

    if close:
        from .lattice import closure

        before = len(found)
        found = closure(found, tol)
        stats["lattice_closure"] = len(found) - before

    for st in found:
        if not is_idempotent_state(st.phi, tol):
            raise CertificationError("search produced a non-idempotent state")
    return SearchResult(_sort_states(found, tol), exhaustive=False, stats=stats)
