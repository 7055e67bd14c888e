"""Functionals on a finite quantum group: convolution, states, idempotent
states, density elements and vector states.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from . import config, kernels
from .algebra import (
    AlgebraElement,
    AlgebraError,
    NotPositiveError,
    OwnerMismatch,
    haar_inner,
    is_positive,
    sqrt_positive,
)
from .hopf import QuantumGroup


class StateError(ValueError):
    pass


class Functional:
    """Linear functional given by its values on the basis."""

    __slots__ = ("owner", "values")

    def __init__(self, owner: QuantumGroup, values):
        values = np.array(values, dtype=complex)
        if values.shape != (owner.dim,):
            raise AlgebraError(f"functional needs {owner.dim} values, got {values.shape}")
        values.setflags(write=False)
        self.owner = owner
        self.values = values

    def __call__(self, a: AlgebraElement) -> complex:
        if a.algebra is not self.owner.algebra:
            raise OwnerMismatch("element and functional live on different algebras")
        return complex(self.values @ a.coords)

    def _check(self, other: Functional) -> None:
        if self.owner is not other.owner:
            raise OwnerMismatch("functionals live on different quantum groups")

    def __add__(self, other: Functional) -> Functional:
        self._check(other)
        return Functional(self.owner, self.values + other.values)

    def __sub__(self, other: Functional) -> Functional:
        self._check(other)
        return Functional(self.owner, self.values - other.values)

    def __mul__(self, scalar) -> Functional:
        return Functional(self.owner, self.values * scalar)

    __rmul__ = __mul__

    def __truediv__(self, scalar) -> Functional:
        return Functional(self.owner, self.values / scalar)

    def norm(self) -> float:
        return float(np.linalg.norm(self.values))

    def distance(self, other: Functional) -> float:
        self._check(other)
        return float(np.linalg.norm(self.values - other.values))

    def __repr__(self):
        vals = ", ".join(f"{v:.6g}" for v in self.values)
        return f"Functional([{vals}])"


def counit_functional(qg: QuantumGroup) -> Functional:
    return Functional(qg, qg.counit)


def haar_functional(qg: QuantumGroup) -> Functional:
    return Functional(qg, qg.haar)


def convolve(psi1: Functional, psi2: Functional) -> Functional:
    """``(psi1 (x) psi2) o Delta``."""
    psi1._check(psi2)
    qg = psi1.owner
    return Functional(qg, kernels.convolve(psi1.values, psi2.values, qg.cop))


def state_matrix(psi: Functional) -> np.ndarray:
    """``[psi(e_i^* e_j)]_{ij}``."""
    alg = psi.owner.algebra
    prods = np.einsum("ai,ajk->ijk", alg.star, alg.mult)
    return prods @ psi.values


def is_state(psi: Functional, tol: float | None = None) -> bool:
    tol = config.resolve(tol)
    alg = psi.owner.algebra
    if abs(psi.values @ alg.unit - 1) > tol:
        return False
    M = state_matrix(psi)
    if np.max(np.abs(M - M.conj().T)) > tol:
        return False
    return bool(np.linalg.eigvalsh((M + M.conj().T) / 2).min() >= -tol)


def idempotency_defect(psi: Functional) -> float:
    return convolve(psi, psi).distance(psi)


def is_idempotent_state(psi: Functional, tol: float | None = None) -> bool:
    tol = config.resolve(tol)
    return is_state(psi, tol) and idempotency_defect(psi) <= tol


def density_element(phi: Functional, tol: float | None = None) -> AlgebraElement:
    """The unique ``rho`` with ``phi(a) = <rho, a> = h(rho^* a)``; must be positive."""
    tol = config.resolve(tol)
    qg = phi.owner
    # phi_j = sum_i conj(rho_i) G[i, j]
    rho = qg.element(np.conj(np.linalg.solve(qg.gram.T, phi.values)))
    if not is_positive(rho, tol * max(1.0, float(np.linalg.norm(rho.coords)))):
        raise NotPositiveError("density element is not positive; the functional is not a state")
    return rho


def vector_state(u: AlgebraElement, v: AlgebraElement) -> Functional:
    """``a -> <u, a v> = h(u^* a v)``."""
    qg = u.owner
    alg = qg.algebra
    ustar = alg.adjoint_coords(u.coords)
    # h(u^* e_k v) for every k
    left = np.einsum("i,ikp->kp", ustar, alg.mult)      # u^* e_k
    full = np.einsum("kp,j,pjq->kq", left, v.coords, alg.mult)
    return Functional(qg, full @ qg.haar)


def shifted(g: Functional, b: AlgebraElement) -> Functional:
    """``g_b(a) = g(a b)``."""
    alg = g.owner.algebra
    prods = np.einsum("j,ijk->ik", b.coords, alg.mult)  # e_i b
    return Functional(g.owner, prods @ g.values)


def lemma_gb_check(f: Functional, g: Functional, b: AlgebraElement, tol: float | None = None) -> float:
    """Residual ``||f * g_b - g(b) f||`` for states with ``g * f = f * g = f``."""
    tol = config.resolve(tol)
    pre = max(convolve(g, f).distance(f), convolve(f, g).distance(f))
    if pre > tol:
        raise StateError(f"precondition g*f = f*g = f violated (defect {pre:.3e})")
    return convolve(f, shifted(g, b)).distance(g(b) * f)


def antipode_invariance_check(phi: Functional) -> float:
    return float(np.linalg.norm(phi.values @ phi.owner.antipode - phi.values))


def order_le(phi1: Functional, phi2: Functional, tol: float | None = None,
             check_idempotent: bool = True) -> bool:
    """``phi1 < phi2`` iff ``phi1 * phi2 = phi2``.

    The swapped product ``phi2 * phi1`` must give the same verdict; a
    mismatch is raised rather than silently resolved.
    """
    tol = config.resolve(tol)
    if check_idempotent:
        for phi in (phi1, phi2):
            if not is_idempotent_state(phi, tol):
                raise StateError("order_le requires idempotent states")
    forward = convolve(phi1, phi2).distance(phi2) <= tol
    swapped = convolve(phi2, phi1).distance(phi2) <= tol
    if forward != swapped:
        raise StateError("state order differs between the two product orders")
    return forward


@dataclass(frozen=True)
class IdempotentState:
    phi: Functional
    rho: AlgebraElement
    f: AlgebraElement
    p: AlgebraElement

    @property
    def owner(self) -> QuantumGroup:
        return self.phi.owner


def presubgroup_of(phi: Functional, tol: float | None = None) -> IdempotentState:
    """Density, pre-subgroup vector and group-like projection of an idempotent state.

    The pre-subgroup is computed twice, as the positive square root of the
    density and as ``rho / sqrt(eps(rho))``; the two must agree.
    """
    tol = config.resolve(tol)
    if not is_idempotent_state(phi, tol):
        raise StateError("not an idempotent state")
    qg = phi.owner
    rho = density_element(phi, tol)
    eps_rho = qg.counit_of(rho)
    if abs(eps_rho.imag) > tol or eps_rho.real <= tol:
        raise StateError(f"counit of the density is not positive ({eps_rho:.3e})")
    eps_rho = eps_rho.real
    scale = max(1.0, eps_rho)
    f_spectral = sqrt_positive(rho, tol * scale)
    f = rho / np.sqrt(eps_rho)
    gap = f.distance(f_spectral)
    if gap > tol * scale * 10:
        raise StateError(f"square-root and rescaling routes disagree by {gap:.3e}")
    return IdempotentState(phi=phi, rho=rho, f=f, p=rho / eps_rho)


def idempotent_invariants(st: IdempotentState) -> dict[str, float]:
    """Residuals of the defining identities of an idempotent-state record."""
    qg = st.owner
    rho, f, p = st.rho, st.f, st.p
    eps_rho = qg.counit_of(rho)
    ff = np.kron(f.coords, f.coords)
    omega = vector_state(f, f)
    return {
        "idempotent": idempotency_defect(st.phi),
        "density": float(np.linalg.norm(
            np.conj(rho.coords) @ qg.gram - st.phi.values)),
        "rho^2 = eps(rho) rho": (rho * rho).distance(eps_rho * rho),
        "<f,f> = 1": abs(haar_inner(f, f) - 1),
        "V(f(x)f) = f(x)f": float(np.linalg.norm(qg.V @ ff - ff)),
        "omega_ff = phi": omega.distance(st.phi),
        "omega_ff = eps(f)<f,.>": float(np.linalg.norm(
            omega.values - qg.counit_of(f) * (np.conj(f.coords) @ qg.gram))),
        "p projection": max((p * p).distance(p), p.distance(p.adjoint())),
    }


def cesaro_average(psi: Functional, max_iter: int = 10_000, tol: float = 1e-3):
    """Running mean of convolution powers; returns ``(mean, iterations, defect)``."""
    mean, iters, defect = kernels.cesaro(psi.values, psi.owner.cop, max_iter, tol)
    return Functional(psi.owner, mean), int(iters), float(defect)


def cesaro_idempotent(psi: Functional, max_iter: int = 10_000, tol: float | None = None,
                      search_tol: float = 1e-3) -> IdempotentState | None:
    """Idempotent state obtained as a limit of Cesaro means of ``psi``.

    The mean is iterated until its idempotency defect drops below
    ``search_tol``, then Newton-polished to an exact group-like projection and
    certified at ``tol``. Returns ``None`` on failure.
    """
    from .presubgroups import grouplike_from_candidate, idempotent_from_grouplike

    tol = config.resolve(tol)
    if not is_state(psi, max(tol, 1e-8)):
        raise StateError("Cesaro averaging needs a state")
    if is_idempotent_state(psi, tol):
        return presubgroup_of(psi, tol)
    mean, _, defect = cesaro_average(psi, max_iter, search_tol)
    if defect > search_tol:
        return None
    try:
        rho = density_element(mean, 1e-6)
    except NotPositiveError:
        return None
    eps_rho = mean.owner.counit_of(rho).real
    if eps_rho <= 1e-6:
        return None
    p = grouplike_from_candidate(rho.coords / eps_rho, mean.owner, tol)
    if p is None:
        return None
    return idempotent_from_grouplike(p, tol)
