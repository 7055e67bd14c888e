"""Finite-dimensional *-algebras from structure constants.

Elements are plain coordinate vectors in a fixed basis ``e_0 .. e_{n-1}``.
Conventions:

* ``mult[i, j, k]`` is the coefficient of ``e_k`` in ``e_i e_j``;
* column ``i`` of ``star`` holds the coordinates of ``e_i^*``, so
  ``adjoint(x) = star @ conj(x)``;
* ``unit`` holds the coordinates of the identity.

Positivity and square roots are computed in the left regular
representation, which is faithful for every algebra handled here.
"""

from __future__ import annotations

from typing import Sequence

import numpy as np

from . import config, kernels


class AlgebraError(ValueError):
    pass


class OwnerMismatch(AlgebraError):
    pass


class NotPositiveError(AlgebraError):
    pass


class HaarUnavailable(AlgebraError):
    """Raised when an inner product is requested before the Haar state exists."""


def _frozen(arr) -> np.ndarray:
    out = np.array(arr, dtype=complex)
    out.setflags(write=False)
    return out


class AlgebraData:
    """Structure constants of a unital *-algebra. Immutable."""

    def __init__(self, mult, star, unit, labels: Sequence[str] | None = None):
        mult = _frozen(mult)
        if mult.ndim != 3 or not (mult.shape[0] == mult.shape[1] == mult.shape[2]):
            raise AlgebraError(f"mult must have shape (n, n, n), got {mult.shape}")
        n = mult.shape[0]
        if n < 1:
            raise AlgebraError("dimension must be positive")
        star = _frozen(star)
        unit = _frozen(unit)
        if star.shape != (n, n):
            raise AlgebraError(f"star must have shape ({n}, {n}), got {star.shape}")
        if unit.shape != (n,):
            raise AlgebraError(f"unit must have shape ({n},), got {unit.shape}")
        if labels is None:
            labels = [f"e{i}" for i in range(n)]
        labels = tuple(str(s) for s in labels)
        if len(labels) != n:
            raise AlgebraError(f"expected {n} basis labels, got {len(labels)}")
        self.dim = n
        self.mult = mult
        self.star = star
        self.unit = unit
        self.labels = labels
        # L_a = lmap @ a, R_a = rmap @ a
        self._lmap = _frozen(np.transpose(mult, (2, 1, 0)))
        self._rmap = _frozen(np.transpose(mult, (2, 0, 1)))
        self._reg_gram = None

    @property
    def algebra(self) -> AlgebraData:
        return self

    def __repr__(self):
        return f"AlgebraData(dim={self.dim})"

    # raw coordinate operations -------------------------------------------

    def product(self, x, y) -> np.ndarray:
        return kernels.multiply(np.asarray(x, complex), np.asarray(y, complex), self.mult)

    def adjoint_coords(self, x) -> np.ndarray:
        return self.star @ np.conj(np.asarray(x, complex))

    def left_matrix(self, x) -> np.ndarray:
        return self._lmap @ np.asarray(x, complex)

    def right_matrix(self, x) -> np.ndarray:
        return self._rmap @ np.asarray(x, complex)

    def basis_vector(self, i: int) -> np.ndarray:
        v = np.zeros(self.dim, complex)
        v[i] = 1.0
        return v

    def element(self, coords) -> AlgebraElement:
        return AlgebraElement(self, coords)

    def basis(self, i: int) -> AlgebraElement:
        return AlgebraElement(self, self.basis_vector(i))

    def one(self) -> AlgebraElement:
        return AlgebraElement(self, self.unit)

    def regular_trace_gram(self) -> np.ndarray:
        """Gram matrix of the faithful trace ``a -> Tr(L_a)``.

        Used as an inner product only when no Haar state is attached.
        """
        if self._reg_gram is None:
            n = self.dim
            traces = np.einsum("kkj->j", self._lmap)  # Tr(L_{e_j})
            # e_i^* e_b = sum_a star[a, i] e_a e_b
            prods = np.einsum("ai,abk->ibk", self.star, self.mult)
            gram = np.einsum("ibk,k->ib", prods, traces)
            self._reg_gram = _frozen(gram.reshape(n, n))
        return self._reg_gram

    # structural residuals ------------------------------------------------

    def associativity_residual(self) -> float:
        m = self.mult
        lhs = np.einsum("ijp,pkl->ijkl", m, m)
        rhs = np.einsum("jkp,ipl->ijkl", m, m)
        return float(np.max(np.abs(lhs - rhs)))

    def unit_residual(self) -> float:
        eye = np.eye(self.dim)
        left = np.einsum("i,ijk->jk", self.unit, self.mult)
        right = np.einsum("i,jik->jk", self.unit, self.mult)
        return float(max(np.max(np.abs(left - eye)), np.max(np.abs(right - eye))))

    def star_involution_residual(self) -> float:
        return float(np.max(np.abs(self.star @ np.conj(self.star) - np.eye(self.dim))))

    def star_antimultiplicative_residual(self) -> float:
        # (e_i e_j)^* versus e_j^* e_i^*
        lhs = np.einsum("ijk,lk->ijl", np.conj(self.mult), self.star)
        rhs = np.einsum("bj,ai,bak->ijk", self.star, self.star, self.mult)
        return float(np.max(np.abs(lhs - rhs)))


class AlgebraElement:
    """Coordinate vector in an algebra's basis.

    ``owner`` is the ``AlgebraData`` or a ``QuantumGroup`` built on it; the
    latter makes the Haar inner product available.
    """

    __slots__ = ("owner", "coords")

    def __init__(self, owner, coords):
        coords = np.array(coords, dtype=complex)
        if coords.shape != (owner.algebra.dim,):
            raise AlgebraError(
                f"coordinate vector of length {coords.shape} does not match dim {owner.algebra.dim}"
            )
        coords.setflags(write=False)
        self.owner = owner
        self.coords = coords

    @property
    def algebra(self) -> AlgebraData:
        return self.owner.algebra

    def _check(self, other: AlgebraElement) -> None:
        if self.owner.algebra is not other.owner.algebra:
            raise OwnerMismatch("elements belong to different algebras")

    def _wrap(self, coords) -> AlgebraElement:
        return AlgebraElement(self.owner, coords)

    def __add__(self, other):
        if isinstance(other, AlgebraElement):
            self._check(other)
            return self._wrap(self.coords + other.coords)
        return self._wrap(self.coords + other * self.algebra.unit)

    __radd__ = __add__

    def __sub__(self, other):
        if isinstance(other, AlgebraElement):
            self._check(other)
            return self._wrap(self.coords - other.coords)
        return self._wrap(self.coords - other * self.algebra.unit)

    def __rsub__(self, other):
        return self._wrap(other * self.algebra.unit - self.coords)

    def __neg__(self):
        return self._wrap(-self.coords)

    def __mul__(self, other):
        if isinstance(other, AlgebraElement):
            return multiply(self, other)
        return self._wrap(self.coords * other)

    def __rmul__(self, other):
        return self._wrap(other * self.coords)

    def __truediv__(self, scalar):
        return self._wrap(self.coords / scalar)

    def adjoint(self) -> AlgebraElement:
        return adjoint(self)

    @property
    def H(self) -> AlgebraElement:
        return adjoint(self)

    def distance(self, other: AlgebraElement) -> float:
        self._check(other)
        return float(np.linalg.norm(self.coords - other.coords))

    def allclose(self, other: AlgebraElement, tol: float | None = None) -> bool:
        return self.distance(other) <= config.resolve(tol)

    def __repr__(self):
        terms = [
            f"({c:.6g})*{lab}" for c, lab in zip(self.coords, self.algebra.labels) if abs(c) > 1e-12
        ]
        return "AlgebraElement(" + (" + ".join(terms) or "0") + ")"


class TensorElement:
    """Element of A (x) A; coordinate ``(i, j)`` lives at index ``i*n + j``."""

    __slots__ = ("owner", "coords")

    def __init__(self, owner, coords):
        coords = np.array(coords, dtype=complex)
        n = owner.algebra.dim
        if coords.shape != (n * n,):
            raise AlgebraError(f"tensor coordinates must have length {n * n}")
        coords.setflags(write=False)
        self.owner = owner
        self.coords = coords

    @classmethod
    def simple(cls, a: AlgebraElement, b: AlgebraElement) -> TensorElement:
        a._check(b)
        return cls(a.owner, np.kron(a.coords, b.coords))

    def matrix(self) -> np.ndarray:
        n = self.owner.algebra.dim
        return self.coords.reshape(n, n)

    def distance(self, other: TensorElement) -> float:
        return float(np.linalg.norm(self.coords - other.coords))


# operations ---------------------------------------------------------------


def multiply(a: AlgebraElement, b: AlgebraElement) -> AlgebraElement:
    a._check(b)
    return AlgebraElement(a.owner, a.algebra.product(a.coords, b.coords))


def adjoint(a: AlgebraElement) -> AlgebraElement:
    return AlgebraElement(a.owner, a.algebra.adjoint_coords(a.coords))


def regular_representation(a: AlgebraElement) -> np.ndarray:
    """Matrix of left multiplication by ``a`` in the basis."""
    return a.algebra.left_matrix(a.coords)


def _gram_of(owner) -> np.ndarray:
    gram = getattr(owner, "gram", None)
    if gram is None:
        raise HaarUnavailable("Haar state has not been computed for this algebra")
    return gram


def haar_inner(a: AlgebraElement, b: AlgebraElement) -> complex:
    """``<a, b> = h(a^* b)``, conjugate-linear in ``a``."""
    a._check(b)
    gram = _gram_of(a.owner)
    return complex(np.conj(a.coords) @ gram @ b.coords)


def _inner_gram(a: AlgebraElement) -> np.ndarray:
    gram = getattr(a.owner, "gram", None)
    return gram if gram is not None else a.algebra.regular_trace_gram()


def _hermitian_form(a: AlgebraElement):
    """Return ``(M, C)`` with ``M = C^H L_a C^{-H}``, Hermitian when ``a = a^*``."""
    gram = _inner_gram(a)
    chol = np.linalg.cholesky(gram)
    L = regular_representation(a)
    M = chol.conj().T @ L @ np.linalg.inv(chol.conj().T)
    return M, chol


def is_self_adjoint(a: AlgebraElement, tol: float | None = None) -> bool:
    return a.distance(adjoint(a)) <= config.resolve(tol)


def spectrum(a: AlgebraElement) -> np.ndarray:
    """Eigenvalues of ``L_a`` (real, ascending, when ``a`` is self-adjoint)."""
    M, _ = _hermitian_form(a)
    if np.allclose(M, M.conj().T, atol=1e-10):
        return np.linalg.eigvalsh((M + M.conj().T) / 2)
    return np.linalg.eigvals(M)


def is_positive(a: AlgebraElement, tol: float | None = None) -> bool:
    tol = config.resolve(tol)
    if not is_self_adjoint(a, tol):
        return False
    return bool(np.min(spectrum(a).real) >= -tol)


def is_projection(a: AlgebraElement, tol: float | None = None) -> bool:
    tol = config.resolve(tol)
    return a.distance(a * a) <= tol and is_self_adjoint(a, tol)


def is_central(a: AlgebraElement, tol: float | None = None) -> bool:
    tol = config.resolve(tol)
    alg = a.algebra
    return bool(np.max(np.abs(alg.left_matrix(a.coords) - alg.right_matrix(a.coords)), initial=0.0) <= tol)


def sqrt_positive(a: AlgebraElement, tol: float | None = None) -> AlgebraElement:
    """Positive square root, via the spectral theorem in the regular representation.

    ``sqrt(L_a)`` is a polynomial in ``L_a`` and therefore equals ``L_s`` for a
    unique ``s``; ``s`` is recovered by a least-squares solve over the map
    ``s -> L_s`` and the residual is checked.
    """
    tol = config.resolve(tol)
    if not is_self_adjoint(a, tol):
        raise NotPositiveError("element is not self-adjoint")
    M, chol = _hermitian_form(a)
    M = (M + M.conj().T) / 2
    w, U = np.linalg.eigh(M)
    if w.min() < -tol:
        raise NotPositiveError(f"element has negative spectrum (min eigenvalue {w.min():.3e})")
    # eigenvalues inside the tolerance band are zeros; their round-off noise
    # would otherwise be amplified to sqrt(noise)
    w = np.where(w <= tol * max(1.0, float(w.max())), 0.0, w)
    root_h = (U * np.sqrt(w)) @ U.conj().T
    chol_h = chol.conj().T
    root = np.linalg.solve(chol_h, root_h @ chol_h)
    alg = a.algebra
    n = alg.dim
    lmap = alg._lmap.reshape(n * n, n)
    s, *_ = np.linalg.lstsq(lmap, root.reshape(n * n), rcond=None)
    pullback = np.linalg.norm(lmap @ s - root.reshape(n * n))
    scale = max(1.0, float(np.linalg.norm(a.coords)))
    if pullback > tol * scale * 10:
        raise AlgebraError(f"square root pull-back residual {pullback:.3e} exceeds tolerance")
    return AlgebraElement(a.owner, s)
