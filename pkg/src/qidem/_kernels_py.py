"""Pure numpy implementations of the inner-loop kernels.

Every function here has a twin with the same signature in the compiled
``_kernels`` extension. ``qidem.kernels`` picks one at import time.

Array conventions: ``mult[i, j, k]`` is the coefficient of ``e_k`` in
``e_i e_j``; ``cop[j, k, i]`` is the coefficient of ``e_j (x) e_k`` in
``Delta(e_i)``; ``star[:, i]`` holds the coordinates of ``e_i^*``;
``V`` is the dense ``n^2 x n^2`` multiplicative unitary.
"""

from __future__ import annotations

import numpy as np

BACKEND = "python"


def multiply(x: np.ndarray, y: np.ndarray, mult: np.ndarray) -> np.ndarray:
    return np.einsum("i,j,ijk->k", x, y, mult)


def convolve(psi1: np.ndarray, psi2: np.ndarray, cop: np.ndarray) -> np.ndarray:
    return np.einsum("j,k,jki->i", psi1, psi2, cop)


def cesaro(psi: np.ndarray, cop: np.ndarray, max_iter: int, tol: float,
           check_every: int = 8):
    """Running mean of convolution powers of ``psi``.

    Returns ``(mean, iterations, residual)`` where residual is the
    idempotency defect of the mean at the last check.
    """
    flat = cop.reshape(-1, cop.shape[2])
    power = psi.copy()
    total = psi.copy()
    residual = np.inf
    mean = psi.copy()
    n_iter = 1
    for n_iter in range(1, max_iter + 1):
        if n_iter % check_every == 0 or n_iter == max_iter:
            mean = total / n_iter
            residual = float(np.linalg.norm(np.kron(mean, mean) @ flat - mean))
            if residual <= tol:
                break
        power = np.kron(power, psi) @ flat
        total += power
    return mean, n_iter, residual


def grouplike_system(p: np.ndarray, mult: np.ndarray, star: np.ndarray,
                     V: np.ndarray):
    """Residual and real Jacobian of the group-like projection equations.

    Unknown: ``p`` (complex, length n). Residual blocks, stacked:
    ``p p - p``, ``p - p^*``, ``V(p (x) p) - p (x) p``. The Jacobian is with
    respect to ``(Re p, Im p)`` and acts on the stacked ``(Re r, Im r)``.
    """
    n = p.shape[0]
    eye = np.eye(n)
    pp = np.kron(p, p)
    r1 = multiply(p, p, mult) - p
    r2 = p - star @ np.conj(p)
    r3 = V @ pp - pp
    r = np.concatenate([r1, r2, r3])

    left = np.einsum("i,ijk->kj", p, mult)
    right = np.einsum("j,ijk->ki", p, mult)
    A1 = left + right - eye
    A2 = eye
    B2 = -star
    # d(p (x) p)/dp_l = e_l (x) p + p (x) e_l
    dpp = (np.einsum("lm,b->lmb", eye, p) + np.einsum("a,lm->lam", p, eye)).reshape(n, n * n).T
    A3 = V @ dpp - dpp

    A = np.vstack([A1, A2, A3])
    B = np.vstack([np.zeros((n, n)), B2, np.zeros((n * n, n))])
    S, D = A + B, A - B
    J = np.block([[S.real, -D.imag], [S.imag, D.real]])
    return r, J
