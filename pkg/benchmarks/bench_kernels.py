"""Compare the compiled and pure-Python kernel backends.

    python benchmarks/bench_kernels.py [--repeat N]

Times the Cesaro averaging loop and the Gauss-Newton residual/Jacobian
assembly on every builtin model and checks that both backends agree.
"""

import argparse
import timeit

import numpy as np

from qidem import _kernels_py as py
from qidem.models import BUILTINS, builtin

try:
    from qidem import _kernels as cy
except ImportError:
    cy = None


def cases(name, rng):
    qg = builtin(name)
    n = qg.dim
    b = rng.normal(size=n) + 1j * rng.normal(size=n)
    v = qg.element(b)
    rho = np.conj((v.adjoint() * v).coords)
    psi = rho @ qg.gram.T
    psi = psi / (psi @ qg.algebra.unit)
    p0 = 0.5 * qg.algebra.unit + 0.5 * (b + qg.algebra.adjoint_coords(b))
    alg = qg.algebra
    return {
        "cesaro": lambda m: m.cesaro(psi, qg.cop, 2000, 1e-12),
        "grouplike_system": lambda m: m.grouplike_system(p0, alg.mult, alg.star, qg.V),
    }


def main():
    ap = argparse.ArgumentParser()
    ap.add_argument("--repeat", type=int, default=5)
    args = ap.parse_args()
    if cy is None:
        print("compiled backend not built; run `pip install -e . --no-build-isolation`")
        return
    rng = np.random.default_rng(0)
    print(f"{'model':<10} {'kernel':<17} {'python ms':>10} {'cython ms':>10} {'speedup':>8}  agree")
    for name in BUILTINS:
        for kernel, fn in cases(name, rng).items():
            a, b = fn(py), fn(cy)
            agree = all(np.allclose(x, y, atol=1e-10) for x, y in zip(a, b))
            t_py = min(timeit.repeat(lambda: fn(py), number=1, repeat=args.repeat)) * 1e3
            t_cy = min(timeit.repeat(lambda: fn(cy), number=1, repeat=args.repeat)) * 1e3
            print(f"{name:<10} {kernel:<17} {t_py:>10.3f} {t_cy:>10.3f} {t_py / t_cy:>8.1f}  {agree}")


if __name__ == "__main__":
    main()
