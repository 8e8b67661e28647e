"""A random Jacobi operator propagated as a measure equation.

Compares the continuum propagator on the integer lattice with the
three-term recursion and prints the largest discrepancy.

    python demos/jacobi_chain.py [seed]
"""

import sys

import numpy as np

from sturmgordon import evaluate_solution
from sturmgordon.sampling import random_jacobi
from sturmgordon.verify import jacobi_recursion


def main(seed=1):
    rng = np.random.default_rng(seed)
    c, a, b = random_jacobi(rng, n_max=50)
    z, u0, w0 = 0.3, 1.0, -0.5
    ns = np.arange(-50, 51)
    sol = evaluate_solution(c, z, (u0, w0), ns.astype(float))
    ref = jacobi_recursion(a, b, z, u0, w0)
    err = max(abs(sol[i, 0] - ref[n]) / max(1.0, abs(ref[n])) for i, n in enumerate(ns))
    print(f"u(-50) = {sol[0, 0]:.6g}, u(50) = {sol[-1, 0]:.6g}")
    print(f"max relative deviation from the recursion: {err:.3g}")


if __name__ == "__main__":
    main(*(int(a) for a in sys.argv[1:2]))
