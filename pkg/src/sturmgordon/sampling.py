"""Random coefficient generators used by the property suites.

All generators take a :class:`numpy.random.Generator` so runs are
reproducible from a seed.
"""

from __future__ import annotations

import numpy as np

from .coefficients import Coefficients, StepFunction, jacobi
from .gronwall import GronwallInstance
from .measure import LocalMeasure


def _cuts(rng, lo, hi, n):
    inner = np.sort(rng.uniform(lo, hi, max(n - 1, 0)))
    return np.concatenate([[lo], inner, [hi]])


def random_step(rng, period=1.0, n_pieces=4, low=0.5, high=2.0) -> StepFunction:
    """Periodic step function with ``n_pieces`` random values in ``[low, high]``."""
    e = _cuts(rng, 0.0, period, n_pieces)
    vals = rng.uniform(low, high, n_pieces)
    return StepFunction(tuple(zip(e[:-1], e[1:], vals)), period, float(vals[0]))


def random_measure(rng, period=1.0, n_pieces=3, n_atoms=2, density=1.0, weight=1.0,
                   nonnegative=False, window=None) -> LocalMeasure:
    """Random piecewise density plus atoms.

    Periodic with the given period, or compactly supported in ``window``
    when that is given.
    """
    lo, hi = window if window is not None else (0.0, period)
    pieces = ()
    if n_pieces:
        e = _cuts(rng, lo, hi, n_pieces)
        d = rng.uniform(0.0 if nonnegative else -density, density, n_pieces)
        pieces = tuple(zip(e[:-1], e[1:], d))
    x = rng.uniform(lo, hi, n_atoms)
    w = rng.uniform(0.0 if nonnegative else -weight, weight, n_atoms)
    return LocalMeasure(pieces, tuple(zip(x, w)), None if window is not None else period)


def random_weight(rng, period=1.0, n_pieces=3, n_atoms=1) -> LocalMeasure:
    """Strictly positive periodic density (so ``spt rho`` is everything) plus atoms."""
    e = _cuts(rng, 0.0, period, n_pieces)
    d = rng.uniform(0.25, 1.5, n_pieces)
    x = rng.uniform(0.0, period, n_atoms)
    w = rng.uniform(0.0, 1.0, n_atoms)
    return LocalMeasure(tuple(zip(e[:-1], e[1:], d)), tuple(zip(x, w)), period)


def random_periodic_triple(rng, period=None, n_pieces=None, n_atoms=None,
                           density=2.0, weight=1.0) -> Coefficients:
    """Triple with ``a``, ``rho`` and ``mu`` sharing the period."""
    if period is None:
        period = float(rng.choice([0.5, 1.0, 1.5, 2.0]))
    npc = int(rng.integers(1, 5)) if n_pieces is None else n_pieces
    nat = int(rng.integers(0, 4)) if n_atoms is None else n_atoms
    if rng.random() < 0.2:
        # Jacobi-type: rho on the integers
        n = max(int(round(period)), 1)
        return jacobi(rng.uniform(0.5, 2.0, n), rng.uniform(-weight, weight, n))
    a = random_step(rng, period, npc)
    rho = random_weight(rng, period, npc, int(rng.integers(0, 2)))
    mu = random_measure(rng, period, npc, nat, density, weight)
    return Coefficients(a, rho, mu)


def random_density_triple(rng, period=1.0, n_pieces=4, density=2.0) -> Coefficients:
    """Atomless periodic triple."""
    a = random_step(rng, period, n_pieces)
    e = _cuts(rng, 0.0, period, n_pieces)
    rho = LocalMeasure(tuple(zip(e[:-1], e[1:], rng.uniform(0.25, 1.5, n_pieces))), (), period)
    mu = random_measure(rng, period, n_pieces, 0, density)
    return Coefficients(a, rho, mu)


def random_jacobi(rng, n_max=60, a_range=(0.5, 2.0), b_range=(-1.0, 1.0)):
    """Non-periodic Jacobi triple on ``-n_max .. n_max``; returns ``(coeffs, a, b)``."""
    idx = np.arange(-n_max, n_max + 1)
    a = rng.uniform(*a_range, idx.size)
    b = rng.uniform(*b_range, idx.size)
    return jacobi(a, b, offset=-n_max, periodic=False, a_default=1.0), dict(zip(idx, a)), dict(zip(idx, b))


def random_gronwall(rng, T=2.0, n_pieces=3, n_atoms=3) -> GronwallInstance:
    e = _cuts(rng, 0.0, T, n_pieces)
    alpha = StepFunction(tuple(zip(e[:-1], e[1:], rng.uniform(0.0, 2.0, n_pieces))), None, 0.0)
    kernel = random_measure(rng, n_pieces=n_pieces, n_atoms=n_atoms, density=1.5, weight=0.8,
                            nonnegative=True, window=(0.0, T))
    return GronwallInstance(alpha, kernel, T)
