"""Gronwall inequality with a measure kernel.

For ``u(t) <= alpha(t) + int_[0,t) u dmu`` with ``alpha >= 0`` and ``mu >= 0``
the bound is ``alpha(t) + int_[0,t) alpha(s) exp(mu((s,t))) dmu(s)``.
:func:`gronwall_bound` evaluates it in closed form for piecewise-constant
``alpha`` and density-plus-atoms kernels; :func:`gronwall_oracle` sums the
discretised Neumann series ``sum_j K^j alpha`` instead.
"""

from __future__ import annotations

import itertools
import math
from dataclasses import dataclass

import numpy as np

from .coefficients import StepFunction
from .errors import InvalidParameter
from .measure import LocalMeasure


@dataclass(frozen=True)
class GronwallInstance:
    """``alpha`` (non-negative step function) and kernel ``mu >= 0`` on ``[0, T]``."""

    alpha: StepFunction
    kernel: LocalMeasure
    T: float

    def __post_init__(self):
        if not self.T > 0:
            raise InvalidParameter("T must be positive")
        if self.alpha.inf < 0:
            raise InvalidParameter("alpha must be non-negative")
        if not self.kernel.is_nonnegative():
            raise InvalidParameter("kernel must be non-negative")
        if self.kernel.period is not None:
            object.__setattr__(self, "kernel", self.kernel.restrict(-1.0, self.T))

    def _atoms(self, t: float):
        """Atoms in ``[0, t)``, exact comparisons."""
        return [(x, w) for x, w in self.kernel.atoms if 0.0 <= x < t]

    def _grid(self, t: float, extra=()):
        pts = [np.array([0.0, t]), self.alpha.breakpoints(0.0, t), np.asarray(extra, float)]
        kp = self.kernel.breakpoints()
        pts.append(kp[(kp > 0.0) & (kp < t)])
        return np.unique(np.concatenate(pts))


def _check_t(g: GronwallInstance, t: float):
    if not 0.0 <= t <= g.T:
        raise InvalidParameter("t must lie in [0, T]")


def gronwall_bound(g: GronwallInstance, t: float) -> float:
    """``alpha(t) + int_[0,t) alpha(s) exp(mu((s, t))) dmu(s)`` in closed form.

    With ``L = mu([0, t))`` and ``R(s) = mu([0, s])`` the exponent is
    ``L - R(s)``.  Between grid points ``R`` is affine with slope ``q`` and
    each cell contributes ``A exp(L - R(x_i)) (1 - exp(-q l))``; an atom at
    ``tau`` contributes ``alpha(tau) w exp(L - R(tau))``.
    """
    _check_t(g, t)
    a_t = float(g.alpha(t))
    if t == 0.0:
        return a_t
    x = g._grid(t)
    mids = 0.5 * (x[:-1] + x[1:])
    lengths = np.diff(x)
    q = np.asarray(g.kernel.density_at(mids), dtype=float)
    A = np.asarray(g.alpha(mids), dtype=float)
    dens_cum = np.concatenate([[0.0], np.cumsum(q * lengths)])
    atoms = g._atoms(t)
    ax = np.array([p for p, _ in atoms])
    aw = np.array([w for _, w in atoms])

    def atoms_upto(y, closed):
        if ax.size == 0:
            return np.zeros_like(y)
        mask = ax[None, :] <= y[:, None] if closed else ax[None, :] < y[:, None]
        return (mask * aw[None, :]).sum(axis=1)

    L = dens_cum[-1] + (aw.sum() if aw.size else 0.0)
    R_left = dens_cum[:-1] + atoms_upto(x[:-1], closed=True)
    total = np.sum(A * np.exp(L - R_left) * -np.expm1(-q * lengths))
    if ax.size:
        R_at = np.interp(ax, x, dens_cum) + atoms_upto(ax, closed=True)
        total += np.sum(np.asarray(g.alpha(ax)) * aw * np.exp(L - R_at))
    return a_t + float(total)


def gronwall_oracle(g: GronwallInstance, t: float, n_grid: int = 2048, k_max: int = 20):
    """Partial Neumann sum ``sum_{j <= k_max} (K^j alpha)(t)`` and a tail cap.

    ``K f(x) = int_[0,x) f dmu`` is discretised on ``n_grid`` uniform points
    refined by all jumps of ``alpha`` and breakpoints of ``mu``.  Functions
    are stored by their left limit, value and right limit at every node so
    that cells integrate the correct one-sided values (trapezoid rule) and
    atoms see the value at their location.  The cap
    ``sup alpha * M^(k+1) / (k+1)! * exp(M)`` with ``M = mu([0, t))`` bounds
    the omitted terms, since ``mu^(x)j`` of the ordered simplex is at most
    ``M^j / j!``.
    """
    if n_grid < 8:
        raise InvalidParameter("n_grid must be >= 8")
    if k_max < 1:
        raise InvalidParameter("k_max must be >= 1")
    _check_t(g, t)
    if t == 0.0:
        return float(g.alpha(0.0)), 0.0
    x = g._grid(t, np.linspace(0.0, t, n_grid))
    lengths = np.diff(x)
    q = np.asarray(g.kernel.density_at(0.5 * (x[:-1] + x[1:])), dtype=float)
    w = np.zeros(x.size)
    for loc, wt in g._atoms(t):
        w[np.argmin(np.abs(x - loc))] += wt
    # alpha is right-continuous
    a_val = np.asarray(g.alpha(x), dtype=float)
    a_left = np.concatenate([[a_val[0]], np.asarray(g.alpha(0.5 * (x[:-1] + x[1:])))])
    a_right = a_val

    def apply_K(left, val, right):
        cell = q * lengths * 0.5 * (right[:-1] + left[1:])
        jumps = w * val
        before = np.concatenate([[0.0], np.cumsum(cell + jumps[:-1])])
        # K f is left-continuous: the atom at x_i is added just after x_i
        return before, before, before + jumps

    term = (a_left, a_val, a_right)
    total = float(a_val[-1])
    for _ in range(k_max):
        term = apply_K(*term)
        total += float(term[1][-1])
    M = float(np.sum(q * lengths) + w[:-1].sum())
    cap = g.alpha.sup * M ** (k_max + 1) / math.factorial(k_max + 1) * math.exp(M)
    return total, cap


def simplex_mass(atoms, s: float, t: float, k: int):
    """Exhaustive ``mu^(x)k`` of the ordered simplex ``s < t_1 < ... < t_k < t``.

    For a purely atomic ``mu`` this is the sum over strictly increasing
    ``k``-tuples of atoms in ``(s, t)``; returns ``(mass, mu((s,t))^k / k!)``.
    """
    inside = sorted((x, w) for x, w in atoms if s < x < t)
    mass = sum(math.prod(w for _, w in c) for c in itertools.combinations(inside, k))
    total = sum(w for _, w in inside)
    return float(mass), total ** k / math.factorial(k)
