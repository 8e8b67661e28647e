"""Transfer matrices for ``H u = z u`` with piecewise-constant ``a`` and measure coefficients.

The phase vector is ``(u, w)`` with ``w = a u'``.  Writing ``nu = mu - z rho``
the equation reads ``u' = w / a`` and ``dw = u dnu``.  On an interval where
``a`` and the density ``k`` of ``nu`` are constant this is a constant
coefficient system with the closed-form solution of :func:`piece_matrix`;
an atom of ``nu`` with weight ``m`` kicks ``w`` by ``m u`` (see
:func:`atom_matrix`).  Factors are ordered left to right over ``(s, t]``,
so an atom at ``t`` is included and one at ``s`` is not.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import NamedTuple, Sequence

import numpy as np

from .coefficients import Coefficients
from .errors import InvalidParameter
from .measure import TOL, LocalMeasure, _linear_combination, common_period

TAYLOR_CUTOFF = 1e-4


class PhaseVector(NamedTuple):
    u: float
    w: float


@dataclass(frozen=True)
class TransferMatrix:
    """Real 2x2 matrix ``[[m11, m12], [m21, m22]]`` acting on ``(u, w)``."""

    m11: float
    m12: float
    m21: float
    m22: float

    @classmethod
    def from_array(cls, m) -> "TransferMatrix":
        m = np.asarray(m, dtype=float)
        return cls(float(m[0, 0]), float(m[0, 1]), float(m[1, 0]), float(m[1, 1]))

    @property
    def array(self) -> np.ndarray:
        return np.array([[self.m11, self.m12], [self.m21, self.m22]])

    @property
    def det(self) -> float:
        return self.m11 * self.m22 - self.m12 * self.m21

    @property
    def trace(self) -> float:
        return self.m11 + self.m22

    def inverse(self) -> "TransferMatrix":
        """Adjugate; equals the inverse when ``det = 1``."""
        return TransferMatrix(self.m22, -self.m12, -self.m21, self.m11)

    def __matmul__(self, other):
        if isinstance(other, TransferMatrix):
            return TransferMatrix.from_array(self.array @ other.array)
        return self.array @ np.asarray(other, dtype=float)

    def apply(self, v) -> PhaseVector:
        u, w = self.array @ np.asarray(v, dtype=float)
        return PhaseVector(float(u), float(w))

    def __array__(self, dtype=None, copy=None):
        return self.array if dtype is None else self.array.astype(dtype)


def _piece_arrays(a_val, k, d):
    """Stacked piece matrices, shape ``broadcast(a, k, d) + (2, 2)``."""
    a_val, k, d = np.broadcast_arrays(*(np.asarray(v, dtype=float) for v in (a_val, k, d)))
    x = (k / a_val) * d * d
    ax = np.abs(x)
    small = ax < TAYLOR_CUTOFF
    root = np.sqrt(np.where(small, 1.0, ax))
    pos = x > 0
    with np.errstate(over="ignore"):
        c_big = np.where(pos, np.cosh(root), np.cos(root))
        s_big = np.where(pos, np.sinh(root), np.sin(root)) / root
    c_small = 1.0 + x / 2.0 + x * x / 24.0 + x ** 3 / 720.0
    s_small = 1.0 + x / 6.0 + x * x / 120.0 + x ** 3 / 5040.0
    C = np.where(small, c_small, c_big)
    S = d * np.where(small, s_small, s_big)
    out = np.empty(C.shape + (2, 2))
    out[..., 0, 0] = C
    out[..., 0, 1] = S / a_val
    out[..., 1, 0] = k * S
    out[..., 1, 1] = C
    return out


def piece_matrix(a_val: float, k: float, d: float) -> TransferMatrix:
    """Propagator of ``u' = w / a``, ``w' = k u`` over a length ``d``.

    With ``s = k / a`` and ``lambda = sqrt(|s|)`` the entries are
    ``cosh``/``sinh`` (``s > 0``) or ``cos``/``sin`` (``s < 0``);
    ``[[1, d/a], [0, 1]]`` for ``k = 0``.  Near ``s d^2 = 0`` a Taylor
    expansion replaces the closed form.
    """
    if not a_val > 0:
        raise InvalidParameter("a must be positive")
    if d < 0:
        raise InvalidParameter("d must be non-negative")
    return TransferMatrix.from_array(_piece_arrays(a_val, k, d))


def atom_matrix(m: float) -> TransferMatrix:
    """Jump of ``w`` by ``m u`` at an atom of weight ``m``."""
    return TransferMatrix(1.0, 0.0, float(m), 1.0)


def chain_product(F: np.ndarray) -> np.ndarray:
    """``F[n-1] @ ... @ F[0]`` by a deterministic pairwise tree."""
    F = np.asarray(F, dtype=float)
    if F.shape[0] == 0:
        return np.eye(2)
    while F.shape[0] > 1:
        if F.shape[0] % 2:
            F = np.concatenate([F, np.eye(2)[None]])
        F = np.matmul(F[1::2], F[0::2])
    return F[0]


def prefix_products(F: np.ndarray) -> np.ndarray:
    """``P[i] = F[i] @ ... @ F[0]`` for every ``i`` (doubling scan)."""
    P = np.array(F, dtype=float)
    step = 1
    while step < P.shape[0]:
        P[step:] = np.matmul(P[step:], P[:-step])
        step *= 2
    return P


@dataclass(frozen=True)
class Segmentation:
    """Ordered factors of the propagation over ``(lo, hi]``.

    ``kind[i]`` is 0 for a piece over ``(start[i], end[i]]`` with values
    ``a[i]``, ``k[i]`` and 1 for an atom at ``end[i]`` with weight
    ``k[i]``.
    """

    start: np.ndarray
    end: np.ndarray
    a: np.ndarray
    k: np.ndarray
    kind: np.ndarray

    def matrices(self) -> np.ndarray:
        F = _piece_arrays(self.a, np.where(self.kind == 0, self.k, 0.0), self.end - self.start)
        atoms = self.kind == 1
        F[atoms] = np.eye(2)
        F[atoms, 1, 0] = self.k[atoms]
        return F


def effective_potential(c: Coefficients, z: float, lo: float, hi: float) -> LocalMeasure:
    """``mu - z rho`` described on ``(lo, hi]``."""
    if z == 0:
        return c.potential.restrict(lo, hi)
    return _linear_combination([(1.0, c.potential), (-float(z), c.weight)], (lo, hi))


def segment(c: Coefficients, z: float, lo: float, hi: float, splits=()) -> Segmentation:
    """Break ``(lo, hi]`` into constant pieces and atoms of ``(a, mu - z rho)``.

    ``splits`` adds extra piece boundaries (e.g. grid points).
    """
    nu = effective_potential(c, z, lo, hi)
    pts = [np.array([lo, hi]), c.diffusion.breakpoints(lo, hi), nu.breakpoints()]
    splits = np.asarray(splits, dtype=float).ravel()
    pts.append(splits)
    edges = np.unique(np.concatenate(pts))
    edges = edges[(edges >= lo) & (edges <= hi)]
    keep = np.concatenate([[True], np.diff(edges) > TOL])
    edges = edges[keep]
    edges[-1] = hi
    if edges.size < 2:
        edges = np.array([lo, hi])
    mids = 0.5 * (edges[:-1] + edges[1:])
    a = np.asarray(c.diffusion(mids), dtype=float)
    dens = np.asarray(nu.density_at(mids), dtype=float)
    n = mids.size
    # atom weights at each right edge
    m = np.zeros(n)
    if nu.atoms:
        ax = np.array([x for x, _ in nu.atoms])
        aw = np.array([w for _, w in nu.atoms])
        idx = np.clip(np.searchsorted(edges, ax - TOL, side="left"), 1, n) - 1
        np.add.at(m, idx, aw)
    has = m != 0
    count = n + int(has.sum())
    order = np.arange(n) + np.concatenate([[0], np.cumsum(has)[:-1]])
    start, end = np.empty(count), np.empty(count)
    aa, kk, kind = np.empty(count), np.empty(count), np.zeros(count, dtype=int)
    start[order], end[order], aa[order], kk[order] = edges[:-1], edges[1:], a, dens
    at = order[has] + 1
    start[at] = end[at] = edges[1:][has]
    aa[at], kk[at], kind[at] = a[has], m[has], 1
    return Segmentation(start, end, aa, kk, kind)


def transfer(c: Coefficients, z: float, s: float, t: float) -> TransferMatrix:
    """``T(t, s)``: maps ``(u(s), w(s))`` to ``(u(t), w(t))``.

    For ``s > t`` the adjugate of ``T(s, t)`` is returned.
    """
    if s == t:
        return TransferMatrix(1.0, 0.0, 0.0, 1.0)
    if s > t:
        return transfer(c, z, t, s).inverse()
    return TransferMatrix.from_array(chain_product(segment(c, z, s, t).matrices()))


def neumann(c: Coefficients, z: float, s: float, t: float) -> PhaseVector:
    """Solution with ``(u, w)(s) = (1, 0)``, evaluated at ``t``."""
    T = transfer(c, z, s, t)
    return PhaseVector(T.m11, T.m21)


def dirichlet(c: Coefficients, z: float, s: float, t: float) -> PhaseVector:
    """Solution with ``(u, w)(s) = (0, 1)``, evaluated at ``t``."""
    T = transfer(c, z, s, t)
    return PhaseVector(T.m12, T.m22)


def evaluate_solution(c: Coefficients, z: float, init, grid: Sequence[float],
                      s: float = 0.0) -> np.ndarray:
    """Phase vectors ``(u, w)`` at every grid point; ``init`` is the value at ``s``.

    Returns an array of shape ``(len(grid), 2)``.  Grid points split the
    pieces, and the partial products over all factors are formed by one
    prefix scan on each side of ``s``.
    """
    grid = np.asarray(grid, dtype=float)
    v0 = np.asarray(init, dtype=float)
    out = np.empty((grid.size, 2))
    if grid.size == 0:
        return out
    right = grid >= s
    if right.any():
        g = grid[right]
        hi = float(g.max())
        if hi > s:
            seg = segment(c, z, s, hi, g)
            P = prefix_products(seg.matrices())
            idx = np.searchsorted(seg.end, g + TOL, side="right")
            P = np.concatenate([np.eye(2)[None], P])
            out[right] = np.einsum("nij,j->ni", P[idx], v0)
        else:
            out[right] = v0
    if (~right).any():
        g = grid[~right]
        lo = float(g.min())
        seg = segment(c, z, lo, s, g)
        F = seg.matrices()[::-1]
        inv = np.empty_like(F)
        inv[:, 0, 0], inv[:, 1, 1] = F[:, 1, 1], F[:, 0, 0]
        inv[:, 0, 1], inv[:, 1, 0] = -F[:, 0, 1], -F[:, 1, 0]
        P = np.concatenate([np.eye(2)[None], prefix_products(inv)])
        # undo every factor that ends after g
        undone = seg.end.size - np.searchsorted(seg.end, g + TOL, side="right")
        out[~right] = np.einsum("nij,j->ni", P[undone], v0)
    return out


def common_coefficient_period(c: Coefficients) -> float:
    """A period shared by ``a``, ``rho`` and ``mu``.

    Raises
    ------
    InvalidParameter
        If the three have no common period.
    """
    periods = [c.diffusion.period, c.weight.period]
    if not c.potential.is_zero():
        periods.append(c.potential.period)
    if any(p is None for p in periods):
        raise InvalidParameter("coefficients are not periodic")
    P = periods[0]
    for q in periods[1:]:
        P = common_period(P, q)
        if P is None:
            raise InvalidParameter("coefficients have no common period")
    return P


def monodromy_trace(c: Coefficients, z: float, period: float | None = None) -> float:
    """Trace of ``T(p, 0)`` over a common period ``p``."""
    p = common_coefficient_period(c) if period is None else float(period)
    return transfer(c, z, 0.0, p).trace


def three_point_check(c: Coefficients, z: float, init, period: float | None = None,
                      tol: float = 1e-12):
    """Compare ``max_{t in {-p, p, 2p}} |(u, w)(t)|`` with ``|(u, w)(0)| / 2``.

    Returns ``(lhs, rhs, ok)`` with Euclidean norms and
    ``ok = lhs >= rhs - tol``.
    """
    p = common_coefficient_period(c) if period is None else float(period)
    v = np.asarray(init, dtype=float)
    pts = evaluate_solution(c, z, v, [-p, p, 2 * p])
    lhs = float(np.max(np.hypot(pts[:, 0], pts[:, 1])))
    rhs = 0.5 * float(np.hypot(*v))
    return lhs, rhs, lhs >= rhs - tol
