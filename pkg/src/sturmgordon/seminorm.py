"""Wasserstein-type seminorms of local measures via their distribution function.

On a bounded window ``phi_mu`` is piecewise linear, so the L1 distance to
the best constant ``min_c int |phi_mu - c|`` is an L1-median problem that is
solved exactly, segment by segment.  The supremum of this window quantity
over admissible windows is the seminorm surrogate ``W(mu, I)``.

A brute-force lower oracle maximises ``|int u dmu|`` over trapezoidal
1-Lipschitz test functions; it is independent of the L1-median route and
exists to check it.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import NamedTuple

import numpy as np
from scipy.optimize import minimize_scalar

from .errors import InvalidParameter
from .measure import TOL, LocalMeasure, unif_norm


@dataclass(frozen=True)
class DistributionFunction:
    """``phi_mu`` restricted to ``[knots[0], knots[-1]]``.

    ``left`` and ``right`` hold ``phi(x-)`` and ``phi(x)`` at every knot;
    ``slopes[i]`` is the density on ``(knots[i], knots[i+1])``.  Jumps
    ``right - left`` are the atom weights.
    """

    knots: np.ndarray
    left: np.ndarray
    right: np.ndarray
    slopes: np.ndarray

    @property
    def breakpoints(self):
        return list(zip(self.knots.tolist(), self.left.tolist(), self.right.tolist()))

    def _index(self, x):
        idx = np.searchsorted(self.knots, x, side="right") - 1
        return np.clip(idx, 0, self.knots.size - 2)

    def __call__(self, x):
        x = np.asarray(x, dtype=float)
        i = self._index(x)
        val = self.right[i] + self.slopes[i] * (x - self.knots[i])
        val = np.where(x >= self.knots[-1], self.right[-1], val)
        return val if val.ndim else float(val)

    @property
    def _cum(self):
        lengths = np.diff(self.knots)
        v0 = self.right[:-1]
        v1 = v0 + self.slopes * lengths
        return np.concatenate([[0.0], np.cumsum(0.5 * lengths * (v0 + v1))])

    def integral(self, x):
        """Primitive ``int_{knots[0]}^x phi(s) ds``."""
        x = np.asarray(x, dtype=float)
        i = self._index(x)
        dx = x - self.knots[i]
        val = self._cum[i] + self.right[i] * dx + 0.5 * self.slopes[i] * dx * dx
        return val if val.ndim else float(val)

    def segments(self, a=None, b=None):
        """Linear pieces ``(length, value_start, value_end)`` covering ``[a, b]``."""
        a = self.knots[0] if a is None else a
        b = self.knots[-1] if b is None else b
        i0 = np.searchsorted(self.knots, a, side="right")
        i1 = np.searchsorted(self.knots, b, side="left")
        xs = np.concatenate([[a], self.knots[i0:i1], [b]])
        sl = np.concatenate([[self.slopes[self._index(a)]], self.slopes[i0:i1]])
        v0 = np.concatenate([[self(a)], self.right[i0:i1]])
        lengths = np.diff(xs)
        return lengths, v0, v0 + sl * lengths


def distribution_function(mu: LocalMeasure, lo: float, hi: float) -> DistributionFunction:
    """Exact piecewise-linear description of ``phi_mu`` on ``[lo, hi]``."""
    if not hi > lo:
        raise InvalidParameter("need lo < hi")
    inner = mu.restrict(lo, hi).breakpoints()
    pts = np.unique(np.concatenate([[lo, hi], inner[(inner > lo) & (inner < hi)]]))
    keep = np.concatenate([[True], np.diff(pts) > TOL])
    pts = pts[keep]
    pts[-1] = hi
    mids = 0.5 * (pts[:-1] + pts[1:])
    return DistributionFunction(
        knots=pts,
        left=np.asarray(mu.phi_left(pts)),
        right=np.asarray(mu.phi(pts)),
        slopes=np.asarray(mu.density_at(mids)),
    )


def _lower_median(lengths, v0, v1):
    """Smallest c with |{phi <= c}| >= half the total length."""
    total = lengths.sum()
    half = 0.5 * total
    lo = np.minimum(v0, v1)
    hi = np.maximum(v0, v1)
    flat = hi - lo <= TOL
    knots = np.unique(np.concatenate([lo, hi]))

    def cdf(c, strict=False):
        span = np.where(flat, 1.0, hi - lo)
        frac = np.clip((c - lo) / span, 0.0, 1.0)
        step = (lo < c) if strict else (lo <= c)
        return float(np.sum(lengths * np.where(flat, step, frac)))

    eps = 1e-12 * max(total, 1.0)
    prev_k, prev_f = None, 0.0
    for k in knots:
        f_left = cdf(k, strict=True)
        f = cdf(k)
        if f >= half - eps:
            if prev_k is not None and f_left > half + eps and f_left > prev_f:
                return prev_k + (half - prev_f) / (f_left - prev_f) * (k - prev_k)
            return float(k)
        prev_k, prev_f = k, f
    return float(knots[-1])


def _abs_deviation(lengths, v0, v1, c):
    """``int |phi - c|`` over linear segments."""
    a, b = v0 - c, v1 - c
    same = a * b >= 0
    diff = np.where(same, 1.0, np.abs(b - a))
    crossing = (a * a + b * b) / (2.0 * diff)
    return float(np.sum(lengths * np.where(same, np.abs(0.5 * (a + b)), crossing)))


class FlatDistance(NamedTuple):
    value: float
    c_star: float
    c_low: float
    c_high: float


def _flat_from_segments(lengths, v0, v1) -> FlatDistance:
    keep = lengths > 0
    lengths, v0, v1 = lengths[keep], v0[keep], v1[keep]
    if lengths.size == 0:
        return FlatDistance(0.0, 0.0, 0.0, 0.0)
    c_lo = _lower_median(lengths, v0, v1)
    c_hi = -_lower_median(lengths, -v0, -v1)
    if c_hi < c_lo:
        c_lo = c_hi = 0.5 * (c_lo + c_hi)
    c = 0.5 * (c_lo + c_hi)
    return FlatDistance(_abs_deviation(lengths, v0, v1, c), float(c), float(c_lo), float(c_hi))


def flat_distance(mu: LocalMeasure, lo: float, hi: float) -> FlatDistance:
    """``min_c int_lo^hi |phi_mu(s) - c| ds`` with its minimiser set.

    ``c_star`` is the midpoint of the minimiser interval ``[c_low, c_high]``.
    """
    return _flat_from_segments(*distribution_function(mu, lo, hi).segments())


def window_flat_distance(mu: LocalMeasure, t: float) -> FlatDistance:
    """Flat distance on the window ``[t - 1, t + 1]``.

    For ``t == 0`` the minimiser is clipped to ``[-||mu||_unif, ||mu||_unif]``;
    the minimiser interval always meets that range, so the clipped point is
    still optimal.
    """
    res = flat_distance(mu, t - 1.0, t + 1.0)
    if t == 0:
        bound = unif_norm(mu)
        c = min(max(res.c_star, -bound), bound)
        res = res._replace(c_star=c)
    return res


def c_constant(mu: LocalMeasure) -> float:
    """Normalising constant ``c_mu``: the clipped minimiser on ``[-1, 1]``."""
    return window_flat_distance(mu, 0.0).c_star


def seminorm_surrogate(mu: LocalMeasure, interval, refine: int = 64) -> float:
    """``W(mu, I) = sup { window_flat_distance(mu, t) : [t-1, t+1] in I }``.

    Candidate centres are the breakpoints of ``phi_mu`` shifted by ``+-1``,
    a uniform grid with ``refine`` points per unit length, and the interval
    ends; the best few candidates are then polished by a bounded scalar
    search.  For periodic ``mu`` only one period of centres is scanned,
    since the window quantity is periodic in ``t``.

    Raises
    ------
    InvalidParameter
        If the interval is shorter than 2.
    """
    lo, hi = float(interval[0]), float(interval[1])
    if hi - lo < 2.0 - TOL:
        raise InvalidParameter("interval must have length >= 2")
    if mu.is_zero():
        return 0.0
    tmin, tmax = lo + 1.0, max(hi - 1.0, lo + 1.0)
    if mu.period is not None and tmax - tmin > mu.period:
        tmax = tmin + mu.period
    df = distribution_function(mu, tmin - 1.0, tmax + 1.0)

    def value(t):
        return _flat_from_segments(*df.segments(t - 1.0, t + 1.0)).value

    n = max(int(math.ceil((tmax - tmin) * refine)), 1) + 1
    cand = np.concatenate([df.knots - 1.0, df.knots + 1.0, np.linspace(tmin, tmax, n)])
    cand = np.unique(cand[(cand >= tmin) & (cand <= tmax)])
    vals = np.array([value(t) for t in cand])
    best = float(vals.max())
    for i in np.argsort(vals)[-3:]:
        a = cand[max(i - 1, 0)]
        b = cand[min(i + 1, cand.size - 1)]
        if b - a <= 1e-9:
            continue
        res = minimize_scalar(lambda t: -value(t), bounds=(a, b), method="bounded",
                              options={"xatol": 1e-10})
        best = max(best, -float(res.fun))
    return best


def seminorm_lower_oracle(mu: LocalMeasure, interval, n_grid: int) -> float:
    """Lower bound on ``||mu||_I`` from trapezoidal test functions.

    Test functions rise with slope 1 on ``[c - w, c - v]``, are flat on
    ``[c - v, c + v]`` and fall on ``[c + v, c + w]`` with
    ``0 <= v <= w <= 1`` and support inside ``I``.  Centres ``c`` and the
    widths ``v, w`` each range over an ``n_grid`` lattice.  Integrating by
    parts, ``int u dmu = G(w) - G(v)`` with
    ``G(x) = Phi(c + x) + Phi(c - x)`` and ``Phi`` a primitive of
    ``phi_mu``; a running min/max over ``x`` then scans all ``(v, w)``
    pairs per centre.
    """
    if n_grid < 2:
        raise InvalidParameter("n_grid must be >= 2")
    lo, hi = float(interval[0]), float(interval[1])
    if mu.is_zero() or hi <= lo:
        return 0.0
    df = distribution_function(mu, lo, hi)
    centers = np.linspace(lo, hi, n_grid)[:, None]
    x = np.linspace(0.0, 1.0, n_grid)[None, :]
    reach = np.minimum(centers - lo, hi - centers)
    ok = x <= reach + 1e-12
    G = df.integral(np.clip(centers + x, lo, hi)) + df.integral(np.clip(centers - x, lo, hi))
    up = G - np.minimum.accumulate(G, axis=1)
    down = np.maximum.accumulate(G, axis=1) - G
    gain = np.where(ok, np.maximum(up, down), 0.0)
    return float(gain.max())


def oracle_grid_slack(mu: LocalMeasure, interval, n_grid: int) -> float:
    """Refinement gap ``L(2 n - 1) - L(n)`` of the lower oracle.

    The ``2 n - 1`` lattice contains the ``n`` lattice, so the gap is
    non-negative; it estimates how much the ``n`` lattice still misses.
    """
    fine = seminorm_lower_oracle(mu, interval, 2 * n_grid - 1)
    return max(fine - seminorm_lower_oracle(mu, interval, n_grid), 0.0)
