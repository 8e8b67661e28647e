"""Signed local measures built from piecewise-constant densities and atoms.

A :class:`LocalMeasure` is either compactly described (zero outside its pieces
and atoms) or periodic, in which case the pieces and atoms describe one cell
``[0, period)``.  Every quantity used downstream (total variation on
intervals, uniform local norms, the distribution function ``phi``) is
evaluated in closed form from this representation.

Conventions: a piece ``(start, end, density)`` carries Lebesgue density on
the half-open interval ``(start, end]``; masses of intervals are taken on
``(s, t]``; ``phi(t) = mu((0, t])`` for ``t >= 0`` and ``-mu((t, 0])`` for
``t < 0``, so ``phi`` is right-continuous with ``phi(0) = 0``.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from functools import cached_property
from typing import Optional

import numpy as np

from .errors import InvalidCombination, InvalidParameter

#: absolute tolerance for coordinates, densities and weights
TOL = 1e-12


def common_period(p1: float, p2: float, max_denominator: int = 1000) -> Optional[float]:
    """Return the least common multiple of two periods, or ``None``.

    The ratio ``p1 / p2`` is rationalised with denominators up to
    ``max_denominator``; the periods count as commensurable when the
    resulting common multiple agrees to relative ``1e-9``.
    """
    ratio = Fraction(p1 / p2).limit_denominator(max_denominator)
    lcm = p1 * ratio.denominator
    if abs(lcm - p2 * ratio.numerator) > 1e-9 * max(lcm, 1.0):
        return None
    return lcm


def _as_rows(rows, width, what):
    arr = np.asarray(list(rows), dtype=float).reshape(-1, width)
    if not np.all(np.isfinite(arr)):
        raise InvalidParameter(f"{what} entries must be finite")
    return arr


def _clean_pieces(pieces, period):
    arr = _as_rows(pieces, 3, "piece")
    s, e, d = arr.T
    if np.any(e < s - TOL):
        raise InvalidParameter("piece has start > end")
    keep = (e - s > TOL) & (np.abs(d) > TOL)
    s, e, d = s[keep], e[keep], d[keep]
    if period is not None:
        if np.any(e - s > period + TOL):
            raise InvalidParameter("piece longer than the period")
        n = np.floor(s / period)
        s, e = s - n * period, e - n * period
        wrap = s >= period - TOL
        s, e = np.where(wrap, s - period, s), np.where(wrap, e - period, e)
        s = np.maximum(s, 0.0)
        split = e > period + TOL
        s = np.concatenate([s, np.zeros(split.sum())])
        e = np.concatenate([np.where(split, period, np.minimum(e, period)), e[split] - period])
        d = np.concatenate([d, d[split]])
    order = np.lexsort((d, e, s))
    s, e, d = s[order], e[order], d[order]
    if s.size > 1:
        if np.any(s[1:] < e[:-1] - TOL):
            raise InvalidParameter("pieces overlap")
        touch = np.abs(s[1:] - e[:-1]) <= TOL
        s[1:] = np.where(touch, e[:-1], s[1:])
        same = touch & (np.abs(d[1:] - d[:-1]) <= TOL)
        first = np.concatenate([[True], ~same])
        last = np.concatenate([~same, [True]])
        s, e, d = s[first], e[last], d[first]
    keep = e - s > TOL
    return tuple(zip(s[keep].tolist(), e[keep].tolist(), d[keep].tolist()))


def _clean_atoms(atoms, period):
    arr = _as_rows(atoms, 2, "atom")
    x, w = arr.T
    if period is not None:
        x = x - np.floor(x / period) * period
        x = np.where(x >= period - TOL, 0.0, x)
    order = np.lexsort((w, x))
    x, w = x[order], w[order]
    if x.size > 1:
        first = np.concatenate([[True], np.diff(x) > TOL])
        idx = np.flatnonzero(first)
        x, w = x[idx], np.add.reduceat(w, idx)
    keep = np.abs(w) > TOL
    return tuple(zip(x[keep].tolist(), w[keep].tolist()))


@dataclass(frozen=True)
class LocalMeasure:
    """Signed local measure ``density * Lebesgue + sum of atoms``.

    Parameters
    ----------
    pieces
        Sequence of ``(start, end, density)``; density is carried on
        ``(start, end]``.  Pieces must not overlap.
    atoms
        Sequence of ``(location, weight)``.
    period
        If given, the measure is the periodic extension of the described
        cell.  Pieces and atoms are reduced modulo the period on
        construction, so any representative may be passed.

    Instances are immutable and canonical: adjacent pieces with equal
    density are merged, atoms at the same location are summed, and zero
    densities or weights (below ``TOL``) are dropped.
    """

    pieces: tuple = ()
    atoms: tuple = ()
    period: Optional[float] = None

    def __post_init__(self):
        period = self.period
        if period is not None:
            period = float(period)
            if not (period > 0 and math.isfinite(period)):
                raise InvalidParameter("period must be positive and finite")
        object.__setattr__(self, "period", period)
        object.__setattr__(self, "pieces", _clean_pieces(self.pieces, period))
        object.__setattr__(self, "atoms", _clean_atoms(self.atoms, period))

    # -- constructors -------------------------------------------------
    @classmethod
    def zero(cls) -> "LocalMeasure":
        return cls()

    @classmethod
    def lebesgue(cls, density: float = 1.0, period: float = 1.0) -> "LocalMeasure":
        return cls(pieces=((0.0, period, density),), period=period)

    @classmethod
    def dirac(cls, location: float = 0.0, weight: float = 1.0) -> "LocalMeasure":
        return cls(atoms=((location, weight),))

    @classmethod
    def lattice(cls, spacing: float = 1.0, weight: float = 1.0, offset: float = 0.0) -> "LocalMeasure":
        """``weight * sum_n delta_{offset + n * spacing}``."""
        return cls(atoms=((offset, weight),), period=spacing)

    # -- basic structure ----------------------------------------------
    @property
    def is_periodic(self) -> bool:
        return self.period is not None

    def is_zero(self, tol: float = TOL) -> bool:
        return all(abs(d) <= tol for _, _, d in self.pieces) and all(
            abs(w) <= tol for _, w in self.atoms
        )

    def is_nonnegative(self) -> bool:
        return all(d >= 0 for _, _, d in self.pieces) and all(w >= 0 for _, w in self.atoms)

    @cached_property
    def abs(self) -> "LocalMeasure":
        """Total variation measure ``|mu|``."""
        return LocalMeasure(
            tuple((s, e, abs(d)) for s, e, d in self.pieces),
            tuple((x, abs(w)) for x, w in self.atoms),
            self.period,
        )

    def breakpoints(self) -> np.ndarray:
        """Piece endpoints and atom locations of the description."""
        pts = [s for s, _, _ in self.pieces] + [e for _, e, _ in self.pieces]
        pts += [x for x, _ in self.atoms]
        return np.unique(np.asarray(pts, dtype=float))

    @cached_property
    def _starts(self):
        return np.array([s for s, _, _ in self.pieces], dtype=float)

    @cached_property
    def _ends(self):
        return np.array([e for _, e, _ in self.pieces], dtype=float)

    @cached_property
    def _dens(self):
        return np.array([d for _, _, d in self.pieces], dtype=float)

    @cached_property
    def _ax(self):
        return np.array([x for x, _ in self.atoms], dtype=float)

    @cached_property
    def _aw(self):
        return np.array([w for _, w in self.atoms], dtype=float)

    @cached_property
    def _cum_knots(self):
        xs, ys, acc = [], [], 0.0
        for s, e, d in self.pieces:
            xs += [s, e]
            ys += [acc, acc + d * (e - s)]
            acc += d * (e - s)
        return np.asarray(xs, dtype=float), np.asarray(ys, dtype=float)

    @cached_property
    def _cum_w(self):
        return np.concatenate([[0.0], np.cumsum(self._aw)])

    @cached_property
    def _cell_total(self) -> float:
        return float(np.sum(self._dens * (self._ends - self._starts)) + np.sum(self._aw))

    def _density_cum(self, x):
        xs, ys = self._cum_knots
        if xs.size == 0:
            return np.zeros_like(x)
        return np.interp(x, xs, ys)

    def _atom_cum(self, x):
        # sum of weights with location <= x
        idx = np.searchsorted(self._ax, x + TOL, side="right")
        return self._cum_w[idx]

    def _reduce(self, t):
        """Split ``t = n * period + r`` with ``0 <= r < period``."""
        P = self.period
        n = np.floor(t / P)
        r = t - n * P
        wrap = r >= P - TOL
        n = np.where(wrap, n + 1, n)
        r = np.where(wrap, 0.0, np.maximum(r, 0.0))
        return n, r

    # -- evaluation ---------------------------------------------------
    def phi(self, t):
        """Distribution function ``phi(t) = int_0^t dmu`` (right-continuous)."""
        t = np.asarray(t, dtype=float)
        if self.period is None:
            val = self._density_cum(t) - self._density_cum(np.zeros(())) + (
                self._atom_cum(t) - self._atom_cum(np.zeros(()))
            )
        else:
            n, r = self._reduce(t)
            val = n * self._cell_total + self._density_cum(r) + self._atom_cum(r)
            if self._ax.size and self._ax[0] <= TOL:
                val = val - self._aw[0]
        return val if val.ndim else float(val)

    def point_mass(self, t):
        """``mu({t})``."""
        t = np.asarray(t, dtype=float)
        if self._ax.size == 0:
            out = np.zeros_like(t)
        else:
            r = self._reduce(t)[1] if self.period is not None else t
            hi = np.searchsorted(self._ax, r + TOL, side="right")
            lo = np.searchsorted(self._ax, r - TOL, side="left")
            out = self._cum_w[hi] - self._cum_w[lo]
        return out if out.ndim else float(out)

    def phi_left(self, t):
        """Left limit ``phi(t-)``."""
        return self.phi(t) - self.point_mass(t)

    def density_at(self, x):
        """Lebesgue density at ``x`` (value of the piece whose ``(start, end]`` holds ``x``)."""
        x = np.asarray(x, dtype=float)
        if self._starts.size == 0:
            out = np.zeros_like(x)
        else:
            r = self._reduce(x)[1] if self.period is not None else x
            if self.period is not None:
                r = np.where(r <= TOL, self.period, r)
            idx = np.searchsorted(self._starts, r, side="left") - 1
            safe = np.clip(idx, 0, None)
            inside = (idx >= 0) & (r <= self._ends[safe] + TOL)
            out = np.where(inside, self._dens[safe], 0.0)
        return out if out.ndim else float(out)

    def mass(self, s: float, t: float) -> float:
        """Signed mass ``mu((s, t])`` for ``s <= t``."""
        return float(self.phi(t) - self.phi(s))

    # -- transformations ----------------------------------------------
    def shift(self, p: float) -> "LocalMeasure":
        """The translate ``B -> mu(B + p)``."""
        return LocalMeasure(
            tuple((s - p, e - p, d) for s, e, d in self.pieces),
            tuple((x - p, w) for x, w in self.atoms),
            self.period,
        )

    def scale(self, c: float) -> "LocalMeasure":
        return LocalMeasure(
            tuple((s, e, c * d) for s, e, d in self.pieces),
            tuple((x, c * w) for x, w in self.atoms),
            self.period,
        )

    def restrict(self, lo: float, hi: float) -> "LocalMeasure":
        """Compactly described measure ``1_{(lo, hi]} mu``."""
        if hi <= lo:
            return LocalMeasure()
        if self.period is None:
            starts, ends, dens = self._starts, self._ends, self._dens
            ax, aw = self._ax, self._aw
        else:
            P = self.period
            ns = np.arange(math.floor(lo / P) - 1, math.ceil(hi / P) + 2) * P
            starts = (self._starts[None, :] + ns[:, None]).ravel()
            ends = (self._ends[None, :] + ns[:, None]).ravel()
            dens = np.tile(self._dens, ns.size)
            ax = (self._ax[None, :] + ns[:, None]).ravel()
            aw = np.tile(self._aw, ns.size)
        s = np.maximum(starts, lo)
        e = np.minimum(ends, hi)
        keep = e - s > TOL
        keep_a = (ax > lo + TOL) & (ax <= hi + TOL)
        return LocalMeasure(
            tuple(zip(s[keep], e[keep], dens[keep])),
            tuple(zip(np.minimum(ax[keep_a], hi), aw[keep_a])),
        )

    def tile(self, period: float) -> "LocalMeasure":
        """Re-describe a periodic measure over a multiple of its period."""
        if self.period is None:
            raise InvalidCombination("only periodic measures can be tiled")
        if abs(period - self.period) <= TOL:
            return self
        k = period / self.period
        if abs(k - round(k)) > 1e-9 * max(k, 1.0):
            raise InvalidCombination("new period is not a multiple of the old one")
        r = self.restrict(0.0, period)
        return LocalMeasure(r.pieces, r.atoms, period)

    def isclose(self, other: "LocalMeasure", tol: float = 1e-12) -> bool:
        """Structural equality of the represented measures up to ``tol``."""
        try:
            diff = subtract(self, other)
        except InvalidCombination:
            return False
        return diff.is_zero(tol)

    def __add__(self, other):
        return _linear_combination([(1.0, self), (1.0, other)])

    def __sub__(self, other):
        return _linear_combination([(1.0, self), (-1.0, other)])

    def __neg__(self):
        return self.scale(-1.0)

    def __mul__(self, c):
        return self.scale(float(c))

    __rmul__ = __mul__

    def to_dict(self) -> dict:
        return {
            "pieces": [list(p) for p in self.pieces],
            "atoms": [list(a) for a in self.atoms],
            "period": self.period,
        }

    @classmethod
    def from_dict(cls, data: dict) -> "LocalMeasure":
        return cls(
            tuple(tuple(p) for p in data.get("pieces", ())),
            tuple(tuple(a) for a in data.get("atoms", ())),
            data.get("period"),
        )


def _align(measures, window=None):
    """Bring measures to a shared description (common period or a window)."""
    if window is not None:
        lo, hi = window
        return [m.restrict(lo, hi) for m in measures], None
    periods = [m.period for m in measures if m.period is not None and not m.is_zero(0.0)]
    if not periods:
        if any(m.period is not None for m in measures) and all(m.is_zero(0.0) for m in measures):
            return [LocalMeasure() for _ in measures], None
        return list(measures), None
    if any(m.period is None and not m.is_zero(0.0) for m in measures):
        raise InvalidCombination("cannot combine periodic and non-periodic measures without a window")
    L = periods[0]
    for p in periods[1:]:
        L2 = common_period(L, p)
        if L2 is None:
            raise InvalidCombination(f"incommensurable periods {L} and {p}")
        L = L2
    out = []
    for m in measures:
        if m.is_zero(0.0):
            out.append(LocalMeasure(period=L))
        else:
            out.append(m.tile(L))
    return out, L


def _linear_combination(terms, window=None) -> LocalMeasure:
    coefs = [float(c) for c, _ in terms]
    measures, period = _align([m for _, m in terms], window)
    edges = np.unique(np.concatenate([m.breakpoints() for m in measures] + [np.zeros(0)]))
    pieces = ()
    if edges.size >= 2:
        mids = 0.5 * (edges[:-1] + edges[1:])
        dens = sum(c * np.asarray(m.density_at(mids)) for c, m in zip(coefs, measures))
        pieces = tuple(zip(edges[:-1], edges[1:], dens))
    atoms = tuple((x, c * w) for c, m in zip(coefs, measures) for x, w in m.atoms)
    return LocalMeasure(pieces, atoms, period)


def subtract(mu: LocalMeasure, nu: LocalMeasure, window=None) -> LocalMeasure:
    """Return ``mu - nu``.

    Periodic operands must have commensurable periods (the result carries
    their least common multiple) unless ``window=(lo, hi)`` is given, in
    which case both are first restricted to ``(lo, hi]``.

    Raises
    ------
    InvalidCombination
        Incommensurable periods, or periodic and non-periodic operands,
        without a window.
    """
    return _linear_combination([(1.0, mu), (-1.0, nu)], window)


def add(mu: LocalMeasure, nu: LocalMeasure, window=None) -> LocalMeasure:
    """Return ``mu + nu`` with the same alignment rules as :func:`subtract`."""
    return _linear_combination([(1.0, mu), (1.0, nu)], window)


def shift(mu: LocalMeasure, p: float) -> LocalMeasure:
    """``mu(. + p)``, the measure ``B -> mu(B + p)``."""
    return mu.shift(p)


def phi(mu: LocalMeasure, t):
    return mu.phi(t)


def tv_on_interval(mu: LocalMeasure, s: float, t: float) -> float:
    """Total variation ``|mu|((s, t])``; zero for empty intervals."""
    if t <= s:
        return 0.0
    return mu.abs.mass(s, t)


def unif_norm_r(mu: LocalMeasure, r: float) -> float:
    """``(1/r) sup_t |mu|((t, t + r])``, computed exactly.

    ``t -> |mu|((t, t + r])`` is piecewise affine with kinks and jumps only
    where ``t`` or ``t + r`` crosses a breakpoint, so the supremum is the
    largest one-sided limit at those critical points.
    """
    if not r > 0:
        raise InvalidParameter("window length r must be positive")
    nu = mu.abs
    pts = nu.breakpoints()
    if pts.size == 0:
        return 0.0
    c = np.concatenate([pts, pts - r])
    if nu.period is not None:
        c = np.mod(c, nu.period)
    right = nu.phi(c + r) - nu.phi(c)
    left = nu.phi_left(c + r) - nu.phi_left(c)
    return max(float(np.max(right)), float(np.max(left)), 0.0) / r


def unif_norm(mu: LocalMeasure) -> float:
    """``sup_t |mu|((t, t + 1])``."""
    return unif_norm_r(mu, 1.0)


def periodize(mu: LocalMeasure, p: float, alpha: float) -> LocalMeasure:
    """Periodic extension (period ``p``) of ``1_{(0, p]} mu``.

    The result agrees with ``mu`` on ``[alpha, p - alpha]``.  For ``p >= 1``
    its uniform norm is at most twice that of ``mu``: a unit window meets
    at most two translates of ``(0, p]``.
    """
    if not p > 0:
        raise InvalidParameter("period must be positive")
    if not (0 < alpha <= p / 2):
        raise InvalidParameter("need 0 < alpha <= p/2")
    r = mu.restrict(0.0, p)
    return LocalMeasure(r.pieces, r.atoms, p)
