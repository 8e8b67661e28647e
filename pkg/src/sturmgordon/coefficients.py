"""Coefficient triples ``(a, rho, mu)`` and the standard constructors.

``a`` is a positive step function (diffusion), ``rho`` a non-negative
periodic weight measure and ``mu`` a real potential measure.  The three
classical special cases are available as :func:`classical`,
:func:`schroedinger` and :func:`jacobi`.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from functools import cached_property
from typing import Optional, Sequence, Union

import numpy as np

from .errors import InvalidParameter
from .measure import TOL, LocalMeasure, common_period, unif_norm


def _clean_steps(pieces, period, default):
    out = []
    for s, e, v in pieces:
        s, e, v = float(s), float(e), float(v)
        if not (math.isfinite(s) and math.isfinite(e) and math.isfinite(v)):
            raise InvalidParameter("step entries must be finite")
        if v < 0:
            raise InvalidParameter("step function values must be non-negative")
        if e - s <= TOL:
            continue
        if period is not None:
            n = math.floor(s / period)
            s, e = s - n * period, e - n * period
            if s >= period - TOL:
                s, e = s - period, e - period
            s = max(s, 0.0)
            if e > period + TOL:
                out.append((s, period, v))
                out.append((0.0, e - period, v))
                continue
            e = min(e, period)
        out.append((s, e, v))
    out.sort()
    if period is not None:
        # fill gaps of the cell with the default value
        filled, cursor = [], 0.0
        for s, e, v in out:
            if s > cursor + TOL:
                filled.append((cursor, s, default))
            filled.append((s, e, v))
            cursor = e
        if cursor < period - TOL:
            filled.append((cursor, period, default))
        out = filled
    merged = []
    for s, e, v in out:
        if merged:
            ps, pe, pv = merged[-1]
            if s < pe - TOL:
                raise InvalidParameter("step pieces overlap")
            if abs(s - pe) <= TOL:
                s = pe
                if abs(v - pv) <= TOL:
                    merged[-1] = (ps, e, pv)
                    continue
        merged.append((s, e, v))
    return tuple(merged)


@dataclass(frozen=True)
class StepFunction:
    """Right-continuous step function with value ``v`` on ``[start, end)``.

    Non-periodic step functions equal ``default_value`` outside their
    pieces; periodic ones describe the cell ``[0, period)`` (gaps in the
    cell are filled with ``default_value``).
    """

    pieces: tuple = ()
    period: Optional[float] = None
    default_value: float = 1.0

    def __post_init__(self):
        period = None if self.period is None else float(self.period)
        if period is not None and not period > 0:
            raise InvalidParameter("period must be positive")
        default = float(self.default_value)
        if default < 0:
            raise InvalidParameter("default value must be non-negative")
        object.__setattr__(self, "period", period)
        object.__setattr__(self, "default_value", default)
        object.__setattr__(self, "pieces", _clean_steps(self.pieces, period, default))

    @classmethod
    def constant(cls, value: float, period: float = 1.0) -> "StepFunction":
        return cls(((0.0, period, value),), period=period, default_value=value)

    @cached_property
    def _starts(self):
        return np.array([p[0] for p in self.pieces], dtype=float)

    @cached_property
    def _ends(self):
        return np.array([p[1] for p in self.pieces], dtype=float)

    @cached_property
    def _vals(self):
        return np.array([p[2] for p in self.pieces], dtype=float)

    def __call__(self, x):
        x = np.asarray(x, dtype=float)
        if self.period is not None:
            x = np.mod(x, self.period)
            x = np.where(x >= self.period - TOL, 0.0, x)
        if not self.pieces:
            out = np.full_like(x, self.default_value)
        else:
            idx = np.searchsorted(self._starts, x + TOL, side="right") - 1
            safe = np.clip(idx, 0, None)
            inside = (idx >= 0) & (x < self._ends[safe] - TOL)
            out = np.where(inside, self._vals[safe], self.default_value)
        return out if out.ndim else float(out)

    @property
    def values(self) -> np.ndarray:
        vals = self._vals
        if self.period is None:
            vals = np.append(vals, self.default_value)
        return vals

    @property
    def sup(self) -> float:
        """``||a||_inf``."""
        return float(np.max(self.values))

    @property
    def inf(self) -> float:
        return float(np.min(self.values))

    @property
    def inv_sup(self) -> float:
        """``||1/a||_inf`` (``inf`` if ``a`` touches zero)."""
        m = self.inf
        return math.inf if m <= 0 else 1.0 / m

    def breakpoints(self, lo: float, hi: float) -> np.ndarray:
        """Jump locations strictly inside ``(lo, hi)``."""
        pts = np.concatenate([self._starts, self._ends]) if self.pieces else np.zeros(0)
        if self.period is not None and pts.size:
            P = self.period
            ns = np.arange(math.floor(lo / P) - 1, math.ceil(hi / P) + 2) * P
            pts = (pts[None, :] + ns[:, None]).ravel()
        pts = np.unique(pts)
        return pts[(pts > lo + TOL) & (pts < hi - TOL)]

    def shift(self, p: float) -> "StepFunction":
        """``x -> a(x + p)``."""
        return StepFunction(
            tuple((s - p, e - p, v) for s, e, v in self.pieces), self.period, self.default_value
        )

    def window(self, lo: float, hi: float) -> "StepFunction":
        """Non-periodic copy describing ``[lo, hi)`` exactly.

        Outside the window the copy takes the value ``sup``, which leaves
        ``||a||_inf`` and ``||1/a||_inf`` unchanged.
        """
        edges = np.concatenate([[lo], self.breakpoints(lo, hi), [hi]])
        mids = 0.5 * (edges[:-1] + edges[1:])
        return StepFunction(tuple(zip(edges[:-1], edges[1:], self(mids))), None, self.sup)

    def as_density(self) -> LocalMeasure:
        """The measure ``a * Lebesgue`` (periodic step functions only)."""
        if self.period is None:
            if self.default_value != 0:
                raise InvalidParameter("non-periodic step function with nonzero default has infinite mass")
            return LocalMeasure(self.pieces)
        return LocalMeasure(self.pieces, (), self.period)

    def to_dict(self) -> dict:
        return {"pieces": [list(p) for p in self.pieces], "period": self.period,
                "default": self.default_value}

    @classmethod
    def from_dict(cls, data: dict) -> "StepFunction":
        return cls(tuple(tuple(p) for p in data.get("pieces", ())), data.get("period"),
                   data.get("default", 1.0))


def l1_distance(f: StepFunction, g: StepFunction, lo: float, hi: float) -> float:
    """Exact ``int_lo^hi |f - g|``."""
    if hi <= lo:
        return 0.0
    edges = np.unique(np.concatenate([[lo, hi], f.breakpoints(lo, hi), g.breakpoints(lo, hi)]))
    mids = 0.5 * (edges[:-1] + edges[1:])
    return float(np.sum(np.abs(f(mids) - g(mids)) * np.diff(edges)))


def add_steps(f: StepFunction, g: StepFunction, window=None) -> StepFunction:
    """Pointwise sum; needs a common period or an explicit ``window``."""
    if window is None:
        if f.period is None or g.period is None:
            raise InvalidParameter("sum of non-periodic step functions needs a window")
        L = common_period(f.period, g.period)
        if L is None:
            raise InvalidParameter("incommensurable periods need a window")
        lo, hi = 0.0, L
    else:
        lo, hi = window
        L = None
    edges = np.unique(np.concatenate([[lo, hi], f.breakpoints(lo, hi), g.breakpoints(lo, hi)]))
    mids = 0.5 * (edges[:-1] + edges[1:])
    pieces = tuple(zip(edges[:-1], edges[1:], f(mids) + g(mids)))
    if L is not None:
        return StepFunction(pieces, L, f.default_value + g.default_value)
    return StepFunction(pieces, None, max(p[2] for p in pieces))


@dataclass(frozen=True)
class Coefficients:
    """A triple ``(a, rho, mu)``: diffusion, weight and potential."""

    diffusion: StepFunction
    weight: LocalMeasure
    potential: LocalMeasure

    def shifted_potential(self, z: float, window=None) -> LocalMeasure:
        """``mu - z rho``, the potential of ``H u = z u`` rewritten as ``H u = 0``."""
        if z == 0:
            return self.potential if window is None else self.potential.restrict(*window)
        from .measure import _linear_combination

        return _linear_combination([(1.0, self.potential), (-z, self.weight)], window)

    def to_dict(self) -> dict:
        return {"diffusion": self.diffusion.to_dict(), "weight": self.weight.to_dict(),
                "potential": self.potential.to_dict()}

    @classmethod
    def from_dict(cls, data: dict) -> "Coefficients":
        return cls(StepFunction.from_dict(data["diffusion"]), LocalMeasure.from_dict(data["weight"]),
                   LocalMeasure.from_dict(data["potential"]))


@dataclass
class ValidationReport:
    """Diagnostics for a coefficient triple; ``ok`` iff every check passed."""

    a_sup: float
    inv_a_sup: float
    mu_unif: float
    rho_unif: float
    checks: dict = field(default_factory=dict)
    messages: list = field(default_factory=list)

    @property
    def ok(self) -> bool:
        return all(self.checks.values())

    @property
    def norms(self):
        return (self.a_sup, self.inv_a_sup, self.mu_unif, self.rho_unif)


def _closed_cover(intervals):
    out = []
    for s, e in sorted(intervals):
        if out and s <= out[-1][1] + 1e-12:
            out[-1][1] = max(out[-1][1], e)
        else:
            out.append([s, e])
    return out


def support_contained(mu: LocalMeasure, rho: LocalMeasure) -> bool:
    """Check ``spt mu`` inside ``spt rho`` for the piecewise representations."""
    if mu.is_zero():
        return True
    if mu.period is None:
        pts = mu.breakpoints()
        lo, hi = float(pts.min()) - 1.0, float(pts.max()) + 1.0
    else:
        L = common_period(mu.period, rho.period) if rho.period is not None else None
        # incommensurable periods: check a long stretch
        span = L if L is not None else 10.0 * max(mu.period, rho.period or 0.0)
        lo, hi = -1.0, span + 1.0
    m = mu.restrict(lo, hi)
    r = rho.restrict(lo - 1.0, hi + 1.0)
    cover = _closed_cover([(s, e) for s, e, d in r.pieces if d > 0])
    ratoms = np.array([x for x, w in r.atoms if w > 0])

    def covered(s, e):
        return any(cs - 1e-12 <= s and e <= ce + 1e-12 for cs, ce in cover)

    for x, _ in m.atoms:
        if not (covered(x, x) or (ratoms.size and np.min(np.abs(ratoms - x)) <= 1e-12)):
            return False
    return all(covered(s, e) for s, e, d in m.pieces if d != 0)


def validate(c: Coefficients) -> ValidationReport:
    """Check membership of ``(a, mu)`` in the admissible class for ``rho``.

    Never raises; failures are reported in ``checks`` and ``messages``.
    """
    a = c.diffusion
    rep = ValidationReport(a.sup, a.inv_sup, unif_norm(c.potential), unif_norm(c.weight))
    rep.checks["a bounded"] = math.isfinite(rep.a_sup)
    rep.checks["1/a bounded"] = math.isfinite(rep.inv_a_sup)
    rep.checks["rho nonnegative"] = c.weight.is_nonnegative()
    rep.checks["rho nonzero"] = not c.weight.is_zero()
    rep.checks["rho periodic"] = c.weight.period is not None
    rep.checks["spt mu in spt rho"] = support_contained(c.potential, c.weight)
    labels = {
        "a bounded": "a unbounded",
        "1/a bounded": "1/a unbounded",
        "rho nonnegative": "rho has negative parts",
        "rho nonzero": "rho is zero",
        "rho periodic": "rho not periodic",
        "spt mu in spt rho": "spt mu not contained in spt rho",
    }
    rep.messages = [labels[k] for k, v in rep.checks.items() if not v]
    return rep


Scalar = Union[int, float]


def _as_step(a, name) -> StepFunction:
    if isinstance(a, StepFunction):
        return a
    a = float(a)
    if not a > 0:
        raise InvalidParameter(f"{name} must be positive")
    return StepFunction.constant(a)


def _as_density(q) -> LocalMeasure:
    if isinstance(q, LocalMeasure):
        if q.atoms:
            raise InvalidParameter("a density potential cannot carry atoms")
        return q
    if isinstance(q, StepFunction):
        return q.as_density()
    return LocalMeasure.lebesgue(float(q)) if float(q) != 0 else LocalMeasure()


def classical(r, a, q) -> Coefficients:
    """``rho = r dx``, ``mu = q dx``: the classical Sturm-Liouville operator.

    ``r`` and ``a`` may be positive numbers or step functions (``r``
    periodic); ``q`` a number, a periodic step function or an atomless
    :class:`LocalMeasure` (signed densities allowed).
    """
    if isinstance(r, StepFunction):
        if r.period is None or r.inf <= 0:
            raise InvalidParameter("r must be periodic and positive")
        rho = r.as_density()
    else:
        if not float(r) > 0:
            raise InvalidParameter("r must be positive")
        rho = LocalMeasure.lebesgue(float(r))
    return Coefficients(_as_step(a, "a"), rho, _as_density(q))


def schroedinger(mu: LocalMeasure) -> Coefficients:
    """``a = 1``, ``rho = Lebesgue``: ``H u = -u'' + u mu``."""
    return Coefficients(StepFunction.constant(1.0), LocalMeasure.lebesgue(), mu)


def jacobi(a_seq: Sequence[float], b_seq: Sequence[float], offset: int = 0,
           periodic: bool = True, a_default: float = 1.0) -> Coefficients:
    """Jacobi operator ``rho = sum delta_n``, ``a = sum a_n 1_[n, n+1)``, ``mu = sum b_n delta_n``.

    With ``periodic=True`` the sequences are one period each (the common
    period is the lcm of their lengths).  Otherwise ``a_seq[k]`` and
    ``b_seq[k]`` sit at ``n = offset + k``; outside, ``a = a_default`` and
    ``b = 0``.
    """
    a_seq = [float(v) for v in a_seq]
    b_seq = [float(v) for v in b_seq]
    if not a_seq or any(not v > 0 for v in a_seq) or not a_default > 0:
        raise InvalidParameter("a_n must be positive")
    rho = LocalMeasure.lattice(1.0)
    if periodic:
        if not b_seq:
            b_seq = [0.0]
        N = math.lcm(len(a_seq), len(b_seq))
        a = StepFunction(tuple((n, n + 1, a_seq[n % len(a_seq)]) for n in range(N)), N, a_default)
        mu = LocalMeasure((), tuple((n, b_seq[n % len(b_seq)]) for n in range(N)), N)
    else:
        a = StepFunction(tuple((offset + k, offset + k + 1, v) for k, v in enumerate(a_seq)),
                         None, a_default)
        mu = LocalMeasure((), tuple((offset + k, v) for k, v in enumerate(b_seq)))
    return Coefficients(a, rho, mu)
