"""Triangular fuzzy numbers, alpha-cut intervals and centre-of-area defuzzification.

A fuzzy quantity is carried through the rest of the package as a
:class:`FuzzyProfile`: a stack of nested closed intervals, one per
membership grade alpha. Triangular inputs are cut into such a stack, the
stack is pushed through interval arithmetic level by level, and the final
profile is collapsed back to a crisp number with :func:`coa_defuzzify`.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Iterable

import numpy as np

DEFAULT_ALPHA_LEVELS = 101
DEFAULT_GRID_POINTS = 2001


@dataclass(frozen=True)
class Interval:
    """Closed real interval ``[lo, hi]``.

    Supports ``+ - * /`` against other intervals and plain reals, so that
    formulas written for floats evaluate unchanged on intervals.
    """

    lo: float
    hi: float

    def __post_init__(self):
        if not self.lo <= self.hi:
            raise ValueError(f"interval lower bound {self.lo!r} exceeds upper bound {self.hi!r}")

    @classmethod
    def point(cls, x: float) -> "Interval":
        return cls(x, x)

    @property
    def width(self) -> float:
        return self.hi - self.lo

    def contains(self, x: float) -> bool:
        return self.lo <= x <= self.hi

    def issubset(self, other: "Interval") -> bool:
        return other.lo <= self.lo and self.hi <= other.hi

    def __add__(self, other):
        return interval_arith("add", self, _as_interval(other))

    def __radd__(self, other):
        return interval_arith("add", _as_interval(other), self)

    def __sub__(self, other):
        return interval_arith("sub", self, _as_interval(other))

    def __rsub__(self, other):
        return interval_arith("sub", _as_interval(other), self)

    def __mul__(self, other):
        return interval_arith("mul", self, _as_interval(other))

    def __rmul__(self, other):
        return interval_arith("mul", _as_interval(other), self)

    def __truediv__(self, other):
        return interval_arith("div", self, _as_interval(other))

    def __rtruediv__(self, other):
        return interval_arith("div", _as_interval(other), self)


def _as_interval(x) -> Interval:
    if isinstance(x, Interval):
        return x
    return Interval.point(float(x))


def interval_arith(op: str, a: Interval, b: Interval) -> Interval:
    """Apply ``op`` (one of add, sub, mul, div) to two intervals.

    mul and div take the min/max over endpoint products, which reduces to
    ``[a.lo*b.lo, a.hi*b.hi]`` and ``[a.lo/b.hi, a.hi/b.lo]`` for positive
    operands. Division by an interval that contains or touches zero is
    rejected.
    """
    if op == "add":
        return Interval(a.lo + b.lo, a.hi + b.hi)
    if op == "sub":
        return Interval(a.lo - b.hi, a.hi - b.lo)
    if op == "mul":
        if a.lo >= 0 and b.lo >= 0:
            return Interval(a.lo * b.lo, a.hi * b.hi)
        p = (a.lo * b.lo, a.lo * b.hi, a.hi * b.lo, a.hi * b.hi)
        return Interval(min(p), max(p))
    if op == "div":
        if b.lo <= 0 <= b.hi:
            raise ZeroDivisionError(f"division by interval [{b.lo!r}, {b.hi!r}] touching zero")
        if a.lo >= 0 and b.lo > 0:
            return Interval(a.lo / b.hi, a.hi / b.lo)
        q = (a.lo / b.lo, a.lo / b.hi, a.hi / b.lo, a.hi / b.hi)
        return Interval(min(q), max(q))
    raise ValueError(f"unknown interval operation {op!r}")


@dataclass(frozen=True)
class SpreadSpec:
    """Symmetric relative half-width used to fuzzify a crisp value."""

    fraction: float

    def __post_init__(self):
        f = self.fraction
        if not (isinstance(f, (int, float)) and math.isfinite(f) and 0 <= f < 1):
            raise ValueError(f"spread fraction must lie in [0, 1), got {f!r}")

    @property
    def label(self) -> str:
        """Percentage label, e.g. ``"15"`` for 0.15."""
        return f"{self.fraction * 100:.10g}"


def _spread(spread) -> SpreadSpec:
    return spread if isinstance(spread, SpreadSpec) else SpreadSpec(float(spread))


@dataclass(frozen=True)
class TriangularFuzzyNumber:
    left: float
    mode: float
    right: float

    def __post_init__(self):
        if not self.left <= self.mode <= self.right:
            raise ValueError(
                f"triangular fuzzy number needs left <= mode <= right, got "
                f"({self.left!r}, {self.mode!r}, {self.right!r})"
            )

    def membership(self, x: float) -> float:
        if x < self.left or x > self.right:
            return 0.0
        if x == self.mode:
            return 1.0
        if x < self.mode:
            return (x - self.left) / (self.mode - self.left)
        return (self.right - x) / (self.right - self.mode)

    @property
    def centroid(self) -> float:
        return (self.left + self.mode + self.right) / 3.0


def tfn_from_spread(mode: float, spread) -> TriangularFuzzyNumber:
    """Symmetric TFN ``(mode*(1-s), mode, mode*(1+s))`` around a positive value."""
    s = _spread(spread).fraction
    if not mode > 0:
        raise ValueError(f"mode must be positive, got {mode!r}")
    return TriangularFuzzyNumber(mode * (1 - s), mode, mode * (1 + s))


def alpha_cut(t: TriangularFuzzyNumber, alpha: float) -> Interval:
    if not 0 <= alpha <= 1:
        raise ValueError(f"alpha must lie in [0, 1], got {alpha!r}")
    # anchored on the mode so that alpha = 1 reproduces it bit for bit
    w = 1.0 - alpha
    return Interval(t.mode - w * (t.mode - t.left), t.mode + w * (t.right - t.mode))


def alpha_grid(levels: int = DEFAULT_ALPHA_LEVELS) -> np.ndarray:
    """Uniform membership grades ``0, 1/(n-1), ..., 1``."""
    if isinstance(levels, bool) or not isinstance(levels, (int, np.integer)) or levels < 2:
        raise ValueError(f"need at least 2 alpha levels, got {levels!r}")
    return np.linspace(0.0, 1.0, int(levels))


class FuzzyProfile:
    """Fuzzy quantity stored as nested alpha-cuts.

    ``alphas`` must be strictly increasing from 0 to 1; ``lows`` must be
    nondecreasing and ``highs`` nonincreasing (the cuts shrink as alpha
    grows). The arrays are read-only.
    """

    __slots__ = ("alphas", "lows", "highs")

    def __init__(self, alphas, lows, highs):
        a = np.array(alphas, dtype=float)
        lo = np.array(lows, dtype=float)
        hi = np.array(highs, dtype=float)
        if a.ndim != 1 or a.size == 0:
            raise ValueError("empty fuzzy profile")
        if lo.shape != a.shape or hi.shape != a.shape:
            raise ValueError("alpha, low and high arrays differ in length")
        if a[0] != 0.0 or a[-1] != 1.0:
            raise ValueError("profile must include alpha = 0 and alpha = 1")
        if a.size > 1 and not np.all(np.diff(a) > 0):
            raise ValueError("alpha levels must be strictly increasing")
        if not np.all(np.isfinite(lo)) or not np.all(np.isfinite(hi)):
            raise ValueError("non-finite cut endpoint")
        if np.any(lo > hi):
            raise ValueError("cut with lower bound above upper bound")
        if np.any(np.diff(lo) < 0) or np.any(np.diff(hi) > 0):
            raise ValueError("alpha-cuts are not nested")
        for arr in (a, lo, hi):
            arr.flags.writeable = False
        object.__setattr__(self, "alphas", a)
        object.__setattr__(self, "lows", lo)
        object.__setattr__(self, "highs", hi)

    def __setattr__(self, name, value):
        raise AttributeError("FuzzyProfile is immutable")

    @classmethod
    def from_tfn(cls, t: TriangularFuzzyNumber, levels=DEFAULT_ALPHA_LEVELS) -> "FuzzyProfile":
        alphas = levels if isinstance(levels, np.ndarray) else alpha_grid(levels)
        w = 1.0 - alphas
        lows = t.mode - w * (t.mode - t.left)
        highs = t.mode + w * (t.right - t.mode)
        return cls(alphas, lows, highs)

    @classmethod
    def from_cuts(cls, levels: Iterable[tuple[float, Interval]]) -> "FuzzyProfile":
        levels = list(levels)
        return cls([a for a, _ in levels], [c.lo for _, c in levels], [c.hi for _, c in levels])

    @classmethod
    def crisp(cls, x: float, levels=DEFAULT_ALPHA_LEVELS) -> "FuzzyProfile":
        alphas = levels if isinstance(levels, np.ndarray) else alpha_grid(levels)
        return cls(alphas, np.full(alphas.shape, x), np.full(alphas.shape, x))

    @property
    def levels(self) -> list[tuple[float, Interval]]:
        return [(float(a), Interval(float(l), float(h))) for a, l, h in zip(self.alphas, self.lows, self.highs)]

    def cut(self, alpha: float) -> Interval:
        """Cut at a stored alpha level."""
        idx = np.flatnonzero(self.alphas == alpha)
        if idx.size == 0:
            raise KeyError(f"alpha {alpha!r} is not a stored level")
        i = int(idx[0])
        return Interval(float(self.lows[i]), float(self.highs[i]))

    @property
    def support(self) -> Interval:
        return Interval(float(self.lows[0]), float(self.highs[0]))

    @property
    def core(self) -> Interval:
        return Interval(float(self.lows[-1]), float(self.highs[-1]))

    def same_grid(self, other: "FuzzyProfile") -> bool:
        return self.alphas.shape == other.alphas.shape and bool(np.all(self.alphas == other.alphas))

    def __len__(self):
        return self.alphas.size

    def __eq__(self, other):
        if not isinstance(other, FuzzyProfile):
            return NotImplemented
        return (
            self.same_grid(other)
            and bool(np.all(self.lows == other.lows))
            and bool(np.all(self.highs == other.highs))
        )

    __hash__ = None

    def __repr__(self):
        s, c = self.support, self.core
        return f"FuzzyProfile(levels={len(self)}, support=[{s.lo!r}, {s.hi!r}], core=[{c.lo!r}, {c.hi!r}])"


def nested_hull(lows, highs):
    """Widen each cut to contain every cut above it.

    Exact nested inputs pass through unchanged; this only absorbs rounding
    jitter from endpoint scans, and never touches the alpha = 1 cut.
    """
    lows = np.minimum.accumulate(np.asarray(lows, dtype=float)[::-1])[::-1]
    highs = np.maximum.accumulate(np.asarray(highs, dtype=float)[::-1])[::-1]
    return lows, highs


def _membership_side(edges: np.ndarray, alphas: np.ndarray, x: np.ndarray) -> np.ndarray:
    # edges nondecreasing in alpha; returns the largest alpha with edge <= x, interpolated.
    n = edges.size
    k = np.searchsorted(edges, x, side="right") - 1
    out = np.zeros_like(x)
    full = k >= n - 1
    out[full] = 1.0
    mid = (k >= 0) & ~full
    km = k[mid]
    e0, e1 = edges[km], edges[km + 1]
    a0, a1 = alphas[km], alphas[km + 1]
    out[mid] = a0 + (a1 - a0) * (x[mid] - e0) / (e1 - e0)
    return out


def membership_at(p: FuzzyProfile, x):
    """Membership grade of ``x`` under profile ``p``.

    Accepts a scalar or an array. Outside the support the grade is 0.
    """
    xs = np.atleast_1d(np.asarray(x, dtype=float))
    out = np.zeros_like(xs)
    inside = (xs >= p.lows[0]) & (xs <= p.highs[0])
    core = (xs >= p.lows[-1]) & (xs <= p.highs[-1])
    out[core] = 1.0
    left = inside & ~core & (xs < p.lows[-1])
    right = inside & ~core & (xs > p.highs[-1])
    if np.any(left):
        out[left] = _membership_side(p.lows, p.alphas, xs[left])
    if np.any(right):
        # mirror so the right edges become nondecreasing
        out[right] = _membership_side(-p.highs, p.alphas, -xs[right])
    if np.ndim(x) == 0:
        return float(out[0])
    return out


def coa_defuzzify(p: FuzzyProfile, grid_points: int = DEFAULT_GRID_POINTS) -> float:
    """Centre-of-area of ``p`` by the trapezoidal rule over its support.

    The grid is ``grid_points`` uniform samples plus every stored cut
    endpoint. A degenerate support returns its single point.
    """
    if p is None or len(p) == 0:
        raise ValueError("empty fuzzy profile")
    if grid_points < 2:
        raise ValueError(f"grid_points must be at least 2, got {grid_points!r}")
    x1, x2 = float(p.lows[0]), float(p.highs[0])
    if x1 == x2:
        return x1
    # the profile's own breakpoints join the uniform grid so the rule is exact
    # on the piecewise-linear membership
    knots = np.concatenate([p.lows, p.highs])
    xs = np.unique(np.concatenate([np.linspace(x1, x2, int(grid_points)), knots[(knots > x1) & (knots < x2)]]))
    mu = membership_at(p, xs)
    den = np.trapezoid(mu, xs)
    if den <= 0:
        return 0.5 * (x1 + x2)
    xbar = float(np.trapezoid(xs * mu, xs) / den)
    return min(max(xbar, x1), x2)

