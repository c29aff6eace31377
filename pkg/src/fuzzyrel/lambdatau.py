"""Lambda-tau gate algebra and bottom-up reduction of a gate tree.

The four gate formulas are written once against ``+ * /`` so they work on
floats, on :class:`~fuzzyrel.fuzzy.Interval` (naive fuzzy mode) and on numpy
arrays (vertex fuzzy mode) without change.
"""

from __future__ import annotations

from dataclasses import dataclass
from functools import reduce
from itertools import product
from operator import add, mul
from typing import Sequence

import numpy as np

from .fuzzy import (
    DEFAULT_ALPHA_LEVELS,
    FuzzyProfile,
    Interval,
    SpreadSpec,
    alpha_grid,
    nested_hull,
    tfn_from_spread,
)
from .model import AND, Ref, SystemModel

NAIVE = "naive"
VERTEX = "vertex"
MODES = (NAIVE, VERTEX)

# 2**k endpoint combinations are evaluated per alpha level in vertex mode
VERTEX_MAX_VARIABLES = 20
VERTEX_CHUNK = 1 << 20


def _sum(xs):
    return reduce(add, xs)


def _prod(xs):
    xs = list(xs)
    return reduce(mul, xs) if xs else 1.0


def _check_pair(lambdas, taus):
    if len(lambdas) == 0:
        raise ValueError("empty gate input")
    if len(lambdas) != len(taus):
        raise ValueError(f"{len(lambdas)} failure rates but {len(taus)} repair times")


def _leave_one_out_sum(taus):
    n = len(taus)
    return _sum(_prod(taus[j] for j in range(n) if j != i) for i in range(n))


def lambda_and(lambdas: Sequence, taus: Sequence):
    _check_pair(lambdas, taus)
    return _prod(lambdas) * _leave_one_out_sum(taus)


def tau_and(taus: Sequence):
    """Product of repair times over the sum of leave-one-out products.

    Equal to ``1 / sum(1/tau)`` in exact arithmetic.
    """
    if len(taus) == 0:
        raise ValueError("empty gate input")
    return _prod(taus) / _leave_one_out_sum(taus)


def lambda_or(lambdas: Sequence):
    if len(lambdas) == 0:
        raise ValueError("empty gate input")
    return _sum(lambdas)


def tau_or(lambdas: Sequence, taus: Sequence):
    """Failure-rate weighted mean of repair times."""
    _check_pair(lambdas, taus)
    return _sum(l * t for l, t in zip(lambdas, taus)) / _sum(lambdas)


def gate(kind: str, lambdas: Sequence, taus: Sequence):
    """(lambda, tau) of one gate from its children's values."""
    lambdas, taus = list(lambdas), list(taus)
    if len(lambdas) == 1:
        _check_pair(lambdas, taus)
        return lambdas[0], taus[0]
    if kind == AND:
        return lambda_and(lambdas, taus), tau_and(taus)
    return lambda_or(lambdas), tau_or(lambdas, taus)


def reduce_tree(node, values: dict):
    """Fold the gate tree bottom-up; ``values`` maps component id to (lambda, tau)."""
    if isinstance(node, Ref):
        return values[node.id]
    pairs = [reduce_tree(c, values) for c in node.children]
    return gate(node.kind, [p[0] for p in pairs], [p[1] for p in pairs])


@dataclass(frozen=True)
class SystemRates:
    lambda_s: float
    tau_s: float

    def __post_init__(self):
        if not (self.lambda_s > 0 and self.tau_s > 0):
            raise ValueError(f"system rates must be positive, got lambda={self.lambda_s!r} tau={self.tau_s!r}")

    @property
    def mu_s(self) -> float:
        return 1.0 / self.tau_s


@dataclass(frozen=True)
class FuzzySystemRates:
    lambda_s: FuzzyProfile
    tau_s: FuzzyProfile

    def __post_init__(self):
        if not self.lambda_s.same_grid(self.tau_s):
            raise ValueError("lambda and tau profiles use different alpha grids")
        if self.lambda_s.lows[0] <= 0 or self.tau_s.lows[0] <= 0:
            raise ValueError("fuzzy system rates must be strictly positive")

    @property
    def alphas(self) -> np.ndarray:
        return self.lambda_s.alphas

    def at(self, alpha: float) -> tuple[Interval, Interval]:
        return self.lambda_s.cut(alpha), self.tau_s.cut(alpha)


def reduce_crisp(m: SystemModel) -> SystemRates:
    lam, tau = reduce_tree(m.top, {c.id: (c.lam, c.tau) for c in m.components})
    return SystemRates(float(lam), float(tau))


def _leaf_cuts(m: SystemModel, spread: SpreadSpec, alphas: np.ndarray):
    """Per component, arrays of (lambda_lo, lambda_hi, tau_lo, tau_hi) over the alpha grid."""
    w = 1.0 - alphas
    out = {}
    for c in m.components:
        lt = tfn_from_spread(c.lam, spread)
        tt = tfn_from_spread(c.tau, spread)
        out[c.id] = (
            lt.mode - w * (lt.mode - lt.left),
            lt.mode + w * (lt.right - lt.mode),
            tt.mode - w * (tt.mode - tt.left),
            tt.mode + w * (tt.right - tt.mode),
        )
    return out


def _reduce_naive(m, cuts, alphas):
    lam_lo, lam_hi, tau_lo, tau_hi = [], [], [], []
    for i in range(alphas.size):
        values = {
            cid: (Interval(float(c[0][i]), float(c[1][i])), Interval(float(c[2][i]), float(c[3][i])))
            for cid, c in cuts.items()
        }
        lam, tau = reduce_tree(m.top, values)
        lam_lo.append(lam.lo)
        lam_hi.append(lam.hi)
        tau_lo.append(tau.lo)
        tau_hi.append(tau.hi)
    return lam_lo, lam_hi, tau_lo, tau_hi


def _reduce_vertex(m, cuts, alphas):
    ids = list(m.ids)
    k = 2 * len(ids)
    if k > VERTEX_MAX_VARIABLES:
        raise ValueError(
            f"vertex mode enumerates 2**{k} endpoint combinations; limit is 2**{VERTEX_MAX_VARIABLES}"
        )
    # bits[v, j]: which endpoint variable v takes in combination j
    bits = np.array(list(product((0, 1), repeat=k)), dtype=bool).T
    combos = bits.shape[1]
    step = max(1, VERTEX_CHUNK // combos)
    out = [np.empty(alphas.size) for _ in range(4)]
    for start in range(0, alphas.size, step):
        rows = slice(start, start + step)
        values = {}
        for n, cid in enumerate(ids):
            lam_lo, lam_hi, tau_lo, tau_hi = (a[rows, None] for a in cuts[cid])
            values[cid] = (
                np.where(bits[2 * n], lam_hi, lam_lo),
                np.where(bits[2 * n + 1], tau_hi, tau_lo),
            )
        lam, tau = reduce_tree(m.top, values)
        shape = (len(range(*rows.indices(alphas.size))), combos)
        lam, tau = np.broadcast_to(lam, shape), np.broadcast_to(tau, shape)
        out[0][rows], out[1][rows] = lam.min(axis=1), lam.max(axis=1)
        out[2][rows], out[3][rows] = tau.min(axis=1), tau.max(axis=1)
    return out


def reduce_fuzzy(
    m: SystemModel,
    spread,
    alpha_levels: int = DEFAULT_ALPHA_LEVELS,
    mode: str = NAIVE,
) -> FuzzySystemRates:
    """Fuzzy (lambda_s, tau_s) of the top event.

    Every component's failure rate and repair time is fuzzified with the
    same symmetric spread. ``naive`` evaluates the gate formulas with
    interval arithmetic as written, so a variable appearing twice in one
    formula is treated as two independent copies. ``vertex`` evaluates the
    crisp reduction at every combination of component endpoints and keeps the
    extremes, which is never wider than ``naive``.
    """
    spread = spread if isinstance(spread, SpreadSpec) else SpreadSpec(float(spread))
    if mode not in MODES:
        raise ValueError(f"mode must be one of {MODES}, got {mode!r}")
    alphas = alpha_grid(alpha_levels)
    cuts = _leaf_cuts(m, spread, alphas)
    if mode == NAIVE:
        lam_lo, lam_hi, tau_lo, tau_hi = _reduce_naive(m, cuts, alphas)
    else:
        lam_lo, lam_hi, tau_lo, tau_hi = _reduce_vertex(m, cuts, alphas)
    return FuzzySystemRates(
        FuzzyProfile(alphas, *nested_hull(lam_lo, lam_hi)),
        FuzzyProfile(alphas, *nested_hull(tau_lo, tau_hi)),
    )
