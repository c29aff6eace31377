"""System reliability parameters: crisp, per alpha-cut, and defuzzified."""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np

from .fuzzy import DEFAULT_ALPHA_LEVELS, DEFAULT_GRID_POINTS, FuzzyProfile, SpreadSpec, coa_defuzzify, nested_hull
from .lambdatau import NAIVE, FuzzySystemRates, SystemRates, reduce_crisp, reduce_fuzzy
from .model import SystemModel

PARAMETERS = ("failure_rate", "repair_time", "enof", "mtbf", "reliability", "availability")

UNITS = {
    "failure_rate": "1/h",
    "repair_time": "h",
    "enof": "",
    "mtbf": "h",
    "reliability": "",
    "availability": "",
}


def _check_time(t: float) -> float:
    t = float(t)
    if not (math.isfinite(t) and t >= 0):
        raise ValueError(f"mission time must be a finite nonnegative number of hours, got {t!r}")
    return t


def availability(lam, mu, t):
    """mu/(lam+mu) + lam/(lam+mu) * exp(-(lam+mu) t), written so that A(0) == 1 exactly."""
    s = lam + mu
    return 1.0 + lam / s * np.expm1(-s * t)


def expected_failures(lam, mu, t):
    s = lam + mu
    return lam * mu * t / s - lam**2 / s**2 * np.expm1(-s * t)


def reliability(lam, t):
    return np.exp(-lam * t)


def mission_time_for_reliability(target: float, lambda_s: float) -> float:
    """Time at which ``exp(-lambda_s * t)`` equals ``target``."""
    if not 0 < target <= 1:
        raise ValueError(f"reliability target must lie in (0, 1], got {target!r}")
    if not lambda_s > 0:
        raise ValueError(f"failure rate must be positive, got {lambda_s!r}")
    return -math.log(target) / lambda_s


@dataclass(frozen=True)
class PointMeasures:
    failure_rate: float
    repair_time: float
    mttf: float
    mttr: float
    mtbf: float
    reliability: float
    availability: float
    enof: float

    def as_dict(self) -> dict:
        return {p: getattr(self, p) for p in PARAMETERS}


def point_measures(r: SystemRates, t: float) -> PointMeasures:
    lam, tau = float(r.lambda_s), float(r.tau_s)
    if not (lam > 0 and tau > 0):
        raise ValueError("system rates must be positive")
    t = _check_time(t)
    mu = 1.0 / tau
    mttf = 1.0 / lam
    return PointMeasures(
        failure_rate=lam,
        repair_time=tau,
        mttf=mttf,
        mttr=tau,
        mtbf=mttf + tau,
        reliability=float(reliability(lam, t)),
        availability=float(availability(lam, mu, t)),
        enof=float(expected_failures(lam, mu, t)),
    )


def _box_extremes(func, lam_lo, lam_hi, mu_lo, mu_hi):
    # vertices, edge midpoints and centre of each (lambda, mu) box
    lams = (lam_lo, 0.5 * (lam_lo + lam_hi), lam_hi)
    mus = (mu_lo, 0.5 * (mu_lo + mu_hi), mu_hi)
    vals = np.stack([func(l, m) for l in lams for m in mus])
    return vals.min(axis=0), vals.max(axis=0)


def fuzzy_measures(fr: FuzzySystemRates, t: float) -> dict[str, FuzzyProfile]:
    """Per-parameter profiles from fuzzy system rates at mission time ``t``."""
    if not fr.lambda_s.same_grid(fr.tau_s):
        raise ValueError("lambda and tau profiles use different alpha grids")
    t = _check_time(t)
    alphas = fr.alphas
    lam_lo, lam_hi = fr.lambda_s.lows, fr.lambda_s.highs
    tau_lo, tau_hi = fr.tau_s.lows, fr.tau_s.highs
    mu_lo, mu_hi = 1.0 / tau_hi, 1.0 / tau_lo

    a_lo, a_hi = _box_extremes(lambda l, m: availability(l, m, t), lam_lo, lam_hi, mu_lo, mu_hi)
    w_lo, w_hi = _box_extremes(lambda l, m: expected_failures(l, m, t), lam_lo, lam_hi, mu_lo, mu_hi)
    return {
        "failure_rate": fr.lambda_s,
        "repair_time": fr.tau_s,
        "enof": FuzzyProfile(alphas, *nested_hull(w_lo, w_hi)),
        "mtbf": FuzzyProfile(alphas, *nested_hull(1.0 / lam_hi + tau_lo, 1.0 / lam_lo + tau_hi)),
        "reliability": FuzzyProfile(alphas, *nested_hull(reliability(lam_hi, t), reliability(lam_lo, t))),
        "availability": FuzzyProfile(alphas, *nested_hull(a_lo, a_hi)),
    }


@dataclass(frozen=True)
class ParameterResult:
    crisp: float
    fuzzy: FuzzyProfile
    defuzzified: float


@dataclass(frozen=True)
class ReliabilityReport:
    t: float
    spread: float
    mode: str
    rates: SystemRates
    point: PointMeasures
    parameters: dict = field(default_factory=dict)

    @property
    def mttf(self) -> float:
        return self.point.mttf

    @property
    def mttr(self) -> float:
        return self.point.mttr

    def __getitem__(self, name: str) -> ParameterResult:
        return self.parameters[name]

    def check(self, rel: float = 1e-12) -> None:
        """Raise :class:`InvariantViolation` if the report is internally inconsistent."""
        for name in PARAMETERS:
            res = self.parameters[name]
            sup = res.fuzzy.support
            if not sup.lo <= res.defuzzified <= sup.hi:
                raise InvariantViolation(f"{name}: defuzzified value outside fuzzy support")
            core = res.fuzzy.core
            for end in (core.lo, core.hi):
                if not math.isclose(end, res.crisp, rel_tol=rel, abs_tol=0.0):
                    raise InvariantViolation(f"{name}: alpha=1 cut {end!r} differs from crisp {res.crisp!r}")
        p = self.point
        if not (0 <= p.reliability <= 1 and 0 <= p.availability <= 1 and p.enof >= 0):
            raise InvariantViolation("probability-valued parameter out of range")
        if not math.isclose(p.mtbf, p.mttf + p.mttr, rel_tol=rel):
            raise InvariantViolation("mtbf differs from mttf + mttr")


class InvariantViolation(RuntimeError):
    pass


def build_report(
    m: SystemModel,
    t: float,
    spread,
    alpha_levels: int = DEFAULT_ALPHA_LEVELS,
    mode: str = NAIVE,
    grid_points: int = DEFAULT_GRID_POINTS,
) -> ReliabilityReport:
    """Crisp, fuzzy and defuzzified parameters of ``m`` for one spread."""
    spread = spread if isinstance(spread, SpreadSpec) else SpreadSpec(float(spread))
    t = _check_time(t)
    crisp_rates = reduce_crisp(m)
    point = point_measures(crisp_rates, t)
    fuzzy = fuzzy_measures(reduce_fuzzy(m, spread, alpha_levels, mode), t)
    crisp = point.as_dict()
    params = {
        name: ParameterResult(crisp[name], fuzzy[name], coa_defuzzify(fuzzy[name], grid_points))
        for name in PARAMETERS
    }
    report = ReliabilityReport(t, spread.fraction, mode, crisp_rates, point, params)
    report.check()
    return report
