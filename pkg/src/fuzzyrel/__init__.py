"""Fuzzy lambda-tau reliability analysis of repairable systems described by fault trees."""

from .cutsets import brute_force_cut_sets, minimal_cut_sets, minimal_path_sets, top_event_state
from .fuzzy import (
    FuzzyProfile,
    Interval,
    SpreadSpec,
    TriangularFuzzyNumber,
    alpha_cut,
    coa_defuzzify,
    interval_arith,
    membership_at,
    tfn_from_spread,
)
from .lambdatau import SystemRates, reduce_crisp, reduce_fuzzy
from .measures import build_report, fuzzy_measures, point_measures
from .model import SystemModel, load_model, parse_model, to_petri_net

__version__ = "0.1.0"
