import math
import random

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from conftest import g, make, random_model
from fuzzyrel.fuzzy import Interval
from fuzzyrel.lambdatau import (
    NAIVE,
    VERTEX,
    gate,
    lambda_and,
    lambda_or,
    reduce_crisp,
    reduce_fuzzy,
    reduce_tree,
    tau_and,
    tau_or,
)
from fuzzyrel.model import AND, OR

ROBOT_LAMBDAS = (0.000182, 0.0092, 0.000182, 0.0092)
ROBOT_TAUS = (3.0, 5.0, 3.0, 5.0)

positive_lists = st.lists(st.floats(1e-3, 1e3), min_size=1, max_size=6)


class TestGateFormulas:
    def test_lambda_and_pair(self):
        assert lambda_and([0.1, 0.2], [3, 5]) == pytest.approx(0.02 * (5 + 3), rel=1e-12)

    def test_lambda_and_identity(self):
        assert lambda_and([0.37], [4.0]) == 0.37

    def test_lambda_and_ones(self):
        assert lambda_and([1, 1, 1], [1, 1, 1]) == 3

    def test_tau_and_pair(self):
        assert tau_and([3, 5]) == pytest.approx(15 / 8, rel=1e-12)

    def test_tau_and_identity_and_equals(self):
        assert tau_and([7.5]) == 7.5
        assert tau_and([2, 2]) == 1

    def test_lambda_or_robot(self):
        assert lambda_or(ROBOT_LAMBDAS) == pytest.approx(0.018764, rel=1e-12)
        assert lambda_or([0.01, 0.02, 0.03]) == pytest.approx(0.06, rel=1e-12)
        assert lambda_or([0.5]) == 0.5

    def test_tau_or_robot(self):
        num = sum(l * t for l, t in zip(ROBOT_LAMBDAS, ROBOT_TAUS))
        assert num == pytest.approx(0.093092, rel=1e-12)
        assert tau_or(ROBOT_LAMBDAS, ROBOT_TAUS) == pytest.approx(0.093092 / 0.018764, rel=1e-12)
        assert tau_or(ROBOT_LAMBDAS, ROBOT_TAUS) == pytest.approx(4.961202, abs=1e-6)

    def test_tau_or_special(self):
        assert tau_or([0.1, 0.7, 0.2], [4, 4, 4]) == pytest.approx(4, rel=1e-12)
        assert tau_or([1, 1], [2, 4]) == 3

    @pytest.mark.parametrize("f", [lambda_and, tau_or])
    def test_length_mismatch(self, f):
        with pytest.raises(ValueError):
            f([1, 2], [1])

    @pytest.mark.parametrize("call", [lambda: lambda_and([], []), lambda: tau_and([]), lambda: lambda_or([]), lambda: tau_or([], [])])
    def test_empty(self, call):
        with pytest.raises(ValueError):
            call()

    @settings(max_examples=300)
    @given(positive_lists)
    def test_tau_and_harmonic(self, taus):
        assert tau_and(taus) == pytest.approx(1 / sum(1 / t for t in taus), rel=1e-12)

    @given(st.lists(st.tuples(st.floats(1e-4, 1.0), st.floats(0.1, 50)), min_size=1, max_size=5), st.randoms())
    def test_permutation_invariance(self, pairs, rnd):
        shuffled = pairs[:]
        rnd.shuffle(shuffled)
        for kind in (AND, OR):
            a = gate(kind, [p[0] for p in pairs], [p[1] for p in pairs])
            b = gate(kind, [p[0] for p in shuffled], [p[1] for p in shuffled])
            assert a == pytest.approx(b, rel=1e-12)

    @given(st.floats(1e-4, 1.0), st.floats(0.1, 50))
    def test_arity_one_identity(self, lam, tau):
        assert lambda_and([lam], [tau]) == lam
        assert tau_and([tau]) == tau
        assert lambda_or([lam]) == lam
        assert tau_or([lam], [tau]) == pytest.approx(tau, rel=1e-15)
        assert gate(AND, [lam], [tau]) == (lam, tau)
        assert gate(OR, [lam], [tau]) == (lam, tau)

    def test_formulas_accept_intervals(self):
        lam = lambda_and([Interval(0.1, 0.1), Interval(0.2, 0.2)], [Interval(3, 3), Interval(5, 5)])
        assert lam == Interval(lambda_and([0.1, 0.2], [3, 5]), lambda_and([0.1, 0.2], [3, 5]))


class TestReduceCrisp:
    def test_robot(self, robot):
        r = reduce_crisp(robot)
        assert r.lambda_s == pytest.approx(0.018764, abs=1e-12)
        assert r.tau_s == pytest.approx(4.961202, abs=1e-5)
        assert r.mu_s * r.tau_s == pytest.approx(1.0, rel=1e-12)

    def test_single_leaf(self):
        r = reduce_crisp(make(g(OR, "x"), x=(0.004, 6.0)))
        assert (r.lambda_s, r.tau_s) == (0.004, 6.0)

    def test_and_pair(self):
        r = reduce_crisp(make(g(AND, "a", "b"), a=(0.1, 3.0), b=(0.2, 5.0)))
        assert r.lambda_s == pytest.approx(0.16, rel=1e-12)
        assert r.tau_s == pytest.approx(1.875, rel=1e-12)

    def test_repeated_component_computed_as_written(self):
        m = make(g(OR, "a", g(AND, "a", "b")), a=(0.1, 3.0), b=(0.2, 5.0))
        r = reduce_crisp(m)
        assert r.lambda_s == pytest.approx(0.1 + 0.16, rel=1e-12)
        assert r.tau_s == pytest.approx((0.1 * 3 + 0.16 * 1.875) / 0.26, rel=1e-12)


def naive_or_cut(pairs):
    """Hand-expanded interval arithmetic for one OR gate of positive (lam, tau) intervals."""
    lam_lo = sum(p[0][0] for p in pairs)
    lam_hi = sum(p[0][1] for p in pairs)
    num_lo = sum(p[0][0] * p[1][0] for p in pairs)
    num_hi = sum(p[0][1] * p[1][1] for p in pairs)
    return (lam_lo, lam_hi), (num_lo / lam_hi, num_hi / lam_lo)


class TestReduceFuzzy:
    def test_zero_spread_degenerates(self, robot):
        crisp = reduce_crisp(robot)
        for mode in (NAIVE, VERTEX):
            fr = reduce_fuzzy(robot, 0.0, 11, mode)
            assert np.all(fr.lambda_s.lows == crisp.lambda_s) and np.all(fr.lambda_s.highs == crisp.lambda_s)
            assert np.all(fr.tau_s.lows == crisp.tau_s) and np.all(fr.tau_s.highs == crisp.tau_s)

    def test_core_collapses(self, robot):
        fr = reduce_fuzzy(robot, 0.15)
        assert fr.lambda_s.cut(1.0) == Interval(0.018764, 0.018764) or (
            fr.lambda_s.core.lo == pytest.approx(0.018764, rel=1e-12)
        )

    def test_naive_support_lambda(self, robot):
        fr = reduce_fuzzy(robot, 0.15)
        s = fr.lambda_s.support
        assert s.lo == pytest.approx(0.0159494, rel=1e-12)
        assert s.hi == pytest.approx(0.0215786, rel=1e-12)

    def test_naive_support_tau_robot(self, robot):
        s = 0.15
        comp = {c.id: ((c.lam * (1 - s), c.lam * (1 + s)), (c.tau * (1 - s), c.tau * (1 + s))) for c in robot.components}
        left = naive_or_cut([comp["S1"], comp["M1"]])
        right = naive_or_cut([comp["S2"], comp["M2"]])
        lam, tau = naive_or_cut([left, right])
        fr = reduce_fuzzy(robot, s)
        assert (fr.lambda_s.support.lo, fr.lambda_s.support.hi) == pytest.approx(lam, rel=1e-12)
        assert (fr.tau_s.support.lo, fr.tau_s.support.hi) == pytest.approx(tau, rel=1e-12)

    def test_vertex_tau_against_sampling(self, robot):
        # every sampled interior point must land in the vertex cut, and the extremes are vertices
        s = 0.25
        fr = reduce_fuzzy(robot, s, 5, VERTEX)
        rng = random.Random(7)
        sup = fr.tau_s.support
        for _ in range(2000):
            vals = {c.id: (c.lam * rng.uniform(1 - s, 1 + s), c.tau * rng.uniform(1 - s, 1 + s)) for c in robot.components}
            _, tau = reduce_tree(robot.top, vals)
            assert sup.lo <= tau <= sup.hi
        best = {c.id: (c.lam * (1 - s if c.tau < 4 else 1 + s), c.tau * (1 + s)) for c in robot.components}
        assert reduce_tree(robot.top, best)[1] == pytest.approx(sup.hi, rel=1e-12)

    def test_bad_mode(self, robot):
        with pytest.raises(ValueError):
            reduce_fuzzy(robot, 0.1, 11, "exact")

    def test_vertex_guard(self):
        big = make(g(OR, *[f"x{i}" for i in range(11)]))
        with pytest.raises(ValueError, match="vertex"):
            reduce_fuzzy(big, 0.1, 3, VERTEX)
        ten = make(g(OR, *[f"x{i}" for i in range(10)]))
        assert reduce_fuzzy(ten, 0.1, 2, VERTEX).lambda_s.support.width > 0

    @pytest.mark.parametrize("mode", [NAIVE, VERTEX])
    @pytest.mark.parametrize("spread", [0.05, 0.15, 0.25, 0.5, 0.9])
    def test_collapse_robot(self, robot, mode, spread):
        crisp = reduce_crisp(robot)
        fr = reduce_fuzzy(robot, spread, 101, mode)
        for prof, value in ((fr.lambda_s, crisp.lambda_s), (fr.tau_s, crisp.tau_s)):
            assert prof.core.lo == value and prof.core.hi == value

    @settings(max_examples=40, deadline=None)
    @given(st.integers(0, 10**6), st.floats(0.0, 0.45), st.floats(0.0, 0.45))
    def test_random_tree_properties(self, seed, s1, s2):
        m = random_model(seed, max_components=5)
        s1, s2 = sorted((s1, s2 + s1))
        crisp = reduce_crisp(m)
        out = {}
        for mode in (NAIVE, VERTEX):
            for s in (s1, s2):
                fr = reduce_fuzzy(m, s, 11, mode)
                out[mode, s] = fr
                # collapse
                assert fr.lambda_s.core.lo == pytest.approx(crisp.lambda_s, rel=1e-12)
                assert fr.lambda_s.core.hi == pytest.approx(crisp.lambda_s, rel=1e-12)
                assert fr.tau_s.core.lo == pytest.approx(crisp.tau_s, rel=1e-12)
                assert fr.tau_s.core.hi == pytest.approx(crisp.tau_s, rel=1e-12)
        tol = 1e-12
        for mode in (NAIVE, VERTEX):
            small, big = out[mode, s1], out[mode, s2]
            for a, b in ((small.lambda_s, big.lambda_s), (small.tau_s, big.tau_s)):
                assert np.all(b.lows <= a.lows * (1 + tol)) and np.all(a.highs <= b.highs * (1 + tol))
        for s in (s1, s2):
            v, n = out[VERTEX, s], out[NAIVE, s]
            for a, b in ((v.lambda_s, n.lambda_s), (v.tau_s, n.tau_s)):
                assert np.all(b.lows <= a.lows * (1 + tol)) and np.all(a.highs <= b.highs * (1 + tol))

    @given(st.lists(st.tuples(st.floats(1e-4, 0.1), st.floats(0.5, 20)), min_size=1, max_size=6), st.floats(0, 0.9))
    def test_vertex_pure_or_lambda_support(self, pairs, s):
        rates = {f"c{i}": p for i, p in enumerate(pairs)}
        m = make(g(OR, *rates), **rates)
        fr = reduce_fuzzy(m, s, 3, VERTEX)
        total = sum(l for l, _ in pairs)
        assert fr.lambda_s.support.lo == pytest.approx(sum(l * (1 - s) for l, _ in pairs), rel=1e-12)
        assert fr.lambda_s.support.hi == pytest.approx(sum(l * (1 + s) for l, _ in pairs), rel=1e-12)
        assert math.isclose(fr.lambda_s.core.lo, total, rel_tol=1e-12)
