import itertools
import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from ofa_pbs.detgame import (
    DeterministicGame,
    chained_clock_oracle,
    clock_auction,
    pbs_given_holder_arrays,
    scenario1_arrays,
    solve_scenario1,
    solve_scenario2,
)
from ofa_pbs.dist import ParameterError

TICK = 1e-6


def stepping_clock(values, tick):
    """Literal tick-by-tick clock; only usable with coarse ticks."""
    active = list(range(len(values)))
    k = 0
    while True:
        k += 1
        leaving = [i for i in active if k * tick > values[i]]
        remaining = [i for i in active if i not in leaving]
        if len(remaining) == 1:
            return remaining[0], (k - 1) * tick
        if not remaining:
            return min(leaving), (k - 1) * tick
        active = remaining


class TestScenario1:
    def test_a_wins(self):
        out = solve_scenario1(DeterministicGame(0.8, 0.5, 0.3))
        assert out.block_winner == "A"
        assert out.pbs_price == pytest.approx(0.8)
        assert out.surplus_A == pytest.approx(0.3)
        assert out.ofa_winner is None and out.ofa_price == 0.0

    def test_tie_goes_to_a(self):
        out = solve_scenario1(DeterministicGame(0.5, 0.5, 0.3))
        assert out.block_winner == "A"
        assert out.surplus_A == 0.0
        assert out.pbs_price == pytest.approx(0.8)

    def test_no_transaction_value(self):
        out = solve_scenario1(DeterministicGame(1.0, 0.2, 0.0))
        assert out.pbs_price == pytest.approx(0.2)
        assert out.surplus_A == pytest.approx(0.8)

    def test_b_wins(self):
        out = solve_scenario1(DeterministicGame(0.1, 0.4, 0.2))
        assert out.block_winner == "B"
        assert out.surplus_B == pytest.approx(0.3)
        assert out.surplus_A == 0.0

    def test_matches_clock(self):
        out = solve_scenario1(DeterministicGame(0.8, 0.5, 0.3))
        idx, price = clock_auction([0.3 + 0.8, 0.3 + 0.5], TICK)
        assert idx == 0
        assert abs(price - out.pbs_price) <= TICK


class TestScenario2:
    def test_case1(self):
        out = solve_scenario2(DeterministicGame(1.0, 0.2, 0.3))
        assert out.total_price == pytest.approx(max(0.3 + 0.4 - 1.0, 0.2))
        assert out.total_price == pytest.approx(0.2)
        assert out.surplus_A == pytest.approx(min(1.6, 1.1))
        assert out.ofa_price == 0.0 and out.pbs_price == pytest.approx(0.2)
        oracle = chained_clock_oracle(DeterministicGame(1.0, 0.2, 0.3), TICK)
        assert abs(oracle.total_price - 0.2) <= 2 * TICK
        assert abs(oracle.surplus_A - 1.1) <= 2 * TICK

    def test_case2(self):
        out = solve_scenario2(DeterministicGame(0.6, 0.5, 0.3))
        assert out.ofa_price == pytest.approx(0.2)
        assert out.pbs_price == pytest.approx(0.5)
        assert out.total_price == pytest.approx(0.7)
        assert out.surplus_A == pytest.approx(0.2)
        assert out.total_price == out.ofa_price + out.pbs_price
        assert out.ofa_revenue == out.ofa_price and out.proposer_revenue == out.pbs_price

    def test_collapses_without_transaction(self):
        game = DeterministicGame(0.8, 0.5, 0.0)
        s1, s2 = solve_scenario1(game), solve_scenario2(game)
        assert s2.block_winner == s1.block_winner
        assert s2.pbs_price == s1.pbs_price
        assert (s2.surplus_A, s2.surplus_B) == (s1.surplus_A, s1.surplus_B)

    def test_swapped_roles(self):
        out = solve_scenario2(DeterministicGame(0.5, 0.6, 0.3))
        assert out.block_winner == out.ofa_winner == "B"
        assert out.surplus_B == pytest.approx(0.2)
        assert out.surplus_A == 0.0

    @settings(max_examples=300, deadline=None)
    @given(st.floats(0, 10), st.floats(0, 10), st.floats(0, 10))
    def test_value_identity(self, v_A, v_B, v_T):
        game = DeterministicGame(v_A, v_B, v_T)
        out = solve_scenario2(game)
        w = out.block_winner
        own = v_A if w == "A" else v_B
        assert out.surplus(w) + out.total_price == pytest.approx(own + v_T, abs=1e-9)
        assert out.surplus(w) >= 0
        assert out.surplus("B" if w == "A" else "A") == 0.0
        high, low = max(v_A, v_B), min(v_A, v_B)
        assert out.total_price == pytest.approx(max(v_T + 2 * low - high, low), abs=1e-9)
        assert out.surplus(w) == pytest.approx(min(2 * (high - low), high + v_T - low), abs=1e-9)

    @settings(max_examples=200, deadline=None)
    @given(st.floats(0, 5), st.floats(0, 5), st.floats(0, 5), st.floats(0, 5))
    def test_monotone_in_own_value(self, v1, v2, v_B, v_T):
        lo, hi = sorted((v1, v2))
        s_lo = solve_scenario2(DeterministicGame(lo, v_B, v_T)).surplus_A
        s_hi = solve_scenario2(DeterministicGame(hi, v_B, v_T)).surplus_A
        assert s_hi >= s_lo - 1e-12


def test_rejects_negative_or_nonfinite():
    for bad in (-0.1, math.inf, math.nan):
        with pytest.raises(ParameterError):
            DeterministicGame(bad, 0.1, 0.1)


class TestClock:
    def test_examples(self):
        idx, price = clock_auction([1.1, 0.8], TICK)
        assert idx == 0 and abs(price - 0.8) <= TICK
        assert clock_auction([0.7, 0.0], TICK) == (0, 0.0)
        idx, price = clock_auction([0.5, 0.5], TICK)
        assert idx == 0 and abs(price - 0.5) <= TICK

    def test_three_bidders(self):
        idx, price = clock_auction([0.3, 0.9, 0.6], TICK)
        assert idx == 1 and abs(price - 0.6) <= TICK

    def test_tie_for_second(self):
        idx, price = clock_auction([0.2, 0.2, 0.7], 0.01)
        assert idx == 2 and abs(price - 0.2) <= 0.01

    def test_validation(self):
        with pytest.raises(ParameterError):
            clock_auction([1.0], TICK)
        with pytest.raises(ParameterError):
            clock_auction([1.0, 0.5], 0.0)
        with pytest.raises(ParameterError):
            clock_auction([1.0, -0.5], TICK)

    @settings(max_examples=200, deadline=None)
    @given(st.lists(st.floats(0, 3), min_size=2, max_size=5))
    def test_event_clock_equals_stepping_clock(self, values):
        assert clock_auction(values, 0.01) == stepping_clock(values, 0.01)

    @settings(max_examples=200, deadline=None)
    @given(st.lists(st.floats(0, 100), min_size=2, max_size=6), st.sampled_from([1e-6, 1e-3, 0.1]))
    def test_price_within_a_tick_of_second_value(self, values, tick):
        idx, price = clock_auction(values, tick)
        order = sorted(values, reverse=True)
        # bidders within a tick of each other leave together and tie
        assert values[idx] > order[0] - tick
        assert order[1] - tick < price <= order[1] + 1e-12


def test_random_grid_against_clock():
    rng = np.random.default_rng(11)
    for v_A, v_B, v_T in rng.uniform(0, 2, size=(200, 3)):
        game = DeterministicGame(v_A, v_B, v_T)
        for solve, scenario in ((solve_scenario1, 1), (solve_scenario2, 2)):
            out, ref = solve(game), chained_clock_oracle(game, TICK, scenario)
            assert out.block_winner == ref.block_winner
            assert abs(out.total_price - ref.total_price) <= 2 * TICK
            assert abs(out.surplus_A - ref.surplus_A) <= 2 * TICK
            assert abs(out.surplus_B - ref.surplus_B) <= 2 * TICK


def test_array_versions_match_scalar():
    rng = np.random.default_rng(3)
    v_A, v_B = rng.exponential(1, 500), rng.exponential(0.5, 500)
    v_A[:5] = v_B[:5]  # ties
    a_wins, price, s_A, s_B = scenario1_arrays(v_A, v_B, 0.4)
    held = pbs_given_holder_arrays(v_A, v_B, 0.4, holder="A")
    for i, (a, b) in enumerate(zip(v_A, v_B)):
        out = solve_scenario1(DeterministicGame(a, b, 0.4))
        assert a_wins[i] == (out.block_winner == "A")
        assert price[i] == pytest.approx(out.pbs_price)
        assert (s_A[i], s_B[i]) == pytest.approx((out.surplus_A, out.surplus_B))
        assert held[0][i] == (a + 0.4 >= b)
        assert held[2][i] == pytest.approx(max(a + 0.4 - b, 0.0))


@pytest.mark.parametrize("v_A,v_B,v_T", list(itertools.product([0.0, 0.3, 1.0], repeat=3)))
def test_corner_grid(v_A, v_B, v_T):
    game = DeterministicGame(v_A, v_B, v_T)
    for solve, scenario in ((solve_scenario1, 1), (solve_scenario2, 2)):
        out = solve(game)
        ref = chained_clock_oracle(game, TICK, scenario)
        assert out.block_winner == ref.block_winner
        assert abs(out.total_price - ref.total_price) <= 2 * TICK
