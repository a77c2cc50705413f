"""Complete-information equilibria of the PBS auction, with and without a prior OFA.

Two builders, ``"A"`` and ``"B"``, hold known top-of-block values ``v_A`` and
``v_B``; one block-body transaction is worth ``v_T``. In scenario 1 both
builders can include the transaction. In scenario 2 it is first sold in a
second-price order flow auction (OFA) and only the OFA winner can include
it. Ties in top-of-block value go to ``A``.

:func:`clock_auction` is an independent ascending-clock simulator used to
check the closed-form solutions.
"""
from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Optional, Sequence

import numpy as np

from .dist import ParameterError

__all__ = [
    "DeterministicGame",
    "GameOutcome",
    "solve_scenario1",
    "solve_scenario2",
    "clock_auction",
    "chained_clock_oracle",
    "scenario1_arrays",
    "pbs_given_holder_arrays",
]


@dataclass(frozen=True)
class DeterministicGame:
    v_A: float
    v_B: float
    v_T: float

    def __post_init__(self):
        for name in ("v_A", "v_B", "v_T"):
            value = getattr(self, name)
            if not isinstance(value, (int, float)) or not math.isfinite(value) or value < 0:
                raise ParameterError(f"{name} must be finite and >= 0, got {value!r}")


@dataclass(frozen=True)
class GameOutcome:
    block_winner: str
    ofa_winner: Optional[str]
    ofa_price: float
    pbs_price: float
    total_price: float
    surplus_A: float
    surplus_B: float

    @property
    def proposer_revenue(self):
        return self.pbs_price

    @property
    def ofa_revenue(self):
        return self.ofa_price

    def surplus(self, builder):
        return self.surplus_A if builder == "A" else self.surplus_B

    def as_dict(self):
        return {
            "block_winner": self.block_winner,
            "ofa_winner": self.ofa_winner,
            "ofa_price": self.ofa_price,
            "pbs_price": self.pbs_price,
            "total_price": self.total_price,
            "surplus_a": self.surplus_A,
            "surplus_b": self.surplus_B,
            "proposer_revenue": self.proposer_revenue,
            "ofa_revenue": self.ofa_revenue,
        }


def _ranked(game):
    """(winner, high, low) with ties resolved for A."""
    if game.v_A >= game.v_B:
        return "A", game.v_A, game.v_B
    return "B", game.v_B, game.v_A


def _outcome(winner, ofa_winner, ofa_price, pbs_price, winner_surplus):
    surplus = {"A": 0.0, "B": 0.0}
    surplus[winner] = winner_surplus
    return GameOutcome(
        block_winner=winner,
        ofa_winner=ofa_winner,
        ofa_price=ofa_price,
        pbs_price=pbs_price,
        total_price=ofa_price + pbs_price,
        surplus_A=surplus["A"],
        surplus_B=surplus["B"],
    )


def solve_scenario1(game: DeterministicGame) -> GameOutcome:
    """Both builders can include the transaction; the PBS auction is efficient.

    The higher-value builder wins at ``v_T + min(v_A, v_B)`` and keeps
    ``|v_A - v_B|``.
    """
    winner, high, low = _ranked(game)
    return _outcome(winner, None, 0.0, game.v_T + low, high - low)


def solve_scenario2(game: DeterministicGame) -> GameOutcome:
    """OFA (second price) followed by PBS, solved by backward induction.

    The higher-value builder takes both auctions. If its lead exceeds
    ``v_T`` the rival's OFA bid is zero; otherwise the rival bids
    ``low + v_T - high``. The block always clears at ``low``.
    """
    winner, high, low = _ranked(game)
    v_T = game.v_T
    if high > low + v_T:
        ofa_price = 0.0
        winner_surplus = high + v_T - low
    else:
        ofa_price = low + v_T - high
        winner_surplus = 2.0 * (high - low)
    return _outcome(winner, winner, ofa_price, low, winner_surplus)


def clock_auction(values: Sequence[float], tick: float):
    """Ascending clock auction on integer multiples of ``tick``.

    The clock starts at zero and rises one tick at a time; a bidder drops out
    as soon as the clock exceeds its value. Returns ``(winner_index, price)``
    where the price is the last clock level the runner-up was still in at.
    Bidders leaving at the same tick are tied and the lowest index wins.
    """
    if len(values) < 2:
        raise ParameterError("clock_auction needs at least two bidders")
    if not (tick > 0 and math.isfinite(tick)):
        raise ParameterError(f"tick must be positive, got {tick!r}")
    for v in values:
        if not math.isfinite(v) or v < 0:
            raise ParameterError(f"bidder values must be finite and >= 0, got {v!r}")

    # level at which each bidder is last active: the clock exceeds v at the next step
    last_level = [math.floor(v / tick) for v in values]
    # guard float division: make sure level*tick <= v < (level+1)*tick
    for i, v in enumerate(values):
        while last_level[i] * tick > v:
            last_level[i] -= 1
        while (last_level[i] + 1) * tick <= v:
            last_level[i] += 1

    active = set(range(len(values)))
    clock = 0
    while True:
        # jump the clock to the next step at which someone drops out
        clock = min(last_level[i] for i in active) + 1
        leaving = sorted(i for i in active if last_level[i] + 1 == clock)
        active.difference_update(leaving)
        if len(active) == 1:
            (winner,) = active
            return winner, (clock - 1) * tick
        if not active:
            return leaving[0], (clock - 1) * tick


def chained_clock_oracle(game: DeterministicGame, tick: float = 1e-6, scenario: int = 2):
    """Re-derive the equilibrium from clock auctions alone.

    Scenario 1 is a single clock auction over ``[v_T + v_A, v_T + v_B]``.
    Scenario 2 first prices the PBS stage under each possible OFA winner,
    sets each builder's OFA bid to its surplus from winning minus its
    surplus from losing, runs the OFA as a clock auction over those bids and
    then plays the matching PBS auction. Bidder order is ``[A, B]`` so clock
    ties favour A.
    """
    v_A, v_B, v_T = game.v_A, game.v_B, game.v_T
    names = ("A", "B")
    if scenario == 1:
        idx, price = clock_auction([v_T + v_A, v_T + v_B], tick)
        winner = names[idx]
        own = v_A if winner == "A" else v_B
        return _outcome(winner, None, 0.0, price, v_T + own - price)

    def pbs_given(ofa_holder):
        values = [v_A + (v_T if ofa_holder == "A" else 0.0),
                  v_B + (v_T if ofa_holder == "B" else 0.0)]
        idx, price = clock_auction(values, tick)
        surplus = [0.0, 0.0]
        surplus[idx] = values[idx] - price
        return names[idx], price, surplus

    if_a = pbs_given("A")
    if_b = pbs_given("B")
    bid_A = max(if_a[2][0] - if_b[2][0], 0.0)
    bid_B = max(if_b[2][1] - if_a[2][1], 0.0)
    ofa_idx, ofa_price = clock_auction([bid_A, bid_B], tick)
    holder = names[ofa_idx]
    block_winner, pbs_price, pbs_surplus = if_a if holder == "A" else if_b
    surplus = {"A": pbs_surplus[0], "B": pbs_surplus[1]}
    surplus[holder] -= ofa_price
    return GameOutcome(
        block_winner=block_winner,
        ofa_winner=holder,
        ofa_price=ofa_price,
        pbs_price=pbs_price,
        total_price=ofa_price + pbs_price,
        surplus_A=surplus["A"],
        surplus_B=surplus["B"],
    )


def scenario1_arrays(v_A, v_B, v_T):
    """Vectorised :func:`solve_scenario1` over arrays of realised values.

    Returns ``(a_wins, pbs_price, surplus_A, surplus_B)``.
    """
    v_A = np.asarray(v_A, dtype=float)
    v_B = np.asarray(v_B, dtype=float)
    a_wins = v_A >= v_B
    pbs_price = v_T + np.minimum(v_A, v_B)
    gap = np.abs(v_A - v_B)
    return a_wins, pbs_price, np.where(a_wins, gap, 0.0), np.where(a_wins, 0.0, gap)


def pbs_given_holder_arrays(v_A, v_B, v_T, holder="A"):
    """PBS stage after the OFA: ``holder`` alone adds ``v_T`` to its bid.

    Returns ``(a_wins, pbs_price, surplus_A, surplus_B)``; ties go to A.
    """
    v_A = np.asarray(v_A, dtype=float)
    v_B = np.asarray(v_B, dtype=float)
    bid_A = v_A + v_T if holder == "A" else v_A
    bid_B = v_B + v_T if holder == "B" else v_B
    a_wins = bid_A >= bid_B
    gap = np.abs(bid_A - bid_B)
    return a_wins, np.minimum(bid_A, bid_B), np.where(a_wins, gap, 0.0), np.where(a_wins, 0.0, gap)
