"""Scenario comparison when top-of-block values are random.

Builders bid in the OFA before their top-of-block values are revealed, so
the OFA item is worth the ex-ante difference between the PBS surplus from
holding the transaction and from not holding it. Surpluses follow from
interim win probabilities by revenue equivalence with zero surplus at zero
value. Everything is computed by (nested) adaptive quadrature for any
:class:`~ofa_pbs.dist.ValueDistribution`; infinite upper limits are cut at
each distribution's ``support_hint``.
"""
from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .dist import ParameterError, ValueDistribution, fosd_dominates
from .quadrature import integrate, integrate_batch

__all__ = [
    "StochasticGame",
    "OfaValuationReport",
    "ScenarioComparison",
    "OrderingError",
    "interim_win_prob",
    "ofa_valuation",
    "ofa_valuation_report",
    "taylor_ofa_valuation",
    "win_probability",
    "expected_profit",
    "expected_profit_B",
    "surplus_win",
    "expected_pbs_surplus",
    "compare_scenarios",
    "ABS_TOL",
    "REL_TOL",
]

ABS_TOL = 1e-9
REL_TOL = 1e-8
INNER_TIGHTENING = 10.0


class OrderingError(ParameterError):
    """An operation needs builder A's distribution to FOSD-dominate B's."""


@dataclass(frozen=True)
class StochasticGame:
    dist_A: ValueDistribution
    dist_B: ValueDistribution
    v_T: float

    def __post_init__(self):
        if not isinstance(self.v_T, (int, float)) or not math.isfinite(self.v_T) or self.v_T < 0:
            raise ParameterError(f"v_T must be finite and >= 0, got {self.v_T!r}")

    def own_and_rival(self, builder):
        if builder == "A":
            return self.dist_A, self.dist_B
        if builder == "B":
            return self.dist_B, self.dist_A
        raise ParameterError(f"builder must be 'A' or 'B', got {builder!r}")

    def require_ordering(self):
        if not fosd_dominates(self.dist_A, self.dist_B):
            raise OrderingError(
                "scenario 2 formulas assume A wins the OFA, which requires "
                "dist_A to first-order stochastically dominate dist_B"
            )


@dataclass(frozen=True)
class OfaValuationReport:
    v_TA: float
    v_TB: float
    err_TA: float
    err_TB: float


@dataclass(frozen=True)
class ScenarioComparison:
    win_prob_s1: float
    win_prob_s2: float
    profit_A_s1: float
    profit_A_s2: float
    v_TA: float
    v_TB: float
    profit_B_s1: float = float("nan")
    profit_B_s2: float = float("nan")

    def as_dict(self):
        return {
            "win_prob_s1": self.win_prob_s1,
            "win_prob_s2": self.win_prob_s2,
            "profit_a_s1": self.profit_A_s1,
            "profit_a_s2": self.profit_A_s2,
            "v_ta": self.v_TA,
            "v_tb": self.v_TB,
            "profit_b_s1": self.profit_B_s1,
            "profit_b_s2": self.profit_B_s2,
        }


def interim_win_prob(opponent: ValueDistribution, v, v_T, won_ofa):
    """Chance of taking the block with top-of-block value ``v``.

    Holding the transaction lifts the builder's bid by ``v_T``; losing it
    lifts the rival's bid instead.
    """
    if np.any(np.asarray(v) < 0) or v_T < 0:
        raise ParameterError("v and v_T must be >= 0")
    shift = v_T if won_ofa else -v_T
    return opponent.cdf(np.asarray(v, dtype=float) + shift)


def _nested(own, inner_integrand, abs_tol, rel_tol):
    """E_own[ integral_0^{v} inner_integrand(u) du ] and a combined error bound."""
    inner_abs = abs_tol / INNER_TIGHTENING
    inner_rel = rel_tol / INNER_TIGHTENING
    worst_inner = [0.0]

    def outer(vs):
        vals, errs = integrate_batch(inner_integrand, 0.0, vs, inner_abs, inner_rel)
        worst_inner[0] = max(worst_inner[0], float(errs.max(initial=0.0)))
        return vals * own.pdf(vs)

    value, err = integrate(outer, 0.0, own.support_hint, abs_tol, rel_tol)
    return value, err + worst_inner[0]


def _ofa_valuation_with_error(game, builder, abs_tol, rel_tol):
    own, rival = game.own_and_rival(builder)
    v_T = game.v_T
    if v_T == 0:
        return 0.0, 0.0

    def window(u):
        return rival.cdf(u + v_T) - rival.cdf(u - v_T)

    return _nested(own, window, abs_tol, rel_tol)


def ofa_valuation(game: StochasticGame, builder="A", abs_tol=ABS_TOL, rel_tol=REL_TOL):
    """Ex-ante value to ``builder`` of holding the transaction, in the OFA."""
    return _ofa_valuation_with_error(game, builder, abs_tol, rel_tol)[0]


def ofa_valuation_report(game: StochasticGame, abs_tol=ABS_TOL, rel_tol=REL_TOL):
    v_TA, err_TA = _ofa_valuation_with_error(game, "A", abs_tol, rel_tol)
    v_TB, err_TB = _ofa_valuation_with_error(game, "B", abs_tol, rel_tol)
    return OfaValuationReport(v_TA, v_TB, err_TA, err_TB)


def taylor_ofa_valuation(game: StochasticGame, builder="A", abs_tol=ABS_TOL, rel_tol=REL_TOL):
    """First-order approximation ``2 v_T * integral F_rival f_own``, for small ``v_T``."""
    own, rival = game.own_and_rival(builder)
    if game.v_T == 0:
        return 0.0
    value, _ = integrate(lambda v: rival.cdf(v) * own.pdf(v), 0.0, own.support_hint,
                         abs_tol, rel_tol)
    return 2.0 * game.v_T * value


def _check_scenario(game, scenario):
    if scenario not in (1, 2):
        raise ParameterError(f"scenario must be 1 or 2, got {scenario!r}")
    if scenario == 2:
        game.require_ordering()


def win_probability(game: StochasticGame, scenario, abs_tol=ABS_TOL, rel_tol=REL_TOL):
    _check_scenario(game, scenario)
    shift = game.v_T if scenario == 2 else 0.0
    a, b = game.dist_A, game.dist_B
    value, _ = integrate(lambda v: b.cdf(v + shift) * a.pdf(v), 0.0, a.support_hint,
                         abs_tol, rel_tol)
    return value


def surplus_win(game: StochasticGame, v_A, abs_tol=ABS_TOL, rel_tol=REL_TOL):
    """A's interim PBS surplus ``integral_0^{v_A} F_B(v + v_T) dv`` after winning the OFA."""
    b, v_T = game.dist_B, game.v_T
    return integrate(lambda v: b.cdf(v + v_T), 0.0, v_A, abs_tol, rel_tol)[0]


def _pbs_surplus(own, rival, shift, abs_tol, rel_tol):
    return _nested(own, lambda u: rival.cdf(u + shift), abs_tol, rel_tol)[0]


def expected_pbs_surplus(game: StochasticGame, scenario, abs_tol=ABS_TOL, rel_tol=REL_TOL):
    """A's PBS-stage surplus ``E[integral_0^{v_A} F_B(v + shift) dv]``.

    ``shift`` is ``v_T`` in scenario 2 (A holds the transaction) and 0 in
    scenario 1. Zero surplus at zero value is assumed.
    """
    _check_scenario(game, scenario)
    shift = game.v_T if scenario == 2 else 0.0
    return _pbs_surplus(game.dist_A, game.dist_B, shift, abs_tol, rel_tol)


def expected_profit(game: StochasticGame, scenario, abs_tol=ABS_TOL, rel_tol=REL_TOL,
                    valuations=None):
    """Builder A's ex-ante profit.

    Scenario 2 adds the OFA margin ``v_TA - v_TB`` to the PBS surplus with the
    transaction in hand. ``valuations`` may pass a precomputed
    ``(v_TA, v_TB)`` pair.
    """
    _check_scenario(game, scenario)
    a, b = game.dist_A, game.dist_B
    if scenario == 1:
        return _pbs_surplus(a, b, 0.0, abs_tol, rel_tol)
    if valuations is None:
        valuations = (ofa_valuation(game, "A", abs_tol, rel_tol),
                      ofa_valuation(game, "B", abs_tol, rel_tol))
    v_TA, v_TB = valuations
    return (v_TA - v_TB) + expected_pbs_surplus(game, 2, abs_tol, rel_tol)


def expected_profit_B(game: StochasticGame, scenario, abs_tol=ABS_TOL, rel_tol=REL_TOL):
    """Builder B's ex-ante profit; in scenario 2 B loses the OFA and bids without the transaction."""
    _check_scenario(game, scenario)
    a, b = game.dist_A, game.dist_B
    shift = 0.0 if scenario == 1 else -game.v_T
    return _pbs_surplus(b, a, shift, abs_tol, rel_tol)


def compare_scenarios(game: StochasticGame, abs_tol=ABS_TOL, rel_tol=REL_TOL):
    game.require_ordering()
    v_TA = ofa_valuation(game, "A", abs_tol, rel_tol)
    v_TB = ofa_valuation(game, "B", abs_tol, rel_tol)
    return ScenarioComparison(
        win_prob_s1=win_probability(game, 1, abs_tol, rel_tol),
        win_prob_s2=win_probability(game, 2, abs_tol, rel_tol),
        profit_A_s1=expected_profit(game, 1, abs_tol, rel_tol),
        profit_A_s2=expected_profit(game, 2, abs_tol, rel_tol, valuations=(v_TA, v_TB)),
        v_TA=v_TA,
        v_TB=v_TB,
        profit_B_s1=expected_profit_B(game, 1, abs_tol, rel_tol),
        profit_B_s2=expected_profit_B(game, 2, abs_tol, rel_tol),
    )
