"""Order flow auctions ahead of proposer-builder separation: equilibria, valuations and oracles."""
from .analytic import ClosedFormReport, ExpGameParams, exp_closed_forms, sweep_comparative_statics
from .detgame import DeterministicGame, GameOutcome, clock_auction, solve_scenario1, solve_scenario2
from .dist import ParameterError, ValueDistribution, fosd_dominates, make_exponential, make_uniform
from .mc import MCConfig, MCEstimate, direct_ofa_valuation, simulate_scenario1, simulate_scenario2
from .quadrature import QuadratureError, integrate
from .stochgame import (
    OrderingError,
    ScenarioComparison,
    StochasticGame,
    compare_scenarios,
    expected_profit,
    ofa_valuation,
    taylor_ofa_valuation,
    win_probability,
)

__version__ = "0.1.0"
