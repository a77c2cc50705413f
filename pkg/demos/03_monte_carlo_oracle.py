"""Monte Carlo check of the stochastic game, and the zero-value offset.

Run: python3 demos/03_monte_carlo_oracle.py
"""
from ofa_pbs import StochasticGame, make_exponential
from ofa_pbs.mc import MCConfig, direct_ofa_valuation, ofa_offset, simulate_scenario1, simulate_scenario2
from ofa_pbs.stochgame import ofa_valuation, win_probability

game = StochasticGame(make_exponential(1.0), make_exponential(2.0), 1.0)
cfg = MCConfig(n_samples=1_000_000, seed=7, workers=4)

s1 = simulate_scenario1(game, cfg)
s2 = simulate_scenario2(game, cfg)
for label, est, target in [
    ("win prob, open", s1["win_prob_A"], win_probability(game, 1)),
    ("win prob, auctioned", s2["win_prob_A"], win_probability(game, 2)),
]:
    print(f"{label:<22} MC {est.mean:.5f} ± {est.std_error:.5f}   quadrature {target:.5f}")

# Simulating "hold the transaction" minus "rival holds it" draw by draw gives
# more than the valuation formula: a builder with zero top-of-block value still
# wins whenever v_T beats the rival. The gap is the integral of the rival's CDF
# over [0, v_T].
print()
for b in "AB":
    direct = direct_ofa_valuation(game, b, cfg)
    formula = ofa_valuation(game, b)
    print(f"builder {b}: direct {direct.mean:.5f}  formula {formula:.5f}  "
          f"gap {direct.mean - formula:.5f}  offset {ofa_offset(game, b):.5f}")
