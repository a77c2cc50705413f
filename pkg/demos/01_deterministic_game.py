"""Known values: who wins the block, and at what price, with and without an OFA.

Run: python3 demos/01_deterministic_game.py
"""
from ofa_pbs.detgame import DeterministicGame, chained_clock_oracle, solve_scenario1, solve_scenario2


def show(label, out):
    print(f"  {label:<22} winner={out.block_winner}  ofa_price={out.ofa_price:.4f}  "
          f"pbs_price={out.pbs_price:.4f}  surplus A/B={out.surplus_A:.4f}/{out.surplus_B:.4f}")


# A is only slightly better at top-of-block extraction than B.
game = DeterministicGame(v_A=1.0, v_B=0.9, v_T=0.5)
print("Close values (v_A=1.0, v_B=0.9, v_T=0.5)")
show("open transaction", solve_scenario1(game))
show("transaction auctioned", solve_scenario2(game))
# Holding the transaction is worth 2*(v_A - v_B) to A here, more than the
# 0.1 it earns when both builders can include it.

game = DeterministicGame(v_A=2.0, v_B=0.5, v_T=0.5)
print("\nWide gap (v_A=2.0, v_B=0.5, v_T=0.5): A wins the block either way, so B bids nothing")
show("open transaction", solve_scenario1(game))
show("transaction auctioned", solve_scenario2(game))

# The closed-form answers agree with running two ascending clocks in sequence.
ref = chained_clock_oracle(DeterministicGame(1.0, 0.9, 0.5), tick=1e-4, scenario=2)
print("\nClock auctions with tick 1e-4 on the close-values game:")
show("chained clocks", ref)
