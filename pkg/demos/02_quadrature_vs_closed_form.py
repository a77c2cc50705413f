"""Exponential values: the closed forms and the general quadrature agree.

Run: python3 demos/02_quadrature_vs_closed_form.py
"""
from ofa_pbs import ExpGameParams, StochasticGame, compare_scenarios, exp_closed_forms, make_exponential, make_uniform

params = ExpGameParams(lambda_A=1.0, lambda_B=2.0, v_T=1.0)
cf = exp_closed_forms(params)
q = compare_scenarios(StochasticGame(make_exponential(1.0), make_exponential(2.0), 1.0))

rows = [
    ("v_TA", cf.v_TA, q.v_TA),
    ("v_TB", cf.v_TB, q.v_TB),
    ("win prob, open", cf.win_s1, q.win_prob_s1),
    ("win prob, auctioned", cf.win_s2, q.win_prob_s2),
    ("A profit, open", cf.profit_s1, q.profit_A_s1),
    ("A profit, auctioned", cf.profit_s2, q.profit_A_s2),
]
print(f"{'quantity':<22}{'closed form':>14}{'quadrature':>14}{'rel diff':>11}")
for name, a, b in rows:
    print(f"{name:<22}{a:>14.8f}{b:>14.8f}{abs(a - b) / abs(a):>11.1e}")

# Nothing in the quadrature path is specific to exponentials.
uq = compare_scenarios(StochasticGame(make_uniform(2.0), make_uniform(1.0), 0.3))
print("\nUniform[0,2] vs Uniform[0,1], v_T=0.3:")
for k, v in uq.as_dict().items():
    print(f"  {k:<14} {v:.6f}")
