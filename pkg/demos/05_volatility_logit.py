"""Builder market share against exchange volatility.

Run: python3 demos/05_volatility_logit.py
"""
from ofa_pbs.dist import make_exponential
from ofa_pbs.econometrics import (
    TABLE1_HFT,
    TABLE2_BUILDERS,
    generate_synthetic,
    logit_fit,
    logit_predict,
    mnl_predict,
)

# x is the absolute log10 price change; a "1%" move is read as x = 0.001.
for x in (0.0, 0.001, 0.002):
    print(f"P(HFT builder | x={x}) = {logit_predict(TABLE1_HFT, x):.3f}")

print("\nMultinomial shares at x=0 and x=0.002:")
for x in (0.0, 0.002):
    probs = mnl_predict(TABLE2_BUILDERS, x)
    print("  " + ", ".join(f"{k} {p:.2f}" for k, p in zip(TABLE2_BUILDERS.labels, probs)))

# Synthetic data from the structural model. When both builders can include
# the transaction, volatility scales both values equally and does not move the
# winner; the slope only appears once the rival alone holds the transaction.
vol = make_exponential(500.0)
for labeling in ("scenario1", "rival_holds_tx"):
    obs = generate_synthetic(2.0, 1.0, 0.001, vol, 100_000, seed=1, labeling=labeling)
    fit = logit_fit(obs)
    print(f"\n{labeling:<15} beta0={fit.model.beta0:.3f}  beta1={fit.model.beta1:.1f}  z(beta1)={fit.z_scores[1]:.2f}")
