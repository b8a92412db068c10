"""Deciding when the mixed-norm Riesz potential is bounded.

Walks through a few index pairs by hand and prints the rule trace the
decider produced for each one.
"""
from hlskit import IndexSpec, gamma_member, homogeneity_defect, omega_member, omega_via_gamma

# One block: bounded exactly when 1 < p < q < inf and the scaling balances.
spec = IndexSpec.parse("1", "2", "4", "3/4")
report = gamma_member(spec)
print(spec, "->", report.member, report.rules)

# Same exponents at the wrong order: the scaling check fails first.
bad = spec.with_lambda("7/5")
print(bad, "-> defect", homogeneity_defect(bad), "reason:", gamma_member(bad).reason)

# Two blocks.  Each case exercises a different rule on the last block.
cases = [
    ("2,2", "4,4", "3/2"),    # both blocks strictly improving
    ("2,1", "4,2", "5/4"),    # p_2 = 1 needs a witness block
    ("2,1", "4,inf", "3/4"),  # (1, inf) block drops out
    ("2,2", "4,2", "7/4"),    # p_2 = q_2: peel off the block, lower the order
    ("2,3", "inf,3", "3/2"),  # a classical counterexample
]
for p, q, lam in cases:
    r = gamma_member(IndexSpec.parse("1,1", p, q, lam))
    print(f"p=({p}) q=({q}) lambda={lam}: member={r.member}")
    for step in r.trace:
        print("   " * (step.depth + 1), step.rule, "-", step.reason)

# The bilinear form: its own decider, and the reduction through the dual exponent.
s = IndexSpec.parse("1,1", "3/2,1", "3/2,2")
print("Omega:", omega_member(s).rules, "via Gamma:", omega_via_gamma(s).member,
      "at order", omega_via_gamma(s).extra["hls_lambda"])
