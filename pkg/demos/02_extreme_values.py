"""
How much energy do the strongest users carry?
=============================================

Each user's channel energy is a sum of ``L`` unit exponentials.  The
scheduler keeps the ``l`` strongest out of ``n``, so the received energy is
a top-``l`` order statistic.  A Gumbel-type expansion gives it in closed form.
"""

from grassfeed.extreme_stats import ExtremeParams, expected_top_sum, harmonic, mc_top_sums

# For L = 1 the maximum of n exponentials has mean H_n exactly.
mc = mc_top_sums(100, [1], 1, 200_000, seed=0)
print(f"max of 100 exponentials: MC {mc[1][0]:.4f}  H_100 = {harmonic(100):.4f}  "
      f"asymptotic {expected_top_sum(ExtremeParams(100, 1, 1)):.4f}")

# %%
# The expansion against brute force for a few system sizes.
print("\n   n  l  L   asymptotic        MC   rel. gap")
for L in (2, 8):
    for n in (50, 500):
        mc = mc_top_sums(n, [1, 2, 4], L, 50_000, seed=1)
        for l, (m, _) in mc.items():
            a = expected_top_sum(ExtremeParams(n, l, L))
            print(f"{n:4d} {l:2d} {L:2d}   {a:10.4f} {m:9.4f}   {abs(a - m) / m:7.2%}")
