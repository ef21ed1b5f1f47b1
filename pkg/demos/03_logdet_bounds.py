"""
Bracketing the log-determinant of a random Gram matrix
======================================================

With ``l`` unit-norm beam directions in ``C^n`` the sum rate involves
``E log det(I + c P^H P)``.  Jensen's inequality gives an upper bound in closed
form, and a Wishart comparison gives a lower bound with a large-system limit.
"""

from grassfeed.cgmatrix import LogdetQuery, expected_det_closed_form, jensen_upper, logdet_lower_asymptotic, gram_moments

cs = [0.5, 1.0, 10.0]
print(" n  k     c     lower        MC     Jensen   E[det] closed / MC")
for n in (2, 4, 8):
    for k in (2, 4):
        ld, _, det, _ = gram_moments(n, k, cs, 50_000, seed=0)
        for i, c in enumerate(cs):
            q = LogdetQuery(n, k, c)
            print(f"{n:2d} {k:2d} {c:5.1f}  {logdet_lower_asymptotic(q):8.4f}  {ld[i]:8.4f}  "
                  f"{jensen_upper(q):8.4f}   {expected_det_closed_form(q):9.3f} / {det[i]:9.3f}")

# %%
# Two columns in C^2: |p_1^H p_2|^2 is uniform, so the middle value has the
# quadrature answer 4 ln 4 - 3 ln 3 - 1.
import math

print(f"\nquadrature oracle for n=k=2, c=1: {4 * math.log(4) - 3 * math.log(3) - 1:.4f}")
