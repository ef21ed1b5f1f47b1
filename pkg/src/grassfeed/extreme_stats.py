"""Expected sum of the ``l`` largest of ``n`` i.i.d. chi-square norms.

A variate is ``X = sum_{j=1}^{L} |h_j|^2`` with ``h_j ~ CN(0, 1)``, i.e. a
Gamma(L, 1) variable.  The asymptotic expansion for the top-``l`` sum uses the
Gumbel normalisation ``(a_n, b_n)`` of its survival function; it is an
approximation that is accurate when ``l`` is much smaller than ``n``.
"""

import math
from dataclasses import dataclass

import numpy as np
from scipy import optimize

from .montecarlo import mean_stderr, run_trials

# Mean of the standard Gumbel law.
EULER_GAMMA = 0.57721566490153286061


@dataclass(frozen=True)
class ExtremeParams:
    n: int
    l: int
    L: int

    def __post_init__(self):
        if not (1 <= self.l <= self.n):
            raise ValueError(f"need 1 <= l <= n, got l={self.l}, n={self.n}")
        if self.L < 1:
            raise ValueError(f"L must be >= 1, got {self.L}")


def chi2_sf(x, L):
    """Survival function ``exp(-x) * sum_{i<L} x^i / i!``."""
    if x < 0:
        raise ValueError("x must be non-negative")
    term = 1.0
    total = 1.0
    for i in range(1, L):
        term *= x / i
        total += term
    return math.exp(-x) * total


def solve_a_n(n, L, tol=1e-10):
    """Solve ``chi2_sf(a, L) = 1/n`` by bisection."""
    if n < 2:
        raise ValueError(f"n must be >= 2, got {n}")
    target = 1.0 / n
    upper = max(1.0, float(L))
    while chi2_sf(upper, L) >= target:
        upper *= 2.0
    return optimize.bisect(lambda x: chi2_sf(x, L) - target, 0.0, upper, xtol=tol, rtol=4 * np.finfo(float).eps, maxiter=500)


def b_n(a_n, L):
    num = 0.0
    den = 0.0
    term = 1.0  # a^i / i!
    for i in range(L):
        if i:
            term *= a_n / i
        num += (L - i) * term
        den += term
    return num / den


def harmonic(l):
    return math.fsum(1.0 / k for k in range(1, l + 1))


def expected_top_sum(params):
    """Asymptotic ``E[sum of the l largest]`` de-normalised to finite ``n``.

    Returns ``l*a_n + b_n*l*(gamma + 1 - H_l)``.  For ``n == 1`` the answer
    is the exact mean ``L``.
    """
    n, l, L = params.n, params.l, params.L
    if n == 1:
        return float(L)
    a = solve_a_n(n, L)
    b = b_n(a, L)
    return l * a + b * l * (EULER_GAMMA + 1.0 - harmonic(l))


def mc_top_sums(n, ls, L, trials, seed, *, workers=1):
    """Brute-force top-``l`` sums for several ``l`` from one set of draws.

    Returns a dict ``{l: (estimate, stderr)}``.
    """
    ls = sorted(set(int(l) for l in ls))
    if not ls or ls[0] < 1 or ls[-1] > n:
        raise ValueError(f"each l must be in [1, n={n}]")
    lmax = ls[-1]

    def kernel(rng, size):
        x = rng.gamma(L, 1.0, size=(size, n))
        if lmax < n:
            x = np.partition(x, n - lmax, axis=1)[:, n - lmax:]
        top = -np.sort(-x, axis=1)
        return np.cumsum(top, axis=1)[:, [l - 1 for l in ls]]

    sums = run_trials(kernel, trials, seed, key=(0xE7, n, L), workers=workers)
    mean, se = mean_stderr(sums)
    return {l: (float(mean[i]), float(se[i])) for i, l in enumerate(ls)}


def mc_top_sum(params, trials, seed, *, workers=1):
    """Monte Carlo oracle: mean of the top-``l`` sum and its standard error."""
    return mc_top_sums(params.n, [params.l], params.L, trials, seed, workers=workers)[params.l]
