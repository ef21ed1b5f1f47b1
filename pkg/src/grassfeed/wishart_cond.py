"""Trace-conditioned eigenvalue shares of complex Wishart matrices.

For ``W = H^H H`` with ``H`` an ``n x m`` CN(0, 1) matrix, the conditional
mean of the i-th largest eigenvalue given ``tr W = c`` is ``zeta_i * c``.
Since the normalised spectrum ``lambda / tr W`` is independent of the trace
for Gaussian ``H``, ``zeta_i = E[lambda_i / tr W]``; the Monte Carlo
estimator below averages that ratio directly.
"""

import math
from dataclasses import dataclass
from functools import lru_cache

import numpy as np
from scipy import optimize

from .errors import NoRoot
from .montecarlo import mean_stderr, run_trials
from .randmat import gram, sample_complex_gaussian


@dataclass(frozen=True)
class WishartShape:
    m: int
    n: int
    beta: int = 2

    def __post_init__(self):
        if not (1 <= self.m <= self.n):
            raise ValueError(f"need n >= m >= 1, got m={self.m}, n={self.n}")
        if self.beta != 2:
            raise ValueError("only the complex field (beta=2) is supported")

    @property
    def y(self):
        return self.m / self.n


def _spectrum_shares(shape, rng, size):
    H = sample_complex_gaussian(shape.n, shape.m, rng, batch=(size,))
    ev = np.linalg.eigvalsh(gram(H))[:, ::-1]
    return ev, ev.sum(axis=1)


def zeta_mc_all(shape, trials, seed, *, workers=1):
    """Estimates of ``zeta_1..zeta_m`` with standard errors (arrays of length m)."""

    def kernel(rng, size):
        ev, tr = _spectrum_shares(shape, rng, size)
        return ev / tr[:, None]

    shares = run_trials(kernel, trials, seed, key=(0x2E7A, shape.m, shape.n), workers=workers)
    return mean_stderr(shares)


def zeta_mc(shape, i, trials, seed, *, workers=1):
    if not (1 <= i <= shape.m):
        raise ValueError(f"eigenvalue index must be in [1, {shape.m}], got {i}")
    mean, se = zeta_mc_all(shape, trials, seed, workers=workers)
    return float(mean[i - 1]), float(se[i - 1])


def trace_binned_slopes(shape, trials, seed, *, bins=10, workers=1):
    """Ratio ``mean(lambda_1) / mean(tr W)`` within each trace quantile bin.

    If the conditional mean is proportional to the trace, every bin reports
    the same ratio.  Returns ``(bin_mean_trace, ratios)``.
    """

    def kernel(rng, size):
        ev, tr = _spectrum_shares(shape, rng, size)
        return np.column_stack([ev[:, 0], tr])

    out = run_trials(kernel, trials, seed, key=(0x2E7B, shape.m, shape.n), workers=workers)
    lam1, tr = out[:, 0], out[:, 1]
    edges = np.quantile(tr, np.linspace(0.0, 1.0, bins + 1))
    which = np.clip(np.searchsorted(edges, tr, side="right") - 1, 0, bins - 1)
    bin_tr = np.array([tr[which == b].mean() for b in range(bins)])
    bin_l1 = np.array([lam1[which == b].mean() for b in range(bins)])
    return bin_tr, bin_l1 / bin_tr


def _theta(a, y):
    # the denominator 1 - sqrt(y) cos(a) is positive for y < 1, so the
    # principal branch already lies in [0, pi/2)
    r = math.sqrt(y)
    return math.atan2(r * math.sin(a), 1.0 - r * math.cos(a))


def _quantile_equation(shape):
    m, y = shape.m, shape.y
    if y == 1.0:
        return lambda a: (math.pi - a - math.sin(a)) / math.pi - 1.0 / m
    r = math.sqrt(y)
    return lambda a: (math.pi - a - math.sin(a) / r + (1.0 - y) / y * _theta(a, y)) / math.pi - 1.0 / m


def solve_edge_angle(shape, tol=1e-12):
    """Angle ``a`` in ``[0, pi]`` at which the top ``1/m`` of the spectrum starts."""
    f = _quantile_equation(shape)
    lo, hi = f(0.0), f(math.pi)
    if lo == 0.0:
        return 0.0
    if not (lo > 0.0 > hi):
        raise NoRoot(f"no sign change on [0, pi] for m={shape.m}, n={shape.n}: f(0)={lo}, f(pi)={hi}")
    return optimize.bisect(f, 0.0, math.pi, xtol=tol, maxiter=200)


def zeta1_asymptotic(shape):
    """Large-dimension approximation of ``zeta_1``."""
    if shape.m == 1:
        return 1.0
    a = solve_edge_angle(shape)
    return (math.pi - a + 0.5 * math.sin(2.0 * a)) / math.pi


ZETA_MC_TRIALS = 10**6
ZETA_MC_SEED = 20060101


@lru_cache(maxsize=None)
def zeta1_cached(m, n):
    """Monte Carlo ``zeta_1`` at a fixed seed, memoised per shape."""
    return zeta_mc(WishartShape(m, n), 1, ZETA_MC_TRIALS, ZETA_MC_SEED)[0]


def zeta1(m, n, *, asymptotic_min_dim=4):
    """``zeta_1`` for an ``n x m`` channel in either orientation.

    The nonzero spectra of ``H^H H`` and ``H H^H`` coincide, so the shape is
    taken as ``(min, max)``.  Small shapes use the cached Monte Carlo value
    because the asymptotic formula is off by a few percent there.
    """
    lo, hi = min(m, n), max(m, n)
    if lo >= asymptotic_min_dim:
        return zeta1_asymptotic(WishartShape(lo, hi))
    return zeta1_cached(lo, hi)
