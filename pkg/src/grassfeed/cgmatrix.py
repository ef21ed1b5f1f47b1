"""Log-determinant of ``I + c P^H P`` for uniform composite Grassmann matrices.

``P = [p_1 ... p_k]`` has i.i.d. uniform unit columns in C^n.  Three
quantities bracket ``E[log det(I_k + c P^H P)]``:

* a Wishart lower bound ``E[log det(I_k + (c/n) H^H H)]``, approximated here by
  its large-system limit,
* the Monte Carlo value itself,
* the Jensen upper bound ``log E[det(I_k + c P^H P)]`` in closed form.

Natural logarithms are used throughout.
"""

import math
from dataclasses import dataclass

import numpy as np

from .errors import UnsupportedOrder
from .montecarlo import mean_stderr, run_trials
from .randmat import gram, sample_complex_gaussian


@dataclass(frozen=True)
class LogdetQuery:
    n: int
    k: int
    c: float

    def __post_init__(self):
        if self.n < 1 or self.k < 1:
            raise ValueError(f"n and k must be >= 1, got n={self.n}, k={self.k}")
        if not self.c > 0:
            raise ValueError(f"c must be positive, got {self.c}")


@dataclass(frozen=True)
class LogdetBounds:
    lower: float
    upper: float | None
    mc: float | None = None
    mc_stderr: float | None = None


def unit_gram(n, k, rng, size):
    """Gram matrices ``P^H P`` of ``size`` uniform composite matrices (unit diagonal)."""
    P = sample_complex_gaussian(n, k, rng, batch=(size,))
    P /= np.linalg.norm(P, axis=-2, keepdims=True)
    G = gram(P)
    idx = np.arange(k)
    G[:, idx, idx] = 1.0
    return G


def _logdet_hpd(A):
    """``log det`` of Hermitian positive definite stacks via Cholesky."""
    L = np.linalg.cholesky(A)
    return 2.0 * np.sum(np.log(np.abs(np.diagonal(L, axis1=-2, axis2=-1))), axis=-1)


def gram_moments(n, k, cs, trials, seed, *, workers=1):
    """Monte Carlo ``E[log det]`` and ``E[det]`` of ``I + c P^H P`` for each ``c``.

    One set of Gram samples is shared across all coefficients.  Returns
    ``(logdet_mean, logdet_se, det_mean, det_se)``, each an array over ``cs``.
    """
    cs = np.atleast_1d(np.asarray(cs, dtype=float))
    nc = len(cs)
    if k == 1:
        # P^H P == 1 identically, so both moments are deterministic
        # log(1 + c) rather than log1p so the value matches jensen_upper exactly
        return np.log(1.0 + cs), np.zeros(nc), 1.0 + cs, np.zeros(nc)
    eye = np.eye(k)

    def kernel(rng, size):
        G = unit_gram(n, k, rng, size)
        out = np.empty((size, 2 * nc))
        for i, c in enumerate(cs):
            ld = _logdet_hpd(eye + c * G)
            out[:, i] = ld
            out[:, nc + i] = np.exp(ld)
        return out

    vals = run_trials(kernel, trials, seed, key=(0x6D47, n, k), workers=workers)
    mean, se = mean_stderr(vals)
    return mean[:nc], se[:nc], mean[nc:], se[nc:]


def logdet_mc(q, trials, seed, *, workers=1):
    ld, se, _, _ = gram_moments(q.n, q.k, [q.c], trials, seed, workers=workers)
    return float(ld[0]), float(se[0])


def det_mc(q, trials, seed, *, workers=1):
    _, _, d, se = gram_moments(q.n, q.k, [q.c], trials, seed, workers=workers)
    return float(d[0]), float(se[0])


def expected_det_closed_form(q):
    """``E[det(I_k + c P^H P)]`` for ``1 <= k <= 5``."""
    n, k, c = q.n, q.k, float(q.c)
    a = 1.0 + c
    if k == 1:
        return a
    if k == 2:
        return a**2 - c**2 / n
    if k == 3:
        return a**3 - c**2 * a * 3 / n + c**3 * 2 / n**2
    if k == 4:
        return (a**4 - c**2 * a**2 * 6 / n + c**3 * a * 8 / n**2
                - c**4 * (6 / n**3 - 3 / n**2))
    if k == 5:
        return (a**5 - c**2 * a**3 * 10 / n + c**3 * a**2 * 20 / n**2
                - c**4 * a * (30 / n**3 - 15 / n**2) + c**5 * (24 / n**4 - 20 / n**3))
    raise UnsupportedOrder(f"closed form only tabulated for 1 <= k <= 5, got k={k}")


def jensen_upper(q):
    return math.log(expected_det_closed_form(q))


def logdet_lower_asymptotic(q):
    """Large-system limit of ``E[log det(I_k + (c/n) H^H H)]``.

    The per-dimension limit is evaluated at the actual ``(n, k)`` and scaled
    by ``min(n, k)``.  Reliable only when ``min(n, k)`` is moderately large.
    """
    n, k, c = q.n, q.k, float(q.c)
    mn = min(n, k)
    y = mn / max(n, k)
    r = math.sqrt(y)
    alpha = n / (mn * c)
    s = 1.0 + y + alpha
    w = 0.5 * (s + math.sqrt(s * s - 4.0 * y))
    # the two roots of x^2 - s x + y multiply to y; avoids cancellation in u
    u = y / (r * w)
    per_dim = math.log(w / alpha) - u / r
    if y < 1.0:
        per_dim -= (1.0 - y) / y * math.log1p(-u * r)
    return mn * per_dim


def wishart_logdet_mc(n, k, c, trials, seed, *, workers=1):
    """Monte Carlo ``E[log det(I_k + (c/n) H^H H)]`` for ``n x k`` Gaussian ``H``."""
    small = min(n, k)

    def kernel(rng, size):
        H = sample_complex_gaussian(n, k, rng, batch=(size,))
        W = gram(H) if k <= n else H @ np.conj(np.swapaxes(H, -1, -2))
        W = W * (c / n)
        W[:, np.arange(small), np.arange(small)] += 1.0
        return _logdet_hpd(W)

    vals = run_trials(kernel, trials, seed, key=(0x3157, n, k), workers=workers)
    mean, se = mean_stderr(vals)
    return float(mean), float(se)


def logdet_bounds(q, trials=None, seed=0, *, workers=1):
    upper = jensen_upper(q) if q.k <= 5 else None
    lower = logdet_lower_asymptotic(q)
    if trials:
        mc, se = logdet_mc(q, trials, seed, workers=workers)
        return LogdetBounds(lower=lower, upper=upper, mc=mc, mc_stderr=se)
    return LogdetBounds(lower=lower, upper=upper)
