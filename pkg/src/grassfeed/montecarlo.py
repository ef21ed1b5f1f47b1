"""Block-parallel Monte Carlo driver.

Trials are cut into fixed-size blocks and block ``b`` always draws from
``substream(seed, *key, b)``.  The block layout depends only on the trial
count, never on the number of workers, and results are concatenated in block
order, so every reduction is bit-identical for any ``workers`` value.
"""

from concurrent.futures import ThreadPoolExecutor

import numpy as np

from .randmat import substream

BLOCK_SIZE = 1 << 14


def block_sizes(trials, block_size=BLOCK_SIZE):
    if trials < 1:
        raise ValueError(f"trials must be >= 1, got {trials}")
    full, rem = divmod(int(trials), block_size)
    return [block_size] * full + ([rem] if rem else [])


def run_trials(kernel, trials, seed, *, key=(), workers=1, block_size=BLOCK_SIZE):
    """Evaluate ``kernel(rng, size)`` over ``trials`` trials.

    ``kernel`` returns an array with leading dimension ``size`` or a dict of
    such arrays; the per-trial outputs are concatenated along axis 0.
    """
    sizes = block_sizes(trials, block_size)
    key = tuple(key)

    def one(b):
        return kernel(substream(seed, *key, b), sizes[b])

    if workers is None or workers <= 1 or len(sizes) == 1:
        parts = [one(b) for b in range(len(sizes))]
    else:
        with ThreadPoolExecutor(max_workers=int(workers)) as pool:
            parts = list(pool.map(one, range(len(sizes))))

    if isinstance(parts[0], dict):
        return {name: np.concatenate([p[name] for p in parts]) for name in parts[0]}
    return np.concatenate(parts)


def mean_stderr(x, axis=0):
    """Sample mean and its standard error (``ddof=1``) along ``axis``."""
    x = np.asarray(x, dtype=float)
    n = x.shape[axis]
    mean = x.mean(axis=axis)
    if n < 2:
        return mean, np.zeros_like(mean)
    return mean, x.std(axis=axis, ddof=1) / np.sqrt(n)
