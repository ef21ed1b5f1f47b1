"""Seeded complex Gaussian sampling and small dense decompositions.

Matrices are plain :class:`numpy.ndarray` objects of dtype ``complex128``.
Every sampler accepts leading batch dimensions so that Monte Carlo kernels can
draw a whole block of trials in a single call.
"""

from typing import NamedTuple

import numpy as np

from .errors import ConvergenceFailure, NotHermitian

HERMITIAN_TOL = 1e-10


def substream(seed, *key):
    """Return an independent generator for ``(seed, *key)``.

    Streams are counter based (Philox) and derived through
    :class:`numpy.random.SeedSequence` spawn keys, so
    ``substream(s, 3)`` does not depend on whether streams 0..2 were ever used.
    """
    ss = np.random.SeedSequence(int(seed), spawn_key=tuple(int(k) for k in key))
    return np.random.Generator(np.random.Philox(ss))


def sample_complex_gaussian(rows, cols, rng, batch=()):
    """Draw a ``rows x cols`` matrix of i.i.d. CN(0, 1) entries.

    Real and imaginary parts are independent N(0, 1/2), so ``E|h|^2 = 1``.

    Parameters
    ----------
    rows, cols : int
        Matrix dimensions, both >= 1.
    rng : numpy.random.Generator
    batch : tuple of int, optional
        Leading batch shape; the result has shape ``batch + (rows, cols)``.
    """
    if rows < 1 or cols < 1:
        raise ValueError(f"dimensions must be positive, got {rows}x{cols}")
    shape = tuple(batch) + (rows, cols)
    z = rng.standard_normal(shape + (2,))
    z *= np.sqrt(0.5)
    return z.view(np.complex128)[..., 0]


class SvdResult(NamedTuple):
    left_vectors: np.ndarray
    singular_values: np.ndarray
    right_vectors: np.ndarray


def svd(M):
    """Economy-size SVD ``M = U diag(S) V^H`` with ``S`` descending.

    Note that the third factor is ``V`` itself, not its conjugate transpose.
    Batched input (``ndim > 2``) is factorized matrix by matrix.
    """
    M = np.asarray(M)
    if M.size == 0:
        raise ValueError("svd of an empty matrix")
    try:
        u, s, vh = np.linalg.svd(M, full_matrices=False)
    except np.linalg.LinAlgError as exc:
        raise ConvergenceFailure(str(exc)) from exc
    return SvdResult(u, s, np.conj(np.swapaxes(vh, -1, -2)))


def is_hermitian(W, tol=HERMITIAN_TOL):
    W = np.asarray(W)
    if W.ndim < 2 or W.shape[-1] != W.shape[-2]:
        return False
    scale = max(1.0, float(np.max(np.abs(W), initial=0.0)))
    return float(np.max(np.abs(W - np.conj(np.swapaxes(W, -1, -2))), initial=0.0)) <= tol * scale


def hermitian_eigvals(W):
    """Real eigenvalues of a Hermitian matrix in descending order."""
    W = np.asarray(W)
    if not is_hermitian(W):
        raise NotHermitian(f"matrix of shape {W.shape} is not Hermitian within {HERMITIAN_TOL}")
    try:
        ev = np.linalg.eigvalsh(W)
    except np.linalg.LinAlgError as exc:
        raise ConvergenceFailure(str(exc)) from exc
    return ev[..., ::-1]


def gram(M):
    """``M^H M`` over the last two axes."""
    return np.conj(np.swapaxes(M, -1, -2)) @ M
