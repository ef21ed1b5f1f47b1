"""Composite Grassmann manifolds over the complex field.

A point of the k-composite manifold ``G_{n,m}^{(k)}`` is stored as a
``(k, n, m)`` array of generator matrices with orthonormal columns.  A
codebook of ``K`` points is a ``(K, k, n, m)`` array.

Squared chordal distances are computed with the identity
``d_c^2(P, Q) = m - ||P^H Q||_F^2`` in the vectorised paths;
:func:`chordal_distance` uses the projector definition instead.
"""

import math
from dataclasses import dataclass, field

import numpy as np
from scipy.special import gammaln

from .errors import DegenerateManifold, RankDeficient, ShapeMismatch
from .montecarlo import mean_stderr, run_trials
from .randmat import sample_complex_gaussian, substream

ORTHO_TOL = 1e-10


def orthonormalize(G):
    """Gram-Schmidt orthonormalisation, i.e. the Q factor of ``G = QR`` with
    ``diag(R)`` real positive.

    Works on stacks of ``n x m`` matrices.  With Gaussian input the result is
    Haar distributed on the Stiefel manifold.
    """
    G = np.array(G, dtype=np.complex128)
    m = G.shape[-1]
    scale = np.linalg.norm(G, axis=-2)
    for j in range(m):
        v = G[..., j]
        # two passes of classical Gram-Schmidt keep orthogonality at 1e-15
        for _ in range(2 if j else 0):
            coef = np.einsum("...ai,...a->...i", np.conj(G[..., :j]), v)
            v = v - np.einsum("...ai,...i->...a", G[..., :j], coef)
        r = np.linalg.norm(v, axis=-1)
        if np.any(r <= ORTHO_TOL * np.maximum(scale[..., j], 1.0)):
            raise RankDeficient("Gaussian sample is numerically rank deficient")
        G[..., j] = v / r[..., None]
    return G


def _check_nmk(n, m, k):
    if not (1 <= m <= n):
        raise ValueError(f"need 1 <= m <= n, got n={n}, m={m}")
    if k < 1:
        raise ValueError(f"k must be >= 1, got {k}")


def sample_blocks(n, m, k, rng, batch=()):
    """Uniform random generator blocks of shape ``batch + (k, n, m)``."""
    _check_nmk(n, m, k)
    G = sample_complex_gaussian(n, m, rng, batch=tuple(batch) + (k,))
    try:
        return orthonormalize(G)
    except RankDeficient:
        G = sample_complex_gaussian(n, m, rng, batch=tuple(batch) + (k,))
        return orthonormalize(G)


@dataclass(frozen=True, eq=False)
class CompositePoint:
    blocks: np.ndarray

    def __post_init__(self):
        b = np.array(self.blocks, dtype=np.complex128)
        if b.ndim == 2:
            b = b[None]
        if b.ndim != 3:
            raise ValueError(f"blocks must have shape (k, n, m), got {b.shape}")
        k, n, m = b.shape
        _check_nmk(n, m, k)
        err = np.linalg.norm(np.conj(np.swapaxes(b, -1, -2)) @ b - np.eye(m), axis=(-2, -1))
        if np.any(err > ORTHO_TOL):
            raise ValueError(f"blocks are not orthonormal (max error {err.max():.3g})")
        b.setflags(write=False)
        object.__setattr__(self, "blocks", b)

    @property
    def k(self):
        return self.blocks.shape[0]

    @property
    def n(self):
        return self.blocks.shape[1]

    @property
    def m(self):
        return self.blocks.shape[2]

    @property
    def shape(self):
        return (self.n, self.m, self.k)

    def matrix(self):
        """The composite Grassmann matrix ``[P_1 ... P_k]`` (``n x km``)."""
        return np.concatenate(list(self.blocks), axis=1)


def sample_uniform_composite(n, m, k, rng):
    return CompositePoint(sample_blocks(n, m, k, rng))


def chordal_distance(P, Q):
    """Composite chordal distance ``sqrt(sum_i d_c^2(P_i, Q_i))``."""
    if P.shape != Q.shape:
        raise ShapeMismatch(f"points live on different manifolds: {P.shape} vs {Q.shape}")
    proj_p = P.blocks @ np.conj(np.swapaxes(P.blocks, -1, -2))
    proj_q = Q.blocks @ np.conj(np.swapaxes(Q.blocks, -1, -2))
    sq = 0.5 * np.sum(np.abs(proj_p - proj_q) ** 2)
    return math.sqrt(max(float(sq), 0.0))


@dataclass(frozen=True, eq=False)
class Codebook:
    """``K`` composite points sharing ``(n, m, k)``; blocks shape ``(K, k, n, m)``."""

    blocks: np.ndarray
    seed: int = -1
    _check: bool = field(default=True, repr=False, compare=False)

    def __post_init__(self):
        b = np.array(self.blocks, dtype=np.complex128)
        if b.ndim != 4 or b.shape[0] < 1:
            raise ValueError(f"codebook blocks must have shape (K, k, n, m) with K >= 1, got {b.shape}")
        _check_nmk(b.shape[2], b.shape[3], b.shape[1])
        if self._check:
            m = b.shape[3]
            err = np.linalg.norm(np.conj(np.swapaxes(b, -1, -2)) @ b - np.eye(m), axis=(-2, -1))
            if np.any(err > ORTHO_TOL):
                raise ValueError(f"codewords are not orthonormal (max error {err.max():.3g})")
        b.setflags(write=False)
        object.__setattr__(self, "blocks", b)

    def __len__(self):
        return self.blocks.shape[0]

    def __getitem__(self, i):
        return CompositePoint(self.blocks[i])

    @property
    def K(self):
        return self.blocks.shape[0]

    @property
    def shape(self):
        _, k, n, m = self.blocks.shape
        return (n, m, k)

    @property
    def points(self):
        return [self[i] for i in range(len(self))]

    def save(self, path):
        save_codebook(self, path)


def generate_random_codebook(n, m, k, K, seed):
    """``K`` i.i.d. uniform points of ``G_{n,m}^{(k)}``, reproducible from ``seed``."""
    if K < 1:
        raise ValueError(f"codebook size must be >= 1, got {K}")
    rng = substream(seed, 0xC0DE, n, m, k, K)
    return Codebook(sample_blocks(n, m, k, rng, batch=(K,)), seed=int(seed), _check=False)


def save_codebook(cb, path):
    """Write ``cb`` as an ``.npz`` container; the round trip is bit exact."""
    n, m, k = cb.shape
    header = np.array([n, m, k, cb.K, cb.seed], dtype=np.int64)
    with open(path, "wb") as fh:
        np.savez(fh, header=header, blocks=np.ascontiguousarray(cb.blocks))


def load_codebook(path):
    with np.load(path, allow_pickle=False) as data:
        header = data["header"]
        blocks = data["blocks"]
    n, m, k, K, seed = (int(v) for v in header)
    if blocks.shape != (K, k, n, m):
        raise ShapeMismatch(f"header says {(K, k, n, m)} but blocks have shape {blocks.shape}")
    return Codebook(blocks, seed=seed)


def _energy(Q, C):
    """``||Q_j^H C_j||_F^2`` summed over factors ``j``.

    ``Q`` is ``(..., S, k, n, m)`` and ``C`` is ``(..., K, k, n, m)`` with matching
    leading dimensions; the result has shape ``(..., S, K)``.
    """
    *lead, S, k, n, m = Q.shape
    K = C.shape[-4]
    # (..., k, S*m, n) @ (..., k, n, K*m) -> (..., k, S*m, K*m)
    Qh = np.conj(np.moveaxis(Q, -4, -3)).swapaxes(-1, -2).reshape(*lead, k, S * m, n)
    Cm = np.moveaxis(C, -4, -3).transpose(*range(len(lead)), -4, -2, -3, -1).reshape(*lead, k, n, K * m)
    inner = np.abs(Qh @ Cm) ** 2
    inner = inner.reshape(*lead, k, S, m, K, m).sum(axis=(-5, -3, -1))
    return inner


def squared_distances(Q, codebook_blocks):
    """Squared composite chordal distances from each source to each codeword.

    ``Q`` has shape ``(..., k, n, m)``, ``codebook_blocks`` ``(K, k, n, m)``;
    the result has shape ``(..., K)``.
    """
    Q = np.asarray(Q)
    k, n, m = Q.shape[-3:]
    lead = Q.shape[:-3]
    flat = Q.reshape(-1, k, n, m)
    energy = _energy(flat, codebook_blocks).reshape(*lead, codebook_blocks.shape[0])
    return np.maximum(k * m - energy, 0.0)


def correlations(V, codebook_blocks):
    """``sum_j |v_j^H b_{K,j}|^2`` for rank-one factors.

    ``V`` has shape ``(..., l, n)`` (one unit vector per factor) and the
    codebook ``(K, l, n, 1)``; the result has shape ``(..., K)``.
    """
    inner = np.einsum("...jn,Kjn->...Kj", np.conj(V), codebook_blocks[..., 0], optimize=True)
    return np.sum(np.abs(inner) ** 2, axis=-1)


def _check_shape(shape, cb):
    if shape != cb.shape:
        raise ShapeMismatch(f"source shape {shape} does not match codebook shape {cb.shape}")


def quantize(Q, cb):
    """Nearest codeword by chordal distance; ties go to the lowest index."""
    _check_shape(Q.shape, cb)
    d = squared_distances(Q.blocks, cb.blocks)
    idx = int(np.argmin(d))
    return idx, float(d[idx])


def quantize_by_correlation(Q, cb):
    """Rank-one quantizer in argmax-correlation form; equivalent to :func:`quantize` for m=1."""
    _check_shape(Q.shape, cb)
    if Q.m != 1:
        raise ShapeMismatch("correlation form requires m == 1")
    corr = correlations(Q.blocks[..., 0], cb.blocks)
    idx = int(np.argmax(corr))
    return idx, float(max(Q.k - corr[idx], 0.0))


BLOCK_ROWS = 4096


def _chunk(K):
    # keep the (rows, K) distance table around 256k entries
    return max(1, min(BLOCK_ROWS, BLOCK_ROWS * 64 // K))


def estimate_distortion(cb, trials, seed, *, workers=1):
    """Mean squared chordal distance from uniform sources to a fixed codebook."""
    n, m, k = cb.shape

    def kernel(rng, size):
        out = np.empty(size)
        step = _chunk(cb.K)
        for s in range(0, size, step):
            e = min(size, s + step)
            Q = sample_blocks(n, m, k, rng, batch=(e - s,))
            out[s:e] = squared_distances(Q, cb.blocks).min(axis=-1)
        return out

    d = run_trials(kernel, trials, seed, key=(0xD157, n, m, k, cb.K), workers=workers)
    mean, se = mean_stderr(d)
    return float(mean), float(se)


def random_code_distortion(n, m, k, K, trials, seed, *, sources_per_code=16, workers=1):
    """Distortion averaged over the ensemble of random codebooks.

    A fresh codebook of ``K`` i.i.d. uniform codewords is drawn for every
    group of ``sources_per_code`` uniform sources.  The standard error is
    computed from the per-codebook means, which are i.i.d.
    """
    _check_nmk(n, m, k)
    if K < 1:
        raise ValueError(f"codebook size must be >= 1, got {K}")
    groups = max(1, -(-int(trials) // sources_per_code))

    def kernel(rng, size):
        out = np.empty(size)
        step = max(1, _chunk(K) // sources_per_code)
        for s in range(0, size, step):
            e = min(size, s + step)
            cbs = sample_blocks(n, m, k, rng, batch=(e - s, K))
            Q = sample_blocks(n, m, k, rng, batch=(e - s, sources_per_code))
            # each group of sources is paired with its own codebook
            d = np.maximum(k * m - _energy(Q, cbs), 0.0).min(axis=-1)
            out[s:e] = d.mean(axis=-1)
        return out

    per_code = run_trials(kernel, groups, seed, key=(0x4A7D, n, m, k, K), workers=workers,
                          block_size=max(1, (1 << 14) // sources_per_code))
    mean, se = mean_stderr(per_code)
    return float(mean), float(se)


@dataclass(frozen=True)
class DrfBounds:
    lower: float
    upper: float
    t: int
    eta: float


def grassmann_dim(n, m):
    return m * (n - m)


def log_eta(n, m):
    """Log of the volume constant of the small-ball approximation on ``G_{n,m}``."""
    t = grassmann_dim(n, m)
    if 2 * m <= n:
        terms = sum(gammaln(n - i + 1) - gammaln(m - i + 1) for i in range(1, m + 1))
    else:
        terms = sum(gammaln(n - i + 1) - gammaln(n - m - i + 1) for i in range(1, n - m + 1))
    return float(terms - gammaln(t + 1))


def drf_bounds(n, m, k, K):
    """Main-order lower and upper bounds on the distortion rate function ``D*(K)``.

    These are asymptotic (large ``K``) statements; at finite ``K`` the upper
    bound tracks the mean distortion of random codebooks.
    """
    _check_nmk(n, m, k)
    if m == n:
        raise DegenerateManifold(f"G_({n},{m}) is a single point")
    if K < 1:
        raise ValueError(f"codebook size must be >= 1, got {K}")
    t = grassmann_dim(n, m)
    kt = k * t
    le = log_eta(n, m)
    log_c = -(k * gammaln(t + 1) - gammaln(kt + 1) + k * le) / kt
    scale = math.exp(log_c - math.log(K) / kt)
    lower = kt / (kt + 1.0) * scale
    upper = math.exp(gammaln(1.0 / kt)) / kt * scale
    return DrfBounds(lower=lower, upper=upper, t=t, eta=math.exp(le))
