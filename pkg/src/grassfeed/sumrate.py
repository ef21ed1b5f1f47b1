"""Uplink multi-access MIMO sum rate under finite-rate feedback.

Two transmission schemes share one Rayleigh channel model
(``H_i`` is ``L_R x L_T`` with CN(0, 1) entries, unit-variance noise):

* antenna selection: the ``l`` strongest of the ``N*L_T`` transmit antennas
  are switched on;
* general beamforming: the ``l`` users with the largest ``||H_i||_F`` are
  switched on, and each beams along a column of the codeword that best
  matches the users' dominant right singular vectors.

Every on-beam carries power ``rho / l``.  Alongside the Monte Carlo rate each
simulator evaluates the Jensen-type upper bound
``E[log det(I_l + (rho/l) (E[sum n_j^2]/l) Xi^H Xi)]`` and its analytic
lower/upper approximations.  Rates are in nats.
"""

import math
from dataclasses import dataclass

import numpy as np

from . import cgmatrix, grassmann
from .errors import DegenerateBeamforming, InvalidParams, ShapeMismatch
from .extreme_stats import ExtremeParams, expected_top_sum
from .montecarlo import mean_stderr, run_trials
from .randmat import sample_complex_gaussian
from .wishart_cond import zeta1

# bound on (trials x codewords) entries per quantization chunk
_QUANT_CHUNK = 1 << 18


@dataclass(frozen=True)
class SystemParams:
    L_R: int
    L_T: int
    N: int
    l: int
    rho: float
    K: int = 1
    trials: int = 10_000
    seed: int = 0
    workers: int = 1

    def __post_init__(self):
        for name in ("L_R", "L_T", "N", "l", "K", "trials"):
            if getattr(self, name) < 1:
                raise InvalidParams(f"{name} must be >= 1, got {getattr(self, name)}")
        if not self.rho > 0:
            raise InvalidParams(f"rho must be positive, got {self.rho}")

    @property
    def p_on(self):
        return self.rho / self.l

    @property
    def feedback_bits(self):
        return math.log2(self.K)

    def with_(self, **changes):
        fields = {f: getattr(self, f) for f in self.__dataclass_fields__}
        fields.update(changes)
        return SystemParams(**fields)


@dataclass(frozen=True)
class SumRateResult:
    mc_rate: float
    mc_rate_stderr: float
    ub_mc: float
    ub_mc_stderr: float
    ub_lower_theory: float
    ub_upper_theory: float | None
    e_norm_sum: float
    e_norm_sum_mc: float
    e_norm_sum_mc_stderr: float
    gamma_sup: float | None = None
    gamma_mc: float | None = None
    gamma_mc_stderr: float | None = None
    perfect_rate: float | None = None
    perfect_rate_stderr: float | None = None


def db_to_linear(snr_db):
    return 10.0 ** (snr_db / 10.0)


def _logdet_rate(Heff, power):
    """``log det(I + power * Heff Heff^H)`` through the smaller Gram matrix."""
    rows, cols = Heff.shape[-2:]
    if cols <= rows:
        A = np.conj(np.swapaxes(Heff, -1, -2)) @ Heff
    else:
        A = Heff @ np.conj(np.swapaxes(Heff, -1, -2))
    A = A * power
    d = A.shape[-1]
    A[..., np.arange(d), np.arange(d)] += 1.0
    L = np.linalg.cholesky(A)
    return 2.0 * np.sum(np.log(np.abs(np.diagonal(L, axis1=-2, axis2=-1))), axis=-1)


def _top_indices(values, l):
    """Indices of the ``l`` largest entries per row; ties go to the lowest index."""
    return np.argsort(-values, axis=-1, kind="stable")[..., :l]


def fix_phase(v, tol=1e-12):
    """Rotate each vector so that its first non-negligible coordinate is real positive."""
    mag = np.abs(v)
    first = np.argmax(mag > tol, axis=-1)
    lead = np.take_along_axis(v, first[..., None], axis=-1)
    lead_mag = np.abs(lead)
    phase = np.where(lead_mag > 0, lead / np.where(lead_mag > 0, lead_mag, 1.0), 1.0)
    return v * np.conj(phase)


# -- bound pipeline ---------------------------------------------------------

def gamma_sup(L_T, l, K):
    """Largest achievable beamforming gain ``l - D*(K)`` on ``G_{L_T,1}^{(l)}``.

    ``D*(K)`` is approximated by the random-code upper bound, capped at the
    exact one-codeword distortion ``l (1 - 1/L_T)`` which bounds ``D*`` for
    every ``K``.
    """
    if L_T < 2:
        raise DegenerateBeamforming("gamma_sup needs L_T >= 2")
    if K < 1:
        raise InvalidParams(f"K must be >= 1, got {K}")
    d = grassmann.drf_bounds(L_T, 1, l, K).upper
    return l - min(d, l * (1.0 - 1.0 / L_T))


def selected_energy(n, l, L):
    """Approximate ``E[sum of the l largest]`` of ``n`` Gamma(L) variates."""
    if l == n:
        return float(n * L)
    return expected_top_sum(ExtremeParams(n=n, l=l, L=L))


def expected_norm_sum(p, gamma=None, mode="beamforming"):
    """``E[sum_j n_j^2]``, the received energy of the ``l`` on-beams.

    ``mode="antenna"`` ignores ``gamma`` and returns the expected top-``l``
    sum of the ``N*L_T`` column energies.  In beamforming mode the top-``l``
    user energies are split between the dominant eigen-direction
    (share ``zeta_1``) and the rest according to ``gamma``.
    """
    if mode == "antenna":
        return selected_energy(p.N * p.L_T, p.l, p.L_R)
    if mode != "beamforming":
        raise ValueError(f"unknown mode {mode!r}")
    if p.L_T < 2:
        raise DegenerateBeamforming("beamforming with L_T = 1 reduces to user selection")
    if gamma is None:
        gamma = gamma_sup(p.L_T, p.l, p.K)
    if not (0.0 <= gamma <= p.l):
        raise InvalidParams(f"gamma must lie in [0, l={p.l}], got {gamma}")
    z1 = zeta1(p.L_T, p.L_R)
    coef = z1 * gamma / p.l + (1.0 - z1) * (p.l - gamma) / (p.l * (p.L_T - 1))
    return coef * selected_energy(p.N, p.l, p.L_R * p.L_T)


def sum_rate_upper_bound(p, e_norm_sum, *, key=0):
    """Jensen upper bound on the sum rate, three ways.

    Returns ``(mc, mc_stderr, lower, upper)`` where ``upper`` is ``None``
    when ``l > 5``.
    """
    if not e_norm_sum > 0:
        raise InvalidParams(f"e_norm_sum must be positive, got {e_norm_sum}")
    q = cgmatrix.LogdetQuery(n=p.L_R, k=p.l, c=p.rho * e_norm_sum / p.l**2)
    mc, se = cgmatrix.logdet_mc(q, p.trials, _bound_seed(p.seed, key), workers=p.workers)
    lower = cgmatrix.logdet_lower_asymptotic(q)
    upper = cgmatrix.jensen_upper(q) if p.l <= 5 else None
    return mc, se, lower, upper


def _bound_seed(seed, key):
    # decorrelates the bound's Xi samples from the channel draws
    return int(np.random.SeedSequence(int(seed), spawn_key=(0xB0, int(key))).generate_state(1)[0])


# -- antenna selection --------------------------------------------------------

def antenna_trace(p):
    """Per-trial rate and selected energy for antenna selection."""
    n_ant = p.N * p.L_T
    if p.l > n_ant:
        raise InvalidParams(f"l={p.l} exceeds the {n_ant} available antennas")
    power = p.p_on

    def kernel(rng, size):
        H = sample_complex_gaussian(p.L_R, n_ant, rng, batch=(size,))
        energy = np.sum(np.abs(H) ** 2, axis=-2)
        on = _top_indices(energy, p.l)
        Hs = np.take_along_axis(H, on[:, None, :], axis=-1)
        return {
            "rate": _logdet_rate(Hs, power),
            "norm_sum": np.take_along_axis(energy, on, axis=-1).sum(axis=-1),
        }

    return run_trials(kernel, p.trials, p.seed, key=(0xA5, p.L_R, p.L_T, p.N, p.l), workers=p.workers)


def simulate_antenna_selection(p):
    trace = antenna_trace(p)
    rate, rate_se = mean_stderr(trace["rate"])
    ens, ens_se = mean_stderr(trace["norm_sum"])
    e = expected_norm_sum(p, mode="antenna")
    ub, ub_se, lo, up = sum_rate_upper_bound(p, e, key=1)
    return SumRateResult(
        mc_rate=float(rate), mc_rate_stderr=float(rate_se),
        ub_mc=ub, ub_mc_stderr=ub_se, ub_lower_theory=lo, ub_upper_theory=up,
        e_norm_sum=e, e_norm_sum_mc=float(ens), e_norm_sum_mc_stderr=float(ens_se),
    )


# -- general beamforming ------------------------------------------------------

def _pick_fixed(V, cb_blocks):
    """Row-wise argmax-correlation codeword for a fixed codebook."""
    size, K = V.shape[0], cb_blocks.shape[0]
    step = max(1, _QUANT_CHUNK // K)
    idx = np.empty(size, dtype=np.intp)
    for s in range(0, size, step):
        corr = grassmann.correlations(V[s:s + step], cb_blocks)
        idx[s:s + step] = np.argmax(corr, axis=-1)
    return cb_blocks[idx, ..., 0]


def _pick_ensemble(V, K, rng):
    """Draw a fresh random codebook per trial and pick its best codeword."""
    size, l, n = V.shape
    out = np.empty_like(V)
    step = max(1, _QUANT_CHUNK // K)
    for s in range(0, size, step):
        e = min(size, s + step)
        cbs = grassmann.sample_blocks(n, 1, l, rng, batch=(e - s, K))[..., 0]
        inner = np.einsum("tjn,tKjn->tKj", np.conj(V[s:e]), cbs, optimize=True)
        best = np.argmax(np.sum(np.abs(inner) ** 2, axis=-1), axis=-1)
        out[s:e] = cbs[np.arange(e - s), best]
    return out


def beamforming_trace(p, cb=None, *, store_directions=True):
    """Per-trial quantities of the beamforming simulator.

    With ``cb=None`` every trial quantizes against its own freshly drawn
    random codebook of size ``p.K`` (the random-code ensemble).  Keys of the
    returned dict:

    ``rate``, ``perfect_rate``  (trials,)
    ``proj``     (trials, l, L_T)  ``|v_{j,k}^H b_j*|^2``
    ``norm_sq``  (trials, l)       ``n_j^2 = ||H_{i_j} b_j*||^2``
    ``user_energy`` (trials, l)    ``||H_{i_j}||_F^2``
    ``xi``       (trials, l, L_R)  unit directions of ``H_{i_j} b_j*``
    """
    if p.l > p.N:
        raise InvalidParams(f"l={p.l} exceeds the number of users N={p.N}")
    if cb is not None and cb.shape != (p.L_T, 1, p.l):
        raise ShapeMismatch(f"codebook shape {cb.shape} does not match (L_T, 1, l) = {(p.L_T, 1, p.l)}")
    K = p.K if cb is None else cb.K
    power = p.p_on

    def kernel(rng, size):
        H = sample_complex_gaussian(p.L_R, p.L_T, rng, batch=(size, p.N))
        energy = np.sum(np.abs(H) ** 2, axis=(-2, -1))
        on = _top_indices(energy, p.l)
        Hs = H[np.arange(size)[:, None], on]
        _, _, vh = np.linalg.svd(Hs, full_matrices=True)
        V = fix_phase(np.conj(vh[..., 0, :]))
        if cb is None:
            B = _pick_ensemble(V, K, rng)
        else:
            B = _pick_fixed(V, cb.blocks)
        heff = np.einsum("tjab,tjb->tja", Hs, B)
        hperf = np.einsum("tjab,tjb->tja", Hs, V)
        norm_sq = np.sum(np.abs(heff) ** 2, axis=-1)
        out = {
            "rate": _logdet_rate(np.swapaxes(heff, -1, -2), power),
            "perfect_rate": _logdet_rate(np.swapaxes(hperf, -1, -2), power),
            "proj": np.abs(np.einsum("tjkb,tjb->tjk", vh, B)) ** 2,
            "norm_sq": norm_sq,
            "user_energy": energy[np.arange(size)[:, None], on],
        }
        if store_directions:
            out["xi"] = heff / np.sqrt(norm_sq)[..., None]
        return out

    mode = 0 if cb is None else 1
    return run_trials(kernel, p.trials, p.seed, key=(0xBF, p.L_R, p.L_T, p.N, p.l, K, mode), workers=p.workers)


def simulate_beamforming(p, cb=None):
    """Monte Carlo sum rate of general beamforming plus its bounds.

    ``cb`` must be a codebook on ``G_{L_T,1}^{(l)}``; ``None`` selects the
    random-code ensemble of size ``p.K``.
    """
    trace = beamforming_trace(p, cb, store_directions=False)
    K = p.K if cb is None else cb.K
    rate, rate_se = mean_stderr(trace["rate"])
    perf, perf_se = mean_stderr(trace["perfect_rate"])
    ens, ens_se = mean_stderr(trace["norm_sq"].sum(axis=-1))
    gam, gam_se = mean_stderr(trace["proj"][..., 0].sum(axis=-1))
    if p.L_T == 1:
        g_sup = float(p.l)
        e = selected_energy(p.N, p.l, p.L_R)
    else:
        g_sup = gamma_sup(p.L_T, p.l, K)
        e = expected_norm_sum(p.with_(K=K), g_sup, mode="beamforming")
    ub, ub_se, lo, up = sum_rate_upper_bound(p, e, key=2)
    return SumRateResult(
        mc_rate=float(rate), mc_rate_stderr=float(rate_se),
        ub_mc=ub, ub_mc_stderr=ub_se, ub_lower_theory=lo, ub_upper_theory=up,
        e_norm_sum=e, e_norm_sum_mc=float(ens), e_norm_sum_mc_stderr=float(ens_se),
        gamma_sup=g_sup, gamma_mc=float(gam), gamma_mc_stderr=float(gam_se),
        perfect_rate=float(perf), perfect_rate_stderr=float(perf_se),
    )
