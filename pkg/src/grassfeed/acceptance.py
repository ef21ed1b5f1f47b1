"""Acceptance checks for the whole library.

Each check is a plain function returning a :class:`CriterionResult`; they are
shared by ``tests/test_acceptance.py`` and the ``grassfeed validate`` command.
Trial counts, seeds and tolerances are fixed here and must not be tuned.
"""

import io
import math
import time
from dataclasses import dataclass
from functools import lru_cache

import numpy as np

from . import cgmatrix, extreme_stats, grassmann, sumrate, wishart_cond
from .cgmatrix import LogdetQuery
from .extreme_stats import ExtremeParams
from .sumrate import SystemParams, db_to_linear
from .wishart_cond import WishartShape

SEED = 20061015

# default figure grid
DEFAULT_L_R, DEFAULT_L_T, DEFAULT_N = 4, 2, 8
DEFAULT_LS = (1, 2, 4)
DEFAULT_SNR_DB = (0.0, 5.0, 10.0, 15.0, 20.0)
SYSTEM_TRIALS = 20_000


@dataclass
class CriterionResult:
    number: int
    title: str
    passed: bool
    detail: str
    seconds: float = 0.0

    def line(self):
        tag = "PASS" if self.passed else "FAIL"
        return f"[{tag}] {self.number:2d} {self.title} ({self.seconds:.1f}s): {self.detail}"


def _sigma(*ses):
    return math.sqrt(sum(s * s for s in ses))


def _fail_list(failures, limit=6):
    shown = "; ".join(failures[:limit])
    more = f" (+{len(failures) - limit} more)" if len(failures) > limit else ""
    return shown + more


# -- composite Grassmann matrix -------------------------------------------------

GRID_K = (1, 2, 3, 4, 5)
GRID_N = (2, 4, 8)
GRID_C = (0.5, 1.0, 10.0)


@lru_cache(maxsize=4)
def _gram_grid(trials, workers):
    out = {}
    for k in GRID_K:
        for n in GRID_N:
            ld, ld_se, det, det_se = cgmatrix.gram_moments(n, k, GRID_C, trials, SEED, workers=workers)
            for i, c in enumerate(GRID_C):
                out[(k, n, c)] = (ld[i], ld_se[i], det[i], det_se[i])
    return out


def criterion_1(workers=1):
    grid = _gram_grid(10**6, workers)
    worst = 0.0
    failures = []
    for (k, n, c), (_, _, det, _) in grid.items():
        cf = cgmatrix.expected_det_closed_form(LogdetQuery(n, k, c))
        rel = abs(det / cf - 1.0)
        worst = max(worst, rel)
        if rel > 0.01:
            failures.append(f"k={k} n={n} c={c}: closed {cf:.6g} vs MC {det:.6g}")
    detail = f"worst relative error {worst:.2e} over {len(grid)} cells (tol 1e-2)"
    return not failures, detail + ("; " + _fail_list(failures) if failures else "")


def criterion_2(workers=1):
    grid = _gram_grid(10**6, workers)
    failures = []
    for (k, n, c), (ld, se, _, _) in grid.items():
        q = LogdetQuery(n, k, c)
        lo = cgmatrix.logdet_lower_asymptotic(q)
        up = cgmatrix.jensen_upper(q)
        if not lo <= ld + 3 * se:
            failures.append(f"k={k} n={n} c={c}: lower {lo:.5f} > MC {ld:.5f}+3σ")
        if not ld + 3 * se <= up + 3 * se:
            failures.append(f"k={k} n={n} c={c}: MC {ld:.5f} > Jensen {up:.5f}")
    detail = f"{len(grid)} cells checked"
    return not failures, detail + ("; " + _fail_list(failures) if failures else "")


def criterion_3(workers=1):
    parts = []
    ok = True
    for c in (4.0, 16.0):
        mc, se = cgmatrix.wishart_logdet_mc(16, 16, c, 10**5, SEED, workers=workers)
        lo = cgmatrix.logdet_lower_asymptotic(LogdetQuery(16, 16, c))
        rel = abs(lo / mc - 1.0)
        ok &= rel <= 0.05
        parts.append(f"c={c:g}: asym {lo:.4f} vs MC {mc:.4f}±{se:.4f} ({rel:.2%})")
    return ok, "; ".join(parts) + " (tol 5%)"


# -- distortion rate --------------------------------------------------------------

def criterion_4(workers=1):
    parts = []
    ok = True
    for K in (1, 7, 63):
        d, se = grassmann.random_code_distortion(2, 1, 1, K, 400_000, SEED, workers=workers)
        exact = 1.0 / (K + 1)
        upper = grassmann.drf_bounds(2, 1, 1, K).upper
        good = abs(d - exact) <= 3 * se and upper > d
        ok &= good
        parts.append(f"K={K}: {d:.5f}±{se:.5f} vs 1/(K+1)={exact:.5f}, upper={upper:.5f}")
    return ok, "; ".join(parts)


def criterion_5(workers=1):
    Ks = [2**e for e in range(4, 11)]
    parts = []
    ok = True
    for n, m, k in ((2, 1, 2), (4, 1, 2), (4, 2, 1)):
        kt = k * m * (n - m)
        d = [grassmann.random_code_distortion(n, m, k, K, 10**5, SEED, workers=workers)[0] for K in Ks]
        slope = np.polyfit(np.log2(Ks), np.log2(d), 1)[0]
        rel = abs(slope * kt + 1.0)
        ok &= rel <= 0.15
        parts.append(f"({n},{m},{k}): slope {slope:.4f} vs {-1 / kt:.4f} ({rel:.1%})")
    return ok, "; ".join(parts) + " (tol 15%)"


# -- extreme order statistics -------------------------------------------------------

def criterion_6(workers=1):
    failures = []
    worst = 0.0
    anchors = []
    for L in (1, 2, 4, 8):
        for n in (50, 100, 500):
            mc = extreme_stats.mc_top_sums(n, (1, 2, 4), L, 10**6, SEED, workers=workers)
            for l, (est, se) in mc.items():
                asym = extreme_stats.expected_top_sum(ExtremeParams(n, l, L))
                rel = abs(asym - est) / est
                worst = max(worst, rel)
                if rel > 0.03:
                    failures.append(f"L={L} n={n} l={l}: {asym:.4f} vs {est:.4f}")
                if L == 1 and l == 1:
                    h = extreme_stats.harmonic(n)
                    if abs(est - h) > 3 * se:
                        failures.append(f"H_{n}={h:.5f} vs MC {est:.5f}±{se:.5f}")
                    anchors.append(f"H_{n}: {abs(est - h) / se:.2f}σ")
    detail = f"worst relative gap {worst:.2%} (tol 3%); anchors " + ", ".join(anchors)
    return not failures, detail + ("; " + _fail_list(failures) if failures else "")


# -- Wishart eigenvalue shares -----------------------------------------------------------

def criterion_7(workers=1):
    parts = []
    ok = True
    mean22, se22 = wishart_cond.zeta_mc_all(WishartShape(2, 2), 10**6, SEED, workers=workers)
    good = abs(mean22[0] - 0.875) <= 3 * se22[0]
    ok &= good
    parts.append(f"zeta_1(2,2)={mean22[0]:.5f}±{se22[0]:.5f} vs 0.875")

    mean44, se44 = wishart_cond.zeta_mc_all(WishartShape(4, 4), 10**6, SEED, workers=workers)
    asym = wishart_cond.zeta1_asymptotic(WishartShape(4, 4))
    rel = abs(asym / mean44[0] - 1.0)
    ok &= rel <= 0.05
    parts.append(f"zeta_1(4,4) asym {asym:.4f} vs MC {mean44[0]:.4f} ({rel:.2%})")

    for name, mean, se in (("(2,2)", mean22, se22), ("(4,4)", mean44, se44)):
        total = float(np.sum(mean))
        # the shares sum to 1 per sample, so sigma is pure rounding
        tol = max(3 * _sigma(*se), 1e-12)
        ok &= abs(total - 1.0) <= tol
        parts.append(f"sum zeta{name}={total:.12f}")

    _, ratios = wishart_cond.trace_binned_slopes(WishartShape(4, 4), 10**6, SEED, workers=workers)
    spread = float(np.max(np.abs(ratios / ratios.mean() - 1.0)))
    ok &= spread <= 0.05
    parts.append(f"trace-decile ratio spread {spread:.2%} (tol 5%)")
    return ok, "; ".join(parts)


# -- beamforming structure ---------------------------------------------------------------

def criterion_8(workers=1):
    p = SystemParams(L_R=2, L_T=2, N=8, l=2, rho=db_to_linear(10.0), K=16, trials=10**5,
                     seed=SEED, workers=workers)
    tr = sumrate.beamforming_trace(p, None, store_directions=False)
    proj = tr["proj"]
    m1, se1 = (float(v) for v in _mean_se(proj[:, 0, 0]))
    m2, se2 = (float(v) for v in _mean_se(proj[:, 1, 0]))
    sym_ok = abs(m1 - m2) <= 3 * _sigma(se1, se2)
    stat = proj[:, :, 0].sum(axis=1) / p.l + (p.L_T - 1) * proj[:, :, 1:].mean(axis=(1, 2))
    s, s_se = (float(v) for v in _mean_se(stat))
    # the statistic is 1 per sample up to rounding, so allow float slack
    sum_ok = abs(s - 1.0) <= max(3 * s_se, 1e-12)
    detail = (f"E|v1'b1|^2={m1:.5f}±{se1:.5f}, E|v1'b2|^2={m2:.5f}±{se2:.5f}; "
              f"gamma/l+(L_T-1)E|v2'b|^2={s:.12f}")
    return sym_ok and sum_ok, detail


def _mean_se(x):
    from .montecarlo import mean_stderr
    return mean_stderr(x)


# -- system-level criteria ------------------------------------------------------------------

def default_params(l, snr_db, *, K=None, N=DEFAULT_N, trials=SYSTEM_TRIALS, workers=1):
    return SystemParams(L_R=DEFAULT_L_R, L_T=DEFAULT_L_T, N=N, l=l, rho=db_to_linear(snr_db),
                        K=K if K is not None else DEFAULT_L_T**l, trials=trials, seed=SEED, workers=workers)


def default_codebook(p):
    return grassmann.generate_random_codebook(p.L_T, 1, p.l, p.K, p.seed)


def criterion_9(workers=1):
    failures = []
    checked = 0
    for l in DEFAULT_LS:
        for db in DEFAULT_SNR_DB:
            p = default_params(l, db, workers=workers)
            runs = (("antenna", sumrate.simulate_antenna_selection(p)),
                    ("beamforming", sumrate.simulate_beamforming(p, default_codebook(p))))
            for name, r in runs:
                checked += 1
                sig = _sigma(r.mc_rate_stderr, r.ub_mc_stderr)
                if r.mc_rate > r.ub_mc + 3 * sig:
                    failures.append(f"{name} l={l} {db:g}dB: rate {r.mc_rate:.4f} > ub {r.ub_mc:.4f}")
                if r.ub_mc < r.ub_lower_theory - 3 * r.ub_mc_stderr:
                    failures.append(f"{name} l={l} {db:g}dB: ub {r.ub_mc:.4f} < lower {r.ub_lower_theory:.4f}")
                if r.ub_upper_theory is not None and r.ub_mc > r.ub_upper_theory + 3 * r.ub_mc_stderr:
                    failures.append(f"{name} l={l} {db:g}dB: ub {r.ub_mc:.4f} > upper {r.ub_upper_theory:.4f}")
    detail = f"{checked} configurations, {len(failures)} violations"
    return not failures, detail + ("; " + _fail_list(failures) if failures else "")


def criterion_10(workers=1):
    l, L_T = 2, 2
    bits = list(range(2, 11))
    loss = []
    last = None
    for R in bits:
        p = SystemParams(L_R=2, L_T=L_T, N=8, l=l, rho=db_to_linear(10.0), K=2**R, trials=10**5,
                         seed=SEED, workers=workers)
        r = sumrate.simulate_beamforming(p, None)
        loss.append(l - r.gamma_mc)
        last = r
    slope = np.polyfit(bits, np.log2(loss), 1)[0]
    target = -1.0 / (l * (L_T - 1))
    rel = abs(slope / target - 1.0)
    gap = (last.perfect_rate - last.mc_rate) / last.perfect_rate
    ok = rel <= 0.20 and gap <= 0.02
    detail = (f"slope {slope:.4f} vs {target:.4f} ({rel:.1%}, tol 20%); "
              f"R_fb=10 rate {last.mc_rate:.4f} vs perfect {last.perfect_rate:.4f} (gap {gap:.2%}, tol 2%)")
    return ok, detail


def criterion_11(workers=1):
    failures = []
    parts = []
    for l in DEFAULT_LS:
        for db in DEFAULT_SNR_DB:
            p = default_params(l, db, K=DEFAULT_L_T**l, workers=workers)
            a = sumrate.simulate_antenna_selection(p)
            b = sumrate.simulate_beamforming(p, default_codebook(p))
            sig = _sigma(a.mc_rate_stderr, b.mc_rate_stderr)
            rel = (a.mc_rate - b.mc_rate) / b.mc_rate
            if a.mc_rate < b.mc_rate - 3 * sig or abs(rel) > 0.10:
                failures.append(f"l={l} {db:g}dB: antenna {a.mc_rate:.4f} vs beamforming {b.mc_rate:.4f}")
            if db == 10.0:
                parts.append(f"l={l}: +{rel:.1%}")
    detail = "antenna advantage at 10 dB " + ", ".join(parts) + " (tol 10%)"
    return not failures, detail + ("; " + _fail_list(failures) if failures else "")


def _increasing(values, label, failures):
    for (x0, r0, s0), (x1, r1, s1) in zip(values, values[1:]):
        if r1 - r0 < -3 * _sigma(s0, s1):
            failures.append(f"{label}: {x0}->{x1} rate {r0:.4f}->{r1:.4f}")


def criterion_12(workers=1):
    failures = []
    l = 2
    for name in ("antenna", "beamforming"):
        row = []
        for N in (4, 8, 16):
            p = default_params(l, 10.0, N=N, workers=workers)
            r = (sumrate.simulate_antenna_selection(p) if name == "antenna"
                 else sumrate.simulate_beamforming(p, default_codebook(p)))
            row.append((N, r.mc_rate, r.mc_rate_stderr))
        _increasing(row, f"{name} vs N", failures)

        row = []
        for db in DEFAULT_SNR_DB:
            p = default_params(l, db, workers=workers)
            r = (sumrate.simulate_antenna_selection(p) if name == "antenna"
                 else sumrate.simulate_beamforming(p, default_codebook(p)))
            row.append((db, r.mc_rate, r.mc_rate_stderr))
        _increasing(row, f"{name} vs SNR", failures)

    row = []
    for K in (1, 4, 16, 64, 256, 1024):
        p = default_params(l, 10.0, K=K, workers=workers)
        r = sumrate.simulate_beamforming(p, default_codebook(p))
        row.append((K, r.mc_rate, r.mc_rate_stderr))
    _increasing(row, "beamforming vs K", failures)
    detail = "N in {4,8,16}, SNR 0..20 dB, K in {1..1024}"
    return not failures, detail + ("; " + _fail_list(failures) if failures else "")


def criterion_13(workers=1):
    from .cli import ExperimentConfig, run_experiment

    digests = {}
    for experiment in ("antenna", "beamforming"):
        outputs = []
        for w in (1, 3):
            cfg = ExperimentConfig.from_mapping(experiment, {
                "snr_grid_db": [0.0, 10.0],
                "log_base": "bits",
                "params": {"L_R": 4, "L_T": 2, "N": 8, "l": [1, 2], "trials": 40_000,
                           "seed": SEED, "workers": w},
            })
            buf = io.StringIO()
            run_experiment(cfg, buf)
            outputs.append(buf.getvalue().encode("utf-8"))
        digests[experiment] = outputs[0] == outputs[1]
    ok = all(digests.values())
    return ok, ", ".join(f"{k}: {'identical' if v else 'DIFFERENT'} across workers 1/3" for k, v in digests.items())


CRITERIA = {
    1: ("closed-form E[det] vs Monte Carlo", criterion_1),
    2: ("logdet sandwich", criterion_2),
    3: ("asymptotic Wishart logdet at n=k=16", criterion_3),
    4: ("random-code distortion anchor on G(2,1)", criterion_4),
    5: ("distortion rate scaling", criterion_5),
    6: ("extreme order statistics", criterion_6),
    7: ("trace-conditioned eigenvalue shares", criterion_7),
    8: ("beamforming projection symmetry", criterion_8),
    9: ("sum-rate bound dominance", criterion_9),
    10: ("beamforming loss vs feedback bits", criterion_10),
    11: ("antenna selection vs beamforming", criterion_11),
    12: ("monotonicity in N, K, SNR", criterion_12),
    13: ("determinism across worker counts", criterion_13),
}


def run_criterion(number, workers=1):
    title, fn = CRITERIA[number]
    t0 = time.perf_counter()
    passed, detail = fn(workers=workers)
    return CriterionResult(number, title, bool(passed), detail, time.perf_counter() - t0)


def run_all(numbers=None, workers=1, echo=None):
    results = []
    for number in numbers or sorted(CRITERIA):
        res = run_criterion(number, workers=workers)
        if echo:
            echo(res.line())
        results.append(res)
    return results
