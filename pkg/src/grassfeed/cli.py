"""``grassfeed`` command line front end.

Usage::

    grassfeed <experiment> [--config FILE] [--seed S] [--trials T]
              [--out PATH] [--log-base nat|bits] [--workers W]

Experiments are ``antenna``, ``beamforming``, ``drf``, ``logdet``,
``extreme``, ``zeta`` and ``validate``.  The config file is YAML with the
top-level keys ``snr_grid_db``, ``output_path``, ``log_base`` and ``params``;
omitted keys fall back to the defaults below.  Results are written as CSV to
``--out`` (or ``output_path``), or to stdout when neither is given.
"""

import argparse
import csv
import math
import sys
from dataclasses import dataclass, field

import yaml

from . import acceptance, cgmatrix, extreme_stats, grassmann, sumrate, wishart_cond
from .errors import ConfigError, GrassfeedError
from .sumrate import SystemParams, db_to_linear

EXPERIMENTS = ("antenna", "beamforming", "drf", "logdet", "extreme", "zeta", "validate")
RATE_EXPERIMENTS = ("antenna", "beamforming")
MIN_TRIALS = 100

EXIT_OK, EXIT_CONFIG, EXIT_ACCEPTANCE, EXIT_IO = 0, 1, 2, 3

DEFAULT_PARAMS = {
    "antenna": {"L_R": 4, "L_T": 2, "N": 8, "l": [1, 2, 4], "trials": 10_000, "seed": 0, "workers": 1},
    "beamforming": {"L_R": 4, "L_T": 2, "N": 8, "l": [1, 2, 4], "K": None, "codebook": "fixed",
                    "codebook_path": None, "trials": 10_000, "seed": 0, "workers": 1},
    "drf": {"n": 2, "m": 1, "k": 2, "K": [16, 32, 64, 128, 256, 512, 1024], "codebook": "ensemble",
            "trials": 100_000, "seed": 0, "workers": 1},
    "logdet": {"n": [2, 4, 8], "k": [1, 2, 3, 4, 5], "c": [0.5, 1.0, 10.0], "trials": 100_000,
               "seed": 0, "workers": 1},
    "extreme": {"n": [50, 100, 500], "l": [1, 2, 4], "L": [1, 2, 4, 8], "trials": 100_000,
                "seed": 0, "workers": 1},
    "zeta": {"shapes": [[2, 2], [2, 4], [4, 4], [4, 8]], "trials": 100_000, "seed": 0, "workers": 1},
    "validate": {"criteria": None, "workers": 1},
}
DEFAULT_SNR_DB = [0.0, 5.0, 10.0, 15.0, 20.0]

RATE_COLUMNS = ["snr_db", "l", "K", "mc_rate", "mc_rate_stderr", "ub_mc", "ub_mc_stderr",
                "ub_lower_theory", "ub_upper_theory", "perfect_rate", "e_norm_sum", "gamma_sup"]


@dataclass
class ExperimentConfig:
    experiment: str
    params: dict = field(default_factory=dict)
    snr_grid_db: list = field(default_factory=lambda: list(DEFAULT_SNR_DB))
    output_path: str | None = None
    log_base: str = "nat"

    @classmethod
    def from_mapping(cls, experiment, data):
        if experiment not in EXPERIMENTS:
            raise ConfigError("experiment", f"unknown experiment {experiment!r}; choose from {', '.join(EXPERIMENTS)}")
        data = dict(data or {})
        named = data.pop("experiment", experiment)
        if named != experiment:
            raise ConfigError("experiment", f"config is for {named!r} but {experiment!r} was requested")
        unknown = set(data) - {"params", "snr_grid_db", "output_path", "log_base"}
        if unknown:
            raise ConfigError(sorted(unknown)[0], "unknown top-level key")
        params = dict(DEFAULT_PARAMS[experiment])
        given = data.get("params") or {}
        if not isinstance(given, dict):
            raise ConfigError("params", "must be a mapping")
        for key in given:
            if key not in params:
                raise ConfigError(f"params.{key}", f"not a parameter of {experiment!r}")
        params.update(given)
        cfg = cls(
            experiment=experiment,
            params=params,
            snr_grid_db=data.get("snr_grid_db", list(DEFAULT_SNR_DB)),
            output_path=data.get("output_path"),
            log_base=data.get("log_base", "nat"),
        )
        cfg.validate()
        return cfg

    def validate(self):
        if self.log_base not in ("nat", "bits"):
            raise ConfigError("log_base", f"must be 'nat' or 'bits', got {self.log_base!r}")
        if self.experiment in RATE_EXPERIMENTS:
            grid = self.snr_grid_db
            if not isinstance(grid, (list, tuple)) or not grid:
                raise ConfigError("snr_grid_db", "must be a non-empty list")
            try:
                self.snr_grid_db = [float(x) for x in grid]
            except (TypeError, ValueError):
                raise ConfigError("snr_grid_db", "entries must be numbers") from None
            if not all(math.isfinite(x) for x in self.snr_grid_db):
                raise ConfigError("snr_grid_db", "entries must be finite")
        p = self.params
        if "trials" in p:
            p["trials"] = _int(p["trials"], "params.trials")
            if p["trials"] < MIN_TRIALS:
                raise ConfigError("params.trials", f"must be >= {MIN_TRIALS}, got {p['trials']}")
        if "seed" in p:
            p["seed"] = _int(p["seed"], "params.seed")
            if p["seed"] < 0:
                raise ConfigError("params.seed", "must be non-negative")
        p["workers"] = _int(p.get("workers", 1), "params.workers")
        if p["workers"] < 1:
            raise ConfigError("params.workers", "must be >= 1")
        if self.experiment in ("beamforming", "drf") and p["codebook"] not in ("fixed", "ensemble"):
            raise ConfigError("params.codebook", f"must be 'fixed' or 'ensemble', got {p['codebook']!r}")
        if self.experiment in RATE_EXPERIMENTS:
            for name in ("L_R", "L_T", "N"):
                p[name] = _int(p[name], f"params.{name}")
                if p[name] < 1:
                    raise ConfigError(f"params.{name}", "must be >= 1")
            p["l"] = _int_list(p["l"], "params.l")
            for l in p["l"]:
                limit = p["N"] * p["L_T"] if self.experiment == "antenna" else p["N"]
                if not 1 <= l <= limit:
                    raise ConfigError("params.l", f"{l} is outside [1, {limit}]")
            if self.experiment == "beamforming" and p["K"] is not None:
                p["K"] = _int_list(p["K"], "params.K")
                if min(p["K"]) < 1:
                    raise ConfigError("params.K", "codebook sizes must be >= 1")


def _int(value, name):
    if isinstance(value, bool) or not isinstance(value, (int, float)) or int(value) != value:
        raise ConfigError(name, f"must be an integer, got {value!r}")
    return int(value)


def _int_list(value, name):
    values = value if isinstance(value, (list, tuple)) else [value]
    if not values:
        raise ConfigError(name, "must not be empty")
    return [_int(v, name) for v in values]


def _num_list(value, name):
    values = value if isinstance(value, (list, tuple)) else [value]
    if not values:
        raise ConfigError(name, "must not be empty")
    try:
        return [float(v) for v in values]
    except (TypeError, ValueError):
        raise ConfigError(name, "entries must be numbers") from None


def load_config(experiment, path=None):
    data = {}
    if path is not None:
        with open(path, encoding="utf-8") as fh:
            try:
                data = yaml.safe_load(fh)
            except yaml.YAMLError as exc:
                raise ConfigError("config", f"invalid YAML: {exc}") from None
        if data is None:
            data = {}
        if not isinstance(data, dict):
            raise ConfigError("config", "top level must be a mapping")
    return ExperimentConfig.from_mapping(experiment, data)


# -- experiment runners ---------------------------------------------------------------

def _fmt(x):
    if x is None:
        return ""
    if isinstance(x, (bool, str)):
        return str(x)
    if isinstance(x, int):
        return str(x)
    return repr(float(x))


def _scale(cfg):
    return math.log(2.0) if cfg.log_base == "bits" else 1.0


def _rate_rows(cfg):
    p = cfg.params
    scale = _scale(cfg)
    beam = cfg.experiment == "beamforming"
    fixed_cb = None
    if beam and p["codebook_path"]:
        fixed_cb = grassmann.load_codebook(p["codebook_path"])
    for l in p["l"]:
        if fixed_cb is not None:
            Ks = [fixed_cb.K]
        elif beam and p["K"] is not None:
            Ks = p["K"]
        else:
            Ks = [p["L_T"] ** l]
        for K in Ks:
            cb = None
            if beam and fixed_cb is not None:
                cb = fixed_cb
            elif beam and p["codebook"] == "fixed":
                cb = grassmann.generate_random_codebook(p["L_T"], 1, l, K, p["seed"])
            for db in cfg.snr_grid_db:
                sp = SystemParams(L_R=p["L_R"], L_T=p["L_T"], N=p["N"], l=l, rho=db_to_linear(db), K=K,
                                  trials=p["trials"], seed=p["seed"], workers=p["workers"])
                r = sumrate.simulate_beamforming(sp, cb) if beam else sumrate.simulate_antenna_selection(sp)
                up = None if r.ub_upper_theory is None else r.ub_upper_theory / scale
                perf = None if r.perfect_rate is None else r.perfect_rate / scale
                yield [db, l, K, r.mc_rate / scale, r.mc_rate_stderr / scale, r.ub_mc / scale,
                       r.ub_mc_stderr / scale, r.ub_lower_theory / scale, up, perf, r.e_norm_sum, r.gamma_sup]


def _drf_rows(cfg):
    p = cfg.params
    n, m, k = (_int(p[x], f"params.{x}") for x in ("n", "m", "k"))
    for K in _int_list(p["K"], "params.K"):
        if p["codebook"] == "ensemble":
            d, se = grassmann.random_code_distortion(n, m, k, K, p["trials"], p["seed"], workers=p["workers"])
        else:
            cb = grassmann.generate_random_codebook(n, m, k, K, p["seed"])
            d, se = grassmann.estimate_distortion(cb, p["trials"], p["seed"], workers=p["workers"])
        b = grassmann.drf_bounds(n, m, k, K)
        yield [n, m, k, K, d, se, b.lower, b.upper]


def _logdet_rows(cfg):
    p = cfg.params
    scale = _scale(cfg)
    cs = _num_list(p["c"], "params.c")
    for n in _int_list(p["n"], "params.n"):
        for k in _int_list(p["k"], "params.k"):
            ld, ld_se, det, det_se = cgmatrix.gram_moments(n, k, cs, p["trials"], p["seed"], workers=p["workers"])
            for i, c in enumerate(cs):
                q = cgmatrix.LogdetQuery(n, k, c)
                upper = cgmatrix.jensen_upper(q) / scale if k <= 5 else None
                closed = cgmatrix.expected_det_closed_form(q) if k <= 5 else None
                yield [n, k, c, ld[i] / scale, ld_se[i] / scale, cgmatrix.logdet_lower_asymptotic(q) / scale,
                       upper, det[i], det_se[i], closed]


def _extreme_rows(cfg):
    p = cfg.params
    ls = _int_list(p["l"], "params.l")
    for L in _int_list(p["L"], "params.L"):
        for n in _int_list(p["n"], "params.n"):
            use = [l for l in ls if l <= n]
            mc = extreme_stats.mc_top_sums(n, use, L, p["trials"], p["seed"], workers=p["workers"])
            for l in use:
                asym = extreme_stats.expected_top_sum(extreme_stats.ExtremeParams(n, l, L))
                yield [n, l, L, asym, mc[l][0], mc[l][1]]


def _zeta_rows(cfg):
    p = cfg.params
    shapes = p["shapes"]
    if not isinstance(shapes, (list, tuple)) or not shapes:
        raise ConfigError("params.shapes", "must be a non-empty list of [m, n] pairs")
    for pair in shapes:
        if not isinstance(pair, (list, tuple)) or len(pair) != 2:
            raise ConfigError("params.shapes", f"entry {pair!r} is not an [m, n] pair")
        m, n = (_int(v, "params.shapes") for v in pair)
        try:
            shape = wishart_cond.WishartShape(m, n)
        except ValueError as exc:
            raise ConfigError("params.shapes", str(exc)) from None
        mean, se = wishart_cond.zeta_mc_all(shape, p["trials"], p["seed"], workers=p["workers"])
        asym = wishart_cond.zeta1_asymptotic(shape)
        for i in range(m):
            yield [m, n, i + 1, mean[i], se[i], asym if i == 0 else None]


def _validate_rows(cfg, echo=None):
    p = cfg.params
    numbers = None
    if p["criteria"] is not None:
        numbers = _int_list(p["criteria"], "params.criteria")
        bad = [x for x in numbers if x not in acceptance.CRITERIA]
        if bad:
            raise ConfigError("params.criteria", f"unknown criterion {bad[0]}")
    results = acceptance.run_all(numbers, workers=p["workers"], echo=echo)
    return [[r.number, r.title, "PASS" if r.passed else "FAIL", r.seconds, r.detail] for r in results]


HEADERS = {
    "antenna": RATE_COLUMNS,
    "beamforming": RATE_COLUMNS,
    "drf": ["n", "m", "k", "K", "distortion", "distortion_stderr", "drf_lower", "drf_upper"],
    "logdet": ["n", "k", "c", "logdet_mc", "logdet_mc_stderr", "logdet_lower_asymptotic", "jensen_upper",
               "det_mc", "det_mc_stderr", "det_closed_form"],
    "extreme": ["n", "l", "L", "asymptotic", "mc", "mc_stderr"],
    "zeta": ["m", "n", "i", "zeta_mc", "zeta_mc_stderr", "zeta1_asymptotic"],
    "validate": ["criterion", "title", "result", "seconds", "detail"],
}

RUNNERS = {
    "antenna": _rate_rows,
    "beamforming": _rate_rows,
    "drf": _drf_rows,
    "logdet": _logdet_rows,
    "extreme": _extreme_rows,
    "zeta": _zeta_rows,
}


def run_experiment(cfg, stream, echo=None):
    """Run ``cfg`` and write its CSV to ``stream``.

    All rows are computed before anything is written.  Returns ``True``
    unless a ``validate`` run had a failing criterion.
    """
    if cfg.experiment == "validate":
        rows = _validate_rows(cfg, echo)
        ok = all(r[2] == "PASS" for r in rows)
    else:
        try:
            rows = list(RUNNERS[cfg.experiment](cfg))
        except (ValueError, ArithmeticError) as exc:
            if isinstance(exc, ConfigError):
                raise
            raise ConfigError("params", str(exc)) from exc
        ok = True
    writer = csv.writer(stream, lineterminator="\n")
    writer.writerow(HEADERS[cfg.experiment])
    for row in rows:
        writer.writerow([_fmt(x) for x in row])
    return ok


def build_parser():
    ap = argparse.ArgumentParser(prog="grassfeed", description=__doc__.split("\n\n")[0])
    ap.add_argument("experiment", choices=EXPERIMENTS)
    ap.add_argument("--config", help="YAML config file (defaults are used when omitted)")
    ap.add_argument("--seed", type=int, help="override params.seed")
    ap.add_argument("--trials", type=int, help="override params.trials")
    ap.add_argument("--out", help="output CSV path (default: output_path, else stdout)")
    ap.add_argument("--log-base", choices=("nat", "bits"), help="unit for rates and log-determinants")
    ap.add_argument("--workers", type=int, help="override params.workers")
    return ap


def main(argv=None):
    args = build_parser().parse_args(argv)
    try:
        cfg = load_config(args.experiment, args.config)
        if args.seed is not None:
            cfg.params["seed"] = args.seed
        if args.trials is not None:
            cfg.params["trials"] = args.trials
        if args.workers is not None:
            cfg.params["workers"] = args.workers
        if args.log_base is not None:
            cfg.log_base = args.log_base
        if args.out is not None:
            cfg.output_path = args.out
        cfg.validate()

        echo = (lambda s: print(s, file=sys.stderr)) if cfg.experiment == "validate" else None
        if cfg.output_path:
            # compute first so a failed run leaves no partial file behind
            from io import StringIO
            buf = StringIO()
            ok = run_experiment(cfg, buf, echo)
            with open(cfg.output_path, "w", encoding="utf-8", newline="") as fh:
                fh.write(buf.getvalue())
        else:
            ok = run_experiment(cfg, sys.stdout, echo)
    except ConfigError as exc:
        print(f"grassfeed: config error: {exc}", file=sys.stderr)
        return EXIT_CONFIG
    except OSError as exc:
        print(f"grassfeed: I/O error: {exc}", file=sys.stderr)
        return EXIT_IO
    except GrassfeedError as exc:
        print(f"grassfeed: {exc}", file=sys.stderr)
        return EXIT_CONFIG
    return EXIT_OK if ok else EXIT_ACCEPTANCE


if __name__ == "__main__":
    sys.exit(main())
