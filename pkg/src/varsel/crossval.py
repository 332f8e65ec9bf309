"""Reversed k-fold cross-validation: fit on one fold, predict all the others.

Training on a single fold leaves little data for estimation and much for
validation, which is the regime where the choice of model size matters.
"""

from __future__ import annotations

import csv
import io
from concurrent.futures import ThreadPoolExecutor
from dataclasses import asdict, dataclass, field

import numpy as np

from .criteria import cp_estimated, largest_model_sigma2, select_min, sp
from .data_model import Dataset, standardize, zero_variance_columns
from .errors import ConfigError, VarselError
from .lars import lars_path, step_cap, truncate_path
from .stepwise import forward_stepwise_ric

METHODS = ("stepwise_ric", "lars_cp", "lars_sp")
VARIANCE_SOURCES = ("stepwise", "largest_lars")


@dataclass(frozen=True)
class CvConfig:
    """Settings for :func:`reversed_cv`.

    ``cp_variance`` and ``sp_variance`` choose where the error variance in
    each criterion comes from: ``"stepwise"`` is the hard-threshold stepwise
    fit on the training fold, ``"largest_lars"`` the last model of the LARS
    path run to the design's limit (the full least-squares fit when
    ``m < n``, a near-saturated one otherwise).
    ``max_steps=None`` picks 50 for up to 64 candidates and 64 otherwise.
    """

    folds: int = 5
    reps: int = 20
    methods: tuple[str, ...] = METHODS
    max_steps: int | None = None
    spurious_k: int = 0
    seed: int = 0
    cp_variance: str = "largest_lars"
    sp_variance: str = "stepwise"

    def __post_init__(self):
        object.__setattr__(self, "methods", tuple(self.methods))
        if self.folds < 2:
            raise ConfigError("need at least 2 folds")
        if self.reps < 1:
            raise ConfigError("reps must be at least 1")
        if self.max_steps is not None and self.max_steps < 1:
            raise ConfigError("max_steps must be at least 1")
        if self.spurious_k < 0:
            raise ConfigError("spurious_k must be nonnegative")
        if not self.methods:
            raise ConfigError("method list is empty")
        for method in self.methods:
            if method not in METHODS:
                raise ConfigError(f"unknown method {method!r}")
        for source in (self.cp_variance, self.sp_variance):
            if source not in VARIANCE_SOURCES:
                raise ConfigError(f"unknown variance source {source!r}")

    def resolved_max_steps(self, m: int) -> int:
        if self.max_steps is not None:
            return self.max_steps
        return default_max_steps(m)

    def to_dict(self) -> dict:
        d = asdict(self)
        d["methods"] = list(self.methods)
        return d


def default_max_steps(m: int) -> int:
    """50 for the 64-candidate problem, 64 for larger candidate sets."""
    return min(m, 50) if m <= 64 else 64


@dataclass(frozen=True)
class CvRow:
    rep: int
    fold: int
    method: str
    q: int
    rmse: float


@dataclass
class CvReport:
    config: CvConfig
    n: int
    m: int
    max_steps: int
    rows: list[CvRow] = field(default_factory=list)

    def method_rows(self, method: str) -> list[CvRow]:
        return [r for r in self.rows if r.method == method]

    def median_q(self, method: str) -> float:
        return float(np.median([r.q for r in self.method_rows(method)]))

    def median_rmse(self, method: str) -> float:
        return float(np.median([r.rmse for r in self.method_rows(method)]))

    def summary(self) -> dict:
        return {
            "n": self.n,
            "m": self.m,
            "max_steps": self.max_steps,
            "folds": self.config.folds,
            "reps": self.config.reps,
            "methods": {
                method: {
                    "fits": len(self.method_rows(method)),
                    "median_q": self.median_q(method),
                    "median_rmse": self.median_rmse(method),
                }
                for method in self.config.methods
            },
        }

    def to_csv(self) -> str:
        buf = io.StringIO()
        writer = csv.writer(buf, lineterminator="\n")
        writer.writerow(["rep", "fold", "method", "q", "rmse"])
        for r in self.rows:
            writer.writerow([r.rep, r.fold, r.method, r.q, repr(r.rmse)])
        return buf.getvalue()


def rmse(predicted, actual) -> float:
    """Root mean squared difference between two equal-length vectors."""
    predicted = np.asarray(predicted, dtype=float)
    actual = np.asarray(actual, dtype=float)
    if predicted.shape != actual.shape or predicted.ndim != 1:
        raise VarselError(f"length mismatch: {predicted.shape} vs {actual.shape}")
    if predicted.size == 0:
        raise VarselError("rmse of empty vectors")
    return float(np.sqrt(np.mean((predicted - actual) ** 2)))


def partition(n: int, folds: int, rng: np.random.Generator) -> list[np.ndarray]:
    """Shuffle the case indices and cut them into ``folds`` contiguous groups."""
    perm = rng.permutation(n)
    return np.array_split(perm, folds)


def rep_rng(seed: int, rep: int) -> np.random.Generator:
    return np.random.default_rng(np.random.SeedSequence([seed, rep]))


def _floor_variance(s2: float, y) -> float:
    # a perfect fit gives zero residual variance; keep the criteria defined
    floor = 1e-12 * max(float(np.var(y)), 1e-300)
    return max(s2, floor)


def fit_fold(train: Dataset, m: int, max_steps: int, methods, cp_variance="largest_lars", sp_variance="stepwise"):
    """Fit every requested method on one training set.

    Columns that are constant within the training cases are dropped before
    standardizing. The RIC threshold still uses the full candidate count ``m``.

    Returns
    -------
    fits : dict
        ``method -> (standardized data, active column indices, coefficients, q)``
    keep : list of int
        Columns of ``train`` that survived the constant-column filter.
    """
    keep = sorted(set(range(train.m)) - set(zero_variance_columns(train)))
    sub = train.select(keep)
    sd = standardize(sub)
    fits = {}

    need_stepwise = "stepwise_ric" in methods or (
        "stepwise" in (cp_variance, sp_variance) and ({"lars_cp", "lars_sp"} & set(methods))
    )
    step = forward_stepwise_ric(sd, m) if need_stepwise else None
    if "stepwise_ric" in methods:
        fits["stepwise_ric"] = (sd, [keep[j] for j in step.selected], step.slopes, len(step.selected))

    if {"lars_cp", "lars_sp"} & set(methods):
        full_cap = step_cap(sd.n, sd.m, intercept=True)
        cap = min(max_steps, full_cap)
        variances = {}
        if step is not None:
            variances["stepwise"] = _floor_variance(step.sigma2_hat, sd.y)
        if "largest_lars" in (cp_variance, sp_variance):
            # the capped path is a prefix of the full one
            path = lars_path(sd, full_cap)
            variances["largest_lars"] = _floor_variance(largest_model_sigma2(path.rss, sd.n), sd.y)
            path = truncate_path(path, cap)
        else:
            path = lars_path(sd, cap)
        rss = path.rss
        if "lars_cp" in methods:
            q = select_min(cp_estimated(rss, sd.n, variances[cp_variance]))
            st = path.steps[q]
            fits["lars_cp"] = (sd, [keep[j] for j in st.active_set], st.coefficients, q)
        if "lars_sp" in methods:
            q = select_min(sp(rss, variances[sp_variance]))
            st = path.steps[q]
            fits["lars_sp"] = (sd, [keep[j] for j in st.active_set], st.coefficients, q)
    return fits, keep


def _predict(sd, keep, active, coefficients, X):
    pos = {col: i for i, col in enumerate(keep)}
    local = [pos[j] for j in active]
    return sd.predict(local, coefficients, X[:, keep])


def _run_fold(d: Dataset, cfg: CvConfig, max_steps: int, rep: int, fold: int, groups) -> list[CvRow]:
    train_idx = groups[fold]
    valid_idx = np.concatenate([g for i, g in enumerate(groups) if i != fold])
    train = d.take(train_idx)
    fits, keep = fit_fold(train, d.m, max_steps, cfg.methods, cfg.cp_variance, cfg.sp_variance)
    X_valid = d.X[valid_idx]
    y_valid = d.y[valid_idx]
    rows = []
    for method in cfg.methods:
        sd, active, coefficients, q = fits[method]
        pred = _predict(sd, keep, active, coefficients, X_valid)
        rows.append(CvRow(rep, fold, method, int(q), rmse(pred, y_valid)))
    return rows


def reversed_cv(d: Dataset, cfg: CvConfig, threads: int = 1) -> CvReport:
    """Repeated reversed cross-validation of the configured methods.

    ``d`` must already carry its final candidate columns (expanded and
    augmented upstream). Rows come back ordered by (rep, fold, method)
    whatever the thread count.
    """
    if d.n < 3 * cfg.folds:
        raise ConfigError(f"{d.n} cases leave training folds smaller than 3 with {cfg.folds} folds")
    max_steps = cfg.resolved_max_steps(d.m)
    partitions = [partition(d.n, cfg.folds, rep_rng(cfg.seed, rep)) for rep in range(cfg.reps)]
    items = [(rep, fold) for rep in range(cfg.reps) for fold in range(cfg.folds)]

    def work(item):
        rep, fold = item
        return _run_fold(d, cfg, max_steps, rep, fold, partitions[rep])

    if threads > 1:
        with ThreadPoolExecutor(max_workers=threads) as pool:
            results = list(pool.map(work, items))
    else:
        results = [work(item) for item in items]
    rows = [row for chunk in results for row in chunk]
    return CvReport(cfg, d.n, d.m, max_steps, rows)
