"""Forward stepwise regression with the hard-threshold entry rule t^2 >= 2 log m."""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .data_model import StandardizedDataset
from .errors import ConfigError, VarselError

# a candidate whose residualized norm falls below this fraction of its raw norm is collinear
COLLINEAR_TOL = 1e-10


@dataclass(frozen=True)
class StepwiseFit:
    """Result of a forward stepwise search.

    ``coefficients`` holds the intercept first, then one entry per selected
    predictor in entry order, on the scale of the data the search saw.
    """

    selected: tuple[int, ...]
    coefficients: np.ndarray
    entry_tsq: tuple[float, ...]
    sigma2_hat: float
    df: int
    rss: float
    threshold: float

    @property
    def q(self) -> int:
        return len(self.selected)

    @property
    def intercept(self) -> float:
        return float(self.coefficients[0])

    @property
    def slopes(self) -> np.ndarray:
        return self.coefficients[1:]


def ric_threshold(m: int) -> float:
    """Risk inflation threshold ``2 ln m`` for a search over ``m`` predictors."""
    if m < 1:
        raise ConfigError("the risk inflation threshold needs m >= 1")
    return 2.0 * math.log(m)


def forward_stepwise_ric(d: StandardizedDataset, m: int | None = None, **kwargs) -> StepwiseFit:
    """Stepwise search on a standardized dataset with threshold ``2 ln m``.

    ``m`` defaults to the number of columns in ``d``.
    """
    if m is None:
        m = d.m
    return forward_stepwise(d.X, d.y, threshold=ric_threshold(m), **kwargs)


def forward_stepwise(X, y, threshold: float, min_df: int = 2, max_q: int | None = None) -> StepwiseFit:
    """Forward stepwise least squares with an intercept and a fixed entry threshold.

    At each step every remaining candidate is scored by its squared partial
    t-statistic in the enlarged model; the best one (lowest index on ties)
    enters if its t^2 reaches ``threshold``, otherwise the search stops.
    The search also stops before the residual degrees of freedom
    ``n - q - 1`` would fall below ``min_df``.

    Parameters
    ----------
    X : array_like, shape (n, m)
    y : array_like, shape (n,)
    threshold : float
        Entry cutoff on t^2.
    min_df : int
        Smallest residual degrees of freedom allowed after an entry.
    max_q : int, optional
        Hard cap on the number of entered predictors.
    """
    X = np.asarray(X, dtype=float)
    y = np.asarray(y, dtype=float)
    n, m = X.shape
    if n < 3:
        raise VarselError("forward stepwise needs at least 3 cases")
    if min_df < 1:
        raise ConfigError("min_df must be at least 1")
    if max_q is None:
        max_q = m

    # Orthonormal basis of the current model, intercept first; candidates and
    # the residual are kept orthogonalized against it.
    basis = [np.full(n, 1.0 / math.sqrt(n))]
    e = y - y.mean()
    R = X - X.mean(axis=0)
    raw_norm2 = (R * R).sum(axis=0)
    tss = float(e @ e)
    rss = tss
    available = raw_norm2 > 0
    selected: list[int] = []
    entry_tsq: list[float] = []

    while len(selected) < max_q:
        q = len(selected)
        df_new = n - q - 2
        if df_new < min_df or rss <= 1e-28 * max(tss, 1e-300):
            break
        rn2 = (R * R).sum(axis=0)
        usable = available & (rn2 > COLLINEAR_TOL * raw_norm2)
        if not usable.any():
            break
        proj = R.T @ e
        with np.errstate(divide="ignore", invalid="ignore"):
            gain = np.where(usable, proj**2 / rn2, 0.0)
        gain = np.minimum(gain, rss)
        rss_new = rss - gain
        with np.errstate(divide="ignore", invalid="ignore"):
            tsq = np.where(usable, gain / (rss_new / df_new), 0.0)
        tsq = np.nan_to_num(tsq, nan=0.0, posinf=np.inf)
        j = int(np.argmax(tsq))
        if not usable[j] or tsq[j] < threshold:
            break
        if not rss_new[j] < rss:
            break
        v = R[:, j].copy()
        B = np.column_stack(basis)
        v -= B @ (B.T @ v)
        v /= math.sqrt(v @ v)
        basis.append(v)
        e = e - (v @ e) * v
        R = R - np.outer(v, v @ R)
        rss = float(e @ e)
        available[j] = False
        selected.append(j)
        entry_tsq.append(float(tsq[j]))

    coefficients = _refit(X, y, selected)
    df = n - len(selected) - 1
    return StepwiseFit(
        selected=tuple(selected),
        coefficients=coefficients,
        entry_tsq=tuple(entry_tsq),
        sigma2_hat=rss / df,
        df=df,
        rss=rss,
        threshold=threshold,
    )


def _refit(X, y, selected) -> np.ndarray:
    design = np.column_stack([np.ones(X.shape[0])] + [X[:, j] for j in selected])
    coef, *_ = np.linalg.lstsq(design, y, rcond=None)
    return coef
