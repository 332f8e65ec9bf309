"""Least angle regression path and its closed form on orthogonal designs."""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .data_model import StandardizedDataset
from .errors import ConfigError, VarselError

# reciprocal condition number below which the active Gram matrix counts as singular
GRAM_RCOND = 1e-10


@dataclass(frozen=True)
class PathStep:
    """State of the path once ``len(active_set)`` predictors have entered.

    ``coefficients`` are aligned with ``active_set``.
    """

    active_set: tuple[int, ...]
    coefficients: np.ndarray
    rss: float

    @property
    def q(self) -> int:
        return len(self.active_set)


@dataclass(frozen=True)
class LarsPath:
    steps: tuple[PathStep, ...]
    n: int
    max_steps: int
    stopped_early: bool = False

    def __len__(self):
        return len(self.steps)

    @property
    def rss(self) -> np.ndarray:
        return np.array([s.rss for s in self.steps])

    def coef_vector(self, q: int, m: int) -> np.ndarray:
        """Coefficients of step ``q`` spread over all ``m`` columns."""
        beta = np.zeros(m)
        step = self.steps[q]
        beta[list(step.active_set)] = step.coefficients
        return beta


def step_cap(n: int, m: int, intercept: bool) -> int:
    """Largest number of LARS steps a design of this shape supports."""
    return max(min(m, n - 1 if intercept else n), 0)


def lars_path(d: StandardizedDataset, max_steps: int | None = None) -> LarsPath:
    """LARS path on a standardized dataset; step 0 is the intercept-only model."""
    return lars_path_arrays(d.X, d.y, max_steps, intercept=True)


def lars_path_arrays(X, y, max_steps: int | None = None, intercept: bool = False) -> LarsPath:
    """Plain LARS (no Lasso drops) on a design whose columns share a common norm.

    The path records one step per entered predictor. Step ``q`` holds the
    fit at the point where the next predictor's correlation ties the active
    ones, so for ``X = I`` it is soft thresholding at ``|Y_(q+1)|``. When no
    inactive predictor can enter (all columns active, or the rank limit is
    reached) the last step moves all the way to the least-squares fit.

    ``intercept`` only matters for the rank limit: centered data lose one
    degree of freedom, so at most ``n - 1`` predictors can enter.

    Parameters
    ----------
    X : array_like, shape (n, m)
    y : array_like, shape (n,)
    max_steps : int, optional
        Number of predictors to enter. Defaults to the design's cap; larger
        values are rejected.
    intercept : bool
        Whether ``X`` and ``y`` were centered for an intercept.

    Returns
    -------
    LarsPath
        ``stopped_early`` is set when a singular active Gram matrix or a
        perfect fit ended the path before ``max_steps``.
    """
    X = np.asarray(X, dtype=float)
    y = np.asarray(y, dtype=float)
    n, m = X.shape
    cap = step_cap(n, m, intercept)
    if max_steps is None:
        max_steps = cap
    if max_steps < 0:
        raise ConfigError("max_steps must be nonnegative")
    if max_steps > cap:
        raise ConfigError(f"max_steps={max_steps} exceeds the cap {cap} for n={n}, m={m}")

    residual = y.copy()
    beta = np.zeros(m)
    steps = [PathStep((), np.zeros(0), float(residual @ residual))]
    c = X.T @ residual
    scale = float(np.abs(c).max()) if m else 0.0
    if max_steps == 0 or scale <= 0.0:
        return LarsPath(tuple(steps), n, max_steps, stopped_early=max_steps > 0)

    tiny = 1e-12 * scale
    active: list[int] = [int(np.argmax(np.abs(c)))]
    is_active = np.zeros(m, dtype=bool)
    is_active[active[0]] = True
    stopped_early = False

    while True:
        c_act = c[active]
        C = float(np.abs(c_act).max())
        if C <= tiny:
            # residual already orthogonal to every active column
            stopped_early = True
            break
        s = np.sign(c_act)
        XA = X[:, active] * s
        G = XA.T @ XA
        try:
            L = np.linalg.cholesky(G)
        except np.linalg.LinAlgError:
            stopped_early = True
            break
        diag = np.diag(L)
        if (diag.min() / diag.max()) ** 2 < GRAM_RCOND:
            stopped_early = True
            break
        ginv1 = np.linalg.solve(L.T, np.linalg.solve(L, np.ones(len(active))))
        AA = 1.0 / np.sqrt(ginv1.sum())
        w = AA * ginv1
        u = XA @ w
        a = X.T @ u

        full = C / AA
        gamma = full
        entering = -1
        q = len(active)
        if q < min(m, cap):
            inactive = np.flatnonzero(~is_active)
            c_in = c[inactive]
            a_in = a[inactive]
            with np.errstate(divide="ignore", invalid="ignore"):
                g1 = (C - c_in) / (AA - a_in)
                g2 = (C + c_in) / (AA + a_in)
            g1 = np.where(g1 > tiny / AA, g1, np.inf)
            g2 = np.where(g2 > tiny / AA, g2, np.inf)
            g = np.minimum(g1, g2)
            k = int(np.argmin(g))
            if np.isfinite(g[k]) and g[k] < full:
                gamma = float(g[k])
                entering = int(inactive[k])

        beta[active] += gamma * s * w
        residual = residual - gamma * u
        c = X.T @ residual
        steps.append(PathStep(tuple(active), beta[active].copy(), float(residual @ residual)))

        if entering < 0 or q >= max_steps:
            if entering < 0 and q < max_steps:
                stopped_early = True
            break
        active.append(entering)
        is_active[entering] = True

    return LarsPath(tuple(steps), n, max_steps, stopped_early)


def truncate_path(path: LarsPath, max_steps: int) -> LarsPath:
    """The first ``max_steps`` steps of a path (plus the null model)."""
    if max_steps >= len(path.steps) - 1:
        return path
    return LarsPath(path.steps[: max_steps + 1], path.n, max_steps, False)


def _check_sorted(sorted_sq) -> np.ndarray:
    v = np.asarray(sorted_sq, dtype=float)
    if v.ndim != 1:
        raise VarselError("squared responses must be a vector")
    if np.any(v < 0):
        raise VarselError("squared responses must be nonnegative")
    if np.any(np.diff(v) > 0):
        raise VarselError("squared responses must be sorted in descending order")
    return v


def sorted_squares(y) -> np.ndarray:
    """Squared responses in descending order, ties kept in original index order."""
    sq = np.asarray(y, dtype=float) ** 2
    order = np.argsort(-sq, kind="stable")
    return sq[order]


def soft_threshold_rss(sorted_sq, q: int) -> float:
    """Residual sum of squares of orthogonal-design LARS with ``q`` predictors.

    ``(q+1) * Y2[q] + sum(Y2[q+1:])`` in zero-based indexing of the
    descending squared responses; zero when ``q == n``.
    """
    v = _check_sorted(sorted_sq)
    n = v.shape[0]
    if not 0 <= q <= n:
        raise VarselError(f"q={q} outside 0..{n}")
    if q == n:
        return 0.0
    return float((q + 1) * v[q] + v[q + 1:].sum())


def soft_threshold_rss_curve(sorted_sq, max_q: int | None = None) -> np.ndarray:
    """``soft_threshold_rss`` for every ``q`` in ``0..max_q`` at once."""
    v = _check_sorted(sorted_sq)
    n = v.shape[0]
    if max_q is None:
        max_q = n
    if not 0 <= max_q <= n:
        raise VarselError(f"max_q={max_q} outside 0..{n}")
    tail = np.concatenate([np.cumsum(v[::-1])[::-1], [0.0]])
    q = np.arange(max_q + 1)
    lead = np.concatenate([v, [0.0]])[q]
    return (q + 1) * lead + tail[np.minimum(q + 1, n)]


def cp_drop(sorted_sq, q: int) -> float:
    """Decrease in known-variance C_p from ``q`` to ``q + 1`` predictors.

    ``(q+1) * (Y2[q] - Y2[q+1]) - 2`` with ``Y2[n] = 0``.
    """
    v = _check_sorted(sorted_sq)
    n = v.shape[0]
    if not 0 <= q <= n - 1:
        raise VarselError(f"q={q} outside 0..{n - 1}")
    nxt = v[q + 1] if q + 1 < n else 0.0
    return float((q + 1) * (v[q] - nxt) - 2)
