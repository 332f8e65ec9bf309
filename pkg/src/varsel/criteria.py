"""Model-size criteria: C_p with known or estimated variance, and S_p.

S_p replaces C_p's constant penalty of 2 per predictor with ``j * delta(j)``
for the j-th predictor, where ``delta`` approximates the gap between
adjacent squared normal order statistics if half of the predictors already
in the model are noise.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction

import numpy as np

from .data_model import StandardizedDataset
from .errors import ConfigError, VarselError
from .stepwise import forward_stepwise_ric

KINDS = ("cp_known", "cp_estimated", "sp")


@dataclass(frozen=True)
class CriterionTrace:
    """Criterion values for model sizes ``q = 0..Q`` and the minimizing size."""

    kind: str
    values: np.ndarray
    sigma2: float
    selected_q: int

    def to_dict(self) -> dict:
        return {
            "kind": self.kind,
            "values": [float(v) for v in self.values],
            "sigma2": float(self.sigma2),
            "selected_q": int(self.selected_q),
        }


def _rss_array(rss_seq) -> np.ndarray:
    rss = np.asarray(rss_seq, dtype=float)
    if rss.ndim != 1 or rss.size == 0:
        raise VarselError("need a nonempty sequence of residual sums of squares")
    if np.any(rss < 0):
        raise VarselError("residual sums of squares must be nonnegative")
    return rss


def _check_sigma2(sigma2_hat) -> float:
    sigma2_hat = float(sigma2_hat)
    if not sigma2_hat > 0:
        raise ConfigError(f"variance estimate must be positive, got {sigma2_hat}")
    return sigma2_hat


def select_min(trace_or_values) -> int:
    """Smallest model size attaining the minimum criterion value."""
    values = getattr(trace_or_values, "values", trace_or_values)
    values = np.asarray(values, dtype=float)
    if values.size == 0:
        raise VarselError("cannot select from an empty trace")
    return int(np.argmin(values))


def _trace(kind, values, sigma2) -> CriterionTrace:
    return CriterionTrace(kind, values, sigma2, select_min(values))


def cp_known_sigma(rss_seq, n: int) -> CriterionTrace:
    """``RSS(p) - n + 2p`` with the error variance known to be 1."""
    rss = _rss_array(rss_seq)
    p = np.arange(rss.size)
    return _trace("cp_known", rss - n + 2 * p, 1.0)


def cp_estimated(rss_seq, n: int, sigma2_hat: float) -> CriterionTrace:
    """``RSS(p) / sigma2_hat - n + 2p``."""
    rss = _rss_array(rss_seq)
    sigma2_hat = _check_sigma2(sigma2_hat)
    p = np.arange(rss.size)
    return _trace("cp_estimated", rss / sigma2_hat - n + 2 * p, sigma2_hat)


def delta(q: int) -> float:
    """Penalty increment ``2 log((q/2 + 2) / (q/2 + 1))``, with ``delta(1) = 2 log 1.5``."""
    if q < 0:
        raise VarselError("delta is defined for q >= 0")
    if q == 0:
        return 2.0 * math.log(2.0)
    if q == 1:
        return 2.0 * math.log(1.5)
    half = Fraction(q, 2)
    ratio = (half + 2) / (half + 1)
    # log1p keeps precision as the ratio approaches 1
    return 2.0 * math.log1p(float(ratio - 1))


def spacing_approx(m: float, k: float, q: int) -> float:
    """Approximate gap ``Y2_(q+1) - Y2_(q+2)`` when ``k`` of the ``q`` fitted predictors are signal.

    ``2 log((m-k)/(q+1-k)) - 2 log((m-k)/(q+2-k))``, which reduces to
    ``2 log((q+2-k)/(q+1-k))``; the reduced form is evaluated, so the
    result does not depend on ``m``.
    """
    if k > q:
        raise VarselError(f"k={k} cannot exceed q={q}")
    if q + 1 - k < 1:
        raise VarselError("need q + 1 - k >= 1")
    if not m > k:
        raise VarselError(f"need m > k, got m={m}, k={k}")
    k = Fraction(k)
    ratio = (q + 2 - k) / (q + 1 - k)
    return 2.0 * math.log1p(float(ratio - 1))


def sp_penalties(Q: int) -> np.ndarray:
    """Cumulative penalty ``sum_{j=1..q} j * delta(j)`` for ``q = 0..Q``."""
    inc = [0.0] + [j * delta(j) for j in range(1, Q + 1)]
    return np.cumsum(inc)


def sp(rss_seq, sigma2_hat: float) -> CriterionTrace:
    """``S_q = RSS(q) + sigma2_hat * sum_{j=1..q} j * delta(j)``."""
    rss = _rss_array(rss_seq)
    sigma2_hat = _check_sigma2(sigma2_hat)
    values = rss + sigma2_hat * sp_penalties(rss.size - 1)
    return _trace("sp", values, sigma2_hat)


def estimate_sigma2_twostep(d: StandardizedDataset, m: int | None = None) -> float:
    """Error variance from a hard-threshold stepwise fit, ``RSS(q) / (n - q - 1)``.

    The stepwise model stays small, so the estimate is not deflated by the
    selection that a large LARS model would bring.
    """
    return forward_stepwise_ric(d, m).sigma2_hat


def largest_model_sigma2(rss_seq, n: int) -> float:
    """Residual variance of the last model on a path, ``RSS(Q) / max(n - Q - 1, 1)``.

    A path that saturates the design (``Q = n - 1``) has no residual degrees
    of freedom left; the divisor is held at 1 so the near-zero residual
    still yields a (near-zero) estimate.
    """
    rss = _rss_array(rss_seq)
    Q = rss.size - 1
    return float(rss[-1] / max(n - Q - 1, 1))
