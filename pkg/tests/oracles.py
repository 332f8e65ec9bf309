"""Independent reference computations used by the tests.

Nothing here calls into the code under test.
"""

import itertools

import numpy as np


def soft_threshold_fit_rss(y, q):
    """RSS of soft-thresholding ``y`` at the (q+1)-th largest |y| (identity design)."""
    y = np.asarray(y, dtype=float)
    if q >= y.size:
        return 0.0
    lam = np.sort(np.abs(y))[::-1][q]
    fit = np.sign(y) * np.maximum(np.abs(y) - lam, 0.0)
    return float(((y - fit) ** 2).sum())


def lasso_grid_rss(X, y, t, final_step=1e-4):
    """Minimum of ||y - Xb||^2 over ||b||_1 = t by coarse-to-fine grid search.

    For ``t`` up to the least-squares L1 norm the constrained minimum lies on
    the face ``||b||_1 = t``. The grid runs over m - 1 free coefficients on
    a lattice of multiples of the step (so exact zeros are grid points) and
    the remaining one is fixed by the constraint; every choice of dependent
    coefficient and sign is tried. Each level searches a box around the
    previous best; the last level has spacing ``final_step``.
    """
    X = np.asarray(X, dtype=float)
    y = np.asarray(y, dtype=float)
    m = X.shape[1]
    G = X.T @ X
    Xy = X.T @ y
    yy = y @ y

    def rss(B):
        return yy - 2 * B @ Xy + np.einsum("ij,jk,ik->i", B, G, B)

    if m == 1:
        return float(rss(np.array([[t], [-t]])).min())

    best_val = np.inf
    for dep in range(m):
        free = [j for j in range(m) if j != dep]
        for sign in (1.0, -1.0):
            points = {2: 20001, 3: 401}[m]
            step = 2 * t / (points - 1)
            center = np.zeros(m - 1)
            half = t
            while True:
                axes = [step * np.arange(np.floor((c - half) / step), np.ceil((c + half) / step) + 1)
                        for c in center]
                F = np.array(list(itertools.product(*axes)))
                rest = t - np.abs(F).sum(axis=1)
                F = F[rest >= 0]
                if F.size == 0:
                    break
                B = np.empty((F.shape[0], m))
                B[:, free] = F
                B[:, dep] = sign * (t - np.abs(F).sum(axis=1))
                r = rss(B)
                i = int(np.argmin(r))
                center = F[i]
                if step <= final_step:
                    best_val = min(best_val, r[i])
                    break
                half, step = 2 * step, max(step / 10, final_step)
    return float(best_val)


def partial_tsq(X, y, selected, j):
    """Squared t-statistic of column ``j`` added to an intercept + ``selected`` OLS fit."""
    n = X.shape[0]
    cols = [np.ones(n)] + [X[:, k] for k in selected] + [X[:, j]]
    A = np.column_stack(cols)
    coef, *_ = np.linalg.lstsq(A, y, rcond=None)
    resid = y - A @ coef
    df = n - A.shape[1]
    s2 = resid @ resid / df
    cov = s2 * np.linalg.inv(A.T @ A)
    return float(coef[-1] ** 2 / cov[-1, -1])


def ols_rss(X, y):
    A = np.column_stack([np.ones(X.shape[0]), X])
    coef, *_ = np.linalg.lstsq(A, y, rcond=None)
    r = y - A @ coef
    return float(r @ r)
