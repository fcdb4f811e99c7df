"""Symmetric positive definite linear algebra and multivariate normal helpers.

The normal cdf uses Genz's separation-of-variables transform integrated with
randomized rank-1 (Richtmyer) lattice rules, antithetic pairs and a tent
periodization. The spread over independent random shifts gives the standard
error that drives the adaptive point budget.
"""

from __future__ import annotations

import numpy as np
from scipy.linalg import solve_triangular
from scipy.special import ndtr, ndtri

from .errors import BadVariogram, NotPositiveDefinite, ToleranceNotReached

DEFAULT_MVN_TOL = 1e-6
_PIVOT_RTOL = 1e-14
_PRIMES = np.array([2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37, 41, 43, 47, 53, 59,
                    61, 67, 71, 73, 79, 83, 89, 97, 101, 103, 107, 109, 113, 127,
                    131, 137, 139, 149, 151, 157, 163, 167, 173, 179, 181, 191, 193])


def cholesky(cov):
    """Lower Cholesky factor of a symmetric matrix.

    Raises NotPositiveDefinite when a pivot falls below 1e-14 times the largest
    diagonal entry. No jitter is ever added.
    """
    cov = np.asarray(cov, dtype=float)
    if cov.ndim != 2 or cov.shape[0] != cov.shape[1]:
        raise ValueError(f"expected a square matrix, got shape {cov.shape}")
    if cov.shape[0] == 0:
        return np.zeros((0, 0))
    if not np.allclose(cov, cov.T, rtol=1e-12, atol=1e-14):
        raise NotPositiveDefinite("matrix is not symmetric")
    scale = np.max(np.diag(cov))
    if not scale > 0:
        raise NotPositiveDefinite("non-positive diagonal")
    try:
        chol = np.linalg.cholesky(cov)
    except np.linalg.LinAlgError as exc:
        raise NotPositiveDefinite(str(exc)) from None
    if np.any(np.diag(chol) ** 2 <= _PIVOT_RTOL * scale):
        raise NotPositiveDefinite("pivot below tolerance")
    return chol


def mvn_logpdf(x, mean, cov, chol=None):
    """Log density of N(mean, cov) at x (last axis is the dimension)."""
    x = np.asarray(x, dtype=float)
    mean = np.asarray(mean, dtype=float)
    if chol is None:
        chol = cholesky(cov)
    m = chol.shape[0]
    dev = np.atleast_2d(x - mean)
    z = solve_triangular(chol, dev.T, lower=True)
    quad = np.sum(z * z, axis=0)
    logdet = 2.0 * np.sum(np.log(np.diag(chol)))
    out = -0.5 * (m * np.log(2 * np.pi) + logdet + quad)
    return out if x.ndim > 1 else float(out[0])


def _sov_integrand(w, b, chol):
    # w: (n, m-1) points in the unit cube
    n = w.shape[0]
    m = len(b)
    y = np.empty((n, m - 1))
    e = np.full(n, ndtr(b[0] / chol[0, 0]))
    f = e.copy()
    for i in range(1, m):
        u = np.clip(w[:, i - 1] * e, 1e-300, 1 - 1e-16)
        y[:, i - 1] = ndtri(u)
        e = ndtr((b[i] - y[:, :i] @ chol[i, :i]) / chol[i, i])
        f *= e
    return f


def mvn_cdf_with_error(x, cov, tol=DEFAULT_MVN_TOL, seed=0, randomizations=12,
                       max_points=2 ** 22):
    """Estimate P[N(0, cov) <= x] and its standard error.

    Entries of x equal to +inf are marginalized out, any -inf gives exactly 0,
    and the empty vector gives 1. Returns ``(p, se)``.
    """
    x = np.asarray(x, dtype=float).ravel()
    cov = np.asarray(cov, dtype=float).reshape(len(x), len(x))
    if np.any(np.isnan(x)):
        raise ValueError("nan in integration limit")
    if np.any(x == -np.inf):
        return 0.0, 0.0
    keep = np.isfinite(x)
    x, cov = x[keep], cov[np.ix_(keep, keep)]
    m = len(x)
    if m == 0:
        return 1.0, 0.0
    chol = cholesky(cov)
    if m == 1:
        return float(ndtr(x[0] / chol[0, 0])), 0.0
    # most restrictive coordinates first lowers the integrand variance
    order = np.argsort(x / np.sqrt(np.diag(cov)))
    x, cov = x[order], cov[np.ix_(order, order)]
    chol = cholesky(cov)

    rng = np.random.default_rng(seed)
    gen = np.sqrt(_PRIMES[: m - 1].astype(float))
    shifts = rng.random((randomizations, m - 1))
    n = 256
    while True:
        idx = np.arange(1, n + 1, dtype=float)[:, None]
        base = idx * gen
        est = np.empty(randomizations)
        for k in range(randomizations):
            pts = np.abs(2.0 * np.mod(base + shifts[k], 1.0) - 1.0)
            vals = _sov_integrand(pts, x, chol) + _sov_integrand(1.0 - pts, x, chol)
            est[k] = 0.5 * vals.mean()
        p = float(est.mean())
        se = float(est.std(ddof=1) / np.sqrt(randomizations))
        if se <= tol:
            return min(max(p, 0.0), 1.0), se
        n *= 2
        if 2 * n * randomizations > max_points:
            raise ToleranceNotReached(
                f"standard error {se:.3g} above tol {tol:.3g} after "
                f"{n * randomizations} points")


def mvn_cdf(x, cov, tol=DEFAULT_MVN_TOL, seed=0, **kwargs):
    """Centered multivariate normal cdf by randomized QMC."""
    return mvn_cdf_with_error(x, cov, tol=tol, seed=seed, **kwargs)[0]


def check_variogram(gamma):
    """Raise BadVariogram unless gamma is a valid variogram matrix."""
    gamma = np.asarray(gamma, dtype=float)
    if gamma.ndim != 2 or gamma.shape[0] != gamma.shape[1]:
        raise BadVariogram(f"variogram must be square, got shape {gamma.shape}")
    m = gamma.shape[0]
    if m == 0:
        return gamma
    if not np.all(np.isfinite(gamma)):
        raise BadVariogram("variogram has non-finite entries")
    scale = max(1.0, float(np.max(np.abs(gamma))))
    if np.max(np.abs(gamma - gamma.T)) > 1e-12 * scale:
        raise BadVariogram("variogram is not symmetric")
    if np.max(np.abs(np.diag(gamma))) > 1e-12 * scale:
        raise BadVariogram("variogram has nonzero diagonal")
    proj = np.eye(m) - 1.0 / m
    eig = np.linalg.eigvalsh(-0.5 * proj @ gamma @ proj)
    if eig[0] < -1e-10:
        raise BadVariogram("variogram is not conditionally negative definite")
    if np.sum(np.abs(eig) <= 1e-10 * scale) != 1:
        raise BadVariogram("variogram is degenerate on the complement of the ones vector")
    return gamma


def variogram_to_covariance(gamma, shift=1.0):
    """Positive definite covariance with the given variogram.

    Uses ``-0.5 * P @ gamma @ P + shift * 11^T`` with P the centering projection.
    """
    gamma = np.asarray(gamma, dtype=float)
    m = gamma.shape[0]
    if m == 0:
        raise BadVariogram("empty variogram has no covariance")
    proj = np.eye(m) - 1.0 / m
    cov = -0.5 * proj @ gamma @ proj + shift * np.ones((m, m))
    cov = 0.5 * (cov + cov.T)
    try:
        cholesky(cov)
    except NotPositiveDefinite as exc:
        raise BadVariogram(f"derived covariance not positive definite: {exc}") from None
    return cov


def covariance_to_variogram(cov):
    cov = np.asarray(cov, dtype=float)
    d = np.diag(cov)
    return d[:, None] + d[None, :] - 2.0 * cov


def anchored_sigma(gamma, anchor):
    """Covariance 0.5 * (G_js + G_jt - G_st) over the indices other than ``anchor``."""
    gamma = np.asarray(gamma, dtype=float)
    m = gamma.shape[0]
    if m < 2:
        raise ValueError("anchored covariance needs at least two indices")
    rest = [i for i in range(m) if i != anchor]
    g_j = gamma[anchor, rest]
    sigma = 0.5 * (g_j[:, None] + g_j[None, :] - gamma[np.ix_(rest, rest)])
    cholesky(sigma)
    return sigma
