"""Stable tail dependence functions of the factors and of the mixture."""

from __future__ import annotations

import numpy as np
from scipy.special import logsumexp

from .errors import NegativeInput
from .linalg import DEFAULT_MVN_TOL, mvn_cdf
from .model import HueslerReiss, Logistic, MixtureModel


def _check_nonneg(y):
    y = np.asarray(y, dtype=float).ravel()
    if np.any(np.isnan(y)) or np.any(y < 0):
        raise NegativeInput(f"stdf arguments must be nonnegative, got {y}")
    return y


def logistic_stdf(alpha, y):
    y = _check_nonneg(y)
    pos = y[y > 0]
    if pos.size == 0:
        return 0.0
    return float(np.exp(alpha * logsumexp(np.log(pos) / alpha)))


def huesler_reiss_stdf(family: HueslerReiss, y, tol=DEFAULT_MVN_TOL, seed=0):
    """Sum over j of y_j * Phi(eta^j(y); Sigma^j).

    eta^j_s = ln(y_j / y_s) + Gamma_js / 2, with +inf where y_s = 0; the j-th
    summand is zero when y_j = 0. ``seed`` fixes the QMC randomization so the
    function is deterministic.
    """
    y = _check_nonneg(y)
    m = len(y)
    if m != family.dim:
        raise ValueError(f"expected {family.dim} coordinates, got {m}")
    if m == 1:
        return float(y[0])
    gamma = family.variogram
    with np.errstate(divide="ignore"):
        logy = np.log(y)
    total = 0.0
    for j in range(m):
        if y[j] == 0:
            continue
        rest = [s for s in range(m) if s != j]
        eta = logy[j] - logy[rest] + 0.5 * gamma[j, rest]
        sigma, _ = family.anchored(j)
        total += y[j] * mvn_cdf(eta, sigma, tol=tol, seed=[int(seed), j])
    return float(total)


def factor_stdf(family, y, tol=DEFAULT_MVN_TOL, seed=0):
    """Stdf of one factor evaluated on its signature coordinates."""
    if isinstance(family, Logistic):
        return logistic_stdf(family.alpha, y)
    if isinstance(family, HueslerReiss):
        return huesler_reiss_stdf(family, y, tol=tol, seed=seed)
    raise TypeError(f"unknown factor family {family!r}")


def mixture_stdf(model: MixtureModel, y, tol=None):
    """ℓ(y) = Σ_k ℓ^(k)((a_jk y_j)_{j in J_k})."""
    y = _check_nonneg(y)
    if len(y) != model.d:
        raise ValueError(f"expected {model.d} coordinates, got {len(y)}")
    tol = model.mvn_tol if tol is None else tol
    total = 0.0
    for k, sig in enumerate(model.signatures):
        idx = list(sig)
        total += factor_stdf(model.families[k], model.matrix[idx, k] * y[idx], tol=tol, seed=k)
    return total


def face_weights(model: MixtureModel) -> np.ndarray:
    """w_k = ℓ^(k)(a_.k) / ℓ(1), cached on the model at build time."""
    return model.weights


def ell_one(model: MixtureModel) -> float:
    return model.ell_one
