"""Densities of the mgp vector with respect to the sum-of-Lebesgue measure on faces.

A point of the extended orthant is stored as its support (the finite
coordinates) plus the finite values; -inf never appears inside ``values``.
"""

from __future__ import annotations

import warnings
from dataclasses import dataclass

import numpy as np
from scipy import integrate
from scipy.special import gammaln, logsumexp

from .errors import QuadratureFailure
from .generators import factor_logpdf
from .linalg import mvn_logpdf
from .model import HueslerReiss, Logistic, MixtureModel, _as_signature


@dataclass(frozen=True, eq=False)
class MgpPoint:
    support: tuple
    values: np.ndarray

    def __post_init__(self):
        sup = _as_signature(self.support)
        vals = np.asarray(self.values, dtype=float).ravel()
        if vals.shape != (len(sup),):
            raise ValueError(f"{len(sup)} support indices but {vals.size} values")
        if not np.all(np.isfinite(vals)):
            raise ValueError("values must be finite; encode -inf through the support")
        object.__setattr__(self, "support", sup)
        object.__setattr__(self, "values", vals)

    @classmethod
    def from_dense(cls, y):
        y = np.asarray(y, dtype=float)
        sup = tuple(int(j) for j in np.flatnonzero(y > -np.inf))
        return cls(sup, y[list(sup)])

    def to_dense(self, d: int) -> np.ndarray:
        y = np.full(d, -np.inf)
        y[list(self.support)] = self.values
        return y


def hr_log_exponent_density(x, family: HueslerReiss, anchor=None):
    """log λ(x; Γ), the Hüsler–Reiss exponent measure density on Gumbel scale.

    ``anchor`` is the local index used to split the coordinates; the result
    does not depend on it. Defaults to the last coordinate.
    """
    x = np.asarray(x, dtype=float)
    m = family.dim
    if m == 1:
        return -x[..., 0]
    anchor = m - 1 if anchor is None else anchor
    rest = [s for s in range(m) if s != anchor]
    sigma, chol = family.anchored(anchor)
    mu = -0.5 * family.variogram[rest, anchor]
    dev = x[..., rest] - x[..., [anchor]]
    return -x[..., anchor] + mvn_logpdf(dev, mu, sigma, chol=chol)


def _column_log_term(model: MixtureModel, k: int, y):
    # y: (..., |J_k|) finite values on the face of column k
    fam = model.families[k]
    loga = np.log(model.column(k))
    if isinstance(fam, Logistic):
        a = fam.alpha
        n = len(loga)
        x = (loga - y) / a
        return ((n - 1) * np.log(1.0 / a) + gammaln(n - a) - gammaln(1.0 - a)
                + np.sum(x, axis=-1) - (n - a) * logsumexp(x, axis=-1) - np.log(model.ell_one))
    if isinstance(fam, HueslerReiss):
        return hr_log_exponent_density(y - loga, fam) - np.log(model.ell_one)
    raise TypeError(f"unknown factor family {fam!r}")


def face_log_density(model: MixtureModel, support, values):
    """Vectorized log density for points sharing one support.

    ``values`` has shape (n, |support|); rows with max < 0 give -inf. The
    boundary max = 0 is a null set and gets the right-continuous value.
    """
    support = _as_signature(support, model.d)
    values = np.atleast_2d(np.asarray(values, dtype=float))
    cols = [k for k, sig in enumerate(model.signatures) if sig == support]
    out = np.full(values.shape[0], -np.inf)
    if not cols:
        return out
    ok = np.max(values, axis=1) >= 0
    if np.any(ok):
        terms = [np.atleast_1d(_column_log_term(model, k, values[ok])) for k in cols]
        out[ok] = logsumexp(terms, axis=0)
    return out


def log_density(model: MixtureModel, p: MgpPoint) -> float:
    """Log of the mgp density at ``p``; -inf off the support."""
    return float(face_log_density(model, p.support, p.values[None, :])[0])


def log_density_dense(model: MixtureModel, y):
    """Log densities of rows of a dense array with -inf off each row's support."""
    y = np.atleast_2d(np.asarray(y, dtype=float))
    out = np.full(y.shape[0], -np.inf)
    finite = y > -np.inf
    for sig in set(model.signatures):
        mask = np.zeros(model.d, dtype=bool)
        mask[list(sig)] = True
        rows = np.flatnonzero(np.all(finite == mask, axis=1))
        if rows.size:
            out[rows] = face_log_density(model, sig, y[np.ix_(rows, list(sig))])
    return out


def density_oracle(model: MixtureModel, p: MgpPoint, quad_tol: float = 1e-13) -> float:
    """Density by one-dimensional quadrature of the generator density.

    Integrates ``f_U(r + y) e^r`` over r and divides by ℓ(1), where f_U is the
    mixture generator density built from the model's mass vector.
    """
    y = p.values
    if np.max(y) <= 0:
        return 0.0
    cols = [k for k, sig in enumerate(model.signatures) if sig == p.support]
    if not cols:
        return 0.0
    shifts = [np.log(model.column(k) / model.masses[k]) for k in cols]
    logm = [np.log(model.masses[k]) for k in cols]

    def log_integrand(r):
        r = np.asarray(r, dtype=float)
        pts = r[..., None] + y
        return logsumexp([lm + factor_logpdf(model.families[k], pts - s)
                          for k, s, lm in zip(cols, shifts, logm)], axis=0) + r

    lo, hi = -40.0 - np.max(y), 40.0 + abs(np.min(y))
    grid = np.linspace(lo, hi, 4001)
    vals = log_integrand(grid)
    peak = float(np.max(vals))
    mode = float(grid[np.argmax(vals)])
    step = grid[1] - grid[0]
    with warnings.catch_warnings():
        warnings.simplefilter("error", integrate.IntegrationWarning)
        try:
            total = 0.0
            left, right = max(lo, mode - 4 * step), min(hi, mode + 4 * step)
            for a, b in ((lo, left), (left, right), (right, hi)):
                val, _ = integrate.quad(lambda r: float(np.exp(log_integrand(r) - peak)), a, b,
                                        epsabs=quad_tol, epsrel=1e-10, limit=500)
                total += val
        except integrate.IntegrationWarning as exc:
            raise QuadratureFailure(str(exc)) from None
    return float(np.exp(peak) * total / model.ell_one)


def face_mass(model: MixtureModel, k: int) -> float:
    """Probability of the face of column k, aggregated over equal signatures."""
    sig = model.signatures[k]
    return float(sum(w for s, w in zip(model.signatures, model.weights) if s == sig))


def face_masses(model: MixtureModel) -> dict:
    out = {}
    for sig, w in zip(model.signatures, model.weights):
        out[sig] = out.get(sig, 0.0) + float(w)
    return out
