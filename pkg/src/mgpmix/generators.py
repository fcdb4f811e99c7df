"""Factor U-generators and their exponentially tilted proposals.

A tilted proposal for column k and tilt index j has density
``exp(t_j) * f_U(t - s) / exp(s_j)`` with shifts ``s_i = ln(a_ik / m_k)``.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np
from scipy.special import gammaln

from .linalg import mvn_logpdf
from .model import HueslerReiss, Logistic, MixtureModel

_TWO53 = 2.0 ** 53


def open_uniform(rng, size=None):
    """Uniform draws on the open interval (0, 1)."""
    k = rng.integers(0, 2 ** 53, size=size)
    return (k + 0.5) / _TWO53


def _log_gamma_one_minus(alpha):
    return float(gammaln(1.0 - alpha))


def _gumbel(rng, size):
    # ln X for X unit Fréchet
    return -np.log(-np.log(open_uniform(rng, size)))


def sample_factor_generator(family, rng, size=None, dim=None):
    """Draw U^(k) for one factor.

    Logistic coordinates are independent ``alpha * ln X - ln Gamma(1 - alpha)``
    with X unit Fréchet; Hüsler–Reiss draws are N(-diag(S)/2, S). For the
    logistic family ``dim`` (the signature size) is required.
    """
    n = 1 if size is None else int(size)
    if isinstance(family, Logistic):
        if dim is None:
            raise ValueError("dim is required for the logistic family")
        a = family.alpha
        out = a * _gumbel(rng, (n, dim)) - _log_gamma_one_minus(a)
    elif isinstance(family, HueslerReiss):
        cov = family.covariance
        z = rng.standard_normal((n, family.dim))
        out = z @ family.cov_chol.T - 0.5 * np.diag(cov)
    else:
        raise TypeError(f"unknown factor family {family!r}")
    return out[0] if size is None else out


def factor_logpdf(family, u):
    """Log Lebesgue density of U^(k) at u (last axis = signature coordinates)."""
    u = np.asarray(u, dtype=float)
    if isinstance(family, Logistic):
        a = family.alpha
        z = (u + _log_gamma_one_minus(a)) / a
        return np.sum(-z - np.exp(-z) - np.log(a), axis=-1)
    if isinstance(family, HueslerReiss):
        cov = family.covariance
        return mvn_logpdf(u, -0.5 * np.diag(cov), cov, chol=family.cov_chol)
    raise TypeError(f"unknown factor family {family!r}")


def tilt_weights(model: MixtureModel, k: int) -> np.ndarray:
    """n_{j,k} = a_jk / sum_i a_ik over the signature of column k."""
    a = model.column(k)
    return a / a.sum()


@dataclass(frozen=True, eq=False)
class TiltedProposal:
    """Proposal q_{j,k}; ``pos`` is the position of j inside the signature."""

    k: int
    j: int
    pos: int
    family: object
    shifts: np.ndarray
    mean: np.ndarray | None = None

    @property
    def dim(self) -> int:
        return len(self.shifts)


def tilted_proposal(model: MixtureModel, k: int, j: int) -> TiltedProposal:
    sig = model.signatures[k]
    if j not in sig:
        raise ValueError(f"component {j} is not in signature {sig} of column {k}")
    pos = sig.index(j)
    fam = model.families[k]
    shifts = np.log(model.column(k) / model.masses[k])
    mean = None
    if isinstance(fam, HueslerReiss):
        cov = fam.covariance
        mean = shifts - 0.5 * np.diag(cov) + cov[:, pos]
    return TiltedProposal(k=k, j=j, pos=pos, family=fam, shifts=shifts, mean=mean)


def _draw_tilted(family, shifts, pos, rng):
    """Vectorized draws from q_{j,k} with per-row tilt positions ``pos``."""
    n = len(pos)
    m = len(shifts)
    rows = np.arange(n)
    if isinstance(family, Logistic):
        a = family.alpha
        c = _log_gamma_one_minus(a)
        q = a * _gumbel(rng, (n, m)) - c + shifts
        gam = rng.standard_gamma(1.0 - a, size=n)
        q[rows, pos] = -a * np.log(gam) + shifts[pos] - c
        return q
    cov = family.covariance
    z = rng.standard_normal((n, m))
    mean = shifts - 0.5 * np.diag(cov) + cov[:, pos].T
    return z @ family.cov_chol.T + mean


def sample_tilted(proposal: TiltedProposal, rng, size=None):
    n = 1 if size is None else int(size)
    q = _draw_tilted(proposal.family, proposal.shifts, np.full(n, proposal.pos), rng)
    return q[0] if size is None else q


def eval_tilted_logdensity(proposal: TiltedProposal, t):
    """log q_{j,k}(t) = t_j + log f_U(t - s) - s_j."""
    t = np.asarray(t, dtype=float)
    return (t[..., proposal.pos] + factor_logpdf(proposal.family, t - proposal.shifts)
            - proposal.shifts[proposal.pos])


def sample_mixture_generator(model: MixtureModel, rng, size):
    """Draw the mixture U-generator with the model's mass vector.

    Returns ``(cols, u)`` where ``u`` has -inf outside the signature of the
    sampled column.
    """
    cols = rng.choice(model.r, size=size, p=model.masses)
    u = np.full((size, model.d), -np.inf)
    for k in range(model.r):
        rows = np.flatnonzero(cols == k)
        if rows.size == 0:
            continue
        sig = list(model.signatures[k])
        draw = sample_factor_generator(model.families[k], rng, size=rows.size, dim=len(sig))
        u[np.ix_(rows, sig)] = draw + np.log(model.column(k) / model.masses[k])
    return cols, u
