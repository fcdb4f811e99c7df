"""Mixture model definition and validation.

Components are 0-based throughout the Python API. A signature is the sorted
tuple of rows with a strictly positive coefficient in a column.
"""

from __future__ import annotations

import warnings
from dataclasses import dataclass
from functools import cached_property
from typing import Sequence, Union

import numpy as np

from .errors import BadAlpha, BadMass, BadVariogram, EmptyColumnError, RowSumError, ValidationError
from .linalg import DEFAULT_MVN_TOL, anchored_sigma, check_variogram, cholesky, variogram_to_covariance

ROW_SUM_RTOL = 1e-9
MASS_ATOL = 1e-12


class DuplicateSignatureWarning(UserWarning):
    pass


@dataclass(frozen=True)
class Logistic:
    alpha: float

    def __post_init__(self):
        a = float(self.alpha)
        if not (0.0 < a < 1.0):
            raise BadAlpha(f"logistic alpha must lie in (0, 1), got {self.alpha!r}")
        object.__setattr__(self, "alpha", a)

    name = "logistic"


@dataclass(frozen=True, eq=False)
class HueslerReiss:
    """Hüsler–Reiss factor on a signature, given by its variogram.

    ``cov_shift`` is the constant c in the covariance construction; any c > 0
    gives the same law of the mgp vector.
    """

    variogram: np.ndarray
    cov_shift: float = 1.0

    def __post_init__(self):
        g = np.array(self.variogram, dtype=float)
        if g.ndim == 0 or g.size == 0:
            g = np.zeros((1, 1))
        g = np.atleast_2d(g)
        check_variogram(g)
        if not self.cov_shift > 0:
            raise BadVariogram("cov_shift must be positive")
        g.setflags(write=False)
        object.__setattr__(self, "variogram", g)
        object.__setattr__(self, "cov_shift", float(self.cov_shift))

    name = "huesler_reiss"

    def __eq__(self, other):
        if not isinstance(other, HueslerReiss):
            return NotImplemented
        return self.cov_shift == other.cov_shift and np.array_equal(self.variogram, other.variogram)

    def __hash__(self):
        return hash((self.variogram.tobytes(), self.variogram.shape, self.cov_shift))

    @property
    def dim(self) -> int:
        return self.variogram.shape[0]

    @cached_property
    def covariance(self) -> np.ndarray:
        return variogram_to_covariance(self.variogram, self.cov_shift)

    @cached_property
    def cov_chol(self) -> np.ndarray:
        return cholesky(self.covariance)

    def anchored(self, anchor: int):
        """(Sigma^anchor, its Cholesky factor), cached per anchor."""
        cache = self.__dict__.setdefault("_anchored", {})
        if anchor not in cache:
            sigma = anchored_sigma(self.variogram, anchor)
            cache[anchor] = (sigma, cholesky(sigma))
        return cache[anchor]


Family = Union[Logistic, HueslerReiss]


@dataclass(frozen=True, eq=False)
class MixtureModel:
    """Validated mixture model with derived signatures, ℓ(1) and face weights.

    Build instances with :func:`validate`.
    """

    matrix: np.ndarray
    families: tuple
    masses: np.ndarray
    signatures: tuple
    column_stdf: np.ndarray
    ell_one: float
    weights: np.ndarray
    mvn_tol: float = DEFAULT_MVN_TOL

    @property
    def d(self) -> int:
        return self.matrix.shape[0]

    @property
    def r(self) -> int:
        return self.matrix.shape[1]

    def column(self, k: int) -> np.ndarray:
        """Positive coefficients of column k restricted to its signature."""
        return self.matrix[list(self.signatures[k]), k]

    def with_masses(self, masses) -> "MixtureModel":
        return validate(self.matrix, self.families, masses, mvn_tol=self.mvn_tol)


def _as_signature(members, d=None) -> tuple:
    sig = tuple(sorted(int(j) for j in members))
    if not sig:
        raise ValueError("signature must be nonempty")
    if len(set(sig)) != len(sig):
        raise ValueError(f"repeated index in {members!r}")
    if sig[0] < 0 or (d is not None and sig[-1] >= d):
        raise ValueError(f"index out of range in {members!r}")
    return sig


def _column_signatures(matrix) -> tuple:
    return tuple(tuple(int(j) for j in np.flatnonzero(matrix[:, k] > 0))
                 for k in range(matrix.shape[1]))


def validate(matrix, families: Sequence[Family], masses=None,
             mvn_tol: float = DEFAULT_MVN_TOL) -> MixtureModel:
    """Check the inputs and build a :class:`MixtureModel`.

    Parameters
    ----------
    matrix : array_like, shape (d, r)
        Coefficients in [0, 1] with unit row sums and positive column sums.
    families : sequence of Logistic or HueslerReiss
        One factor per column. Hüsler–Reiss variograms are indexed by the sorted
        members of the column's signature.
    masses : array_like, optional
        Mass vector of the mixture generator; uniform when omitted.
    mvn_tol : float
        Standard-error target for normal cdf evaluations in the stdf.
    """
    from .stdf import factor_stdf

    a = np.array(matrix, dtype=float)
    if a.ndim != 2 or a.shape[0] < 1 or a.shape[1] < 1:
        raise ValidationError(f"coefficient matrix must be d x r with d, r >= 1, got {a.shape}")
    d, r = a.shape
    if not np.all(np.isfinite(a)) or np.any(a < 0) or np.any(a > 1):
        raise ValidationError("coefficients must lie in [0, 1]")
    rows = a.sum(axis=1)
    bad = np.flatnonzero(np.abs(rows - 1.0) > ROW_SUM_RTOL)
    if bad.size:
        raise RowSumError(f"row {bad[0]} sums to {rows[bad[0]]!r}, expected 1")
    empty = np.flatnonzero(a.sum(axis=0) <= 0)
    if empty.size:
        raise EmptyColumnError(f"column {empty[0]} is identically zero")

    families = tuple(families)
    if len(families) != r:
        raise ValidationError(f"expected {r} factor families, got {len(families)}")
    sigs = _column_signatures(a)
    fams = []
    for k, (fam, sig) in enumerate(zip(families, sigs)):
        if isinstance(fam, HueslerReiss):
            if fam.dim == 1 and len(sig) == 1:
                pass
            elif fam.dim != len(sig):
                raise BadVariogram(
                    f"column {k}: variogram is {fam.dim}x{fam.dim} but signature has {len(sig)} members")
        elif not isinstance(fam, Logistic):
            raise ValidationError(f"column {k}: unknown factor family {fam!r}")
        fams.append(fam)

    if masses is None:
        m = np.full(r, 1.0 / r)
    else:
        m = np.array(masses, dtype=float).ravel()
        if m.shape != (r,):
            raise BadMass(f"expected {r} masses, got {m.size}")
        if r == 1:
            if abs(m[0] - 1.0) > MASS_ATOL:
                raise BadMass("a single column needs mass 1")
        elif np.any(~(m > 0)) or np.any(m >= 1):
            raise BadMass("masses must lie in (0, 1)")
        if abs(m.sum() - 1.0) > MASS_ATOL:
            raise BadMass(f"masses sum to {m.sum()!r}, expected 1")

    if len(set(sigs)) < len(sigs):
        warnings.warn("duplicate signatures among columns; the model is valid but "
                      "not in reduced form", DuplicateSignatureWarning, stacklevel=2)

    col = np.array([factor_stdf(fams[k], a[list(sigs[k]), k], tol=mvn_tol, seed=k)
                    for k in range(r)])
    ell_one = float(col.sum())
    for arr in (a, m, col):
        arr.setflags(write=False)
    w = col / ell_one
    w.setflags(write=False)
    return MixtureModel(matrix=a, families=tuple(fams), masses=m, signatures=sigs,
                        column_stdf=col, ell_one=ell_one, weights=w, mvn_tol=float(mvn_tol))


def signatures(model: MixtureModel) -> tuple:
    return model.signatures


def extreme_directions(model: MixtureModel) -> tuple:
    """Distinct signatures, in order of first appearance."""
    return tuple(dict.fromkeys(model.signatures))


def chi_positive(model: MixtureModel, members) -> bool:
    """Whether the tail dependence coefficient of ``members`` is positive."""
    sub = set(_as_signature(members, model.d))
    return any(sub.issubset(sig) for sig in model.signatures)
