"""Statistical checks of simulated batches against the model's exact quantities."""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np
from scipy import stats

from .density import face_masses
from .generators import sample_mixture_generator
from .model import MixtureModel, extreme_directions
from .simulate import SampleBatch, sample_extremal_functions
from .stdf import mixture_stdf

LEVEL = 1e-3
MIN_BATCH = 1000


@dataclass(frozen=True)
class FaceRow:
    direction: tuple
    true_prob: float
    empirical_prob: float
    n: int
    z_score: float


@dataclass(frozen=True)
class FaceReport:
    rows: tuple

    def format(self, one_based=True) -> str:
        off = 1 if one_based else 0
        lines = [f"{'direction':<20}{'empirical':>10}{'true':>10}{'z':>8}"]
        for row in self.rows:
            name = "{" + ",".join(str(j + off) for j in row.direction) + "}"
            lines.append(f"{name:<20}{row.empirical_prob:>10.3f}{row.true_prob:>10.3f}{row.z_score:>8.2f}")
        return "\n".join(lines)


@dataclass(frozen=True)
class Check:
    name: str
    statistic: float
    threshold: float
    passed: bool


@dataclass
class CheckSummary:
    checks: list = field(default_factory=list)

    def add(self, name, statistic, threshold):
        self.checks.append(Check(name, float(statistic), float(threshold),
                                 bool(abs(statistic) <= threshold)))

    @property
    def passed(self) -> bool:
        return all(c.passed for c in self.checks)

    def format(self) -> str:
        return "\n".join(f"{'PASS' if c.passed else 'FAIL'}  {c.name:<40} "
                         f"stat={c.statistic:.4g}  threshold={c.threshold:.4g}"
                         for c in self.checks)


def _name(sig) -> str:
    return "{" + ",".join(str(j + 1) for j in sig) + "}"


def z_critical(level=LEVEL) -> float:
    return float(stats.norm.isf(level / 2))


def ks_critical(n, level=LEVEL) -> float:
    """Asymptotic Kolmogorov critical value for the one-sample statistic D_n."""
    return float(stats.kstwobign.isf(level) / np.sqrt(n))


def ks2_critical(n1, n2, level=LEVEL) -> float:
    return float(stats.kstwobign.isf(level) * np.sqrt((n1 + n2) / (n1 * n2)))


def face_report(model: MixtureModel, batch: SampleBatch) -> FaceReport:
    if batch.n < 1:
        raise ValueError("empty batch")
    masses = face_masses(model)
    counts = batch.face_counts()
    rows = []
    for sig in extreme_directions(model):
        p = masses[sig]
        emp = counts.get(sig, 0) / batch.n
        z = (emp - p) / np.sqrt(p * (1 - p) / batch.n) if 0 < p < 1 else 0.0
        rows.append(FaceRow(sig, p, emp, batch.n, float(z)))
    return FaceReport(tuple(rows))


def distribution_checks(model: MixtureModel, batch: SampleBatch, level=LEVEL) -> CheckSummary:
    """Face frequencies, max(Y) ~ Exp(1), P[Y_j > 0] = 1/ℓ(1) and acceptance rate ℓ(1)/d."""
    n = batch.n
    if n < MIN_BATCH:
        raise ValueError(f"distribution checks need at least {MIN_BATCH} samples, got {n}")
    out = CheckSummary()
    zc = z_critical(level)
    for row in face_report(model, batch).rows:
        out.add(f"face {_name(row.direction)} frequency |z|", row.z_score, zc)
    mx = np.max(batch.y, axis=1)
    d_stat = stats.kstest(mx, "expon", method="asymp").statistic
    out.add("KS max(Y) vs Exp(1)", d_stat, ks_critical(n, level))
    p = 1.0 / model.ell_one
    se = np.sqrt(p * (1 - p) / n)
    for j in range(model.d):
        out.add(f"P[Y{j + 1} > 0] vs 1/l(1) |z|", (np.mean(batch.y[:, j] > 0) - p) / se, zc)
    rate = model.ell_one / model.d
    se = np.sqrt(rate * (1 - rate) / batch.proposals)
    out.add("acceptance rate vs l(1)/d |z|", (batch.acceptance_rate - rate) / se if se > 0 else 0.0, zc)
    return out


def mc_stdf_check(model: MixtureModel, y_grid, n_draws: int, rng):
    """Largest |z| between ℓ(y) and the mean of max_j y_j exp(U_j) over the grid.

    U is the mixture generator with the model's mass vector. Returns
    ``(max_abs_z, zs)``.
    """
    y_grid = np.atleast_2d(np.asarray(y_grid, dtype=float))
    _, u = sample_mixture_generator(model, rng, n_draws)
    eu = np.exp(u)
    zs = []
    for y in y_grid:
        vals = np.max(eu * y, axis=1)
        se = vals.std(ddof=1) / np.sqrt(n_draws)
        target = mixture_stdf(model, y)
        zs.append((vals.mean() - target) / se if se > 0 else float(vals.mean() != target) * np.inf)
    zs = np.array(zs)
    return float(np.max(np.abs(zs))), zs


def compare_batches(a: SampleBatch, b: SampleBatch, level=LEVEL) -> CheckSummary:
    """Two-sample checks: per-face frequencies and per-coordinate KS on exp(Y)."""
    out = CheckSummary()
    ca, cb = a.face_counts(), b.face_counts()
    zc = z_critical(level)
    for sig in sorted(set(ca) | set(cb)):
        pa, pb = ca.get(sig, 0) / a.n, cb.get(sig, 0) / b.n
        pool = (ca.get(sig, 0) + cb.get(sig, 0)) / (a.n + b.n)
        se = np.sqrt(pool * (1 - pool) * (1 / a.n + 1 / b.n))
        out.add(f"face {_name(sig)} two-sample |z|", (pa - pb) / se if se > 0 else 0.0, zc)
    crit = ks2_critical(a.n, b.n, level)
    for j in range(a.y.shape[1]):
        stat = stats.ks_2samp(np.exp(a.y[:, j]), np.exp(b.y[:, j]), method="asymp").statistic
        out.add(f"KS exp(Y{j + 1})", stat, crit)
    return out


def extremal_function_check(model: MixtureModel, batch: SampleBatch, j: int, rng,
                            n_draws: int | None = None, level=LEVEL) -> CheckSummary:
    """Compare exp(Q^(j) - Q^(j)_j) with exp(Y - Y_j) given Y_j > 0, per coordinate."""
    sel = batch.y[batch.y[:, j] > 0]
    ref = np.exp(sel - sel[:, [j]])
    n_draws = len(sel) if n_draws is None else n_draws
    q = sample_extremal_functions(model, j, rng, n_draws)
    ext = np.exp(q - q[:, [j]])
    out = CheckSummary()
    out.add(f"coordinate {j + 1} identically 1", np.max(np.abs(ext[:, j] - 1.0)), 1e-12)
    crit = ks2_critical(len(ref), len(ext), level)
    for i in range(model.d):
        if i == j:
            continue
        stat = stats.ks_2samp(ext[:, i], ref[:, i], method="asymp").statistic
        out.add(f"KS extremal function j={j + 1} coord {i + 1}", stat, crit)
    return out
