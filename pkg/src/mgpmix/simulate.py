"""Exact simulation of the mgp vector by rejection from tilted proposals.

Batches are split into fixed-size chunks; chunk ``c`` draws from the substream
``SeedSequence(seed, spawn_key=(c,))``. The output therefore depends only on
(model, seed, n) and not on how many workers process the chunks.
"""

from __future__ import annotations

import logging
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass

import numpy as np
from scipy.special import logsumexp

from .density import MgpPoint
from .errors import RejectionBudgetExceeded
from .generators import _draw_tilted, open_uniform, tilt_weights
from .model import MixtureModel

log = logging.getLogger(__name__)

CHUNK_SIZE = 4096


@dataclass(frozen=True)
class SimulationConfig:
    n: int
    seed: int = 0
    max_rejections: int = 10 ** 6
    workers: int = 1

    def __post_init__(self):
        if self.n < 1:
            raise ValueError("n must be positive")
        if self.max_rejections < 1:
            raise ValueError("max_rejections must be positive")
        if self.workers < 1:
            raise ValueError("workers must be positive")
        if not 0 <= self.seed < 2 ** 64:
            raise ValueError("seed must be an unsigned 64-bit integer")


@dataclass(frozen=True, eq=False)
class SampleBatch:
    """Samples stored densely, with -inf outside each sample's face.

    ``cols`` holds the column b drawn for each sample; the sample lies on the
    face of ``model.signatures[cols[i]]``.
    """

    y: np.ndarray
    cols: np.ndarray
    proposals: int
    signatures: tuple

    @property
    def n(self) -> int:
        return len(self.cols)

    @property
    def acceptances(self) -> int:
        return self.n

    @property
    def acceptance_rate(self) -> float:
        return self.n / self.proposals

    def face_counts(self) -> dict:
        counts = {}
        for k, c in zip(*np.unique(self.cols, return_counts=True)):
            sig = self.signatures[k]
            counts[sig] = counts.get(sig, 0) + int(c)
        return counts

    @property
    def points(self) -> list:
        return [MgpPoint(self.signatures[k], row[list(self.signatures[k])])
                for k, row in zip(self.cols, self.y)]


def _plan(model: MixtureModel):
    cache = model.__dict__.get("_sim_plan")
    if cache is None:
        cache = [(list(sig), model.families[k], np.log(model.column(k) / model.masses[k]),
                  tilt_weights(model, k)) for k, sig in enumerate(model.signatures)]
        model.__dict__["_sim_plan"] = cache
    return cache


def _accept(q, u0):
    return np.log(u0) <= np.max(q, axis=-1) - logsumexp(q, axis=-1)


def sample_one(model: MixtureModel, rng, max_rejections: int = 10 ** 6):
    """One draw following the rejection algorithm literally.

    Returns ``(point, proposals)``.
    """
    b = int(rng.choice(model.r, p=model.weights))
    sig, fam, shifts, nw = _plan(model)[b]
    for count in range(1, max_rejections + 1):
        a = int(rng.choice(len(sig), p=nw))
        q = _draw_tilted(fam, shifts, np.array([a]), rng)[0]
        if _accept(q, open_uniform(rng)):
            break
    else:
        raise RejectionBudgetExceeded(f"no acceptance after {max_rejections} proposals")
    e = rng.standard_exponential()
    return MgpPoint(tuple(sig), q - np.max(q) + e), count


def _simulate_chunk(model: MixtureModel, n: int, rng, max_rejections: int, offset: int = 0):
    plan = _plan(model)
    cols = rng.choice(model.r, size=n, p=model.weights)
    y = np.full((n, model.d), -np.inf)
    proposals = 0
    for k, (sig, fam, shifts, nw) in enumerate(plan):
        rows = np.flatnonzero(cols == k)
        if rows.size == 0:
            continue
        out = np.empty((rows.size, len(sig)))
        pending = np.arange(rows.size)
        tries = 0
        while pending.size:
            tries += 1
            if tries > max_rejections:
                raise RejectionBudgetExceeded(
                    f"sample {offset + rows[pending[0]]} exceeded {max_rejections} proposals",
                    index=int(offset + rows[pending[0]]))
            a = rng.choice(len(sig), size=pending.size, p=nw)
            q = _draw_tilted(fam, shifts, a, rng)
            proposals += pending.size
            ok = _accept(q, open_uniform(rng, pending.size))
            out[pending[ok]] = q[ok]
            pending = pending[~ok]
        y[np.ix_(rows, sig)] = out - np.max(out, axis=1, keepdims=True)
    y += rng.standard_exponential(n)[:, None]
    return y, cols, proposals


def chunk_rng(seed: int, chunk: int):
    return np.random.default_rng(np.random.SeedSequence(seed, spawn_key=(chunk,)))


def sample_batch(model: MixtureModel, config: SimulationConfig) -> SampleBatch:
    bounds = [(s, min(s + CHUNK_SIZE, config.n)) for s in range(0, config.n, CHUNK_SIZE)]

    def run(c):
        lo, hi = bounds[c]
        return _simulate_chunk(model, hi - lo, chunk_rng(config.seed, c),
                               config.max_rejections, offset=lo)

    _plan(model)
    if config.workers > 1 and len(bounds) > 1:
        with ThreadPoolExecutor(max_workers=config.workers) as pool:
            parts = list(pool.map(run, range(len(bounds))))
    else:
        parts = [run(c) for c in range(len(bounds))]
    y = np.concatenate([p[0] for p in parts])
    cols = np.concatenate([p[1] for p in parts])
    total = sum(p[2] for p in parts)
    log.debug("simulated %d samples with %d proposals", config.n, total)
    return SampleBatch(y=y, cols=cols, proposals=total, signatures=model.signatures)


def boxcox_transform(y, scale: float = 4.0, d: int | None = None):
    """scale * (exp(y / scale) - 1), mapping -inf to -scale.

    ``y`` is a dense array or an :class:`MgpPoint` (then ``d`` is required).
    """
    if not scale > 0:
        raise ValueError("scale must be positive")
    if isinstance(y, MgpPoint):
        if d is None:
            raise ValueError("d is required to densify an MgpPoint")
        y = y.to_dense(d)
    y = np.asarray(y, dtype=float)
    return scale * np.expm1(y / scale)


def sample_extremal_functions(model: MixtureModel, j: int, rng, size: int):
    """Draws of Q^(j), the mixture generator tilted by exp(t_j).

    The column is chosen with probability a_jk; the draw then comes from the
    tilted proposal q_{j,k}. Returns a dense (size, d) array with -inf outside
    the chosen signature.
    """
    if not 0 <= j < model.d:
        raise ValueError(f"component {j} out of range")
    plan = _plan(model)
    probs = model.matrix[j] / model.matrix[j].sum()
    cols = rng.choice(model.r, size=size, p=probs)
    q = np.full((size, model.d), -np.inf)
    for k in np.flatnonzero(probs > 0):
        rows = np.flatnonzero(cols == k)
        if rows.size == 0:
            continue
        sig, fam, shifts, _ = plan[k]
        pos = np.full(rows.size, sig.index(j))
        q[np.ix_(rows, sig)] = _draw_tilted(fam, shifts, pos, rng)
    return q


def sample_extremal_function(model: MixtureModel, j: int, rng) -> MgpPoint:
    return MgpPoint.from_dense(sample_extremal_functions(model, j, rng, 1)[0])
