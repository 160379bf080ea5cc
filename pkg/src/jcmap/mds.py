"""Nonmetric multidimensional scaling of correlation matrices.

Stress minimization alternates a monotone (isotonic) regression of the
embedded distances on the rank order of the dissimilarities with a Guttman
majorization step on the coordinates. A step that would raise Kruskal
stress-1 is shortened by halving, so stress never increases within a start.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np

from .errors import ContractError, TooFewPointsError, UndefinedStressError
from .rng import XorShift64Star

DEFAULT_RESTARTS = 8
DEFAULT_MAX_ITER = 500
DEFAULT_TOL = 1e-7
_MAX_HALVINGS = 30


@dataclass(frozen=True)
class MapLayout:
    labels: tuple[str, ...]
    coords: np.ndarray  # (n, dims), centered, canonical orientation
    stress: float
    seed: int
    restarts: int
    best_start: int = 0
    history: tuple[float, ...] = field(default=(), repr=False)
    start_stress: tuple[float, ...] = field(default=(), repr=False)


def dissimilarity_from_correlation(corr) -> np.ndarray:
    r = np.asarray(getattr(corr, "values", corr), dtype=float)
    d = 1.0 - r
    d = (d + d.T) / 2.0
    np.fill_diagonal(d, 0.0)
    return np.clip(d, 0.0, 2.0)


def monotone_regression(values, weights=None) -> np.ndarray:
    """Least-squares non-decreasing fit by pool-adjacent-violators.

    ``values`` must already be arranged in the target (dissimilarity) order.
    """
    y = np.asarray(values, dtype=float)
    n = y.size
    if n == 0:
        return y.copy()
    w = np.ones(n) if weights is None else np.asarray(weights, dtype=float)
    if w.shape != y.shape:
        raise ContractError("weights must match values")
    if np.all(y[1:] >= y[:-1]):
        return y.copy()
    means: list[float] = []
    wsum: list[float] = []
    sizes: list[int] = []
    for yi, wi in zip(y.tolist(), w.tolist()):
        m, ws, sz = yi, wi, 1
        while means and means[-1] > m:
            pw = wsum.pop()
            pm = means.pop()
            m = (pm * pw + m * ws) / (pw + ws)
            ws += pw
            sz += sizes.pop()
        means.append(m)
        wsum.append(ws)
        sizes.append(sz)
    return np.repeat(means, sizes)


def kruskal_stress1(distances, disparities) -> float:
    d = np.asarray(distances, dtype=float)
    dhat = np.asarray(disparities, dtype=float)
    if d.shape != dhat.shape:
        raise ContractError("distances and disparities must have the same shape")
    denom = float(d @ d)
    if denom == 0.0:
        raise UndefinedStressError("all embedded distances are zero")
    diff = d - dhat
    return math.sqrt(float(diff @ diff) / denom)


def _pairwise(x: np.ndarray, iu) -> np.ndarray:
    diff = x[:, None, :] - x[None, :, :]
    return np.sqrt(np.einsum("ijk,ijk->ij", diff, diff))[iu]


class _Problem:
    """Fixed data for one scaling run: pair indices and tie structure."""

    def __init__(self, dissim: np.ndarray):
        n = dissim.shape[0]
        self.n = n
        self.iu = np.triu_indices(n, 1)
        delta = dissim[self.iu]
        self.order = np.argsort(delta, kind="stable")
        sorted_delta = delta[self.order]
        # tie blocks of equal dissimilarity, in rank order
        self.block_id = np.concatenate([[0], np.cumsum(np.diff(sorted_delta) != 0)])
        self.has_ties = delta.size > 0 and self.block_id[-1] + 1 < delta.size

    def disparities(self, dist: np.ndarray) -> np.ndarray:
        """Primary approach to ties: tied pairs are free to take any order."""
        order = self.order
        if self.has_ties:
            order = order[np.lexsort((dist[order], self.block_id))]
        fitted = monotone_regression(dist[order])
        dhat = np.empty_like(dist)
        dhat[order] = fitted
        return dhat

    def stress(self, x: np.ndarray):
        dist = _pairwise(x, self.iu)
        dhat = self.disparities(dist)
        return kruskal_stress1(dist, dhat), dist, dhat

    def guttman(self, x: np.ndarray, dist: np.ndarray, dhat: np.ndarray) -> np.ndarray:
        n = self.n
        norm = float(dhat @ dhat)
        if norm > 0:
            dhat = dhat * math.sqrt(float(dist @ dist) / norm)
        ratio = np.zeros_like(dist)
        pos = dist > 0
        ratio[pos] = dhat[pos] / dist[pos]
        b = np.zeros((n, n))
        b[self.iu] = -ratio
        b = b + b.T
        b[np.diag_indices(n)] = -b.sum(axis=1)
        return b @ x / n


def classical_scaling(dissim, dims: int = 2) -> np.ndarray:
    """Torgerson scaling; exact for Euclidean distance matrices."""
    d = np.asarray(dissim, dtype=float)
    n = d.shape[0]
    j = np.eye(n) - np.full((n, n), 1.0 / n)
    b = -0.5 * j @ (d**2) @ j
    vals, vecs = np.linalg.eigh((b + b.T) / 2.0)
    order = np.argsort(-vals, kind="stable")[:dims]
    return vecs[:, order] * np.sqrt(np.maximum(vals[order], 0.0))


def _run_start(problem: _Problem, x0: np.ndarray, max_iter: int, tol: float):
    x = x0 - x0.mean(axis=0)
    s, dist, dhat = problem.stress(x)
    history = [s]
    for _ in range(max_iter):
        target = problem.guttman(x, dist, dhat)
        step = 1.0
        accepted = None
        for _ in range(_MAX_HALVINGS):
            cand = x + step * (target - x)
            try:
                cs, cdist, cdhat = problem.stress(cand)
            except UndefinedStressError:
                cs = math.inf
            if cs <= s:
                accepted = (cand, cs, cdist, cdhat)
                break
            step *= 0.5
        if accepted is None:
            break
        improvement = s - accepted[1]
        x, s, dist, dhat = accepted
        history.append(s)
        if improvement < tol:
            break
    return x, s, history


def canonical_orientation(coords: np.ndarray, labels) -> np.ndarray:
    """Center, rotate onto principal axes, then fix axis signs.

    Each axis is flipped so that the alphabetically first label with a
    non-negligible coordinate on it lies on the non-negative side.
    """
    x = coords - coords.mean(axis=0)
    dims = x.shape[1]
    if dims > 1:
        vals, vecs = np.linalg.eigh(x.T @ x)
        vecs = vecs[:, np.argsort(-vals, kind="stable")]
        x = x @ vecs
    scale = float(np.max(np.abs(x))) if x.size else 0.0
    by_label = sorted(range(len(labels)), key=lambda i: labels[i])
    for axis in range(dims):
        for i in by_label:
            v = x[i, axis]
            if abs(v) > 1e-9 * max(scale, 1e-300):
                if v < 0:
                    x[:, axis] = -x[:, axis]
                break
    x -= x.mean(axis=0)
    x[np.abs(x) < 1e-15] = 0.0
    return x


def nonmetric_mds(
    dissim,
    dims: int = 2,
    seed: int = 42,
    restarts: int = DEFAULT_RESTARTS,
    max_iter: int = DEFAULT_MAX_ITER,
    tol: float = DEFAULT_TOL,
    labels=None,
) -> MapLayout:
    """Embed a dissimilarity matrix in ``dims`` dimensions.

    Start 0 is the classical scaling solution; starts 1..restarts-1 are
    uniform random configurations drawn from one xorshift stream seeded by
    ``seed``. The lowest-stress start wins (earliest on ties).
    """
    d = np.asarray(dissim, dtype=float)
    if d.ndim != 2 or d.shape[0] != d.shape[1]:
        raise ContractError("dissimilarity matrix must be square")
    n = d.shape[0]
    if n < 3:
        raise TooFewPointsError(f"need at least 3 objects to scale, got {n}")
    if not np.allclose(d, d.T, atol=1e-12) or np.any(np.diag(d) != 0):
        raise ContractError("dissimilarity matrix must be symmetric with zero diagonal")
    if dims < 1:
        raise ContractError("dims must be >= 1")
    if restarts < 1:
        raise ContractError("restarts must be >= 1")
    labels = tuple(labels) if labels is not None else tuple(str(i) for i in range(n))

    problem = _Problem(d)
    rng = XorShift64Star(seed)
    spread = float(np.mean(d[problem.iu])) or 1.0
    best = None
    start_stress = []
    for start in range(restarts):
        if start == 0:
            x0 = classical_scaling(d, dims)
            if not np.any(_pairwise(x0, problem.iu) > 0):
                x0 = _random_config(rng, n, dims, spread)
        else:
            x0 = _random_config(rng, n, dims, spread)
        x, s, hist = _run_start(problem, x0, max_iter, tol)
        start_stress.append(s)
        if best is None or s < best[1]:
            best = (x, s, hist, start)
    x, s, hist, start = best
    return MapLayout(
        labels=labels,
        coords=canonical_orientation(x, labels),
        stress=float(s),
        seed=seed,
        restarts=restarts,
        best_start=start,
        history=tuple(hist),
        start_stress=tuple(start_stress),
    )


def _random_config(rng: XorShift64Star, n: int, dims: int, spread: float) -> np.ndarray:
    return np.array([[rng.uniform(-spread, spread) for _ in range(dims)] for _ in range(n)])
