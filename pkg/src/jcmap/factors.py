"""Factor analysis of citation profiles.

Pipeline: Pearson correlations between journal profiles, principal
component extraction, factor-count selection, raw varimax rotation and
designation of each journal to its highest-loading factor.
"""

from __future__ import annotations

import enum
import math
from dataclasses import dataclass, field

import numpy as np

from .errors import ContractError, DegenerateEnvironmentError

SYMMETRY_TOL = 1e-12


class ProfileMode(enum.Enum):
    CITING_PROFILES = "citing"  # variable i = row i
    CITED_PROFILES = "cited"  # variable i = column i

    @classmethod
    def parse(cls, value) -> "ProfileMode":
        if isinstance(value, ProfileMode):
            return value
        return cls(str(value).lower())


@dataclass(frozen=True)
class CorrelationMatrix:
    labels: tuple[str, ...]
    values: np.ndarray
    dropped: tuple[str, ...] = ()

    @property
    def n(self) -> int:
        return len(self.labels)


@dataclass(frozen=True)
class Components:
    eigenvalues: np.ndarray  # descending
    eigenvectors: np.ndarray  # column f belongs to eigenvalues[f]
    loadings: np.ndarray  # unrotated


@dataclass(frozen=True)
class FactorSolution:
    labels: tuple[str, ...]
    eigenvalues: np.ndarray
    k: int
    loadings: np.ndarray
    designation: np.ndarray  # 1-based factor index per journal
    criterion: float
    rotation: np.ndarray = field(repr=False)
    correlation: CorrelationMatrix | None = field(default=None, repr=False)

    def members_of(self, factor: int) -> list[str]:
        return [lab for lab, d in zip(self.labels, self.designation) if d == factor]


def pearson(x, y) -> float:
    x = np.asarray(x, dtype=float)
    y = np.asarray(y, dtype=float)
    xc = x - x.mean()
    yc = y - y.mean()
    denom = math.sqrt(float(xc @ xc) * float(yc @ yc))
    if denom == 0.0:
        raise ValueError("zero-variance profile")
    return float(xc @ yc) / denom


def correlate_profiles(profiles: np.ndarray) -> np.ndarray:
    """Pearson correlation between the rows of ``profiles``.

    Rows must have non-zero variance. The result is exactly symmetric with a
    unit diagonal.
    """
    p = np.asarray(profiles, dtype=float)
    centered = p - p.mean(axis=1, keepdims=True)
    norms = np.sqrt(np.einsum("ij,ij->i", centered, centered))
    z = centered / norms[:, None]
    r = z @ z.T
    r = (r + r.T) / 2.0
    np.clip(r, -1.0, 1.0, out=r)
    np.fill_diagonal(r, 1.0)
    return r


def profile_correlations(
    env,
    mode=ProfileMode.CITING_PROFILES,
    zero_diagonal: bool = True,
    labels=None,
) -> CorrelationMatrix:
    """Correlate the citation profiles of an environment's members.

    ``env`` is an EgoEnvironment or a bare square matrix (then ``labels``
    names its rows). Journals with a constant profile cannot be correlated;
    they are dropped and listed in ``dropped``.
    """
    mode = ProfileMode.parse(mode)
    if labels is None:
        labels = env.members
        matrix = env.matrix
    else:
        matrix = env
    mat = np.array(matrix, dtype=float)
    labels = tuple(labels)
    if mat.shape != (len(labels), len(labels)):
        raise ContractError("matrix must be square and match the labels")
    if len(labels) < 3:
        raise DegenerateEnvironmentError(
            f"need at least 3 journals to correlate, got {len(labels)}"
        )
    if zero_diagonal:
        np.fill_diagonal(mat, 0.0)
    profiles = mat if mode is ProfileMode.CITING_PROFILES else mat.T
    keep = [i for i in range(len(labels)) if np.ptp(profiles[i]) > 0]
    dropped = tuple(labels[i] for i in range(len(labels)) if i not in keep)
    if len(keep) < 3:
        raise DegenerateEnvironmentError(
            f"only {len(keep)} journals have non-constant profiles; need at least 3"
        )
    # profiles stay full-length vectors over all members, dropped or not
    values = correlate_profiles(profiles[keep])
    return CorrelationMatrix(tuple(labels[i] for i in keep), values, dropped)


def _fix_signs(vectors: np.ndarray) -> np.ndarray:
    """Flip each column so its largest-magnitude entry is positive."""
    idx = np.argmax(np.abs(vectors), axis=0)
    signs = np.sign(vectors[idx, np.arange(vectors.shape[1])])
    signs[signs == 0] = 1.0
    return vectors * signs


def extract_components(corr) -> Components:
    c = np.asarray(getattr(corr, "values", corr), dtype=float)
    if c.ndim != 2 or c.shape[0] != c.shape[1]:
        raise ContractError("correlation matrix must be square")
    if not np.allclose(c, c.T, rtol=0.0, atol=SYMMETRY_TOL):
        raise ContractError("correlation matrix is not symmetric")
    vals, vecs = np.linalg.eigh((c + c.T) / 2.0)
    order = np.argsort(-vals, kind="stable")
    vals = vals[order]
    vecs = _fix_signs(vecs[:, order])
    loadings = vecs * np.sqrt(np.maximum(vals, 0.0))
    return Components(vals, vecs, loadings)


def select_factor_count(eigenvalues, rule="kaiser") -> int:
    """Number of factors to retain.

    ``rule`` is ``"kaiser"`` (eigenvalues >= 1, at least one) or an integer,
    which is clamped to ``[1, n]``.
    """
    eig = np.asarray(eigenvalues, dtype=float)
    if eig.size == 0:
        raise ValueError("eigenvalues must be non-empty")
    if isinstance(rule, str):
        if rule.lower() != "kaiser":
            rule = int(rule)
        else:
            return max(1, int(np.count_nonzero(eig >= 1.0)))
    return min(max(int(rule), 1), eig.size)


def varimax_criterion(loadings) -> float:
    """Raw varimax criterion: summed per-factor variance of squared loadings."""
    sq = np.asarray(loadings, dtype=float) ** 2
    return float(np.sum(np.mean(sq**2, axis=0) - np.mean(sq, axis=0) ** 2))


def _pair_angle(x: np.ndarray, y: np.ndarray) -> float:
    # Kaiser's closed form for the planar rotation maximizing the criterion
    n = x.size
    u = x * x - y * y
    v = 2.0 * x * y
    a, b = u.sum(), v.sum()
    num = 2.0 * (u @ v) - 2.0 * a * b / n
    den = (u @ u - v @ v) - (a * a - b * b) / n
    return math.atan2(num, den) / 4.0


def varimax_rotate(loadings, max_iter: int = 1000, tol: float = 1e-13, return_rotation=False):
    """Orthogonally rotate ``loadings`` to maximize the raw varimax criterion.

    Sweeps over all factor pairs, applying the optimal planar rotation to
    each, until a sweep improves the criterion by less than ``tol``. Every
    planar step is an exact maximization, so the criterion never decreases.
    """
    lam = np.array(loadings, dtype=float)
    if lam.ndim != 2:
        raise ContractError("loadings must be a 2-D array")
    n, k = lam.shape
    if k < 1 or n < k:
        raise ContractError(f"need n >= k >= 1, got n={n}, k={k}")
    rot = np.eye(k)
    if k > 1:
        crit = varimax_criterion(lam)
        for _ in range(max_iter):
            for p in range(k - 1):
                for q in range(p + 1, k):
                    phi = _pair_angle(lam[:, p], lam[:, q])
                    if phi == 0.0:
                        continue
                    c, s = math.cos(phi), math.sin(phi)
                    for m in (lam, rot):
                        mp, mq = m[:, p].copy(), m[:, q]
                        m[:, p] = c * mp + s * mq
                        m[:, q] = -s * mp + c * mq
            new = varimax_criterion(lam)
            improvement = new - crit
            crit = new
            if improvement < tol:
                break
    if return_rotation:
        return lam, rot
    return lam


def designate_clusters(loadings) -> np.ndarray:
    """1-based index of each row's largest absolute loading (ties: lowest)."""
    lam = np.asarray(loadings, dtype=float)
    if lam.size == 0:
        raise ValueError("loadings must be non-empty")
    return np.argmax(np.abs(lam), axis=1) + 1


def canonicalize_factors(loadings: np.ndarray, rotation: np.ndarray):
    """Order factors by explained variance and make each column sum positive."""
    ss = np.sum(loadings**2, axis=0)
    order = np.argsort(-ss, kind="stable")
    lam = loadings[:, order]
    rot = rotation[:, order]
    sums = lam.sum(axis=0)
    signs = np.where(sums < 0, -1.0, 1.0)
    return lam * signs, rot * signs


def factor_analyze(corr: CorrelationMatrix, rule="kaiser", max_iter: int = 1000, tol: float = 1e-13) -> FactorSolution:
    comps = extract_components(corr)
    k = select_factor_count(comps.eigenvalues, rule)
    rotated, rot = varimax_rotate(comps.loadings[:, :k], max_iter=max_iter, tol=tol, return_rotation=True)
    rotated, rot = canonicalize_factors(rotated, rot)
    return FactorSolution(
        labels=tuple(corr.labels),
        eigenvalues=comps.eigenvalues,
        k=k,
        loadings=rotated,
        designation=designate_clusters(rotated),
        criterion=varimax_criterion(rotated),
        rotation=rot,
        correlation=corr,
    )
