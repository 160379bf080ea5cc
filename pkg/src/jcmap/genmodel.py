"""Synthetic skewed citation data.

Price-style cumulative advantage simulation, a tail-exponent estimator,
sample skewness, and a two-community citation fixture used to exercise the
map pipeline end to end. All randomness comes from ``XorShift64Star`` so
outputs are bit-identical for a given seed.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .errors import DivergentExponentError, InsufficientDataError, UndefinedSkewnessError
from .ingest import CitationTensor
from .rng import XorShift64Star


@dataclass(frozen=True)
class CumAdvConfig:
    n_steps: int
    n_seed: int = 1
    alpha: float = 0.5  # probability an event cites uniformly at random
    new_target_prob: float = 0.0  # within uniform events: chance of a brand-new journal
    seed: int = 42

    def __post_init__(self):
        if self.n_steps < 1:
            raise ValueError("n_steps must be >= 1")
        if self.n_seed < 1:
            raise ValueError("n_seed must be >= 1")
        for name in ("alpha", "new_target_prob"):
            p = getattr(self, name)
            if not 0.0 <= p <= 1.0:
                raise ValueError(f"{name} must lie in [0, 1], got {p}")


@dataclass(frozen=True)
class PowerLawFit:
    exponent: float
    xmin: int
    n_tail: int


def simulate_cumulative_advantage(config: CumAdvConfig) -> list[int]:
    """Per-journal citation counts after ``n_steps`` citation events.

    Each event, with probability ``alpha``, is uniform: it founds a new
    journal with probability ``new_target_prob`` and otherwise cites an
    existing journal chosen uniformly. Otherwise the cited journal is drawn
    in proportion to its current count. Counts sum to ``n_steps + n_seed``.
    """
    rng = XorShift64Star(config.seed)
    counts = [1] * config.n_seed
    # one entry per citation received, so a uniform draw is proportional
    tokens = list(range(config.n_seed))
    alpha, p_new = config.alpha, config.new_target_prob
    for _ in range(config.n_steps):
        if rng.random() < alpha:
            if rng.random() < p_new:
                j = len(counts)
                counts.append(0)
            else:
                j = rng.randbelow(len(counts))
        else:
            j = tokens[rng.randbelow(len(tokens))]
        counts[j] += 1
        tokens.append(j)
    return counts


def fit_power_law(counts, xmin: int) -> PowerLawFit:
    """Continuous-approximation MLE of the tail exponent above ``xmin``.

    alpha = 1 + n / sum(ln(x / (xmin - 0.5))). The half-unit offset is the
    usual correction for integer data; it is only accurate once xmin is
    around 6 or more.
    """
    xmin = int(xmin)
    if xmin < 1:
        raise ValueError("xmin must be >= 1")
    x = np.asarray(list(counts), dtype=float)
    tail = np.sort(x[x >= xmin])
    if tail.size < 2:
        raise InsufficientDataError(f"only {tail.size} values >= xmin={xmin}; need 2")
    if np.all(tail == tail[0]):
        raise DivergentExponentError("all tail values are equal; the exponent diverges")
    logsum = math.fsum(np.log(tail / (xmin - 0.5)).tolist())
    return PowerLawFit(1.0 + tail.size / logsum, xmin, int(tail.size))


def sample_skewness(values) -> float:
    """Adjusted Fisher-Pearson standardized third moment (G1)."""
    x = np.asarray(list(values), dtype=float)
    n = x.size
    if n < 3:
        raise UndefinedSkewnessError(f"need at least 3 values, got {n}")
    d = x - x.mean()
    m2 = float(np.mean(d**2))
    if m2 == 0.0:
        raise UndefinedSkewnessError("variance is zero")
    m3 = float(np.mean(d**3))
    g1 = m3 / m2**1.5
    return math.sqrt(n * (n - 1)) / (n - 2) * g1


def fixture_journals(block_size: int = 6, blocks: int = 2, n_general: int = 0, ego: str | None = None) -> list[list[str]]:
    """Journal names per group: [ego], block A, block B, ..., general."""
    names = [[f"{chr(ord('A') + b)}{i + 1:02d}" for i in range(block_size)] for b in range(blocks)]
    if n_general:
        names.append([f"G{i + 1:02d}" for i in range(n_general)])
    if ego:
        names.insert(0, [ego])
    return names


def synthesize_environment_fixture(
    blocks: int = 2,
    inter_block_rate: float = 0.05,
    seed: int = 42,
    *,
    year: int = 1980,
    block_size: int = 8,
    n_general: int = 2,
    base: float = 200.0,
    spread: float = 1.5,
    general_weight: float = 3.0,
    ego: str | None = "EGO",
) -> CitationTensor:
    """Two journal communities citing densely inside and weakly across.

    Block journal j has a popularity weight w_j drawn log-uniformly from
    ``[1, spread]``; the expected count from block journal i to j is
    ``base * w_j``, times ``inter_block_rate`` across blocks. ``n_general``
    general journals (weight ``general_weight``) are cited by everyone and
    cite everyone. The optional ``ego`` cites and is cited by all journals,
    so its 1% environment spans both blocks. Counts are Poisson.

    With ``inter_block_rate=0`` the block-to-block part is exactly block
    diagonal; with ``n_general=0`` and ``ego=None`` that is the whole tensor.
    """
    if blocks != 2:
        raise ValueError("only two-block fixtures are supported")
    if not 0.0 <= inter_block_rate <= 1.0:
        raise ValueError("inter_block_rate must lie in [0, 1]")
    rng = XorShift64Star(seed)
    groups = fixture_journals(block_size, blocks, n_general, None)
    block_groups = groups[:blocks]
    general = groups[blocks] if n_general else []
    block_of = {j: b for b, g in enumerate(block_groups) for j in g}
    weight = {j: math.exp(rng.uniform(0.0, math.log(spread))) for g in block_groups for j in g}
    weight.update({j: general_weight for j in general})
    journals = [j for g in groups for j in g]
    entries: dict = {}

    def put(citing, cited, lam):
        c = rng.poisson(lam)
        if c:
            entries[(year, citing, cited)] = c

    for i in journals:
        for j in journals:
            if i in block_of and j in block_of and block_of[i] != block_of[j]:
                rate = inter_block_rate
            else:
                rate = 1.0
            if rate > 0:
                put(i, j, base * weight[j] * rate)
    if ego:
        for j in journals:
            put(ego, j, 0.5 * base * weight[j])
            put(j, ego, 0.25 * base)
        put(ego, ego, base)
    return CitationTensor(entries)


def synthesize_series_fixture(
    years=range(1980, 1996, 2),
    rate_start: float = 0.8,
    rate_end: float = 0.05,
    seed: int = 42,
    **kwargs,
) -> CitationTensor:
    """Multi-year fixture whose inter-block rate falls linearly over time.

    Year index t uses seed ``seed + t``. Early years look like a single
    cluster, late years like two separated groupings.
    """
    years = list(years)
    entries: dict = {}
    for t, year in enumerate(years):
        frac = t / (len(years) - 1) if len(years) > 1 else 1.0
        rate = rate_start + (rate_end - rate_start) * frac
        tensor = synthesize_environment_fixture(2, rate, seed + t, year=year, **kwargs)
        entries.update(tensor.entries)
    return CitationTensor(entries)
