"""Ego citation environments.

An environment collects every journal exchanging at least ``threshold`` of
the ego journal's total citations in one direction, and materializes the
full citation matrix among those members for a single year.
"""

from __future__ import annotations

import enum
import warnings
from dataclasses import dataclass
from fractions import Fraction

import numpy as np

from .errors import EmptyEnvironmentError
from .ingest import CitationTensor

DEFAULT_THRESHOLD = Fraction(1, 100)


class Direction(enum.Enum):
    CITED = "cited"  # journals citing the ego
    CITING = "citing"  # journals cited by the ego
    BOTH = "both"  # union of the two; experimental

    @classmethod
    def parse(cls, value: "str | Direction") -> "Direction":
        if isinstance(value, Direction):
            return value
        try:
            return cls(value.lower())
        except ValueError:
            raise ValueError(f"unknown direction {value!r}; use cited, citing or both") from None


@dataclass(frozen=True)
class EgoEnvironment:
    ego: str
    year: int
    direction: Direction
    threshold: Fraction
    members: tuple[str, ...]
    matrix: np.ndarray  # rows citing, columns cited
    ego_total: int
    edges: dict  # member -> edge count with the ego in the selecting direction

    def __post_init__(self):
        self.matrix.setflags(write=False)

    @property
    def size(self) -> int:
        return len(self.members)


def as_fraction(threshold) -> Fraction:
    """Exact rational form of a threshold; floats go through their shortest repr."""
    if isinstance(threshold, Fraction):
        frac = threshold
    elif isinstance(threshold, float):
        frac = Fraction(repr(threshold))
    else:
        frac = Fraction(threshold)
    if not 0 < frac <= 1:
        raise ValueError(f"threshold must lie in (0, 1], got {threshold}")
    return frac


def _edges(tensor: CitationTensor, ego: str, year: int, direction: Direction) -> dict[str, int]:
    if direction is Direction.CITING:
        return tensor.row(year, ego)
    if direction is Direction.CITED:
        return tensor.column(year, ego)
    raise ValueError("BOTH has no single edge set")


def ego_total(tensor: CitationTensor, ego: str, year: int, direction: Direction) -> int:
    direction = Direction.parse(direction)
    return sum(_edges(tensor, ego, year, direction).values())


def select_members(
    tensor: CitationTensor,
    ego: str,
    year: int,
    direction: Direction,
    threshold=DEFAULT_THRESHOLD,
) -> set[str]:
    """Journals whose edge with the ego reaches ``threshold`` of the ego total.

    The comparison ``edge >= threshold * total`` is done in exact rational
    arithmetic, so an edge at exactly 1% is included.
    """
    direction = Direction.parse(direction)
    frac = as_fraction(threshold)
    if direction is Direction.BOTH:
        out = {ego}
        found = False
        for d in (Direction.CITING, Direction.CITED):
            try:
                out |= select_members(tensor, ego, year, d, frac)
                found = True
            except EmptyEnvironmentError:
                pass
        if not found:
            raise EmptyEnvironmentError(f"{ego} has no citations in {year}")
        return out
    edges = _edges(tensor, ego, year, direction)
    total = sum(edges.values())
    if total == 0:
        raise EmptyEnvironmentError(
            f"{ego} has no {direction.value} citations in {year}; environment is empty"
        )
    num, den = frac.numerator, frac.denominator
    members = {j for j, e in edges.items() if j != ego and e * den >= num * total}
    members.add(ego)
    return members


def order_members(ego: str, members) -> list[str]:
    return [ego] + sorted(m for m in members if m != ego)


def build_matrix(tensor: CitationTensor, members, year: int) -> np.ndarray:
    members = list(members)
    if not members:
        raise ValueError("members must be non-empty")
    index = {m: i for i, m in enumerate(members)}
    mat = np.zeros((len(members), len(members)), dtype=np.int64)
    for i, m in enumerate(members):
        for cited, c in tensor.row(year, m).items():
            j = index.get(cited)
            if j is not None:
                mat[i, j] = c
    return mat


def build_environment(
    tensor: CitationTensor,
    ego: str,
    year: int,
    direction=Direction.CITING,
    threshold=DEFAULT_THRESHOLD,
) -> EgoEnvironment:
    direction = Direction.parse(direction)
    frac = as_fraction(threshold)
    if direction is Direction.BOTH:
        warnings.warn("direction 'both' (union environment) is experimental", stacklevel=2)
    members = order_members(ego, select_members(tensor, ego, year, direction, frac))
    if direction is Direction.BOTH:
        out_e, in_e = tensor.row(year, ego), tensor.column(year, ego)
        edges = {m: out_e.get(m, 0) + in_e.get(m, 0) for m in members}
        total = sum(out_e.values()) + sum(in_e.values())
    else:
        all_edges = _edges(tensor, ego, year, direction)
        edges = {m: all_edges.get(m, 0) for m in members}
        total = sum(all_edges.values())
    return EgoEnvironment(
        ego=ego,
        year=year,
        direction=direction,
        threshold=frac,
        members=tuple(members),
        matrix=build_matrix(tensor, members, year),
        ego_total=total,
        edges=edges,
    )
