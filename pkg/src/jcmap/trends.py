"""Pairwise citation traffic over time and its moving average."""

from __future__ import annotations

from dataclasses import dataclass

from .ingest import CitationTensor


@dataclass(frozen=True)
class TrendSeries:
    pair: tuple[str, str]
    direction: tuple[str, str]  # (citing, cited)
    points: tuple[tuple[int, float], ...]
    smoothed: tuple[tuple[int, float], ...]

    @property
    def years(self) -> list[int]:
        return [y for y, _ in self.points]

    @property
    def values(self) -> list[float]:
        return [v for _, v in self.points]


def year_span(start: int, end: int) -> list[int]:
    if end < start:
        raise ValueError(f"empty year range {start}..{end}")
    return list(range(start, end + 1))


def available_years(tensor: CitationTensor, start: int | None = None, end: int | None = None) -> list[int]:
    """Years present in the data, optionally clipped to ``[start, end]``."""
    return [
        y for y in tensor.years
        if (start is None or y >= start) and (end is None or y <= end)
    ]


def moving_average(points, window: int = 3) -> list[tuple[int, float]]:
    """Centered mean over ``window`` consecutive points; partial windows dropped.

    ``points`` is a year-sorted sequence of (year, value) pairs. Each output
    pair carries the window's center year.
    """
    if not isinstance(window, int) or isinstance(window, bool) or window < 1 or window % 2 == 0:
        raise ValueError(f"window must be an odd integer >= 1, got {window!r}")
    pts = list(points)
    half = window // 2
    out = []
    for i in range(half, len(pts) - half):
        chunk = pts[i - half:i + half + 1]
        out.append((pts[i][0], sum(v for _, v in chunk) / window))
    return out


def _series(tensor, citing, cited, years, window, share):
    pts = []
    for y in years:
        c = tensor.count(y, citing, cited)
        if share:
            total = sum(tensor.row(y, citing).values())
            c = c / total if total else 0.0
        pts.append((y, c))
    return TrendSeries((citing, cited), (citing, cited), tuple(pts), tuple(moving_average(pts, window)))


def pair_series(
    tensor: CitationTensor,
    a: str,
    b: str,
    years,
    window: int = 3,
    share: bool = False,
) -> tuple[TrendSeries, TrendSeries]:
    """Citation counts a->b and b->a for each year in ``years``.

    ``years`` is either an explicit iterable of years or an inclusive
    ``(start, end)`` tuple. Missing cells count as zero. With ``share`` each
    count is divided by the citing journal's total for that year.
    """
    if isinstance(years, tuple) and len(years) == 2:
        years = year_span(*years)
    years = sorted(set(years))
    if not years:
        raise ValueError("year range is empty")
    ab = _series(tensor, a, b, years, window, share)
    ba = _series(tensor, b, a, years, window, share)
    return TrendSeries((a, b), ab.direction, ab.points, ab.smoothed), TrendSeries((a, b), ba.direction, ba.points, ba.smoothed)
