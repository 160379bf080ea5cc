"""Parsing and aggregation of journal-journal citation records.

Input is a plain CSV edge list::

    year,citing,cited,count
    1980,SCIENTOMETRICS,SOC STUD SCI,25

Names are normalized (upper case, periods dropped, whitespace collapsed) but
never merged beyond that, so ``J AM SOC INFORM SCI`` and ``JASIS`` stay two
different journals.
"""

from __future__ import annotations

import io
import re
from collections import defaultdict
from dataclasses import dataclass, field
from types import MappingProxyType
from typing import BinaryIO, Iterable, Iterator, Mapping, TextIO

from .errors import FormatError, InvalidNameError, ParseError

HEADER = ("year", "citing", "cited", "count")

_WS = re.compile(r"\s+")


def normalize_journal_name(raw: str) -> str:
    name = _WS.sub(" ", raw.replace(".", "")).strip().upper()
    if not name:
        raise InvalidNameError(f"journal name {raw!r} is empty after normalization")
    return name


@dataclass(frozen=True)
class CitationRecord:
    year: int
    citing: str
    cited: str
    count: int

    def __post_init__(self):
        if self.count < 0:
            raise ValueError(f"negative count {self.count}")
        if not self.citing or not self.cited:
            raise InvalidNameError("empty journal name")


Key = tuple[int, str, str]


@dataclass(frozen=True)
class CitationTensor:
    """Aggregated counts indexed by (year, citing, cited).

    Read-only once built. Absent keys count as zero.
    """

    entries: Mapping[Key, int] = field(default_factory=dict)

    def __post_init__(self):
        entries = dict(sorted(self.entries.items()))
        object.__setattr__(self, "entries", MappingProxyType(entries))
        rows: dict = defaultdict(lambda: defaultdict(int))
        cols: dict = defaultdict(lambda: defaultdict(int))
        for (year, citing, cited), c in entries.items():
            rows[(year, citing)][cited] += c
            cols[(year, cited)][citing] += c
        object.__setattr__(self, "_rows", {k: dict(v) for k, v in rows.items()})
        object.__setattr__(self, "_cols", {k: dict(v) for k, v in cols.items()})

    @property
    def years(self) -> list[int]:
        return sorted({k[0] for k in self.entries})

    @property
    def journals(self) -> set[str]:
        out = set()
        for _, citing, cited in self.entries:
            out.add(citing)
            out.add(cited)
        return out

    def journals_in(self, year: int) -> set[str]:
        out = set()
        for y, citing, cited in self.entries:
            if y == year:
                out.add(citing)
                out.add(cited)
        return out

    def count(self, year: int, citing: str, cited: str) -> int:
        return self.entries.get((year, citing, cited), 0)

    def row(self, year: int, citing: str) -> dict[str, int]:
        """Outbound counts of ``citing`` in ``year``, keyed by cited journal."""
        return dict(self._rows.get((year, citing), {}))

    def column(self, year: int, cited: str) -> dict[str, int]:
        """Inbound counts of ``cited`` in ``year``, keyed by citing journal."""
        return dict(self._cols.get((year, cited), {}))

    def total(self) -> int:
        return sum(self.entries.values())

    def __len__(self) -> int:
        return len(self.entries)

    def __eq__(self, other) -> bool:
        if not isinstance(other, CitationTensor):
            return NotImplemented
        return dict(self.entries) == dict(other.entries)

    def __hash__(self):
        return hash(tuple(self.entries.items()))


def _parse_int(text: str, what: str, line: int) -> int:
    text = text.strip()
    if not re.fullmatch(r"[+-]?\d+", text):
        raise ParseError(f"{what} {text!r} is not an integer", line)
    return int(text)


def iter_citation_lines(lines: Iterable[str]) -> Iterator[CitationRecord]:
    it = iter(lines)
    try:
        header = next(it)
    except StopIteration:
        raise FormatError("missing header; expected 'year,citing,cited,count'") from None
    header = header.rstrip("\r\n").lstrip("﻿")
    if tuple(h.strip() for h in header.split(",")) != HEADER:
        raise FormatError(f"bad header {header!r}; expected 'year,citing,cited,count'")
    for lineno, raw in enumerate(it, start=2):
        text = raw.rstrip("\r\n")
        if not text.strip():
            continue
        fields = text.split(",")
        if len(fields) != 4:
            raise ParseError(f"expected 4 fields, got {len(fields)}", lineno)
        year = _parse_int(fields[0], "year", lineno)
        count = _parse_int(fields[3], "count", lineno)
        if count < 0:
            raise ParseError(f"negative count {count}", lineno)
        try:
            citing = normalize_journal_name(fields[1])
            cited = normalize_journal_name(fields[2])
        except InvalidNameError as exc:
            raise ParseError(str(exc), lineno) from None
        yield CitationRecord(year, citing, cited, count)


def parse_citation_csv(stream: BinaryIO | TextIO | bytes | str) -> list[CitationRecord]:
    """Parse a citation CSV from a byte stream (or bytes / text).

    Raises FormatError on a bad header and ParseError, carrying the 1-based
    line number, on a malformed data line.
    """
    if isinstance(stream, bytes):
        text = stream.decode("utf-8")
    elif isinstance(stream, str):
        text = stream
    else:
        data = stream.read()
        text = data.decode("utf-8") if isinstance(data, bytes) else data
    return list(iter_citation_lines(io.StringIO(text, newline="")))


def read_citation_csv(path) -> list[CitationRecord]:
    with open(path, "rb") as fh:
        return parse_citation_csv(fh)


def aggregate(records: Iterable[CitationRecord]) -> CitationTensor:
    entries: dict[Key, int] = defaultdict(int)
    for r in records:
        entries[(r.year, r.citing, r.cited)] += r.count
    return CitationTensor(dict(entries))


def load_tensor(path) -> CitationTensor:
    return aggregate(read_citation_csv(path))


def format_citation_csv(tensor: CitationTensor) -> str:
    out = [",".join(HEADER)]
    for (year, citing, cited), c in tensor.entries.items():
        out.append(f"{year},{citing},{cited},{c}")
    return "\n".join(out) + "\n"


def write_citation_csv(tensor: CitationTensor, path) -> None:
    with open(path, "w", encoding="utf-8", newline="\n") as fh:
        fh.write(format_citation_csv(tensor))
