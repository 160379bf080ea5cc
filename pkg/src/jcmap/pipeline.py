"""End-to-end map and trend runs, and their file outputs.

``run_map_pipeline`` chains member selection, matrix construction, profile
correlation, factor extraction, varimax rotation, designation and nonmetric
scaling, then writes ``map.json``, ``layout.csv``, ``loadings.csv`` and
``map.svg`` into the output directory.
"""

from __future__ import annotations

import hashlib
import json
import logging
import warnings
from dataclasses import asdict, dataclass, field
from fractions import Fraction
from importlib import resources
from pathlib import Path

from .ego import Direction, as_fraction, build_environment
from .errors import EmptyEnvironmentError, JcmapError, UnknownJournalError
from .factors import FactorSolution, ProfileMode, factor_analyze, profile_correlations
from .ingest import CitationTensor, load_tensor
from .mds import MapLayout, dissimilarity_from_correlation, nonmetric_mds
from .plotting import emit_map_svg, emit_trend_svg
from .trends import available_years, pair_series, year_span

log = logging.getLogger(__name__)

FORMATS = ("csv", "json", "svg")
FIXTURE_ALIAS = "@fixture"
FIXTURE_FILE = "two_block_series.csv"
SIG_DIGITS = 12


@dataclass
class RunConfig:
    command: str = "map"
    input: str = ""
    ego: str = ""
    year: int | None = None
    direction: str = "citing"
    threshold: str = "0.01"
    factors: str = "kaiser"
    dims: int = 2
    seed: int = 42
    restarts: int = 8
    max_iter: int = 500
    tol: float = 1e-7
    window: int = 3
    zero_diagonal: bool = True
    profiles: str = "citing"
    out: str = "."
    formats: tuple[str, ...] = FORMATS
    other: str = ""
    year_from: int | None = None
    year_to: int | None = None
    all_years: bool = False
    share: bool = False

    def echo(self) -> dict:
        """Every setting that affects output content (the output path does not)."""
        d = asdict(self)
        del d["out"]
        d["formats"] = list(self.formats)
        return d

    @classmethod
    def from_echo(cls, echo: dict, out: str = ".") -> "RunConfig":
        d = dict(echo)
        d["formats"] = tuple(d.get("formats", FORMATS))
        return cls(out=out, **d)

    @property
    def threshold_fraction(self) -> Fraction:
        return as_fraction(Fraction(str(self.threshold)))


def resolve_input(name: str) -> Path:
    """Map the ``@fixture`` alias to the bundled dataset; other paths pass through."""
    if name == FIXTURE_ALIAS:
        return Path(str(resources.files("jcmap") / "data" / FIXTURE_FILE))
    return Path(name)


def file_sha256(path) -> str:
    return hashlib.sha256(Path(path).read_bytes()).hexdigest()


def fmt_float(x: float) -> str:
    s = f"{float(x):.{SIG_DIGITS}g}"
    return "0" if s == "-0" else s


def _round(obj):
    if isinstance(obj, float):
        v = float(fmt_float(obj))
        return 0.0 if v == 0 else v
    if isinstance(obj, dict):
        return {k: _round(v) for k, v in obj.items()}
    if isinstance(obj, (list, tuple)):
        return [_round(v) for v in obj]
    if hasattr(obj, "item"):  # numpy scalar
        return _round(obj.item())
    return obj


def dumps_report(obj) -> str:
    """Stable JSON: sorted keys, floats rounded to 12 significant digits."""
    return json.dumps(_round(obj), sort_keys=True, indent=2, ensure_ascii=False) + "\n"


@dataclass
class MapReport:
    config: RunConfig
    ego: str
    year: int
    ego_total: int
    members: list[dict]
    solution: FactorSolution
    layout: MapLayout
    warnings: list[str] = field(default_factory=list)
    input_sha256: str | None = None

    def to_dict(self) -> dict:
        sol, lay = self.solution, self.layout
        return {
            "config": self.config.echo(),
            "input_sha256": self.input_sha256,
            "ego": self.ego,
            "year": self.year,
            "direction": self.config.direction,
            "ego_total": self.ego_total,
            "members": self.members,
            "eigenvalues": [float(v) for v in sol.eigenvalues],
            "k": sol.k,
            "varimax_criterion": sol.criterion,
            "loadings": [
                {"journal": j, "loadings": [float(v) for v in row], "factor": int(d)}
                for j, row, d in zip(sol.labels, sol.loadings, sol.designation)
            ],
            "factors": [
                {"factor": f, "members": sol.members_of(f)} for f in range(1, sol.k + 1)
            ],
            "layout": [
                {"journal": j, "coords": [float(v) for v in xy]}
                for j, xy in zip(lay.labels, lay.coords)
            ],
            "stress": lay.stress,
            "mds": {"seed": lay.seed, "restarts": lay.restarts, "best_start": lay.best_start,
                    "iterations": len(lay.history) - 1},
            "warnings": list(self.warnings),
        }

    def to_json(self) -> str:
        return dumps_report(self.to_dict())


def format_loadings_csv(solution: FactorSolution) -> str:
    header = ["journal"] + [f"factor_{f}" for f in range(1, solution.k + 1)] + ["designation"]
    rows = [",".join(header)]
    for j, row, d in zip(solution.labels, solution.loadings, solution.designation):
        rows.append(",".join([j] + [fmt_float(v) for v in row] + [str(int(d))]))
    return "\n".join(rows) + "\n"


def format_layout_csv(layout: MapLayout, designations) -> str:
    rows = ["journal,x,y,factor,stress"]
    stress = fmt_float(layout.stress)
    for j, xy, d in zip(layout.labels, layout.coords, designations):
        x = fmt_float(xy[0])
        y = fmt_float(xy[1]) if len(xy) > 1 else "0"
        rows.append(f"{j},{x},{y},{int(d)},{stress}")
    return "\n".join(rows) + "\n"


def _write(out: Path, name: str, text: str) -> Path:
    out.mkdir(parents=True, exist_ok=True)
    path = out / name
    with open(path, "w", encoding="utf-8", newline="\n") as fh:
        fh.write(text)
    return path


def build_map(tensor: CitationTensor, config: RunConfig, year: int) -> MapReport:
    ego = config.ego
    notes: list[str] = []
    with warnings.catch_warnings(record=True) as caught:
        warnings.simplefilter("always")
        env = build_environment(tensor, ego, year, Direction.parse(config.direction), config.threshold_fraction)
    notes.extend(str(w.message) for w in caught)
    corr = profile_correlations(env, ProfileMode.parse(config.profiles), zero_diagonal=config.zero_diagonal)
    for j in corr.dropped:
        notes.append(f"dropped {j}: constant citation profile")
        log.warning("dropped %s: constant citation profile", j)
    solution = factor_analyze(corr, rule=config.factors)
    layout = nonmetric_mds(
        dissimilarity_from_correlation(corr),
        dims=config.dims,
        seed=config.seed,
        restarts=config.restarts,
        max_iter=config.max_iter,
        tol=config.tol,
        labels=corr.labels,
    )
    members = [
        {
            "journal": m,
            "edge": int(env.edges.get(m, 0)),
            "share": env.edges.get(m, 0) / env.ego_total,
            "dropped": m in corr.dropped,
        }
        for m in env.members
    ]
    return MapReport(config, ego, year, env.ego_total, members, solution, layout, notes)


def write_map_outputs(report: MapReport, out: Path, formats) -> list[Path]:
    written = []
    if "json" in formats:
        written.append(_write(out, "map.json", report.to_json()))
    if "csv" in formats:
        written.append(_write(out, "layout.csv", format_layout_csv(report.layout, report.solution.designation)))
        written.append(_write(out, "loadings.csv", format_loadings_csv(report.solution)))
    if "svg" in formats:
        title = f"{report.ego} {report.year} ({report.config.direction}; threshold {report.config.threshold})"
        written.append(_write(out, "map.svg", emit_map_svg(report.layout, report.solution.designation, title)))
    return written


def run_map_pipeline(
    config: RunConfig, tensor: CitationTensor | None = None, input_sha256: str | None = None
) -> MapReport:
    """Run one ego map and write the requested files into ``config.out``."""
    digest = input_sha256
    if tensor is None:
        path = resolve_input(config.input)
        tensor = load_tensor(path)
        digest = file_sha256(path)
    if config.year is not None:
        year = config.year
    elif tensor.years:
        year = tensor.years[-1]
    else:
        raise EmptyEnvironmentError("the input holds no citation records")
    report = build_map(tensor, config, year)
    report.input_sha256 = digest
    write_map_outputs(report, Path(config.out), config.formats)
    return report


@dataclass
class TrendResult:
    config: RunConfig
    years: list[int]
    ab: object
    ba: object
    warnings: list[str]

    def to_dict(self) -> dict:
        a, b = self.ab.pair
        return {
            "config": self.config.echo(),
            "pair": [a, b],
            "years": self.years,
            "year_basis": "calendar" if self.config.all_years else "available",
            "window": self.config.window,
            "units": "share" if self.config.share else "count",
            "a_cites_b": [v for _, v in self.ab.points],
            "b_cites_a": [v for _, v in self.ba.points],
            "a_cites_b_ma": [[y, v] for y, v in self.ab.smoothed],
            "b_cites_a_ma": [[y, v] for y, v in self.ba.smoothed],
            "warnings": self.warnings,
        }


def format_trend_csv(ab, ba) -> str:
    ab_ma = dict(ab.smoothed)
    ba_ma = dict(ba.smoothed)

    def cell(v):
        if v is None:
            return ""
        return str(v) if isinstance(v, int) else fmt_float(v)

    rows = ["year,a_cites_b,b_cites_a,a_cites_b_ma,b_cites_a_ma"]
    for (y, v1), (_, v2) in zip(ab.points, ba.points):
        rows.append(",".join([str(y), cell(v1), cell(v2), cell(ab_ma.get(y)), cell(ba_ma.get(y))]))
    return "\n".join(rows) + "\n"


def run_trend(config: RunConfig, tensor: CitationTensor | None = None) -> TrendResult:
    if tensor is None:
        tensor = load_tensor(resolve_input(config.input))
    a, b = config.ego, config.other
    known = tensor.journals
    for j in (a, b):
        if j not in known:
            raise UnknownJournalError(f"journal {j!r} does not occur in the data")
    data_years = tensor.years
    start = config.year_from if config.year_from is not None else data_years[0]
    end = config.year_to if config.year_to is not None else data_years[-1]
    if config.all_years:
        years = year_span(start, end)
    else:
        years = available_years(tensor, start, end)
        if not years:
            raise JcmapError(f"no data years within {start}..{end}")
    ab, ba = pair_series(tensor, a, b, years, window=config.window, share=config.share)
    notes = []
    if len(years) < config.window:
        notes.append(f"only {len(years)} years in range; no full {config.window}-year window")
    result = TrendResult(config, years, ab, ba, notes)
    out = Path(config.out)
    if "csv" in config.formats:
        _write(out, "trend.csv", format_trend_csv(ab, ba))
    if "json" in config.formats:
        _write(out, "trend.json", dumps_report(result.to_dict()))
    if "svg" in config.formats:
        _write(out, "trend.svg", emit_trend_svg(ab, ba))
    return result
