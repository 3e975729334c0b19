"""Field life-trajectory indicators: per-year cross/same citation ratios,
partner-field rankings, co-tagging growth, evidence series, and heuristic
three-phase labeling.

Two ratio series drive the phase labeling:

* tau: cross-field over same-field references emitted by a field's papers,
  indexed by the citing paper's publication year. A reference is same-field
  when the cited paper shares at least one field tag with the citing paper.
* zeta: cross-field over same-field citations received by a field's papers,
  indexed by the citing paper's publication year (citations from outside
  arrive over time); cited-year indexing is available behind a flag. Here
  same-field means the citing paper carries the focal field tag.

Both are pooled ratios (sum over the year's papers / sum), which avoids
division by zero on individual papers; a per-paper-mean variant of tau
exists for comparison.

Phase labeling fits two-segment piecewise-constant models to each series:
a level drop in tau ends the growing phase; a later level rise in zeta
starts the interdisciplinary phase; matured spans the gap. Because the
series are ratios (heavy-tailed when yearly counts are small), the split
is selected on log-transformed values with a scale-relative floor; this
keeps the fit robust to single-year spikes and makes the change-points
invariant to uniform positive scaling. The change-point year is the last
year of the preceding regime. This is a heuristic operationalization; the
fitted segment means (raw scale) ride along so callers can judge the fit.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from math import fsum, log

from .errors import AnalysisError
from .graph import CitationGraph
from .records import Corpus, TimeWindow
from .report import MetricReport, base_metadata

POOLED = "pooled"
PER_PAPER = "per-paper"

CITING_YEAR = "citing"
CITED_YEAR = "cited"

GROWING = "growing"
MATURED = "matured"
INTERDISCIPLINARY = "interdisciplinary"


@dataclass(frozen=True)
class Phase:
    label: str
    start: int
    end: int
    segment_mean: float


@dataclass(frozen=True)
class PhaseParams:
    min_years: int = 10
    # Fraction of the flat fit's squared error (log scale) a split must
    # remove to count as a real level change.
    min_gain_fraction: float = 0.5


@dataclass
class PhaseDetection:
    phases: list[Phase]
    tau_change_year: int | None
    zeta_change_year: int | None
    diagnostics: list[str] = field(default_factory=list)


@dataclass
class FieldTrajectory:
    field: int
    years: tuple[int, ...]
    tau: tuple[float | None, ...]
    zeta: tuple[float | None, ...]
    top_referred: tuple[tuple[int, float], ...] = ()
    top_citing: tuple[tuple[int, float], ...] = ()
    phases: tuple[Phase, ...] = ()


def _default_years(corpus: Corpus) -> list[int]:
    return corpus.years()


def tau_series(
    graph: CitationGraph,
    corpus: Corpus,
    focal: int,
    years: list[int] | None = None,
    mode: str = POOLED,
) -> dict[int, float | None]:
    """Per-year cross/same reference ratio of a field's papers.

    None for years where the denominator (same-field references) is zero.
    """
    if mode not in (POOLED, PER_PAPER):
        raise ValueError(f"unknown tau mode {mode!r}")
    years = years if years is not None else _default_years(corpus)
    field_ids = corpus.field_papers(focal)
    out: dict[int, float | None] = {}
    for y in years:
        pooled_cross = pooled_same = 0
        ratios: list[float] = []
        for pid in sorted(corpus.by_year.get(y, frozenset()) & field_ids):
            rec = corpus[pid]
            cross = same = 0
            for rid in graph.out_edges.get(pid, ()):
                cited = corpus.resolve(rid)
                if cited.fields & rec.fields:
                    same += 1
                else:
                    cross += 1
            pooled_cross += cross
            pooled_same += same
            if same:
                ratios.append(cross / same)
        if mode == POOLED:
            out[y] = pooled_cross / pooled_same if pooled_same else None
        else:
            out[y] = fsum(ratios) / len(ratios) if ratios else None
    return out


def zeta_series(
    graph: CitationGraph,
    corpus: Corpus,
    focal: int,
    years: list[int] | None = None,
    index_by: str = CITING_YEAR,
) -> dict[int, float | None]:
    """Per-year cross/same citation ratio into a field's papers.

    Same-field citations come from papers carrying the focal tag; the rest
    are cross-field. None where no same-field citations land in the year.
    """
    if index_by not in (CITING_YEAR, CITED_YEAR):
        raise ValueError(f"unknown zeta indexing {index_by!r}")
    years = years if years is not None else _default_years(corpus)
    wanted = set(years)
    cross: dict[int, int] = {y: 0 for y in years}
    same: dict[int, int] = {y: 0 for y in years}
    for pid in sorted(corpus.field_papers(focal)):
        cited = corpus[pid]
        for q in graph.in_edges.get(pid, ()):
            citer = corpus.resolve(q)
            y = citer.year if index_by == CITING_YEAR else cited.year
            if y not in wanted:
                continue
            if focal in citer.fields:
                same[y] += 1
            else:
                cross[y] += 1
    return {y: (cross[y] / same[y] if same[y] else None) for y in years}


def top_partner_fields(
    graph: CitationGraph,
    corpus: Corpus,
    focal: int,
    window: TimeWindow | None = None,
    direction: str = "referred",
    k: int = 5,
) -> list[tuple[int, float]]:
    """Fields the focal field most cites (``referred``) or is cited by (``citing``).

    For ``referred`` the window selects the focal papers by publication
    year; for ``citing`` it selects the citing papers. The focal field
    itself is excluded; ties rank by field index; fewer than k partners
    yields a shorter list. Counts follow the graph's multiplicity rule.
    """
    if direction not in ("referred", "citing"):
        raise ValueError(f"unknown direction {direction!r}")
    volume: dict[int, float] = {}

    def bump(fields: frozenset[int]) -> None:
        inc = 1.0 if graph.multiplicity == "full" else 1.0 / len(fields)
        for f in sorted(fields):
            volume[f] = volume.get(f, 0.0) + inc

    if direction == "referred":
        for pid in corpus.papers_in(field=focal, window=window):
            for rid in graph.out_edges.get(pid, ()):
                bump(corpus.resolve(rid).fields)
    else:
        for pid in sorted(corpus.field_papers(focal)):
            for q in graph.in_edges.get(pid, ()):
                citer = corpus.resolve(q)
                if window is None or window.contains(citer.year):
                    bump(citer.fields)
    volume.pop(focal, None)
    ranked = sorted(volume, key=lambda f: (-volume[f], f))
    return [(f, volume[f]) for f in ranked[:k]]


@dataclass(frozen=True)
class CotagPoint:
    window: TimeWindow
    count: int
    base: int
    probability: float


def cotag_series(
    corpus: Corpus,
    field_a: int,
    field_b: int,
    windows: list[TimeWindow],
) -> list[CotagPoint]:
    """Per-window co-tagging volume and P(tagged B | multi-tagged and tagged A)."""
    points = []
    for window in windows:
        count = base = 0
        for pid in corpus.papers_in(field=field_a, window=window):
            rec = corpus[pid]
            if len(rec.fields) < 2:
                continue
            base += 1
            if field_b in rec.fields:
                count += 1
        points.append(CotagPoint(window, count, base, count / base if base else 0.0))
    return points


def cotag_report(
    corpus: Corpus,
    field_a: int,
    field_b: int,
    windows: list[TimeWindow],
) -> MetricReport:
    """Co-tagging series with window-over-window percentage change of the count."""
    taxonomy = corpus.taxonomy
    report = MetricReport(
        name="cotag",
        columns=(
            "window_start", "window_end", "field_a", "field_b",
            "cotag_count", "multi_tagged_a", "probability", "count_change_pct",
        ),
        metadata=base_metadata(
            "cotag", field_a=taxonomy.abbr(field_a), field_b=taxonomy.abbr(field_b)
        ),
    )
    prev: int | None = None
    for point in cotag_series(corpus, field_a, field_b, windows):
        change = None
        if prev is not None and prev > 0:
            change = (point.count - prev) / prev * 100.0
        report.add_row(
            point.window.start, point.window.end,
            taxonomy.abbr(field_a), taxonomy.abbr(field_b),
            point.count, point.base, point.probability, change,
        )
        prev = point.count
    return report


def evidence_series(
    graph: CitationGraph,
    corpus: Corpus,
    years: list[int] | None = None,
) -> MetricReport:
    """Per-year corpus-wide indicators of cross-field activity.

    Columns: fraction of multi-field papers; mean distinct fields among a
    paper's resolved references (papers with at least one); pooled
    cross/same reference ratio over all papers; mean team size; mean
    breadth of the authors' cumulative publication fields. An author's
    expertise at year y is the set of fields of their corpus papers
    published up to and including y.
    """
    years = years if years is not None else _default_years(corpus)
    history: dict[str, list[tuple[int, frozenset[int]]]] = {}
    for pid in corpus:
        rec = corpus[pid]
        for author in rec.authors:
            key = author.strip().casefold()
            history.setdefault(key, []).append((rec.year, rec.fields))
    for entries in history.values():
        entries.sort(key=lambda e: e[0])

    report = MetricReport(
        name="evidence",
        columns=(
            "year", "papers", "multi_field_fraction", "mean_fields_cited",
            "tau", "mean_team_size", "mean_author_field_breadth",
        ),
        metadata=base_metadata("evidence"),
    )
    for y in years:
        ids = sorted(corpus.by_year.get(y, frozenset()))
        if not ids:
            report.add_row(y, 0, None, None, None, None, None)
            continue
        multi = 0
        fields_cited: list[int] = []
        cross = same = 0
        team_sizes: list[int] = []
        breadths: list[int] = []
        for pid in ids:
            rec = corpus[pid]
            if len(rec.fields) > 1:
                multi += 1
            team_sizes.append(len(rec.authors))
            cited_fields: set[int] = set()
            for rid in graph.out_edges.get(pid, ()):
                cited = corpus.resolve(rid)
                cited_fields |= cited.fields
                if cited.fields & rec.fields:
                    same += 1
                else:
                    cross += 1
            if graph.out_edges.get(pid, ()):
                fields_cited.append(len(cited_fields))
            expertise: set[int] = set()
            for author in rec.authors:
                for year_a, fields_a in history[author.strip().casefold()]:
                    if year_a > y:
                        break
                    expertise |= fields_a
            if rec.authors:
                breadths.append(len(expertise))
        report.add_row(
            y,
            len(ids),
            multi / len(ids),
            fsum(fields_cited) / len(fields_cited) if fields_cited else None,
            cross / same if same else None,
            fsum(team_sizes) / len(team_sizes),
            fsum(breadths) / len(breadths) if breadths else None,
        )
    return report


def field_trajectory(
    graph: CitationGraph,
    corpus: Corpus,
    focal: int,
    years: list[int] | None = None,
) -> FieldTrajectory:
    """Assemble the tau/zeta series for one field.

    Default year span: from the field's first paper to the corpus's last
    year (incoming citations keep arriving after the field's last paper).
    """
    if years is None:
        member_years = [corpus[pid].year for pid in corpus.field_papers(focal)]
        if not member_years:
            raise AnalysisError("field has no papers")
        years = list(range(min(member_years), corpus.years()[-1] + 1))
    tau = tau_series(graph, corpus, focal, years)
    zeta = zeta_series(graph, corpus, focal, years)
    return FieldTrajectory(
        field=focal,
        years=tuple(years),
        tau=tuple(tau[y] for y in years),
        zeta=tuple(zeta[y] for y in years),
    )


def _two_segment_split(
    points: list[tuple[int, float]], direction: str, min_gain_fraction: float
) -> tuple[int, float, float] | None:
    """Best two-segment piecewise-constant least-squares fit with a
    directional level change.

    Returns (year of last point in the first segment, left mean, right mean)
    or None when no split with the required direction removes enough of the
    flat fit's squared error. Both segments must be non-empty; SSE ties go
    to the earliest split.
    """
    n = len(points)
    if n < 2:
        return None
    values = [v for _, v in points]
    prefix = [0.0]
    prefix_sq = [0.0]
    for v in values:
        prefix.append(prefix[-1] + v)
        prefix_sq.append(prefix_sq[-1] + v * v)

    def sse(lo: int, hi: int) -> float:  # half-open [lo, hi)
        m = hi - lo
        s = prefix[hi] - prefix[lo]
        sq = prefix_sq[hi] - prefix_sq[lo]
        return sq - s * s / m

    flat = sse(0, n)
    best: tuple[float, int] | None = None
    for k in range(1, n):
        left_mean = prefix[k] / k
        right_mean = (prefix[n] - prefix[k]) / (n - k)
        if direction == "drop" and not left_mean > right_mean:
            continue
        if direction == "rise" and not left_mean < right_mean:
            continue
        total = sse(0, k) + sse(k, n)
        if best is None or total < best[0]:
            best = (total, k)
    if best is None:
        return None
    if flat <= 0.0 or (flat - best[0]) < min_gain_fraction * flat:
        return None
    k = best[1]
    return points[k - 1][0], prefix[k] / k, (prefix[n] - prefix[k]) / (n - k)


def _ratio_level_split(
    points: list[tuple[int, float]], direction: str, min_gain_fraction: float
) -> tuple[int, float, float] | None:
    """Two-segment fit for non-negative ratio series, selected on log scale.

    Ratios vary multiplicatively and spike when yearly counts are small, so
    the split is chosen on log(value) with zeros floored at max/1000 (the
    floor scales with the series, keeping the selection invariant to uniform
    positive scaling). Reported segment means are on the raw scale.
    """
    if len(points) < 2:
        return None
    top = max(v for _, v in points)
    if top <= 0.0:
        return None  # constant-zero series has no level change
    floor = top * 1e-3
    transformed = [(y, log(max(v, floor))) for y, v in points]
    split = _two_segment_split(transformed, direction, min_gain_fraction)
    if split is None:
        return None
    cp_year = split[0]
    k = next(i for i, (y, _) in enumerate(points) if y == cp_year) + 1
    left = [v for _, v in points[:k]]
    right = [v for _, v in points[k:]]
    return cp_year, fsum(left) / len(left), fsum(right) / len(right)


def detect_phases(
    trajectory: FieldTrajectory,
    params: PhaseParams | None = None,
) -> PhaseDetection:
    """Label the growing / matured / interdisciplinary spans of a trajectory.

    Growing runs from the series start through tau's drop change-point;
    the interdisciplinary phase starts after zeta's rise change-point,
    which must come after tau's (otherwise it is not emitted, with a
    diagnostic); matured covers whatever remains. Flat series produce a
    single matured phase. Uniform positive scaling of either series leaves
    the labeling unchanged.
    """
    params = params or PhaseParams()
    tau_points = [
        (y, v) for y, v in zip(trajectory.years, trajectory.tau) if v is not None
    ]
    if len(tau_points) < params.min_years:
        raise AnalysisError(
            f"need at least {params.min_years} years with a defined reference "
            f"ratio, got {len(tau_points)}"
        )
    zeta_points = [
        (y, v) for y, v in zip(trajectory.years, trajectory.zeta) if v is not None
    ]
    span_start = trajectory.years[0]
    span_end = trajectory.years[-1]
    diagnostics: list[str] = []
    phases: list[Phase] = []

    tau_fit = _ratio_level_split(tau_points, "drop", params.min_gain_fraction)
    zeta_fit = _ratio_level_split(zeta_points, "rise", params.min_gain_fraction)

    tau_cp = zeta_cp = None
    if tau_fit is None:
        diagnostics.append("no level drop in the reference ratio; whole span labeled matured")
        tau_values = [v for _, v in tau_points]
        phases.append(Phase(MATURED, span_start, span_end, fsum(tau_values) / len(tau_values)))
        return PhaseDetection(phases, None, None, diagnostics)

    tau_cp, tau_high, tau_low = tau_fit
    phases.append(Phase(GROWING, span_start, tau_cp, tau_high))
    if zeta_fit is not None:
        zeta_cp, _, zeta_high = zeta_fit
        if zeta_cp > tau_cp:
            phases.append(Phase(MATURED, tau_cp + 1, zeta_cp, tau_low))
            phases.append(Phase(INTERDISCIPLINARY, zeta_cp + 1, span_end, zeta_high))
            return PhaseDetection(phases, tau_cp, zeta_cp, diagnostics)
        diagnostics.append(
            "incoming-citation rise precedes the reference-ratio drop; "
            "no interdisciplinary phase emitted"
        )
        zeta_cp = None
    phases.append(Phase(MATURED, tau_cp + 1, span_end, tau_low))
    return PhaseDetection(phases, tau_cp, zeta_cp, diagnostics)


def trajectory_report(trajectory: FieldTrajectory, taxonomy) -> MetricReport:
    report = MetricReport(
        name="trajectory",
        columns=("field", "year", "tau", "zeta"),
        metadata=base_metadata("trajectory", field=taxonomy.abbr(trajectory.field)),
    )
    for y, t, z in zip(trajectory.years, trajectory.tau, trajectory.zeta):
        report.add_row(taxonomy.abbr(trajectory.field), y, t, z)
    return report


def phases_report(
    trajectory: FieldTrajectory, detection: PhaseDetection, taxonomy
) -> MetricReport:
    report = MetricReport(
        name="phases",
        columns=("field", "phase", "start", "end", "segment_mean"),
        metadata=base_metadata(
            "phases",
            field=taxonomy.abbr(trajectory.field),
            tau_change_year=detection.tau_change_year,
            zeta_change_year=detection.zeta_change_year,
            diagnostics="; ".join(detection.diagnostics),
        ),
    )
    for phase in detection.phases:
        report.add_row(
            taxonomy.abbr(trajectory.field), phase.label,
            phase.start, phase.end, phase.segment_mean,
        )
    return report
