"""Immutable corpus model: paper records, time windows, field/year partitions.

A ``Corpus`` is built once (by the parser or programmatically) and is then
read-only; every analysis in the package treats it as shared immutable state,
so concurrent readers need no locking. Window filtering produces a view that
restricts the paper population while keeping the parent corpus visible for
reference resolution (citations may legitimately cross window boundaries).
"""

from __future__ import annotations

from dataclasses import dataclass
from math import fsum
from typing import Iterable, Iterator

from .errors import AnalysisError
from .report import MetricReport, base_metadata
from .taxonomy import FieldTaxonomy


@dataclass(frozen=True, slots=True)
class TimeWindow:
    """Inclusive [start, end] range of publication years."""

    start: int
    end: int

    def __post_init__(self):
        if self.start > self.end:
            raise ValueError(f"window start {self.start} > end {self.end}")

    def contains(self, year: int) -> bool:
        return self.start <= year <= self.end

    @classmethod
    def parse(cls, text: str) -> "TimeWindow":
        """Parse the CLI form ``START:END``."""
        try:
            start_s, end_s = text.split(":")
            return cls(int(start_s), int(end_s))
        except ValueError as exc:
            raise ValueError(f"bad window {text!r}, expected START:END") from exc

    def __str__(self) -> str:
        return f"{self.start}:{self.end}"


@dataclass(frozen=True, slots=True)
class PaperRecord:
    """One publication. Field membership is stored as taxonomy indices."""

    id: int
    title: str
    authors: tuple[str, ...]
    year: int
    venue: str | None
    fields: frozenset[int]
    keywords: frozenset[str]
    references: tuple[int, ...]
    abstract: str | None

    def first_author_key(self) -> str | None:
        """Normalized first-author identity (trimmed, case-insensitive)."""
        if not self.authors:
            return None
        return self.authors[0].strip().casefold()


class Corpus:
    """Id-indexed record collection with per-field and per-year partitions."""

    __slots__ = ("records", "taxonomy", "by_field", "by_year", "base")

    def __init__(
        self,
        records: Iterable[PaperRecord],
        taxonomy: FieldTaxonomy,
        base: "Corpus | None" = None,
        _validate: bool = True,
    ):
        ordered = sorted(records, key=lambda r: r.id)
        self.records: dict[int, PaperRecord] = {}
        self.taxonomy = taxonomy
        self.base = base
        n_fields = len(taxonomy)
        by_field: dict[int, set[int]] = {}
        by_year: dict[int, set[int]] = {}
        for rec in ordered:
            if _validate:
                if rec.id < 0:
                    raise ValueError(f"paper id {rec.id} is negative")
                if rec.id in self.records:
                    raise ValueError(f"duplicate paper id {rec.id}")
                if not rec.fields:
                    raise ValueError(f"paper {rec.id} has no fields")
                if any(f < 0 or f >= n_fields for f in rec.fields):
                    raise ValueError(f"paper {rec.id} has field index outside taxonomy")
                if len(set(rec.references)) != len(rec.references):
                    raise ValueError(f"paper {rec.id} has duplicate references")
                if rec.id in rec.references:
                    raise ValueError(f"paper {rec.id} references itself")
            self.records[rec.id] = rec
            for f in rec.fields:
                by_field.setdefault(f, set()).add(rec.id)
            by_year.setdefault(rec.year, set()).add(rec.id)
        self.by_field = {f: frozenset(ids) for f, ids in by_field.items()}
        self.by_year = {y: frozenset(ids) for y, ids in by_year.items()}

    # -- lookups ---------------------------------------------------------

    def __len__(self) -> int:
        return len(self.records)

    def __contains__(self, pid: int) -> bool:
        return pid in self.records

    def __getitem__(self, pid: int) -> PaperRecord:
        return self.records[pid]

    def __iter__(self) -> Iterator[int]:
        """Paper ids in ascending order."""
        return iter(self.records)

    def resolve(self, pid: int) -> PaperRecord | None:
        """Look a cited id up in the resolution pool (the base corpus for views)."""
        pool = self.base if self.base is not None else self
        return pool.records.get(pid)

    @property
    def is_view(self) -> bool:
        return self.base is not None

    def field_papers(self, field: int) -> frozenset[int]:
        return self.by_field.get(field, frozenset())

    def papers_in(self, field: int | None = None, window: TimeWindow | None = None) -> list[int]:
        """Ascending ids filtered by field membership and/or publication window."""
        if field is not None:
            members = self.by_field.get(field, frozenset())
            ids: Iterable[int] = sorted(members)
        else:
            ids = self.records
        if window is None:
            return list(ids)
        return [pid for pid in ids if window.contains(self.records[pid].year)]

    def years(self) -> list[int]:
        return sorted(self.by_year)

    def filter_window(self, window: TimeWindow) -> "Corpus":
        """Read-only view restricted to papers published inside the window."""
        kept = (rec for rec in self.records.values() if window.contains(rec.year))
        return Corpus(kept, self.taxonomy, base=self.base if self.base is not None else self,
                      _validate=False)

    def __eq__(self, other) -> bool:
        return (
            isinstance(other, Corpus)
            and self.taxonomy == other.taxonomy
            and self.records == other.records
        )

    def __repr__(self) -> str:
        kind = "view" if self.is_view else "corpus"
        return f"Corpus({len(self.records)} records, {kind})"


def filter_window(corpus: Corpus, window: TimeWindow) -> Corpus:
    return corpus.filter_window(window)


def corpus_stats(corpus: Corpus) -> MetricReport:
    """Per-field paper counts plus corpus-wide totals.

    Raises on an empty corpus: there is nothing to report.
    """
    if len(corpus) == 0:
        raise AnalysisError("corpus is empty, no stats to report")
    n = len(corpus)
    multi = sum(1 for rec in corpus.records.values() if len(rec.fields) > 1)
    years = corpus.years()
    mean_refs = fsum(len(rec.references) for rec in corpus.records.values()) / n
    mean_kw = fsum(len(rec.keywords) for rec in corpus.records.values()) / n
    report = MetricReport(
        name="corpus-stats",
        columns=("field_abbr", "papers", "share"),
        metadata=base_metadata(
            "corpus-stats",
            records=n,
            multi_field_fraction=multi / n,
            year_min=years[0],
            year_max=years[-1],
            mean_references=mean_refs,
            mean_keywords=mean_kw,
        ),
    )
    for f in corpus.taxonomy.indices:
        count = len(corpus.by_field.get(f, frozenset()))
        report.add_row(corpus.taxonomy.abbr(f), count, count / n)
    return report
