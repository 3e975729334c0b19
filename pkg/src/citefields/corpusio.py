"""Reader and writer for the tagged publication record format.

One record per blank-line-separated block. Line tags:

    #*      title
    #@      comma-separated author list
    #t      publication year
    #c      venue (optional)
    #f      field label(s); repeated lines and comma-separated lists both accepted
    #k      comma-separated keywords
    #index  unique integer paper id
    #%      one cited paper id per line (repeated)
    #!      abstract (optional)

Lines starting with ``%%`` are treated as file comments and skipped (the
synthetic generator uses them to pin its RNG version in the output header).

The reader streams: it never holds more than one block of input, so memory
scales with the parsed records rather than the file size. Diagnostics carry
line numbers and the 1-based record ordinal. In strict mode the first
error-severity diagnostic aborts via ``ParseError``; in lenient mode the
offending record is skipped (or the offending label dropped) and counted.
"""

from __future__ import annotations

import io
import logging
from dataclasses import dataclass, field
from pathlib import Path
from typing import IO, Iterable, Iterator

from .errors import ParseError
from .records import Corpus, PaperRecord
from .taxonomy import FieldTaxonomy

logger = logging.getLogger(__name__)

STRICT = "strict"
LENIENT = "lenient"

ERROR = "error"
WARNING = "warning"

COMMENT_PREFIX = "%%"

_SANE_YEARS = (1900, 2100)


@dataclass(frozen=True)
class Diagnostic:
    line: int
    record: int
    severity: str
    code: str
    message: str

    def __str__(self) -> str:
        return f"line {self.line}, record {self.record}: [{self.severity}] {self.code}: {self.message}"


@dataclass
class ParseReport:
    blocks: int = 0
    parsed: int = 0
    skipped: int = 0
    diagnostics: list[Diagnostic] = field(default_factory=list)

    def errors(self) -> list[Diagnostic]:
        return [d for d in self.diagnostics if d.severity == ERROR]

    def warnings(self) -> list[Diagnostic]:
        return [d for d in self.diagnostics if d.severity == WARNING]

    def summary(self) -> str:
        return (
            f"{self.parsed} parsed, {self.skipped} skipped of {self.blocks} blocks; "
            f"{len(self.errors())} errors, {len(self.warnings())} warnings"
        )


def normalize_keyword(raw: str) -> str:
    """Trim, collapse internal whitespace, case-fold for set membership."""
    return " ".join(raw.split()).casefold()


def _as_lines(source: str | bytes | IO) -> Iterator[str]:
    if isinstance(source, bytes):
        source = source.decode("utf-8")
    if isinstance(source, str):
        return iter(io.StringIO(source))
    # File-like: wrap binary streams, iterate text streams directly.
    first = getattr(source, "read", None)
    if first is None:
        return iter(source)  # already an iterable of lines
    mode = getattr(source, "mode", "")
    if "b" in mode or isinstance(source, (io.RawIOBase, io.BufferedIOBase)):
        return iter(io.TextIOWrapper(source, encoding="utf-8"))
    return iter(source)


def _iter_blocks(lines: Iterable[str]) -> Iterator[tuple[int, list[tuple[int, str]]]]:
    """Yield (first_line_number, [(line_number, line), ...]) per non-blank run."""
    block: list[tuple[int, str]] = []
    start = 0
    for lineno, raw in enumerate(lines, start=1):
        line = raw.rstrip("\n").rstrip("\r")
        if line.startswith(COMMENT_PREFIX):
            continue
        if not line.strip():
            if block:
                yield start, block
                block = []
            continue
        if not block:
            start = lineno
        block.append((lineno, line))
    if block:
        yield start, block


class _BlockData:
    """Raw tag contents of one block before validation."""

    __slots__ = (
        "title", "title_line", "authors", "year_raw", "year_line", "venue",
        "field_labels", "fields_seen", "keywords", "index_raw", "index_line",
        "refs", "abstract",
    )

    def __init__(self):
        self.title: str | None = None
        self.title_line = 0
        self.authors: tuple[str, ...] | None = None
        self.year_raw: str | None = None
        self.year_line = 0
        self.venue: str | None = None
        self.field_labels: list[tuple[int, str]] = []  # (line, label)
        self.fields_seen = False
        self.keywords: set[str] = set()
        self.index_raw: str | None = None
        self.index_line = 0
        self.refs: list[tuple[int, str]] = []  # (line, raw id)
        self.abstract: str | None = None


def _scan_block(block: list[tuple[int, str]], diag) -> _BlockData:
    data = _BlockData()
    for lineno, line in block:
        if line.startswith("#index"):
            if data.index_raw is not None:
                diag(lineno, WARNING, "duplicate-tag", "extra #index ignored")
            else:
                data.index_raw = line[6:].strip()
                data.index_line = lineno
        elif line.startswith("#*"):
            if data.title is not None:
                diag(lineno, WARNING, "duplicate-tag", "extra #* ignored")
            else:
                data.title = line[2:].strip()
                data.title_line = lineno
        elif line.startswith("#@"):
            if data.authors is not None:
                diag(lineno, WARNING, "duplicate-tag", "extra #@ ignored")
            else:
                names = (name.strip() for name in line[2:].split(","))
                data.authors = tuple(n for n in names if n)
        elif line.startswith("#t"):
            if data.year_raw is not None:
                diag(lineno, WARNING, "duplicate-tag", "extra #t ignored")
            else:
                data.year_raw = line[2:].strip()
                data.year_line = lineno
        elif line.startswith("#c"):
            if data.venue is not None:
                diag(lineno, WARNING, "duplicate-tag", "extra #c ignored")
            else:
                data.venue = line[2:].strip()
        elif line.startswith("#f"):
            data.fields_seen = True
            for label in line[2:].split(","):
                label = label.strip()
                if label:
                    data.field_labels.append((lineno, label))
        elif line.startswith("#k"):
            for kw in line[2:].split(","):
                kw = normalize_keyword(kw)
                if kw:
                    data.keywords.add(kw)
        elif line.startswith("#%"):
            data.refs.append((lineno, line[2:].strip()))
        elif line.startswith("#!"):
            if data.abstract is not None:
                diag(lineno, WARNING, "duplicate-tag", "extra #! ignored")
            else:
                data.abstract = line[2:].strip()
        else:
            diag(lineno, WARNING, "unknown-line", f"unrecognized line ignored: {line[:40]!r}")
    return data


def parse_corpus(
    source: str | bytes | IO,
    taxonomy: FieldTaxonomy | None = None,
    strictness: str = LENIENT,
    year_range: tuple[int, int] = _SANE_YEARS,
) -> tuple[Corpus, ParseReport]:
    """Parse the tagged record format into a validated Corpus.

    Returns ``(corpus, report)``. Error-severity problems (missing or
    malformed #index, duplicate id, bad year, no usable field label) skip
    the record in lenient mode and raise ``ParseError`` in strict mode.
    Repairable problems (duplicate or self references, unknown lines,
    repeated single-value tags) are warnings in both modes.
    """
    if strictness not in (STRICT, LENIENT):
        raise ValueError(f"strictness must be {STRICT!r} or {LENIENT!r}")
    taxonomy = taxonomy or FieldTaxonomy.default()
    report = ParseReport()
    records: list[PaperRecord] = []
    seen_ids: set[int] = set()
    ordinal = 0

    def emit(lineno: int, severity: str, code: str, message: str) -> None:
        d = Diagnostic(lineno, ordinal, severity, code, message)
        report.diagnostics.append(d)
        if strictness == STRICT and severity == ERROR:
            raise ParseError(d)

    for first_line, block in _iter_blocks(_as_lines(source)):
        ordinal += 1
        report.blocks += 1
        data = _scan_block(block, emit)

        # Identity first: later diagnostics hang off the record's own lines.
        if data.index_raw is None:
            emit(first_line, ERROR, "missing-index", "record has no #index line")
            report.skipped += 1
            continue
        try:
            pid = int(data.index_raw)
            if pid < 0:
                raise ValueError
        except ValueError:
            emit(data.index_line, ERROR, "malformed-index",
                 f"bad paper id {data.index_raw!r}")
            report.skipped += 1
            continue
        if pid in seen_ids:
            emit(data.index_line, ERROR, "duplicate-id", f"paper id {pid} already seen")
            report.skipped += 1
            continue

        year_line = data.year_line or first_line
        try:
            year = int(data.year_raw) if data.year_raw is not None else None
        except ValueError:
            year = None
        if year is None or not (year_range[0] <= year <= year_range[1]):
            emit(year_line, ERROR, "malformed-year",
                 f"missing or out-of-range year {data.year_raw!r}")
            report.skipped += 1
            continue

        if not data.fields_seen:
            emit(first_line, ERROR, "missing-fields", "record has no #f line")
            report.skipped += 1
            continue
        field_indices: list[int] = []
        unknown = False
        for lineno, label in data.field_labels:
            idx = taxonomy.get(label)
            if idx is None:
                severity = ERROR if strictness == STRICT else WARNING
                emit(lineno, severity, "unknown-field",
                     f"field label {label!r} not in taxonomy, dropped")
                unknown = True
            elif idx in field_indices:
                emit(lineno, WARNING, "duplicate-field-label",
                     f"field {label!r} tagged twice")
            else:
                field_indices.append(idx)
        if not field_indices:
            code = "no-valid-fields" if unknown else "missing-fields"
            emit(first_line, ERROR, code, "record has no usable field label")
            report.skipped += 1
            continue

        refs: list[int] = []
        ref_seen: set[int] = set()
        for lineno, raw in data.refs:
            try:
                rid = int(raw)
                if rid < 0:
                    raise ValueError
            except ValueError:
                emit(lineno, WARNING, "malformed-reference",
                     f"bad reference id {raw!r}, dropped")
                continue
            if rid == pid:
                emit(lineno, WARNING, "self-reference",
                     f"paper {pid} references itself, dropped")
                continue
            if rid in ref_seen:
                emit(lineno, WARNING, "duplicate-reference",
                     f"reference {rid} repeated, deduplicated")
                continue
            ref_seen.add(rid)
            refs.append(rid)

        seen_ids.add(pid)
        records.append(
            PaperRecord(
                id=pid,
                title=data.title or "",
                authors=data.authors or (),
                year=year,
                venue=data.venue or None,
                fields=frozenset(field_indices),
                keywords=frozenset(data.keywords),
                references=tuple(refs),
                abstract=data.abstract or None,
            )
        )
        report.parsed += 1

    corpus = Corpus(records, taxonomy, _validate=False)
    logger.debug("parse_corpus: %s", report.summary())
    return corpus, report


def serialize_record(rec: PaperRecord, taxonomy: FieldTaxonomy) -> str:
    """Canonical serialized form: field labels ordered by taxonomy index,
    keywords sorted, optional empty tags omitted, reference order preserved."""
    lines = [f"#*{rec.title}"]
    if rec.authors:
        lines.append("#@" + ",".join(rec.authors))
    lines.append(f"#t{rec.year}")
    if rec.venue:
        lines.append(f"#c{rec.venue}")
    lines.append("#f" + ",".join(taxonomy.name(f) for f in sorted(rec.fields)))
    if rec.keywords:
        lines.append("#k" + ",".join(sorted(rec.keywords)))
    lines.append(f"#index{rec.id}")
    for rid in rec.references:
        lines.append(f"#%{rid}")
    if rec.abstract:
        lines.append(f"#!{rec.abstract}")
    return "\n".join(lines) + "\n"


def serialize_corpus(corpus: Corpus) -> str:
    """Records ascending by id, blank-line separated. Re-parses to an equal Corpus."""
    chunks = [serialize_record(corpus[pid], corpus.taxonomy) for pid in corpus]
    return "\n".join(chunks)


def write_corpus(corpus: Corpus, path: str | Path) -> None:
    Path(path).write_text(serialize_corpus(corpus), encoding="utf-8")
