"""Directed citation graph with forward/inverted adjacency and field-level flow.

Construction is a single pass; the finished graph is immutable and safe for
any number of concurrent readers. Reference ids that do not resolve against
the corpus (papers outside the crawl) are counted per paper and excluded
from edges and from all field-flow totals.

Multi-field cited papers are counted under a configurable multiplicity rule:

* ``full``        a reference to a k-field paper increments each of the k
                  fields by 1 (so per-field counts can sum past the number
                  of references);
* ``fractional``  each of the k fields gets 1/k.
"""

from __future__ import annotations

import logging
from dataclasses import dataclass

import numpy as np

from .errors import AnalysisError
from .records import Corpus
from .report import MetricReport, base_metadata
from .taxonomy import FieldTaxonomy

logger = logging.getLogger(__name__)

FULL_COUNT = "full"
FRACTIONAL = "fractional"


@dataclass
class CitationGraph:
    out_edges: dict[int, tuple[int, ...]]
    in_edges: dict[int, tuple[int, ...]]
    unresolved: dict[int, int]
    field_flow: np.ndarray
    multiplicity: str

    @property
    def total_edges(self) -> int:
        return sum(len(v) for v in self.out_edges.values())

    def references_of(self, pid: int) -> tuple[int, ...]:
        return self.out_edges.get(pid, ())

    def citers_of(self, pid: int) -> tuple[int, ...]:
        return self.in_edges.get(pid, ())


def field_ref_counts(
    corpus: Corpus, cited_ids: tuple[int, ...], multiplicity: str
) -> dict[int, float]:
    """Per-field counts of the given resolved cited ids under the multiplicity rule.

    Accumulation order is fixed (cited ids as given, fields ascending) so
    repeated runs are bit-identical even in fractional mode.
    """
    counts: dict[int, float] = {}
    for rid in cited_ids:
        rec = corpus.resolve(rid)
        if rec is None:
            continue
        fields = sorted(rec.fields)
        inc = 1.0 if multiplicity == FULL_COUNT else 1.0 / len(fields)
        for f in fields:
            counts[f] = counts.get(f, 0.0) + inc
    return counts


def build_graph(corpus: Corpus, multiplicity: str = FULL_COUNT) -> CitationGraph:
    """Resolve reference ids into a citation graph over the corpus's papers.

    Adjacency is deterministic: both out- and in-edge lists are ascending by
    id. For window views, cited papers outside the view still resolve through
    the view's base corpus.
    """
    if multiplicity not in (FULL_COUNT, FRACTIONAL):
        raise ValueError(f"unknown multiplicity rule {multiplicity!r}")
    n_fields = len(corpus.taxonomy)
    out_edges: dict[int, tuple[int, ...]] = {}
    in_lists: dict[int, list[int]] = {}
    unresolved: dict[int, int] = {}
    flow = np.zeros((n_fields, n_fields), dtype=np.float64)

    for pid in corpus:
        rec = corpus[pid]
        resolved: list[int] = []
        dangling = 0
        for rid in rec.references:
            if corpus.resolve(rid) is not None:
                resolved.append(rid)
            else:
                dangling += 1
        resolved.sort()
        out_edges[pid] = tuple(resolved)
        unresolved[pid] = dangling
        for rid in resolved:
            in_lists.setdefault(rid, []).append(pid)
        if resolved:
            counts = field_ref_counts(corpus, tuple(resolved), multiplicity)
            for i in sorted(rec.fields):
                for j in sorted(counts):
                    flow[i, j] += counts[j]

    in_edges = {pid: tuple(sorted(citers)) for pid, citers in sorted(in_lists.items())}
    graph = CitationGraph(out_edges, in_edges, unresolved, flow, multiplicity)
    logger.debug(
        "build_graph: %d papers, %d edges, %d dangling",
        len(out_edges), graph.total_edges, sum(unresolved.values()),
    )
    return graph


def per_paper_field_refs(
    graph: CitationGraph,
    corpus: Corpus,
    pid: int,
    multiplicity: str | None = None,
) -> tuple[dict[int, float], int]:
    """Per-field resolved reference counts of one paper, plus its resolved total.

    Only fields with nonzero counts appear. Defaults to the rule the graph
    was built with so flow-matrix cross-checks line up exactly.
    """
    if pid not in corpus:
        raise AnalysisError(f"unknown paper id {pid}")
    rule = multiplicity or graph.multiplicity
    cited = graph.out_edges.get(pid, ())
    return field_ref_counts(corpus, cited, rule), len(cited)


def citations_received(
    graph: CitationGraph,
    corpus: Corpus,
    pid: int,
    horizon_years: int | None = None,
    exclude_first_author_self: bool = False,
) -> tuple[int, ...]:
    """Citing ids of a paper, optionally horizon-limited and self-filtered.

    A horizon of h keeps citing papers published in the publication year or
    the h-1 following years. The self filter drops citers whose first author
    equals the cited paper's first author (trimmed, case-insensitive).
    """
    rec = corpus.resolve(pid)
    if rec is None:
        raise AnalysisError(f"unknown paper id {pid}")
    citers = graph.in_edges.get(pid, ())
    if horizon_years is not None:
        citers = tuple(
            q for q in citers
            if 0 <= corpus.resolve(q).year - rec.year <= horizon_years - 1
        )
    if exclude_first_author_self:
        key = rec.first_author_key()
        if key is not None:
            citers = tuple(
                q for q in citers if corpus.resolve(q).first_author_key() != key
            )
    return citers


def edge_list_report(graph: CitationGraph) -> MetricReport:
    """Resolved edges as `citing_id,cited_id` rows (ascending citing, then cited)."""
    report = MetricReport(
        name="edges",
        columns=("citing_id", "cited_id"),
        metadata=base_metadata("edges", edges=graph.total_edges),
    )
    for pid in sorted(graph.out_edges):
        for rid in graph.out_edges[pid]:
            report.add_row(pid, rid)
    return report


def field_flow_report(graph: CitationGraph, taxonomy: FieldTaxonomy) -> MetricReport:
    """Field-to-field resolved reference counts with abbreviation headers."""
    abbrs = [taxonomy.abbr(i) for i in taxonomy.indices]
    report = MetricReport(
        name="field-flow",
        columns=tuple(["field"] + abbrs),
        metadata=base_metadata("field-flow", multiplicity=graph.multiplicity),
    )
    for i in taxonomy.indices:
        report.add_row(abbrs[i], *(float(graph.field_flow[i, j]) for j in taxonomy.indices))
    return report
