"""Reader/writer tests: golden parse, diagnostics, strict/lenient, round-trip."""

import io

import pytest
from hypothesis import given, settings, strategies as st

from citefields import (
    Corpus, FieldTaxonomy, LENIENT, ParseError, STRICT,
    parse_corpus, serialize_corpus,
)
from conftest import GOLDEN_RECORD, corpus_of, rec


def test_golden_record_parses_to_exact_values(golden_text, taxonomy):
    corpus, report = parse_corpus(golden_text, taxonomy, strictness=STRICT)
    assert report.blocks == 1
    assert report.parsed == 1
    assert not report.diagnostics
    paper = corpus[134672]
    assert paper.year == 2007
    assert paper.venue == "DAC"
    assert paper.authors == ("Lei Cheng", "Deming Chen", "Martin D. F. Wong")
    assert paper.fields == frozenset({taxonomy.index_of("Computer Architecture")})
    assert len(paper.keywords) == 10
    assert len(paper.references) == 9
    assert paper.references[0] == 233644
    assert paper.abstract.startswith("In 90-nm technology")


def test_empty_input_gives_empty_corpus():
    corpus, report = parse_corpus("", strictness=STRICT)
    assert len(corpus) == 0
    assert report.blocks == 0
    assert report.parsed == 0
    assert not report.diagnostics


def test_blank_lines_only_input():
    corpus, report = parse_corpus("\n\n   \n\n")
    assert len(corpus) == 0
    assert report.blocks == 0


def _three_records(middle_index_line: str = "") -> str:
    blocks = []
    for i, extra in ((1, "#index1"), (2, middle_index_line), (3, "#index3")):
        lines = [f"#*Title {i}", "#@A One", "#t2001", "#fDatabases"]
        if extra:
            lines.append(extra)
        blocks.append("\n".join(lines))
    return "\n\n".join(blocks) + "\n"


def test_missing_index_lenient_skips_and_counts():
    corpus, report = parse_corpus(_three_records())
    assert report.blocks == 3
    assert report.parsed == 2
    assert report.skipped == 1
    assert len(corpus) == 2
    errors = report.errors()
    assert len(errors) == 1
    assert errors[0].code == "missing-index"
    assert errors[0].record == 2


def test_missing_index_strict_aborts():
    with pytest.raises(ParseError) as exc_info:
        parse_corpus(_three_records(), strictness=STRICT)
    assert exc_info.value.diagnostic.code == "missing-index"


def test_parsed_plus_skipped_equals_blocks():
    text = _three_records() + "\n\n#*Junk\n#t9999\n#fDatabases\n#index9\n"
    corpus, report = parse_corpus(text)
    assert report.parsed + report.skipped == report.blocks == 4


@pytest.mark.parametrize(
    "mutation, code",
    [
        ("#t20x7", "malformed-year"),
        ("#t1776", "malformed-year"),
        ("", "malformed-year"),  # no #t line at all
    ],
)
def test_year_problems(mutation, code):
    lines = ["#*T", "#fDatabases", "#index5"]
    if mutation:
        lines.insert(1, mutation)
    corpus, report = parse_corpus("\n".join(lines))
    assert len(corpus) == 0
    assert report.errors()[0].code == code


def test_custom_year_range():
    text = "#*T\n#t1776\n#fDatabases\n#index5\n"
    corpus, _ = parse_corpus(text, year_range=(1700, 2100))
    assert corpus[5].year == 1776


def test_duplicate_id_skips_later_record():
    text = "#*A\n#t2000\n#fDatabases\n#index7\n\n#*B\n#t2001\n#fDatabases\n#index7\n"
    corpus, report = parse_corpus(text)
    assert len(corpus) == 1
    assert corpus[7].title == "A"
    assert report.errors()[0].code == "duplicate-id"


def test_missing_field_line_lenient_skips_strict_aborts():
    text = "#*A\n#t2000\n#index7\n"
    corpus, report = parse_corpus(text)
    assert len(corpus) == 0
    assert report.errors()[0].code == "missing-fields"
    with pytest.raises(ParseError):
        parse_corpus(text, strictness=STRICT)


def test_unknown_field_lenient_drops_label_keeps_record():
    text = "#*A\n#t2000\n#fUnderwater Basket Weaving,Databases\n#index7\n"
    corpus, report = parse_corpus(text)
    assert len(corpus) == 1
    tax = FieldTaxonomy.default()
    assert corpus[7].fields == frozenset({tax.index_of("DB")})
    assert report.warnings()[0].code == "unknown-field"


def test_unknown_field_lenient_all_dropped_skips_record():
    text = "#*A\n#t2000\n#fUnderwater Basket Weaving\n#index7\n"
    corpus, report = parse_corpus(text)
    assert len(corpus) == 0
    assert report.errors()[0].code == "no-valid-fields"


def test_unknown_field_strict_aborts():
    text = "#*A\n#t2000\n#fUnderwater Basket Weaving,Databases\n#index7\n"
    with pytest.raises(ParseError) as exc_info:
        parse_corpus(text, strictness=STRICT)
    assert exc_info.value.diagnostic.code == "unknown-field"


def test_repeated_field_lines_and_comma_list_both_accepted():
    by_lines = "#*A\n#t2000\n#fDatabases\n#fData Mining\n#index1\n"
    by_comma = "#*A\n#t2000\n#fDatabases,Data Mining\n#index2\n"
    c1, _ = parse_corpus(by_lines)
    c2, _ = parse_corpus(by_comma)
    assert c1[1].fields == c2[2].fields
    assert len(c1[1].fields) == 2


def test_duplicate_and_self_references_repaired_with_warnings():
    text = "#*A\n#t2000\n#fDatabases\n#index7\n#%3\n#%3\n#%7\n#%4\n"
    corpus, report = parse_corpus(text)
    assert corpus[7].references == (3, 4)
    codes = {d.code for d in report.warnings()}
    assert codes == {"duplicate-reference", "self-reference"}
    # warnings never abort strict mode
    corpus2, _ = parse_corpus(text, strictness=STRICT)
    assert corpus2[7].references == (3, 4)


def test_author_list_trimmed_and_empties_dropped():
    text = "#*A\n#@ Jo Coder , ,Max Dev \n#t2000\n#fDatabases\n#index7\n"
    corpus, _ = parse_corpus(text)
    assert corpus[7].authors == ("Jo Coder", "Max Dev")


def test_keyword_normalization_casefolds_and_collapses_whitespace():
    text = "#*A\n#t2000\n#fDatabases\n#kData   Mining, data mining , QUERY\n#index7\n"
    corpus, _ = parse_corpus(text)
    assert corpus[7].keywords == frozenset({"data mining", "query"})


def test_unrecognized_line_warned_and_ignored():
    text = "#*A\n#t2000\nnot a tagged line\n#fDatabases\n#index7\n"
    corpus, report = parse_corpus(text)
    assert len(corpus) == 1
    assert report.warnings()[0].code == "unknown-line"


def test_comment_lines_skipped():
    text = "%% generated header\n%% more\n\n#*A\n#t2000\n#fDatabases\n#index7\n"
    corpus, report = parse_corpus(text, strictness=STRICT)
    assert len(corpus) == 1
    assert report.blocks == 1


def test_parse_from_binary_and_text_streams(golden_text):
    c1, _ = parse_corpus(io.BytesIO(golden_text.encode("utf-8")))
    c2, _ = parse_corpus(io.StringIO(golden_text))
    assert c1 == c2
    assert len(c1) == 1


def test_round_trip_golden_is_byte_stable(golden_text, taxonomy):
    corpus, _ = parse_corpus(golden_text, taxonomy, strictness=STRICT)
    once = serialize_corpus(corpus)
    corpus2, report2 = parse_corpus(once, taxonomy, strictness=STRICT)
    assert corpus2 == corpus
    assert not report2.diagnostics
    assert serialize_corpus(corpus2) == once


def test_record_order_in_file_does_not_matter(golden_text):
    a = "#*A\n#t2000\n#fDatabases\n#index2\n#%1\n"
    b = "#*B\n#t2001\n#fData Mining\n#index1\n"
    c1, _ = parse_corpus(a + "\n" + b)
    c2, _ = parse_corpus(b + "\n" + a)
    assert c1 == c2
    assert list(c1) == [1, 2]


_name = st.text(
    alphabet=st.characters(whitelist_categories=("Lu", "Ll", "Nd"), whitelist_characters=" .-"),
    min_size=1, max_size=24,
).map(lambda s: " ".join(s.split())).filter(bool)


@st.composite
def _records(draw):
    n = draw(st.integers(min_value=1, max_value=8))
    taxonomy = FieldTaxonomy.default()
    records = []
    ids = draw(st.lists(st.integers(0, 10_000), min_size=n, max_size=n, unique=True))
    for pid in ids:
        fields = draw(st.sets(st.integers(0, len(taxonomy) - 1), min_size=1, max_size=3))
        refs = draw(st.lists(
            st.integers(0, 10_000).filter(lambda r, p=pid: r != p),
            max_size=5, unique=True,
        ))
        keywords = draw(st.sets(_name.map(str.casefold), max_size=5))
        authors = tuple(draw(st.lists(_name, max_size=3)))
        records.append(rec(
            pid,
            year=draw(st.integers(1950, 2050)),
            fields=fields,
            refs=tuple(refs),
            keywords=keywords,
            authors=authors,
            venue=draw(st.one_of(st.none(), _name)),
            title=draw(_name),
            abstract=draw(st.one_of(st.none(), _name)),
        ))
    return records


@given(_records())
@settings(max_examples=60, deadline=None)
def test_round_trip_property(records):
    corpus = corpus_of(*records)
    text = serialize_corpus(corpus)
    reparsed, report = parse_corpus(text, corpus.taxonomy, strictness=STRICT)
    assert report.parsed == len(records)
    assert reparsed == corpus
    assert serialize_corpus(reparsed) == text
