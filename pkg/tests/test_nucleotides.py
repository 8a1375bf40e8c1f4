import pytest
from hypothesis import given, strategies as st

from jpegdna.nucleotides import (
    GC_BALANCE,
    HOMOPOLYMER,
    SequenceFormatError,
    emit_text,
    format_fasta,
    parse_fasta,
    parse_text,
    validate,
)

seqs = st.text(alphabet="ACGT", max_size=200)


def test_run_at_bound_is_fine():
    r = validate("AAAT", 3)
    assert r.max_homopolymer_run == 3
    assert r.homopolymer_ok and r.ok


def test_run_of_four_is_reported_at_start():
    r = validate("AAAAT", 3)
    assert r.violations == ((0, HOMOPOLYMER),)


def test_all_gc_violates_balance():
    r = validate("GGC", 3)
    assert (0, GC_BALANCE) in r.violations
    assert (r.gc_count, r.at_count) == (3, 0)
    assert r.homopolymer_ok and not r.gc_ok


def test_every_long_run_reported():
    r = validate("CCCCATTTTTG", 3)
    assert [p for p, k in r.violations if k == HOMOPOLYMER] == [0, 5]
    assert r.max_homopolymer_run == 5


def test_empty_sequence():
    r = validate("", 3)
    assert r.max_homopolymer_run == 0 and r.violations == ()


def test_bad_max_run():
    with pytest.raises(ValueError):
        validate("A", 0)


def test_parse_text():
    assert parse_text("ACGT") == "ACGT"
    assert parse_text("ac gt") == "ACGT"
    with pytest.raises(SequenceFormatError) as e:
        parse_text("ACGX")
    assert e.value.position == 3


@given(seqs)
def test_text_round_trip(s):
    assert parse_text(emit_text(s)) == s


@given(seqs)
def test_counts_add_up(s):
    r = validate(s, 3)
    assert r.gc_count + r.at_count == len(s)


@given(seqs, seqs)
def test_concatenation_run_is_monotone(a, b):
    ab = validate(a + b, 3).max_homopolymer_run
    assert ab >= max(validate(a, 3).max_homopolymer_run, validate(b, 3).max_homopolymer_run)


def test_fasta_wraps_and_parses():
    text = format_fasta([("x", "A" * 170), ("y", "CG")])
    lines = text.splitlines()
    assert lines[0] == ">x" and len(lines[1]) == 80 and len(lines[3]) == 10
    assert parse_fasta(text) == [("x", "A" * 170), ("y", "CG")]


def test_plain_text_format_is_one_per_line():
    assert parse_fasta("ACGT\n\nttaa\n") == [("seq_0", "ACGT"), ("seq_1", "TTAA")]
