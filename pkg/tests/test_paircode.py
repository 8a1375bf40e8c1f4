import itertools

import pytest

from jpegdna import paircode
from jpegdna.nucleotides import validate
from jpegdna.paircode import (
    CATEGORIES,
    CodewordError,
    capacity,
    category_of,
    codeword,
    decode_value,
    encode_value,
    index_of,
)

PAIRS = ["AT", "AC", "AG", "TA", "TC", "TG", "CA", "CT", "GA", "GT"]


def brute_force_words(length):
    """All strings over ACGT that split into listed pairs plus an optional tail."""
    out = []
    for t in itertools.product("ACGT", repeat=length):
        s = "".join(t)
        if all(s[i : i + 2] in PAIRS for i in range(0, length - 1, 2)):
            out.append(s)
    return out


@pytest.mark.parametrize("length", [2, 3, 4, 5, 6])
def test_capacity_matches_brute_force(length):
    assert capacity(length) == len(brute_force_words(length))


def test_capacity_values():
    assert capacity(2) == 10
    assert capacity(3) == 40
    assert capacity(8) == 10000
    with pytest.raises(ValueError):
        capacity(1)


def test_codeword_examples():
    assert codeword(2, 0) == "AT"
    assert codeword(2, 9) == "GT"
    assert codeword(3, 1) == "ATT"
    with pytest.raises(CodewordError):
        codeword(2, 10)


def test_length3_enumeration_order():
    expected = [p + t for p in PAIRS for t in "ATCG"]
    assert list(paircode.codebook(3)) == expected


def test_index_of():
    assert index_of("GT") == 9
    assert index_of("AT") == 0
    with pytest.raises(CodewordError):
        index_of("AA")
    with pytest.raises(CodewordError):
        index_of("A")


@pytest.mark.parametrize("length", [2, 3, 4, 5])
def test_bijection_exhaustive(length):
    words = [codeword(length, i) for i in range(capacity(length))]
    assert len(set(words)) == capacity(length)
    assert sorted(words) == sorted(brute_force_words(length))
    assert all(index_of(w) == i for i, w in enumerate(words))


@pytest.mark.parametrize("length", [6, 7, 8, 12])
def test_bijection_sampled(length, rng):
    for i in rng.integers(0, capacity(length), 300):
        assert index_of(codeword(length, int(i))) == i


@pytest.mark.parametrize("entry", CATEGORIES[1:])
def test_table_ranges_match_capacity(entry):
    assert entry.size == capacity(entry.category)


def test_category_of():
    assert category_of(0).category == 0
    assert category_of(-17).category == 3
    assert category_of(300).category == 6
    assert category_of(-7775).category == 8
    with pytest.raises(ValueError):
        category_of(7776)


def test_no_category_one():
    assert 1 not in {e.category for e in CATEGORIES}
    for v in range(-5, 6):
        if v:
            assert len(encode_value(v)[1]) == 2


def test_encode_value_examples():
    assert encode_value(-5) == (2, "AT")
    ordered = list(range(-5, 0)) + list(range(1, 6))
    assert encode_value(1) == (2, codeword(2, ordered.index(1)))
    assert encode_value(1) == (2, "TG")
    assert encode_value(0) == (0, "")


def test_decode_value_examples():
    assert decode_value(2, "AT") == -5
    assert decode_value(0, "") == 0
    with pytest.raises(CodewordError):
        decode_value(2, "AA")
    with pytest.raises(CodewordError):
        decode_value(1, "A")


def test_value_round_trip_full_range():
    for v in range(-paircode.MAX_MAGNITUDE, paircode.MAX_MAGNITUDE + 1):
        c, w = encode_value(v)
        assert decode_value(c, w) == v


@pytest.mark.parametrize("length", [2, 3, 4, 5, 6])
def test_words_satisfy_constraints(length):
    for w in paircode.codebook(length):
        r = validate(w, 3)
        assert r.homopolymer_ok
        if length % 2 == 0:
            assert r.gc_ok


def test_pairwise_concatenation_runs():
    words = [w for L in (2, 3, 4, 5) for w in paircode.codebook(L)]
    bad = [a + b for a in words for b in words if "AAAA" in a + b or "CCCC" in a + b or "GGGG" in a + b or "TTTT" in a + b]
    assert bad == []


def test_triple_concatenation_of_short_words():
    # Longest possible junction run: odd word ending in a doubled symbol,
    # then a word starting with that symbol.
    short = list(paircode.codebook(2)) + list(paircode.codebook(3))
    for a in short:
        for b in short:
            for c in paircode.codebook(2):
                assert validate(a + b + c, 3).homopolymer_ok
