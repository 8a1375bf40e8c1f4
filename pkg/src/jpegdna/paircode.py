"""Fixed-length constrained quaternary code built from nucleotide pairs.

Words of even length ``2k`` concatenate ``k`` pairs drawn from a ten-pair
dictionary that contains no repeated or purely G/C pair. Odd-length words
append a single free nucleotide. Word ``index`` is enumerated by writing the
pair part in base 10, most significant digit first, and (for odd lengths)
taking ``index % 4`` as the tail.

The value categories used by the quaternary JPEG coder live here as well:
category ``c`` holds the values whose magnitude falls in ``[lo, hi]`` and
codes them with a word of ``c`` nucleotides. There is no 1-nt category.
"""

from __future__ import annotations

from dataclasses import dataclass
from functools import lru_cache

PAIRS = ("AT", "AC", "AG", "TA", "TC", "TG", "CA", "CT", "GA", "GT")
TAILS = ("A", "T", "C", "G")

_PAIR_DIGIT = {p: d for d, p in enumerate(PAIRS)}
_TAIL_DIGIT = {t: d for d, t in enumerate(TAILS)}


class CodewordError(ValueError):
    """A sequence is not a word of the pair code (or out of range)."""


@dataclass(frozen=True)
class CategoryEntry:
    category: int
    lo: int
    hi: int

    @property
    def length_nt(self) -> int:
        return self.category

    @property
    def size(self) -> int:
        if self.category == 0:
            return 1
        return 2 * (self.hi - self.lo + 1)


CATEGORIES = (
    CategoryEntry(0, 0, 0),
    CategoryEntry(2, 1, 5),
    CategoryEntry(3, 6, 25),
    CategoryEntry(4, 26, 75),
    CategoryEntry(5, 76, 275),
    CategoryEntry(6, 276, 775),
    CategoryEntry(7, 776, 2775),
    CategoryEntry(8, 2776, 7775),
)
MAX_MAGNITUDE = CATEGORIES[-1].hi
_BY_CATEGORY = {e.category: e for e in CATEGORIES}


def capacity(length_nt: int) -> int:
    """Number of distinct words of the given length."""
    if length_nt < 2:
        raise ValueError(f"codeword length must be >= 2, got {length_nt}")
    k, odd = divmod(length_nt, 2)
    return 4 * 10**k if odd else 10**k


def codeword(length_nt: int, index: int) -> str:
    cap = capacity(length_nt)
    if not 0 <= index < cap:
        raise CodewordError(f"index {index} out of range for length {length_nt} (capacity {cap})")
    k, odd = divmod(length_nt, 2)
    tail = ""
    if odd:
        index, t = divmod(index, 4)
        tail = TAILS[t]
    digits = []
    for _ in range(k):
        index, d = divmod(index, 10)
        digits.append(PAIRS[d])
    return "".join(reversed(digits)) + tail


def index_of(word: str) -> int:
    """Inverse of :func:`codeword`; the length is taken from ``word``."""
    n = len(word)
    if n < 2:
        raise CodewordError(f"codeword too short: {word!r}")
    k, odd = divmod(n, 2)
    index = 0
    for i in range(k):
        d = _PAIR_DIGIT.get(word[2 * i : 2 * i + 2])
        if d is None:
            raise CodewordError(f"{word[2 * i:2 * i + 2]!r} at offset {2 * i} is not a code pair")
        index = index * 10 + d
    if odd:
        t = _TAIL_DIGIT.get(word[-1])
        if t is None:
            raise CodewordError(f"invalid tail symbol {word[-1]!r}")
        index = index * 4 + t
    return index


@lru_cache(maxsize=None)
def codebook(length_nt: int) -> tuple[str, ...]:
    """All words of ``length_nt`` in index order (cached; keep lengths small)."""
    return tuple(codeword(length_nt, i) for i in range(capacity(length_nt)))


def category_of(value: int) -> CategoryEntry:
    mag = abs(value)
    if mag > MAX_MAGNITUDE:
        raise ValueError(f"|{value}| exceeds the largest category ({MAX_MAGNITUDE})")
    for entry in CATEGORIES:
        if mag <= entry.hi:
            return entry
    raise AssertionError("unreachable")


def category_entry(category: int) -> CategoryEntry:
    try:
        return _BY_CATEGORY[category]
    except KeyError:
        raise CodewordError(f"no such category: {category}") from None


def encode_value(value: int) -> tuple[int, str]:
    """Return ``(category, word)``; zero maps to category 0 and no word.

    Within a category values are ordered ``-hi..-lo, lo..hi`` and the word
    index is the position in that list.
    """
    entry = category_of(value)
    if entry.category == 0:
        return 0, ""
    half = entry.hi - entry.lo + 1
    if value < 0:
        index = value + entry.hi
    else:
        index = half + value - entry.lo
    return entry.category, codeword(entry.category, index)


def decode_value(category: int, word: str) -> int:
    if category == 0:
        if word:
            raise CodewordError("category 0 carries no codeword")
        return 0
    entry = category_entry(category)
    if len(word) != category:
        raise CodewordError(f"category {category} needs {category} nt, got {len(word)}")
    index = index_of(word)
    half = entry.hi - entry.lo + 1
    if index >= 2 * half:
        raise CodewordError(f"index {index} outside category {category}")
    if index < half:
        return index - entry.hi
    return entry.lo + index - half


def length_for(count: int) -> int:
    """Shortest word length whose capacity covers ``count`` symbols."""
    length = 2
    while capacity(length) < count:
        length += 1
    return length
