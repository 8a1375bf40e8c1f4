"""Ternary Huffman coding and the trit-to-nucleotide rotation coder.

Each trit picks one of the three nucleotides that differ from the one
emitted just before it, so a trit-coded segment never repeats a symbol.
The three candidates are taken in cyclic order ``A -> C -> G -> T -> A``
starting after the previous nucleotide:

    previous  A: C G T     C: G T A     G: T A C     T: A C G

At the start of a stream the previous nucleotide is a virtual ``A``.
"""

from __future__ import annotations

from typing import Iterable, Mapping

from .prefix import PrefixCode, PrefixCodeError

START = "A"

_SUCC = {"A": "CGT", "C": "GTA", "G": "TAC", "T": "ACG"}
_TRIT = {p: {nt: str(t) for t, nt in enumerate(row)} for p, row in _SUCC.items()}


class CorruptStreamError(ValueError):
    """Structural violation found while decoding a nucleotide stream."""

    def __init__(self, message: str, position: int | None = None):
        super().__init__(message)
        self.position = position


class TernaryCode(PrefixCode):
    """Canonical ternary Huffman code; see :func:`build_code`."""

    arity = 3


def build_code(freqs: Mapping[int, int]) -> TernaryCode:
    """Optimal ternary prefix code for a symbol-count table.

    Zero-count dummies pad the alphabet to an odd size (three leaves for a
    single symbol) so every merge takes exactly three nodes; dummies get the
    ids just above the largest real id and are never emitted.
    """
    return TernaryCode.from_frequencies(freqs)


def encode_symbols(stream: Iterable[int], code: TernaryCode) -> str:
    return code.encode(stream)


def decode_symbols(trits: str, code: TernaryCode, count: int) -> tuple[list[int], int]:
    """Decode ``count`` symbols; returns the symbols and the trits consumed."""
    try:
        return code.decode(trits, count)
    except PrefixCodeError as exc:
        raise CorruptStreamError(str(exc)) from None


def successors(previous: str) -> str:
    return _SUCC[previous]


def trits_to_nt(trits: str, previous: str = START) -> str:
    out = []
    for t in trits:
        previous = _SUCC[previous][int(t)]
        out.append(previous)
    return "".join(out)


def nt_to_trits(seq: str, previous: str = START) -> str:
    out = []
    for i, nt in enumerate(seq):
        t = _TRIT[previous].get(nt)
        if t is None:
            raise CorruptStreamError(f"repeated nucleotide {nt!r} at {i}", i)
        out.append(t)
        previous = nt
    return "".join(out)


def nt_to_trit(nt: str, previous: str) -> int:
    """Single-step inverse used by streaming decoders."""
    t = _TRIT[previous].get(nt)
    if t is None:
        raise CorruptStreamError(f"repeated nucleotide {nt!r}")
    return int(t)
