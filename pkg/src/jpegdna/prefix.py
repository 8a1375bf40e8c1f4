"""Huffman code-length construction and canonical prefix codes of any arity.

Shared by the ternary coder (arity 3) and the binary baseline (arity 2).
Codewords are strings of digit characters ``"0".."<arity-1>"``.
"""

from __future__ import annotations

import heapq
import struct
from typing import Iterable, Mapping


class PrefixCodeError(ValueError):
    """Raised for malformed tables or undecodable digit streams."""


def huffman_lengths(freqs: Mapping[int, int], arity: int) -> tuple[dict[int, int], frozenset[int]]:
    """Optimal code lengths for ``freqs``, padded with zero-weight dummies.

    Dummies are added until ``(n - 1) % (arity - 1) == 0`` (at least
    ``arity`` leaves in total when there is a single real symbol) and take
    the ids right above the largest real id. Merges pick the lowest
    ``(weight, smallest contained id)`` nodes first.
    """
    if not freqs:
        raise PrefixCodeError("cannot build a code for an empty table")
    if any(c < 0 for c in freqs.values()):
        raise PrefixCodeError("negative symbol count")
    if sum(freqs.values()) <= 0:
        raise PrefixCodeError("at least one symbol needs a positive count")
    weights = dict(freqs)
    n = len(weights)
    pad = 0
    if n == 1:
        pad = arity - 1
    else:
        while (n + pad - 1) % (arity - 1):
            pad += 1
    top = max(weights)
    dummies = frozenset(range(top + 1, top + 1 + pad))
    for d in dummies:
        weights[d] = 0

    depth = dict.fromkeys(weights, 0)
    heap = [(w, s, [s]) for s, w in weights.items()]
    heapq.heapify(heap)
    while len(heap) > 1:
        merged_w = 0
        merged: list[int] = []
        for _ in range(arity):
            w, _, members = heapq.heappop(heap)
            merged_w += w
            merged.extend(members)
        for s in merged:
            depth[s] += 1
        heapq.heappush(heap, (merged_w, min(merged), merged))
    return depth, dummies


def canonical_codes(lengths: Mapping[int, int], arity: int) -> dict[int, str]:
    """Assign canonical codewords in ascending ``(length, id)`` order."""
    order = sorted(lengths, key=lambda s: (lengths[s], s))
    codes = {}
    code = 0
    prev_len = 0
    for i, s in enumerate(order):
        length = lengths[s]
        if length < 1:
            raise PrefixCodeError(f"symbol {s} has non-positive length")
        if i:
            code += 1
        code *= arity ** (length - prev_len)
        prev_len = length
        if code >= arity**length:
            raise PrefixCodeError("lengths violate the Kraft inequality")
        codes[s] = _digits(code, length, arity)
    return codes


def _digits(value: int, width: int, base: int) -> str:
    out = []
    for _ in range(width):
        value, d = divmod(value, base)
        out.append(str(d))
    return "".join(reversed(out))


class PrefixCode:
    """An immutable canonical prefix code with optional never-emitted dummies."""

    arity = 3

    def __init__(self, lengths: Mapping[int, int], dummies: Iterable[int] = ()):
        self.lengths = dict(lengths)
        self.dummies = frozenset(dummies)
        self.codes = canonical_codes(self.lengths, self.arity)
        self._decode = {c: s for s, c in self.codes.items()}
        self._prefixes = {c[:i] for c in self.codes.values() for i in range(1, len(c))}
        self.max_length = max(self.lengths.values())

    @classmethod
    def from_frequencies(cls, freqs: Mapping[int, int]):
        lengths, dummies = huffman_lengths(freqs, cls.arity)
        return cls(lengths, dummies)

    @property
    def symbols(self) -> list[int]:
        return sorted(s for s in self.lengths if s not in self.dummies)

    def kraft_sum(self) -> float:
        return sum(self.arity ** -n for n in self.lengths.values())

    def weighted_length(self, freqs: Mapping[int, int]) -> int:
        return sum(c * self.lengths[s] for s, c in freqs.items())

    def encode(self, symbols: Iterable[int]) -> str:
        codes = self.codes
        try:
            return "".join(codes[s] if s not in self.dummies else _raise_dummy(s) for s in symbols)
        except KeyError as exc:
            raise PrefixCodeError(f"symbol {exc.args[0]} not in code") from None

    def decode_one(self, digits: str, pos: int) -> tuple[int, int]:
        """Decode one symbol starting at ``digits[pos]``; return ``(symbol, new_pos)``."""
        word = ""
        n = len(digits)
        while pos < n:
            word += digits[pos]
            pos += 1
            sym = self._decode.get(word)
            if sym is not None:
                if sym in self.dummies:
                    raise PrefixCodeError(f"dummy symbol decoded ending at {pos}")
                return sym, pos
            if word not in self._prefixes:
                raise PrefixCodeError(f"invalid codeword {word!r} ending at {pos}")
        raise PrefixCodeError("digits exhausted mid-codeword")

    def step(self, word: str) -> int | None:
        """Incremental decoding: symbol for a complete ``word``, ``None`` for a
        proper prefix; raises for dead ends and dummies."""
        sym = self._decode.get(word)
        if sym is not None:
            if sym in self.dummies:
                raise PrefixCodeError("dummy symbol decoded")
            return sym
        if word not in self._prefixes:
            raise PrefixCodeError(f"invalid codeword {word!r}")
        return None

    def decode(self, digits: str, count: int) -> tuple[list[int], int]:
        out = []
        pos = 0
        for _ in range(count):
            sym, pos = self.decode_one(digits, pos)
            out.append(sym)
        return out, pos

    # Layout: u8 dummy count, u8 max length L, L x u16 symbols-per-length,
    # then u16 ids in canonical order. Dummies are the largest ids.
    def to_bytes(self) -> bytes:
        order = sorted(self.lengths, key=lambda s: (self.lengths[s], s))
        counts = [0] * self.max_length
        for s in order:
            counts[self.lengths[s] - 1] += 1
        return (
            struct.pack(">BB", len(self.dummies), self.max_length)
            + struct.pack(f">{self.max_length}H", *counts)
            + struct.pack(f">{len(order)}H", *order)
        )

    @classmethod
    def from_bytes(cls, data: bytes, offset: int = 0):
        """Parse a serialized table; returns ``(code, bytes_consumed)``."""
        try:
            n_dummies, max_len = struct.unpack_from(">BB", data, offset)
            pos = offset + 2
            counts = struct.unpack_from(f">{max_len}H", data, pos)
            pos += 2 * max_len
            total = sum(counts)
            ids = struct.unpack_from(f">{total}H", data, pos)
            pos += 2 * total
        except struct.error as exc:
            raise PrefixCodeError(f"truncated code table: {exc}") from None
        if total == 0 or len(set(ids)) != total or n_dummies > total:
            raise PrefixCodeError("malformed code table")
        lengths = {}
        it = iter(ids)
        for length, count in enumerate(counts, start=1):
            for _ in range(count):
                lengths[next(it)] = length
        dummies = sorted(ids)[total - n_dummies :] if n_dummies else []
        return cls(lengths, dummies), pos - offset

    def __eq__(self, other):
        return (
            type(self) is type(other)
            and self.lengths == other.lengths
            and self.dummies == other.dummies
        )

    def __repr__(self):
        return f"{type(self).__name__}({len(self.lengths)} symbols, max length {self.max_length})"


def _raise_dummy(s):
    raise PrefixCodeError(f"dummy symbol {s} cannot be encoded")


class BinaryCode(PrefixCode):
    arity = 2
