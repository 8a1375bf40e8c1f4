"""Cutting a long strand into indexed oligos and putting it back together.

Oligo layout::

    index word (12 nt) | separator (1 nt) | payload

The index is the 12-nt pair-code word for the oligo number (10**6 oligos
at most). The separator is the first of ``A, T, C, G`` that differs from
both the last header nucleotide and the first payload nucleotide. Oligo 0
additionally starts its payload with the strand length (u32, 20 nt) and a
second separator chosen the same way, so a short final oligo can be told
apart from a damaged one.
"""

from __future__ import annotations

import logging
import struct
from collections import Counter
from dataclasses import dataclass
from typing import Iterable, NamedTuple

from . import paircode
from .baseline import detranscode_bytes, transcode_bytes
from .trits import CorruptStreamError

log = logging.getLogger(__name__)

INDEX_NT = 12
HEADER_NT = INDEX_NT + 1
LENGTH_NT = 20
MAX_OLIGO_NT = 300
MIN_OLIGO_NT = 50
DEFAULT_PAYLOAD_LEN = 187
MAX_OLIGOS = paircode.capacity(INDEX_NT)
SEPARATOR_ORDER = "ATCG"
FILLER = "AT"


class OligoError(ValueError):
    pass


class AmbiguityError(OligoError):
    """Two oligos claim the same index with different content."""


def separator(before: str, after: str) -> str:
    for nt in SEPARATOR_ORDER:
        if nt != before and nt != after:
            return nt
    raise AssertionError("unreachable")


def filler(length: int) -> str:
    return (FILLER * (length // 2 + 1))[:length]


@dataclass(frozen=True)
class Oligo:
    index: int
    header: str
    payload: str

    @property
    def sequence(self) -> str:
        return self.header + self.payload

    def __len__(self):
        return len(self.header) + len(self.payload)


def _check_payload_len(payload_len: int) -> None:
    if payload_len + HEADER_NT < MIN_OLIGO_NT or payload_len + HEADER_NT + LENGTH_NT + 1 > MAX_OLIGO_NT:
        raise OligoError(
            f"payload_len {payload_len} gives oligos outside {MIN_OLIGO_NT}..{MAX_OLIGO_NT} nt"
        )


def fragment(strand: str, payload_len: int = DEFAULT_PAYLOAD_LEN) -> list[Oligo]:
    _check_payload_len(payload_len)
    if not strand:
        raise OligoError("cannot fragment an empty strand")
    count = -(-len(strand) // payload_len)
    if count > MAX_OLIGOS:
        raise OligoError(f"{count} oligos exceed the index space of {MAX_OLIGOS}")
    oligos = []
    for i in range(count):
        body = strand[i * payload_len : (i + 1) * payload_len]
        if i == 0:
            prefix = transcode_bytes(struct.pack(">I", len(strand)))
            body = prefix + separator(prefix[-1], body[0]) + body
        index_word = paircode.codeword(INDEX_NT, i)
        header = index_word + separator(index_word[-1], body[0])
        oligos.append(Oligo(i, header, body))
    return oligos


def parse_oligo(seq: str) -> Oligo:
    """Read the index back from a raw oligo sequence."""
    if len(seq) < HEADER_NT:
        raise OligoError(f"oligo of {len(seq)} nt is shorter than its header")
    try:
        index = paircode.index_of(seq[:INDEX_NT])
    except paircode.CodewordError as exc:
        raise OligoError(f"undecodable index: {exc}") from None
    return Oligo(index, seq[:HEADER_NT], seq[HEADER_NT:])


class Reassembly(NamedTuple):
    strand: str
    missing: list[int]
    dropped: list[int]


def _strand_length(oligo0: Oligo) -> int | None:
    try:
        (n,) = struct.unpack(">I", detranscode_bytes(oligo0.payload[:LENGTH_NT]))
    except (CorruptStreamError, struct.error):
        return None
    return n


def reassemble(
    oligos: Iterable[Oligo | str],
    payload_len: int | None = None,
    strict: bool = True,
) -> Reassembly:
    """Order oligos by index and rebuild the strand.

    Every slot is forced to its expected length (short payloads padded with
    ``ATAT...`` filler, long ones truncated) so damage in one oligo never
    shifts the others. Missing slots are filled the same way and listed in
    ``missing``; inputs with an undecodable header are listed by input
    position in ``dropped``. With ``strict`` two different oligos for one
    index raise :class:`AmbiguityError`; otherwise the copy of plausible
    length (else the first seen) wins and the other is dropped.
    """
    by_index: dict[int, Oligo] = {}
    dropped: list[int] = []
    for pos, item in enumerate(oligos):
        try:
            oligo = parse_oligo(item) if isinstance(item, str) else item
        except OligoError as exc:
            log.warning("dropping oligo %d: %s", pos, exc)
            dropped.append(pos)
            continue
        seen = by_index.get(oligo.index)
        if seen is None:
            by_index[oligo.index] = oligo
        elif seen.payload != oligo.payload:
            if strict:
                raise AmbiguityError(f"conflicting oligos for index {oligo.index}")
            by_index[oligo.index] = _pick(seen, oligo, payload_len)
            dropped.append(pos)
    if not by_index:
        return Reassembly("", [], dropped)

    total = _strand_length(by_index[0]) if 0 in by_index else None
    slices = {}
    for i, o in by_index.items():
        slices[i] = o.payload[LENGTH_NT + 1 :] if i == 0 else o.payload
    if payload_len is None:
        payload_len = _infer_payload_len(slices, total)
    if total is not None and -(-total // payload_len) < max(slices) + 1:
        log.warning("strand length in oligo 0 disagrees with the indices; ignoring it")
        total = None
    if total is not None:
        count = -(-total // payload_len)
    else:
        count = max(by_index) + 1
    for i in [i for i in slices if i >= count]:
        log.warning("ignoring oligo with index %d beyond the strand", i)
        del slices[i]

    parts = []
    missing = []
    for i in range(count):
        if total is not None:
            want = min(payload_len, total - i * payload_len)
        elif i == count - 1 and i in slices:
            want = min(payload_len, len(slices[i]))
        else:
            want = payload_len
        body = slices.get(i)
        if body is None:
            missing.append(i)
            body = ""
        parts.append(body[:want] + filler(want - len(body[:want])))
    return Reassembly("".join(parts), missing, dropped)


def _infer_payload_len(slices: dict[int, str], total: int | None) -> int:
    last = max(slices)
    inner = [len(s) for i, s in slices.items() if i != last]
    if inner:
        return Counter(inner).most_common(1)[0][0]
    if total is not None and last == 0:
        return max(total, 1)
    return max(len(s) for s in slices.values())


def _pick(a: Oligo, b: Oligo, payload_len: int | None) -> Oligo:
    if payload_len is not None:
        extra = LENGTH_NT + 1 if a.index == 0 else 0
        if len(a.payload) != payload_len + extra and len(b.payload) == payload_len + extra:
            return b
    return a


def to_fasta_records(oligos: Iterable[Oligo]) -> list[tuple[str, str]]:
    return [(f"oligo_{o.index}", o.sequence) for o in oligos]
