"""Quaternary variable-length image codec (JPEG-DNA).

DC categories and AC run/category symbols are coded with two ternary
Huffman tables; every trit becomes one nucleotide through the rotation
coder. Each nonzero value follows its symbol as a pair-code word whose
length equals the category. The rotation state is the last nucleotide
written, pair-code words included, so no junction repeats a nucleotide
after a Huffman trit.

A complete strand is ``header | payload``. The header is a byte string
prefixed by its u16 length and mapped to DNA at 5 nt per byte::

    "JD1" | width u16 | height u16 | quality u8 | DC table | AC table

The payload starts from a virtual previous nucleotide ``A``.
"""

from __future__ import annotations

import struct
from collections import Counter
from dataclasses import dataclass

import numpy as np

from . import paircode
from .baseline import NT_PER_BYTE, StreamFormatError, detranscode_bytes, detranscode_lenient, transcode_bytes
from .pipeline import (
    ZRL,
    Block,
    BlockIndexStream,
    DecodeFailure,
    block_grid,
    forward_pipeline,
    inverse_pipeline,
    zero_fill,
)
from .oligos import separator
from .prefix import PrefixCodeError
from .trits import START, CorruptStreamError, TernaryCode, build_code, successors

MAGIC = b"JD1"
EOB = 0x00
ZRL_SYMBOL = 0xF0

_TRIT_OF = {p: {nt: str(t) for t, nt in enumerate(successors(p))} for p in "ACGT"}


def ac_symbol(run: int, value: int) -> int:
    if (run, value) == ZRL:
        return ZRL_SYMBOL
    return (run << 4) | paircode.category_of(value).category


def symbol_counts(indices: BlockIndexStream) -> tuple[Counter, Counter]:
    """First pass: DC category and AC run/category frequencies."""
    dc = Counter()
    ac = Counter()
    for b in indices.blocks:
        dc[paircode.category_of(b.dc_diff).category] += 1
        for run, value in b.ac:
            ac[ac_symbol(run, value)] += 1
        if b.eob:
            ac[EOB] += 1
    return dc, ac


def _table(counts: Counter) -> TernaryCode:
    if not counts or sum(counts.values()) == 0:
        counts = Counter({EOB: 1})
    return build_code(counts)


@dataclass
class JpegDnaStream:
    width: int
    height: int
    quality: int
    dc_code: TernaryCode
    ac_code: TernaryCode
    payload: str

    def header_bytes(self) -> bytes:
        return (
            MAGIC
            + struct.pack(">HHB", self.width, self.height, self.quality)
            + self.dc_code.to_bytes()
            + self.ac_code.to_bytes()
        )

    def header_nt(self) -> str:
        """Transcoded header plus one separator nucleotide.

        The separator keeps the junction with the payload free of runs.
        """
        head = self.header_bytes()
        nt = transcode_bytes(struct.pack(">H", len(head)) + head)
        return nt + separator(nt[-1], self.payload[:1])

    def to_nt(self) -> str:
        return self.header_nt() + self.payload

    @classmethod
    def from_nt(cls, strand: str, lenient: bool = False) -> "JpegDnaStream":
        """Split a strand into header fields and payload.

        With ``lenient`` the header bytes are read best-effort; any failure
        to parse them raises :class:`StreamFormatError`.
        """
        unmap = (lambda s: detranscode_lenient(s)[0]) if lenient else detranscode_bytes
        try:
            (size,) = struct.unpack(">H", unmap(strand[: 2 * NT_PER_BYTE]))
            end = (2 + size) * NT_PER_BYTE
            if len(strand) < end + 1:
                raise StreamFormatError("strand shorter than its header")
            head = unmap(strand[2 * NT_PER_BYTE : end])
        except (CorruptStreamError, struct.error) as exc:
            raise StreamFormatError(f"unreadable header: {exc}") from None
        if head[:3] != MAGIC:
            raise StreamFormatError("bad magic for JPEG-DNA stream")
        try:
            width, height, quality = struct.unpack_from(">HHB", head, 3)
            pos = 8
            dc_code, n = TernaryCode.from_bytes(head, pos)
            pos += n
            ac_code, n = TernaryCode.from_bytes(head, pos)
            pos += n
        except (struct.error, PrefixCodeError) as exc:
            raise StreamFormatError(f"cannot parse header: {exc}") from None
        if pos != len(head) or width == 0 or height == 0 or not 1 <= quality <= 100:
            raise StreamFormatError("inconsistent header")
        return cls(width, height, quality, dc_code, ac_code, strand[end + 1 :])

    @property
    def block_count(self) -> int:
        by, bx = block_grid(self.width, self.height)
        return by * bx


def entropy_encode(indices: BlockIndexStream, width: int = 0, height: int = 0, quality: int = 0) -> JpegDnaStream:
    dc_counts, ac_counts = symbol_counts(indices)
    dc_code = _table(dc_counts)
    ac_code = _table(ac_counts)

    # (code, symbol, previous) -> nucleotides; previous only shifts the rotation.
    cache: dict = {}

    def emit(code, sym, prev):
        key = (id(code), sym, prev)
        nts = cache.get(key)
        if nts is None:
            nts = []
            p = prev
            for t in code.codes[sym]:
                p = successors(p)[int(t)]
                nts.append(p)
            nts = cache[key] = "".join(nts)
        return nts

    out = []
    prev = START
    for b in indices.blocks:
        cat, word = paircode.encode_value(b.dc_diff)
        s = emit(dc_code, cat, prev)
        out.append(s)
        out.append(word)
        prev = word[-1] if word else s[-1]
        for run, value in b.ac:
            if (run, value) == ZRL:
                s = emit(ac_code, ZRL_SYMBOL, prev)
                out.append(s)
                prev = s[-1]
                continue
            cat, word = paircode.encode_value(value)
            s = emit(ac_code, (run << 4) | cat, prev)
            out.append(s)
            out.append(word)
            prev = word[-1]
        if b.eob:
            s = emit(ac_code, EOB, prev)
            out.append(s)
            prev = s[-1]
    return JpegDnaStream(width, height, quality, dc_code, ac_code, "".join(out))


def entropy_decode(stream: JpegDnaStream, block_count: int | None = None) -> BlockIndexStream:
    """Inverse of :func:`entropy_encode`.

    Damage shows up as an adjacent repeat inside a trit segment, a dead or
    dummy Huffman prefix, a malformed pair-code word, a block overrun or a
    premature end. Decoding stops there; that block and every later one are
    filled with all-zero coefficients (mid-gray), and ``failure`` carries the nucleotide position. Leftover
    nucleotides after the last block are reported the same way.
    """
    if block_count is None:
        block_count = stream.block_count
    payload = stream.payload
    n = len(payload)
    pos = 0
    prev = START

    def symbol(code):
        nonlocal pos, prev
        word = ""
        while True:
            if pos >= n:
                raise CorruptStreamError("payload exhausted", pos)
            nt = payload[pos]
            t = _TRIT_OF[prev].get(nt)
            if t is None:
                raise CorruptStreamError(f"repeated nucleotide {nt!r}", pos)
            word += t
            pos += 1
            prev = nt
            try:
                sym = code.step(word)
            except PrefixCodeError as exc:
                raise CorruptStreamError(str(exc), pos) from None
            if sym is not None:
                return sym

    def value(cat):
        nonlocal pos, prev
        if cat == 0:
            return 0
        if pos + cat > n:
            raise CorruptStreamError("payload exhausted inside a value word", pos)
        word = payload[pos : pos + cat]
        try:
            v = paircode.decode_value(cat, word)
        except paircode.CodewordError as exc:
            raise CorruptStreamError(str(exc), pos) from None
        pos += cat
        prev = word[-1]
        return v

    blocks: list[Block] = []
    offsets: list[int] = []
    failure = None
    try:
        for _ in range(block_count):
            dc = value(symbol(stream.dc_code))
            ac = []
            used = 0
            eob = True
            while used < 63:
                sym = symbol(stream.ac_code)
                if sym == EOB:
                    break
                run, cat = sym >> 4, sym & 0xF
                if cat == 0 and sym != ZRL_SYMBOL:
                    raise CorruptStreamError(f"invalid AC symbol {sym:#x}", pos)
                used += run + 1
                if used > 63:
                    raise CorruptStreamError("AC run overruns the block", pos)
                ac.append(ZRL if cat == 0 else (run, value(cat)))
            else:
                eob = False
            blocks.append(Block(dc, tuple(ac), eob))
            offsets.append(pos)
        if pos != n:
            failure = DecodeFailure(pos, block_count, f"{n - pos} trailing nucleotides")
    except CorruptStreamError as exc:
        failure = DecodeFailure(pos, len(blocks), str(exc))
        blocks = zero_fill(blocks, block_count)
    return BlockIndexStream(blocks, failure, offsets)


def encode_image(img, quality: int) -> JpegDnaStream:
    img = np.asarray(img)
    h, w = img.shape
    return entropy_encode(forward_pipeline(img, quality), w, h, quality)


def decode_image(stream: JpegDnaStream) -> np.ndarray:
    return decode_image_with_report(stream)[0]


def decode_image_with_report(stream: JpegDnaStream) -> tuple[np.ndarray, BlockIndexStream]:
    indices = entropy_decode(stream)
    return inverse_pipeline(indices, stream.quality, stream.width, stream.height), indices


def decode_strand(strand: str) -> tuple[np.ndarray, BlockIndexStream]:
    """Decode a full header+payload strand, tolerating payload damage."""
    return decode_image_with_report(JpegDnaStream.from_nt(strand, lenient=True))
