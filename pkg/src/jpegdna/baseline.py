"""Transcoding baseline: a binary JPEG-style coder plus a byte-to-DNA map.

The binary coder entropy-codes the same block indices as the quaternary
coder with frequency-derived canonical binary Huffman tables and the
classical magnitude bits (category ``k`` uses ``k`` bits, negatives stored as
``v + 2**k - 1``). Category 1 exists here. The resulting byte stream is
mapped to nucleotides five at a time, one pair-code word per byte.

Binary stream layout (big-endian)::

    "JB1" | width u16 | height u16 | quality u8 | DC table | AC table
          | payload bit count u32 | payload bytes (padded with 1 bits)

Tables use the serialization of :class:`jpegdna.prefix.PrefixCode`.
"""

from __future__ import annotations

import struct
from collections import Counter
from dataclasses import dataclass

import numpy as np

from . import paircode
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
from .prefix import BinaryCode, PrefixCodeError
from .trits import CorruptStreamError

MAGIC = b"JB1"
NT_PER_BYTE = 5
EOB = 0x00
ZRL_SYMBOL = 0xF0

_BYTE_WORDS = tuple(paircode.codeword(NT_PER_BYTE, b) for b in range(256))


class StreamFormatError(ValueError):
    """A stream header could not be parsed."""


def transcode_bytes(data: bytes) -> str:
    """Map every byte to the 5-nt pair-code word with that index."""
    return "".join(_BYTE_WORDS[b] for b in data)


def detranscode_bytes(seq: str) -> bytes:
    if len(seq) % NT_PER_BYTE:
        raise CorruptStreamError(f"length {len(seq)} is not a multiple of {NT_PER_BYTE}", len(seq))
    out = bytearray()
    for g in range(len(seq) // NT_PER_BYTE):
        word = seq[g * NT_PER_BYTE : (g + 1) * NT_PER_BYTE]
        try:
            index = paircode.index_of(word)
        except paircode.CodewordError as exc:
            raise CorruptStreamError(f"group {g}: {exc}", g) from None
        if index > 255:
            raise CorruptStreamError(f"group {g}: index {index} is not a byte", g)
        out.append(index)
    return bytes(out)


def detranscode_lenient(seq: str) -> tuple[bytes, list[int]]:
    """Best-effort inverse for damaged strands.

    Malformed groups become ``0x00``, out-of-range indices wrap modulo 256
    and a trailing partial group is dropped. Returns the bytes and the
    positions of the damaged groups.
    """
    out = bytearray()
    bad = []
    for g in range(len(seq) // NT_PER_BYTE):
        word = seq[g * NT_PER_BYTE : (g + 1) * NT_PER_BYTE]
        try:
            index = paircode.index_of(word)
        except paircode.CodewordError:
            bad.append(g)
            index = 0
        if index > 255:
            bad.append(g)
        out.append(index & 0xFF)
    return bytes(out), bad


def magnitude_category(value: int) -> int:
    return abs(value).bit_length()


def magnitude_bits(value: int) -> str:
    k = magnitude_category(value)
    if k == 0:
        return ""
    if value < 0:
        value += (1 << k) - 1
    return format(value, f"0{k}b")


def bits_to_value(bits: str) -> int:
    k = len(bits)
    if k == 0:
        return 0
    v = int(bits, 2)
    if bits[0] == "0":
        v -= (1 << k) - 1
    return v


def _ac_symbol(run: int, value: int) -> int:
    if (run, value) == ZRL:
        return ZRL_SYMBOL
    return (run << 4) | magnitude_category(value)


def _symbols(indices: BlockIndexStream):
    dc = Counter()
    ac = Counter()
    for b in indices.blocks:
        dc[magnitude_category(b.dc_diff)] += 1
        for run, value in b.ac:
            ac[_ac_symbol(run, value)] += 1
        if b.eob:
            ac[EOB] += 1
    if not ac:
        ac[EOB] = 0
        ac[ZRL_SYMBOL] = 0
    return dc, ac


def _code_for(counts: Counter) -> BinaryCode:
    if sum(counts.values()) == 0:
        counts = Counter({s: 1 for s in counts})
    return BinaryCode.from_frequencies(counts)


@dataclass
class BinaryJpegStream:
    width: int
    height: int
    quality: int
    dc_code: BinaryCode
    ac_code: BinaryCode
    payload: bytes
    nbits: int

    def to_bytes(self) -> bytes:
        return (
            MAGIC
            + struct.pack(">HHB", self.width, self.height, self.quality)
            + self.dc_code.to_bytes()
            + self.ac_code.to_bytes()
            + struct.pack(">I", self.nbits)
            + self.payload
        )

    @classmethod
    def from_bytes(cls, data: bytes) -> "BinaryJpegStream":
        if data[:3] != MAGIC:
            raise StreamFormatError("bad magic for binary stream")
        try:
            width, height, quality = struct.unpack_from(">HHB", data, 3)
            pos = 8
            dc_code, n = BinaryCode.from_bytes(data, pos)
            pos += n
            ac_code, n = BinaryCode.from_bytes(data, pos)
            pos += n
            (nbits,) = struct.unpack_from(">I", data, pos)
            pos += 4
        except (struct.error, PrefixCodeError) as exc:
            raise StreamFormatError(f"cannot parse binary stream header: {exc}") from None
        if not 1 <= quality <= 100 or width == 0 or height == 0:
            raise StreamFormatError("implausible binary stream header")
        return cls(width, height, quality, dc_code, ac_code, data[pos:], nbits)


def binary_entropy_encode(indices: BlockIndexStream, width: int = 0, height: int = 0, quality: int = 0) -> BinaryJpegStream:
    dc_counts, ac_counts = _symbols(indices)
    dc_code = _code_for(dc_counts)
    ac_code = _code_for(ac_counts)
    dcc, acc = dc_code.codes, ac_code.codes
    parts = []
    for b in indices.blocks:
        parts.append(dcc[magnitude_category(b.dc_diff)])
        parts.append(magnitude_bits(b.dc_diff))
        for run, value in b.ac:
            parts.append(acc[_ac_symbol(run, value)])
            parts.append(magnitude_bits(value))
        if b.eob:
            parts.append(acc[EOB])
    bits = "".join(parts)
    nbits = len(bits)
    bits += "1" * (-nbits % 8)
    payload = int(bits, 2).to_bytes(len(bits) // 8, "big") if bits else b""
    return BinaryJpegStream(width, height, quality, dc_code, ac_code, payload, nbits)


def binary_entropy_decode(stream: BinaryJpegStream, block_count: int | None = None) -> BlockIndexStream:
    """Inverse of :func:`binary_entropy_encode`.

    On a structural violation (dead Huffman prefix, exhausted bits, block
    overrun, impossible category) decoding stops; the offending and all
    following blocks get all-zero coefficients and ``failure`` records the bit position.
    """
    if block_count is None:
        by, bx = block_grid(stream.width, stream.height)
        block_count = by * bx
    bits = "".join(format(b, "08b") for b in stream.payload)[: stream.nbits]
    n = len(bits)
    dc_code, ac_code = stream.dc_code, stream.ac_code
    blocks: list[Block] = []
    offsets: list[int] = []
    pos = 0
    failure = None

    def value(k):
        nonlocal pos
        if k > 15:
            raise CorruptStreamError(f"category {k} too large", pos)
        if pos + k > n:
            raise CorruptStreamError("bits exhausted in magnitude field", pos)
        v = bits_to_value(bits[pos : pos + k])
        pos += k
        return v

    try:
        for i in range(block_count):
            cat, pos = dc_code.decode_one(bits, pos)
            dc = value(cat)
            ac = []
            used = 0
            eob = True
            while used < 63:
                sym, pos = ac_code.decode_one(bits, pos)
                if sym == EOB:
                    break
                run, k = sym >> 4, sym & 0xF
                if k == 0 and sym != ZRL_SYMBOL:
                    raise CorruptStreamError(f"invalid AC symbol {sym:#x}", pos)
                used += run + 1
                if used > 63:
                    raise CorruptStreamError("AC run overruns the block", pos)
                ac.append(ZRL if k == 0 else (run, value(k)))
            else:
                eob = False
            if not eob and ac and ac[-1] == ZRL:
                raise CorruptStreamError("block ends with a zero run", pos)
            blocks.append(Block(dc, tuple(ac), eob))
            offsets.append(pos)
    except (PrefixCodeError, CorruptStreamError) as exc:
        failure = DecodeFailure(pos, len(blocks), str(exc))
        blocks = zero_fill(blocks, block_count)
    return BlockIndexStream(blocks, failure, offsets)


# -- full image round trips -------------------------------------------------


def encode_binary_image(img, quality: int) -> BinaryJpegStream:
    img = np.asarray(img)
    h, w = img.shape
    return binary_entropy_encode(forward_pipeline(img, quality), w, h, quality)


def decode_binary_image(stream: BinaryJpegStream) -> tuple[np.ndarray, BlockIndexStream]:
    indices = binary_entropy_decode(stream)
    return inverse_pipeline(indices, stream.quality, stream.width, stream.height), indices


def transcode_image(img, quality: int) -> str:
    """Binary-code an image and map the whole byte stream to nucleotides."""
    return transcode_bytes(encode_binary_image(img, quality).to_bytes())


def detranscode_image(seq: str) -> tuple[np.ndarray, BlockIndexStream]:
    """Decode a (possibly damaged) transcoded strand.

    Raises :class:`StreamFormatError` when the header is unreadable.
    """
    data, _ = detranscode_lenient(seq)
    stream = BinaryJpegStream.from_bytes(data)
    return decode_binary_image(stream)
