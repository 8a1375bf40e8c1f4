"""Fixed-length Haar DWT + uniform scalar quantizer + pair-code coder.

Every quantizer index of a subband is written with a word of the same
length, so the stream offset of each coefficient follows from the layout
alone and damage never travels past the word it hits.

Subband order is ``LL`` of the coarsest level, then the three detail bands
(horizontal, vertical, diagonal) of each level from coarse to fine; each
band is scanned in raster order. Default steps: ``LL`` and the coarsest
details use ``base_step`` and each finer level multiplies the step by
``step_ratio``.

Layout header (big-endian)::

    "FL1" | width u16 | height u16 | levels u8
          | per subband: step f64 | lowest index i32 | word length u8
"""

from __future__ import annotations

import struct
from dataclasses import dataclass
from functools import lru_cache
from typing import NamedTuple

import numpy as np

from . import paircode
from .baseline import detranscode_bytes, transcode_bytes
from .pipeline import round_half_away

MAGIC = b"FL1"
SQRT2 = np.sqrt(2.0)


def _pad(img: np.ndarray, multiple: int) -> np.ndarray:
    h, w = img.shape
    return np.pad(img, ((0, -h % multiple), (0, -w % multiple)), mode="edge")


def _haar_step(x: np.ndarray):
    lo = (x[:, 0::2] + x[:, 1::2]) / SQRT2
    hi = (x[:, 0::2] - x[:, 1::2]) / SQRT2
    ll = (lo[0::2] + lo[1::2]) / SQRT2
    lh = (lo[0::2] - lo[1::2]) / SQRT2
    hl = (hi[0::2] + hi[1::2]) / SQRT2
    hh = (hi[0::2] - hi[1::2]) / SQRT2
    return ll, (lh, hl, hh)


def _haar_unstep(ll, details):
    lh, hl, hh = details
    h, w = ll.shape
    lo = np.empty((2 * h, w))
    hi = np.empty((2 * h, w))
    lo[0::2] = (ll + lh) / SQRT2
    lo[1::2] = (ll - lh) / SQRT2
    hi[0::2] = (hl + hh) / SQRT2
    hi[1::2] = (hl - hh) / SQRT2
    x = np.empty((2 * h, 2 * w))
    x[:, 0::2] = (lo + hi) / SQRT2
    x[:, 1::2] = (lo - hi) / SQRT2
    return x


def dwt_forward(img, levels: int = 3) -> list:
    """Orthonormal 2-D Haar decomposition, ``[LL, details_L, ..., details_1]``.

    Sides not divisible by ``2**levels`` are edge-padded first.
    """
    if levels < 1:
        raise ValueError("levels must be >= 1")
    x = _pad(np.asarray(img, dtype=np.float64), 2**levels)
    details = []
    for _ in range(levels):
        x, d = _haar_step(x)
        details.append(d)
    return [x] + details[::-1]


def dwt_inverse(bands: list) -> np.ndarray:
    x = bands[0]
    for d in bands[1:]:
        x = _haar_unstep(x, d)
    return x


def flatten_bands(bands: list) -> list[np.ndarray]:
    out = [bands[0]]
    for d in bands[1:]:
        out.extend(d)
    return out


def unflatten_bands(planes: list[np.ndarray]) -> list:
    bands = [planes[0]]
    for i in range(1, len(planes), 3):
        bands.append(tuple(planes[i : i + 3]))
    return bands


def default_steps(base_step: float, levels: int, step_ratio: float = 2.0) -> list[float]:
    steps = [base_step]
    for j in range(levels):
        steps.extend([base_step * step_ratio**j] * 3)
    return steps


@dataclass(frozen=True)
class Subband:
    shape: tuple[int, int]
    step: float
    lowest: int
    length_nt: int

    @property
    def count(self) -> int:
        return self.shape[0] * self.shape[1]

    @property
    def highest(self) -> int:
        return self.lowest + paircode.capacity(self.length_nt) - 1


@dataclass(frozen=True)
class SubbandLayout:
    width: int
    height: int
    levels: int
    subbands: tuple[Subband, ...]

    def total_nt(self) -> int:
        return sum(s.count * s.length_nt for s in self.subbands)

    def offsets(self) -> list[int]:
        """Stream offset of the first word of each subband."""
        out = []
        pos = 0
        for s in self.subbands:
            out.append(pos)
            pos += s.count * s.length_nt
        return out

    def to_bytes(self) -> bytes:
        body = MAGIC + struct.pack(">HHB", self.width, self.height, self.levels)
        for s in self.subbands:
            body += struct.pack(">diB", s.step, s.lowest, s.length_nt)
        return body

    @classmethod
    def from_bytes(cls, data: bytes) -> "SubbandLayout":
        if data[:3] != MAGIC:
            raise ValueError("bad magic for fixed-length layout")
        width, height, levels = struct.unpack_from(">HHB", data, 3)
        shapes = band_shapes(width, height, levels)
        subbands = []
        for i, shape in enumerate(shapes):
            step, lowest, length = struct.unpack_from(">diB", data, 8 + 13 * i)
            subbands.append(Subband(shape, step, lowest, length))
        return cls(width, height, levels, tuple(subbands))

    def to_nt(self) -> str:
        return transcode_bytes(self.to_bytes())

    @classmethod
    def from_nt(cls, seq: str) -> "SubbandLayout":
        return cls.from_bytes(detranscode_bytes(seq))


def band_shapes(width: int, height: int, levels: int) -> list[tuple[int, int]]:
    m = 2**levels
    h = -(-height // m) * m
    w = -(-width // m) * m
    shapes = [(h >> levels, w >> levels)]
    for j in range(levels, 0, -1):
        shapes.extend([(h >> j, w >> j)] * 3)
    return shapes


def make_layout(img, base_step: float = 8.0, levels: int = 3, step_ratio: float = 2.0, steps=None) -> SubbandLayout:
    """Derive word lengths from the index extremes of each quantized band."""
    img = np.asarray(img)
    h, w = img.shape
    planes = flatten_bands(dwt_forward(img, levels))
    if steps is None:
        steps = default_steps(base_step, levels, step_ratio)
    if len(steps) != len(planes) or any(s <= 0 for s in steps):
        raise ValueError("need one positive step per subband")
    subbands = []
    for plane, step in zip(planes, steps):
        q = round_half_away(plane / step)
        lo, hi = int(q.min()), int(q.max())
        subbands.append(Subband(plane.shape, float(step), lo, paircode.length_for(hi - lo + 1)))
    return SubbandLayout(w, h, levels, tuple(subbands))


class FixedEncoding(NamedTuple):
    strand: str
    layout: SubbandLayout
    clamped: int


@lru_cache(maxsize=None)
def _words(length: int) -> np.ndarray:
    return np.array(paircode.codebook(length), dtype=object)


@lru_cache(maxsize=None)
def _lookup(length: int) -> dict[str, int]:
    return {w: i for i, w in enumerate(paircode.codebook(length))}


def quantize(img, layout: SubbandLayout) -> tuple[list[np.ndarray], int]:
    """Quantizer indices per band (clamped to the layout) and the clamp count."""
    planes = flatten_bands(dwt_forward(img, layout.levels))
    out = []
    clamped = 0
    for plane, sb in zip(planes, layout.subbands):
        if plane.shape != sb.shape:
            raise ValueError("layout does not match the image size")
        q = round_half_away(plane / sb.step)
        c = np.clip(q, sb.lowest, sb.highest)
        clamped += int(np.count_nonzero(c != q))
        out.append(c)
    return out, clamped


def encode_fixed(img, layout: SubbandLayout | None = None, **layout_args) -> FixedEncoding:
    if layout is None:
        layout = make_layout(img, **layout_args)
    for sb in layout.subbands:
        if sb.length_nt < 2:
            raise ValueError("word length must be >= 2")
    indices, clamped = quantize(img, layout)
    parts = []
    for q, sb in zip(indices, layout.subbands):
        parts.extend(_words(sb.length_nt)[(q - sb.lowest).ravel()].tolist())
    return FixedEncoding("".join(parts), layout, clamped)


class FixedDecoding(NamedTuple):
    indices: list[np.ndarray]
    bad: np.ndarray  # flat coefficient numbers whose word was malformed or missing


def decode_indices(seq: str, layout: SubbandLayout) -> FixedDecoding:
    """Parse every word at its layout offset; bad words decode to index 0."""
    out = []
    bad = []
    pos = 0
    k = 0
    n = len(seq)
    for sb in layout.subbands:
        lookup = _lookup(sb.length_nt)
        L = sb.length_nt
        vals = np.zeros(sb.count, dtype=np.int64)
        for i in range(sb.count):
            idx = lookup.get(seq[pos : pos + L]) if pos + L <= n else None
            if idx is None:
                bad.append(k + i)
            else:
                vals[i] = sb.lowest + idx
            pos += L
        k += sb.count
        out.append(vals.reshape(sb.shape))
    return FixedDecoding(out, np.array(bad, dtype=np.int64))


def reconstruct(indices: list[np.ndarray], layout: SubbandLayout) -> np.ndarray:
    planes = [q * sb.step for q, sb in zip(indices, layout.subbands)]
    x = dwt_inverse(unflatten_bands(planes))
    return np.clip(np.floor(x + 0.5), 0, 255).astype(np.uint8)[: layout.height, : layout.width]


def decode_fixed(seq: str, layout: SubbandLayout, width: int | None = None, height: int | None = None) -> np.ndarray:
    if width is not None and height is not None and (width, height) != (layout.width, layout.height):
        raise ValueError("image size does not match the layout")
    return reconstruct(decode_indices(seq, layout).indices, layout)
