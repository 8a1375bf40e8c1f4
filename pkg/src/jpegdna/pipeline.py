"""Block DCT transform and quantization shared by both entropy coders.

The forward path follows baseline JPEG for a single 8-bit luminance plane:
edge-replicated padding to multiples of 8, level shift by -128, orthonormal
8x8 type-II DCT, division by the quality-scaled luminance table, rounding
half away from zero, zigzag scan, DC differences in raster block order and
AC (run, value) pairs. A ``(15, 0)`` pair is the 16-zero extension (ZRL);
``eob`` marks that the block ends in zeros.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np
from scipy.fft import dctn, idctn

BASE_LUMA = np.array(
    [
        [16, 11, 10, 16, 24, 40, 51, 61],
        [12, 12, 14, 19, 26, 58, 60, 55],
        [14, 13, 16, 24, 40, 57, 69, 56],
        [14, 17, 22, 29, 51, 87, 80, 62],
        [18, 22, 37, 56, 68, 109, 103, 77],
        [24, 35, 55, 64, 81, 104, 113, 92],
        [49, 64, 78, 87, 103, 121, 120, 101],
        [72, 92, 95, 98, 112, 100, 103, 99],
    ],
    dtype=np.int64,
)

ZRL = (15, 0)


def _zigzag() -> np.ndarray:
    order = sorted(
        ((r, c) for r in range(8) for c in range(8)),
        key=lambda rc: (rc[0] + rc[1], rc[0] if (rc[0] + rc[1]) % 2 else rc[1]),
    )
    return np.array([r * 8 + c for r, c in order])


ZIGZAG = _zigzag()


def quant_table(quality: int) -> np.ndarray:
    """Luminance table scaled with the classical quality law."""
    if not 1 <= quality <= 100:
        raise ValueError(f"quality must be in 1..100, got {quality}")
    scale = 5000.0 / quality if quality < 50 else 200.0 - 2.0 * quality
    table = np.floor(BASE_LUMA * scale / 100.0 + 0.5)
    return np.clip(table, 1, 255).astype(np.int64)


def round_half_away(x: np.ndarray) -> np.ndarray:
    # Snap first so values like 63.4999999999 from the float DCT land on .5.
    x = np.round(x, 9)
    return (np.sign(x) * np.floor(np.abs(x) + 0.5)).astype(np.int64)


@dataclass(frozen=True)
class Block:
    dc_diff: int
    ac: tuple[tuple[int, int], ...] = ()
    eob: bool = True


@dataclass
class DecodeFailure:
    position: int
    block: int
    reason: str


@dataclass
class BlockIndexStream:
    blocks: list[Block]
    failure: DecodeFailure | None = field(default=None, compare=False)
    # End offset of every block inside the coded stream, filled by decoders.
    offsets: list[int] | None = field(default=None, compare=False, repr=False)

    def __len__(self):
        return len(self.blocks)

    def check(self) -> None:
        for i, b in enumerate(self.blocks):
            used = 0
            for run, value in b.ac:
                if not 0 <= run <= 15:
                    raise ValueError(f"block {i}: run {run} out of range")
                if value == 0 and (run, value) != ZRL:
                    raise ValueError(f"block {i}: zero AC value with run {run}")
                used += run + 1
            if used > 63:
                raise ValueError(f"block {i}: AC entries overrun the block")
            if b.eob != (used < 63):
                raise ValueError(f"block {i}: inconsistent end-of-block flag")


def pad_to_blocks(img: np.ndarray, size: int = 8) -> np.ndarray:
    h, w = img.shape
    ph = -h % size
    pw = -w % size
    if ph or pw:
        img = np.pad(img, ((0, ph), (0, pw)), mode="edge")
    return img


def _as_gray8(img) -> np.ndarray:
    img = np.asarray(img)
    if img.ndim != 2:
        raise ValueError("expected a 2-D grayscale image")
    if img.size == 0:
        raise ValueError("empty image")
    if img.dtype != np.uint8:
        if img.min() < 0 or img.max() > 255:
            raise ValueError("samples must lie in [0, 255]")
        img = img.astype(np.uint8)
    return img


def to_blocks(img: np.ndarray) -> np.ndarray:
    h, w = img.shape
    return img.reshape(h // 8, 8, w // 8, 8).swapaxes(1, 2)


def from_blocks(blocks: np.ndarray) -> np.ndarray:
    by, bx = blocks.shape[:2]
    return blocks.swapaxes(1, 2).reshape(by * 8, bx * 8)


def quantized_coefficients(img, quality: int) -> np.ndarray:
    """Quantized DCT indices, shape ``(blocks_y, blocks_x, 8, 8)``."""
    img = pad_to_blocks(_as_gray8(img))
    coef = dctn(to_blocks(img).astype(np.float64) - 128.0, axes=(2, 3), norm="ortho")
    return round_half_away(coef / quant_table(quality))


def forward_pipeline(img, quality: int) -> BlockIndexStream:
    return run_length(quantized_coefficients(img, quality))


def run_length(q: np.ndarray) -> BlockIndexStream:
    """DC differences and AC (run, value) pairs from ``(..., 8, 8)`` indices."""
    zz = q.reshape(-1, 64)[:, ZIGZAG]
    blocks = []
    prev_dc = 0
    for row in zz.tolist():
        dc = row[0]
        ac = []
        run = 0
        last = 0
        for k in range(1, 64):
            v = row[k]
            if v == 0:
                run += 1
                continue
            while run > 15:
                ac.append(ZRL)
                run -= 16
            ac.append((run, v))
            run = 0
            last = k
        blocks.append(Block(dc - prev_dc, tuple(ac), last != 63))
        prev_dc = dc
    return BlockIndexStream(blocks)


def stream_to_coefficients(indices: BlockIndexStream, blocks_y: int, blocks_x: int) -> np.ndarray:
    n = blocks_y * blocks_x
    if len(indices.blocks) != n:
        raise ValueError(f"expected {n} blocks, got {len(indices.blocks)}")
    zz = np.zeros((n, 64), dtype=np.int64)
    dc = 0
    for i, b in enumerate(indices.blocks):
        dc += b.dc_diff
        zz[i, 0] = dc
        pos = 1
        for run, v in b.ac:
            pos += run
            if v:
                zz[i, pos] = v
            pos += 1
    out = np.zeros_like(zz)
    out[:, ZIGZAG] = zz
    return out.reshape(blocks_y, blocks_x, 8, 8)


def block_grid(width: int, height: int) -> tuple[int, int]:
    return -(-height // 8), -(-width // 8)


def inverse_pipeline(indices: BlockIndexStream, quality: int, width: int, height: int) -> np.ndarray:
    by, bx = block_grid(width, height)
    q = stream_to_coefficients(indices, by, bx)
    pix = idctn((q * quant_table(quality)).astype(np.float64), axes=(2, 3), norm="ortho") + 128.0
    img = np.clip(np.floor(pix + 0.5), 0, 255).astype(np.uint8)
    return from_blocks(img)[:height, :width]


def zero_fill(blocks: list[Block], total: int) -> list[Block]:
    """Pad ``blocks`` to ``total`` with blocks whose absolute coefficients are
    all zero (mid-gray after the inverse pipeline)."""
    missing = total - len(blocks)
    if missing <= 0:
        return blocks
    dc = sum(b.dc_diff for b in blocks)
    return blocks + [Block(-dc)] + [Block(0)] * (missing - 1)
