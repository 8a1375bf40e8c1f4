import math

import numpy as np
import pytest

from jpegdna.pipeline import (
    ZIGZAG,
    ZRL,
    Block,
    BlockIndexStream,
    forward_pipeline,
    inverse_pipeline,
    quant_table,
    quantized_coefficients,
    run_length,
)

# Zigzag order as printed in the JPEG standard (row-major positions).
STANDARD_ZIGZAG = [
    0, 1, 8, 16, 9, 2, 3, 10, 17, 24, 32, 25, 18, 11, 4, 5,
    12, 19, 26, 33, 40, 48, 41, 34, 27, 20, 13, 6, 7, 14, 21, 28,
    35, 42, 49, 56, 57, 50, 43, 36, 29, 22, 15, 23, 30, 37, 44, 51,
    58, 59, 52, 45, 38, 31, 39, 46, 53, 60, 61, 54, 47, 55, 62, 63,
]


def direct_dct_quantize(block, quality):
    """Textbook 8x8 DCT-II by the double cosine sum, then quantize."""
    q = quant_table(quality)
    f = block.astype(float) - 128.0
    out = np.zeros((8, 8), dtype=np.int64)
    for u in range(8):
        for v in range(8):
            cu = 1 / math.sqrt(2) if u == 0 else 1.0
            cv = 1 / math.sqrt(2) if v == 0 else 1.0
            s = 0.0
            for x in range(8):
                for y in range(8):
                    s += f[x, y] * math.cos((2 * x + 1) * u * math.pi / 16) * math.cos((2 * y + 1) * v * math.pi / 16)
            # exact ties (e.g. 2.5) land a few ulps off either way; snap first
            val = round(0.25 * cu * cv * s / q[u, v], 9)
            out[u, v] = int(math.copysign(math.floor(abs(val) + 0.5), val))
    return out


def test_zigzag_matches_standard():
    assert ZIGZAG.tolist() == STANDARD_ZIGZAG


def test_quality_scaling():
    assert quant_table(50)[0, 0] == 16
    assert (quant_table(100) == 1).all()
    assert quant_table(10)[0, 0] == 80
    assert quant_table(1).max() == 255
    with pytest.raises(ValueError):
        quant_table(0)


def test_uniform_image_gives_empty_blocks():
    s = forward_pipeline(np.full((16, 24), 128, np.uint8), 30)
    assert len(s) == 6
    assert all(b == Block(0, (), True) for b in s.blocks)


def test_constant_255_dc():
    s = forward_pipeline(np.full((16, 16), 255, np.uint8), 50)
    # DC of a constant block is 8 * 127 = 1016; 1016 / 16 = 63.5 rounds to 64.
    assert s.blocks[0] == Block(64, (), True)
    assert all(b == Block(0, (), True) for b in s.blocks[1:])


def test_impulse_block_matches_oracle():
    img = np.full((8, 8), 128, np.uint8)
    img[0, 0] = 255
    got = quantized_coefficients(img, 50)[0, 0]
    assert (got == direct_dct_quantize(img, 50)).all()


def test_random_blocks_match_oracle(rng):
    for _ in range(5):
        img = rng.integers(0, 256, (8, 8)).astype(np.uint8)
        q = int(rng.integers(1, 101))
        assert (quantized_coefficients(img, q)[0, 0] == direct_dct_quantize(img, q)).all()


def test_run_length_with_zrl():
    coef = np.zeros((2, 8, 8), dtype=np.int64)
    flat = coef.reshape(2, 64)
    flat[0, ZIGZAG[63]] = 7  # 62 zeros before the last position
    flat[1, ZIGZAG[0]] = 3
    flat[1, ZIGZAG[17]] = -2
    s = run_length(coef)
    s.check()
    assert s.blocks[0] == Block(0, (ZRL, ZRL, ZRL, (14, 7)), False)
    assert s.blocks[1] == Block(3, (ZRL, (0, -2)), True)


def test_stream_invariants_on_noise(rng):
    img = rng.integers(0, 256, (40, 56)).astype(np.uint8)
    for q in (5, 50, 95):
        forward_pipeline(img, q).check()


def test_inverse_crops_padding(rng):
    img = rng.integers(0, 256, (13, 21)).astype(np.uint8)
    out = inverse_pipeline(forward_pipeline(img, 100), 100, 21, 13)
    assert out.shape == (13, 21)
    assert np.abs(out.astype(int) - img).max() <= 2


def test_dc_chain_reconstructs_absolute(rng):
    img = rng.integers(0, 256, (32, 32)).astype(np.uint8)
    s = forward_pipeline(img, 75)
    dcs = np.cumsum([b.dc_diff for b in s.blocks])
    assert (dcs == quantized_coefficients(img, 75)[:, :, 0, 0].ravel()).all()


def test_check_rejects_overrun():
    with pytest.raises(ValueError):
        BlockIndexStream([Block(0, ((15, 3),) * 4, False)]).check()
