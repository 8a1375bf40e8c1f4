"""Random block-index streams for round-trip tests."""

import numpy as np

from jpegdna.pipeline import ZRL, Block, BlockIndexStream


def random_block(rng, max_value=7775, density=None):
    density = rng.uniform(0, 0.6) if density is None else density
    zz = np.zeros(64, dtype=np.int64)
    mask = rng.random(63) < density
    mags = rng.integers(1, max_value + 1, 63)
    small = rng.random(63) < 0.7
    mags[small] = rng.integers(1, 6, small.sum())
    zz[1:][mask] = mags[mask] * rng.choice([-1, 1], 63)[mask]
    ac = []
    run = 0
    last = 0
    for k in range(1, 64):
        if zz[k] == 0:
            run += 1
            continue
        while run > 15:
            ac.append(ZRL)
            run -= 16
        ac.append((run, int(zz[k])))
        run = 0
        last = k
    dc = int(rng.integers(-2040, 2041)) if rng.random() < 0.5 else int(rng.integers(-5, 6))
    return Block(dc, tuple(ac), last != 63)


def random_stream(rng, n_blocks=None, **kw):
    n = int(rng.integers(1, 20)) if n_blocks is None else n_blocks
    return BlockIndexStream([random_block(rng, **kw) for _ in range(n)])
