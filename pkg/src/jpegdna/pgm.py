"""Binary PGM (P5, maxval 255) reading and writing."""

from __future__ import annotations

import numpy as np


class PGMError(ValueError):
    pass


def _tokens(data: bytes):
    pos = 0
    n = len(data)
    while True:
        while pos < n and (data[pos : pos + 1].isspace() or data[pos : pos + 1] == b"#"):
            if data[pos : pos + 1] == b"#":
                while pos < n and data[pos : pos + 1] not in (b"\n", b"\r"):
                    pos += 1
            else:
                pos += 1
        start = pos
        while pos < n and not data[pos : pos + 1].isspace() and data[pos : pos + 1] != b"#":
            pos += 1
        if start == pos:
            raise PGMError("truncated PGM header")
        yield data[start:pos], pos


def decode_pgm(data: bytes) -> np.ndarray:
    tok = _tokens(data)
    try:
        magic, _ = next(tok)
        if magic != b"P5":
            raise PGMError(f"not a binary PGM (magic {magic!r})")
        width = int(next(tok)[0])
        height = int(next(tok)[0])
        maxval, pos = next(tok)
        maxval = int(maxval)
    except ValueError as exc:
        raise PGMError(str(exc)) from None
    if maxval != 255:
        raise PGMError(f"only maxval 255 is supported, got {maxval}")
    pixels = data[pos + 1 : pos + 1 + width * height]
    if len(pixels) != width * height:
        raise PGMError("truncated PGM pixel data")
    return np.frombuffer(pixels, dtype=np.uint8).reshape(height, width).copy()


def encode_pgm(img: np.ndarray) -> bytes:
    img = np.asarray(img, dtype=np.uint8)
    h, w = img.shape
    return f"P5\n{w} {h}\n255\n".encode() + img.tobytes()


def read_pgm(path) -> np.ndarray:
    with open(path, "rb") as f:
        return decode_pgm(f.read())


def write_pgm(path, img: np.ndarray) -> None:
    with open(path, "wb") as f:
        f.write(encode_pgm(img))
