"""PSNR, rate accounting, rate-distortion sweeps and deletion experiments.

Three methods are compared:

``jpeg-dna``   quaternary JPEG coder; parameter = quality (1..100)
``transcode``  binary JPEG coder mapped at 5 nt/byte; parameter = quality
``fixedlen``   Haar + scalar quantizer + fixed-length words; parameter =
               base quantizer step

Coding potential is raw source bits per nucleotide, ``8 * W * H / total_nt``.
Headers (and oligo overhead when ``payload_len`` is given) count towards
``total_nt`` unless ``include_headers`` is off.
"""

from __future__ import annotations

import csv
import io
import math
from dataclasses import asdict, dataclass, field
from typing import Callable, Iterable, Sequence

import numpy as np

from . import baseline, codec, fixedlen, oligos
from .channel import ChannelSpec, corrupt, derive_seed, draw, single_random_deletion
from .nucleotides import gc_fraction, max_run
from .pipeline import BlockIndexStream, forward_pipeline, inverse_pipeline

METHODS = ("jpeg-dna", "transcode", "fixedlen")
QUALITY_GRID = tuple(range(1, 101))
STEP_GRID = tuple(float(s) for s in np.round(np.geomspace(64.0, 0.25, 161), 6))
MID_GRAY = 128


def psnr(a, b) -> float:
    a = np.asarray(a, dtype=np.float64)
    b = np.asarray(b, dtype=np.float64)
    if a.shape != b.shape:
        raise ValueError(f"shape mismatch {a.shape} vs {b.shape}")
    mse = np.mean((a - b) ** 2)
    if mse == 0:
        return math.inf
    return 10.0 * math.log10(255.0**2 / mse)


@dataclass(frozen=True)
class RateReport:
    total_nt: int
    nt_per_pixel: float
    coding_potential_bits_per_nt: float
    gc_fraction: float
    max_run: int
    oligo_gc_min: float
    oligo_gc_max: float


def rate_report(
    strand: str, width: int, height: int, total_nt: int | None = None, payload_len: int | None = None
) -> RateReport:
    """Rate figures for one strand.

    GC balance is given both for the whole strand and as the extremes over
    the oligos the strand would be packed into.
    """
    total = len(strand) if total_nt is None else total_nt
    pixels = width * height
    per_oligo = [gc_fraction(o.sequence) for o in oligos.fragment(strand, payload_len or oligos.DEFAULT_PAYLOAD_LEN)]
    return RateReport(
        total,
        total / pixels,
        8.0 * pixels / total if total else math.inf,
        gc_fraction(strand),
        max_run(strand),
        min(per_oligo),
        max(per_oligo),
    )


@dataclass
class ExperimentRecord:
    method: str
    param: float
    width: int
    height: int
    psnr_db: float
    rate: RateReport
    stream_bytes: int | None = None
    corruption: str | None = None
    psnr_after_db: float | None = None

    def row(self) -> dict:
        d = {k: v for k, v in asdict(self).items() if k != "rate"}
        d.update(asdict(self.rate))
        return d


CSV_COLUMNS = (
    "method",
    "param",
    "width",
    "height",
    "psnr_db",
    "total_nt",
    "nt_per_pixel",
    "coding_potential_bits_per_nt",
    "gc_fraction",
    "max_run",
    "oligo_gc_min",
    "oligo_gc_max",
    "stream_bytes",
    "corruption",
    "psnr_after_db",
)


def records_to_csv(records: Iterable[ExperimentRecord]) -> str:
    buf = io.StringIO()
    w = csv.DictWriter(buf, CSV_COLUMNS, lineterminator="\n")
    w.writeheader()
    for r in records:
        w.writerow(r.row())
    return buf.getvalue()


# -- per-method encode/decode ----------------------------------------------


@dataclass
class Encoded:
    method: str
    param: float
    strand: str  # everything that is stored
    header_nt: int
    image: np.ndarray  # clean reconstruction
    side: object = None  # decoder side information (fixed-length layout)
    stream_bytes: int | None = None


@dataclass
class Decoded:
    image: np.ndarray
    failure: object = None
    indices: BlockIndexStream | None = None
    detail: dict = field(default_factory=dict)


def encode(img, method: str, param) -> Encoded:
    img = np.asarray(img)
    h, w = img.shape
    if method == "jpeg-dna":
        s = codec.encode_image(img, int(param))
        head = s.header_nt()
        rec = codec.decode_image(s)
        return Encoded(method, int(param), head + s.payload, len(head), rec)
    if method == "transcode":
        b = baseline.encode_binary_image(img, int(param))
        data = b.to_bytes()
        rec, _ = baseline.decode_binary_image(b)
        head = len(data) - len(b.payload)
        return Encoded(method, int(param), baseline.transcode_bytes(data), 5 * head, rec, stream_bytes=len(data))
    if method == "fixedlen":
        enc = fixedlen.encode_fixed(img, base_step=float(param))
        rec = fixedlen.decode_fixed(enc.strand, enc.layout)
        head = enc.layout.to_nt()
        return Encoded(method, float(param), enc.strand, len(head), rec, side=enc.layout)
    raise ValueError(f"unknown method {method!r}; expected one of {METHODS}")


def decode(enc: Encoded, strand: str) -> Decoded:
    """Decode a possibly damaged strand produced by :func:`encode`."""
    if enc.method == "jpeg-dna":
        try:
            img, ind = codec.decode_strand(strand)
        except codec.StreamFormatError as exc:
            return Decoded(np.full_like(enc.image, MID_GRAY), str(exc))
        return Decoded(img, ind.failure, ind)
    if enc.method == "transcode":
        try:
            img, ind = baseline.detranscode_image(strand)
        except baseline.StreamFormatError as exc:
            return Decoded(np.full_like(enc.image, MID_GRAY), str(exc))
        return Decoded(img, ind.failure, ind)
    layout = enc.side
    dec = fixedlen.decode_indices(strand, layout)
    return Decoded(fixedlen.reconstruct(dec.indices, layout), None, detail={"bad": dec.bad, "indices": dec.indices})


def total_nt(enc: Encoded, include_headers: bool = True, payload_len: int | None = None) -> int:
    if enc.method == "fixedlen":
        body = len(enc.strand)
        head = enc.header_nt
    else:
        body = len(enc.strand) - enc.header_nt
        head = enc.header_nt
    stored = body + (head if include_headers else 0)
    if payload_len is not None:
        count = -(-stored // payload_len)
        stored += count * oligos.HEADER_NT + (oligos.LENGTH_NT + 1 if include_headers else 0)
    return stored


def measure(img, method: str, param, include_headers: bool = True, payload_len: int | None = None) -> ExperimentRecord:
    img = np.asarray(img)
    h, w = img.shape
    enc = encode(img, method, param)
    rate = rate_report(enc.strand, w, h, total_nt(enc, include_headers, payload_len), payload_len)
    return ExperimentRecord(method, enc.param, w, h, psnr(img, enc.image), rate, enc.stream_bytes)


def sweep(img, method: str, params: Sequence, include_headers: bool = True, payload_len: int | None = None) -> list[ExperimentRecord]:
    return [measure(img, method, p, include_headers, payload_len) for p in params]


# -- parameter search --------------------------------------------------------


def clean_psnr(img, method: str, param) -> float:
    """PSNR of the error-free reconstruction (no entropy coding needed)."""
    if method in ("jpeg-dna", "transcode"):
        h, w = np.shape(img)
        q = int(param)
        return psnr(img, inverse_pipeline(forward_pipeline(img, q), q, w, h))
    return psnr(img, encode(img, method, param).image)


def default_grid(method: str) -> tuple:
    return STEP_GRID if method == "fixedlen" else QUALITY_GRID


def quality_search(img, method: str, target_psnr: float, grid: Sequence | None = None, psnr_of: Callable | None = None):
    """Grid point whose clean PSNR is closest to ``target_psnr``.

    The grid must be ordered by increasing PSNR (qualities ascending, steps
    descending). Bisection finds the first point at or above the target;
    that point and its predecessor are compared. Returns ``(param, psnr)``.
    """
    grid = list(default_grid(method) if grid is None else grid)
    cache: dict = {}

    def value(i):
        if i not in cache:
            p = grid[i]
            cache[i] = psnr_of(p) if psnr_of else clean_psnr(img, method, p)
        return cache[i]

    lo, hi = 0, len(grid) - 1
    if value(hi) < target_psnr:
        return grid[hi], value(hi)
    while lo < hi:
        mid = (lo + hi) // 2
        if value(mid) >= target_psnr:
            hi = mid
        else:
            lo = mid + 1
    best = min((i for i in (lo - 1, lo) if 0 <= i < len(grid)), key=lambda i: abs(value(i) - target_psnr))
    return grid[best], value(best)


# -- deletion experiment -----------------------------------------------------


@dataclass
class RobustnessResult:
    record: ExperimentRecord
    clean: np.ndarray
    damaged: np.ndarray
    position: int | None
    oligo: int | None
    failure: object
    encoded: Encoded
    decoded: Decoded


def robustness_experiment(
    img,
    method: str,
    target_psnr: float = 38.5,
    seed: int = 0,
    payload_len: int = oligos.DEFAULT_PAYLOAD_LEN,
    channel: ChannelSpec | None = None,
    param=None,
) -> RobustnessResult:
    """Encode at the parameter matching ``target_psnr``, damage, decode.

    Without ``channel`` one nucleotide is deleted at a seeded uniform
    position: anywhere in the whole strand for the variable-length methods,
    inside one seeded oligo for ``fixedlen`` (whose strand is cut with
    ``payload_len`` and reassembled). A ``channel`` spec is applied to the
    same unit instead of the single deletion.
    """
    img = np.asarray(img)
    h, w = img.shape
    if param is None:
        param, _ = quality_search(img, method, target_psnr)
    enc = encode(img, method, param)
    position = oligo_index = None
    if method == "fixedlen":
        pieces = oligos.fragment(enc.strand, payload_len)
        oligo_index = int(draw(seed, 1) % len(pieces))
        target = pieces[oligo_index].sequence
        if channel is None:
            damaged, position = single_random_deletion(target, derive_seed(seed, oligo_index))
            desc = f"deletion at {position} of oligo {oligo_index}"
        else:
            damaged, events = corrupt(target, channel)
            desc = f"{len(events)} events in oligo {oligo_index}"
        seqs = [o.sequence for o in pieces]
        seqs[oligo_index] = damaged
        strand = oligos.reassemble(seqs, payload_len=payload_len, strict=False).strand
    else:
        if channel is None:
            strand, position = single_random_deletion(enc.strand, seed)
            desc = f"deletion at {position}"
        else:
            strand, events = corrupt(enc.strand, channel)
            desc = f"{len(events)} events"
    dec = decode(enc, strand)
    rate = rate_report(enc.strand, w, h, total_nt(enc), payload_len)
    record = ExperimentRecord(
        method, enc.param, w, h, psnr(img, enc.image), rate, enc.stream_bytes, desc, psnr(img, dec.image)
    )
    return RobustnessResult(record, enc.image, dec.image, position, oligo_index, dec.failure, enc, dec)
