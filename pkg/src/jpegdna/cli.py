"""Command-line entry point: ``jpegdna <subcommand> ...``.

Exit codes: 0 success, 2 input/format error, 3 corruption detected (partial
output was still written).
"""

from __future__ import annotations

import argparse
import logging
import sys
from pathlib import Path

import numpy as np

from . import baseline, codec, fixedlen, metrics, oligos, paircode
from .channel import DELETION, ChannelSpec, corrupt, derive_seed, log_to_csv
from .nucleotides import SequenceFormatError, format_fasta, parse_fasta
from .pgm import PGMError, read_pgm, write_pgm

EXIT_OK = 0
EXIT_FORMAT = 2
EXIT_CORRUPT = 3

log = logging.getLogger("jpegdna")


class FormatError(Exception):
    pass


def _read_records(path) -> list[tuple[str, str]]:
    text = Path(path).read_text() if path != "-" else sys.stdin.read()
    records = parse_fasta(text)
    if not records:
        raise FormatError(f"{path}: no sequences found")
    return records


def _write_records(path, records, fmt: str) -> None:
    if fmt == "fasta":
        text = format_fasta(records)
    else:
        text = "".join(seq + "\n" for _, seq in records)
    if path == "-":
        sys.stdout.write(text)
    else:
        Path(path).write_text(text)


def _strand_from(records) -> tuple[str, list[int]]:
    """A single strand, reassembling oligo records when present."""
    if len(records) > 1 or records[0][0].startswith("oligo_"):
        r = oligos.reassemble([seq for _, seq in records], strict=False)
        return r.strand, r.missing
    return records[0][1], []


def cmd_encode(args) -> int:
    img = read_pgm(args.input)
    stream = codec.encode_image(img, args.quality)
    _write_records(args.output, [("jpegdna", stream.to_nt())], args.format)
    return EXIT_OK


def cmd_decode(args) -> int:
    strand, missing = _strand_from(_read_records(args.input))
    try:
        img, indices = codec.decode_strand(strand)
    except baseline.StreamFormatError as exc:
        raise FormatError(str(exc)) from None
    write_pgm(args.output, img)
    if indices.failure is not None or missing:
        log.warning("corruption detected: %s; missing oligos %s", indices.failure, missing)
        return EXIT_CORRUPT
    return EXIT_OK


def cmd_transcode(args) -> int:
    if args.reverse:
        strand, _ = _strand_from(_read_records(args.input))
        try:
            data = baseline.detranscode_bytes(strand)
        except baseline.CorruptStreamError as exc:
            data, bad = baseline.detranscode_lenient(strand)
            Path(args.output).write_bytes(data)
            log.warning("corrupt groups %s (%s)", bad[:10], exc)
            return EXIT_CORRUPT
        Path(args.output).write_bytes(data)
        return EXIT_OK
    data = Path(args.input).read_bytes() if args.input != "-" else sys.stdin.buffer.read()
    _write_records(args.output, [(Path(args.input).name, baseline.transcode_bytes(data))], args.format)
    return EXIT_OK


def cmd_fixedlen_encode(args) -> int:
    img = read_pgm(args.input)
    enc = fixedlen.encode_fixed(img, base_step=args.step, levels=args.levels, step_ratio=args.step_ratio)
    if enc.clamped:
        log.warning("%d coefficients clamped", enc.clamped)
    _write_records(args.output, [("layout", enc.layout.to_nt()), ("payload", enc.strand)], args.format)
    return EXIT_OK


def cmd_fixedlen_decode(args) -> int:
    records = dict(_read_records(args.input))
    if "layout" not in records:
        raise FormatError("expected a 'layout' record")
    try:
        layout = fixedlen.SubbandLayout.from_nt(records.pop("layout"))
    except (ValueError, baseline.CorruptStreamError) as exc:
        raise FormatError(f"unreadable layout: {exc}") from None
    if "payload" in records:
        strand, missing = records["payload"], []
    else:
        strand, missing = _strand_from(list(records.items()))
    dec = fixedlen.decode_indices(strand, layout)
    write_pgm(args.output, fixedlen.reconstruct(dec.indices, layout))
    if len(dec.bad) or missing:
        log.warning("%d malformed words, missing oligos %s", len(dec.bad), missing)
        return EXIT_CORRUPT
    return EXIT_OK


def cmd_oligos(args) -> int:
    records = _read_records(args.input)
    if args.action == "pack":
        if len(records) != 1:
            raise FormatError(f"expected one strand to pack, got {len(records)}")
        size = args.payload_len or oligos.DEFAULT_PAYLOAD_LEN
        _write_records(args.output, oligos.to_fasta_records(oligos.fragment(records[0][1], size)), "fasta")
        return EXIT_OK
    r = oligos.reassemble([seq for _, seq in records], payload_len=args.payload_len, strict=not args.lenient)
    _write_records(args.output, [("strand", r.strand)], args.format)
    if r.missing or r.dropped:
        log.warning("missing oligos %s, dropped inputs %s", r.missing, r.dropped)
        return EXIT_CORRUPT
    return EXIT_OK


def cmd_corrupt(args) -> int:
    records = _read_records(args.input)
    out = []
    rows = []
    for i, (name, seq) in enumerate(records):
        seed = args.seed if len(records) == 1 else derive_seed(args.seed, i)
        if args.delete_at is not None:
            if i:
                out.append((name, seq))
                continue
            spec = ChannelSpec(explicit_events=((args.delete_at, DELETION),))
        else:
            spec = ChannelSpec(args.sub_rate, args.ins_rate, args.del_rate, seed=seed)
        try:
            damaged, events = corrupt(seq, spec)
        except IndexError as exc:
            raise FormatError(str(exc)) from None
        out.append((name, damaged))
        rows.append((name, events))
    _write_records(args.output, out, args.format)
    if args.log:
        text = "".join(
            f"# {name}\n" + log_to_csv(events) if len(rows) > 1 else log_to_csv(events)
            for name, events in rows
        )
        Path(args.log).write_text(text)
    return EXIT_OK


def cmd_psnr(args) -> int:
    print(f"{metrics.psnr(read_pgm(args.a), read_pgm(args.b)):.4f}")
    return EXIT_OK


def _params(method, text):
    if text:
        vals = [float(v) for v in text.split(",")]
    else:
        vals = [4.0, 6.0, 8.0, 12.0, 16.0, 24.0] if method == "fixedlen" else [10, 20, 30, 40, 50, 60, 70, 80, 90]
    return vals if method == "fixedlen" else [int(v) for v in vals]


def cmd_sweep(args) -> int:
    img = read_pgm(args.input)
    recs = []
    for method in args.method:
        recs.extend(
            metrics.sweep(img, method, _params(method, args.params), not args.exclude_headers, args.payload_len)
        )
    text = metrics.records_to_csv(recs)
    if args.csv:
        Path(args.csv).write_text(text)
    else:
        sys.stdout.write(text)
    return EXIT_OK


def cmd_robustness(args) -> int:
    img = read_pgm(args.input)
    res = metrics.robustness_experiment(img, args.method, args.target_psnr, args.seed, args.payload_len)
    prefix = args.out_prefix or Path(args.input).stem + f"_{args.method}"
    write_pgm(f"{prefix}_clean.pgm", res.clean)
    write_pgm(f"{prefix}_damaged.pgm", res.damaged)
    text = metrics.records_to_csv([res.record])
    if args.csv:
        Path(args.csv).write_text(text)
    else:
        sys.stdout.write(text)
    return EXIT_OK


def cmd_codebook(args) -> int:
    if args.length > 8:
        raise FormatError("codebook dumps are limited to lengths <= 8")
    for i, w in enumerate(paircode.codebook(args.length)):
        print(f"{i}\t{w}")
    return EXIT_OK


def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="jpegdna", description="DNA image coding toolkit")
    p.add_argument("-v", "--verbose", action="store_true")
    sub = p.add_subparsers(dest="command", required=True)

    def fmt(sp):
        sp.add_argument("--format", choices=("fasta", "txt"), default="fasta")

    sp = sub.add_parser("encode", help="PGM -> JPEG-DNA strand")
    sp.add_argument("input")
    sp.add_argument("-o", "--output", default="-")
    sp.add_argument("--quality", type=int, default=75)
    fmt(sp)
    sp.set_defaults(func=cmd_encode)

    sp = sub.add_parser("decode", help="JPEG-DNA strand (or oligos) -> PGM")
    sp.add_argument("input")
    sp.add_argument("-o", "--output", required=True)
    sp.set_defaults(func=cmd_decode)

    sp = sub.add_parser("transcode", help="any file -> 5 nt/byte strand (or back with --reverse)")
    sp.add_argument("input")
    sp.add_argument("-o", "--output", default="-")
    sp.add_argument("--reverse", action="store_true")
    fmt(sp)
    sp.set_defaults(func=cmd_transcode)

    sp = sub.add_parser("fixedlen-encode", help="PGM -> fixed-length layout + payload")
    sp.add_argument("input")
    sp.add_argument("-o", "--output", default="-")
    sp.add_argument("--step", type=float, default=8.0)
    sp.add_argument("--levels", type=int, default=3)
    sp.add_argument("--step-ratio", type=float, default=2.0)
    fmt(sp)
    sp.set_defaults(func=cmd_fixedlen_encode)

    sp = sub.add_parser("fixedlen-decode", help="fixed-length layout + payload (or oligos) -> PGM")
    sp.add_argument("input")
    sp.add_argument("-o", "--output", required=True)
    sp.set_defaults(func=cmd_fixedlen_decode)

    sp = sub.add_parser("oligos", help="cut a strand into oligos or put them back")
    sp.add_argument("action", choices=("pack", "unpack"))
    sp.add_argument("input")
    sp.add_argument("-o", "--output", default="-")
    sp.add_argument("--payload-len", type=int, default=None)
    sp.add_argument("--lenient", action="store_true", help="resolve conflicting duplicates instead of failing")
    fmt(sp)
    sp.set_defaults(func=cmd_oligos)

    sp = sub.add_parser("corrupt", help="inject seeded sequencing errors")
    sp.add_argument("input")
    sp.add_argument("-o", "--output", default="-")
    sp.add_argument("--del-rate", type=float, default=0.0)
    sp.add_argument("--sub-rate", type=float, default=0.0)
    sp.add_argument("--ins-rate", type=float, default=0.0)
    sp.add_argument("--seed", type=int, default=0)
    sp.add_argument("--delete-at", type=int, default=None, metavar="POS")
    sp.add_argument("--log", help="write the event log as CSV")
    fmt(sp)
    sp.set_defaults(func=cmd_corrupt)

    sp = sub.add_parser("psnr", help="PSNR between two PGM images")
    sp.add_argument("a")
    sp.add_argument("b")
    sp.set_defaults(func=cmd_psnr)

    sp = sub.add_parser("sweep", help="rate/PSNR sweep to CSV")
    sp.add_argument("input")
    sp.add_argument("--method", action="append", choices=metrics.METHODS)
    sp.add_argument("--params", help="comma-separated qualities or steps")
    sp.add_argument("--csv")
    sp.add_argument("--payload-len", type=int, default=None, help="count oligo overhead")
    sp.add_argument("--exclude-headers", action="store_true")
    sp.set_defaults(func=cmd_sweep)

    sp = sub.add_parser("robustness", help="single-deletion experiment at a target PSNR")
    sp.add_argument("input")
    sp.add_argument("--method", choices=metrics.METHODS, default="jpeg-dna")
    sp.add_argument("--target-psnr", type=float, default=38.5)
    sp.add_argument("--seed", type=int, default=0)
    sp.add_argument("--payload-len", type=int, default=oligos.DEFAULT_PAYLOAD_LEN)
    sp.add_argument("--out-prefix")
    sp.add_argument("--csv")
    sp.set_defaults(func=cmd_robustness)

    sp = sub.add_parser("codebook", help="list all pair-code words of a length")
    sp.add_argument("--length", type=int, required=True)
    sp.set_defaults(func=cmd_codebook)
    return p


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    logging.basicConfig(level=logging.INFO if args.verbose else logging.WARNING, format="%(levelname)s: %(message)s")
    if args.command == "sweep" and not args.method:
        args.method = ["jpeg-dna"]
    try:
        return args.func(args)
    except (FormatError, SequenceFormatError, PGMError, baseline.StreamFormatError, oligos.OligoError) as exc:
        log.error("%s", exc)
        return EXIT_FORMAT
    except (OSError, ValueError) as exc:
        log.error("%s", exc)
        return EXIT_FORMAT


if __name__ == "__main__":
    sys.exit(main())
