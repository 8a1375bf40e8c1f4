"""Nucleotide alphabet, constraint checks and text/FASTA I/O.

Sequences are plain ``str`` objects over ``"ACGT"``. Every module uses the
total order ``A < C < G < T`` whenever it needs to enumerate or break ties.
"""

from __future__ import annotations

import re
from dataclasses import dataclass, field
from typing import Iterable, Iterator, TextIO

ALPHABET = "ACGT"
GC = frozenset("GC")
AT = frozenset("AT")

HOMOPOLYMER = "homopolymer"
GC_BALANCE = "gc"


class SequenceFormatError(ValueError):
    """Raised when text cannot be parsed as a nucleotide sequence."""

    def __init__(self, message: str, position: int | None = None):
        super().__init__(message)
        self.position = position


@dataclass(frozen=True)
class ConstraintReport:
    length: int
    max_homopolymer_run: int
    gc_count: int
    at_count: int
    violations: tuple[tuple[int, str], ...] = field(default=())

    @property
    def homopolymer_ok(self) -> bool:
        return not any(kind == HOMOPOLYMER for _, kind in self.violations)

    @property
    def gc_ok(self) -> bool:
        return self.gc_count <= self.at_count

    @property
    def ok(self) -> bool:
        return not self.violations

    @property
    def gc_fraction(self) -> float:
        return self.gc_count / self.length if self.length else 0.0


def runs(seq: str) -> Iterator[tuple[int, int]]:
    """Yield ``(start, length)`` for every maximal homopolymer run."""
    n = len(seq)
    i = 0
    while i < n:
        j = i + 1
        while j < n and seq[j] == seq[i]:
            j += 1
        yield i, j - i
        i = j


def max_run(seq: str) -> int:
    return max((length for _, length in runs(seq)), default=0)


def gc_fraction(seq: str) -> float:
    if not seq:
        return 0.0
    return (seq.count("G") + seq.count("C")) / len(seq)


def validate(seq: str, max_run: int = 3) -> ConstraintReport:
    """Check the homopolymer and GC-balance rules on one unit.

    Every maximal run longer than ``max_run`` is reported at its start
    position. A GC violation (reported at position 0) is raised when the
    sequence holds strictly more G/C than A/T symbols. An empty sequence has
    a maximal run of 0.
    """
    if max_run < 1:
        raise ValueError("max_run must be >= 1")
    violations = []
    longest = 0
    for start, length in runs(seq):
        longest = max(longest, length)
        if length > max_run:
            violations.append((start, HOMOPOLYMER))
    gc = seq.count("G") + seq.count("C")
    at = len(seq) - gc
    if gc > at:
        violations.append((0, GC_BALANCE))
    return ConstraintReport(len(seq), longest, gc, at, tuple(violations))


_WS = re.compile(r"\s+")


def parse_text(text: str) -> str:
    """Parse a nucleotide string, ignoring case and whitespace."""
    out = []
    for i, ch in enumerate(_WS.sub("", text)):
        up = ch.upper()
        if up not in ALPHABET:
            raise SequenceFormatError(f"invalid nucleotide {ch!r} at index {i}", i)
        out.append(up)
    return "".join(out)


def emit_text(seq: str) -> str:
    return seq + "\n"


def write_fasta(records: Iterable[tuple[str, str]], handle: TextIO, width: int = 80) -> None:
    for name, seq in records:
        handle.write(f">{name}\n")
        for i in range(0, len(seq), width):
            handle.write(seq[i : i + width] + "\n")
        if not seq:
            handle.write("\n")


def format_fasta(records: Iterable[tuple[str, str]], width: int = 80) -> str:
    import io

    buf = io.StringIO()
    write_fasta(records, buf, width)
    return buf.getvalue()


def parse_fasta(text: str) -> list[tuple[str, str]]:
    """Parse FASTA text into ``(id, sequence)`` records.

    Text without any ``>`` header is read as plain format, one sequence per
    non-empty line, with ids ``seq_<n>``.
    """
    lines = text.splitlines()
    if not any(line.startswith(">") for line in lines):
        return [
            (f"seq_{i}", parse_text(line))
            for i, line in enumerate(l for l in lines if l.strip())
        ]
    records: list[tuple[str, str]] = []
    name = None
    chunks: list[str] = []
    for lineno, line in enumerate(lines):
        if line.startswith(">"):
            if name is not None:
                records.append((name, "".join(chunks)))
            name = line[1:].strip().split()[0] if line[1:].strip() else ""
            chunks = []
        elif line.strip():
            if name is None:
                raise SequenceFormatError(f"sequence data before first header on line {lineno + 1}")
            try:
                chunks.append(parse_text(line))
            except SequenceFormatError as exc:
                raise SequenceFormatError(f"line {lineno + 1}: {exc}", exc.position) from None
    if name is not None:
        records.append((name, "".join(chunks)))
    return records
