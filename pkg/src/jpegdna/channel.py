"""Seeded substitution/insertion/deletion channel for nucleotide strands.

Randomness comes from SplitMix64 used as a counter-based generator: draw
``k`` of seed ``s`` is ``mix64(s + (k + 1) * 0x9E3779B97F4A7C15 mod 2**64)``
with::

    mix64(z):  z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9
               z = (z ^ (z >> 27)) * 0x94D049BB133111EB
               return z ^ (z >> 31)                       (all mod 2**64)

A uniform float is ``(draw >> 11) * 2**-53``. In rates mode position ``i``
of the input uses draw ``2i`` to pick the event (deletion if
``u < del_rate``, substitution if ``u < del_rate + sub_rate``, insertion
before the symbol if ``u < del_rate + sub_rate + ins_rate``) and draw
``2i + 1`` to pick the new symbol: the ``(d % 3)``-th of the three other
nucleotides in ``A, C, G, T`` order for a substitution, ``ACGT[d % 4]`` for
an insertion. Per-oligo seeds come from :func:`derive_seed`.
"""

from __future__ import annotations

import csv
import io
from dataclasses import dataclass, field
from typing import Iterable, NamedTuple

import numpy as np

from .nucleotides import ALPHABET

MASK = (1 << 64) - 1
GAMMA = 0x9E3779B97F4A7C15
INDEX_GAMMA = 0xD1B54A32D192ED03

DELETION = "deletion"
SUBSTITUTION = "substitution"
INSERTION = "insertion"
KINDS = (DELETION, SUBSTITUTION, INSERTION)


def mix64(z: int) -> int:
    z &= MASK
    z = ((z ^ (z >> 30)) * 0xBF58476D1CE4E5B9) & MASK
    z = ((z ^ (z >> 27)) * 0x94D049BB133111EB) & MASK
    return z ^ (z >> 31)


def draw(seed: int, k: int) -> int:
    return mix64(seed + (k + 1) * GAMMA)


def draws(seed: int, start: int, count: int) -> np.ndarray:
    """Vectorised ``[draw(seed, k) for k in range(start, start + count)]``."""
    k = np.arange(start + 1, start + count + 1, dtype=np.uint64)
    with np.errstate(over="ignore"):
        z = np.uint64(seed & MASK) + k * np.uint64(GAMMA)
        z = (z ^ (z >> np.uint64(30))) * np.uint64(0xBF58476D1CE4E5B9)
        z = (z ^ (z >> np.uint64(27))) * np.uint64(0x94D049BB133111EB)
        return z ^ (z >> np.uint64(31))


def to_unit(d) -> float:
    return (int(d) >> 11) * 2.0**-53


def derive_seed(seed: int, index: int) -> int:
    """Seed for item ``index`` (e.g. an oligo) of a run seeded with ``seed``."""
    return mix64(seed ^ (((index + 1) * INDEX_GAMMA) & MASK))


class Event(NamedTuple):
    position: int
    kind: str
    before: str
    after: str


@dataclass(frozen=True)
class ChannelSpec:
    sub_rate: float = 0.0
    ins_rate: float = 0.0
    del_rate: float = 0.0
    explicit_events: tuple = field(default=())
    seed: int = 0

    def __post_init__(self):
        rates = (self.sub_rate, self.ins_rate, self.del_rate)
        if any(not 0.0 <= r <= 1.0 for r in rates) or sum(rates) > 1.0 + 1e-12:
            raise ValueError(f"invalid error rates {rates}")
        for ev in self.explicit_events:
            if ev[1] not in KINDS:
                raise ValueError(f"unknown event kind {ev[1]!r}")

    @property
    def mode(self) -> str:
        return "explicit" if self.explicit_events else "rates"


def corrupt(seq: str, spec: ChannelSpec) -> tuple[str, list[Event]]:
    if spec.mode == "explicit":
        return apply_events(seq, [_as_event(seq, ev) for ev in spec.explicit_events])
    n = len(seq)
    if n == 0 or spec.del_rate + spec.sub_rate + spec.ins_rate == 0:
        return seq, []
    d = draws(spec.seed, 0, 2 * n)
    u = (d[0::2] >> np.uint64(11)).astype(np.float64) * 2.0**-53
    pick = d[1::2]
    t_del = spec.del_rate
    t_sub = t_del + spec.sub_rate
    t_ins = t_sub + spec.ins_rate
    out = []
    events = []
    hit = np.flatnonzero(u < t_ins)
    last = 0
    for i in hit.tolist():
        out.append(seq[last:i])
        nt = seq[i]
        r = u[i]
        if r < t_del:
            events.append(Event(i, DELETION, nt, ""))
        elif r < t_sub:
            new = [c for c in ALPHABET if c != nt][int(pick[i] % np.uint64(3))]
            events.append(Event(i, SUBSTITUTION, nt, new))
            out.append(new)
        else:
            new = ALPHABET[int(pick[i] % np.uint64(4))]
            events.append(Event(i, INSERTION, "", new))
            out.append(new + nt)
        last = i + 1
    out.append(seq[last:])
    return "".join(out), events


def _as_event(seq: str, ev) -> Event:
    position, kind = ev[0], ev[1]
    replacement = ev[2] if len(ev) > 2 else None
    limit = len(seq) if kind == INSERTION else len(seq) - 1
    if not 0 <= position <= limit:
        raise IndexError(f"{kind} position {position} outside 0..{limit}")
    if kind == DELETION:
        return Event(position, kind, seq[position], "")
    if kind == SUBSTITUTION:
        new = replacement or [c for c in ALPHABET if c != seq[position]][0]
        return Event(position, kind, seq[position], new)
    return Event(position, kind, "", replacement or "A")


def apply_events(seq: str, events: Iterable[Event]) -> tuple[str, list[Event]]:
    """Apply events given in original coordinates; also replays an event log.

    Insertions at a position go before the symbol found there (or at the
    end for ``len(seq)``); at most one deletion or substitution per position.
    """
    events = sorted(events, key=lambda e: (e.position, e.kind != INSERTION))
    out = []
    last = 0
    for ev in events:
        if ev.position < last or ev.position > len(seq):
            raise IndexError(f"event at {ev.position} overlaps a previous one or is out of range")
        out.append(seq[last : ev.position])
        last = ev.position
        if ev.kind == INSERTION:
            out.append(ev.after)
        else:
            if ev.position >= len(seq):
                raise IndexError(f"{ev.kind} at {ev.position} is past the end")
            if ev.kind == SUBSTITUTION:
                out.append(ev.after)
            last = ev.position + 1
    out.append(seq[last:])
    return "".join(out), list(events)


def single_random_deletion(seq: str, seed: int) -> tuple[str, int]:
    if not seq:
        raise ValueError("cannot delete from an empty sequence")
    position = int(to_unit(draw(seed, 0)) * len(seq))
    return seq[:position] + seq[position + 1 :], position


def log_to_csv(events: Iterable[Event]) -> str:
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(["position", "kind", "before", "after"])
    for ev in events:
        w.writerow(ev)
    return buf.getvalue()


def log_from_csv(text: str) -> list[Event]:
    rows = csv.DictReader(io.StringIO(text))
    return [Event(int(r["position"]), r["kind"], r["before"], r["after"]) for r in rows]
