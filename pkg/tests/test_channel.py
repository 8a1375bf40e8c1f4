import math

import numpy as np
import pytest
from hypothesis import given, strategies as st

from jpegdna.channel import (
    DELETION,
    INSERTION,
    SUBSTITUTION,
    ChannelSpec,
    Event,
    apply_events,
    corrupt,
    derive_seed,
    draw,
    draws,
    log_from_csv,
    log_to_csv,
    mix64,
    single_random_deletion,
)

seqs = st.text(alphabet="ACGT", max_size=400)


def test_splitmix_reference_values():
    # First outputs of SplitMix64 seeded with 0 (published reference).
    assert draw(0, 0) == 0xE220A8397B1DCDAF
    assert draw(0, 1) == 0x6E789E6AA1B965F4
    assert draw(0, 2) == 0x06C45D188009454F
    assert [int(x) for x in draws(0, 0, 3)] == [draw(0, k) for k in range(3)]


def test_vectorised_draws_match_scalar():
    seed = 0xDEADBEEF12345678
    assert [int(x) for x in draws(seed, 5, 50)] == [draw(seed, k) for k in range(5, 55)]


def test_zero_rates_identity():
    out, log = corrupt("ACGTACGT", ChannelSpec(seed=3))
    assert out == "ACGTACGT" and log == []


def test_explicit_deletion():
    s = "ACGTACGTAC"
    out, log = corrupt(s, ChannelSpec(explicit_events=((5, DELETION),)))
    assert out == s[:5] + s[6:] and len(out) == 9
    assert log == [Event(5, DELETION, s[5], "")]


def test_explicit_bounds():
    with pytest.raises(IndexError):
        corrupt("ACGT", ChannelSpec(explicit_events=((4, DELETION),)))
    out, _ = corrupt("ACGT", ChannelSpec(explicit_events=((4, INSERTION, "G"),)))
    assert out == "ACGTG"


def test_delete_everything():
    out, log = corrupt("ACGTAC", ChannelSpec(del_rate=1.0))
    assert out == "" and len(log) == 6 and all(e.kind == DELETION for e in log)


def test_invalid_rates():
    with pytest.raises(ValueError):
        ChannelSpec(del_rate=0.7, sub_rate=0.5)
    with pytest.raises(ValueError):
        ChannelSpec(sub_rate=-0.1)


@given(seqs, st.integers(0, 2**64 - 1), st.floats(0, 0.3), st.floats(0, 0.3), st.floats(0, 0.3))
def test_log_replays_and_lengths_add_up(s, seed, d, sub, ins):
    spec = ChannelSpec(sub, ins, d, seed=seed)
    out, log = corrupt(s, spec)
    assert corrupt(s, spec) == (out, log)
    assert apply_events(s, log)[0] == out
    n_ins = sum(e.kind == INSERTION for e in log)
    n_del = sum(e.kind == DELETION for e in log)
    assert len(out) == len(s) + n_ins - n_del
    for e in log:
        if e.kind == SUBSTITUTION:
            assert e.before != e.after
    assert log_from_csv(log_to_csv(log)) == log


def test_rates_converge():
    n = 10**6
    s = "ACGT" * (n // 4)
    rates = {DELETION: 0.01, SUBSTITUTION: 0.02, INSERTION: 0.005}
    _, log = corrupt(s, ChannelSpec(rates[SUBSTITUTION], rates[INSERTION], rates[DELETION], seed=42))
    for kind, p in rates.items():
        count = sum(e.kind == kind for e in log)
        assert abs(count - n * p) <= 3 * math.sqrt(n * p * (1 - p))


def test_single_random_deletion_deterministic():
    s = "ACGT" * 50
    a = single_random_deletion(s, 9)
    assert a == single_random_deletion(s, 9)
    out, p = a
    assert len(out) == len(s) - 1 and out == s[:p] + s[p + 1 :]
    positions = {single_random_deletion(s, k)[1] for k in range(200)}
    assert len(positions) > 100


def test_derived_seeds_differ():
    assert len({derive_seed(7, i) for i in range(1000)}) == 1000
    assert derive_seed(7, 0) != derive_seed(8, 0)


def test_mix64_is_masked():
    assert 0 <= mix64(2**70 + 5) < 2**64
