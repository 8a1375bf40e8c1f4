import numpy as np
import pytest

from jpegdna import baseline, codec, paircode
from jpegdna.codec import JpegDnaStream, entropy_decode, entropy_encode
from jpegdna.nucleotides import max_run, validate
from jpegdna.pipeline import Block, BlockIndexStream, forward_pipeline
from jpegdna.trits import CorruptStreamError, trits_to_nt

from streams import random_stream


def test_all_zero_stream_payload():
    n = 5
    s = entropy_encode(BlockIndexStream([Block(0)] * n), 40, 8, 50)
    dc = s.dc_code.codes[0]
    eob = s.ac_code.codes[codec.EOB]
    # Only Huffman symbols: n x (DC category 0, EOB), rotation coded.
    assert len(s.payload) == n * (len(dc) + len(eob))
    assert s.payload == trits_to_nt((dc + eob) * n)


def test_dc_minus_five_uses_word_at():
    s = entropy_encode(BlockIndexStream([Block(-5)]), 8, 8, 50)
    dc_sym = trits_to_nt(s.dc_code.codes[2])
    assert s.payload.startswith(dc_sym + "AT")


def test_value_words_have_category_length():
    b = Block(3, ((0, 1), (2, -30), (0, 5000)), True)
    s = entropy_encode(BlockIndexStream([b]), 8, 8, 50)
    assert len(s.payload) == sum(len(s.dc_code.codes[sym]) for sym in [2]) + 2 + sum(
        len(s.ac_code.codes[sym]) for sym in (0x02, 0x24, 0x08, codec.EOB)
    ) + 2 + 4 + 8


def test_round_trip_random_streams(rng):
    for _ in range(300):
        ind = random_stream(rng)
        s = entropy_encode(ind, 8 * len(ind), 8, 50)
        back = entropy_decode(s)
        assert back == ind and back.failure is None
        assert max_run(s.payload) <= 3


def test_round_trip_exhaustive_small():
    # Every single-block stream with one AC value from each category.
    for cat in paircode.CATEGORIES:
        for v in {cat.lo, cat.hi, -cat.lo, -cat.hi}:
            for run in (0, 15):
                ac = ((run, v),) if v else ()
                ind = BlockIndexStream([Block(v, ac, True), Block(-v)])
                assert entropy_decode(entropy_encode(ind, 16, 8, 1)) == ind


def test_value_out_of_range():
    with pytest.raises(ValueError):
        entropy_encode(BlockIndexStream([Block(7776)]))


def test_strand_round_trip_through_header(camera):
    s = codec.encode_image(camera[:64, :80], 60)
    back = JpegDnaStream.from_nt(s.to_nt())
    assert (back.width, back.height, back.quality) == (80, 64, 60)
    assert back.dc_code == s.dc_code and back.ac_code == s.ac_code
    assert back.payload == s.payload
    assert validate(s.to_nt(), 3).homopolymer_ok


def test_header_damage_is_fatal():
    s = codec.encode_image(np.zeros((8, 8), np.uint8), 50).to_nt()
    with pytest.raises(codec.StreamFormatError):
        JpegDnaStream.from_nt("T" + s[1:])


def test_matches_binary_baseline(camera):
    img = camera[100:228, 200:360]
    for q in (15, 50, 90):
        a = codec.decode_image(codec.encode_image(img, q))
        b, _ = baseline.decode_binary_image(baseline.encode_binary_image(img, q))
        assert (a == b).all()


def test_psnr_non_decreasing_in_quality(standard_image):
    from jpegdna.metrics import psnr

    values = [psnr(standard_image, codec.decode_image(codec.encode_image(standard_image, q))) for q in range(10, 100, 10)]
    assert all(a <= b for a, b in zip(values, values[1:]))


def test_deletion_truncates_and_reports(camera):
    img = camera[:128, :128]
    s = codec.encode_image(img, 80)
    clean = entropy_decode(s)
    p = len(s.payload) // 3
    damaged = JpegDnaStream(s.width, s.height, s.quality, s.dc_code, s.ac_code, s.payload[:p] + s.payload[p + 1 :])
    got = entropy_decode(damaged)
    assert got.failure is not None and got.failure.position >= p
    assert len(got.blocks) == len(clean.blocks)
    for i, end in enumerate(clean.offsets):
        if end <= p:
            assert got.blocks[i] == clean.blocks[i]
    # Filled blocks are absolute zero: the DC chain returns to 0.
    assert sum(b.dc_diff for b in got.blocks) == 0


def test_trailing_nucleotides_reported():
    s = entropy_encode(BlockIndexStream([Block(0)]), 8, 8, 50)
    extra = trits_to_nt("0", s.payload[-1])
    got = entropy_decode(JpegDnaStream(8, 8, 50, s.dc_code, s.ac_code, s.payload + extra))
    assert got.blocks == [Block(0)] and got.failure is not None


def test_repeat_in_payload_detected():
    s = entropy_encode(BlockIndexStream([Block(0)] * 4), 32, 8, 50)
    bad = s.payload[0] + s.payload[0] + s.payload[2:]
    got = entropy_decode(JpegDnaStream(32, 8, 50, s.dc_code, s.ac_code, bad))
    assert got.failure is not None and got.failure.position == 1


def test_header_payload_junction_has_no_long_run():
    rng = np.random.default_rng(11)
    for _ in range(300):
        img = rng.integers(0, 256, (int(rng.integers(8, 30)), int(rng.integers(8, 30)))).astype(np.uint8)
        q = int(rng.integers(1, 101))
        s = codec.encode_image(img, q)
        strand = s.to_nt()
        assert max_run(strand) <= 3
        assert JpegDnaStream.from_nt(strand) == s
