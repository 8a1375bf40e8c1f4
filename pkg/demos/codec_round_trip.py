"""Encode a test image to DNA, store it in oligos, and read it back.

Run: python3 demos/codec_round_trip.py [quality]
"""

import sys

import numpy as np
from skimage import data

from jpegdna import codec, metrics, oligos
from jpegdna.nucleotides import validate

quality = int(sys.argv[1]) if len(sys.argv) > 1 else 50
img = data.camera()

stream = codec.encode_image(img, quality)
strand = stream.to_nt()
report = validate(strand)
print(f"{img.shape[1]}x{img.shape[0]} image at quality {quality}")
print(f"  strand: {len(strand)} nt ({len(stream.header_nt())} header), {8 * img.size / len(strand):.2f} bits/nt")
print(f"  longest run {report.max_homopolymer_run}, GC {report.gc_fraction:.3f}")

pieces = oligos.fragment(strand, oligos.DEFAULT_PAYLOAD_LEN)
print(f"  {len(pieces)} oligos of up to {len(pieces[0].sequence)} nt, e.g. {pieces[1].sequence[:40]}...")

# shuffle the pool, as a sequencer would
rng = np.random.default_rng(0)
pool = [pieces[i].sequence for i in rng.permutation(len(pieces))]
back = oligos.reassemble(pool)
assert back.strand == strand and not back.missing

rec = codec.decode_image(codec.JpegDnaStream.from_nt(back.strand))
print(f"  decoded PSNR {metrics.psnr(img, rec):.2f} dB")
