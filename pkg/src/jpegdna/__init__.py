"""DNA image coding: a quaternary JPEG codec, constrained fixed-length
codes, a transcoding baseline, oligo packaging and an error channel."""

from .codec import JpegDnaStream, decode_image, decode_strand, encode_image, entropy_decode, entropy_encode
from .metrics import psnr
from .nucleotides import parse_text, validate
from .paircode import capacity, codeword, decode_value, encode_value, index_of
from .pipeline import Block, BlockIndexStream, forward_pipeline, inverse_pipeline
from .trits import build_code, nt_to_trits, trits_to_nt

__version__ = "0.1.0"
