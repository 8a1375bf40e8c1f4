"""One deletion, three coders.

Each coder is tuned to the same clean PSNR, then a single nucleotide is
deleted and the damaged strand decoded. Variable-length coding loses
everything after the deletion; the fixed-length coder only loses one oligo.

Run: python3 demos/deletion_robustness.py [seed]
"""

import sys

from skimage import data

from jpegdna import metrics
from jpegdna.pgm import write_pgm

seed = int(sys.argv[1]) if len(sys.argv) > 1 else 0
for name, img in (("camera", data.camera()), ("moon", data.moon())):
    print(name)
    for method in metrics.METHODS:
        res = metrics.robustness_experiment(img, method, 38.5, seed=seed)
        r = res.record
        print(f"  {method:>9} param {r.param:<10g} clean {r.psnr_db:5.2f} dB  after {r.psnr_after_db:5.2f} dB  ({r.corruption})")
        write_pgm(f"{name}_{method}_damaged.pgm", res.decoded.image)
