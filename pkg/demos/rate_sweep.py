"""Rate/distortion sweep of the three coders, written as CSV.

Run: python3 demos/rate_sweep.py out.csv
"""

import sys

from skimage import data

from jpegdna import metrics

out = sys.argv[1] if len(sys.argv) > 1 else "rate_sweep.csv"
records = []
for name, img in (("camera", data.camera()), ("moon", data.moon())):
    for method in metrics.METHODS:
        recs = metrics.sweep(img, method, metrics.default_grid(method)[::10])
        records += recs
        recs.sort(key=lambda r: r.rate.coding_potential_bits_per_nt)
        lo, hi = recs[0], recs[-1]
        print(f"{name:>6} {method:>9}: {lo.rate.coding_potential_bits_per_nt:7.2f} bits/nt at {lo.psnr_db:.2f} dB"
              f" .. {hi.rate.coding_potential_bits_per_nt:7.2f} bits/nt at {hi.psnr_db:.2f} dB")

with open(out, "w") as fh:
    fh.write(metrics.records_to_csv(records))
print(f"wrote {len(records)} rows to {out}")
