"""
Counting crests in a user-supplied sample
=========================================

Usage: ``python count_crests.py sample.csv [h_min h_max]``

Runs a dimension-0 bandwidth sweep on a 1D or 2D sample and reports, for
each bandwidth, how many modes of the density stand out (landscape levels
whose peak exceeds a fraction of the first), then the topologically aware
bandwidth. No data ships with the package; use any CSV of coordinates.
"""

import sys

from flamelets import BandwidthRange, bandwidth_sweep, io, select_bandwidth_ta

RELATIVE = 0.05  # a level counts as a crest if its peak is at least this fraction of level 1

path = sys.argv[1]
h_min, h_max = (float(v) for v in sys.argv[2:4]) if len(sys.argv) > 3 else (0.05, 5.0)
sample = io.ingest_csv(path)
flamelet = bandwidth_sweep(sample, BandwidthRange(h_min, h_max, 24), dims=(0,), K=10)[0]

peaks = flamelet.surface.max(axis=2)  # (K, sigma)
for i, h in enumerate(flamelet.sigma.native):
    crests = int((peaks[:, i] >= RELATIVE * peaks[0, i]).sum()) if peaks[0, i] > 0 else 0
    print(f"h = {h:8.4f}   crests: {crests}")
k = 2 if flamelet.level(2).max() > 0 else 1
print("h_TA (level %d):" % k, select_bandwidth_ta(flamelet, k).sigma)
