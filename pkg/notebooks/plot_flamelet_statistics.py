"""
Averages of random flamelets
============================

Flamelets live on a fixed lattice, so they can be averaged node by node.
Means of independent batches agree more closely as the batch grows, and the
nodewise variance shows where along the bandwidth axis the topology is least
stable.
"""

import numpy as np

from flamelets import (
    BandwidthRange,
    GridSpec,
    YGrid,
    bandwidth_vineyards,
    build_flamelet,
    gaussian_mixture,
    mean_flamelet,
    variance_flamelet,
)

grid = GridSpec((256,), (-6.0,), (12.0 / 255,))
ygrid = YGrid(-0.02, 0.6, 128)
bandwidths = BandwidthRange(0.2, 1.5, 8)
rng = np.random.default_rng(0)


def draw():
    sample = gaussian_mixture(50, seed=int(rng.integers(2**32)))
    return build_flamelet(bandwidth_vineyards(sample, bandwidths, grid)[0], ygrid, K=2)


for size in (5, 20, 80):
    a = mean_flamelet([draw() for _ in range(size)])
    b = mean_flamelet([draw() for _ in range(size)])
    print(f"batches of {size:3d}: sup |mean_A - mean_B| = {np.abs(a.surface - b.surface).max():.4f}")

###############################################################################
# Where does the second level fluctuate most?

samples = [draw() for _ in range(40)]
var = variance_flamelet(samples)[1].max(axis=1)
for h, v in zip(bandwidths.values(), var):
    print(f"h = {h:.3f}   max variance of Lambda^2 = {v:.2e}")
