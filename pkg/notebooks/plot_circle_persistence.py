"""
Persistence of a noisy circle
=============================

A circle sampled with a little noise has one long-lived loop. The Rips
diagram shows it, the landscape turns the diagram into a function, and the
bottleneck distance measures how much the diagram moves under perturbation.
"""

import numpy as np

from flamelets import (
    PointCloud,
    YGrid,
    bottleneck,
    compute_persistence,
    hausdorff,
    landscape,
    landscape_distance,
    noisy_circle,
    rips_filtration,
)

cloud = noisy_circle(120, noise=0.02, seed=1)
diagrams = compute_persistence(rips_filtration(cloud, max_dim=2))
h1 = diagrams[1].nontrivial()
pers = np.sort(h1.persistences)[::-1]
print(f"{len(h1)} loops; the three longest live for {np.round(pers[:3], 4)}")

###############################################################################
# The first landscape peaks at half the persistence of the dominant loop.

grid = YGrid(0.0, 2.0, 401)
lam = landscape(h1, grid, K=3)
print("peak of lambda_1:", lam.levels[0].max(), " half persistence:", pers[0] / 2)

###############################################################################
# Jitter the points: the H0 diagram moves by at most twice the Hausdorff
# distance, and the landscape by at most the bottleneck distance.

rng = np.random.default_rng(7)
moved = PointCloud(cloud.points + rng.normal(0, 0.01, cloud.points.shape))
moved_diagrams = compute_persistence(rips_filtration(moved, max_dim=2))
d_h = hausdorff(cloud, moved)
d_b0 = bottleneck(diagrams[0], moved_diagrams[0])
d_b1 = bottleneck(diagrams[1], moved_diagrams[1])
d_l1 = landscape_distance(lam, landscape(moved_diagrams[1].nontrivial(), grid, K=3))
print(f"Hausdorff {d_h:.4f}; H0 bottleneck {d_b0:.4f} <= {2 * d_h:.4f}")
print(f"H1 bottleneck {d_b1:.4f}; landscape sup distance {d_l1:.4f}")
