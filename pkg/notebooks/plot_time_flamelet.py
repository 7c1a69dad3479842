"""
Flamelets of a moving point cloud
=================================

When the scale parameter is time, a flamelet tracks how the topology of a
point cloud evolves. Two clouds that stay close in Hausdorff distance have
close H0 flamelets: the integrated landscape distance is bounded by twice the
integrated Hausdorff distance.
"""

from flamelets import (
    breathing_circle,
    build_flamelet,
    default_ygrid,
    integrated_bottleneck,
    integrated_hausdorff,
    integrated_landscape_distance,
    rips_vineyards,
)

a = breathing_circle(frames=8, n=30, seed=0)
b = breathing_circle(frames=8, n=30, noise=0.1, seed=1)

va, vb = rips_vineyards(a, dims=(0, 1)), rips_vineyards(b, dims=(0, 1))
for dim in (0, 1):
    # one y-grid for both clouds so the surfaces can be compared
    y = default_ygrid(va[dim].diagrams + vb[dim].diagrams)
    fa, fb = build_flamelet(va[dim], y), build_flamelet(vb[dim], y)
    crest = fa.level(1).max(axis=1)
    print(f"H{dim} crest height per frame:", crest.round(3))
    i_l = integrated_landscape_distance(fa, fb)
    i_b = integrated_bottleneck(va[dim], vb[dim])
    print(f"H{dim}: integrated landscape {i_l:.4f} <= integrated bottleneck {i_b:.4f}")

print(f"integrated Hausdorff {integrated_hausdorff(a, b):.4f}")
