"""Seeded synthetic samples used by the tests, the demos and ``flamelets fixtures``."""

from __future__ import annotations

import numpy as np

from .geometry import DynamicPointCloud, PointCloud

__all__ = ["noisy_circle", "gaussian_mixture", "breathing_circle"]


def noisy_circle(n: int = 200, radius: float = 1.0, noise: float = 0.02, seed: int = 0) -> PointCloud:
    """Points at uniform random angles on a circle plus isotropic Gaussian noise."""
    rng = np.random.default_rng(seed)
    theta = rng.uniform(0.0, 2 * np.pi, n)
    pts = radius * np.column_stack([np.cos(theta), np.sin(theta)])
    return PointCloud(pts + rng.normal(0.0, noise, pts.shape))


def gaussian_mixture(
    n: int = 2000, means=(-2.0, 2.0), sd: float = 0.5, weights=None, seed: int = 0
) -> PointCloud:
    """1D sample from a Gaussian mixture with a common standard deviation."""
    rng = np.random.default_rng(seed)
    means = np.asarray(means, dtype=float)
    weights = np.full(means.size, 1 / means.size) if weights is None else np.asarray(weights, dtype=float)
    comp = rng.choice(means.size, size=n, p=weights / weights.sum())
    return PointCloud(rng.normal(means[comp], sd).reshape(-1, 1))


def breathing_circle(
    frames: int = 8, n: int = 30, r0: float = 1.0, r1: float = 2.0, noise: float = 0.02, seed: int = 0
) -> DynamicPointCloud:
    """A noisy circle whose radius grows linearly from ``r0`` to ``r1`` over t in [0, 1]."""
    rng = np.random.default_rng(seed)
    ts = np.linspace(0.0, 1.0, frames)
    out = []
    for t in ts:
        theta = rng.uniform(0.0, 2 * np.pi, n)
        r = r0 + (r1 - r0) * t
        pts = r * np.column_stack([np.cos(theta), np.sin(theta)]) + rng.normal(0.0, noise, (n, 2))
        out.append((float(t), PointCloud(pts)))
    return DynamicPointCloud(out)
