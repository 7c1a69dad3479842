"""Persistent homology, persistence landscapes and persistence flamelets.

Flamelets stack persistence landscapes along a scale parameter (a kernel
bandwidth, a time stamp) into a surface that can be averaged, compared and
maximised.
"""

from .diagram_metrics import Vineyard, bottleneck, bottleneck_bruteforce, integrated_bottleneck
from .errors import FlameletError, ParseError
from .fixtures import breathing_circle, gaussian_mixture, noisy_circle
from .filtration import (
    FilteredComplex,
    GridFunction,
    Simplex,
    rips_filtration,
    sublevel_grid_filtration,
    superlevel_grid_filtration,
)
from .flamelet import (
    Flamelet,
    SigmaGrid,
    build_flamelet,
    flamelet_norm,
    integrated_landscape_distance,
    mean_flamelet,
    projection_matrix,
    rips_vineyards,
    select_bandwidth_ta,
    time_flamelets,
    variance_flamelet,
)
from .geometry import DynamicPointCloud, PointCloud, hausdorff, integrated_hausdorff, pairwise_distances
from .kde import (
    BandwidthRange,
    GridSpec,
    KdeModel,
    bandwidth_sweep,
    bandwidth_vineyards,
    default_grid_spec,
    kde_evaluate,
    silverman_extended,
    silverman_from_stats,
)
from .landscape import (
    Landscape,
    YGrid,
    default_ygrid,
    landscape,
    landscape_distance,
    landscape_norm,
    silhouette,
    triangle,
)
from .persistence import PersistenceDiagram, PersistencePair, betti_oracle, compute_persistence

__version__ = "0.1.0"
