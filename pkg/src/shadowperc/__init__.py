"""Shadow percolation on i.i.d. random height fields."""

from ._backend import BACKEND
from .alpha import (AlphaField, LevelSetMask, Side, alpha_row_hull, alpha_row_naive, casts_shadow,
                    compute_alpha, is_lit, level_set, t_level_index, truncation_stability)
from .clusters import (Adjacency, Axis, ClusterLabeling, CrossingEstimate, estimate_crossing,
                       has_crossing, label_clusters, largest_cluster, scan_levels)
from .distributions import DistributionSpec, gaussian, laplace, uniform
from .field import CapacityError, HeightField, generate
from .reconstruct import ReconstructionResult, Status, psi, psi0, psi0_row, t_next, tau

__version__ = "0.1.0"
