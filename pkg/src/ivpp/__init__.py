"""Invariant varieties of periodic points of rational maps.

Closed-form period conditions, branch parametrizations, Mobius reduction
with boundary formulas, component decompositions with cycle permutations,
and tiling rasters, for the built-in 2d and 3d maps and for user maps
written in a small text DSL.
"""

from .core import (
    INF,
    ExtendedComplex,
    Indeterminate,
    InfiniteCoordinate,
    OrbitTrace,
    Point,
    RationalMap,
    chordal,
)
from .decompose import (
    ComponentDecomposition,
    NoClosure,
    NonRealBoundary,
    NotACycle,
    PoleHit,
    boundaries_analytic,
    boundaries_empirical,
    classify,
    decompose,
    trace_flow,
)
from .denoms import DenominatorZeroSet, denominator_zero_curves
from .dsl import ParseDiagnostic, SemanticError, format_map, parse_map
from .ivpp2d import (
    DegenerateBranch,
    GammaPolynomial,
    IvppBranch,
    branches,
    gamma_closed,
    gamma_poly,
    on_ivpp,
)
from .lv3d import (
    DegenerateParameter,
    UnsupportedPeriod,
    lv_decompose_period2,
    lv_gamma,
    lv_period2_param,
    lv_recurrence,
)
from .maps import f2d, f2d_reduced, f3d, get_map, lv_recurrence_map
from .mobius import (
    EigenData,
    Mobius,
    ZeroInvariant,
    boundary_c,
    boundary_d,
    eigen,
    period2_exclusion,
    power_matrix,
    reduced_apply,
    scale_coordinate,
    x_to_z,
    z_to_x,
)
from .raster import TilingRaster, lv_raster, raster

__version__ = "0.1.0"
