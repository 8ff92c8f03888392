"""Lattice decoding with the nearest-plane rule: reduction, error geometry, rates."""

from .babai import (
    BabaiCell,
    babai_cell,
    babai_point,
    is_babai_error,
    nearest_plane,
    nearest_plane_general,
)
from .core import (
    EnumerationWindowWarning,
    LatticePoint,
    RankDeficiencyError,
    UnsupportedDimensionError,
    as_basis,
    cvp_bruteforce,
    gram,
    lattice_from_json,
    lattice_to_json,
    packing_density,
    qr_upper,
    round_half_up,
    shortest_vector,
    unit_volume_normalize,
    volume,
)
from .error2d import (
    DENSITY_2D_MAX,
    ReducedBasis2D,
    level_curve_data,
    optimal_a,
    packing_density_2d,
    pe_closed_form,
    pe_density_form,
    pe_geometric_2d,
    pe_polar,
    relevant_vectors_2d,
    voronoi_polygon_2d,
    worst_theta,
)
from .error3d import (
    CellType,
    Pe3DResult,
    ScanRecord,
    classify_cell,
    mc_pe_oracle,
    pe_3d,
    random_reduced_superbase,
    scan_random,
    summarize_scan,
    voronoi_cell_3d,
    voronoi_halfspaces,
    voronoi_vertices_conorm_formula,
)
from .lattices import (
    BCC,
    BCC_UNIT,
    CUBIC_3D,
    FCC,
    HEXA_RHOMBIC,
    HEXAGONAL_2D,
    HEXAGONAL_PRISM,
    KNOWN_LATTICES,
    SQUARE_2D,
)
from .protocol import (
    IrrationalRatioError,
    NodeMessage,
    ProtocolModel,
    ProtocolTrace,
    RationalProfile,
    SourceModel,
    centralized_rate_bound,
    centralized_total_rate,
    fusion_decode,
    gaussian_source,
    interactive_rate_approximation,
    interactive_simulate,
    modular_decode_check,
    node_encode,
    rationalize,
    run_centralized,
    uniform_source,
)
from .reduction import (
    ConormSet,
    MinkowskiReport,
    ObtuseSuperbaseNotFound,
    Superbase,
    VonormSet,
    conorms,
    is_minkowski_reduced,
    lagrange_gauss_reduce,
    superbase_to_minkowski,
    to_obtuse_superbase,
    vonorms,
)

__version__ = "0.1.0"
