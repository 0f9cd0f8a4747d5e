"""steklab: a verification laboratory for isoperimetric eigenvalue bounds.

Computes spectra of four boundary-value problems (boundary Laplacian,
Steklov/Wentzell, biharmonic Steklov, tension biharmonic) on star-shaped
planar domains and triangulated surfaces, then checks each bound in the
registry with signed slack and error estimates.
"""

from .checks import (
    CHECKS,
    CheckDef,
    CheckReport,
    SuiteReport,
    ball_volume,
    check_ids,
    evaluate,
    run_suite,
)
from .curves import (
    BoundaryFrame,
    DomainSpec2D,
    GeoSummary,
    InteriorQuad,
    boundary_frame,
    diameter_bound,
    disk,
    ellipse,
    format_domain,
    fourier_radius,
    geo_summary,
    interior_quad,
    max_radius,
    parse_domain,
    perturbed_disk,
    radius_profile,
    recenter,
    validate,
)
from .basis import BasisFn, bessel_i, build_space, eval_at, eval_block
from .errors import (
    DegenerateFaceError,
    DegeneratePencilError,
    InvalidDomainError,
    MeshSizeError,
    PreconditionError,
    RangeError,
    StarvedSpaceError,
    SteklabError,
    TopologyError,
)
from .explore import (
    FamilySpec,
    MinSlackResult,
    SweepTable,
    instances,
    min_slack,
    random_domains,
    sweep,
    to_csv,
)
from .meshes import (
    LaplaceOperator,
    MeshSummary,
    TriMesh,
    cotan_laplacian,
    ellipsoid_mesh,
    enclosed_volume,
    face_areas,
    icosphere,
    mesh_summary,
    read_off,
    validate_mesh,
    write_off,
)
from .pencil import EigResult, SymPencil, nullspace, solve_pencil
from .spectra import (
    DensityFn,
    SolverConfig,
    SpectrumResult,
    ball_spectrum,
    biharmonic_steklov,
    constant_density,
    cosine_density,
    curve_spectrum,
    estimate_error,
    harmonic_dim,
    parse_rho,
    steklov_wentzell,
    surface_spectrum,
    tension_spectrum,
)

__version__ = "0.1.0"

__all__ = [
    "BasisFn",
    "BoundaryFrame",
    "CHECKS",
    "CheckDef",
    "CheckReport",
    "DegenerateFaceError",
    "DegeneratePencilError",
    "DensityFn",
    "DomainSpec2D",
    "EigResult",
    "FamilySpec",
    "GeoSummary",
    "InteriorQuad",
    "InvalidDomainError",
    "LaplaceOperator",
    "MeshSizeError",
    "MeshSummary",
    "MinSlackResult",
    "PreconditionError",
    "RangeError",
    "SolverConfig",
    "SpectrumResult",
    "StarvedSpaceError",
    "SteklabError",
    "SuiteReport",
    "SweepTable",
    "SymPencil",
    "TopologyError",
    "TriMesh",
    "ball_spectrum",
    "ball_volume",
    "biharmonic_steklov",
    "bessel_i",
    "boundary_frame",
    "build_space",
    "check_ids",
    "constant_density",
    "cosine_density",
    "cotan_laplacian",
    "curve_spectrum",
    "diameter_bound",
    "disk",
    "ellipse",
    "ellipsoid_mesh",
    "enclosed_volume",
    "estimate_error",
    "eval_at",
    "eval_block",
    "evaluate",
    "face_areas",
    "format_domain",
    "fourier_radius",
    "geo_summary",
    "harmonic_dim",
    "icosphere",
    "instances",
    "interior_quad",
    "max_radius",
    "mesh_summary",
    "min_slack",
    "nullspace",
    "parse_domain",
    "parse_rho",
    "perturbed_disk",
    "radius_profile",
    "random_domains",
    "read_off",
    "recenter",
    "run_suite",
    "solve_pencil",
    "steklov_wentzell",
    "surface_spectrum",
    "sweep",
    "tension_spectrum",
    "to_csv",
    "validate",
    "validate_mesh",
    "write_off",
]
