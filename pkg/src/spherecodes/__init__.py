"""Minimal-energy point configurations on the unit sphere.

The pipeline: search for a configuration (`optimize`), express it as a
parameterized structure and Newton-refine the parameters to arbitrary
precision (`paramconfig`, `registry`), certify minimality through the
tangent-space Hessian (`verify`), fingerprint its symmetry (`symmetry`,
`geometry`), and identify parameters and energies as algebraic numbers
(`algebra`).  Arithmetic is arbitrary-precision throughout
(`numerics`), with Riesz-s and logarithmic pair potentials
(`potentials`).  Text formats and the command line live in `fileio`
and `cli`.
"""

from .errors import (
    CoincidentPoints,
    DependentBasis,
    Diverged,
    DomainError,
    DomainViolation,
    InsufficientPrecision,
    NoProgress,
    NoStructure,
    NonSymmetric,
    NotCritical,
    OffSphere,
    ParseError,
    SingularJacobian,
    SizeMismatch,
    SphereCodesError,
    StagnationLimit,
    Unregistered,
    ZeroVector,
)
from .numerics import MIN_DIGITS, BigReal, Rng, elem, with_precision
from .geometry import (
    GramMatrix,
    GramSignature,
    Point3,
    PointSet,
    default_signature_tol,
    gram_matrix,
    gram_signature,
    isometric,
    normalize,
    orthonormal_frame,
    pair_distance,
    point_from_floats,
    random_point,
    rotate_to_axis,
)
from .potentials import (
    EnergyValue,
    Potential,
    energy,
    force,
    forces,
    pair_potential,
    residual,
    tangential_component,
)
from .optimize import (
    AnnealConfig,
    DescentConfig,
    MultiStartResult,
    RunReport,
    descent,
    descent_step,
    jiggle,
    multi_start,
    percolating_anneal,
)
from .paramconfig import (
    ConfigSpec,
    Const,
    FreePoint,
    OffsetRing,
    ParamVector,
    Pole,
    Ring,
    Var,
    build_points,
    builtin_spec,
    newton_refine,
    param_energy,
    param_gradient,
    param_jacobian,
)
from .registry import registered_counts
from .verify import (
    HessianReport,
    TangentBasis,
    eigenvalues_sym,
    hessian,
    tangent_basis,
    verify_minimum,
)
from .symmetry import (
    SymmetryReport,
    coplanar_families,
    regular_polygons,
    suggest_axis,
    symmetry_report,
)
from .algebra import (
    IntPolynomial,
    RecoveryResult,
    lattice_reduce,
    minimal_polynomial,
    verify_root,
)
from .fileio import (
    RunManifest,
    read_manifest,
    read_params,
    read_points,
    read_poly,
    read_spec,
    write_manifest,
    write_params,
    write_points,
    write_poly,
    write_spec,
)

__version__ = "1.0.0"
