"""Linear fractional self-maps of the unit disk: dynamics, intertwining and roots."""

from .classify import (
    DiskMapClass,
    HalfPlaneAffine,
    MapTag,
    SelfMapReport,
    cayley,
    cayley_conjugate,
    cayley_inverse,
    classify,
    from_halfplane,
    parabolic_defect,
    rotation_order,
    self_map_report,
)
from .config import DEFAULT, Tolerances
from .dynamics import StepClass, dyadic_steps, hyperbolic_distance, orbit, step_class
from .errors import *  # noqa: F401,F403
from .intertwine import (
    Compatibility,
    FamilyKind,
    SolutionFamily,
    check_conditions,
    parabolic_conformal_derivative,
    residual,
    solve_family,
    type_compatible,
)
from .moebius import (
    Moebius,
    SpherePoint,
    apply,
    compose,
    compose_all,
    fixed_points,
    inverse,
    involution,
    iterate_n,
    jet_at,
    normalize,
    proj_distance,
)
from .roots import (
    EmbedStatus,
    EmbedVerdict,
    EllipticNormalForm,
    RootSequence,
    dyadic_element,
    embeddable,
    identity_roots,
    root_nonelliptic,
    roots_elliptic,
)
