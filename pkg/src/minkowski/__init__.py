"""Exact-arithmetic geometry of (n+1)-dimensional Minkowski space-time and
sampling-based certification of hyperboloid-preserving maps."""
from __future__ import annotations

from .core import (
    CausalClass,
    Event,
    KLines,
    LightCone,
    Line,
    PlaneSpan,
    RobbHyperplane,
    bilinear_form,
    classify_line,
    classify_pair,
    classify_vector,
    is_between,
    is_lorentz_plane,
    k_lines_collinearity,
    light_directions_in_plane,
    plane_through_light_lines,
    quadratic_form,
    robb_hyperplane,
    robb_set_membership,
)
from .hyperboloid import (
    Hyperboloid,
    IntersectionCardinality,
    Orientation,
    Shell,
    ShellPair,
    betweenness_shell_falsifier,
    dilate,
    fit_shell,
    hyperboloid_through_pair,
    intersect_hyperboloids,
    intersect_same_radius,
    lightlike_by_hyperboloid_criterion,
    on_hyperboloid,
    on_shell,
    same_shell,
    shells_disjoint,
    singleton_locus_check,
)
from .scalar import Backend, using_tolerance
from .transforms import (
    AffineMap,
    Decomposition,
    TransformClass,
    classify_transform,
    compose,
    decompose,
    factor_dilation,
    inverse,
    is_lorentz,
    is_orthochronous,
    random_affine,
    random_extended,
    random_poincare,
)
from .certify import (
    CandidateMap,
    CertificationReport,
    Verdict,
    certify_forward_preservation,
    certify_hyperboloid_preservation,
    check_corollary,
    run_property_suite,
)

__version__ = "0.1.0"
