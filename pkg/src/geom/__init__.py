# src/geom/__init__.py
from src.geom.connection import (
    TorsionConnection,
    christoffel,
    connection_coeffs,
    covariant_derivative_of_J,
    covariant_derivative_of_metric,
    levi_civita,
    torsion_tensor,
)
from src.geom.conventions import ConnectionConventions, connection_conventions, quaternion_orientation
from src.geom.curvature import (
    CurvatureSample,
    curvature,
    curvature_samples,
    curvature_tensor,
    parallel_transport,
    square_loop,
)
from src.geom.holonomy import (
    ALGEBRAS,
    HolonomyStructures,
    MembershipReport,
    algebra_membership,
    holonomy_structures,
    span_dimension,
    wedge_star_operator,
)

__all__ = [
    "TorsionConnection",
    "christoffel",
    "connection_coeffs",
    "covariant_derivative_of_J",
    "covariant_derivative_of_metric",
    "levi_civita",
    "torsion_tensor",
    "ConnectionConventions",
    "connection_conventions",
    "quaternion_orientation",
    "CurvatureSample",
    "curvature",
    "curvature_samples",
    "curvature_tensor",
    "parallel_transport",
    "square_loop",
    "ALGEBRAS",
    "HolonomyStructures",
    "MembershipReport",
    "algebra_membership",
    "holonomy_structures",
    "span_dimension",
    "wedge_star_operator",
]
