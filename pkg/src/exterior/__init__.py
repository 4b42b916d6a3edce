# src/exterior/__init__.py
from src.exterior.alt_form import AltForm, interior, j_derivation, kahler_form, multi_indices, wedge
from src.exterior.hodge import check_metric, hodge_star, inner_product, norm
from src.exterior.fields import (
    FormField,
    MetricField,
    Plane,
    ScalarField,
    constant_metric,
    zero_form_field,
)
from src.exterior.calculus import (
    central_difference,
    exterior_derivative,
    gradient,
    pullback,
    pullback_field,
    pullback_metric,
)

__all__ = [
    "AltForm",
    "interior",
    "j_derivation",
    "kahler_form",
    "multi_indices",
    "wedge",
    "check_metric",
    "hodge_star",
    "inner_product",
    "norm",
    "FormField",
    "MetricField",
    "Plane",
    "ScalarField",
    "constant_metric",
    "zero_form_field",
    "central_difference",
    "exterior_derivative",
    "gradient",
    "pullback",
    "pullback_field",
    "pullback_metric",
]
