# src/quat/__init__.py
from src.quat.quaternion import Quaternion, mul
from src.quat.hypercomplex import (
    HypercomplexTriple,
    ParameterClass,
    blockwise,
    classify_product,
    left_triple,
    right_triple,
)

__all__ = [
    "Quaternion",
    "mul",
    "HypercomplexTriple",
    "ParameterClass",
    "blockwise",
    "classify_product",
    "left_triple",
    "right_triple",
]
