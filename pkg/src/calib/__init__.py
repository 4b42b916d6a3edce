# src/calib/__init__.py
from src.calib.forms import (
    CalibrationKind,
    CalibrationSpec,
    build_calibration,
    build_cayley,
    build_phi,
    calibration_by_name,
    evaluate_on_plane,
)
from src.calib.optimizer import ContactReport, maximize, sample_comass
from src.calib.contact import contact_dimension, local_rank

__all__ = [
    "CalibrationKind",
    "CalibrationSpec",
    "build_calibration",
    "build_cayley",
    "build_phi",
    "calibration_by_name",
    "evaluate_on_plane",
    "ContactReport",
    "maximize",
    "sample_comass",
    "contact_dimension",
    "local_rank",
]
