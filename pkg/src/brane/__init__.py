# src/brane/__init__.py
from src.brane.tau_map import TauMap, kernel_frame, normalize_tau
from src.brane.solution import CommonSectorSolution, dilaton_from_metric
from src.brane.ns5 import ns5_base, ns5_harmonic, ns5_solution, ns5_torsion_at
from src.brane.superposition import (
    SuperpositionConfig,
    assemble_solution,
    build_metric,
    build_torsion,
    normalize_config,
)
from src.brane.hkt import hkt_coupling, hkt_residual, hkt_residuals, kahler_field, triple_sign
from src.brane.mbrane import MBraneKind, MBraneSolution, flux_charge, flux_integral, m_brane
from src.brane.field_equations import EOM_COMPONENTS, EOMResidual, convergence_order, eom_residual, observed_order

__all__ = [
    "TauMap",
    "kernel_frame",
    "normalize_tau",
    "CommonSectorSolution",
    "dilaton_from_metric",
    "ns5_base",
    "ns5_harmonic",
    "ns5_solution",
    "ns5_torsion_at",
    "SuperpositionConfig",
    "assemble_solution",
    "build_metric",
    "build_torsion",
    "normalize_config",
    "hkt_coupling",
    "hkt_residual",
    "hkt_residuals",
    "kahler_field",
    "triple_sign",
    "MBraneKind",
    "MBraneSolution",
    "flux_charge",
    "flux_integral",
    "m_brane",
    "EOMResidual",
    "convergence_order",
    "eom_residual",
    "observed_order",
    "EOM_COMPONENTS",
]
