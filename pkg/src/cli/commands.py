# src/cli/commands.py
import math
from concurrent.futures import ThreadPoolExecutor
from typing import Callable, Dict, List, Sequence

import numpy as np

from config import settings
from src.brane import (
    EOM_COMPONENTS,
    MBraneKind,
    assemble_solution,
    eom_residual,
    flux_charge,
    flux_integral,
    hkt_residuals,
    kernel_frame,
    m_brane,
    observed_order,
)
from src.calib import (
    CalibrationKind,
    CalibrationSpec,
    build_calibration,
    calibration_by_name,
    contact_dimension,
    evaluate_on_plane,
    maximize,
    sample_comass,
)
from src.cli.report import Report
from src.cli.sampling import sample_points
from src.cli.schema import ParsedConfig, RunConfig
from src.errors import ConfigError, HKTBraneError
from src.exterior import exterior_derivative
from src.geom import algebra_membership, curvature_samples, span_dimension
from src.quat import ParameterClass, left_triple, right_triple
from static.constants import (
    CALIBRATION_MAX_TOLERANCE,
    CLASS_CALIBRATION,
    CLOSURE_THRESHOLD,
    COMASS_SLACK,
    CONTACT_DIMENSIONS,
    CORRESPONDENCE_TOLERANCE,
    EOM_ORDER,
    EOM_ORDER_TOLERANCE,
    EOM_THRESHOLD,
    FLUX_LINEARITY_TOLERANCE,
    FLUX_NORMALIZATION_M5,
    FLUX_RADIUS_TOLERANCE,
    HERMITIAN_THRESHOLD,
    HKT_FAIL_THRESHOLD,
    HKT_PASS_THRESHOLD,
    HOLONOMY_TABLE,
    MEMBER_THRESHOLD,
    NONMEMBER_THRESHOLD,
    QUADRATURE_TOLERANCE,
    logger,
)

# Ratio bound of the two-out-of-three HKT property
TWO_OF_THREE_RATIO = 2.0
# Residual floor added to the denominator of that ratio
TWO_OF_THREE_FLOOR = 1e-8
# Transverse radius of the M-brane sample region
MBRANE_CLEARANCE = 1.0
CURVATURE_PLANES = 28

Command = Callable[[ParsedConfig, RunConfig], Report]


def _parallel_map(func: Callable, items: Sequence, threads: int) -> List:
    # Results come back in input order whatever the thread count
    with ThreadPoolExecutor(max_workers=max(1, threads)) as executor:
        return list(executor.map(func, items))


def _new_report(run: RunConfig, step: float) -> Report:
    return Report(command=run.command, seed=run.seed, step=step, samples=run.samples)


def _hermiticity(gamma: np.ndarray, triple) -> float:
    return max(float(np.max(np.abs(J.T @ gamma @ J - gamma))) for J in triple)


def verify_hkt(parsed: ParsedConfig, run: RunConfig) -> Report:
    """HKT residuals of both triples, closure of H and Hermiticity over sample points."""
    cfg = parsed.superposition
    step = run.step_or(settings.FD_STEP)
    report = _new_report(run, step)
    points = sample_points(run.samples, 8, cfg.box, cfg.distance, step, run.seed)
    metric, torsion = cfg.metric_field(), cfg.torsion_field()
    I, J = left_triple(8), right_triple(8)

    def evaluate(x: np.ndarray) -> List[float]:
        gamma = metric(x)
        return (
            hkt_residuals(cfg, x, J, step)
            + hkt_residuals(cfg, x, I, step)
            + [
                exterior_derivative(torsion, x, step, richardson=True).max_norm(),
                _hermiticity(gamma, J),
                _hermiticity(gamma, I),
            ]
        )

    rows = np.array(_parallel_map(evaluate, points, run.threads)).reshape(-1, 9)
    report.add_table("residuals", ["J1", "J2", "J3", "I1", "I2", "I3", "dH", "hermitian_J", "hermitian_I"],
                     rows.tolist())
    parameter_class = cfg.parameter_class()
    report.data["parameter_class"] = parameter_class.value
    report.data["points"] = len(points)
    if not len(points):
        report.fail("sampling", "no sample point clears the singular set")
        return report

    j_max = rows[:, 0:3].max(axis=1)
    i_max = rows[:, 3:6].max(axis=1)
    report.add_check("hkt_J", float(j_max.max()), HKT_PASS_THRESHOLD)
    if parameter_class is ParameterClass.REAL:
        report.add_check("hkt_I", float(i_max.max()), HKT_PASS_THRESHOLD, detail="also HKT")
    else:
        report.add_check("hkt_I", float(i_max.min()), HKT_FAIL_THRESHOLD, "above", detail="not HKT")
    report.add_check("closure_dH", float(rows[:, 6].max()), CLOSURE_THRESHOLD)
    report.add_check("hermitian_J", float(rows[:, 7].max()), HERMITIAN_THRESHOLD)

    pair = np.maximum(rows[:, 0], rows[:, 1])
    ratio = rows[:, 2] / (pair + TWO_OF_THREE_FLOOR)
    report.add_check("two_of_three", float(ratio.max()), TWO_OF_THREE_RATIO)
    return report


def holonomy(parsed: ParsedConfig, run: RunConfig) -> Report:
    """Curvature membership of ∇⁻ against the table row of the class, ∇⁺ against sp(2)_J."""
    cfg = parsed.superposition
    step = run.step_or(settings.CURVATURE_STEP)
    report = _new_report(run, step)
    count = max(2, math.ceil(settings.CURVATURE_SAMPLES / CURVATURE_PLANES))
    points = sample_points(count, 8, cfg.box, cfg.distance, step, run.seed)
    solution = assemble_solution(cfg)
    minus, plus = solution.connection(-1), solution.connection(1)

    def memberships(x: np.ndarray):
        samples = curvature_samples(minus, x, step)
        return (
            [algebra_membership(s) for s in samples],
            [algebra_membership(s) for s in curvature_samples(plus, x, step)],
            samples,
        )

    results = _parallel_map(memberships, points, run.threads)
    minus_reports = [m for r in results for m in r[0] if not m.indeterminate]
    plus_reports = [m for r in results for m in r[1] if not m.indeterminate]
    parameter_class = cfg.parameter_class()
    report.data["parameter_class"] = parameter_class.value
    report.data["curvature_samples"] = len(minus_reports)
    report.data["span_dimension_minus"] = span_dimension([s for r in results for s in r[2]])
    report.add_table(
        "membership_minus",
        ["sp2_I", "sp2_J", "u4", "su4", "spin7", "norm"],
        [[m.residuals[a] for a in ("sp2_I", "sp2_J", "u4", "su4", "spin7")] + [m.norm] for m in minus_reports],
    )
    if not minus_reports:
        report.data["status"] = "indeterminate"
        logger.info("Curvature vanishes at every sample, holonomy is trivial")
        return report

    for algebra, expected in HOLONOMY_TABLE[parameter_class.value].items():
        worst = max(m.residuals[algebra] for m in minus_reports)
        if expected:
            report.add_check(f"minus.{algebra}", worst, MEMBER_THRESHOLD, detail="member")
        else:
            report.add_check(f"minus.{algebra}", worst, NONMEMBER_THRESHOLD, "above", detail="not a member")
    if plus_reports:
        worst = max(m.residuals["sp2_J"] for m in plus_reports)
        report.add_check("plus.sp2_J", worst, MEMBER_THRESHOLD, detail="member")
    return report


def calibrate(parsed: ParsedConfig, run: RunConfig) -> Report:
    """Maximum, sampled comass and contact dimension of a calibration form."""
    spec = parsed.calibration
    if spec is None:
        raise ConfigError("The calibrate command needs a form", ["field form: missing"])
    report = _new_report(run, 0.0)
    w = build_calibration(spec)
    result = maximize(w, 4, seed=run.seed, threads=run.threads)
    report.data["form"] = spec.kind.value
    report.data["max_value"] = result.max_value
    report.add_check("max_value", abs(result.max_value - 1.0), CALIBRATION_MAX_TOLERANCE)
    comass = sample_comass(w, seed=run.seed)
    report.data["sampled_comass"] = comass
    report.add_check("comass_sampled", comass - 1.0, COMASS_SLACK)
    try:
        dimension = contact_dimension(result, seed=run.seed, threads=run.threads)
    except HKTBraneError as e:
        report.fail("contact_dimension", str(e))
    else:
        expected = CONTACT_DIMENSIONS[spec.kind.value]
        report.data["contact_dimension"] = dimension
        report.add_check("contact_dimension", abs(dimension - expected), 0.5, detail=f"expected {expected}")
    report.data["optimizer"] = result.diagnostics
    return report


def eom(parsed: ParsedConfig, run: RunConfig) -> Report:
    """Field-equation residuals with their step-halving convergence order."""
    cfg = parsed.superposition
    step = run.step_or(settings.EOM_STEP)
    order_step = max(step, settings.EOM_ORDER_STEP)
    report = _new_report(run, step)
    solution = assemble_solution(cfg)
    points = sample_points(run.samples, 8, cfg.box, cfg.distance, order_step, run.seed)

    def evaluate(x: np.ndarray):
        return (
            eom_residual(solution, x, step),
            eom_residual(solution, x, order_step),
            eom_residual(solution, x, order_step / 2.0),
        )

    results = _parallel_map(evaluate, points, run.threads)
    rows, worst, orders = [], 0.0, []
    for residual, coarse, fine in results:
        c, f = coarse.to_dict(), fine.to_dict()
        worst = max(worst, residual.max())
        rows.append([order_step] + [c[n] for n in EOM_COMPONENTS])
        rows.append([order_step / 2.0] + [f[n] for n in EOM_COMPONENTS])
        for name in EOM_COMPONENTS:
            order = observed_order(c[name], f[name], settings.EOM_ORDER_FLOOR)
            if not math.isnan(order):
                orders.append(order)
    report.add_table("convergence", ["step", *EOM_COMPONENTS], rows)
    report.data["points"] = len(points)
    report.data["order_step"] = order_step
    if not points:
        report.fail("sampling", "no sample point clears the singular set")
        return report
    report.add_check("eom_residual", worst, EOM_THRESHOLD)
    if orders:
        report.data["order_min"] = min(orders)
        report.data["order_max"] = max(orders)
        deviation = max(abs(o - EOM_ORDER) for o in orders)
        report.add_check("convergence_order", deviation, EOM_ORDER_TOLERANCE, detail=f"order {EOM_ORDER}")
    else:
        logger.info(f"All residuals below {settings.EOM_ORDER_FLOOR:.0e} at step {order_step}, order not measured")
        report.data["order_min"] = report.data["order_max"] = None
    return report


def charges(parsed: ParsedConfig, run: RunConfig) -> Report:
    """Closure of the transverse flux and, for the M-5, its charge."""
    sol = parsed.mbrane or m_brane(MBraneKind.M5, 1.0)
    step = run.step_or(settings.FD_STEP)
    report = _new_report(run, step)
    report.data["kind"] = sol.kind.value
    report.data["q"] = sol.q
    flux = sol.flux
    points = sample_points(run.samples, sol.transverse_dimension, parsed.superposition.box,
                           flux.distance, step, run.seed, clearance=MBRANE_CLEARANCE)

    def evaluate(y: np.ndarray) -> List[float]:
        return [exterior_derivative(flux, y, step, richardson=True).max_norm(), sol.laplacian_residual(y, step)]

    rows = np.array(_parallel_map(evaluate, points, run.threads)).reshape(-1, 2)
    report.add_table("closure", ["dF", "laplacian"], rows.tolist())
    if len(points):
        report.add_check("closure_dF", float(rows[:, 0].max()), CLOSURE_THRESHOLD)
        report.add_check("harmonic", float(rows[:, 1].max()), EOM_THRESHOLD)
    if sol.kind is not MBraneKind.M5:
        report.data["charge"] = None
        logger.info("The M-2 charge integral needs a gauge potential and is not computed")
        return report

    near, far = flux_charge(sol, 1.0), flux_charge(sol, 5.0)
    tripled = flux_integral(m_brane(MBraneKind.M5, 3.0 * sol.q), 1.0)
    base = near * FLUX_NORMALIZATION_M5
    report.data["charge"] = near
    report.data["normalization"] = FLUX_NORMALIZATION_M5
    report.add_check("charge", abs(near / sol.q - 1.0), QUADRATURE_TOLERANCE)
    report.add_check("radius_independence", abs(near - far) / abs(near), FLUX_RADIUS_TOLERANCE)
    report.add_check("linearity", abs(tripled / (3.0 * base) - 1.0), FLUX_LINEARITY_TOLERANCE)
    return report


def tau_class(parsed: ParsedConfig, run: RunConfig) -> Report:
    """Class of each p̄₁p₂ and the value of the matching calibration on ker dτ."""
    report = _new_report(run, 0.0)
    entries = []
    for index, t in enumerate(parsed.superposition.taus):
        parameter_class = t.parameter_class()
        name = CLASS_CALIBRATION[parameter_class.value]
        value = evaluate_on_plane(calibration_by_name(name), kernel_frame(t))
        entries.append({"class": parameter_class.value, "form": name, "value": value})
        report.add_check(f"tau[{index}].{name}", abs(value - 1.0), CORRESPONDENCE_TOLERANCE,
                         detail=parameter_class.value)
    report.data["taus"] = entries
    report.data["configuration_class"] = parsed.superposition.parameter_class().value
    return report


def full_report(parsed: ParsedConfig, run: RunConfig) -> Report:
    """Every command that applies to the configuration, folded into one report."""
    report = _new_report(run, run.step_or(settings.FD_STEP))
    sections: Dict[str, Command] = {
        "verify-hkt": verify_hkt,
        "holonomy": holonomy,
        "eom": eom,
        "tau-class": tau_class,
    }
    if parsed.calibration is None:
        row = CLASS_CALIBRATION[parsed.superposition.parameter_class().value]
        parsed = ParsedConfig(parsed.superposition, CalibrationSpec(CalibrationKind(row)), parsed.mbrane)
    sections["calibrate"] = calibrate
    if parsed.mbrane is not None:
        sections["charges"] = charges
    for name, command in sections.items():
        sub_run = run.model_copy(update={"command": name})
        report.merge(run_guarded(command, parsed, sub_run), name)
    return report


def run_guarded(command: Command, parsed: ParsedConfig, run: RunConfig) -> Report:
    """
    Run a command; library failures become failed checks in a partial report.

    ConfigError propagates so the caller can map it to its exit code.
    """
    try:
        return command(parsed, run)
    except ConfigError:
        raise
    except HKTBraneError as e:
        report = _new_report(run, run.step_or(settings.FD_STEP))
        report.fail(run.command, str(e))
        return report
    except Exception as e:
        logger.error(f"Command {run.command} failed: {e}", exc_info=True)
        report = _new_report(run, run.step_or(settings.FD_STEP))
        report.fail(run.command, f"{type(e).__name__}: {e}")
        return report


COMMANDS: Dict[str, Command] = {
    "verify-hkt": verify_hkt,
    "holonomy": holonomy,
    "calibrate": calibrate,
    "eom": eom,
    "charges": charges,
    "tau-class": tau_class,
    "report": full_report,
}
