"""Scenario Runner Module.

Loads scenario files, builds the model, data and asymptotic law they describe,
runs the heat-content sweep and writes the sweep table, convergence report and
summary. Corpus runs fan scenarios out over a bounded worker pool.
"""

import logging
import math
import os
from concurrent.futures import ThreadPoolExecutor
from contextlib import contextmanager
from dataclasses import dataclass, field, replace
from typing import Dict, List, Optional, Tuple

import numpy as np
import pandas as pd
import yaml
from pydantic import ValidationError

from .asymptotics import (
    AsymptoticLaw,
    ConvergenceReport,
    Theorem,
    convergence_report,
    limit_corollary1,
    limit_example1,
    limit_example2,
    limit_ex5_radial,
    limit_ex5_rectangle,
    limit_t1_case1,
    limit_t1_general,
    limit_t1_symmetric,
    limit_t2,
    limit_t3,
    power_scale,
    time_scale,
)
from .cache import DensityCache
from .config import get_settings
from .errors import HypothesisViolationError, LevyHeatError, ScenarioError
from .geometry import (
    Annulus,
    Ball,
    Box,
    DisjointUnion,
    GaussianDensity,
    Indicator,
    InitialData,
    LebesgueOnSet,
    SetGeometry,
)
from .heatcontent import Estimator, HeatScenario, heat_deficit_sweep
from .levy_models import (
    FiniteMeasure,
    LevyModel,
    RadialPowerLaw,
    RadialProfile,
    SphereMeasure,
    SphericalDecomposition,
    scaling_limit,
    sphere_power_moment,
    stable_constant,
)
from .models import GeometrySection, JumpSection, ProcessSection, ScenarioFile, SphereSection

# Configure module logging
logger = logging.getLogger(__name__)

EXIT_PASS, EXIT_ERROR, EXIT_FAIL = 0, 1, 2
CORPUS_COLUMNS = ["scenario", "theorem", "limit", "scaled_value", "error", "verdict", "status", "message"]

# required and optional keys per process family (family and dimension are always present)
FAMILY_FIELDS: Dict[str, Tuple[set, set]] = {
    "isotropic_stable": ({"alpha"}, {"scale", "levy_constant", "jumps"}),
    "brownian": ({"lam"}, {"jumps"}),
    "spherical_stable_like": ({"alpha", "sphere", "log_exponent"}, {"jumps"}),
    "product_of_stables": ({"alphas", "scales"}, {"jumps"}),
    "compound_poisson": ({"jumps", "drift"}, set()),
    "finite_variation": ({"alpha", "drift"}, {"sphere", "levy_constant", "log_exponent", "jumps"}),
}


# -- loading ---------------------------------------------------------------

def _line_index(node, path=(), index=None) -> Dict[tuple, int]:
    """Map key paths of a composed YAML tree to 1-based line numbers."""
    index = {} if index is None else index
    index.setdefault(path, node.start_mark.line + 1)
    if isinstance(node, yaml.MappingNode):
        for key, value in node.value:
            sub = path + (key.value,)
            index[sub] = key.start_mark.line + 1
            _line_index(value, sub, index)
    elif isinstance(node, yaml.SequenceNode):
        for i, item in enumerate(node.value):
            _line_index(item, path + (i,), index)
    return index


def _anchor(lines: Dict[tuple, int], loc: tuple) -> Optional[int]:
    for k in range(len(loc), -1, -1):
        if tuple(loc[:k]) in lines:
            return lines[tuple(loc[:k])]
    return None


def load_scenario(path: str) -> Tuple[ScenarioFile, Dict[tuple, int]]:
    """Parse and validate a scenario file.

    Returns:
        The validated ScenarioFile and the key-path → line index used to anchor
        later validation errors.

    Raises:
        ScenarioError: On YAML syntax errors or schema violations, with the line
            of the offending key.
    """
    try:
        with open(path, "r", encoding="utf-8") as fh:
            text = fh.read()
    except OSError as exc:
        raise ScenarioError(f"cannot read scenario: {exc}", path) from exc
    try:
        node = yaml.compose(text)
        raw = yaml.safe_load(text)
    except yaml.YAMLError as exc:
        mark = getattr(exc, "problem_mark", None)
        raise ScenarioError(f"invalid YAML: {getattr(exc, 'problem', exc)}", path,
                            mark.line + 1 if mark else None) from exc
    if not isinstance(raw, dict):
        raise ScenarioError("scenario must be a mapping of sections", path, 1)
    lines = _line_index(node)
    try:
        scenario = ScenarioFile.model_validate(raw)
    except ValidationError as exc:
        first = exc.errors()[0]
        loc = tuple(first["loc"])
        where = ".".join(str(p) for p in loc)
        raise ScenarioError(f"{where}: {first['msg']}", path, _anchor(lines, loc)) from exc
    return scenario, lines


# -- builders --------------------------------------------------------------

def _check_fields(section: ProcessSection) -> None:
    required, optional = FAMILY_FIELDS[section.family]
    given = set(section.model_fields_set) - {"family", "dimension"}
    missing = required - given
    if missing:
        raise ValueError(f"family {section.family} needs {sorted(missing)}")
    extra = given - required - optional
    if extra:
        raise ValueError(f"family {section.family} does not take {sorted(extra)}")


def build_jumps(section: Optional[JumpSection], dimension: int) -> Optional[FiniteMeasure]:
    if section is None:
        return None
    if section.atoms is not None:
        if section.low is not None or section.high is not None or section.mass is not None:
            raise ValueError("jumps carry either atoms and weights or low, high and mass")
        jumps = FiniteMeasure.from_atoms(section.atoms, section.weights or [])
    else:
        if section.low is None or section.high is None or section.mass is None:
            raise ValueError("uniform jumps need low, high and mass")
        jumps = FiniteMeasure.uniform_interval(section.low, section.high, section.mass)
    if jumps.dimension != dimension:
        raise ValueError(f"jumps live in dimension {jumps.dimension}, process in {dimension}")
    return jumps


def build_sphere(section: SphereSection, dimension: int) -> SphereMeasure:
    if section.kind == "uniform":
        if section.mass is None or section.directions is not None or section.weights is not None:
            raise ValueError("a uniform sphere measure takes only its mass")
        return SphereMeasure.uniform(dimension, section.mass)
    if section.directions is None or section.weights is None or section.mass is not None:
        raise ValueError("an atomic sphere measure takes directions and weights")
    sphere = SphereMeasure.atoms(section.directions, section.weights)
    if sphere.dimension != dimension:
        raise ValueError("sphere directions do not match the process dimension")
    return sphere


def build_model(section: ProcessSection) -> LevyModel:
    """LevyModel described by a process section."""
    _check_fields(section)
    d, fam = section.dimension, section.family
    jumps = build_jumps(section.jumps, d)
    if fam == "isotropic_stable":
        if (section.scale is None) == (section.levy_constant is None):
            raise ValueError("give exactly one of scale and levy_constant")
        scale = section.scale
        if scale is None:
            scale = section.levy_constant * stable_constant(section.alpha) * sphere_power_moment(d, section.alpha)
        return LevyModel.isotropic_stable(d, section.alpha, scale, jumps)
    if fam == "brownian":
        return LevyModel.brownian(d, section.lam, jumps)
    if fam == "spherical_stable_like":
        sphere = build_sphere(section.sphere, d)
        return LevyModel.spherical_stable_like(sphere, section.alpha, section.log_exponent, jumps)
    if fam == "product_of_stables":
        if len(section.alphas) != d:
            raise ValueError("product of stables needs one index per coordinate")
        return LevyModel.product_of_stables(section.alphas, section.scales, jumps)
    if fam == "compound_poisson":
        if len(section.drift) != d:
            raise ValueError("drift length does not match the dimension")
        return LevyModel.compound_poisson(jumps, section.drift)
    if (section.sphere is None) == (section.levy_constant is None):
        raise ValueError("finite variation needs exactly one of sphere and levy_constant")
    if section.sphere is not None:
        measure = SphericalDecomposition(build_sphere(section.sphere, d),
                                         RadialProfile(section.alpha, section.log_exponent or 0.0))
    else:
        if section.log_exponent is not None:
            raise ValueError("log_exponent needs a sphere measure")
        measure = RadialPowerLaw(d, section.alpha, section.levy_constant)
    return LevyModel.finite_variation(measure, section.drift, jumps)


def build_geometry(section: GeometrySection) -> SetGeometry:
    """SetGeometry described by a geometry section."""
    given = set(section.model_fields_set) - {"kind"}
    expected = {"ball": {"center", "radius"}, "box": {"center", "half_widths"},
                "annulus": {"center", "r_in", "r_out"}, "union": {"components"}}[section.kind]
    if given != expected:
        raise ValueError(f"{section.kind} takes exactly {sorted(expected)}")
    if section.kind == "ball":
        return Ball(tuple(section.center), section.radius)
    if section.kind == "box":
        return Box(tuple(section.center), tuple(section.half_widths))
    if section.kind == "annulus":
        return Annulus(tuple(section.center), section.r_in, section.r_out)
    return DisjointUnion(tuple(build_geometry(c) for c in section.components))


def build_data(scenario: ScenarioFile, omega: SetGeometry) -> InitialData:
    section = scenario.data
    if section.mu == "lebesgue":
        mu = LebesgueOnSet(omega)
    elif section.mu == "lebesgue_other":
        mu = LebesgueOnSet(build_geometry(section.mu_geometry))
    else:
        mu = GaussianDensity(omega.dimension)
    return InitialData(Indicator(omega), mu, section.g_scale)


def _r_beta(rf):
    if rf.R_beta is None:
        raise HypothesisViolationError("the directional second difference is only available for same-set data")
    return rf.R_beta


def gate_law(scenario: ScenarioFile, model: LevyModel) -> None:
    """Cheap hypothesis checks run before any sweep."""
    theorem = Theorem(scenario.law.theorem)
    beta = scenario.law.beta
    if theorem in (Theorem.T2, Theorem.COROLLARY1, Theorem.T3, Theorem.EX5_RADIAL, Theorem.EX5_RECTANGLE):
        alpha = scaling_limit(model, scenario.law.normalization).alpha
        if not beta < alpha <= 2.0:
            raise HypothesisViolationError(f"the limit needs β < α ≤ 2, got α={alpha}, β={beta}")
    if theorem in (Theorem.T1_CASE1, Theorem.T1_CASE2I) and not model.admits_beta(max(beta, 1e-12)):
        raise HypothesisViolationError(f"ν does not integrate ‖y‖^{beta} near 0")


def build_law(scenario: ScenarioFile, model: LevyModel, data: InitialData, rf) -> AsymptoticLaw:
    """Limit constant and scale function of the scenario's governing result."""
    law = scenario.law
    theorem = Theorem(law.theorem)
    beta, d = law.beta, model.dimension
    omega = data.g.geometry
    if theorem == Theorem.T1_CASE1:
        value, scale = limit_t1_case1(model, rf), time_scale
    elif theorem == Theorem.T1_CASE2I:
        value, scale = limit_t1_symmetric(model, rf), time_scale
    elif theorem == Theorem.T1_CASE2II:
        value, scale = limit_t1_general(model, rf), time_scale
    elif theorem == Theorem.EX1:
        value, scale = limit_example1(model, data), time_scale
    elif theorem in (Theorem.EX2_CASE1, Theorem.EX2_CASE2):
        omega0 = data.mu.geometry if isinstance(data.mu, LebesgueOnSet) else None
        case = 1 if theorem == Theorem.EX2_CASE1 else 2
        value = limit_example2(model, omega, omega0, case)
        value = type(value)(value.value * data.g_scale, value.error * data.g_scale)
        scale = time_scale
    else:
        limit = scaling_limit(model, law.normalization)
        limit.check(beta, d)
        scale = power_scale(limit, beta)
        if theorem == Theorem.T2:
            value = limit_t2(limit, limit.alpha, beta, _r_beta(rf), d)
        elif theorem == Theorem.COROLLARY1:
            if not model.is_radial() or limit.Lambda is None:
                raise HypothesisViolationError("the isotropic formula needs a rotation-invariant process")
            lam = float(np.asarray(limit.Lambda(np.eye(d)[:1]))[0])
            value = limit_corollary1(d, limit.alpha, beta, _r_beta(rf), lam)
        elif theorem == Theorem.T3:
            if limit.eta is None:
                raise HypothesisViolationError("no limit measure η for this process")
            value = limit_t3(limit.eta, beta, _r_beta(rf))
        elif theorem == Theorem.EX5_RADIAL:
            value = limit_ex5_radial(omega, limit.alpha)
            value = type(value)(value.value * data.g_scale, value.error * data.g_scale)
        else:
            axes = limit.eta.support_axes() if limit.eta is not None else []
            if len(axes) != 1:
                raise HypothesisViolationError("the rectangle form needs a limit measure on one axis")
            value = limit_ex5_rectangle(omega, limit.alpha, axes[0])
            value = type(value)(value.value * data.g_scale, value.error * data.g_scale)
    return AsymptoticLaw(theorem, scale, beta, value.value, law.tolerance, {"limit_error": value.error})


@contextmanager
def _anchored(path: Optional[str], lines: Dict[tuple, int], section: str):
    """Re-raise build errors as ScenarioError at the line of `section`.

    Hypothesis violations always point at the law section.
    """
    try:
        yield
    except ScenarioError:
        raise
    except HypothesisViolationError as exc:
        raise ScenarioError(str(exc), path, _anchor(lines, ("law",))) from exc
    except (LevyHeatError, ValueError) as exc:
        raise ScenarioError(str(exc), path, _anchor(lines, (section,))) from exc


def _build_inputs(scenario: ScenarioFile, path: Optional[str],
                  lines: Dict[tuple, int]) -> Tuple[LevyModel, InitialData]:
    with _anchored(path, lines, "process"):
        model = build_model(scenario.process)
    with _anchored(path, lines, "geometry"):
        omega = build_geometry(scenario.geometry)
        if omega.dimension != model.dimension:
            raise ValueError(f"geometry has dimension {omega.dimension}, process {model.dimension}")
    with _anchored(path, lines, "data"):
        data = build_data(scenario, omega)
    with _anchored(path, lines, "law"):
        gate_law(scenario, model)
    return model, data


def build_scenario(scenario: ScenarioFile, seed: Optional[int] = None, threads: Optional[int] = None,
                   cache: Optional[DensityCache] = None, path: Optional[str] = None,
                   lines: Optional[Dict[tuple, int]] = None) -> Tuple[HeatScenario, AsymptoticLaw]:
    """HeatScenario and AsymptoticLaw for a validated scenario file.

    Raises:
        ScenarioError: Anchored to the section whose contents could not be built.
    """
    lines = lines or {}
    model, data = _build_inputs(scenario, path, lines)
    sweep = scenario.sweep
    with _anchored(path, lines, "sweep"):
        t_grid = tuple(float(t) for t in np.geomspace(sweep.t_max, sweep.t_min, sweep.points))
        heat = HeatScenario.build(model, data, t_grid, estimator=Estimator(sweep.estimator), n=sweep.n,
                                  seed=sweep.seed if seed is None else seed, cache=cache, threads=threads)
    with _anchored(path, lines, "law"):
        law = build_law(scenario, model, data, heat.rf)
    return replace(heat, scale=law.scale), law


# -- running ---------------------------------------------------------------

@dataclass
class ScenarioOutcome:
    """Exit status and artifacts of one scenario run."""
    path: str
    status: int
    report: Optional[ConvergenceReport] = None
    artifacts: Dict[str, str] = field(default_factory=dict)
    message: str = ""


def _output_dir(path: str, scenario: ScenarioFile, override: Optional[str]) -> str:
    stem = os.path.splitext(os.path.basename(path))[0]
    if override:
        return os.path.join(override, stem)
    if scenario.output is not None:
        return scenario.output.directory
    return os.path.join("results", stem)


def run_scenario(path: str, seed: Optional[int] = None, threads: Optional[int] = None,
                 cache: Optional[DensityCache] = None, tolerance_override: Optional[float] = None,
                 output_dir: Optional[str] = None) -> ScenarioOutcome:
    """Build r, sweep, evaluate the limit, report; exit 0 on PASS, 2 on FAIL, 1 on error."""
    stem = os.path.splitext(os.path.basename(path))[0]
    try:
        scenario, lines = load_scenario(path)
        heat, law = build_scenario(scenario, seed, threads, cache, path, lines)
        folder = _output_dir(path, scenario, output_dir)
        try:
            os.makedirs(folder, exist_ok=True)
        except OSError as exc:
            raise ScenarioError(f"cannot create results folder {folder}: {exc}", path) from exc
        logger.info(f"[RUNNER] {stem}: {law.theorem.value} limit={law.limit_value:.10g}")
        table = heat_deficit_sweep(heat)
        report = convergence_report(table, law, tolerance_override)
        artifacts = {
            "sweep": os.path.join(folder, f"{stem}_sweep.csv"),
            "report": os.path.join(folder, f"{stem}_report.csv"),
            "summary": os.path.join(folder, f"{stem}_summary.txt"),
            "plotdata": os.path.join(folder, f"{stem}_plotdata.csv"),
        }
        try:
            table.to_csv(artifacts["sweep"], index=False, float_format="%.12g")
            report.to_csv(artifacts["report"])
            with open(artifacts["summary"], "w", encoding="utf-8") as fh:
                fh.write(f"scenario: {stem}\n")
                fh.write(report.summary())
            emit_plotdata(report, artifacts["plotdata"])
        except OSError as exc:
            raise ScenarioError(f"cannot write results to {folder}: {exc}", path) from exc
        status = EXIT_PASS if report.passed else EXIT_FAIL
        return ScenarioOutcome(path, status, report, artifacts, report.verdict)
    except LevyHeatError as exc:
        logger.error(f"[RUNNER] {stem}: {exc}")
        return ScenarioOutcome(path, EXIT_ERROR, message=str(exc))


def validate_scenario(path: str) -> ScenarioOutcome:
    """Parse, build and gate a scenario without sweeping."""
    try:
        scenario, lines = load_scenario(path)
        _build_inputs(scenario, path, lines)
        return ScenarioOutcome(path, EXIT_PASS, message="valid")
    except LevyHeatError as exc:
        return ScenarioOutcome(path, EXIT_ERROR, message=str(exc))


def _corpus_row(outcome: ScenarioOutcome) -> dict:
    name = os.path.basename(outcome.path)
    report = outcome.report
    if report is None:
        return {"scenario": name, "theorem": "", "limit": math.nan, "scaled_value": math.nan,
                "error": math.nan, "verdict": "ERROR", "status": outcome.status, "message": outcome.message}
    last = report.table.loc[report.table["t"].idxmin()]
    return {"scenario": name, "theorem": report.theorem.value, "limit": report.limit,
            "scaled_value": float(last["scaled_value"]), "error": float(last["error"]),
            "verdict": report.verdict, "status": outcome.status, "message": outcome.message}


def run_corpus(directory: str, threads: Optional[int] = None, seed: Optional[int] = None,
               cache: Optional[DensityCache] = None, tolerance_override: Optional[float] = None,
               output_dir: Optional[str] = None) -> pd.DataFrame:
    """Run every scenario in `directory`; rows ordered by file name.

    Failing scenarios become error rows and the corpus continues.
    """
    files = sorted(f for f in os.listdir(directory) if f.endswith((".yaml", ".yml")))
    workers = threads or get_settings().THREADS
    logger.info(f"[WORKER] Running {len(files)} scenarios on {workers} workers")

    def job(name: str) -> ScenarioOutcome:
        logger.info(f"[WORKER] Starting {name}")
        try:
            return run_scenario(os.path.join(directory, name), seed, 1, cache, tolerance_override, output_dir)
        except Exception as exc:  # a broken scenario must not stop the corpus
            logger.exception(f"[WORKER] {name} crashed")
            return ScenarioOutcome(os.path.join(directory, name), EXIT_ERROR, message=str(exc))

    with ThreadPoolExecutor(max_workers=workers) as pool:
        outcomes: List[ScenarioOutcome] = list(pool.map(job, files))
    summary = pd.DataFrame([_corpus_row(o) for o in outcomes], columns=CORPUS_COLUMNS)
    folder = output_dir or "results"
    os.makedirs(folder, exist_ok=True)
    summary.to_csv(os.path.join(folder, "corpus_summary.csv"), index=False, float_format="%.12g")
    return summary


def emit_plotdata(report, path: str) -> str:
    """Write the (log t, log error) and (scale, scaled value, limit) series to CSV.

    `report` is a ConvergenceReport or a report table read back from CSV.
    """
    table = report.export_table() if isinstance(report, ConvergenceReport) else report
    mode = str(table["mode"].iloc[0]) if len(table) else "relative"
    name = "log_error" if mode == "relative" else "log_abs_error"
    with np.errstate(divide="ignore"):
        err = pd.DataFrame({"series": name, "estimator": table["estimator"], "x": np.log(table["t"]),
                            "y": np.log(table["error"]), "limit": table["limit"]})
    scaled = pd.DataFrame({"series": "scaled", "estimator": table["estimator"], "x": table["scale"],
                           "y": table["scaled_value"], "limit": table["limit"]})
    pd.concat([err, scaled], ignore_index=True).to_csv(path, index=False, float_format="%.12g")
    return path
