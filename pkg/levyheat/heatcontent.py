"""Generalized heat content H(t) = E r(X_t) by quadrature and by Monte Carlo.

The quadrature estimator picks one of three evaluations:

* product models on box data factor H into one-dimensional expectations;
* compound Poisson laws use the exact Poisson series over jump convolutions;
* every other symmetric model (with an optional drift, absorbed as a shift
  of r) combines an FFT density grid of X_t/s on a core ball, s the
  characteristic length, with the small-time approximation P(X_t ∈ dy) ≈ tν(dy)
  outside the core.
"""

import itertools
import logging
import math
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, replace
from enum import Enum
from typing import Callable, List, Optional, Sequence, Tuple

import numpy as np
import pandas as pd
from scipy import integrate, special, stats

from .config import get_settings
from .density import GRID_CAPS, GridSpec, frequency_cutoff, sample_increments, transition_density
from .errors import ArgumentError, NumericError, UnsupportedOperationError
from .geometry import InitialData, RFunction, build_r
from .levy_models import (
    AxesProduct,
    FiniteMeasure,
    LevyModel,
    characteristic_length,
    gamma0,
    pruitt_h,
    stable_constant,
)

# Configure module logging
logger = logging.getLogger(__name__)

CORE_HALF_WIDTH = {1: 2000.0, 2: 64.0, 3: 8.0}
CORE_SPACING = {1: 1.0 / 16.0, 2: 0.25, 3: 0.25}
IMAGE_SHELLS = {1: 32, 2: 2, 3: 1}
POISSON_TERMS = 200
POISSON_TAIL = 1e-16
MAX_ATOM_COMBINATIONS = 2_000_000
SWEEP_COLUMNS = ["t", "estimator", "H", "H_minus_H0", "scale", "scaled_value", "stderr", "tail_bound"]


class Estimator(str, Enum):
    QUADRATURE = "quadrature"
    MONTE_CARLO = "monte_carlo"
    BOTH = "both"


def default_t_grid(points: int = 12, t_max: float = 1e-1, t_min: float = 10 ** -4.5) -> Tuple[float, ...]:
    """Geometric grid from t_max down to t_min."""
    return tuple(float(t) for t in np.geomspace(t_max, t_min, points))


@dataclass(frozen=True, eq=False)
class HeatScenario:
    """A model, initial data and the sweep settings used to estimate H.

    `scale` maps t to the normalization of the deficit (t⁻¹ when omitted).
    `tail_tolerance` is relative to |H(t) − H(0)|.
    """
    model: LevyModel
    data: InitialData
    rf: RFunction
    t_grid: Tuple[float, ...]
    estimator: Estimator = Estimator.QUADRATURE
    n: int = 100_000
    seed: int = 0
    scale: Optional[Callable[[float], float]] = None
    tail_tolerance: Optional[float] = None
    cache: Optional[object] = None
    threads: Optional[int] = None

    def __post_init__(self):
        if self.model.dimension != self.data.dimension:
            raise ArgumentError("model and initial data live in different dimensions")
        ts = np.asarray(self.t_grid, dtype=float)
        if ts.size == 0 or np.any(ts <= 0) or np.any(np.diff(ts) >= 0):
            raise ArgumentError("t grid must be positive and strictly decreasing")
        if self.n < 1000:
            raise ArgumentError(f"Monte Carlo needs at least 1000 draws, got {self.n}")

    @classmethod
    def build(cls, model: LevyModel, data: InitialData, t_grid: Optional[Sequence[float]] = None,
              **kwargs) -> "HeatScenario":
        """Build r once and attach it to a new scenario."""
        grid = tuple(t_grid) if t_grid is not None else default_t_grid()
        return cls(model=model, data=data, rf=build_r(data), t_grid=grid, **kwargs)

    @property
    def h0(self) -> float:
        """H(0) = r(0)."""
        return self.rf.r0

    def scale_at(self, t: float) -> float:
        return self.scale(t) if self.scale is not None else 1.0 / t


@dataclass(frozen=True)
class QuadratureResult:
    """Quadrature value of H(t) and the reported remainder bound."""
    value: float
    tail_bound: float

    def __float__(self) -> float:
        return self.value


# -- quadrature paths ------------------------------------------------------

def _axis_models(model: LevyModel) -> Optional[List[Optional[LevyModel]]]:
    """One-dimensional coordinate processes when X has independent coordinates."""
    if any(model.gamma):
        return None
    if model.measure is None:
        return [LevyModel.brownian(1, model.gaussian)] * model.dimension
    nu = model.measure
    if model.gaussian == 0 and isinstance(nu, AxesProduct):
        axes = []
        for a, c in zip(nu.alphas, nu.constants):
            axes.append(LevyModel.isotropic_stable(1, a, 2.0 * c * stable_constant(a)) if c > 0 else None)
        return axes
    return None


def _product_expectation(axes: List[Optional[LevyModel]], rf: RFunction, t: float,
                         cache) -> QuadratureResult:
    values, bounds, sups = [], [], []
    for axis_model, factor in zip(axes, rf.factors):
        if axis_model is None:
            res = QuadratureResult(factor.r0, 0.0)
        else:
            res = _expectation(axis_model, factor, t, cache)
        values.append(res.value)
        bounds.append(res.tail_bound)
        sups.append(max(factor.sup_norm, abs(res.value)))
    value = float(np.prod(values))
    bound = sum(b * np.prod(sups[:i] + sups[i + 1:]) for i, b in enumerate(bounds))
    return QuadratureResult(value, float(bound))


def _irwin_hall(n: int) -> Callable[[float], float]:
    """Density of the sum of n independent uniforms on [0, 1]."""
    coeffs = [(-1) ** k * special.comb(n, k) for k in range(n + 1)]
    norm = math.factorial(n - 1)

    def density(u: float) -> float:
        return sum(c * (u - k) ** (n - 1) for k, c in enumerate(coeffs) if u > k) / norm
    return density


def _jump_sum_expectation(jumps: FiniteMeasure, r: Callable[[np.ndarray], np.ndarray],
                          shift: np.ndarray, n: int) -> float:
    """E r(shift + J_1 + … + J_n) for i.i.d. jumps with law ν/ν(ℝ^d)."""
    if n == 0:
        return float(r(shift[None, :])[0])
    if jumps.has_density:
        lo, width = jumps.low, jumps.high - jumps.low
        dens = _irwin_hall(n)

        def integrand(u):
            return float(r(np.array([[shift[0] + n * lo + width * u]]))[0]) * dens(u)
        value, _ = integrate.quad(integrand, 0.0, float(n), points=list(range(1, n)) or None, limit=200)
        return value
    atoms, weights = jumps.atom_array()
    probs = weights / weights.sum()
    m = len(probs)
    if special.comb(n + m - 1, n) > MAX_ATOM_COMBINATIONS:
        raise NumericError("too many atom combinations in the Poisson series", {"n": n, "atoms": m})
    counts = np.array([np.bincount(c, minlength=m) for c in itertools.combinations_with_replacement(range(m), n)])
    log_p = special.gammaln(n + 1) - special.gammaln(counts + 1).sum(axis=1) + counts @ np.log(probs)
    return float(np.dot(np.exp(log_p), r(shift + counts @ atoms)))


def _poisson_series(model: LevyModel, rf: RFunction, t: float) -> QuadratureResult:
    jumps = model.measure
    lam = jumps.total_mass() * t
    shift = -t * gamma0(model)
    osc = rf.sup_norm + abs(rf.r0)
    value, n = 0.0, 0
    while True:
        value += stats.poisson.pmf(n, lam) * _jump_sum_expectation(jumps, rf.evaluator, shift, n)
        tail = stats.poisson.sf(n, lam)
        if tail * osc < POISSON_TAIL or n >= POISSON_TERMS:
            break
        n += 1
    logger.debug(f"[SWEEP] Poisson series at t={t:g}: {n + 1} terms")
    return QuadratureResult(float(value), float(tail * osc))


def _split_drift(model: LevyModel) -> Tuple[LevyModel, np.ndarray]:
    """Symmetric part and drift velocity; X_t = t·drift + Y_t with Y symmetric."""
    drift = np.array(model.gamma, dtype=float)
    if model.measure is not None and not model.measure.is_symmetric():
        raise UnsupportedOperationError(
            "quadrature needs a symmetric Lévy measure; use the Monte Carlo estimator"
        )
    if not any(drift):
        return model, drift
    return replace(model, gamma=(0.0,) * model.dimension), drift


def _core_grid(model: LevyModel, t: float, length: float) -> Tuple[GridSpec, float]:
    d = model.dimension
    if d not in GRID_CAPS:
        raise UnsupportedOperationError("quadrature heat content is limited to d <= 3")
    cutoff = frequency_cutoff(model, t, length=length)
    h = min(np.pi / cutoff, CORE_SPACING[d])
    core = CORE_HALF_WIDTH[d]
    n = int(2 ** math.ceil(math.log2(4.0 * core / h)))
    if n > GRID_CAPS[d]:
        n = GRID_CAPS[d]
        core = n * h / 4.0
    return GridSpec(n, h, d), core


def _small_time_error(model: LevyModel, t: float, inner: float, outer: float) -> Callable[[np.ndarray], np.ndarray]:
    """ρ ↦ min(1, t·h(ρ)), the relative error of P(X_t ∈ dy) ≈ tν(dy) at ‖y‖ = ρ ≥ inner."""
    radii = np.geomspace(inner, max(outer, 2.0 * inner), 48)
    log_err = np.log([min(1.0, t * pruitt_h(model, r)) for r in radii])
    log_r = np.log(radii)

    def err(rho):
        return np.exp(np.interp(np.log(np.maximum(rho, inner)), log_r, log_err))
    return err


def _image_density(nu, pts: np.ndarray, period: float, t: float, s: float) -> Optional[np.ndarray]:
    """Σ_{0<|k|∞≤K} p(x + kP) at core points, with the far law p ≈ t·s^d·ν(s·) of X_t/s."""
    d = pts.shape[1]
    if nu.density(np.ones((1, d))) is None:
        return None
    shells = IMAGE_SHELLS[d]
    total = np.zeros(len(pts))
    for k in itertools.product(range(-shells, shells + 1), repeat=d):
        if any(k):
            total += nu.density(s * (pts + period * np.array(k, dtype=float)))
    return t * s ** d * total


def _hybrid_expectation(model: LevyModel, rf: RFunction, t: float, cache) -> QuadratureResult:
    sym, drift = _split_drift(model)
    shift = t * drift
    s = characteristic_length(sym, t)
    spec, core = _core_grid(sym, t, s)
    d = spec.dimension
    grid = transition_density(sym, t, spec, cache=cache, length=s)
    pts = grid.points()
    inside = np.linalg.norm(pts, axis=-1) <= core
    pts = pts[inside]
    dens = grid.values.ravel()[inside]
    vol = grid.cell_volume()
    excess = rf.evaluator(s * pts + shift) - rf.r0
    worst = float(np.max(np.abs(excess), initial=0.0))
    nu = sym.measure

    # periodized grid: remove the images of the far field
    images = None if nu is None else _image_density(nu, pts, spec.period, t, s)
    if images is None:
        bound = min(1.0, t * pruitt_h(sym, 2.0 * core * s)) * worst
    else:
        cube = (IMAGE_SHELLS[d] + 0.5) * spec.period * s
        tail_in, tail_out = nu.tail_mass(cube), nu.tail_mass(math.sqrt(d) * cube)
        far = 0.5 * t * (tail_in + tail_out)
        dens = dens - images - far / spec.period ** d
        spread = min(1.0, (d + 2.0) * core / ((IMAGE_SHELLS[d] + 0.5) * spec.period))
        bound = (min(1.0, t * pruitt_h(sym, 3.0 * core * s)) * float(np.dot(np.abs(excess), images)) * vol
                 + worst * (0.5 * t * (tail_in - tail_out) + far * spread))
    value = rf.r0 + float(np.dot(excess, dens)) * vol

    if nu is not None:
        inner = core * s
        reach = max(rf.support_radius + float(np.linalg.norm(shift)), inner)
        err = _small_time_error(sym, t, inner, reach)

        def deficit(y):
            return rf.evaluator(y + shift) - rf.r0

        def weighted(y):
            return np.abs(deficit(y)) * err(np.linalg.norm(y, axis=-1))

        outside = -t * rf.r0 * nu.tail_mass(reach)
        bound += abs(rf.r0) * t * nu.tail_mass(reach) * float(err(reach))
        if reach > inner:
            outside += t * nu.integrate(deficit, inner, reach)
            bound += t * nu.integrate(weighted, inner, reach)
        value += outside
    logger.debug(f"[SWEEP] Hybrid quadrature t={t:g}: s={s:.4g}, n={spec.n}, h={spec.h:.4g}, core={core:g}")
    return QuadratureResult(value, float(bound))


def _expectation(model: LevyModel, rf: RFunction, t: float, cache=None) -> QuadratureResult:
    if rf.factors is not None:
        axes = _axis_models(model)
        if axes is not None:
            return _product_expectation(axes, rf, t, cache)
    if model.gaussian == 0 and isinstance(model.measure, FiniteMeasure):
        return _poisson_series(model, rf, t)
    if model.measure is None and model.gaussian == 0:
        return QuadratureResult(float(rf.evaluator(t * np.array(model.gamma)[None, :])[0]), 0.0)
    return _hybrid_expectation(model, rf, t, cache)


def heat_content_quadrature(scenario: HeatScenario, t: float,
                            tolerance: Optional[float] = None) -> QuadratureResult:
    """Deterministic H(t) with a remainder bound.

    Args:
        scenario: Heat-content scenario.
        t: Time, t ≥ 0 (t = 0 returns r(0)).
        tolerance: Absolute bound the remainder must respect; unchecked when omitted.

    Returns:
        QuadratureResult: Value and remainder bound.

    Raises:
        NumericError: If the remainder bound exceeds `tolerance`.
        UnsupportedOperationError: If no quadrature path covers the model.
    """
    if t < 0:
        raise ArgumentError("heat content needs t >= 0")
    if t == 0:
        return QuadratureResult(scenario.h0, 0.0)
    result = _expectation(scenario.model, scenario.rf, t, scenario.cache)
    if tolerance is not None and result.tail_bound > tolerance:
        raise NumericError(
            "quadrature remainder exceeds tolerance; enlarge the grid or use Monte Carlo",
            {"t": t, "bound": result.tail_bound, "tolerance": tolerance},
        )
    return result


# -- Monte Carlo -----------------------------------------------------------

def _mc_batch(model: LevyModel, rf: RFunction, t: float, seq: np.random.SeedSequence,
              size: int) -> Tuple[float, float]:
    rng = np.random.default_rng(seq)
    values = rf.evaluator(sample_increments(model, t, rng, size)) - rf.r0
    return float(values.sum()), float(np.dot(values, values))


def heat_content_mc(scenario: HeatScenario, t: float, n: Optional[int] = None) -> Tuple[float, float]:
    """Mean of r(X_t) over n draws and its standard error.

    Batches draw from SeedSequence children of the scenario seed, so the
    result does not depend on thread scheduling.
    """
    if t == 0:
        return scenario.h0, 0.0
    count = n or scenario.n
    batch = int(get_settings().MC_BATCH)
    sizes = [batch] * (count // batch) + ([count % batch] if count % batch else [])
    seqs = np.random.SeedSequence(scenario.seed).spawn(len(sizes))
    threads = scenario.threads or get_settings().THREADS
    with ThreadPoolExecutor(max_workers=threads) as pool:
        parts = list(pool.map(lambda args: _mc_batch(scenario.model, scenario.rf, t, *args),
                              zip(seqs, sizes)))
    total = sum(p[0] for p in parts)
    squares = sum(p[1] for p in parts)
    mean = total / count
    var = max(squares - count * mean * mean, 0.0) / (count - 1)
    return scenario.h0 + mean, math.sqrt(var / count)


# -- sweeps ----------------------------------------------------------------

def _row(t: float, estimator: str, value: float, h0: float, scale: float,
         stderr: float, tail: float) -> dict:
    return {"t": t, "estimator": estimator, "H": value, "H_minus_H0": value - h0, "scale": scale,
            "scaled_value": scale * (value - h0), "stderr": stderr, "tail_bound": tail}


def heat_deficit_sweep(scenario: HeatScenario) -> pd.DataFrame:
    """Table of H(t), H(t) − H(0) and the scaled deficit for every t of the grid.

    Rows follow the t grid; quadrature precedes Monte Carlo at each t.
    """
    rows = []
    rel_tol = scenario.tail_tolerance if scenario.tail_tolerance is not None else get_settings().QUAD_TAIL_TOL
    want_quad = scenario.estimator in (Estimator.QUADRATURE, Estimator.BOTH)
    want_mc = scenario.estimator in (Estimator.MONTE_CARLO, Estimator.BOTH)
    for t in scenario.t_grid:
        scale = scenario.scale_at(t)
        if want_quad:
            res = heat_content_quadrature(scenario, t)
            allowed = rel_tol * abs(res.value - scenario.h0) + 1e-14
            if res.tail_bound > allowed:
                raise NumericError(
                    "quadrature remainder exceeds tolerance; enlarge the grid or use Monte Carlo",
                    {"t": t, "bound": res.tail_bound, "tolerance": allowed},
                )
            rows.append(_row(t, Estimator.QUADRATURE.value, res.value, scenario.h0, scale, 0.0, res.tail_bound))
            logger.info(f"[SWEEP] t={t:.4g} quadrature H={res.value:.12g} scaled={rows[-1]['scaled_value']:.8g}")
        if want_mc:
            est, err = heat_content_mc(scenario, t)
            rows.append(_row(t, Estimator.MONTE_CARLO.value, est, scenario.h0, scale, err, 0.0))
            logger.info(f"[SWEEP] t={t:.4g} monte_carlo H={est:.12g} ± {err:.3g}")
    table = pd.DataFrame(rows, columns=SWEEP_COLUMNS)
    _check_monotone(scenario, table)
    return table


def _check_monotone(scenario: HeatScenario, table: pd.DataFrame) -> bool:
    """Flag a deficit that shrinks as t grows (same convex set, isotropic model)."""
    geometry = scenario.rf.geometry
    if geometry is None or not geometry.is_convex() or not scenario.model.is_radial():
        return True
    ok = True
    for estimator, part in table.groupby("estimator", sort=False):
        deficit = -part["H_minus_H0"].to_numpy()
        noise = 3.0 * part["stderr"].to_numpy()[:-1] + 1e-12
        if np.any(deficit[:-1] + noise < deficit[1:]):
            logger.warning(f"[SWEEP] {estimator} deficit is not monotone in t")
            ok = False
    return ok
