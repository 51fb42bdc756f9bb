"""Small-time limit constants of the heat-content deficit and convergence reports.

Each `limit_*` function evaluates the constant a scaled deficit converges to,
after checking the hypotheses of the corresponding result on sampled data.
Hypothesis failures raise HypothesisViolationError rather than returning a number.
"""

import logging
import math
from dataclasses import dataclass, field
from enum import Enum
from typing import Callable, Dict, Optional, Union

import numpy as np
import pandas as pd
from scipy import integrate, special

from .config import get_settings
from .density import GridSpec, p_eta, p_lambda
from .errors import (
    ArgumentError,
    HypothesisViolationError,
    NumericError,
    UnsupportedOperationError,
)
from .geometry import (
    Ball,
    Box,
    GaussianDensity,
    Indicator,
    InitialData,
    RFunction,
    SetGeometry,
    gradient_at_zero,
    perimeter,
)
from .levy_models import (
    AxesProduct,
    LevyMeasureDescriptor,
    LevyModel,
    RadialPowerLaw,
    ScalingLimit,
    SphericalDecomposition,
    gamma0,
    sphere_area,
    sphere_grid,
    sphere_power_moment,
    stable_constant,
)

# Configure module logging
logger = logging.getLogger(__name__)

RBeta = Union[float, Callable[[np.ndarray], np.ndarray]]
PROBE_RADII = (1e-2, 1e-3, 1e-4, 1e-5)
LIMIT_GRID = {2: 1024, 3: 128}


class Theorem(str, Enum):
    T1_CASE1 = "t1_case1"
    T1_CASE2I = "t1_case2i"
    T1_CASE2II = "t1_case2ii"
    EX1 = "ex1"
    T2 = "t2"
    COROLLARY1 = "corollary1"
    T3 = "t3"
    EX2_CASE1 = "ex2_case1"
    EX2_CASE2 = "ex2_case2"
    EX5_RADIAL = "ex5_radial"
    EX5_RECTANGLE = "ex5_rectangle"


@dataclass(frozen=True)
class LimitValue:
    """A limit constant and the quadrature error reported with it."""
    value: float
    error: float = 0.0

    def __float__(self) -> float:
        return self.value


@dataclass(frozen=True, eq=False)
class AsymptoticLaw:
    """Scale function, exponent β and limit of a scaled deficit."""
    theorem: Theorem
    scale: Callable[[float], float]
    beta: float
    limit_value: float
    tolerance: Optional[float] = None
    diagnostics: Dict[str, float] = field(default_factory=dict)

    def __post_init__(self):
        if not math.isfinite(self.limit_value):
            raise NumericError("limit value is not finite", {"theorem": self.theorem.value})


def time_scale(t: float) -> float:
    """t⁻¹, the normalization of the first-order results."""
    return 1.0 / t


def power_scale(limit: ScalingLimit, beta: float) -> Callable[[float], float]:
    """t ↦ [V⁻(1/t)]^β."""
    def scale(t: float) -> float:
        return limit.inverse(1.0 / t) ** beta
    return scale


# -- hypothesis certificates ----------------------------------------------

def _probe_order(rf: RFunction, kind: str, grad: Optional[np.ndarray] = None) -> float:
    """Observed power of |D(ρθ)| as ρ ↓ 0, worst direction, D a first or second difference."""
    d = rf.dimension
    dirs, _ = sphere_grid(d, 16)
    sizes = []
    for rho in PROBE_RADII:
        pts = rho * dirs
        if kind == "second":
            vals = rf(pts) + rf(-pts) - 2.0 * rf.r0
        elif kind == "remainder":
            vals = rf(pts) - rf.r0 - pts @ grad
        else:
            vals = rf(pts) - rf.r0
        sizes.append(float(np.max(np.abs(vals))))
    sizes = np.array(sizes)
    if np.all(sizes <= 1e-13 * max(rf.sup_norm, 1.0)):
        return 2.0
    keep = sizes > 1e-13 * max(rf.sup_norm, 1.0)
    if keep.sum() < 2:
        return 2.0
    slope, _ = np.polyfit(np.log(np.array(PROBE_RADII)[keep]), np.log(sizes[keep]), 1)
    return float(min(slope, 2.0))


def _certify(model: LevyModel, rf: RFunction, kind: str, grad: Optional[np.ndarray] = None) -> float:
    """β with |D| ≤ C‖x‖^β sampled near 0 and ∫(1 ∧ ‖y‖^β)ν < ∞."""
    order = _probe_order(rf, kind, grad)
    beta = 2.0 if order > 1.75 else (1.0 if order > 0.9 else order)
    if beta <= 0 or not model.admits_beta(beta if beta < 2.0 else 1.999):
        raise HypothesisViolationError(
            f"r behaves like ‖x‖^{order:.2f} near 0, which ν does not integrate "
            f"(integrability exponent {model.measure.integrability_exponent() if model.measure else 0:g})"
        )
    return beta


def _require_nu(model: LevyModel) -> LevyMeasureDescriptor:
    if model.measure is None:
        raise HypothesisViolationError("the first-order results need a pure-jump Lévy measure")
    if model.gaussian > 0:
        raise HypothesisViolationError("the first-order results exclude a Gaussian component")
    return model.measure


def _nu_integral(nu: LevyMeasureDescriptor, func: Callable[[np.ndarray], np.ndarray],
                 reach: float, far_value: float, inner: float = 0.0) -> float:
    """∫_{‖y‖≥inner} F dν where F ≡ far_value beyond `reach`."""
    total = 0.0
    if reach > inner:
        total += nu.integrate(func, inner, reach)
    if far_value != 0.0:
        total += far_value * nu.tail_mass(max(reach, inner))
    return total


def _limit(value: float) -> LimitValue:
    return LimitValue(float(value), get_settings().LIMIT_REL_TOL * abs(value))


# -- first-order limits ----------------------------------------------------

def limit_t1_case1(model: LevyModel, rf: RFunction) -> LimitValue:
    """∫(r(x) − r(0)) ν(dx) for finite-variation models with γ₀ = 0.

    Raises:
        HypothesisViolationError: If the model is not of finite variation, if
            γ₀ ≠ 0, or if ν does not integrate the observed growth of r − r(0).
    """
    nu = _require_nu(model)
    if not model.has_finite_variation():
        raise HypothesisViolationError("this case needs a finite-variation process")
    g0 = gamma0(model)
    if np.linalg.norm(g0) > 1e-12:
        raise HypothesisViolationError(f"this case needs γ₀ = 0, got {g0.tolist()}")
    _certify(model, rf, "first")
    value = _nu_integral(nu, lambda y: rf.evaluator(y) - rf.r0, rf.support_radius, -rf.r0)
    logger.debug(f"[LIMITS] finite-variation limit: {value:.12g}")
    return _limit(value)


def limit_t1_symmetric(model: LevyModel, rf: RFunction) -> LimitValue:
    """(1/2)∫(r(x) + r(−x) − 2r(0)) ν(dx) for symmetric X."""
    nu = _require_nu(model)
    if not model.is_symmetric():
        raise HypothesisViolationError("this case needs a symmetric process")
    _certify(model, rf, "second")
    value = _nu_integral(nu, lambda y: 0.5 * (rf.evaluator(y) + rf.evaluator(-y)) - rf.r0,
                         rf.support_radius, -rf.r0)
    return _limit(value)


def limit_t1_general(model: LevyModel, rf: RFunction) -> LimitValue:
    """⟨γ, ∇r(0)⟩ + ∫(r(x) − r(0) − ⟨x, ∇r(0)⟩1_{‖x‖≤1}) ν(dx).

    ∇r(0) is analytic when known and otherwise a symmetric finite difference,
    which vanishes for even r.
    """
    grad = gradient_at_zero(rf)
    gamma = np.array(model.gamma, dtype=float)
    if model.measure is None and model.gaussian == 0:
        return LimitValue(float(gamma @ grad), 0.0)
    nu = _require_nu(model)
    _certify(model, rf, "remainder", grad)

    def near(y):
        return rf.evaluator(y) - rf.r0 - y @ grad

    inner = nu.integrate(near, 0.0, np.nextafter(1.0, 2.0))
    outer = _nu_integral(nu, lambda y: rf.evaluator(y) - rf.r0, rf.support_radius, -rf.r0,
                         inner=np.nextafter(1.0, 2.0))
    return _limit(float(gamma @ grad) + inner + outer)


def limit_example1(model: LevyModel, data: InitialData, nodes: int = 48) -> LimitValue:
    """∫_Ω [⟨γ₀, ∇f(z)⟩ + ∫(f(z − y) − f(z)) ν(dy)] dz for g = 1_Ω (Ω a box), μ = f dx Gaussian.

    The generator of −X applied to f, integrated over Ω; equals the general
    first-order limit for finite-variation models.
    """
    nu = _require_nu(model)
    if not model.has_finite_variation():
        raise HypothesisViolationError("this form needs a finite-variation process")
    if not (isinstance(data.g, Indicator) and isinstance(data.g.geometry, Box)
            and isinstance(data.mu, GaussianDensity)):
        raise UnsupportedOperationError("the generator form needs box indicator data and Gaussian μ")
    box, d, k = data.g.geometry, data.dimension, data.g_scale
    g0 = gamma0(model)
    x, w = np.polynomial.legendre.leggauss(nodes)
    axes = [box.center[i] + box.half_widths[i] * x for i in range(d)]
    mesh = np.stack(np.meshgrid(*axes, indexing="ij"), axis=-1).reshape(-1, d)
    wts = np.prod(np.stack(np.meshgrid(*([w] * d), indexing="ij"), axis=-1).reshape(-1, d), axis=1)
    wts = wts * np.prod(box.half_widths)

    def f(z):
        return np.exp(-0.5 * np.sum(z * z, axis=-1)) / (2.0 * np.pi) ** (d / 2.0)

    total = 0.0
    for z, wz in zip(mesh, wts):
        drift = float(g0 @ (-z)) * float(f(z[None, :])[0])
        jumps = nu.integrate(lambda y, z=z: f(z - y) - f(z[None, :]))
        total += wz * (drift + jumps)
    return _limit(k * total)


# -- stable limits ---------------------------------------------------------

def _sphere_average(R_beta: RBeta, d: int, resolution: int = 256) -> float:
    """(1/|S|)∫_S R_β dσ."""
    if not callable(R_beta):
        return float(R_beta)
    points, weights = sphere_grid(d, resolution)
    return float(weights @ np.asarray(R_beta(points), dtype=float)) / sphere_area(d)


def _gate(alpha: float, beta: float) -> None:
    if not 0.0 < beta < 2.0:
        raise ArgumentError(f"β must lie in (0, 2), got {beta}")
    if not beta < alpha <= 2.0:
        raise HypothesisViolationError(f"the limit needs β < α ≤ 2, got α={alpha}, β={beta}")


def stable_abs_moment(scale: float, alpha: float, beta: float, dimension: int) -> float:
    """E‖X‖^β for E e^{i⟨ξ,X⟩} = e^{−scale·‖ξ‖^α}, β < α.

    Uses ‖x‖^β = (K_β J_{d,β})⁻¹∫(1 − cos⟨ξ,x⟩)‖ξ‖^{−d−β}dξ, reducing the
    moment to a one-dimensional integral of 1 − e^{−scale·u^α}.
    """
    def g(u):
        return -math.expm1(-scale * u ** alpha) * u ** (-1.0 - beta)

    low, err_low = integrate.quad(g, 0.0, 1.0, limit=200, epsabs=0.0, epsrel=1e-12)
    high, err_high = integrate.quad(g, 1.0, math.inf, limit=200, epsabs=0.0, epsrel=1e-12)
    norm = stable_constant(beta) * sphere_power_moment(dimension, beta)
    return sphere_area(dimension) * (low + high) / norm


def _constant_on_sphere(Lambda, d: int) -> Optional[float]:
    if not callable(Lambda):
        return float(Lambda)
    points, _ = sphere_grid(d, 64)
    values = np.asarray(Lambda(points), dtype=float)
    if np.ptp(values) <= 1e-12 * max(abs(values).max(), 1.0):
        return float(values[0])
    return None


def _limit_grid(exponent_min: float, alpha: float, d: int) -> GridSpec:
    cutoff = (get_settings().CUTOFF_EXPONENT / exponent_min) ** (1.0 / alpha)
    return GridSpec(LIMIT_GRID[d], math.pi / cutoff, d)


def _grid_integral(grid, R_beta: RBeta, beta: float, tail_measure: Optional[LevyMeasureDescriptor]) -> float:
    """(1/2)∫R_β(x/‖x‖)‖x‖^β p(x)dx on a grid ball plus the Lévy-measure tail outside."""
    pts = grid.points()
    norm = np.linalg.norm(pts, axis=-1)
    radius = 0.45 * grid.spec.period
    inside = (norm > 0) & (norm <= radius)
    theta = pts[inside] / norm[inside, None]
    weight = np.asarray(R_beta(theta), dtype=float) if callable(R_beta) else float(R_beta)
    core = 0.5 * float(np.sum(weight * norm[inside] ** beta * grid.values.ravel()[inside])) * grid.cell_volume()
    if tail_measure is None:
        logger.warning("[LIMITS] No tail measure for the limit density; grid truncation uncorrected")
        return core

    def F(y):
        r = np.linalg.norm(y, axis=-1)
        th = y / r[:, None]
        w = np.asarray(R_beta(th), dtype=float) if callable(R_beta) else float(R_beta)
        return 0.5 * w * r ** beta

    return core + tail_measure.integrate(F, radius, math.inf)


def limit_t2(Lambda: Union[float, Callable[[np.ndarray], np.ndarray], ScalingLimit], alpha: float,
             beta: float, R_beta: RBeta, dimension: int = 1,
             levy_measure: Optional[LevyMeasureDescriptor] = None) -> LimitValue:
    """(1/2)∫R_β(x/‖x‖)‖x‖^β p_Λ(x)dx.

    Constant Λ reduces to a sphere average of R_β times E‖X‖^β. Otherwise the
    integral runs over a p_Λ grid, with the part outside the grid ball taken
    from the limit Lévy measure (`levy_measure`, or η of a ScalingLimit).

    Raises:
        HypothesisViolationError: If β ≥ α.
    """
    _gate(alpha, beta)
    if isinstance(Lambda, ScalingLimit):
        levy_measure = levy_measure or Lambda.eta
        Lambda = Lambda.Lambda
        if Lambda is None:
            raise HypothesisViolationError("the limit exponent has no spherical part Λ")
    d = dimension
    const = _constant_on_sphere(Lambda, d)
    if const is not None:
        if const <= 0:
            raise HypothesisViolationError("Λ must be positive")
        value = 0.5 * _sphere_average(R_beta, d) * stable_abs_moment(const, alpha, beta, d)
        return _limit(value)
    if d == 1:
        raise ArgumentError("a symmetric one-dimensional Λ is constant")
    points, _ = sphere_grid(d, 256)
    lam_min = float(np.min(Lambda(points)))
    if lam_min <= 0:
        raise HypothesisViolationError("Λ must be positive on the sphere")
    grid = p_lambda(Lambda, alpha, _limit_grid(lam_min, alpha, d))
    value = _grid_integral(grid, R_beta, beta, levy_measure)
    return LimitValue(value, abs(value) * 1e-3)


def limit_corollary1(dimension: int, alpha: float, beta: float, R_beta: RBeta,
                     Lambda: float = 1.0) -> LimitValue:
    """π^{−d/2}4^{β/2−1}Γ((d+β)/2)Γ(1−β/α)/Γ(1−β/2)·Λ^{β/α}∫_S R_β dσ, isotropic X."""
    _gate(alpha, beta)
    d = dimension
    const = (math.pi ** (-d / 2.0) * 4.0 ** (beta / 2.0 - 1.0) * math.gamma((d + beta) / 2.0)
             * math.gamma(1.0 - beta / alpha) / math.gamma(1.0 - beta / 2.0))
    sphere_integral = _sphere_average(R_beta, d) * sphere_area(d)
    return LimitValue(const * Lambda ** (beta / alpha) * sphere_integral, 0.0)


def _stable_scale(eta: LevyMeasureDescriptor) -> Optional[float]:
    """s with ∫(1 − cos⟨ξ,y⟩)η(dy) = s‖ξ‖^α, when η is rotation invariant."""
    if isinstance(eta, RadialPowerLaw):
        return eta.exponent_scale()
    if isinstance(eta, SphericalDecomposition) and eta.sphere.is_uniform and eta.profile.is_power:
        a = eta.profile.alpha
        return eta.sphere.total_mass() / sphere_area(eta.dimension) * stable_constant(a) * sphere_power_moment(eta.dimension, a)
    return None


def limit_t3(eta: LevyMeasureDescriptor, beta: float, R_beta: RBeta) -> LimitValue:
    """(1/2)∫R_β(x/‖x‖)‖x‖^β p_η(x)dx for an α-stable limit measure η.

    For η carried by one coordinate axis e_k the density lives on that axis and
    the integral is (1/4)(R_β(e_k) + R_β(−e_k))E|Y|^β with Y its one-dimensional law.
    """
    d = eta.dimension
    if isinstance(eta, AxesProduct):
        axes = eta.support_axes()
        alphas = {eta.alphas[i] for i in axes}
        if len(alphas) != 1:
            raise UnsupportedOperationError("η charges axes with different indices; it is not stable")
        alpha = alphas.pop()
        _gate(alpha, beta)
        if len(axes) == 1:
            k = axes[0]
            e = np.zeros((2, d))
            e[0, k], e[1, k] = 1.0, -1.0
            ends = np.asarray(R_beta(e), dtype=float) if callable(R_beta) else np.array([R_beta] * 2)
            scale = 2.0 * eta.constants[k] * stable_constant(alpha)
            value = 0.25 * float(ends.sum()) * stable_abs_moment(scale, alpha, beta, 1)
            return _limit(value)
        exponent_min = min(2.0 * eta.constants[i] * stable_constant(alpha) for i in axes) * d ** (-alpha / 2.0)
        grid = p_eta(eta, _limit_grid(exponent_min, alpha, d))
        value = _grid_integral(grid, R_beta, beta, eta)
        return LimitValue(value, abs(value) * 1e-3)
    scale = _stable_scale(eta)
    if scale is None:
        raise UnsupportedOperationError(f"no limit density for η of kind {type(eta).__name__}")
    alpha = eta.alpha if isinstance(eta, RadialPowerLaw) else eta.profile.alpha
    _gate(alpha, beta)
    return _limit(0.5 * _sphere_average(R_beta, d) * stable_abs_moment(scale, alpha, beta, d))


# -- examples --------------------------------------------------------------

def _directional_mass(nu: LevyMeasureDescriptor, p: float, q: float) -> float:
    """ν([p, q]) on the line, for an interval avoiding 0 (q may be inf, p may be −inf)."""
    if p <= 0.0 <= q:
        raise ArgumentError("interval must not contain the origin")
    sign = 1.0 if p > 0 else -1.0
    lo, hi = (p, q) if sign > 0 else (-q, -p)
    total = 0.0
    for comp in nu.components():
        w = float(comp.weights[comp.directions[:, 0] * sign > 0].sum())
        if w:
            far = comp.profile.tail(hi) if math.isfinite(hi) else 0.0
            total += w * (comp.profile.tail(lo) - far)
    fin = nu.finite_part()
    if fin is not None:
        if fin.has_density:
            overlap = max(0.0, min(q, fin.high) - max(p, fin.low))
            total += fin.mass * overlap / (fin.high - fin.low)
        else:
            atoms, weights = fin.atom_array()
            hit = (atoms[:, 0] >= p) & (atoms[:, 0] <= q)
            total += float(weights[hit].sum())
    return total


def limit_example2(model: LevyModel, omega: Box, omega0: Box, case: int) -> LimitValue:
    """Case 1 (disjoint sets): ∫_Ω ν(y − Ω₀)dy. Case 2 (Ω inside Ω₀): −∫_Ω ν(y − Ω₀^c)dy.

    One-dimensional intervals; the inner ν-masses are exact, the outer integral
    is adaptive quadrature.
    """
    nu = _require_nu(model)
    if model.dimension != 1 or not isinstance(omega, Box) or not isinstance(omega0, Box):
        raise UnsupportedOperationError("this example is evaluated for intervals on the line")
    a0, a1 = omega.interval(0)
    b0, b1 = omega0.interval(0)
    if case == 1:
        if not (a1 < b0 or b1 < a0):
            raise HypothesisViolationError("case 1 needs Ω and Ω₀ at positive distance")

        def inner(y):
            return _directional_mass(nu, y - b1, y - b0)
        sign = 1.0
    elif case == 2:
        if not (b0 < a0 and a1 < b1):
            raise HypothesisViolationError("case 2 needs Ω inside Ω₀ at positive distance from its complement")

        def inner(y):
            return _directional_mass(nu, -math.inf, y - b1) + _directional_mass(nu, y - b0, math.inf)
        sign = -1.0
    else:
        raise ArgumentError(f"unknown case {case}")
    atoms = []
    fin = nu.finite_part()
    if fin is not None and not fin.has_density:
        edges = fin.atom_array()[0][:, 0]
        atoms = sorted({float(x) for e in edges for x in (e + b0, e + b1) if a0 < x < a1})
    value, err = integrate.quad(inner, a0, a1, points=atoms or None, limit=200, epsrel=1e-10)
    return LimitValue(sign * value, err)


def limit_ex5_radial(omega: SetGeometry, rho: float) -> LimitValue:
    """−π⁻²Γ(1 − 1/ρ)·Per(Ω) for a set whose V_θ does not depend on θ (d = 2)."""
    if not isinstance(omega, Ball) or omega.dimension != 2:
        raise UnsupportedOperationError("the radial form is stated for discs")
    if not 1.0 < rho < 2.0:
        raise HypothesisViolationError(f"the radial form needs 1 < ρ < 2, got {rho}")
    per = perimeter(omega).functional
    return _limit(-special.gamma(1.0 - 1.0 / rho) * per / math.pi ** 2)


def limit_ex5_rectangle(omega: Box, rho: float, axis: int = 1) -> LimitValue:
    """−2π⁻¹Γ(1 − 1/ρ)·a, a the side of the rectangle perpendicular to the stable axis."""
    if not isinstance(omega, Box) or omega.dimension != 2:
        raise UnsupportedOperationError("the rectangle form needs a planar box")
    if not 1.0 < rho < 2.0:
        raise HypothesisViolationError(f"the rectangle form needs 1 < ρ < 2, got {rho}")
    a = 2.0 * omega.half_widths[1 - axis]
    return _limit(-2.0 * special.gamma(1.0 - 1.0 / rho) * a / math.pi)


# -- reports ---------------------------------------------------------------

@dataclass(frozen=True, eq=False)
class ConvergenceReport:
    """Per-t errors of a scaled sweep against its limit, with a verdict."""
    theorem: Theorem
    limit: float
    tolerance: float
    table: pd.DataFrame
    slope: float
    converging: bool
    verdict: str
    mode: str

    @property
    def passed(self) -> bool:
        return self.verdict == "PASS"

    def export_table(self) -> pd.DataFrame:
        """Per-t table with the limit and error mode attached."""
        return self.table.assign(limit=self.limit, mode=self.mode)

    def to_csv(self, path: str) -> None:
        self.export_table().to_csv(path, index=False, float_format="%.12g")

    def summary(self) -> str:
        lines = [
            f"theorem: {self.theorem.value}",
            f"limit: {self.limit:.10g}",
            f"error mode: {self.mode}",
            f"tolerance: {self.tolerance:g}",
            f"log-log slope: {self.slope:.4f}",
            f"converging: {'yes' if self.converging else 'no'}",
        ]
        for row in self.table.itertuples(index=False):
            lines.append(f"  t={row.t:.4e} {row.estimator:<11} scaled={row.scaled_value:.8g} error={row.error:.3e}")
        lines.append(f"verdict: {self.verdict}")
        return "\n".join(lines) + "\n"


def convergence_report(table: pd.DataFrame, law: AsymptoticLaw,
                       tolerance: Optional[float] = None) -> ConvergenceReport:
    """Relative (absolute when the limit is 0) error per t and a verdict at the smallest t.

    Monte Carlo rows pass when the error is within the tolerance plus four
    standard errors of the scaled estimate.
    """
    tol = tolerance or law.tolerance or get_settings().PASS_REL_TOL
    limit = law.limit_value
    mode = "relative" if limit != 0.0 else "absolute"
    denom = abs(limit) if limit != 0.0 else 1.0
    out = table[["t", "estimator", "scale", "scaled_value", "stderr"]].copy()
    out["error"] = (out["scaled_value"] - limit).abs() / denom
    out["allowance"] = tol + 4.0 * out["scale"] * out["stderr"] / denom
    verdict = "PASS"
    slopes = []
    converging = True
    for estimator, part in out.groupby("estimator", sort=False):
        last = part.loc[part["t"].idxmin()]
        if not last["error"] <= last["allowance"]:
            verdict = "FAIL"
        positive = part[part["error"] > 0]
        if len(positive) >= 2:
            slope, _ = np.polyfit(np.log(positive["t"]), np.log(positive["error"]), 1)
            slopes.append(float(slope))
        first = part.loc[part["t"].idxmax()]
        if last["error"] > max(first["error"], tol):
            converging = False
    slope = min(slopes) if slopes else float("nan")
    report = ConvergenceReport(law.theorem, limit, tol, out[["t", "estimator", "scale", "scaled_value",
                                                              "stderr", "error"]],
                               slope, converging, verdict, mode)
    level = logging.INFO if verdict == "PASS" else logging.WARNING
    logger.log(level, f"[LIMITS] {law.theorem.value}: limit={limit:.8g} verdict={verdict} slope={slope:.3f}")
    return report
