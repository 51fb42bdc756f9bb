"""Lévy process families and regular-variation utilities.

A Lévy process is described by its triplet (A, γ, ν) with the characteristic
exponent

    ψ(ξ) = ⟨ξ, Aξ⟩ − i⟨ξ, γ⟩ + ∫ (1 − e^{i⟨ξ,y⟩} + i⟨ξ,y⟩·1{‖y‖≤1}) ν(dy),

so that E e^{i⟨ξ, X_t⟩} = e^{−tψ(ξ)}. Every supported Lévy measure is reduced to
a list of polar components (weighted sphere directions times a radial kernel)
plus an optional finite part, and all Lévy-measure integrals run through one
dyadic-shell quadrature.
"""

import json
import logging
import math
from dataclasses import dataclass, field
from enum import Enum
from functools import lru_cache
from typing import Callable, List, Optional, Sequence, Tuple

import numpy as np
from scipy import integrate, optimize, special

from .config import get_settings
from .errors import (
    ArgumentError,
    HypothesisViolationError,
    NumericError,
    RangeError,
    UnsupportedOperationError,
)

# Configure module logging
logger = logging.getLogger(__name__)

MAX_SHELLS = 240


def sphere_area(d: int) -> float:
    """Surface measure |S^{d-1}| (counting measure 2 when d=1)."""
    return 2.0 * math.pi ** (d / 2.0) / math.gamma(d / 2.0)


def unit_ball_volume(d: int) -> float:
    return math.pi ** (d / 2.0) / math.gamma(d / 2.0 + 1.0)


def stable_constant(alpha: float) -> float:
    """K_α = ∫_0^∞ (1 − cos v) v^{−1−α} dv."""
    if abs(alpha - 1.0) < 1e-12:
        return math.pi / 2.0
    return special.gamma(1.0 - alpha) * math.cos(math.pi * alpha / 2.0) / alpha


def sine_constant(alpha: float) -> float:
    """S_α with ∫_0^∞ sin(v) v^{−1−α} dv = S_α for α < 1 (analytic continuation above 1)."""
    return special.gamma(1.0 - alpha) * math.sin(math.pi * alpha / 2.0) / alpha


def sphere_power_moment(d: int, alpha: float) -> float:
    """J_{d,α} = ∫_{S^{d-1}} |θ_1|^α σ(dθ)."""
    return (
        2.0 * math.pi ** ((d - 1) / 2.0) * math.gamma((alpha + 1.0) / 2.0)
        / math.gamma((d + alpha) / 2.0)
    )


def sphere_grid(d: int, n: int) -> Tuple[np.ndarray, np.ndarray]:
    """Quadrature nodes on S^{d-1} with weights summing to |S^{d-1}|.

    Args:
        d: Dimension (1, 2 or 3).
        n: Resolution parameter (number of angles in d=2, latitude nodes in d=3).

    Returns:
        Tuple of (points of shape (k, d), weights of shape (k,)).
    """
    if d == 1:
        return np.array([[1.0], [-1.0]]), np.array([1.0, 1.0])
    if d == 2:
        phi = 2.0 * np.pi * (np.arange(n) + 0.5) / n
        points = np.column_stack([np.cos(phi), np.sin(phi)])
        return points, np.full(n, 2.0 * np.pi / n)
    if d == 3:
        z, wz = np.polynomial.legendre.leggauss(n)
        m = 2 * n
        phi = 2.0 * np.pi * (np.arange(m) + 0.5) / m
        zz, pp = np.meshgrid(z, phi, indexing="ij")
        s = np.sqrt(1.0 - zz ** 2)
        points = np.column_stack([(s * np.cos(pp)).ravel(), (s * np.sin(pp)).ravel(), zz.ravel()])
        weights = (wz[:, None] * np.full(m, 2.0 * np.pi / m)[None, :]).ravel()
        return points, weights
    raise ArgumentError(f"sphere quadrature supports d <= 3, got d={d}")


def _quad(func: Callable[[float], float], a: float, b: float, points: Sequence[float] = (),
          rel_tol: float = 1e-11) -> float:
    """scipy quad wrapper turning poor convergence into NumericError."""
    inner = sorted(p for p in points if a < p < b)
    result = integrate.quad(
        func, a, b, epsabs=0.0, epsrel=rel_tol, limit=400,
        points=inner or None, full_output=1,
    )
    value, abserr = result[0], result[1]
    if len(result) > 3 and abserr > 1e-6 * abs(value) + 1e-13:
        raise NumericError(
            "Lévy quadrature did not converge",
            {"a": a, "b": b, "value": value, "abserr": abserr, "message": result[3]},
        )
    return value


def _geometric_shells(shell: Callable[[int], float], rel_tol: float) -> float:
    """Sum shell(k), k = 0, 1, ... until the remaining contribution is negligible.

    When successive shell ratios settle, the remaining geometric tail is added in
    closed form; this is exact for power-law kernels against power-like integrands.
    """
    total = 0.0
    prev = None
    last_q = None
    small_run = 0
    for k in range(MAX_SHELLS):
        c = shell(k)
        total += c
        if prev is not None and prev != 0.0 and c != 0.0:
            q = c / prev
            if 0.0 < q < 1.0 and last_q is not None and abs(q - last_q) <= 1e-7 * q:
                return total + c * q / (1.0 - q)
            last_q = q
        if abs(c) <= rel_tol * abs(total):
            small_run += 1
            if small_run >= 3:
                return total
        else:
            small_run = 0
        prev = c
    raise NumericError(
        "dyadic shell sum did not settle",
        {"shells": MAX_SHELLS, "total": total, "last": prev},
    )


def radial_integral(g: Callable[[float], float], lo: float, hi: float,
                    points: Sequence[float] = (), rel_tol: Optional[float] = None) -> float:
    """∫_lo^hi g(ρ) dρ split on dyadic shells; lo may be 0 and hi may be inf.

    The finite stretch between max(lo, ·) and hi is covered completely; the
    shells toward 0 and toward infinity stop once their contributions vanish.
    """
    if rel_tol is None:
        rel_tol = get_settings().SHELL_REL_TOL
    if hi <= lo:
        return 0.0
    total = 0.0
    start = lo
    if lo == 0.0:
        top = min(hi, 1.0) if math.isfinite(hi) else 1.0
        inner_pts = [p for p in points if 0.0 < p < top]
        if inner_pts:
            top = min(inner_pts)
        total += _geometric_shells(
            lambda k: _quad(g, top * 2.0 ** (-k - 1), top * 2.0 ** (-k), points), rel_tol
        )
        start = top
    if math.isfinite(hi):
        edges = [start]
        while edges[-1] * 2.0 < hi:
            edges.append(edges[-1] * 2.0)
        edges.append(hi)
        for a, b in zip(edges[:-1], edges[1:]):
            total += _quad(g, a, b, points)
        return total
    base = max(start, max((p for p in points), default=start), 1.0)
    if base > start:
        total += radial_integral(g, start, base, points, rel_tol)
    total += _geometric_shells(
        lambda k: _quad(g, base * 2.0 ** k, base * 2.0 ** (k + 1), points), rel_tol
    )
    return total


@dataclass(frozen=True)
class RadialProfile:
    """Radial kernel k(ρ) = f(1/ρ)/ρ with f(s) = s^α·log(e + s)^κ.

    κ = 0 is the pure power law ρ^{−1−α}; every moment is then closed form.
    """
    alpha: float
    kappa: float = 0.0

    def __post_init__(self):
        if not 0.0 < self.alpha < 2.0:
            raise ArgumentError(f"radial profile index must lie in (0, 2), got {self.alpha}")

    @property
    def is_power(self) -> bool:
        return self.kappa == 0.0

    def density(self, rho):
        rho = np.asarray(rho, dtype=float)
        k = rho ** (-1.0 - self.alpha)
        if not self.is_power:
            k = k * np.log(np.e + 1.0 / rho) ** self.kappa
        return k

    def moment(self, p: float, a: float, b: float) -> float:
        """∫_a^b ρ^p k(ρ) dρ (a may be 0, b may be inf when convergent)."""
        if b <= a:
            return 0.0
        e = p - self.alpha
        if (a == 0.0 and e <= 0.0) or (math.isinf(b) and e >= 0.0):
            return math.inf
        if self.is_power:
            if e == 0.0:
                return math.log(b / a)
            upper = 0.0 if math.isinf(b) else b ** e
            lower = 0.0 if a == 0.0 else a ** e
            return (upper - lower) / e
        # substitute ρ = e^u so both ends decay exponentially
        lo = -math.inf if a == 0.0 else math.log(a)
        hi = math.inf if math.isinf(b) else math.log(b)
        value, _ = integrate.quad(
            lambda u: math.exp(e * u) * math.log(math.e + math.exp(-u)) ** self.kappa,
            lo, hi, epsabs=0.0, epsrel=1e-11, limit=400,
        )
        return value

    def tail(self, radius: float) -> float:
        return self.moment(0.0, radius, math.inf)

    def cosine_transform(self, v):
        """g(v) = ∫_0^∞ (1 − cos ρv) k(ρ) dρ, vectorized over v ≥ 0."""
        v = np.abs(np.asarray(v, dtype=float))
        if self.is_power:
            return stable_constant(self.alpha) * v ** self.alpha
        return _log_profile_table(self.alpha, self.kappa)(v)

    def sine_transform(self, u):
        """I(u) = ∫_0^∞ (ρu·1{ρ≤1} − sin ρu) k(ρ) dρ, closed form for power kernels."""
        if not self.is_power:
            raise UnsupportedOperationError("asymmetric log-corrected kernels have no sine transform")
        u = np.asarray(u, dtype=float)
        a = self.alpha
        if abs(a - 1.0) < 1e-12:
            with np.errstate(divide="ignore", invalid="ignore"):
                out = np.where(u == 0.0, 0.0, u * np.log(np.abs(u)) - (1.0 - np.euler_gamma) * u)
            return out
        return u / (1.0 - a) - np.sign(u) * np.abs(u) ** a * sine_constant(a)


_LOG_TABLES = {}


def _log_profile_table(alpha: float, kappa: float) -> Callable[[np.ndarray], np.ndarray]:
    """Interpolant of the cosine transform of a log-corrected kernel on a log grid."""
    key = (alpha, kappa)
    if key in _LOG_TABLES:
        return _LOG_TABLES[key]
    profile = RadialProfile(alpha, kappa)
    grid = np.logspace(-6, 8, 281)
    values = np.empty_like(grid)
    for i, v in enumerate(grid):
        # split at one wavelength: smooth part by quad, oscillatory tail by QAWF
        edge = 2.0 * math.pi / v
        near, _ = integrate.quad(
            lambda rho: (1.0 - math.cos(rho * v)) * float(profile.density(rho)),
            0.0, edge, epsabs=0.0, epsrel=1e-10, limit=400,
        )
        osc, _ = integrate.quad(
            lambda rho: float(profile.density(rho)), edge, math.inf,
            weight="cos", wvar=v, limlst=200,
        )
        values[i] = near + profile.tail(edge) - osc
    log_grid = np.log(grid)
    log_values = np.log(values)

    def table(v: np.ndarray) -> np.ndarray:
        v = np.asarray(v, dtype=float)
        out = np.zeros_like(v)
        pos = v > 0
        out[pos] = np.exp(np.interp(np.log(v[pos]), log_grid, log_values))
        return out

    logger.debug(f"[MODELS] Tabulated cosine transform for alpha={alpha}, kappa={kappa}")
    _LOG_TABLES[key] = table
    return table


@dataclass(frozen=True)
class SphereMeasure:
    """Finite measure m on S^{d-1}: uniform with a total mass, or weighted atoms."""
    dimension: int
    mass: Optional[float] = None
    directions: Tuple[Tuple[float, ...], ...] = ()
    weights: Tuple[float, ...] = ()

    def __post_init__(self):
        if self.mass is None:
            if not self.directions or len(self.directions) != len(self.weights):
                raise ArgumentError("sphere atoms need matching directions and weights")
            for theta in self.directions:
                if len(theta) != self.dimension:
                    raise ArgumentError("sphere atom has wrong dimension")
                if abs(np.linalg.norm(theta) - 1.0) > 1e-9:
                    raise ArgumentError(f"sphere atom {theta} is not a unit vector")
            if min(self.weights) < 0 or sum(self.weights) <= 0:
                raise ArgumentError("sphere atom weights must be non-negative with positive total")
        elif self.mass <= 0:
            raise ArgumentError("sphere measure mass must be positive")

    @classmethod
    def uniform(cls, dimension: int, mass: float) -> "SphereMeasure":
        return cls(dimension=dimension, mass=float(mass))

    @classmethod
    def atoms(cls, directions: Sequence[Sequence[float]], weights: Sequence[float]) -> "SphereMeasure":
        dirs = tuple(tuple(float(c) for c in theta) for theta in directions)
        return cls(dimension=len(dirs[0]), directions=dirs, weights=tuple(float(w) for w in weights))

    @property
    def is_uniform(self) -> bool:
        return self.mass is not None

    def total_mass(self) -> float:
        return self.mass if self.is_uniform else float(sum(self.weights))

    def nodes(self, resolution: int = 64) -> Tuple[np.ndarray, np.ndarray]:
        """Directions and weights; uniform measures use the sphere quadrature."""
        if self.is_uniform:
            points, weights = sphere_grid(self.dimension, resolution)
            return points, weights * (self.mass / sphere_area(self.dimension))
        return np.array(self.directions, dtype=float), np.array(self.weights, dtype=float)

    def is_symmetric(self) -> bool:
        if self.is_uniform:
            return True
        dirs = np.array(self.directions)
        w = np.array(self.weights)
        for theta, wt in zip(dirs, w):
            match = np.all(np.abs(dirs + theta) < 1e-12, axis=1)
            if abs(w[match].sum() - wt) > 1e-12 * max(1.0, wt):
                return False
        return True

    def first_moment(self) -> np.ndarray:
        """∫ θ m(dθ)."""
        if self.is_uniform:
            return np.zeros(self.dimension)
        return np.array(self.weights) @ np.array(self.directions)


@dataclass(frozen=True)
class PolarComponent:
    """ν restricted to directions θ_j with weights w_j and radial kernel k."""
    directions: np.ndarray
    weights: np.ndarray
    profile: RadialProfile


class LevyMeasureDescriptor:
    """Common interface of the supported Lévy measure kinds."""

    dimension: int

    def components(self) -> List[PolarComponent]:
        return []

    def finite_part(self) -> Optional["FiniteMeasure"]:
        return None

    def is_symmetric(self) -> bool:
        raise NotImplementedError

    def exponent(self, xi: np.ndarray) -> np.ndarray:
        """∫ (1 − e^{i⟨ξ,y⟩} + i⟨ξ,y⟩1{‖y‖≤1}) ν(dy) for ξ of shape (..., d)."""
        raise NotImplementedError

    def integrability_exponent(self) -> float:
        """inf{β : ∫_{‖y‖<1} ‖y‖^β ν(dy) < ∞} (the infimum itself is excluded when positive)."""
        exps = [c.profile.alpha for c in self.components()]
        return max(exps) if exps else 0.0

    def admits_beta(self, beta: float) -> bool:
        floor = self.integrability_exponent()
        return beta >= 0.0 and (beta > floor if floor > 0 else True)

    def total_mass(self) -> float:
        return math.inf if self.components() else self.finite_part().total_mass()

    def tail_mass(self, radius: float) -> float:
        """ν({‖y‖ ≥ radius})."""
        total = sum(float(c.weights.sum()) * c.profile.tail(radius) for c in self.components())
        fin = self.finite_part()
        if fin is not None:
            total += fin.mass_between(radius, math.inf)
        return total

    def second_moment(self, radius: float) -> float:
        """∫_{‖y‖<radius} ‖y‖² ν(dy)."""
        total = sum(float(c.weights.sum()) * c.profile.moment(2.0, 0.0, radius)
                    for c in self.components())
        fin = self.finite_part()
        if fin is not None:
            total += fin.moment_between(2, 0.0, radius)
        return total

    def first_moment(self, a: float, b: float) -> np.ndarray:
        """∫_{a≤‖y‖<b} y ν(dy)."""
        total = np.zeros(self.dimension)
        for c in self.components():
            direction = c.weights @ c.directions
            if np.any(direction != 0.0):
                total += direction * c.profile.moment(1.0, a, b)
        fin = self.finite_part()
        if fin is not None:
            total += fin.vector_moment_between(a, b)
        return total

    def density(self, y: np.ndarray) -> Optional[np.ndarray]:
        """Lebesgue density of ν at the rows of y, or None when ν is singular.

        On the line every polar component has a density; in higher dimensions
        only the kinds that override this method do.
        """
        if self.dimension != 1 or self.finite_part() is not None:
            return None
        y = np.asarray(y, dtype=float)[:, 0]
        rho = np.abs(y)
        out = np.zeros_like(rho)
        nonzero = rho > 0
        for c in self.components():
            for direction, w in zip(c.directions[:, 0], c.weights):
                side = nonzero & (np.sign(y) == np.sign(direction))
                out[side] += w * c.profile.density(rho[side])
        return out

    def integrate(self, func: Callable[[np.ndarray], np.ndarray], inner: float = 0.0,
                  outer: float = math.inf, points: Sequence[float] = ()) -> float:
        """∫_{inner≤‖y‖<outer} F(y) ν(dy) with F vectorized over rows of an (n, d) array."""
        total = 0.0
        for c in self.components():
            dirs, w, prof = c.directions, c.weights, c.profile

            def g(rho, dirs=dirs, w=w, prof=prof):
                return float(w @ func(rho * dirs)) * float(prof.density(rho))

            total += radial_integral(g, inner, outer, points)
        fin = self.finite_part()
        if fin is not None:
            total += fin.integrate(func, inner, outer)
        return total


@dataclass(frozen=True)
class RadialPowerLaw(LevyMeasureDescriptor):
    """ν(dy) = c‖y‖^{−d−α} dy."""
    dimension: int
    alpha: float
    constant: float

    def __post_init__(self):
        if not 0.0 < self.alpha < 2.0:
            raise ArgumentError(f"power-law Lévy measure needs 0 < α < 2, got {self.alpha}")
        if self.constant <= 0:
            raise ArgumentError("power-law constant must be positive")

    def components(self) -> List[PolarComponent]:
        points, weights = sphere_grid(self.dimension, 64)
        return [PolarComponent(points, weights * self.constant, RadialProfile(self.alpha))]

    def tail_mass(self, radius: float) -> float:
        return self.constant * sphere_area(self.dimension) * radius ** (-self.alpha) / self.alpha

    def second_moment(self, radius: float) -> float:
        return self.constant * sphere_area(self.dimension) * radius ** (2.0 - self.alpha) / (2.0 - self.alpha)

    def first_moment(self, a: float, b: float) -> np.ndarray:
        return np.zeros(self.dimension)

    def density(self, y: np.ndarray) -> Optional[np.ndarray]:
        rho = np.linalg.norm(np.asarray(y, dtype=float), axis=-1)
        out = np.zeros_like(rho)
        nonzero = rho > 0
        out[nonzero] = self.constant * rho[nonzero] ** (-self.dimension - self.alpha)
        return out

    def is_symmetric(self) -> bool:
        return True

    def exponent_scale(self) -> float:
        """s with ∫(1 − cos⟨ξ,y⟩)ν(dy) = s‖ξ‖^α."""
        return self.constant * stable_constant(self.alpha) * sphere_power_moment(self.dimension, self.alpha)

    def exponent(self, xi: np.ndarray) -> np.ndarray:
        return self.exponent_scale() * np.linalg.norm(xi, axis=-1) ** self.alpha + 0j


@dataclass(frozen=True)
class SphericalDecomposition(LevyMeasureDescriptor):
    """ν(dy) = ∫_S m(dθ) ∫_0^∞ 1{ρθ ∈ dy} f(1/ρ)/ρ dρ."""
    sphere: SphereMeasure
    profile: RadialProfile

    @property
    def dimension(self) -> int:
        return self.sphere.dimension

    def components(self) -> List[PolarComponent]:
        points, weights = self.sphere.nodes()
        return [PolarComponent(points, weights, self.profile)]

    def is_symmetric(self) -> bool:
        return self.sphere.is_symmetric()

    def density(self, y: np.ndarray) -> Optional[np.ndarray]:
        d = self.dimension
        if d == 1:
            return super().density(y)
        if not self.sphere.is_uniform:
            return None
        rho = np.linalg.norm(np.asarray(y, dtype=float), axis=-1)
        out = np.zeros_like(rho)
        nonzero = rho > 0
        out[nonzero] = (self.sphere.mass / sphere_area(d) * self.profile.density(rho[nonzero])
                        * rho[nonzero] ** (1.0 - d))
        return out

    def exponent(self, xi: np.ndarray) -> np.ndarray:
        xi = np.asarray(xi, dtype=float)
        d = self.dimension
        if self.sphere.is_uniform:
            norm = np.linalg.norm(xi, axis=-1)
            density = self.sphere.mass / sphere_area(d)
            if self.profile.is_power:
                return density * stable_constant(self.profile.alpha) * sphere_power_moment(d, self.profile.alpha) * norm ** self.profile.alpha + 0j
            points, weights = sphere_grid(d, 64)
            # radial: average g(‖ξ‖|θ_1|) over the sphere
            g = self.profile.cosine_transform(norm[..., None] * np.abs(points[:, 0]))
            return density * (g @ weights) + 0j
        dirs = np.array(self.sphere.directions)
        w = np.array(self.sphere.weights)
        u = xi @ dirs.T
        real = self.profile.cosine_transform(u) @ w
        if self.is_symmetric():
            return real + 0j
        return real + 1j * (self.profile.sine_transform(u) @ w)


@dataclass(frozen=True)
class AxesProduct(LevyMeasureDescriptor):
    """Independent 1d symmetric stable jumps along each coordinate axis.

    Axis i carries c_i|y|^{−1−α_i} dy on the line ℝe_i.
    """
    alphas: Tuple[float, ...]
    constants: Tuple[float, ...]

    def __post_init__(self):
        if len(self.alphas) != len(self.constants):
            raise ArgumentError("axes product needs one constant per index")
        for a in self.alphas:
            if not 0.0 < a < 2.0:
                raise ArgumentError(f"axis index must lie in (0, 2), got {a}")
        if min(self.constants) < 0 or max(self.constants) <= 0:
            raise ArgumentError("axis constants must be non-negative and not all zero")

    @property
    def dimension(self) -> int:
        return len(self.alphas)

    def components(self) -> List[PolarComponent]:
        d = self.dimension
        out = []
        for i, (a, c) in enumerate(zip(self.alphas, self.constants)):
            if c == 0.0:
                continue
            e = np.zeros((2, d))
            e[0, i], e[1, i] = 1.0, -1.0
            out.append(PolarComponent(e, np.array([c, c]), RadialProfile(a)))
        return out

    def is_symmetric(self) -> bool:
        return True

    def support_axes(self) -> List[int]:
        return [i for i, c in enumerate(self.constants) if c > 0.0]

    def tail_mass(self, radius: float) -> float:
        return sum(2.0 * c * radius ** (-a) / a for a, c in zip(self.alphas, self.constants))

    def exponent(self, xi: np.ndarray) -> np.ndarray:
        xi = np.asarray(xi, dtype=float)
        total = np.zeros(xi.shape[:-1])
        for i, (a, c) in enumerate(zip(self.alphas, self.constants)):
            total = total + 2.0 * c * stable_constant(a) * np.abs(xi[..., i]) ** a
        return total + 0j


def _abs_power_integral(lo: float, hi: float, p: float) -> float:
    """∫_lo^hi |y|^p dy."""
    def prim(y):
        return math.copysign(abs(y) ** (p + 1.0) / (p + 1.0), y)
    return prim(hi) - prim(lo) if hi > lo else 0.0


@dataclass(frozen=True)
class FiniteMeasure(LevyMeasureDescriptor):
    """Finite jump measure: weighted atoms, or (d=1) a uniform density on [low, high]."""
    dimension: int
    atoms: Tuple[Tuple[float, ...], ...] = ()
    weights: Tuple[float, ...] = ()
    low: Optional[float] = None
    high: Optional[float] = None
    mass: Optional[float] = None

    def __post_init__(self):
        if self.has_density:
            if self.dimension != 1:
                raise ArgumentError("uniform jump densities are one-dimensional")
            if self.atoms:
                raise ArgumentError("a finite measure carries either atoms or a density, not both")
            if not self.high > self.low or self.mass is None or self.mass <= 0:
                raise ArgumentError("uniform jump density needs low < high and positive mass")
            return
        if not self.atoms or len(self.atoms) != len(self.weights):
            raise ArgumentError("finite measure needs matching atoms and weights")
        for a in self.atoms:
            if len(a) != self.dimension:
                raise ArgumentError(f"atom {a} does not have dimension {self.dimension}")
            if np.linalg.norm(a) == 0.0:
                raise ArgumentError("a Lévy measure cannot charge the origin")
        if min(self.weights) <= 0:
            raise ArgumentError("atom weights must be positive")

    @classmethod
    def from_atoms(cls, atoms: Sequence[Sequence[float]], weights: Sequence[float]) -> "FiniteMeasure":
        pts = tuple(tuple(float(c) for c in a) for a in atoms)
        return cls(dimension=len(pts[0]), atoms=pts, weights=tuple(float(w) for w in weights))

    @classmethod
    def uniform_interval(cls, low: float, high: float, mass: float) -> "FiniteMeasure":
        return cls(dimension=1, low=float(low), high=float(high), mass=float(mass))

    @property
    def has_density(self) -> bool:
        return self.low is not None or self.high is not None

    def finite_part(self) -> "FiniteMeasure":
        return self

    def integrability_exponent(self) -> float:
        return 0.0

    def total_mass(self) -> float:
        return self.mass if self.has_density else float(sum(self.weights))

    def atom_array(self) -> Tuple[np.ndarray, np.ndarray]:
        return np.array(self.atoms, dtype=float), np.array(self.weights, dtype=float)

    def _pieces(self, a: float, b: float) -> List[Tuple[float, float]]:
        """Sub-intervals of [low, high] with a ≤ |y| < b."""
        out = []
        for lo, hi in ((a, b), (-b, -a)):
            x, y = max(lo, self.low), min(hi, self.high)
            if y > x:
                out.append((x, y))
        return out

    def mass_between(self, a: float, b: float) -> float:
        if self.has_density:
            dens = self.mass / (self.high - self.low)
            return dens * sum(y - x for x, y in self._pieces(a, b))
        pts, w = self.atom_array()
        norms = np.linalg.norm(pts, axis=1)
        return float(w[(norms >= a) & (norms < b)].sum())

    def moment_between(self, p: float, a: float, b: float) -> float:
        if self.has_density:
            dens = self.mass / (self.high - self.low)
            return dens * sum(abs(_abs_power_integral(x, y, p)) for x, y in self._pieces(a, b))
        pts, w = self.atom_array()
        norms = np.linalg.norm(pts, axis=1)
        sel = (norms >= a) & (norms < b)
        return float((w[sel] * norms[sel] ** p).sum())

    def vector_moment_between(self, a: float, b: float) -> np.ndarray:
        if self.has_density:
            dens = self.mass / (self.high - self.low)
            return np.array([dens * sum((y * y - x * x) / 2.0 for x, y in self._pieces(a, b))])
        pts, w = self.atom_array()
        norms = np.linalg.norm(pts, axis=1)
        sel = (norms >= a) & (norms < b)
        return w[sel] @ pts[sel] if sel.any() else np.zeros(self.dimension)

    def tail_mass(self, radius: float) -> float:
        return self.mass_between(radius, math.inf)

    def second_moment(self, radius: float) -> float:
        return self.moment_between(2.0, 0.0, radius)

    def first_moment(self, a: float, b: float) -> np.ndarray:
        return self.vector_moment_between(a, b)

    def integrate(self, func, inner: float = 0.0, outer: float = math.inf, points=()) -> float:
        if self.has_density:
            dens = self.mass / (self.high - self.low)
            total = 0.0
            for x, y in self._pieces(inner, outer):
                total += _quad(lambda s: float(func(np.array([[s]]))[0]), x, y, points)
            return dens * total
        pts, w = self.atom_array()
        norms = np.linalg.norm(pts, axis=1)
        sel = (norms >= inner) & (norms < outer)
        if not sel.any():
            return 0.0
        return float(w[sel] @ func(pts[sel]))

    def is_symmetric(self) -> bool:
        if self.has_density:
            return self.low == -self.high
        pts, w = self.atom_array()
        for a, wt in zip(pts, w):
            match = np.all(np.abs(pts + a) < 1e-12, axis=1)
            if abs(w[match].sum() - wt) > 1e-12 * wt:
                return False
        return True

    def jump_transform(self, xi: np.ndarray) -> np.ndarray:
        """∫ e^{i⟨ξ,y⟩} ν(dy) / ν(ℝ^d), the characteristic function of one jump."""
        xi = np.asarray(xi, dtype=float)
        if self.has_density:
            x = xi[..., 0]
            width = self.high - self.low
            with np.errstate(divide="ignore", invalid="ignore"):
                re = (np.sin(x * self.high) - np.sin(x * self.low)) / (x * width)
                im = (np.cos(x * self.low) - np.cos(x * self.high)) / (x * width)
            re = np.where(x == 0.0, 1.0, re)
            im = np.where(x == 0.0, 0.0, im)
            return re + 1j * im
        pts, w = self.atom_array()
        phase = xi @ pts.T
        return (np.exp(1j * phase) @ w) / w.sum()

    def exponent(self, xi: np.ndarray) -> np.ndarray:
        xi = np.asarray(xi, dtype=float)
        total = self.total_mass()
        out = total * (1.0 - self.jump_transform(xi))
        comp = self.vector_moment_between(0.0, np.nextafter(1.0, 2.0))
        if self.is_symmetric():
            return np.real(out) + 0j
        return out + 1j * (xi @ comp)

    def sample(self, rng: np.random.Generator, count: int) -> np.ndarray:
        """Draw `count` jumps from the normalized measure."""
        if self.has_density:
            return rng.uniform(self.low, self.high, size=(count, 1))
        pts, w = self.atom_array()
        idx = rng.choice(len(w), size=count, p=w / w.sum())
        return pts[idx]


@dataclass(frozen=True)
class CombinedMeasure(LevyMeasureDescriptor):
    """Sum of an infinite-activity descriptor and a finite jump measure."""
    base: LevyMeasureDescriptor
    jumps: FiniteMeasure

    def __post_init__(self):
        if self.base.dimension != self.jumps.dimension:
            raise ArgumentError("jump perturbation dimension does not match the process")

    @property
    def dimension(self) -> int:
        return self.base.dimension

    def components(self) -> List[PolarComponent]:
        return self.base.components()

    def finite_part(self) -> FiniteMeasure:
        return self.jumps

    def integrability_exponent(self) -> float:
        return self.base.integrability_exponent()

    def tail_mass(self, radius: float) -> float:
        return self.base.tail_mass(radius) + self.jumps.tail_mass(radius)

    def second_moment(self, radius: float) -> float:
        return self.base.second_moment(radius) + self.jumps.second_moment(radius)

    def first_moment(self, a: float, b: float) -> np.ndarray:
        return self.base.first_moment(a, b) + self.jumps.first_moment(a, b)

    def integrate(self, func, inner: float = 0.0, outer: float = math.inf, points=()) -> float:
        return (self.base.integrate(func, inner, outer, points)
                + self.jumps.integrate(func, inner, outer, points))

    def is_symmetric(self) -> bool:
        return self.base.is_symmetric() and self.jumps.is_symmetric()

    def exponent(self, xi: np.ndarray) -> np.ndarray:
        return self.base.exponent(xi) + self.jumps.exponent(xi)


class Family(str, Enum):
    ISOTROPIC_STABLE = "isotropic_stable"
    BROWNIAN = "brownian"
    SPHERICAL_STABLE_LIKE = "spherical_stable_like"
    PRODUCT_OF_STABLES = "product_of_stables"
    COMPOUND_POISSON = "compound_poisson"
    FINITE_VARIATION = "finite_variation"


@dataclass(frozen=True, eq=False)
class LevyModel:
    """Lévy process given by its triplet (A = gaussian·I, γ, ν).

    Build instances through the family classmethods; they validate parameters
    and fill `params` with the family description used for fingerprints.
    """
    family: Family
    dimension: int
    gaussian: float = 0.0
    gamma: Tuple[float, ...] = ()
    measure: Optional[LevyMeasureDescriptor] = None
    params: Tuple[Tuple[str, object], ...] = field(default=())

    def __post_init__(self):
        if self.dimension < 1:
            raise ArgumentError("dimension must be a positive integer")
        if self.gaussian < 0:
            raise ArgumentError("Gaussian coefficient must be non-negative")
        if len(self.gamma) != self.dimension:
            raise ArgumentError(f"drift has length {len(self.gamma)}, expected {self.dimension}")
        if self.measure is not None and self.measure.dimension != self.dimension:
            raise ArgumentError("Lévy measure dimension does not match the process")

    # -- factories -----------------------------------------------------

    @classmethod
    def isotropic_stable(cls, dimension: int, alpha: float, scale: float = 1.0,
                         jumps: Optional[FiniteMeasure] = None) -> "LevyModel":
        """ψ(ξ) = scale·‖ξ‖^α (α = 2 is Brownian motion with λ = scale)."""
        if not 0.0 < alpha <= 2.0:
            raise ArgumentError(f"stable index must lie in (0, 2], got {alpha}")
        if scale <= 0:
            raise ArgumentError("stable scale must be positive")
        params = (("alpha", alpha), ("scale", scale))
        if alpha == 2.0:
            return cls._with_jumps(Family.ISOTROPIC_STABLE, dimension, scale, None, jumps, params)
        c = scale / (stable_constant(alpha) * sphere_power_moment(dimension, alpha))
        return cls._with_jumps(Family.ISOTROPIC_STABLE, dimension, 0.0,
                               RadialPowerLaw(dimension, alpha, c), jumps, params)

    @classmethod
    def brownian(cls, dimension: int, lam: float, jumps: Optional[FiniteMeasure] = None) -> "LevyModel":
        """ψ(ξ) = λ‖ξ‖², generator λΔ."""
        if lam <= 0:
            raise ArgumentError("Brownian coefficient must be positive")
        return cls._with_jumps(Family.BROWNIAN, dimension, lam, None, jumps, (("lam", lam),))

    @classmethod
    def spherical_stable_like(cls, sphere: SphereMeasure, alpha: float, log_exponent: float = 0.0,
                              jumps: Optional[FiniteMeasure] = None) -> "LevyModel":
        """Radial kernel f(1/ρ)/ρ with f(s) = s^α·log(e+s)^κ over the sphere measure m."""
        profile = RadialProfile(alpha, log_exponent)
        measure = SphericalDecomposition(sphere, profile)
        if not measure.is_symmetric():
            raise ArgumentError("spherical stable-like processes need a symmetric sphere measure")
        params = (("alpha", alpha), ("log_exponent", log_exponent), ("sphere", repr(sphere)))
        return cls._with_jumps(Family.SPHERICAL_STABLE_LIKE, sphere.dimension, 0.0,
                               measure, jumps, params)

    @classmethod
    def product_of_stables(cls, alphas: Sequence[float], scales: Optional[Sequence[float]] = None,
                           jumps: Optional[FiniteMeasure] = None) -> "LevyModel":
        """ψ(ξ) = Σ scale_i·|ξ_i|^{α_i}, independent coordinates."""
        alphas = tuple(float(a) for a in alphas)
        scales = tuple(float(s) for s in (scales if scales is not None else [1.0] * len(alphas)))
        if len(scales) != len(alphas):
            raise ArgumentError("product of stables needs one scale per index")
        if any(s <= 0 for s in scales):
            raise ArgumentError("stable scales must be positive")
        if any(not 0.0 < a < 2.0 for a in alphas):
            raise ArgumentError("product indices must lie in (0, 2)")
        constants = tuple(s / (2.0 * stable_constant(a)) for a, s in zip(alphas, scales))
        return cls._with_jumps(Family.PRODUCT_OF_STABLES, len(alphas), 0.0,
                               AxesProduct(alphas, constants), jumps,
                               (("alphas", alphas), ("scales", scales)))

    @classmethod
    def compound_poisson(cls, jumps: FiniteMeasure, gamma: Optional[Sequence[float]] = None) -> "LevyModel":
        """Finite jump measure with triplet drift γ."""
        d = jumps.dimension
        gamma = tuple(float(g) for g in (gamma if gamma is not None else [0.0] * d))
        return cls(Family.COMPOUND_POISSON, d, 0.0, gamma, jumps, (("jumps", repr(jumps)),))

    @classmethod
    def finite_variation(cls, measure: LevyMeasureDescriptor, gamma: Sequence[float],
                         jumps: Optional[FiniteMeasure] = None) -> "LevyModel":
        """Pure-jump process with ∫_{‖y‖≤1}‖y‖ν(dy) < ∞ and drift γ."""
        if not measure.admits_beta(1.0):
            raise ArgumentError("finite variation needs ∫_{‖y‖≤1}‖y‖ν(dy) < ∞")
        nu = measure if jumps is None else CombinedMeasure(measure, jumps)
        gamma = tuple(float(g) for g in gamma)
        return cls(Family.FINITE_VARIATION, measure.dimension, 0.0, gamma, nu,
                   (("measure", repr(measure)), ("jumps", repr(jumps))))

    @classmethod
    def _with_jumps(cls, family, dimension, gaussian, measure, jumps, params) -> "LevyModel":
        if jumps is not None:
            measure = jumps if measure is None else CombinedMeasure(measure, jumps)
            params = params + (("jumps", repr(jumps)),)
        return cls(family, dimension, float(gaussian), (0.0,) * dimension, measure, params)

    # -- properties ----------------------------------------------------

    @property
    def nu(self) -> Optional[LevyMeasureDescriptor]:
        return self.measure

    def param(self, name: str, default=None):
        return dict(self.params).get(name, default)

    def jump_part(self) -> Optional[FiniteMeasure]:
        return None if self.measure is None else self.measure.finite_part()

    def is_symmetric(self) -> bool:
        return (not any(self.gamma)) and (self.measure is None or self.measure.is_symmetric())

    def has_finite_variation(self) -> bool:
        return self.gaussian == 0.0 and (self.measure is None or self.measure.admits_beta(1.0))

    def admits_beta(self, beta: float) -> bool:
        return self.measure is None or self.measure.admits_beta(beta)

    def is_radial(self) -> bool:
        """ψ depends on ‖ξ‖ only and is non-decreasing in it."""
        if self.jump_part() is not None:
            return False
        if self.measure is None or isinstance(self.measure, RadialPowerLaw):
            return True
        return isinstance(self.measure, SphericalDecomposition) and self.measure.sphere.is_uniform

    def fingerprint(self) -> str:
        """Canonical JSON description, stable across runs."""
        return json.dumps(
            {"family": self.family.value, "d": self.dimension, "A": self.gaussian,
             "gamma": list(self.gamma), "params": [[k, str(v)] for k, v in self.params]},
            sort_keys=True,
        )


def _as_frequencies(model: LevyModel, xi) -> Tuple[np.ndarray, bool]:
    xi = np.asarray(xi, dtype=float)
    if xi.ndim == 0:
        if model.dimension != 1:
            raise ArgumentError(f"scalar frequency given for a {model.dimension}-dimensional model")
        return xi.reshape(1), True
    if xi.shape[-1] != model.dimension:
        raise ArgumentError(
            f"frequency has dimension {xi.shape[-1]}, model has dimension {model.dimension}"
        )
    return xi, xi.ndim == 1


def psi(model: LevyModel, xi):
    """Characteristic exponent ψ(ξ), vectorized over the leading axes of ξ.

    Args:
        model: Lévy model.
        xi: Frequency of shape (d,) or (..., d); a scalar is accepted when d = 1.

    Returns:
        complex or np.ndarray: ψ(ξ); exactly real for symmetric models.

    Raises:
        ArgumentError: If the last axis of `xi` does not match the dimension.
    """
    arr, single = _as_frequencies(model, xi)
    value = model.gaussian * np.sum(arr * arr, axis=-1) - 1j * (arr @ np.array(model.gamma))
    if model.measure is not None:
        value = value + model.measure.exponent(arr)
    if model.is_symmetric():
        value = np.real(value) + 0j
    return complex(value) if single else value


def gamma0(model: LevyModel) -> np.ndarray:
    """γ₀ = ∫_{‖y‖≤1} y ν(dy) − γ; X_t carries the deterministic drift −tγ₀."""
    if not model.has_finite_variation():
        raise UnsupportedOperationError("γ₀ is defined for finite-variation processes only")
    moment = np.zeros(model.dimension)
    if model.measure is not None:
        moment = model.measure.first_moment(0.0, np.nextafter(1.0, 2.0))
    return moment - np.array(model.gamma)


@dataclass(frozen=True)
class PowerFunction:
    """V(x) = coef·x^exponent on x ≥ 0, with exact generalized inverse."""
    coef: float
    exponent: float

    def __call__(self, x):
        return self.coef * np.asarray(x, dtype=float) ** self.exponent

    def inverse(self, u: float) -> float:
        if u <= 0:
            return 0.0
        return (u / self.coef) ** (1.0 / self.exponent)


def generalized_inverse(V: Callable[[float], float], u: float, abs_tol: Optional[float] = None,
                        cap: float = 2.0 ** 200) -> float:
    """V⁻(u) = inf{x ≥ 0 : V(x) ≥ u}.

    Pure powers are inverted in closed form; other functions are bracketed by
    doubling and then bisected, which returns the left end of flat stretches.

    Raises:
        RangeError: If V stays below u up to the bracket cap.
    """
    if isinstance(V, PowerFunction):
        return V.inverse(u)
    if abs_tol is None:
        abs_tol = get_settings().INVERSE_ABS_TOL
    if float(V(0.0)) >= u:
        return 0.0
    hi = 1.0
    while float(V(hi)) < u:
        hi *= 2.0
        if hi > cap:
            raise RangeError("generalized inverse bracket exhausted", {"u": u, "cap": cap})
    lo = 0.0
    for _ in range(400):
        if hi - lo <= max(abs_tol, 4.0 * np.finfo(float).eps * hi):
            break
        mid = 0.5 * (lo + hi)
        if float(V(mid)) >= u:
            hi = mid
        else:
            lo = mid
    return hi


def _ball_candidates(d: int, n: int) -> np.ndarray:
    """Points of the closed unit ball on a sphere×radius grid (half sphere; ψ is even)."""
    radii = np.arange(1, n + 1) / n
    if d == 1:
        dirs = np.array([[1.0]])
    elif d == 2:
        phi = np.pi * np.arange(n) / n
        dirs = np.column_stack([np.cos(phi), np.sin(phi)])
    else:
        m = 2 * n * n
        k = np.arange(m) + 0.5
        z = k / m
        phi = np.pi * (1.0 + 5.0 ** 0.5) * k
        s = np.sqrt(1.0 - z * z)
        dirs = np.column_stack([s * np.cos(phi), s * np.sin(phi), z])
    return (radii[:, None, None] * dirs[None, :, :]).reshape(-1, d)


def _psi_star_search(model: LevyModel, u: float, rel_tol: float) -> float:
    d = model.dimension

    def clipped(y):
        norm = np.linalg.norm(y)
        return y if norm <= u else y * (u / norm)

    prev = None
    for level in range(7 if d < 3 else 4):
        n = 16 * 2 ** level
        pts = u * _ball_candidates(d, n)
        vals = np.real(psi(model, pts))
        x0 = pts[int(np.argmax(vals))]
        res = optimize.minimize(
            lambda y: -float(np.real(psi(model, clipped(y)))), x0, method="Nelder-Mead",
            options={"xatol": 1e-12 * u, "fatol": 1e-15, "maxiter": 4000},
        )
        value = max(float(vals.max()), float(np.real(psi(model, clipped(res.x)))))
        if prev is not None and abs(value - prev) <= rel_tol * max(abs(value), 1e-300):
            logger.debug(f"[MODELS] psi*({u:.4g}) = {value:.8g} after {level + 1} refinements")
            return value
        prev = value
    raise NumericError("ψ* grid refinement did not settle", {"u": u, "last": prev})


@lru_cache(maxsize=8192)
def _psi_star_cached(model: LevyModel, u: float, rel_tol: float) -> float:
    return _psi_star_search(model, u, rel_tol)


def psi_star(model: LevyModel, u: float) -> float:
    """ψ*(u) = sup_{‖ξ‖≤u} ψ(ξ) for a symmetric model.

    Raises:
        UnsupportedOperationError: If the model is not symmetric.
    """
    if u <= 0:
        raise ArgumentError(f"ψ* needs u > 0, got {u}")
    if not model.is_symmetric():
        raise UnsupportedOperationError("ψ* is defined for symmetric models only")
    if model.is_radial():
        e = np.zeros(model.dimension)
        e[0] = u
        return float(np.real(psi(model, e)))
    return _psi_star_cached(model, float(u), get_settings().PSI_STAR_REL_TOL)


def psi_star_function(model: LevyModel) -> Callable[[float], float]:
    """u ↦ ψ*(u), as a PowerFunction when the family allows it."""
    if model.is_radial() and model.measure is None:
        return PowerFunction(model.gaussian, 2.0)
    if model.is_radial() and isinstance(model.measure, RadialPowerLaw):
        return PowerFunction(model.measure.exponent_scale(), model.measure.alpha)
    if (model.is_radial() and isinstance(model.measure, SphericalDecomposition)
            and model.measure.profile.is_power):
        e = np.zeros(model.dimension)
        e[0] = 1.0
        return PowerFunction(float(np.real(psi(model, e))), model.measure.profile.alpha)
    return lambda u: psi_star(model, u) if u > 0 else 0.0


def characteristic_length(model: LevyModel, t: float) -> float:
    """1/ψ⁻(1/t), the spatial scale of X_t."""
    return 1.0 / generalized_inverse(psi_star_function(model), 1.0 / t)


def pruitt_h(model: LevyModel, r: float) -> float:
    """Pruitt function h(r) of the triplet.

    h(r) = ‖A‖r⁻² + r⁻¹‖γ + ∫(1{‖y‖<r} − 1{‖y‖<1}) y ν(dy)‖ + ∫(1 ∧ ‖y‖²r⁻²) ν(dy).
    """
    if r <= 0:
        raise ArgumentError(f"Pruitt function needs r > 0, got {r}")
    value = model.gaussian / r ** 2
    nu = model.measure
    if nu is None:
        return value + np.linalg.norm(model.gamma) / r
    if not model.is_symmetric():
        shift = np.array(model.gamma, dtype=float)
        if r < 1.0:
            shift = shift - nu.first_moment(r, 1.0)
        elif r > 1.0:
            shift = shift + nu.first_moment(1.0, r)
        value += float(np.linalg.norm(shift)) / r
    value += nu.second_moment(r) / r ** 2 + nu.tail_mass(r)
    if not math.isfinite(value):
        raise NumericError("Pruitt function diverged", {"r": r})
    return value


def estimate_rv_index(V: Callable[[float], float], lo: float, hi: float, points: int = 64) -> float:
    """Least-squares slope of log V against log x on a geometric probe grid.

    Raises:
        NumericError: If V is not positive on the probe grid.
    """
    xs = np.geomspace(lo, hi, points)
    ys = np.array([float(V(x)) for x in xs])
    if np.any(~np.isfinite(ys)) or np.any(ys <= 0):
        raise NumericError("regular-variation probe needs positive samples", {"lo": lo, "hi": hi})
    slope, _ = np.polyfit(np.log(xs), np.log(ys), 1)
    return float(slope)


@dataclass(frozen=True, eq=False)
class ScalingLimit:
    """Scaling function V with index α and the limit exponent (Λ on the sphere or a measure η)."""
    V: Callable[[float], float]
    alpha: float
    Lambda: Optional[Callable[[np.ndarray], np.ndarray]] = None
    eta: Optional[LevyMeasureDescriptor] = None
    normalization: str = "exponent"

    def inverse(self, u: float) -> float:
        return generalized_inverse(self.V, u)

    def limit_exponent(self, xi: np.ndarray) -> np.ndarray:
        """Exponent of the limit law at ξ (shape (..., d))."""
        xi = np.asarray(xi, dtype=float)
        if self.eta is not None:
            return np.real(self.eta.exponent(xi))
        norm = np.linalg.norm(xi, axis=-1)
        with np.errstate(invalid="ignore", divide="ignore"):
            theta = xi / norm[..., None]
        theta = np.where(norm[..., None] > 0, theta, 0.0)
        return np.where(norm > 0, self.Lambda(theta) * norm ** self.alpha, 0.0)

    def check(self, beta: Optional[float] = None, dimension: int = 1, resolution: int = 256) -> None:
        """Sampled certificate: Λ > 0 and continuous on a sphere grid, α ∈ (β, 2]."""
        if beta is not None and not beta < self.alpha <= 2.0:
            raise HypothesisViolationError(
                f"scaling index α={self.alpha} must lie in (β, 2] with β={beta}"
            )
        if self.Lambda is None:
            return
        points, _ = sphere_grid(dimension, resolution)
        values = np.asarray(self.Lambda(points), dtype=float)
        if np.any(values <= 0) or np.any(~np.isfinite(values)):
            raise HypothesisViolationError("Λ must be strictly positive on the sphere")
        if dimension == 2:
            jumps = np.abs(np.diff(np.append(values, values[0])))
            if jumps.max() > 0.25 * values.max():
                raise HypothesisViolationError("Λ looks discontinuous on the sphere grid")


def scaling_limit(model: LevyModel, normalization: str = "exponent") -> ScalingLimit:
    """Scaling function and limit law of a regularly varying family.

    "exponent" normalizes by the characteristic exponent (ψ(sθ)/V(s) → Λ(θ));
    "tail" uses V(x) = ν(B^c_{1/x}) and the limit measure η.
    """
    if normalization not in ("exponent", "tail"):
        raise ArgumentError(f"unknown normalization {normalization!r}")
    nu = model.measure
    base = nu.base if isinstance(nu, CombinedMeasure) else nu
    d = model.dimension
    if normalization == "tail":
        if base is None or isinstance(base, FiniteMeasure):
            raise UnsupportedOperationError("tail normalization needs an infinite stable-type Lévy measure")
        if isinstance(base, AxesProduct):
            rho = max(base.alphas)
            dom = [c if a == rho else 0.0 for a, c in zip(base.alphas, base.constants)]
            total = sum(2.0 * c / rho for c in dom)
            eta = AxesProduct(tuple(rho for _ in base.alphas), tuple(c / total for c in dom))
            return ScalingLimit(lambda x: nu.tail_mass(1.0 / x) if x > 0 else 0.0, rho,
                                eta=eta, normalization="tail")
        if isinstance(base, RadialPowerLaw):
            k = base.constant * sphere_area(d) / base.alpha
            eta = RadialPowerLaw(d, base.alpha, base.constant / k)
            alpha = base.alpha
        elif isinstance(base, SphericalDecomposition):
            alpha = base.profile.alpha
            sphere = base.sphere
            total = sphere.total_mass()
            scaled = (SphereMeasure.uniform(d, alpha) if sphere.is_uniform else
                      SphereMeasure.atoms(sphere.directions, [w * alpha / total for w in sphere.weights]))
            eta = SphericalDecomposition(scaled, RadialProfile(alpha))
        else:
            raise UnsupportedOperationError(f"no tail scaling limit for {type(base).__name__}")
        if nu is base and isinstance(base, RadialPowerLaw):
            V = PowerFunction(base.tail_mass(1.0), alpha)
        else:
            V = lambda x: nu.tail_mass(1.0 / x) if x > 0 else 0.0
        return ScalingLimit(V, alpha, eta=eta, normalization="tail")

    if base is None or isinstance(base, FiniteMeasure):
        if model.gaussian <= 0:
            raise UnsupportedOperationError("pure-jump finite measures have no scaling limit")
        return ScalingLimit(PowerFunction(model.gaussian, 2.0), 2.0, Lambda=lambda th: np.ones(np.shape(th)[:-1]))
    if model.gaussian > 0:
        raise UnsupportedOperationError("mixed Gaussian and jump parts are not supported")
    if isinstance(base, RadialPowerLaw):
        return ScalingLimit(PowerFunction(base.exponent_scale(), base.alpha), base.alpha,
                            Lambda=lambda th: np.ones(np.shape(th)[:-1]))
    if isinstance(base, SphericalDecomposition):
        alpha, kappa = base.profile.alpha, base.profile.kappa
        stable_part = SphericalDecomposition(base.sphere, RadialProfile(alpha))
        V = PowerFunction(1.0, alpha) if kappa == 0.0 else (
            lambda x: x ** alpha * math.log(math.e + x) ** kappa if x > 0 else 0.0)
        return ScalingLimit(V, alpha, Lambda=lambda th: np.real(stable_part.exponent(th)))
    if isinstance(base, AxesProduct):
        rho = max(base.alphas)
        scales = [2.0 * c * stable_constant(a) for a, c in zip(base.alphas, base.constants)]
        ref = max(s for a, s in zip(base.alphas, scales) if a == rho)
        dom = tuple((s / ref) / (2.0 * stable_constant(rho)) if a == rho else 0.0
                    for a, s in zip(base.alphas, scales))
        eta = AxesProduct(tuple(rho for _ in base.alphas), dom)
        Lambda = None
        if all(a == rho for a in base.alphas):
            Lambda = lambda th: np.real(eta.exponent(th))
        return ScalingLimit(PowerFunction(ref, rho), rho, Lambda=Lambda, eta=eta)
    raise UnsupportedOperationError(f"no scaling limit for {type(base).__name__}")


@dataclass(frozen=True)
class PsiStarRatio:
    min_ratio: float
    max_ratio: float


def psi_star_ratio_diagnostic(model: LevyModel, lo: float = 1.0, hi: float = 1e3,
                              radii: int = 7, resolution: int = 32) -> PsiStarRatio:
    """Sampled range of ψ(x)/ψ*(‖x‖) over ‖x‖ ∈ [lo, hi] (a proxy for ψ ≍ ψ*)."""
    points, _ = sphere_grid(model.dimension, resolution)
    ratios = []
    for rho in np.geomspace(lo, hi, radii):
        star = psi_star(model, rho)
        vals = np.real(psi(model, rho * points))
        ratios.append(vals / star)
    ratios = np.concatenate(ratios)
    return PsiStarRatio(float(ratios.min()), float(ratios.max()))
