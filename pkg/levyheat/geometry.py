"""Sets, initial data and the convolution r = g∗μ̌.

Every supported set decomposes into signed elementary parts (balls and boxes),
so covariance-type quantities |Ω ∩ (Ω₀ + x)| reduce to pairwise overlaps with
closed forms. Directional derivatives V_θ(Ω), the perimeter functional and
second-difference limits R_β are computed on top of the resulting RFunction.
"""

import logging
import math
from dataclasses import dataclass, field
from typing import Callable, List, Optional, Sequence, Tuple, Union

import numpy as np
import pandas as pd
from scipy import integrate, special, stats

from .errors import ArgumentError, NumericError
from .levy_models import sphere_grid, unit_ball_volume

# Configure module logging
logger = logging.getLogger(__name__)

RICHARDSON_T0 = 1e-2
RICHARDSON_LEVELS = 13
GAUSSIAN_REACH = 12.0


def _vec(values: Sequence[float]) -> Tuple[float, ...]:
    return tuple(float(v) for v in values)


class SetGeometry:
    """Finite-measure open set built from signed balls and boxes."""

    dimension: int

    def measure(self) -> float:
        raise NotImplementedError

    def parts(self) -> List[Tuple[float, "SetGeometry"]]:
        return [(1.0, self)]

    def contains(self, points: np.ndarray) -> np.ndarray:
        raise NotImplementedError

    def extent(self) -> float:
        """sup ‖y‖ over the closure of the set."""
        raise NotImplementedError

    def bounds(self) -> Tuple[np.ndarray, np.ndarray]:
        raise NotImplementedError

    def classical_perimeter(self) -> float:
        raise NotImplementedError

    def is_convex(self) -> bool:
        return False

    def sample(self, rng: np.random.Generator, count: int) -> np.ndarray:
        """Uniform points of the set by rejection from its bounding box."""
        lo, hi = self.bounds()
        out = []
        have = 0
        while have < count:
            batch = rng.uniform(lo, hi, size=(max(2 * (count - have), 1024), self.dimension))
            keep = batch[self.contains(batch)]
            out.append(keep)
            have += len(keep)
        return np.concatenate(out)[:count]


@dataclass(frozen=True)
class Ball(SetGeometry):
    center: Tuple[float, ...]
    radius: float

    def __post_init__(self):
        if self.radius <= 0:
            raise ArgumentError("ball radius must be positive")

    @property
    def dimension(self) -> int:
        return len(self.center)

    def measure(self) -> float:
        return unit_ball_volume(self.dimension) * self.radius ** self.dimension

    def contains(self, points):
        return np.linalg.norm(np.asarray(points) - np.array(self.center), axis=-1) < self.radius

    def extent(self) -> float:
        return float(np.linalg.norm(self.center)) + self.radius

    def bounds(self):
        c = np.array(self.center)
        return c - self.radius, c + self.radius

    def classical_perimeter(self) -> float:
        d = self.dimension
        return d * unit_ball_volume(d) * self.radius ** (d - 1)

    def is_convex(self) -> bool:
        return True


@dataclass(frozen=True)
class Box(SetGeometry):
    center: Tuple[float, ...]
    half_widths: Tuple[float, ...]

    def __post_init__(self):
        if len(self.center) != len(self.half_widths):
            raise ArgumentError("box center and half-widths differ in length")
        if min(self.half_widths) <= 0:
            raise ArgumentError("box half-widths must be positive")

    @property
    def dimension(self) -> int:
        return len(self.center)

    def measure(self) -> float:
        return float(np.prod(2.0 * np.array(self.half_widths)))

    def contains(self, points):
        diff = np.abs(np.asarray(points) - np.array(self.center))
        return np.all(diff < np.array(self.half_widths), axis=-1)

    def extent(self) -> float:
        return float(np.linalg.norm(np.abs(self.center) + np.array(self.half_widths)))

    def bounds(self):
        c, h = np.array(self.center), np.array(self.half_widths)
        return c - h, c + h

    def classical_perimeter(self) -> float:
        sides = 2.0 * np.array(self.half_widths)
        if self.dimension == 1:
            return 2.0
        return float(sum(2.0 * np.prod(np.delete(sides, i)) for i in range(self.dimension)))

    def is_convex(self) -> bool:
        return True

    def interval(self, axis: int) -> Tuple[float, float]:
        return self.center[axis] - self.half_widths[axis], self.center[axis] + self.half_widths[axis]


@dataclass(frozen=True)
class Annulus(SetGeometry):
    center: Tuple[float, ...]
    r_in: float
    r_out: float

    def __post_init__(self):
        if not 0 < self.r_in < self.r_out:
            raise ArgumentError("annulus needs 0 < r_in < r_out")

    @property
    def dimension(self) -> int:
        return len(self.center)

    def parts(self):
        return [(1.0, Ball(self.center, self.r_out)), (-1.0, Ball(self.center, self.r_in))]

    def measure(self) -> float:
        return unit_ball_volume(self.dimension) * (self.r_out ** self.dimension - self.r_in ** self.dimension)

    def contains(self, points):
        dist = np.linalg.norm(np.asarray(points) - np.array(self.center), axis=-1)
        return (dist < self.r_out) & (dist > self.r_in)

    def extent(self) -> float:
        return float(np.linalg.norm(self.center)) + self.r_out

    def bounds(self):
        c = np.array(self.center)
        return c - self.r_out, c + self.r_out

    def classical_perimeter(self) -> float:
        d = self.dimension
        return d * unit_ball_volume(d) * (self.r_out ** (d - 1) + self.r_in ** (d - 1))


@dataclass(frozen=True)
class DisjointUnion(SetGeometry):
    components: Tuple[Union[Ball, Box], ...]
    min_gap: float = field(init=False, default=0.0)

    def __post_init__(self):
        if not self.components:
            raise ArgumentError("disjoint union needs at least one component")
        dims = {c.dimension for c in self.components}
        if len(dims) != 1:
            raise ArgumentError("disjoint union components differ in dimension")
        for c in self.components:
            if not isinstance(c, (Ball, Box)):
                raise ArgumentError("disjoint union components must be balls or boxes")
        gap = math.inf
        zero = np.zeros((1, self.dimension))
        for i, a in enumerate(self.components):
            for b in self.components[i + 1:]:
                if _overlap(a, b, zero)[0] > 0.0:
                    raise ArgumentError(f"disjoint union components {a} and {b} overlap")
                gap = min(gap, _separation(a, b))
        object.__setattr__(self, "min_gap", gap)

    @property
    def dimension(self) -> int:
        return self.components[0].dimension

    def parts(self):
        return [(1.0, c) for c in self.components]

    def measure(self) -> float:
        return sum(c.measure() for c in self.components)

    def contains(self, points):
        return np.any([c.contains(points) for c in self.components], axis=0)

    def extent(self) -> float:
        return max(c.extent() for c in self.components)

    def bounds(self):
        los, his = zip(*(c.bounds() for c in self.components))
        return np.min(los, axis=0), np.max(his, axis=0)

    def classical_perimeter(self) -> float:
        return sum(c.classical_perimeter() for c in self.components)


def _separation(a: SetGeometry, b: SetGeometry) -> float:
    """Lower bound on the distance between two elementary sets (exact for ball/ball, box/box)."""
    if isinstance(a, Box) and isinstance(b, Box):
        gaps = np.maximum(0.0, np.abs(np.subtract(a.center, b.center)) - np.add(a.half_widths, b.half_widths))
        return float(np.linalg.norm(gaps))
    if isinstance(a, Ball) and isinstance(b, Ball):
        return max(0.0, float(np.linalg.norm(np.subtract(a.center, b.center))) - a.radius - b.radius)
    ball, box = (a, b) if isinstance(a, Ball) else (b, a)
    nearest = np.clip(ball.center, *box.bounds())
    return max(0.0, float(np.linalg.norm(nearest - np.array(ball.center))) - ball.radius)


def _cap_volume(R: float, h: np.ndarray, d: int) -> np.ndarray:
    """Volume of the cap of height h ∈ [0, 2R] cut from a d-ball of radius R."""
    h = np.clip(h, 0.0, 2.0 * R)
    full = unit_ball_volume(d) * R ** d
    small = np.minimum(h, 2.0 * R - h)
    x = np.clip((2.0 * R * small - small ** 2) / R ** 2, 0.0, 1.0)
    cap = 0.5 * full * special.betainc((d + 1) / 2.0, 0.5, x)
    return np.where(h <= R, cap, full - cap)


def _ball_ball(a: Ball, b: Ball, x: np.ndarray) -> np.ndarray:
    d = a.dimension
    D = np.linalg.norm(np.array(b.center) + x - np.array(a.center), axis=-1)
    R1, R2 = a.radius, b.radius
    out = np.zeros_like(D)
    inside = D <= abs(R1 - R2)
    out[inside] = unit_ball_volume(d) * min(R1, R2) ** d
    lens = (~inside) & (D < R1 + R2)
    if np.any(lens):
        Dl = D[lens]
        a1 = (Dl ** 2 + R1 ** 2 - R2 ** 2) / (2.0 * Dl)
        a2 = Dl - a1
        out[lens] = _cap_volume(R1, R1 - a1, d) + _cap_volume(R2, R2 - a2, d)
    return out


def _box_box(a: Box, b: Box, x: np.ndarray) -> np.ndarray:
    lo = np.maximum(np.array(a.center) - a.half_widths, np.array(b.center) + x - b.half_widths)
    hi = np.minimum(np.array(a.center) + a.half_widths, np.array(b.center) + x + b.half_widths)
    return np.prod(np.clip(hi - lo, 0.0, None), axis=-1)


def _as_interval(s: SetGeometry) -> Box:
    return s if isinstance(s, Box) else Box(s.center, (s.radius,))


def _ball_box_2d(ball: Ball, box: Box) -> float:
    """Area of a disk ∩ rectangle by integrating chord overlaps along the first axis."""
    cx, cy = ball.center
    (x0, x1), (y0, y1) = box.interval(0), box.interval(1)
    lo, hi = max(x0, cx - ball.radius), min(x1, cx + ball.radius)
    if hi <= lo:
        return 0.0

    def chord(s):
        half = math.sqrt(max(ball.radius ** 2 - (s - cx) ** 2, 0.0))
        return max(0.0, min(y1, cy + half) - max(y0, cy - half))

    value, _ = integrate.quad(chord, lo, hi, epsabs=1e-13, epsrel=1e-11, limit=200)
    return value


def _ball_box_mc(ball: Ball, box: Box, samples: int = 200_000) -> Tuple[float, float]:
    rng = np.random.default_rng(0)
    pts = ball.sample(rng, samples)
    hits = box.contains(pts)
    p = hits.mean()
    vol = ball.measure()
    return vol * p, vol * math.sqrt(p * (1.0 - p) / samples)


def _overlap(a: SetGeometry, b: SetGeometry, x: np.ndarray,
             errors: Optional[np.ndarray] = None) -> np.ndarray:
    """|a ∩ (b + x)| for elementary sets, vectorized over rows of x."""
    if isinstance(a, Ball) and isinstance(b, Ball):
        return _ball_ball(a, b, x)
    if isinstance(a, Box) and isinstance(b, Box):
        return _box_box(a, b, x)
    if a.dimension == 1:
        return _box_box(_as_interval(a), _as_interval(b), x)
    out = np.empty(len(x))
    for i, shift in enumerate(x):
        moved = (Ball(_vec(np.array(b.center) + shift), b.radius) if isinstance(b, Ball)
                 else Box(_vec(np.array(b.center) + shift), b.half_widths))
        ball, box = (a, moved) if isinstance(a, Ball) else (moved, a)
        if a.dimension == 2:
            out[i] = _ball_box_2d(ball, box)
        else:
            out[i], err = _ball_box_mc(ball, box)
            if errors is not None:
                errors[i] += err ** 2
    return out


def _as_points(x, d: int) -> Tuple[np.ndarray, bool]:
    x = np.asarray(x, dtype=float)
    if x.ndim == 0:
        x = x.reshape(1)
    if x.shape[-1] != d:
        raise ArgumentError(f"point has dimension {x.shape[-1]}, expected {d}")
    single = x.ndim == 1
    return x.reshape(-1, d), single


def cross_covariance_with_error(omega: SetGeometry, omega0: SetGeometry, x) -> Tuple[np.ndarray, np.ndarray]:
    """|Ω ∩ (Ω₀ + x)| and its Monte-Carlo standard error (zero for closed forms)."""
    if omega.dimension != omega0.dimension:
        raise ArgumentError("sets differ in dimension")
    pts, single = _as_points(x, omega.dimension)
    var = np.zeros(len(pts))
    total = np.zeros(len(pts))
    for sa, a in omega.parts():
        for sb, b in omega0.parts():
            total += sa * sb * _overlap(a, b, pts, var)
    total = np.clip(total, 0.0, None)
    err = np.sqrt(var)
    if single:
        return float(total[0]), float(err[0])
    return total, err


def cross_covariance(omega: SetGeometry, omega0: SetGeometry, x):
    """r(x) = |Ω ∩ (Ω₀ + x)|.

    Args:
        omega: The set Ω.
        omega0: The set Ω₀, same dimension.
        x: Shift of shape (d,) or (n, d).

    Returns:
        float or np.ndarray: Overlap volume.

    Raises:
        ArgumentError: On dimension mismatch.
    """
    return cross_covariance_with_error(omega, omega0, x)[0]


def covariance(omega: SetGeometry, x):
    """Set covariance |Ω ∩ (Ω + x)|."""
    return cross_covariance(omega, omega, x)


@dataclass(frozen=True)
class Indicator:
    """g = 1_Ω."""
    geometry: SetGeometry

    @property
    def dimension(self) -> int:
        return self.geometry.dimension

    @property
    def sup_norm(self) -> float:
        return 1.0

    def __call__(self, points: np.ndarray) -> np.ndarray:
        return self.geometry.contains(points).astype(float)


@dataclass(frozen=True, eq=False)
class BoundedFunction:
    """Bounded g given as a vectorized callable on (n, d) arrays with a sup-norm bound."""
    func: Callable[[np.ndarray], np.ndarray]
    sup_norm: float
    dimension: int
    support: Optional[SetGeometry] = None

    def __post_init__(self):
        if not math.isfinite(self.sup_norm) or self.sup_norm < 0:
            raise ArgumentError("bounded function needs a finite sup-norm bound")

    def __call__(self, points: np.ndarray) -> np.ndarray:
        return np.asarray(self.func(points), dtype=float)


@dataclass(frozen=True)
class LebesgueOnSet:
    """μ(dx) = 1_Ω(x) dx."""
    geometry: SetGeometry

    @property
    def dimension(self) -> int:
        return self.geometry.dimension

    def total_mass(self) -> float:
        return self.geometry.measure()


@dataclass(frozen=True, eq=False)
class DensityMeasure:
    """μ(dx) = f(x) dx with f supported in a box."""
    density: Callable[[np.ndarray], np.ndarray]
    mass: float
    support: Box

    @property
    def dimension(self) -> int:
        return self.support.dimension

    def total_mass(self) -> float:
        return self.mass


@dataclass(frozen=True)
class GaussianDensity:
    """μ(dx) = (2π)^{−d/2} e^{−‖x‖²/2} dx."""
    dimension: int

    def total_mass(self) -> float:
        return 1.0


Measure = Union[LebesgueOnSet, DensityMeasure, GaussianDensity]


@dataclass(frozen=True)
class InitialData:
    """Pair (g, μ) with an optional positive multiplier on g."""
    g: Union[Indicator, BoundedFunction]
    mu: Measure
    g_scale: float = 1.0

    def __post_init__(self):
        if self.g.dimension != self.mu.dimension:
            raise ArgumentError("g and μ live in different dimensions")
        if self.g_scale <= 0:
            raise ArgumentError("g multiplier must be positive")
        if not math.isfinite(self.mu.total_mass()):
            raise ArgumentError("μ must be a finite measure")

    @property
    def dimension(self) -> int:
        return self.g.dimension


@dataclass(frozen=True, eq=False)
class RFunction:
    """r = g∗μ̌ with cached r(0) and whatever closed-form structure is known.

    `factors`, when present, are one-dimensional RFunctions whose product is r
    (the multiplier is folded into the first factor). `geometry` is set when r
    is the covariance of a single set.
    """
    dimension: int
    evaluator: Callable[[np.ndarray], np.ndarray]
    r0: float
    analytic: bool
    sup_norm: float
    support_radius: float
    geometry: Optional[SetGeometry] = None
    gradient0: Optional[Tuple[float, ...]] = None
    factors: Optional[Tuple["RFunction", ...]] = None
    R_beta: Optional[Callable[[np.ndarray], np.ndarray]] = None
    beta: float = 1.0

    def __call__(self, x):
        pts, single = _as_points(x, self.dimension)
        values = np.asarray(self.evaluator(pts), dtype=float)
        return float(values[0]) if single else values

    def value_at_infinity(self) -> float:
        return 0.0

    def export_csv(self, points: np.ndarray, path: str) -> None:
        """Write (x, r(x)) rows."""
        pts, _ = _as_points(points, self.dimension)
        cols = {("x" if self.dimension == 1 else f"x{i + 1}"): pts[:, i] for i in range(self.dimension)}
        cols["r"] = self(pts)
        pd.DataFrame(cols).to_csv(path, index=False, float_format="%.12g")


def _gaussian_part(part: SetGeometry, pts: np.ndarray) -> np.ndarray:
    """P(x + Y ∈ part) for a standard Gaussian Y."""
    if isinstance(part, Box):
        c, h = np.array(part.center), np.array(part.half_widths)
        return np.prod(stats.norm.cdf(c + h - pts) - stats.norm.cdf(c - h - pts), axis=-1)
    nc = np.sum((np.array(part.center) - pts) ** 2, axis=-1)
    return np.where(
        nc > 0,
        stats.ncx2.cdf(part.radius ** 2, part.dimension, np.maximum(nc, 1e-300)),
        stats.chi2.cdf(part.radius ** 2, part.dimension),
    )


def _gaussian_gradient(part: SetGeometry) -> np.ndarray:
    if isinstance(part, Box):
        c, h = np.array(part.center), np.array(part.half_widths)
        mass = stats.norm.cdf(c + h) - stats.norm.cdf(c - h)
        dens = stats.norm.pdf(c - h) - stats.norm.pdf(c + h)
        grad = np.empty(part.dimension)
        for i in range(part.dimension):
            grad[i] = dens[i] * np.prod(np.delete(mass, i))
        return grad
    return _numeric_gradient(lambda p: _gaussian_part(part, p), part.dimension)


def _numeric_gradient(f: Callable[[np.ndarray], np.ndarray], d: int) -> np.ndarray:
    grad = np.empty(d)
    for i in range(d):
        e = np.zeros(d)
        e[i] = 1.0
        grad[i], _ = _richardson(lambda t: float((f((t * e)[None]) - f((-t * e)[None]))[0]) / (2.0 * t),
                                 orders=(2, 4))
    return grad


def _interval_factor(a: Tuple[float, float], b: Tuple[float, float]) -> Callable[[np.ndarray], np.ndarray]:
    """s ↦ |[a0, a1] ∩ ([b0, b1] + s)|."""
    def factor(s):
        return np.clip(np.minimum(a[1], b[1] + s) - np.maximum(a[0], b[0] + s), 0.0, None)
    return factor


def _product_factors(g_box: Box, mu, scale: float) -> Tuple[RFunction, ...]:
    factors = []
    for i in range(g_box.dimension):
        a = g_box.interval(i)
        if isinstance(mu, GaussianDensity):
            def f(s, a=a):
                return stats.norm.cdf(a[1] - s) - stats.norm.cdf(a[0] - s)
            reach = max(abs(a[0]), abs(a[1])) + GAUSSIAN_REACH
        else:
            f = _interval_factor(a, mu.geometry.interval(i))
            b = mu.geometry.interval(i)
            reach = max(abs(a[1] - b[0]), abs(b[1] - a[0]))
        k = scale if i == 0 else 1.0
        bound = k if isinstance(mu, GaussianDensity) else k * (a[1] - a[0])
        ev = (lambda p, f=f, k=k: k * f(p[:, 0]))
        factors.append(RFunction(1, ev, float(ev(np.zeros((1, 1)))[0]), True, bound, reach))
    return tuple(factors)


def _numeric_convolution(data: InitialData, pts: np.ndarray) -> np.ndarray:
    """∫ g(x + y) μ(dy) by adaptive quadrature over the support of μ."""
    g, mu, d = data.g, data.mu, data.dimension
    if isinstance(mu, GaussianDensity):
        lo, hi = np.full(d, -GAUSSIAN_REACH), np.full(d, GAUSSIAN_REACH)
        weight = lambda y: np.exp(-0.5 * np.sum(y * y, axis=-1)) / (2.0 * np.pi) ** (d / 2.0)
    elif isinstance(mu, DensityMeasure):
        lo, hi = mu.support.bounds()
        weight = lambda y: np.asarray(mu.density(y), dtype=float)
    else:
        lo, hi = mu.geometry.bounds()
        weight = lambda y: mu.geometry.contains(y).astype(float)
    out = np.empty(len(pts))
    for k, x in enumerate(pts):
        def integrand(*y, x=x):
            yy = np.array(y)[None, :]
            return float(g(x + yy)[0] * weight(yy)[0])
        value, err = integrate.nquad(integrand, list(zip(lo, hi)), opts={"limit": 200, "epsabs": 1e-10})
        if err > 1e-6 * max(abs(value), 1.0):
            raise NumericError("convolution quadrature did not converge", {"x": x.tolist(), "abserr": err})
        out[k] = value
    return data.g_scale * out


def build_r(data: InitialData) -> RFunction:
    """Build r = g∗μ̌ with r(0) evaluated once.

    Indicator data against Lebesgue or Gaussian μ use closed forms; any other
    combination falls back to adaptive quadrature over the support of μ.
    """
    g, mu, k, d = data.g, data.mu, data.g_scale, data.dimension
    sup = k * g.sup_norm * mu.total_mass()

    if isinstance(g, Indicator) and isinstance(mu, LebesgueOnSet):
        omega, omega0 = g.geometry, mu.geometry
        same = omega == omega0
        evaluator = lambda p: k * cross_covariance(omega, omega0, p)
        factors = None
        if isinstance(omega, Box) and isinstance(omega0, Box):
            factors = _product_factors(omega, mu, k)
        r_beta = None
        if same:
            r_beta = lambda th: np.array([-k * directional_derivative(omega, t) for t in np.atleast_2d(th)])
        fields = dict(analytic=True, sup_norm=sup, support_radius=omega.extent() + omega0.extent(),
                      geometry=omega if same else None, factors=factors, R_beta=r_beta)
    elif isinstance(g, Indicator) and isinstance(mu, GaussianDensity):
        omega = g.geometry

        def evaluator(p):
            return k * sum(s * _gaussian_part(part, p) for s, part in omega.parts())

        grad = k * sum(s * _gaussian_gradient(part) for s, part in omega.parts())
        factors = _product_factors(omega, mu, k) if isinstance(omega, Box) else None
        fields = dict(analytic=True, sup_norm=k, support_radius=omega.extent() + GAUSSIAN_REACH,
                      gradient0=tuple(grad), factors=factors,
                      R_beta=lambda th: np.zeros(len(np.atleast_2d(th))))
    else:
        if isinstance(mu, GaussianDensity):
            reach = GAUSSIAN_REACH
        elif isinstance(mu, DensityMeasure):
            reach = mu.support.extent()
        else:
            reach = mu.geometry.extent()
        g_reach = g.geometry.extent() if isinstance(g, Indicator) else (
            g.support.extent() if g.support is not None else math.inf)
        evaluator = lambda p: _numeric_convolution(data, p)
        fields = dict(analytic=False, sup_norm=sup, support_radius=reach + g_reach)
    r0 = float(evaluator(np.zeros((1, d)))[0])
    rf = RFunction(dimension=d, evaluator=evaluator, r0=r0, **fields)
    logger.debug(f"[GEOMETRY] Built r with r(0)={r0:.10g} (analytic={rf.analytic})")
    return rf


def _richardson(f: Callable[[float], float], t0: float = RICHARDSON_T0,
                levels: int = RICHARDSON_LEVELS, orders: Sequence[int] = (1, 2)) -> Tuple[float, float]:
    """Extrapolate f(t) → t ↓ 0 on t = t0·2^{−k}; returns (value, residual)."""
    ts = t0 * 2.0 ** (-np.arange(levels))
    table = np.array([f(t) for t in ts])
    for p in orders:
        table = (2.0 ** p * table[1:] - table[:-1]) / (2.0 ** p - 1.0)
    return float(table[-1]), float(abs(table[-1] - table[-2]))


def _unit(theta, d: int) -> np.ndarray:
    theta = np.asarray(theta, dtype=float).reshape(-1)
    if theta.shape[0] != d:
        raise ArgumentError(f"direction has dimension {theta.shape[0]}, expected {d}")
    if abs(np.linalg.norm(theta) - 1.0) > 1e-9:
        raise ArgumentError("direction must be a unit vector")
    return theta


def directional_derivative(omega: SetGeometry, theta) -> float:
    """V_θ(Ω) = 2·lim_{t↓0} t⁻¹(r(0) − r(tθ)) for the covariance r of Ω.

    Raises:
        NumericError: If the finite-difference extrapolation does not settle.
    """
    theta = _unit(theta, omega.dimension)
    d = omega.dimension
    if isinstance(omega, Box):
        sides = 2.0 * np.array(omega.half_widths)
        return float(2.0 * sum(abs(theta[i]) * np.prod(np.delete(sides, i)) for i in range(d)))
    if isinstance(omega, Ball):
        return 2.0 * unit_ball_volume(d - 1) * omega.radius ** (d - 1)
    if isinstance(omega, Annulus):
        return 2.0 * unit_ball_volume(d - 1) * (omega.r_out ** (d - 1) + omega.r_in ** (d - 1))
    if isinstance(omega, DisjointUnion) and omega.min_gap > 0:
        return sum(directional_derivative(c, theta) for c in omega.components)
    r0 = omega.measure()
    value, residual = _richardson(lambda t: 2.0 * (r0 - covariance(omega, t * theta)) / t)
    if residual > 1e-6 * max(abs(value), 1.0):
        raise NumericError("directional derivative extrapolation did not settle",
                           {"value": value, "residual": residual})
    return value


def lipschitz_bound(omega: SetGeometry, resolution: int = 64) -> float:
    """L with |r(x) + r(−x) − 2r(0)| ≤ L‖x‖ for the covariance of Ω."""
    points, _ = sphere_grid(omega.dimension, resolution)
    return 2.0 * max(directional_derivative(omega, th) for th in points)


@dataclass(frozen=True)
class PerimeterReport:
    """Perimeter functional Γ((d+1)/2)π^{−(d−1)/2}∫V_θ dσ next to the boundary measure."""
    functional: float
    classical: float

    @property
    def ratio(self) -> float:
        return self.functional / self.classical


def perimeter(omega: SetGeometry, rotation: float = 0.0, rel_tol: float = 1e-9) -> PerimeterReport:
    """Perimeter functional by sphere quadrature of V_θ, refined until it settles.

    Args:
        omega: Supported set.
        rotation: Angle (d=2) by which the quadrature nodes are rotated.
        rel_tol: Agreement required between successive refinements.
    """
    d = omega.dimension
    const = math.gamma((d + 1) / 2.0) / math.pi ** ((d - 1) / 2.0)
    prev = None
    for level in range(12):
        points, weights = sphere_grid(d, 32 * 2 ** level)
        if d == 2 and rotation:
            c, s = math.cos(rotation), math.sin(rotation)
            points = points @ np.array([[c, s], [-s, c]])
        value = const * float(sum(w * directional_derivative(omega, th) for th, w in zip(points, weights)))
        if d == 1 or (prev is not None and abs(value - prev) <= rel_tol * abs(value)):
            return PerimeterReport(value, omega.classical_perimeter())
        prev = value
    raise NumericError("sphere quadrature of V_theta did not settle", {"last": prev})


@dataclass(frozen=True)
class SecondDifference:
    value: float
    residual: float


def second_difference(rf: RFunction, theta, beta: float = 1.0, t0: float = RICHARDSON_T0,
                      levels: int = RICHARDSON_LEVELS, tol: float = 1e-6) -> SecondDifference:
    """R_β(θ) = lim t^{−β}(r(tθ) + r(−tθ) − 2r(0)) by Richardson extrapolation.

    Raises:
        NumericError: If the extrapolation residual exceeds `tol`, which signals
            that the β-Hölder second-difference bound may fail.
    """
    if not 1.0 <= beta < 2.0:
        raise ArgumentError(f"second difference needs β in [1, 2), got {beta}")
    theta = _unit(theta, rf.dimension)

    def f(t):
        pts = np.vstack([t * theta, -t * theta])
        vals = rf(pts)
        return (vals[0] + vals[1] - 2.0 * rf.r0) / t ** beta

    value, residual = _richardson(f, t0, levels)
    if residual > tol * max(abs(value), 1.0):
        raise NumericError("second difference does not settle; the β-bound may fail",
                           {"theta": theta.tolist(), "beta": beta, "value": value, "residual": residual})
    return SecondDifference(value, residual)


def gradient_at_zero(rf: RFunction) -> np.ndarray:
    """∇r(0), analytic when known, else by extrapolated central differences."""
    if rf.gradient0 is not None:
        return np.array(rf.gradient0)
    return _numeric_gradient(lambda p: rf(p), rf.dimension)
