"""Transition densities by Fourier inversion, limit densities and samplers.

Densities live on a centered lattice x_k = (k − n/2)·h, k = 0..n−1 per axis.
The inversion p(x) = (2π)^{−d}∫ e^{−i⟨x,ξ⟩} e^{−Ψ(ξ)} dξ is the trapezoid rule
on the dual lattice ξ_m = (m − n/2)·2π/(nh), evaluated with one FFT; the grid
therefore holds the periodized density and its mass is 1 up to rounding.
"""

import hashlib
import json
import logging
import math
from dataclasses import dataclass
from typing import Callable, Iterable, Optional, Tuple, Union

import numpy as np
import pandas as pd
from scipy import fft, interpolate

from .config import get_settings
from .errors import ArgumentError, NumericError, UnsupportedOperationError
from .levy_models import (
    AxesProduct,
    CombinedMeasure,
    FiniteMeasure,
    LevyMeasureDescriptor,
    LevyModel,
    RadialPowerLaw,
    ScalingLimit,
    SphericalDecomposition,
    characteristic_length,
    psi,
    psi_star,
    pruitt_h,
    sphere_area,
    sphere_power_moment,
    stable_constant,
)

# Configure module logging
logger = logging.getLogger(__name__)

GRID_CAPS = {1: 2 ** 21, 2: 2 ** 10, 3: 2 ** 7}
RINGING_FLOOR = -1e-10


@dataclass(frozen=True)
class GridSpec:
    """Centered lattice with n points per axis and spacing h."""
    n: int
    h: float
    dimension: int = 1

    def __post_init__(self):
        if self.n < 2 or self.n % 2:
            raise ArgumentError(f"grid size must be an even integer >= 2, got {self.n}")
        if self.h <= 0:
            raise ArgumentError("grid spacing must be positive")
        if self.dimension not in GRID_CAPS:
            raise ArgumentError(f"gridded inversion supports d <= 3, got d={self.dimension}")

    def axis(self) -> np.ndarray:
        return (np.arange(self.n) - self.n // 2) * self.h

    def frequency_axis(self) -> np.ndarray:
        return (np.arange(self.n) - self.n // 2) * (2.0 * np.pi / (self.n * self.h))

    @property
    def period(self) -> float:
        return self.n * self.h

    def as_dict(self) -> dict:
        return {"n": self.n, "h": self.h, "d": self.dimension}


@dataclass(frozen=True, eq=False)
class DensityGrid:
    """Tabulated density on a GridSpec lattice.

    `support_axis` marks a one-dimensional grid that lives on a coordinate axis
    of a higher-dimensional space (degenerate limit laws).
    """
    spec: GridSpec
    values: np.ndarray
    mass: float
    t: Optional[float] = None
    model: Optional[str] = None
    support_axis: Optional[int] = None
    ambient_dimension: Optional[int] = None
    aliasing_bound: float = 0.0

    def axis(self) -> np.ndarray:
        return self.spec.axis()

    def points(self) -> np.ndarray:
        """All lattice points as an (n^d, d) array (row-major over the axes)."""
        axes = [self.axis()] * self.spec.dimension
        mesh = np.meshgrid(*axes, indexing="ij")
        return np.stack([m.ravel() for m in mesh], axis=-1)

    def cell_volume(self) -> float:
        return self.spec.h ** self.spec.dimension

    def interpolate(self, x) -> np.ndarray:
        """Linear interpolation; zero outside the lattice."""
        x = np.atleast_2d(np.asarray(x, dtype=float))
        if self.spec.dimension == 1 and x.shape[0] == 1 and x.shape[1] != 1:
            x = x.T
        axes = tuple([self.axis()] * self.spec.dimension)
        interp = interpolate.RegularGridInterpolator(axes, self.values, bounds_error=False, fill_value=0.0)
        return interp(x)

    def integrate(self, func: Callable[[np.ndarray], np.ndarray]) -> float:
        """Σ f(x_k) p(x_k) h^d over the lattice."""
        vals = np.asarray(func(self.points()), dtype=float).reshape(self.values.shape)
        return float(np.sum(vals * self.values) * self.cell_volume())

    def cdf(self) -> np.ndarray:
        """Cumulative distribution at the lattice points (d=1, trapezoid)."""
        if self.spec.dimension != 1:
            raise UnsupportedOperationError("cdf is defined for one-dimensional grids")
        v = self.values
        cum = np.concatenate([[0.0], np.cumsum(0.5 * (v[1:] + v[:-1]) * self.spec.h)])
        return cum + 0.5 * (1.0 - self.mass)

    def to_csv(self, path: str) -> None:
        pts = self.points()
        cols = {("x" if pts.shape[1] == 1 else f"x{i + 1}"): pts[:, i] for i in range(pts.shape[1])}
        cols["p"] = self.values.ravel()
        pd.DataFrame(cols).to_csv(path, index=False, float_format="%.14g")


def _invert(exponent: Callable[[np.ndarray], np.ndarray], spec: GridSpec,
            threads: Optional[int] = None) -> np.ndarray:
    """Trapezoid Fourier inversion of e^{−exponent} on the dual lattice."""
    d = spec.dimension
    xi = spec.frequency_axis()
    dxi = xi[1] - xi[0]
    if d == 1:
        char = np.exp(-np.real(exponent(xi[:, None])))
    else:
        mesh = np.meshgrid(*([xi] * d), indexing="ij")
        pts = np.stack(mesh, axis=-1)
        char = np.exp(-np.real(exponent(pts.reshape(-1, d)))).reshape((spec.n,) * d)
    workers = threads if threads is not None else get_settings().THREADS
    values = fft.fftshift(fft.fftn(fft.ifftshift(char), workers=workers)).real
    return values * (dxi / (2.0 * np.pi)) ** d


def _finish(values: np.ndarray, spec: GridSpec, mass_tol: float, label: str) -> Tuple[np.ndarray, float]:
    worst = float(values.min())
    if worst < 0.0:
        if worst < RINGING_FLOOR:
            logger.warning(f"[DENSITY] {label}: negative ringing {worst:.3e} clipped")
        else:
            logger.debug(f"[DENSITY] {label}: ringing {worst:.3e} clipped")
        values = np.clip(values, 0.0, None)
    mass = float(values.sum() * spec.h ** spec.dimension)
    if abs(mass - 1.0) > mass_tol:
        raise NumericError(f"{label}: grid mass {mass:.10f} is off by more than {mass_tol}",
                           {"n": spec.n, "h": spec.h})
    return values, mass


def frequency_cutoff(model: LevyModel, t: float, cap: float = 1e12, length: float = 1.0) -> float:
    """Smallest dyadic R with tψ*(R / length) ≥ CUTOFF_EXPONENT.

    With `length` set the search runs in the frequencies of X_t / length.

    Raises:
        NumericError: If ψ grows too slowly for the requested t.
    """
    target = get_settings().CUTOFF_EXPONENT
    R = 1.0
    while t * psi_star(model, R / length) < target:
        R *= 2.0
        if R > cap:
            raise NumericError(
                "frequency cutoff search exceeded its cap; use a larger t or a closed-form family",
                {"t": t, "cap": cap, "length": length},
            )
    return R


def auto_grid(model: LevyModel, t: float, dimension: Optional[int] = None) -> GridSpec:
    """Spacing from the frequency cutoff, extent from the Pruitt tail estimate."""
    d = dimension or model.dimension
    R = frequency_cutoff(model, t)
    h = np.pi / R
    mass_tol = get_settings().MASS_TOL
    L = 8.0 * characteristic_length(model, t)
    while t * pruitt_h(model, L) > mass_tol and 2.0 * L / h < GRID_CAPS[d]:
        L *= 2.0
    n = int(2 ** math.ceil(math.log2(max(2.0 * L / h, 16.0))))
    if n > GRID_CAPS[d]:
        logger.warning(f"[DENSITY] Grid for t={t:g} capped at n={GRID_CAPS[d]} (wanted {n})")
        n = GRID_CAPS[d]
    return GridSpec(n, h, d)


def density_cache_key(model: LevyModel, t: float, spec: GridSpec, length: float = 1.0) -> str:
    payload = json.dumps({"model": model.fingerprint(), "t": repr(float(t)), "grid": spec.as_dict(),
                          "length": repr(float(length))},
                         sort_keys=True)
    return hashlib.sha256(payload.encode()).hexdigest()


def transition_density(model: LevyModel, t: float, spec: Optional[GridSpec] = None,
                       cache=None, length: float = 1.0) -> DensityGrid:
    """Density of X_t / length on a lattice by Fourier inversion of e^{−tψ}.

    Args:
        model: Symmetric Lévy model with ψ growing faster than log.
        t: Time, t > 0.
        spec: Lattice; chosen automatically when omitted.
        cache: Optional DensityCache consulted before inverting.
        length: Spatial unit; the grid holds the density of X_t/length.

    Returns:
        DensityGrid: Tabulated density with mass and aliasing metadata.

    Raises:
        UnsupportedOperationError: For non-symmetric models.
        NumericError: If the cutoff search fails or the mass check fails.
    """
    if t <= 0:
        raise ArgumentError(f"transition density needs t > 0, got {t}")
    if not model.is_symmetric():
        raise UnsupportedOperationError("densities of non-symmetric models are not inverted")
    if model.dimension > 3:
        raise UnsupportedOperationError("gridded inversion is limited to d <= 3")
    if spec is None:
        base = auto_grid(model, t)
        spec = GridSpec(base.n, base.h / length, model.dimension)
    key = None
    if cache is not None:
        key = density_cache_key(model, t, spec, length)
        hit = cache.load(key)
        if hit is not None:
            return DensityGrid(spec, hit, float(hit.sum() * spec.h ** spec.dimension), t, model.fingerprint())
    values = _invert(lambda xi: t * psi(model, xi / length), spec)
    values, mass = _finish(values, spec, get_settings().MASS_TOL, f"p_t(t={t:g})")
    tail = min(1.0, t * pruitt_h(model, 0.5 * spec.period * length))
    if cache is not None:
        cache.store(key, values)
    logger.debug(f"[DENSITY] Inverted t={t:g} on n={spec.n}, h={spec.h:.4g}; aliasing<={tail:.2e}")
    return DensityGrid(spec, values, mass, t, model.fingerprint(), aliasing_bound=tail)


def p_lambda(Lambda: Union[float, Callable[[np.ndarray], np.ndarray], ScalingLimit], alpha: float,
             spec: GridSpec) -> DensityGrid:
    """Density with characteristic function exp(−Λ(ξ/‖ξ‖)‖ξ‖^α)."""
    if not 0.0 < alpha <= 2.0:
        raise ArgumentError(f"limit index must lie in (0, 2], got {alpha}")
    if isinstance(Lambda, ScalingLimit):
        exponent = Lambda.limit_exponent
    else:
        lam = Lambda if callable(Lambda) else (lambda th, c=float(Lambda): np.full(np.shape(th)[:-1], c))
        limit = ScalingLimit(V=None, alpha=alpha, Lambda=lam)
        exponent = limit.limit_exponent
    values = _invert(exponent, spec)
    values, mass = _finish(values, spec, get_settings().MASS_TOL, "p_Lambda")
    return DensityGrid(spec, values, mass, t=1.0)


def eta_exponent_scale(eta: AxesProduct, axis: int) -> float:
    """c' with ∫(1 − cos ξ y) η_axis(dy) = c'|ξ|^ρ on one support axis."""
    return 2.0 * eta.constants[axis] * stable_constant(eta.alphas[axis])


def p_eta(eta: LevyMeasureDescriptor, spec: GridSpec) -> DensityGrid:
    """Density with characteristic function exp(−∫(1 − cos⟨ξ,y⟩) η(dy)).

    Axis-supported η with a single support axis yields a one-dimensional grid
    marked with that axis; `spec` is then read as a one-dimensional lattice.
    """
    if isinstance(eta, AxesProduct):
        axes = eta.support_axes()
        if len(axes) == 1:
            axis = axes[0]
            scale = eta_exponent_scale(eta, axis)
            rho = eta.alphas[axis]
            line = GridSpec(spec.n, spec.h, 1)
            values = _invert(lambda xi: scale * np.abs(xi[..., 0]) ** rho, line)
            values, mass = _finish(values, line, get_settings().MASS_TOL, "p_eta")
            return DensityGrid(line, values, mass, t=1.0, support_axis=axis,
                               ambient_dimension=eta.dimension)
    if isinstance(eta, (AxesProduct, RadialPowerLaw, SphericalDecomposition)):
        if spec.dimension != eta.dimension:
            raise ArgumentError("grid dimension does not match η")
        values = _invert(lambda xi: np.real(eta.exponent(xi)), spec)
        values, mass = _finish(values, spec, get_settings().MASS_TOL, "p_eta")
        return DensityGrid(spec, values, mass, t=1.0)
    raise UnsupportedOperationError(f"no limit density for η of kind {type(eta).__name__}")


def rescaled_density_check(model: LevyModel, limit: ScalingLimit, t_grid: Iterable[float],
                           spec: GridSpec) -> pd.DataFrame:
    """sup_x |p_t(x/V⁻(1/t))/V⁻(1/t)^d − p_Λ(x)| per t, on a common lattice.

    The density of V⁻(1/t)·X_t has exponent tψ(ξ·V⁻(1/t)), so both densities
    are inverted on the same lattice and compared pointwise.
    """
    reference = p_lambda(limit, limit.alpha, spec)
    rows = []
    for t in t_grid:
        scale = limit.inverse(1.0 / t)
        values = _invert(lambda xi, t=t, s=scale: t * psi(model, xi * s), spec)
        rows.append({"t": t, "scale": scale, "sup_error": float(np.max(np.abs(values - reference.values)))})
    report = pd.DataFrame(rows, columns=["t", "scale", "sup_error"])
    logger.info(f"[DENSITY] Rescaled density check: {report['sup_error'].round(10).tolist()}")
    return report


def p0_ratio_diagnostic(model: LevyModel, limit: ScalingLimit, t_grid: Iterable[float],
                        n: int = 4096) -> pd.DataFrame:
    """p_t(0)·V⁻(1/t)^{−d} over a t-sweep (bounded if the upper density bound holds)."""
    d = model.dimension
    rows = []
    for t in t_grid:
        R = frequency_cutoff(model, t)
        m = n if d == 1 else min(n, GRID_CAPS[d])
        xi = np.linspace(-R, R, m + 1)
        dxi = xi[1] - xi[0]
        if d == 1:
            vals = np.exp(-t * np.real(psi(model, xi[:, None])))
        else:
            mesh = np.stack(np.meshgrid(*([xi] * d), indexing="ij"), axis=-1).reshape(-1, d)
            vals = np.exp(-t * np.real(psi(model, mesh)))
        p0 = float(vals.sum() * dxi ** d / (2.0 * np.pi) ** d)
        scale = limit.inverse(1.0 / t)
        rows.append({"t": t, "p0": p0, "ratio": p0 / scale ** d})
    return pd.DataFrame(rows, columns=["t", "p0", "ratio"])


# -- samplers -------------------------------------------------------------

def _symmetric_stable(rng: np.random.Generator, alpha: float, size) -> np.ndarray:
    """Standard symmetric stable, E e^{iξS} = e^{−|ξ|^α} (Chambers–Mallows–Stuck, β=0)."""
    V = rng.uniform(-np.pi / 2.0, np.pi / 2.0, size)
    if alpha == 2.0:
        return np.sqrt(2.0) * rng.standard_normal(size)
    if alpha == 1.0:
        return np.tan(V)
    W = rng.exponential(1.0, size)
    return (np.sin(alpha * V) / np.cos(V) ** (1.0 / alpha)
            * (np.cos(V - alpha * V) / W) ** ((1.0 - alpha) / alpha))


def _positive_stable(rng: np.random.Generator, a: float, size) -> np.ndarray:
    """Positive a-stable, E e^{−uA} = e^{−u^a}, 0 < a < 1 (Kanter)."""
    U = rng.uniform(0.0, np.pi, size)
    E = rng.exponential(1.0, size)
    return (np.sin(a * U) / np.sin(U) ** (1.0 / a)) * (np.sin((1.0 - a) * U) / E) ** ((1.0 - a) / a)


def _isotropic_stable(rng: np.random.Generator, alpha: float, d: int, count: int) -> np.ndarray:
    """E e^{i⟨ξ,X⟩} = e^{−‖ξ‖^α}: sub-Gaussian mixture √(2A)·G for d > 1."""
    if d == 1:
        return _symmetric_stable(rng, alpha, (count, 1))
    G = rng.standard_normal((count, d))
    if alpha == 2.0:
        return np.sqrt(2.0) * G
    A = _positive_stable(rng, alpha / 2.0, count)
    return np.sqrt(2.0 * A)[:, None] * G


def _axis_key(theta) -> tuple:
    """Direction up to sign: first nonzero coordinate made positive."""
    v = np.asarray(theta, dtype=float)
    lead = v[np.flatnonzero(np.abs(v) > 1e-12)[0]]
    return tuple(np.round(v * np.sign(lead), 12))


def _sample_polar(rng, measure, t: float, count: int) -> np.ndarray:
    d = measure.dimension
    if isinstance(measure, RadialPowerLaw):
        scale = t * measure.exponent_scale()
        return scale ** (1.0 / measure.alpha) * _isotropic_stable(rng, measure.alpha, d, count)
    if isinstance(measure, AxesProduct):
        out = np.zeros((count, d))
        for i, (a, c) in enumerate(zip(measure.alphas, measure.constants)):
            if c > 0:
                out[:, i] = (t * 2.0 * c * stable_constant(a)) ** (1.0 / a) * _symmetric_stable(rng, a, count)
        return out
    if isinstance(measure, SphericalDecomposition) and measure.profile.is_power:
        alpha = measure.profile.alpha
        sphere = measure.sphere
        if sphere.is_uniform:
            scale = t * sphere.mass / sphere_area(d) * stable_constant(alpha) * sphere_power_moment(d, alpha)
            return scale ** (1.0 / alpha) * _isotropic_stable(rng, alpha, d, count)
        if alpha < 1.0:
            # one-sided stable amplitude per atom, uncompensated
            out = np.zeros((count, d))
            for theta, w in zip(sphere.directions, sphere.weights):
                amp = (w * math.gamma(1.0 - alpha) * t / alpha) ** (1.0 / alpha)
                out += amp * _positive_stable(rng, alpha, count)[:, None] * np.array(theta)
            return out
        if sphere.is_symmetric():
            out = np.zeros((count, d))
            seen = set()
            for theta, w in zip(sphere.directions, sphere.weights):
                key = _axis_key(theta)
                if key in seen:
                    continue
                seen.add(key)
                amp = (2.0 * w * stable_constant(alpha) * t) ** (1.0 / alpha)
                out += amp * _symmetric_stable(rng, alpha, count)[:, None] * np.array(theta)
            return out
    raise UnsupportedOperationError(f"no sampler for Lévy measure {type(measure).__name__}")


def _sample_compound(rng, jumps: FiniteMeasure, t: float, count: int) -> np.ndarray:
    counts = rng.poisson(jumps.total_mass() * t, count)
    out = np.zeros((count, jumps.dimension))
    total = int(counts.sum())
    if total:
        draws = jumps.sample(rng, total)
        owner = np.repeat(np.arange(count), counts)
        np.add.at(out, owner, draws)
    return out


def sample_increments(model: LevyModel, t: float, rng: np.random.Generator, count: int) -> np.ndarray:
    """`count` independent draws of X_t as a (count, d) array.

    Raises:
        UnsupportedOperationError: If the family has no sampler.
    """
    d = model.dimension
    out = np.zeros((count, d))
    if model.gaussian > 0:
        out += np.sqrt(2.0 * model.gaussian * t) * rng.standard_normal((count, d))
    nu = model.measure
    compensator = np.zeros(d)
    if nu is not None:
        base = nu.base if isinstance(nu, CombinedMeasure) else nu
        jumps = nu.finite_part()
        if not isinstance(base, FiniteMeasure):
            if not base.is_symmetric() and not base.admits_beta(1.0):
                raise UnsupportedOperationError("asymmetric infinite-variation jumps are not sampled")
            out += _sample_polar(rng, base, t, count)
            if not base.is_symmetric():
                compensator += base.first_moment(0.0, np.nextafter(1.0, 2.0))
        if jumps is not None:
            out += _sample_compound(rng, jumps, t, count)
            compensator += jumps.first_moment(0.0, np.nextafter(1.0, 2.0))
    out += t * (np.array(model.gamma) - compensator)
    return out


def sample_increment(model: LevyModel, t: float, rng: np.random.Generator) -> np.ndarray:
    """One draw of X_t (for IsotropicStable, X_t has the law of t^{1/α}X_1)."""
    return sample_increments(model, t, rng, 1)[0]
