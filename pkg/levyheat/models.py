"""Pydantic models for levyheat.

Defines the scenario file schema and the application settings. Numerical types
(Lévy models, geometries, density grids) live next to the code that uses them.
"""

from typing import List, Literal, Optional

from pydantic import BaseModel, ConfigDict, Field, model_validator


class StrictModel(BaseModel):
    """Base model rejecting unknown keys."""
    model_config = ConfigDict(extra="forbid")


class SphereSection(StrictModel):
    """Finite measure on the unit sphere."""
    kind: Literal["uniform", "atoms"]
    mass: Optional[float] = Field(default=None, gt=0)
    directions: Optional[List[List[float]]] = None
    weights: Optional[List[float]] = None


class JumpSection(StrictModel):
    """Finite jump measure: weighted atoms, or a uniform density on an interval (d=1)."""
    atoms: Optional[List[List[float]]] = None
    weights: Optional[List[float]] = None
    low: Optional[float] = None
    high: Optional[float] = None
    mass: Optional[float] = Field(default=None, gt=0)


class ProcessSection(StrictModel):
    """Lévy process family and its parameters."""
    family: Literal[
        "isotropic_stable",
        "brownian",
        "spherical_stable_like",
        "product_of_stables",
        "compound_poisson",
        "finite_variation",
    ]
    dimension: int = Field(ge=1, le=3)
    alpha: Optional[float] = None
    scale: Optional[float] = None
    levy_constant: Optional[float] = None
    lam: Optional[float] = None
    alphas: Optional[List[float]] = None
    scales: Optional[List[float]] = None
    sphere: Optional[SphereSection] = None
    log_exponent: Optional[float] = None
    drift: Optional[List[float]] = None
    jumps: Optional[JumpSection] = None


class GeometrySection(StrictModel):
    """Finite-measure open set."""
    kind: Literal["ball", "box", "annulus", "union"]
    center: Optional[List[float]] = None
    radius: Optional[float] = None
    half_widths: Optional[List[float]] = None
    r_in: Optional[float] = None
    r_out: Optional[float] = None
    components: Optional[List["GeometrySection"]] = None


GeometrySection.model_rebuild()


class DataSection(StrictModel):
    """Initial data selectors: g is the indicator of the scenario geometry."""
    g: Literal["indicator"]
    g_scale: float = Field(default=1.0, gt=0)
    mu: Literal["lebesgue", "lebesgue_other", "gaussian"]
    mu_geometry: Optional[GeometrySection] = None

    @model_validator(mode="after")
    def _check_mu_geometry(self) -> "DataSection":
        if self.mu == "lebesgue_other" and self.mu_geometry is None:
            raise ValueError("mu 'lebesgue_other' requires mu_geometry")
        if self.mu != "lebesgue_other" and self.mu_geometry is not None:
            raise ValueError("mu_geometry is only allowed with mu 'lebesgue_other'")
        return self


class SweepSection(StrictModel):
    """Time grid and estimator settings."""
    t_max: float = Field(gt=0)
    t_min: float = Field(gt=0)
    points: int = Field(default=12, ge=2)
    estimator: Literal["quadrature", "monte_carlo", "both"]
    n: int = Field(default=100_000, ge=1000)
    seed: int = 0

    @model_validator(mode="after")
    def _check_order(self) -> "SweepSection":
        if self.t_min >= self.t_max:
            raise ValueError("t_min must be smaller than t_max")
        return self


class LawSection(StrictModel):
    """Governing theorem and convergence tolerance."""
    theorem: Literal[
        "t1_case1",
        "t1_case2i",
        "t1_case2ii",
        "ex1",
        "t2",
        "corollary1",
        "t3",
        "ex2_case1",
        "ex2_case2",
        "ex5_radial",
        "ex5_rectangle",
    ]
    beta: float = Field(ge=0, lt=2)
    tolerance: Optional[float] = Field(default=None, gt=0)
    normalization: Literal["tail", "exponent"] = "exponent"


class OutputSection(StrictModel):
    """Where artifacts are written."""
    directory: str


class ScenarioFile(StrictModel):
    """Complete scenario document."""
    process: ProcessSection
    geometry: GeometrySection
    data: DataSection
    sweep: SweepSection
    law: LawSection
    output: Optional[OutputSection] = None


class Settings(BaseModel):
    """Application configuration settings (numerical tolerances only)."""
    PROJECT_NAME: str = "levyheat"
    MASS_TOL: float = 1e-6
    PSI_STAR_REL_TOL: float = 1e-6
    INVERSE_ABS_TOL: float = 1e-12
    SHELL_REL_TOL: float = 1e-12
    LIMIT_REL_TOL: float = 1e-6
    PASS_REL_TOL: float = 0.02
    CUTOFF_EXPONENT: float = 37.0
    QUAD_TAIL_TOL: float = 5e-3
    MC_BATCH: int = 1_000_000
    CACHE_PATH: str = "data/density_cache.db"
    THREADS: int = 4
    LOG_CONFIG: str = "logging.yaml"
    LOG_LEVEL: str = "INFO"
