"""
Experiment configuration schemas.
"""

from pydantic import BaseModel, ConfigDict, Field, field_validator, model_validator

from erasefl.models.aggregation import SchemeKind
from erasefl.models.channel import Regime
from erasefl.models.learning import FeatureBasis

ALPHA_TOLERANCE = 1e-12


class ChannelConfig(BaseModel):
    """Uplink link budget as written in a config file."""
    gamma0_db: float = Field(..., description="Average transmit SNR in dB")
    k_bits: int = Field(100, ge=1, description="Message length in bits")
    rate: float = Field(..., gt=0, le=1, description="Code rate R = k/n")
    regime: Regime = Field(Regime.SHORT_PACKET, description="Short- or long-packet erasure model")
    forced_erasure: float | None = Field(
        None, ge=0, le=1, description="Pin every user's erasure probability (diagnostics)"
    )

    model_config = ConfigDict(extra="forbid")


class LearnerConfig(BaseModel):
    """Local gradient-descent settings."""
    eta: float = Field(0.05, gt=0, description="Learning rate")
    local_iterations: int = Field(1, ge=1, description="GD steps per round")

    model_config = ConfigDict(extra="forbid")


class FeatureConfig(BaseModel):
    """Polynomial feature map settings."""
    degree: int = Field(2, ge=0, description="Polynomial degree")
    basis: FeatureBasis = Field(FeatureBasis.LEGENDRE, description="Polynomial basis")

    model_config = ConfigDict(extra="forbid")


class DatasetConfig(BaseModel):
    """Non-i.i.d. regression data generator settings."""
    samples_per_user: int = Field(100, ge=1, description="D_u for every user")
    dataset_sizes: list[int] | None = Field(None, description="Per-user D_u, overrides samples_per_user")
    interval_width: float = Field(1.0, gt=0, description="Width of each user's input interval")
    noise_variance: float = Field(5.0, ge=0, description="Variance of the additive label noise")

    model_config = ConfigDict(extra="forbid")

    @field_validator("dataset_sizes")
    @classmethod
    def validate_sizes_positive(cls, v: list[int] | None) -> list[int] | None:
        """Validate that every per-user size is positive."""
        if v is not None and any(size < 1 for size in v):
            raise ValueError("every dataset size must be at least 1")
        return v


class SchemeConfig(BaseModel):
    """Aggregation scheme at the central node."""
    kind: SchemeKind = Field(..., description="Aggregation scheme")
    memory_depth: int = Field(1, ge=1, description="Global parameters kept (global_memory only)")
    alphas: list[float] | None = Field(None, description="History weights, most recent first")

    model_config = ConfigDict(extra="forbid")

    @model_validator(mode="after")
    def validate_alphas(self) -> "SchemeConfig":
        """Default alphas to equal weights and check they form a distribution."""
        if self.kind != SchemeKind.GLOBAL_MEMORY:
            if self.alphas is not None:
                raise ValueError("alphas only apply to the global_memory scheme")
            return self
        if self.alphas is None:
            self.alphas = [1.0 / self.memory_depth] * self.memory_depth
        if len(self.alphas) != self.memory_depth:
            raise ValueError(
                f"expected {self.memory_depth} alphas, got {len(self.alphas)}"
            )
        if any(a < 0 for a in self.alphas):
            raise ValueError("alphas must be nonnegative")
        if abs(sum(self.alphas) - 1.0) > ALPHA_TOLERANCE:
            raise ValueError(f"alphas must sum to 1, got {sum(self.alphas)!r}")
        return self

    @property
    def depth(self) -> int:
        """Memory depth written to result files (0 without a global cache)."""
        return self.memory_depth if self.kind == SchemeKind.GLOBAL_MEMORY else 0

    @property
    def label(self) -> str:
        if self.kind == SchemeKind.GLOBAL_MEMORY:
            return f"{self.kind.value}_m{self.memory_depth}"
        return self.kind.value

    def with_depth(self, memory_depth: int) -> "SchemeConfig":
        """Same scheme at another depth with equal weights."""
        return SchemeConfig(kind=self.kind, memory_depth=memory_depth)


class ExperimentBase(BaseModel):
    """Fields shared by single-scheme experiments and run files."""
    name: str = Field("experiment", description="Experiment name")
    num_users: int = Field(..., ge=1, description="Number of devices U")
    dataset: DatasetConfig = Field(default_factory=DatasetConfig)
    features: FeatureConfig = Field(default_factory=FeatureConfig)
    learner: LearnerConfig = Field(default_factory=LearnerConfig)
    channel: ChannelConfig
    time_budget: int | None = Field(None, ge=1, description="Budget in symbol durations")
    num_rounds: int | None = Field(None, ge=1, description="Round cap")
    replicas: int = Field(100, ge=1, description="Monte Carlo replicas")
    base_seed: int = Field(0, ge=0, lt=2**64, description="Seed of replica 0's streams")
    trailing_window: int = Field(50, ge=2, description="Rounds used for fluctuation statistics")

    model_config = ConfigDict(extra="forbid")

    @model_validator(mode="after")
    def validate_duration_and_sizes(self):
        """Validate the round budget and the per-user dataset sizes."""
        if self.time_budget is None and self.num_rounds is None:
            raise ValueError("either time_budget or num_rounds must be set")
        sizes = self.dataset.dataset_sizes
        if sizes is not None and len(sizes) != self.num_users:
            raise ValueError(
                f"dataset_sizes lists {len(sizes)} users but num_users is {self.num_users}"
            )
        return self

    def dataset_sizes(self) -> list[int]:
        if self.dataset.dataset_sizes is not None:
            return list(self.dataset.dataset_sizes)
        return [self.dataset.samples_per_user] * self.num_users


class ExperimentConfig(ExperimentBase):
    """Full description of one experiment (one scheme)."""
    scheme: SchemeConfig


class RunConfig(ExperimentBase):
    """Run file: one experiment description evaluated under several schemes."""
    schemes: list[SchemeConfig] = Field(..., min_length=1)

    @model_validator(mode="before")
    @classmethod
    def accept_single_scheme(cls, data):
        """Accept `scheme:` as shorthand for a one-element `schemes:` list."""
        if isinstance(data, dict) and "scheme" in data:
            if "schemes" in data:
                raise ValueError("give either scheme or schemes, not both")
            data = dict(data)
            data["schemes"] = [data.pop("scheme")]
        return data

    def experiments(self) -> list[ExperimentConfig]:
        base = self.model_dump(exclude={"schemes", "sweep"})
        return [ExperimentConfig(**base, scheme=scheme) for scheme in self.schemes]


class SweepSpec(BaseModel):
    """Grid axes for a rate / SNR / memory-depth sweep."""
    rates: list[float] = Field(..., min_length=1, description="Code rates R")
    gamma0_db: list[float] = Field(..., min_length=1, description="Average SNRs in dB")
    memory_depths: list[int] | None = Field(None, description="Memory depths m (global_memory only)")
    time_budget: int | None = Field(None, ge=1, description="Fixed budget in symbol durations")

    model_config = ConfigDict(extra="forbid")

    @field_validator("rates")
    @classmethod
    def validate_rates(cls, v: list[float]) -> list[float]:
        """Validate that every rate lies in (0, 1]."""
        if any(not 0 < r <= 1 for r in v):
            raise ValueError("rates must lie in (0, 1]")
        return v

    @field_validator("memory_depths")
    @classmethod
    def validate_depths(cls, v: list[int] | None) -> list[int] | None:
        """Validate a nonempty list of positive depths."""
        if v is not None and (not v or any(m < 1 for m in v)):
            raise ValueError("memory_depths must be a nonempty list of positive integers")
        return v


class SweepConfig(RunConfig):
    """Sweep file: a run description plus the grid to sweep."""
    sweep: SweepSpec
