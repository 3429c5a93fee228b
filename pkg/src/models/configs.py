"""
Validated configuration values passed to the geometry kernels
"""
import math
from dataclasses import dataclass

from core.exceptions.handlers import ConfigurationError, InvalidCountError
from models.enums import CodecDefaults


@dataclass(frozen=True)
class SamplingBandConfig:
    """Heaviside band of distance transform sampling: g(D) = 1 iff D <= delta"""
    delta: float = CodecDefaults.DELTA

    def __post_init__(self):
        if math.isnan(self.delta) or self.delta < 0:
            raise ConfigurationError(f"delta must be non-negative, got {self.delta}", field="delta")

    def widened(self) -> "SamplingBandConfig":
        return SamplingBandConfig(delta=self.delta * 2.0)


@dataclass(frozen=True)
class GridSpec:
    """s x s lattice spanning a box of width alpha and height beta"""
    alpha: float
    beta: float
    n: int

    def __post_init__(self):
        if not (self.alpha > 0 and self.beta > 0):
            raise ConfigurationError(
                f"grid scales must be positive, got alpha={self.alpha}, beta={self.beta}",
                field="alpha/beta"
            )
        side = math.isqrt(self.n) if self.n >= 0 else 0
        if side < 2 or side * side != self.n:
            raise InvalidCountError(
                f"grid sampling needs a perfect square n = s*s with s >= 2, got {self.n}",
                count=self.n
            )

    @property
    def side(self) -> int:
        return math.isqrt(self.n)

    @classmethod
    def for_box(cls, box, n: int) -> "GridSpec":
        """Fix alpha, beta to the box extents"""
        return cls(alpha=box.width, beta=box.height, n=n)


@dataclass(frozen=True)
class DecodeConfig:
    """Score threshold and concave hull neighbour count"""
    tau: float = CodecDefaults.TAU
    hull_k: int = CodecDefaults.HULL_K

    def __post_init__(self):
        if not 0.0 < self.tau < 1.0:
            raise ConfigurationError(f"tau must lie in (0, 1), got {self.tau}", field="tau")
        if self.hull_k < 3:
            raise ConfigurationError(f"hull_k must be at least 3, got {self.hull_k}", field="hull_k")


@dataclass(frozen=True)
class GroupPoolConfig:
    """Number of index groups for group pooling"""
    k: int = CodecDefaults.GROUPS

    def __post_init__(self):
        if self.k < 1:
            raise ConfigurationError(f"group count must be at least 1, got {self.k}", field="k")
