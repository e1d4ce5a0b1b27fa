"""Run configuration: one serializable object describing an equation instance,
the sweep grids, and the tolerances.

Configs round-trip losslessly through JSON (floats are emitted with repr
semantics), so a saved manifest reproduces a run byte-for-byte.
"""

from __future__ import annotations

import json
import math
from dataclasses import asdict, dataclass, field

import numpy as np

from .errors import DomainError
from .kernel import KernelSpec

__all__ = ["GridSpec", "RunConfig", "DEFAULT_TOLERANCES"]


DEFAULT_TOLERANCES = {
    "quadrature": 1e-8,
    "branch_agreement": 1e-6,
    "t_slope": 0.05,
    "n_slope": 0.10,
    "subcritical_slope": 0.03,
    "sharpness_spread": 10.0,
    "ratio_spread": 100.0,
    "ode_residual": 1e-3,
    "lp_rate": 0.03,
}


@dataclass(frozen=True)
class GridSpec:
    """Log- or linearly-spaced 1-d grid."""

    start: float
    stop: float
    points: int
    scale: str = "log"

    def __post_init__(self):
        if self.points < 1:
            raise DomainError("grid needs at least one point")
        if self.scale not in ("log", "linear"):
            raise DomainError(f"unknown grid scale {self.scale!r}")
        if self.scale == "log" and not 0 < self.start <= self.stop:
            raise DomainError("log grid needs 0 < start <= stop")

    def values(self) -> np.ndarray:
        if self.points == 1:
            return np.array([self.start])
        if self.scale == "log":
            return np.geomspace(self.start, self.stop, self.points)
        return np.linspace(self.start, self.stop, self.points)


@dataclass
class RunConfig:
    """Everything one invocation needs; flag overrides win over file values."""

    n: int = 1
    alpha: float = 0.5
    beta: float = 1.0
    normalization: str = "paper-unnormalized"
    t_grid: GridSpec = field(default_factory=lambda: GridSpec(1e2, 1e4, 9))
    band_j_min: int = 0
    band_j_max: int = 4
    x_points: int = 512
    x_span: tuple = (1e-3, 1e2)
    dyadic_j_min: int = -8
    dyadic_j_max: int = 8
    tolerances: dict = field(default_factory=dict)
    out_dir: str = "out"
    threads: int = 1
    deterministic: bool = True

    def __post_init__(self):
        merged = dict(DEFAULT_TOLERANCES)
        merged.update(self.tolerances)
        self.tolerances = merged

    def kernel_spec(self) -> KernelSpec:
        return KernelSpec(n=self.n, alpha=self.alpha, beta=self.beta,
                          normalization=self.normalization)

    def band_values(self) -> list:
        return [2.0 ** j for j in range(self.band_j_min, self.band_j_max + 1)]

    # -- serialization -------------------------------------------------------

    def to_dict(self) -> dict:
        d = asdict(self)
        d["t_grid"] = asdict(self.t_grid)
        d["x_span"] = list(self.x_span)
        return d

    @classmethod
    def from_dict(cls, d: dict) -> "RunConfig":
        d = dict(d)
        if "t_grid" in d and isinstance(d["t_grid"], dict):
            d["t_grid"] = GridSpec(**d["t_grid"])
        if "x_span" in d:
            d["x_span"] = tuple(d["x_span"])
        return cls(**d)

    def to_json(self) -> str:
        return json.dumps(self.to_dict(), sort_keys=True, indent=2) + "\n"

    @classmethod
    def from_json(cls, text: str) -> "RunConfig":
        return cls.from_dict(json.loads(text))

    def __eq__(self, other):
        if not isinstance(other, RunConfig):
            return NotImplemented
        a, b = self.to_dict(), other.to_dict()

        def eq(u, v):
            if isinstance(u, float) and isinstance(v, float):
                return (u == v) or (math.isnan(u) and math.isnan(v))
            return u == v

        return all(eq(a[k], b[k]) for k in a) and a.keys() == b.keys()
