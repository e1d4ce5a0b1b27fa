"""Discrete homogeneous dyadic-block norms of radial profiles.

The norm is the l^q sum over j of 2^(j s) ||P_j f||_{L^p(R^n)} with the band
projections P_j built from this package's smooth cutoff family, over a finite
dyadic range.  Truncated spectral mass is reported via a warning so callers
can bound its effect.
"""

from __future__ import annotations

import math
import warnings

import numpy as np

from .errors import DomainError, SpectralLeakageWarning
from .freq import (DyadicBand, RadialProfile, band_block, band_grid,
                   build_cutoff, lp_norm_radial)

__all__ = ["BesovSpec", "besov_norm", "lq_monotonicity_check"]

from dataclasses import dataclass


@dataclass(frozen=True)
class BesovSpec:
    """Regularity s, integrability p, summability q, dyadic range [j_min, j_max]."""

    s: float
    p: float
    q: float
    j_min: int = -12
    j_max: int = 12

    def __post_init__(self):
        if self.j_min > self.j_max:
            raise DomainError("j_min must not exceed j_max")
        if self.p < 1 or self.q < 1:
            raise DomainError("p and q must be >= 1")


def _leakage_fraction(f: RadialProfile, lo: float, hi: float) -> float:
    """Rough spectral-mass fraction outside [lo, hi] (L^2 weight)."""
    if f.hat_func is None:
        return 0.0
    inside = np.geomspace(lo, hi, 600)
    below = np.geomspace(lo * 1e-4, lo, 120)
    above = np.geomspace(hi, hi * 16.0, 160)

    def mass(rho):
        vals = np.abs(np.asarray(f.hat_func(rho), dtype=complex)) ** 2
        return float(np.trapezoid(vals * rho ** (f.n - 1), rho))

    m_in = mass(inside)
    m_out = mass(below) + mass(above)
    total = m_in + m_out
    return m_out / total if total > 0 else 0.0


def besov_norm(f: RadialProfile, spec: BesovSpec):
    """(norm, per-band table [(j, block L^p norm)]).

    Blocks are rendered on grids matched to their own scale 2^-j before the
    L^p integration; q = inf takes the max weighted block."""
    cut = build_cutoff()
    table = []
    weighted = []
    for j in range(spec.j_min, spec.j_max + 1):
        blk = band_block(f, DyadicBand(j), cut, out_radii=band_grid(j, f.n))
        bj = lp_norm_radial(blk, spec.p)
        table.append((j, bj))
        weighted.append(2.0 ** (j * spec.s) * bj)
    weighted = np.asarray(weighted)
    if math.isinf(spec.q):
        norm = float(weighted.max())
    else:
        norm = float(np.sum(weighted ** spec.q) ** (1.0 / spec.q))
    leak = _leakage_fraction(f, 2.0 ** (spec.j_min - 1), 2.0 ** (spec.j_max + 1))
    if leak > 1e-10:
        warnings.warn(
            f"spectral mass fraction {leak:.2e} lies outside the dyadic range "
            f"[{spec.j_min}, {spec.j_max}]",
            SpectralLeakageWarning,
        )
    return norm, table


def lq_monotonicity_check(f: RadialProfile, s: float, p: float,
                          q1: float, q2: float) -> dict:
    """l^q monotonicity of the dyadic norm: q1 <= q2 implies norm_q2 <= norm_q1."""
    if q1 > q2:
        raise DomainError("need q1 <= q2")
    n1, _ = besov_norm(f, BesovSpec(s=s, p=p, q=q1))
    n2, _ = besov_norm(f, BesovSpec(s=s, p=p, q=q2))
    ok = n2 <= n1 * (1.0 + 1e-10)
    return {
        "check": "lq-monotonicity",
        "params": {"s": s, "p": p, "q1": q1, "q2": q2},
        "pass": bool(ok),
        "metrics": {"norm_q1": n1, "norm_q2": n2},
    }
