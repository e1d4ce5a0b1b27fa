"""Fundamental-solution kernels of the fractional-dispersive equation family.

All kernels are radial; the full kernel is computed in self-similar variables

    K_t(x) = t^(-n alpha / beta) * Khat(x t^(-alpha/beta)),
    Khat(eta) = c_n * int_0^inf E_alpha(-i rho^beta) rho^(n-1) Omega_n(rho eta) drho,

with c_n = (2 pi)^(n/2) under the unnormalized plane-wave convention.  The
infinite tail substitutes the algebraic expansion of E_alpha and integrates
each power against Omega_n in closed form (oscillatory integration by parts),
so the quadrature range stays finite while the committed tail bound is
reported in the sample diagnostics.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .errors import DomainError, QuadratureError
from .freq import CutoffProfile, DyadicBand, build_cutoff
from .quadrature import (FilonPlan, bessel_power_tail, log_breaks, panel_nodes,
                         refine_breaks_by_phase)
from .specfun import (asymptotic_radius, ml_neg_imag_axis, omega_n_many,
                      recip_gamma)

__all__ = [
    "KernelSpec",
    "KernelSample",
    "QuadDiagnostics",
    "kernel_band",
    "kernel_band_profile",
    "kernel_full",
    "kernel_full_rescaled",
    "riesz_constant",
    "expansion_residual",
    "w1_eval",
    "sup_search",
    "prop13_split",
    "default_x_grid",
]

_TAIL_PHASE = 25.0  # A = R_cut * eta used for the closed-form tails


@dataclass(frozen=True)
class KernelSpec:
    """One equation instance: dimension, time order alpha, space order beta."""

    n: int
    alpha: float
    beta: float
    normalization: str = "paper-unnormalized"

    def __post_init__(self):
        if self.n < 1:
            raise DomainError("dimension n must be >= 1")
        if not 0 < self.alpha <= 1:
            raise DomainError("alpha must lie in (0, 1]")
        if not self.beta > 0:
            raise DomainError("beta must be positive")
        if self.normalization not in ("paper-unnormalized", "symmetric"):
            raise DomainError(f"unknown normalization {self.normalization!r}")

    @property
    def prefactor(self) -> float:
        if self.normalization == "paper-unnormalized":
            return (2.0 * math.pi) ** (self.n / 2.0)
        return 1.0

    @property
    def regime(self) -> str:
        return "subcritical" if self.beta > self.n else "critical-or-super"

    def resonance_order(self, tol: float = 1e-12):
        """m if beta = n/m for a positive integer m, else None."""
        m = self.n / self.beta
        mr = round(m)
        if mr >= 1 and abs(m - mr) < tol * max(1.0, m):
            return int(mr)
        return None


@dataclass(frozen=True)
class QuadDiagnostics:
    panels: int
    tail_bound: float
    est_error: float


@dataclass(frozen=True)
class KernelSample:
    t: float
    x_radius: float
    value: complex
    diagnostics: QuadDiagnostics


# ---------------------------------------------------------------------------
# Band-limited kernel
# ---------------------------------------------------------------------------

_BAND_BREAKS = np.array([0.5, 0.5625, 0.625, 0.75, 0.875, 1.0, 1.125, 1.25,
                         1.5, 1.75, 1.875, 2.0])


def _band_core_many(spec: KernelSpec, lam: float, ys: np.ndarray,
                    doubled: bool = False):
    """I(lam, y) = int_1/2^2 E_alpha(-i lam r^beta) psi(r) r^(n-1) Omega_n(r y) dr
    for an array of y >= 0.  Returns (values, panel_count)."""
    cut = build_cutoff()
    breaks = _BAND_BREAKS
    if spec.alpha == 1.0:
        # only the classical case oscillates in r; resolve exp(-i lam r^beta)
        rate = abs(lam) * spec.beta * 2.0 ** abs(spec.beta - 1.0)
        breaks = refine_breaks_by_phase(breaks, rate)
    if doubled:
        mids = 0.5 * (breaks[:-1] + breaks[1:])
        breaks = np.sort(np.concatenate([breaks, mids]))

    def integrand(r):
        ml = ml_neg_imag_axis(spec.alpha, lam * r ** spec.beta)
        return ml * cut.psi(0, r) * r ** (spec.n - 1)

    ys = np.asarray(ys, dtype=float)
    if spec.n == 1:
        plan = FilonPlan.build(breaks, ys)
        gv = integrand(plan.nodes.ravel()).reshape(plan.nodes.shape)
        return math.sqrt(2.0 / math.pi) * plan.integrate(gv), len(breaks) - 1
    ymax = float(ys.max()) if ys.size else 0.0
    breaks = refine_breaks_by_phase(breaks, ymax)
    nodes, weights = panel_nodes(breaks, 12)
    fv = integrand(nodes) * weights
    om = omega_n_many(spec.n, np.outer(ys, nodes))
    return om @ fv, len(breaks) - 1


def kernel_band_profile(spec: KernelSpec, t: float, band: DyadicBand,
                        x_radii, check: bool = False) -> np.ndarray:
    """Band kernel values at many radii (shared quadrature plan)."""
    if t < 0:
        raise DomainError("t must be >= 0")
    N = band.N
    lam = t ** spec.alpha * N ** spec.beta if t > 0 else 0.0
    ys = N * np.asarray(x_radii, dtype=float)
    core, npanels = _band_core_many(spec, lam, ys)
    if check:
        fine, _ = _band_core_many(spec, lam, ys, doubled=True)
        scale = np.max(np.abs(fine)) + 1e-300
        if np.max(np.abs(fine - core)) > 1e-8 * scale:
            raise QuadratureError("band kernel quadrature did not converge")
        core = fine
    return N ** spec.n * spec.prefactor * core


def kernel_band(spec: KernelSpec, t: float, band: DyadicBand,
                x_radius: float) -> KernelSample:
    """Kernel with spectrum restricted to the dyadic annulus of scale N = 2^j."""
    vals = kernel_band_profile(spec, t, band, np.array([x_radius]), check=True)
    mass = abs(kernel_band_profile(spec, t, band, np.array([0.0]))[0]) + 1e-300
    diag = QuadDiagnostics(panels=len(_BAND_BREAKS) - 1, tail_bound=0.0,
                           est_error=1e-8 * mass)
    return KernelSample(t=t, x_radius=float(x_radius), value=complex(vals[0]),
                        diagnostics=diag)


def default_x_grid(N: float, points: int = 512,
                   span: tuple[float, float] = (1e-3, 1e2)) -> np.ndarray:
    """Log-uniform radii in N|x| over span, plus x = 0."""
    return np.concatenate([[0.0], np.geomspace(span[0], span[1], points) / N])


def sup_search(spec: KernelSpec, t: float, band: DyadicBand,
               x_grid=None) -> tuple[float, float]:
    """Grid argmax of |band kernel|; returns (x*, max value)."""
    if x_grid is None:
        x_grid = default_x_grid(band.N)
    x_grid = np.asarray(x_grid, dtype=float)
    vals = np.abs(kernel_band_profile(spec, t, band, x_grid))
    i = int(np.argmax(vals))
    return float(x_grid[i]), float(vals[i])


def prop13_split(spec: KernelSpec, t: float, band: DyadicBand,
                 x_radius: float) -> tuple[complex, complex]:
    """Lower-bound decomposition of the band core integral I = I1 + I2.

    I2 carries the leading algebraic term of the multiplier,
    -i (lam r^beta)^-1 / Gamma(1-alpha); I1 is the remainder and is
    O(lam^-2) (O(lam^-3) when 1-2 alpha hits a Gamma pole).
    """
    N = band.N
    lam = t ** spec.alpha * N ** spec.beta
    y = N * x_radius
    cut = build_cutoff()
    lead = -1j * recip_gamma(1.0 - spec.alpha) / lam

    def base(r):
        return cut.psi(0, r) * r ** (spec.n - 1) * omega_n_many(spec.n, r * y)

    def f1(r):
        ml = ml_neg_imag_axis(spec.alpha, lam * r ** spec.beta)
        return (ml - lead * r ** (-spec.beta)) * base(r)

    def f2(r):
        return lead * r ** (-spec.beta) * base(r)

    breaks = refine_breaks_by_phase(_BAND_BREAKS, y)
    nodes, weights = panel_nodes(breaks, 16)
    i1 = complex(np.dot(f1(nodes), weights))
    i2 = complex(np.dot(f2(nodes), weights))
    return i1, i2


# ---------------------------------------------------------------------------
# Full kernel
# ---------------------------------------------------------------------------

def riesz_constant(n: int, theta: float) -> float:
    """Constant C(n, theta) with int e^{i x.xi} |xi|^-theta dxi = C |x|^(theta-n),
    0 < theta < n, unnormalized convention:
    C = 2^(n-theta) pi^(n/2) Gamma((n-theta)/2) / Gamma(theta/2)."""
    if not 0.0 < theta < n:
        raise DomainError(f"riesz_constant needs 0 < theta < n, got theta={theta}, n={n}")
    return (2.0 ** (n - theta) * math.pi ** (n / 2.0)
            * math.gamma((n - theta) / 2.0) / math.gamma(theta / 2.0))


def _tail_sum(spec: KernelSpec, eta: float, r_cut: float,
              jmax: int = 12, tol: float = 1e-12):
    """Tail int_{r_cut}^inf with E replaced by its algebraic expansion.

    Each power integrates against Omega_n in closed form.  Returns
    (value, committed bound) including the expansion-remainder bound."""
    n, alpha, beta = spec.n, spec.alpha, spec.beta
    total = 0j
    bound = 0.0
    coeffs = []
    for j in range(1, jmax + 1):
        c = -(1j ** j) * recip_gamma(1.0 - alpha * j)
        coeffs.append(c)
        if c == 0:
            continue
        p = n - 1.0 - beta * j
        if eta > 0:
            big_a = r_cut * eta
            g, gb = bessel_power_tail(n, p, big_a)
            term = c * eta ** (beta * j - n) * g
            tb = abs(c) * eta ** (beta * j - n) * gb
        else:
            if p + 1.0 >= 0:
                raise QuadratureError("eta = 0 tail requires beta > n")
            om0 = 2.0 ** ((2.0 - n) / 2.0) / math.gamma(n / 2.0)
            term = c * om0 * r_cut ** (p + 1.0) / (-(p + 1.0))
            tb = 1e-14 * abs(term)
        total += term
        bound += tb
        if abs(term) < tol * max(abs(total), 1e-300) and j >= 4:
            break
    # remainder of the multiplier expansion beyond the last used power
    jr = len(coeffs) + 1
    crem = max(abs(recip_gamma(1.0 - alpha * jj)) for jj in range(1, jr + 1))
    q = (n - 1.0) / 2.0 - beta * jr  # envelope power of the remainder integrand
    if q + 1.0 >= 0:
        raise QuadratureError("tail remainder does not decay; raise jmax")
    if eta > 0:
        env = math.sqrt(2.0 / math.pi) * eta ** (beta * jr - n) \
            * (r_cut * eta) ** (q + 1.0) / (-(q + 1.0))
    else:
        env = r_cut ** (n - beta * jr) / (beta * jr - n)
    bound += crem * env
    return total, bound


def _khat(spec: KernelSpec, eta: float, refine: bool = False):
    """Khat(eta) = int_0^inf E_alpha(-i rho^beta) rho^(n-1) Omega_n(rho eta) drho
    (without the plane-wave prefactor).  Returns (value, panels, tail_bound)."""
    n, alpha, beta = spec.n, spec.alpha, spec.beta
    if eta < 0:
        raise DomainError("eta must be >= 0")
    if eta == 0.0 and beta <= n:
        raise DomainError("kernel is unbounded at x = 0 for beta <= n")
    s_tail = max(2.0 * asymptotic_radius(alpha), 24.0)
    r_e = s_tail ** (1.0 / beta)
    r_cut = max(r_e, (_TAIL_PHASE / eta) if eta > 0 else 0.0, 4.0)

    # Geometric grading toward the origin resolves the rho^beta cusp of the
    # multiplier (beta < 1); the [0, eps] remainder is attached analytically.
    eps = 1e-9
    base = np.concatenate([log_breaks(eps, r_cut, 10)])
    base = np.unique(base)
    breaks = refine_breaks_by_phase(base, eta)
    if refine:
        mids = 0.5 * (breaks[:-1] + breaks[1:])
        breaks = np.sort(np.concatenate([breaks, mids]))
    order = 14
    nodes, weights = panel_nodes(breaks, order)
    ml = ml_neg_imag_axis(alpha, nodes ** beta)
    fv = ml * nodes ** (n - 1) * weights
    om0 = 2.0 ** ((2.0 - n) / 2.0) / math.gamma(n / 2.0)
    origin = om0 * eps ** n / n  # E(0) = 1, Omega ~ Omega(0) on [0, eps]
    num = complex(np.dot(omega_n_many(n, nodes * eta), fv)) + origin
    tail, tbound = _tail_sum(spec, eta, r_cut)
    return num + tail, len(breaks) - 1, tbound


def kernel_full_rescaled(spec: KernelSpec, eta: float) -> KernelSample:
    """c_n * Khat(eta): the kernel at t = 1 up to the self-similar rescaling."""
    v1, p1, tb = _khat(spec, eta)
    v2, p2, _ = _khat(spec, eta, refine=True)
    scale = abs(v2) + 1e-300
    if abs(v2 - v1) > 1e-6 * scale + tb:
        raise QuadratureError(
            f"kernel quadrature did not stabilize at eta={eta}: "
            f"delta={abs(v2 - v1):.3e} vs scale {scale:.3e}"
        )
    c = spec.prefactor
    diag = QuadDiagnostics(panels=p2, tail_bound=c * tb,
                           est_error=c * (abs(v2 - v1) + tb))
    return KernelSample(t=1.0, x_radius=eta, value=c * v2, diagnostics=diag)


def kernel_full(spec: KernelSpec, t: float, x_radius: float) -> KernelSample:
    """Fundamental solution K_t(x) by self-similar reduction."""
    if t <= 0:
        raise DomainError("t must be positive")
    eta = x_radius * t ** (-spec.alpha / spec.beta)
    base = kernel_full_rescaled(spec, eta)
    scalefac = t ** (-spec.n * spec.alpha / spec.beta)
    diag = QuadDiagnostics(panels=base.diagnostics.panels,
                           tail_bound=scalefac * base.diagnostics.tail_bound,
                           est_error=scalefac * base.diagnostics.est_error)
    return KernelSample(t=t, x_radius=float(x_radius),
                        value=scalefac * base.value, diagnostics=diag)


# ---------------------------------------------------------------------------
# Expansion residual and the logarithmic profile W_1
# ---------------------------------------------------------------------------

def expansion_coefficient(spec: KernelSpec, k: int) -> complex:
    """C_k: transform of the k-th algebraic term of the multiplier.

    The coefficient of |xi|^(-beta k) in E_alpha(-i |xi|^beta) is
    -i^k / Gamma(1 - alpha k); the power transforms through the Riesz identity
    with theta = beta k."""
    c = -(1j ** k) * recip_gamma(1.0 - spec.alpha * k)
    return c * riesz_constant(spec.n, spec.beta * k)


def expansion_residual(spec: KernelSpec, t: float, x_radius: float) -> float:
    """|K_t(x) - sum_k C_k |x|^(beta k - n) t^(-alpha k)| * t^(n alpha / beta).

    The sum runs over k <= floor(n/beta) off resonance and k <= m-1 when
    beta = n/m (the k = m term is the logarithmic one and is left in).
    Equals |c_n Khat(eta) - sum_k C_k eta^(beta k - n)| at eta = x t^(-a/b)."""
    if x_radius <= 0 and spec.beta <= spec.n:
        raise DomainError("x_radius must be positive for beta <= n")
    eta = x_radius * t ** (-spec.alpha / spec.beta)
    khat = kernel_full_rescaled(spec, eta).value
    m = spec.resonance_order()
    if spec.beta > spec.n:
        kmax = 0
    elif m is not None:
        kmax = m - 1
    else:
        kmax = int(math.floor(spec.n / spec.beta))
    acc = 0j
    for k in range(1, kmax + 1):
        acc += expansion_coefficient(spec, k) * eta ** (spec.beta * k - spec.n)
    return abs(khat - acc)


def w1_eval(n: int, eta: float) -> complex:
    """W_1(eta) = c_n int_1^inf rho^-1 Phi(rho) Omega_n(rho eta) drho, the
    inverse transform of the exterior-cutoff |xi|^-n multiplier.

    Grows like log(1/eta) as eta -> 0; defined here for 0 < eta <= 1/2."""
    if not 0.0 < eta <= 0.5:
        raise DomainError("w1_eval is defined for 0 < eta <= 1/2")
    cut = build_cutoff()
    r_cut = max(_TAIL_PHASE / eta, 4.0)
    base = np.unique(np.concatenate([np.linspace(1.0, 2.0, 5),
                                     log_breaks(2.0, r_cut, 12)]))
    breaks = refine_breaks_by_phase(base, eta)
    nodes, weights = panel_nodes(breaks, 14)
    fv = cut.exterior(nodes) / nodes * weights
    num = float(np.dot(omega_n_many(n, nodes * eta), fv))
    g, gb = bessel_power_tail(n, -1.0, r_cut * eta)
    c = (2.0 * math.pi) ** (n / 2.0)
    return complex(c * (num + g))
