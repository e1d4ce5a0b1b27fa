"""Parameter sweeps, decay-exponent fits, dispersive-inequality verifiers, and
the fractional-derivative solution check.

The propagator applied to a radial profile is computed spectrally: the
profile's transform is multiplied by E_alpha(-i t^alpha rho^beta) and inverted
by the oscillation-robust quadrature of the freq module.  All verifiers report
ratios or fitted exponents, which are insensitive to normalization constants.
"""

from __future__ import annotations

import math
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field

import numpy as np

from .besov import BesovSpec, besov_norm
from .errors import DegenerateInputError, DomainError, QuadratureError
from .freq import (DyadicBand, RadialProfile, band_block, band_grid,
                   build_cutoff, lp_norm_radial, transform_values)
from .kernel import KernelSpec, sup_search
from .quadrature import log_breaks, panel_nodes
from .specfun import ml_neg_imag_axis, omega_n_many

__all__ = [
    "FitResult",
    "SweepRecord",
    "InequalityReport",
    "fit_exponent",
    "decay_sweep",
    "verify_sharpness",
    "gaussian_profile",
    "bump_profile",
    "graded_band_profile",
    "evolve_profile",
    "evolved_spectral_profile",
    "verify_band_linfty",
    "verify_dispersive_besov",
    "verify_lp_interpolation",
    "caputo_derivative",
    "verify_mode_ode",
]


# ---------------------------------------------------------------------------
# Log-log regression
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class FitResult:
    slope: float
    intercept: float
    r_squared: float
    n_points: int
    residual_max: float


def fit_exponent(samples) -> FitResult:
    """Ordinary least squares in log-log coordinates over (parameter, value)."""
    samples = [(float(a), float(b)) for a, b in samples]
    if len(samples) < 3:
        raise DegenerateInputError("need at least 3 samples")
    if any(a <= 0 or b <= 0 for a, b in samples):
        raise DomainError("samples must be positive for a log-log fit")
    x = np.log(np.array([a for a, _ in samples]))
    y = np.log(np.array([b for _, b in samples]))
    if np.ptp(x) == 0.0:
        raise DegenerateInputError("all parameters equal; slope undefined")
    slope, intercept = np.polyfit(x, y, 1)
    resid = y - (slope * x + intercept)
    ss_res = float(np.sum(resid ** 2))
    ss_tot = float(np.sum((y - y.mean()) ** 2))
    r2 = 1.0 if ss_res <= 1e-28 * max(1.0, ss_tot) else 1.0 - ss_res / ss_tot
    return FitResult(slope=float(slope), intercept=float(intercept),
                     r_squared=float(r2), n_points=len(samples),
                     residual_max=float(np.max(np.abs(resid))))


# ---------------------------------------------------------------------------
# Decay sweeps and sharpness
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class SweepRecord:
    t: float
    N: float
    sup_K: float
    x_star: float
    t_alpha_N_beta: float
    status: str = "ok"


def decay_sweep(spec: KernelSpec, t_grid, N_grid, x_grid=None,
                threads: int = 1) -> list[SweepRecord]:
    """sup_x |K_t^N(x)| over the (t, N) grid; failed cells are flagged, not fatal."""
    cells = [(float(t), float(N)) for t in t_grid for N in N_grid]

    def run(cell):
        t, N = cell
        j = round(math.log2(N))
        if abs(2.0 ** j - N) > 1e-9 * N:
            raise DomainError(f"N={N} is not dyadic")
        lam = t ** spec.alpha * N ** spec.beta
        try:
            xs, v = sup_search(spec, t, DyadicBand(j), x_grid)
            return SweepRecord(t=t, N=N, sup_K=v, x_star=xs, t_alpha_N_beta=lam)
        except QuadratureError:
            return SweepRecord(t=t, N=N, sup_K=math.nan, x_star=math.nan,
                               t_alpha_N_beta=lam, status="failed")

    if threads > 1:
        with ThreadPoolExecutor(max_workers=threads) as pool:
            return list(pool.map(run, cells))
    return [run(c) for c in cells]


def verify_sharpness(spec: KernelSpec, t_grid, N_grid, spread_max: float = 10.0,
                     x_grid=None) -> dict:
    """Lower-bound constant c(t, N) = sup_K (1 + t^a N^b) / N^n over the grid.

    PASS when min c > 0 and max/min <= spread_max; cells with t^a N^b < 1 are
    excluded (the bound's asymptotic regime)."""
    records = decay_sweep(spec, t_grid, N_grid, x_grid)
    cs, excluded = [], 0
    for rec in records:
        if rec.status != "ok" or rec.t_alpha_N_beta < 1.0:
            excluded += 1
            continue
        cs.append(rec.sup_K * (1.0 + rec.t_alpha_N_beta) / rec.N ** spec.n)
    if not cs:
        raise DegenerateInputError("no usable sharpness cells")
    cmin, cmax = min(cs), max(cs)
    return {
        "check": "sharpness",
        "params": {"n": spec.n, "alpha": spec.alpha, "beta": spec.beta},
        "pass": bool(cmin > 0.0 and cmax / cmin <= spread_max),
        "metrics": {"c_min": cmin, "c_max": cmax, "spread": cmax / cmin,
                    "tolerance": spread_max},
        "cells_excluded": excluded,
        "records": records,
    }


# ---------------------------------------------------------------------------
# Test profiles (spectral-side representations)
# ---------------------------------------------------------------------------

def gaussian_profile(n: int = 1) -> RadialProfile:
    """exp(-r^2/2): self-dual under the symmetric radial transform."""
    radii = np.linspace(0.0, 12.0, 481)
    f = lambda r: np.exp(-0.5 * np.asarray(r, dtype=float) ** 2) + 0j
    return RadialProfile.from_function(f, radii, n, grid_kind="uniform", hat_func=f)


def bump_profile(n: int = 1, j: int = 0) -> RadialProfile:
    """Profile whose spectrum is exactly the dyadic bump psi_j."""
    cut = build_cutoff()
    hat = lambda rho: cut.psi(j, np.asarray(rho, dtype=float)) + 0j
    radii = band_grid(j, n)
    vals = transform_values(hat, n, 2.0 ** (j + 1), radii)
    return RadialProfile(n=n, radii=radii, values=vals, grid_kind="uniform",
                         hat_func=hat)


def lowpass_profile(n: int = 1) -> RadialProfile:
    """Band-limited profile whose spectrum is the low-pass cutoff itself.

    Unlike a single annular bump it carries spectral mass at every scale below
    1, so dispersive-ratio checks are exercised across the whole time range."""
    cut = build_cutoff()
    hat = lambda rho: np.asarray(cut(np.asarray(rho, dtype=float)), dtype=complex)
    radii = np.linspace(0.0, 120.0, 2401)
    vals = transform_values(hat, n, 2.0, radii)
    return RadialProfile(n=n, radii=radii, values=vals, grid_kind="uniform",
                         hat_func=hat)


def graded_band_profile(n: int, gamma: float, j_lo: int = -9,
                        j_hi: int = 2) -> RadialProfile:
    """Spectrum rho^(-gamma) smoothly cut to the dyadic range [2^j_lo, 2^j_hi].

    The power grading makes one L^p' -> L^p decay exponent sharp (gamma = 1/p);
    used by the interpolation-rate verifier."""
    cut = build_cutoff()

    def hat(rho):
        rho = np.asarray(rho, dtype=float)
        out = np.zeros(rho.shape, dtype=complex)
        m = rho > 0
        inner = cut.exterior(rho[m] / 2.0 ** (j_lo - 1))  # 0 below 2^(j_lo-1)
        outer = cut(rho[m] / 2.0 ** (j_hi - 1))           # 0 above 2^j_hi
        out[m] = rho[m] ** (-gamma) * inner * outer
        return out

    radii = np.concatenate([np.linspace(0.0, 30.0, 1201),
                            np.geomspace(30.0, 4.0 * 2.0 ** (-j_lo), 301)[1:]])
    spec_breaks = log_breaks(2.0 ** (j_lo - 2), 2.0 ** (j_hi + 1), 12)
    vals = transform_values(hat, n, 2.0 ** (j_hi + 1), radii, breaks=spec_breaks)
    return RadialProfile(n=n, radii=radii, values=vals, grid_kind="composite",
                         hat_func=hat)


# ---------------------------------------------------------------------------
# Spectral evolution T_t
# ---------------------------------------------------------------------------

def evolved_spectral_profile(spec: KernelSpec, f: RadialProfile,
                             t: float) -> RadialProfile:
    """Profile carrying the evolved spectrum E_a(-i t^a rho^b) fhat(rho).

    Spatial samples are left empty; band projections and Besov norms read the
    attached spectrum directly."""
    if f.hat_func is None:
        raise DomainError("evolution needs a profile with an attached spectrum")
    base_hat = f.hat_func

    def ehat(rho):
        rho = np.asarray(rho, dtype=float)
        mult = ml_neg_imag_axis(spec.alpha, t ** spec.alpha * rho ** spec.beta) \
            if t > 0 else 1.0
        return np.asarray(base_hat(rho), dtype=complex) * mult

    return RadialProfile(n=f.n, radii=np.array([0.0, 1.0]),
                         values=np.zeros(2, dtype=complex), hat_func=ehat)


def _spectrum_extent(f: RadialProfile, probe_max: float = 4096.0) -> float:
    rho = np.geomspace(1e-6, probe_max, 400)
    mags = np.abs(np.asarray(f.hat_func(rho), dtype=complex))
    top = mags.max()
    if top == 0.0:
        return 1.0
    idx = np.nonzero(mags > 1e-13 * top)[0]
    return float(rho[min(idx[-1] + 1, len(rho) - 1)])


def evolve_profile(spec: KernelSpec, f: RadialProfile, t: float,
                   x_grid=None) -> RadialProfile:
    """T_t f sampled in physical space (spectral multiply + inverse transform).

    The spectral panels are geometric so both the profile scale and the
    multiplier scale t^(-alpha/beta) are resolved; n = 1 inversion is
    Filon-based, so arbitrarily large radii cost nothing extra."""
    ev = evolved_spectral_profile(spec, f, t)
    rho_max = _spectrum_extent(f)
    if x_grid is None:
        spread = 50.0 * max(1.0, t ** (spec.alpha / spec.beta))
        x_grid = np.concatenate([np.linspace(0.0, 30.0, 601),
                                 np.geomspace(30.0, max(spread, 60.0), 420)[1:]])
    x_grid = np.asarray(x_grid, dtype=float)
    eps = 1e-8
    breaks = log_breaks(eps, rho_max, 16)
    hat = ev.hat_func
    if spec.n == 1:
        from .quadrature import FilonPlan
        plan = FilonPlan.build(breaks, x_grid)
        gv = np.asarray(hat(plan.nodes.ravel()), dtype=complex).reshape(plan.nodes.shape)
        vals = math.sqrt(2.0 / math.pi) * plan.integrate(gv)
    else:
        nodes, weights = panel_nodes(breaks, 12)
        fv = np.asarray(hat(nodes), dtype=complex) * nodes ** (spec.n - 1) * weights
        vals = omega_n_many(spec.n, np.outer(x_grid, nodes)) @ fv
    om0 = 2.0 ** ((2.0 - spec.n) / 2.0) / math.gamma(spec.n / 2.0)
    vals = vals + om0 * complex(np.asarray(hat(np.array([eps * 0.5]))[0])) \
        * eps ** spec.n / spec.n
    return RadialProfile(n=spec.n, radii=x_grid, values=vals,
                         grid_kind="composite", hat_func=ev.hat_func)


# ---------------------------------------------------------------------------
# Inequality verifiers
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class InequalityReport:
    lhs: float
    rhs_terms: tuple
    ratio: float
    params: dict = field(default=None, hash=False, compare=False)


def _holder_dual(r: float) -> float:
    if math.isinf(r):
        return 1.0
    if r == 1.0:
        return math.inf
    return r / (r - 1.0)


def _near_band_profile(f: RadialProfile, j: int, cutoff) -> RadialProfile:
    """P_~N f: the three-bump neighborhood projection, on a grid fit to band j."""
    def tri(rho):
        return (cutoff.psi(j - 1, rho) + cutoff.psi(j, rho)
                + cutoff.psi(j + 1, rho))

    lo, hi = 2.0 ** (j - 2), 2.0 ** (j + 2)
    out_radii = band_grid(j - 1, f.n)
    from .quadrature import refine_breaks_by_phase
    spec_breaks = refine_breaks_by_phase(np.linspace(lo, hi, 25),
                                         float(out_radii.max()))
    nodes, weights = panel_nodes(spec_breaks, 12)
    gv = (np.asarray(f.hat_func(nodes), dtype=complex) * tri(nodes)
          * nodes ** (f.n - 1) * weights)
    vals = omega_n_many(f.n, np.outer(out_radii, nodes)) @ gv
    return RadialProfile(n=f.n, radii=out_radii, values=vals, grid_kind="uniform")


def verify_band_linfty(spec: KernelSpec, t: float, band: DyadicBand,
                       test_fn: RadialProfile, r: float) -> InequalityReport:
    """Band sup-norm of the evolved profile against its three bounding forms.

    rhs terms: [N^(n/r') ||P_~N f||_r',  t^-a N^(n-b) ||P_~N f||_1,
                t^(-a(1-2/r)) N^(n/r' - b(1-2/r)) ||P_~N f||_r']."""
    if r < 2:
        raise DomainError("r must be >= 2")
    cut = build_cutoff()
    ev = evolved_spectral_profile(spec, test_fn, t)
    blk = band_block(ev, band, cut)
    lhs = float(np.max(np.abs(blk.values)))
    near = _near_band_profile(test_fn, band.j, cut)
    rp = _holder_dual(r)
    n_rp = spec.n / rp if not math.isinf(rp) else 0.0
    nrm_rp = lp_norm_radial(near, rp) if not math.isinf(rp) else lp_norm_radial(near, math.inf)
    nrm_1 = lp_norm_radial(near, 1.0)
    N = band.N
    theta = 1.0 - 2.0 / r if not math.isinf(r) else 1.0
    rhs1 = N ** n_rp * nrm_rp
    rhs2 = (t ** -spec.alpha if t > 0 else math.inf) * N ** (spec.n - spec.beta) * nrm_1
    rhs3 = (t ** (-spec.alpha * theta) if t > 0 else math.inf) \
        * N ** (n_rp - spec.beta * theta) * nrm_rp
    rhs = (rhs1, rhs2, rhs3)
    ratio = lhs / min(rhs)
    return InequalityReport(lhs=lhs, rhs_terms=rhs, ratio=ratio,
                            params={"t": t, "N": N, "r": r})


def _time_weight(spec: KernelSpec, t: float, r: float) -> float:
    theta = 1.0 - 2.0 / r if not math.isinf(r) else 1.0
    return (1.0 + t ** spec.alpha) ** (-theta)


def verify_dispersive_besov(spec: KernelSpec, t_grid, test_fn: RadialProfile,
                            r: float, s: float = 0.0, p: float = 2.0,
                            variant: str = "eq7", j_range=(-8, 8)) -> list[InequalityReport]:
    """Time-uniform ratio check of one dispersive inequality variant.

    eq7: sup norm vs two l^1 dyadic norms of the input;
    eq8: L^r norm vs two l^2 dyadic norms; eq9: dyadic norm of the output vs
    shifted dyadic norms of the input.  The rhs is t-independent except for the
    (1+t^alpha) weight, so a bounded ratio over t_grid is the testable content."""
    if r < 2:
        raise DomainError("r must be >= 2")
    rp = _holder_dual(r)
    theta = 1.0 - 2.0 / r if not math.isinf(r) else 1.0
    jlo, jhi = j_range
    if variant == "eq7":
        s1, s2, q_in, p_in = spec.n / rp, spec.n / rp - spec.beta * theta, 1.0, rp
    elif variant == "eq8":
        s1, s2, q_in, p_in = spec.n * theta, (spec.n - spec.beta) * theta, 2.0, rp
    elif variant == "eq9":
        s1, s2, q_in, p_in = spec.n * theta + s, (spec.n - spec.beta) * theta + s, p, rp
    else:
        raise DomainError(f"unknown variant {variant!r}")
    b1, _ = besov_norm(test_fn, BesovSpec(s=s1, p=p_in, q=q_in, j_min=jlo, j_max=jhi))
    b2, _ = besov_norm(test_fn, BesovSpec(s=s2, p=p_in, q=q_in, j_min=jlo, j_max=jhi))
    reports = []
    for t in t_grid:
        t = float(t)
        if variant == "eq9":
            ev = evolved_spectral_profile(spec, test_fn, t)
            lhs, _ = besov_norm(ev, BesovSpec(s=s, p=r, q=p, j_min=jlo, j_max=jhi))
        else:
            prof = evolve_profile(spec, test_fn, t)
            lhs = lp_norm_radial(prof, math.inf if variant == "eq7" else r)
        w = _time_weight(spec, t, r)
        rhs = w * (b1 + b2)
        reports.append(InequalityReport(
            lhs=lhs, rhs_terms=(w * b1, w * b2), ratio=lhs / rhs,
            params={"t": t, "r": r, "variant": variant, "s": s, "p": p}))
    return reports


def verify_lp_interpolation(spec: KernelSpec, p: float, t_grid,
                            test_fn: RadialProfile) -> tuple[FitResult, float]:
    """Fit the L^p-norm decay exponent of the evolved profile.

    Expected rate -(2 n alpha / beta)(1/2 - 1/p) in the beta > n regime."""
    if spec.beta <= spec.n:
        raise DomainError("interpolation rates require beta > n")
    if p < 2:
        raise DomainError("p must be >= 2")
    samples = []
    for t in t_grid:
        prof = evolve_profile(spec, test_fn, float(t))
        samples.append((float(t), lp_norm_radial(prof, p)))
    expected = -(2.0 * spec.n * spec.alpha / spec.beta) * (0.5 - (0.0 if math.isinf(p) else 1.0 / p))
    return fit_exponent(samples), expected


# ---------------------------------------------------------------------------
# Caputo derivative and the one-mode solution check
# ---------------------------------------------------------------------------

def _stencil_derivative(f, s: float, h: float):
    """Five-point central first derivative."""
    return (-f(s + 2 * h) + 8 * f(s + h) - 8 * f(s - h) + f(s - 2 * h)) / (12.0 * h)


def _stencil_derivative_many(f, s: np.ndarray, h: np.ndarray) -> np.ndarray:
    """Vectorized five-point derivative; f maps arrays to arrays."""
    pts = np.concatenate([s + 2 * h, s + h, s - h, s - 2 * h])
    vals = np.asarray(f(pts), dtype=complex).reshape(4, len(s))
    return (-vals[0] + 8 * vals[1] - 8 * vals[2] + vals[3]) / (12.0 * h)


def caputo_derivative(f, alpha: float, t: float, *, grading: float = 0.7,
                      levels: int = 45, gl_order: int = 8) -> complex:
    """Fractional time derivative of order alpha in (0, 1] at time t:
    (1/Gamma(1-alpha)) int_0^t (t-s)^(-alpha) f'(s) ds; alpha = 1 reduces to f'.

    Panels accumulate geometrically toward BOTH endpoints (the kernel is
    singular at s = t; solution-type inputs have f' ~ s^(alpha-1) at s = 0)
    down to a scale where t - s is still accurate in floating point.  The two
    endpoint slivers are finished analytically: near s = 0 by integration by
    parts (no knowledge of the f' singularity strength needed), near s = t by
    a two-term Taylor expansion of f' against the kernel."""
    if not 0.0 < alpha <= 1.0:
        raise DomainError("alpha must lie in (0, 1]")
    if t <= 0:
        raise DomainError("t must be positive")
    if alpha == 1.0:
        h = 1e-3 * min(t, 1.0)
        return complex(_stencil_derivative(f, t, h))
    lo = t * grading ** np.arange(levels, 0, -1)
    hi = t * (1.0 - grading ** np.arange(1, levels + 1))
    breaks = np.unique(np.concatenate([lo, [0.5 * t], hi]))
    breaks = breaks[(breaks > 0.0) & (breaks < t)]
    eps0 = breaks[0]
    delta = t - breaks[-1]
    nodes, weights = panel_nodes(breaks, gl_order)
    hs = 0.02 * np.minimum(nodes, t - nodes)  # keeps s - 2h > 0 at both ends
    try:
        fp = _stencil_derivative_many(f, nodes, hs)
    except (TypeError, ValueError):
        fp = np.array([_stencil_derivative(f, s, h) for s, h in zip(nodes, hs)])
    val = np.dot(weights, (t - nodes) ** (-alpha) * fp)
    # [0, eps0] by parts: bounded integrand, GL finishes it exactly enough
    bnodes, bw = panel_nodes(np.array([0.0, eps0]), 6)
    f0 = complex(np.asarray(f(np.array([0.0])), dtype=complex).ravel()[0])
    feps = complex(np.asarray(f(np.array([eps0])), dtype=complex).ravel()[0])
    fb = np.asarray(f(bnodes), dtype=complex)
    val += ((t - eps0) ** (-alpha) * feps - t ** (-alpha) * f0
            - alpha * np.dot(bw, (t - bnodes) ** (-alpha - 1.0) * fb))
    # [t-delta, t] via f'(t-tau) ~ f'(t) - tau f''(t), backward stencils at t
    h = 1e-3 * t
    fv = np.asarray(f(t - h * np.arange(5)), dtype=complex)
    fpt = (25 * fv[0] - 48 * fv[1] + 36 * fv[2] - 16 * fv[3] + 3 * fv[4]) / (12 * h)
    fppt = (2 * fv[0] - 5 * fv[1] + 4 * fv[2] - fv[3]) / h ** 2
    val += (fpt * delta ** (1.0 - alpha) / (1.0 - alpha)
            - fppt * delta ** (2.0 - alpha) / (2.0 - alpha))
    return complex(val / math.gamma(1.0 - alpha))


def verify_mode_ode(alpha: float, lam: float, t_grid,
                    tol: float | None = None) -> dict:
    """Residual |D^alpha u + i lam u| / |u| for u(t) = E_alpha(-i lam t^alpha).

    The solution representation is exact iff the residual vanishes; the
    committed thresholds are 1e-3 for alpha < 1 and 1e-10 classically."""
    if lam < 0:
        raise DomainError("lam must be >= 0")
    if tol is None:
        tol = 1e-10 if alpha == 1.0 else 1e-3

    def u(s):
        s = np.asarray(s, dtype=float)
        return ml_neg_imag_axis(alpha, lam * s ** alpha)

    rows = []
    for t in t_grid:
        t = float(t)
        du = caputo_derivative(lambda s: u(s), alpha, t)
        ut = complex(u(np.array([t]))[0])
        res = abs(du + 1j * lam * ut) / abs(ut)
        rows.append({"t": t, "residual": res})
    worst = max(r["residual"] for r in rows)
    return {
        "check": "ode",
        "params": {"alpha": alpha, "lambda": lam},
        "pass": bool(worst <= tol),
        "metrics": {"residual_max": worst, "tolerance": tol},
        "rows": rows,
    }
