"""Dyadic cutoffs, radial Fourier (Hankel-type) transforms, band projections,
and L^p norms of sampled radial profiles.

Convention: for a radial function f on R^n the symmetric-normalization
transform reduces to the one-dimensional integral

    fhat(rho) = int_0^inf f(r) r^(n-1) Omega_n(r rho) dr,

with Omega_n(s) = s^((2-n)/2) J_((n-2)/2)(s).  This operator is its own
inverse on radial functions, and the Gaussian e^(-r^2/2) is a fixed point.
"""

from __future__ import annotations

import io
import math
import warnings
from dataclasses import dataclass, field

import numpy as np
from scipy.integrate import simpson
from scipy.interpolate import CubicSpline

from .errors import DomainError, QuadratureError, SupportTruncationWarning
from .quadrature import FilonPlan, log_breaks, panel_nodes, refine_breaks_by_phase
from .specfun import omega_n_many

__all__ = [
    "CutoffProfile",
    "DyadicBand",
    "RadialProfile",
    "build_cutoff",
    "psi",
    "radial_fourier",
    "band_project",
    "band_block",
    "band_grid",
    "lp_norm_radial",
    "sphere_measure",
]


# ---------------------------------------------------------------------------
# Smooth dyadic cutoff
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class CutoffProfile:
    """Smooth radial cutoff: 1 on [0,1], 0 on [2,inf), C^inf in between.

    On (1,2) the profile is q(2-r) / (q(2-r) + q(r-1)) with
    q(s) = exp(-sharpness/s), which is symmetric about r = 3/2.
    """

    sharpness: float = 1.0

    def __call__(self, r):
        r = np.asarray(r, dtype=float)
        scalar = r.ndim == 0
        r = np.atleast_1d(r)
        out = np.zeros(r.shape, dtype=float)
        out[r <= 1.0] = 1.0
        mid = (r > 1.0) & (r < 2.0)
        if mid.any():
            rm = r[mid]
            a = np.exp(-self.sharpness / (2.0 - rm))
            b = np.exp(-self.sharpness / (rm - 1.0))
            out[mid] = a / (a + b)
        return float(out[0]) if scalar else out

    def exterior(self, r):
        """1 - phi: vanishes on [0,1], equals 1 on [2,inf)."""
        return 1.0 - self(r)

    def psi(self, j: int, r):
        """Annular bump psi_j(r) = phi(r/2^j) - phi(r/2^(j-1))."""
        r = np.asarray(r, dtype=float)
        return self(r / 2.0 ** j) - self(r / 2.0 ** (j - 1))


def build_cutoff(sharpness: float = 1.0) -> CutoffProfile:
    """Construct the smooth dyadic cutoff profile."""
    if not sharpness > 0:
        raise DomainError("sharpness must be positive")
    return CutoffProfile(float(sharpness))


def psi(cutoff: CutoffProfile, j: int, r):
    """Annular bump of the dyadic band at scale 2^j; zero outside
    (2^(j-1), 2^(j+1))."""
    return cutoff.psi(j, r)


@dataclass(frozen=True)
class DyadicBand:
    """Dyadic frequency band indexed by integer j, of scale N = 2^j."""

    j: int

    @property
    def N(self) -> float:
        return 2.0 ** self.j

    @property
    def support(self) -> tuple[float, float]:
        return 2.0 ** (self.j - 1), 2.0 ** (self.j + 1)


# ---------------------------------------------------------------------------
# Radial profiles
# ---------------------------------------------------------------------------

@dataclass
class RadialProfile:
    """Sampled complex radial function in ambient dimension n.

    ``func``/``hat_func`` optionally carry the exact callables the profile was
    built from; quadratures then evaluate those instead of the spline through
    the samples.
    """

    n: int
    radii: np.ndarray
    values: np.ndarray
    grid_kind: str = "composite"
    func: object = field(default=None, repr=False, compare=False)
    hat_func: object = field(default=None, repr=False, compare=False)

    def __post_init__(self):
        self.radii = np.asarray(self.radii, dtype=float)
        self.values = np.asarray(self.values, dtype=complex)
        if self.radii.ndim != 1 or self.radii.size == 0:
            raise DomainError("radii must be a nonempty 1-d array")
        if np.any(~np.isfinite(self.radii)) or np.any(np.diff(self.radii) <= 0):
            raise DomainError("radii must be finite and strictly increasing")
        if self.radii[0] < 0:
            raise DomainError("radii must be nonnegative")
        if self.values.shape != self.radii.shape:
            raise DomainError("values must match radii in shape")
        if np.any(~np.isfinite(self.values)):
            raise DomainError("values must be finite")
        if self.n < 1:
            raise DomainError("dimension n must be >= 1")

    @classmethod
    def from_function(cls, f, radii, n: int, grid_kind: str = "composite",
                      hat_func=None) -> "RadialProfile":
        radii = np.asarray(radii, dtype=float)
        vals = np.asarray(f(radii), dtype=complex)
        return cls(n=n, radii=radii, values=vals, grid_kind=grid_kind,
                   func=f, hat_func=hat_func)

    def interpolator(self):
        """Exact callable if available, else a clamped cubic spline (zero
        outside the sampled range)."""
        if self.func is not None:
            return self.func
        rr, vv = self.radii, self.values
        sp_re = CubicSpline(rr, vv.real, extrapolate=False)
        sp_im = CubicSpline(rr, vv.imag, extrapolate=False)

        def _eval(r):
            r = np.asarray(r, dtype=float)
            out = np.nan_to_num(sp_re(r), nan=0.0) + 1j * np.nan_to_num(sp_im(r), nan=0.0)
            return out

        return _eval

    def support_radius(self, rel: float = 1e-13) -> float:
        amax = np.abs(self.values).max()
        if amax == 0.0:
            return self.radii[-1]
        idx = np.nonzero(np.abs(self.values) > rel * amax)[0]
        return float(self.radii[min(idx[-1] + 1, len(self.radii) - 1)])

    # -- serialization: header line with n and grid_kind, then r, re, im ----

    def to_csv(self) -> str:
        buf = io.StringIO()
        buf.write(f"# n={self.n} grid_kind={self.grid_kind}\n")
        buf.write("r,re,im\n")
        for r, v in zip(self.radii, self.values):
            buf.write(f"{r:.17g},{v.real:.17g},{v.imag:.17g}\n")
        return buf.getvalue()

    def save_csv(self, path):
        with open(path, "w", encoding="utf-8", newline="\n") as fh:
            fh.write(self.to_csv())

    @classmethod
    def from_csv(cls, text_or_path) -> "RadialProfile":
        if isinstance(text_or_path, str) and "\n" in text_or_path:
            lines = text_or_path.splitlines()
        else:
            with open(text_or_path, "r", encoding="utf-8") as fh:
                lines = fh.read().splitlines()
        header = lines[0]
        if not header.startswith("#"):
            raise DomainError("profile CSV must start with a '# n=... grid_kind=...' line")
        fields = dict(tok.split("=", 1) for tok in header[1:].split())
        rows = [ln.split(",") for ln in lines[2:] if ln.strip()]
        radii = np.array([float(r[0]) for r in rows])
        values = np.array([float(r[1]) + 1j * float(r[2]) for r in rows])
        return cls(n=int(fields["n"]), radii=radii, values=values,
                   grid_kind=fields["grid_kind"])


# ---------------------------------------------------------------------------
# The radial transform
# ---------------------------------------------------------------------------

def _transform_breaks(r_max: float, rho_max: float, scale_panels: int = 24):
    """Panels over [0, r_max]: fine enough for the profile and the oscillation."""
    base = np.linspace(0.0, r_max, scale_panels + 1)
    return refine_breaks_by_phase(base, rho_max)


def transform_values(f_eval, n: int, r_max: float, out_radii: np.ndarray,
                     tol: float = 1e-8, _panels_scale: int = 24,
                     breaks=None) -> np.ndarray:
    """Core quadrature: int_0^r_max f(r) r^(n-1) Omega_n(r rho) dr per rho.

    n = 1 uses the Filon-Legendre plan (cost independent of rho); higher n
    resolves the oscillation with plain panels.  One doubling pass verifies the
    committed 1e-8 accuracy relative to the result scale.  ``breaks`` overrides
    the default uniform panels (multi-scale integrands need geometric ones).
    """
    out_radii = np.asarray(out_radii, dtype=float)
    rho_max = float(np.max(out_radii)) if out_radii.size else 0.0

    def _split(brk):
        mids = 0.5 * (brk[:-1] + brk[1:])
        return np.sort(np.concatenate([brk, mids]))

    def _run(scale_panels, halvings):
        if breaks is not None:
            brk = np.asarray(breaks, dtype=float)
            for _ in range(halvings):
                brk = _split(brk)
        elif n == 1:
            brk = np.linspace(0.0, r_max, scale_panels + 1)
        else:
            brk = _transform_breaks(r_max, rho_max, scale_panels)
        if n == 1:
            plan = FilonPlan.build(brk, out_radii)
            gv = np.asarray(f_eval(plan.nodes.ravel()), dtype=complex)
            gv = gv.reshape(plan.nodes.shape)
            return math.sqrt(2.0 / math.pi) * plan.integrate(gv)
        brk = refine_breaks_by_phase(brk, rho_max)
        nodes, weights = panel_nodes(brk, 12)
        fv = np.asarray(f_eval(nodes), dtype=complex) * nodes ** (n - 1) * weights
        om = omega_n_many(n, np.outer(out_radii, nodes))
        return om @ fv

    coarse = _run(_panels_scale, 0)
    fine = _run(2 * _panels_scale, 1)
    # accuracy is committed relative to the integrand's mass: bands where the
    # true transform sits below round-off must not trip the stabilizer
    mnodes, mweights = panel_nodes(np.linspace(0.0, r_max, 33), 8)
    mass = float(np.dot(np.abs(np.asarray(f_eval(mnodes), dtype=complex))
                        * mnodes ** (n - 1), mweights))
    scale = max(float(np.max(np.abs(fine))), mass * 1e-4) + 1e-300
    if np.max(np.abs(fine - coarse)) > 10.0 * tol * scale:
        coarse, fine = fine, _run(4 * _panels_scale, 2)
        if np.max(np.abs(fine - coarse)) > 100.0 * tol * scale:
            raise QuadratureError("radial transform did not stabilize under refinement")
    return fine


def radial_fourier(f: RadialProfile, out_radii) -> RadialProfile:
    """Radial Fourier transform of a sampled profile onto out_radii."""
    out_radii = np.asarray(out_radii, dtype=float)
    fe = f.interpolator()
    r_max = f.support_radius()
    if f.func is None and np.abs(f.values[-1]) > 1e-9 * (np.abs(f.values).max() + 1e-300):
        warnings.warn(
            "profile does not decay at its grid boundary; transform is truncated",
            SupportTruncationWarning,
        )
    vals = transform_values(lambda r: fe(r), f.n, r_max, out_radii)
    kind = "uniform" if np.allclose(np.diff(out_radii), out_radii[1] - out_radii[0]) else "composite"
    return RadialProfile(n=f.n, radii=out_radii, values=vals, grid_kind=kind)


def band_grid(j: int, n: int = 1, points: int = 1025, extent: float = 45.0) -> np.ndarray:
    """Uniform spatial grid adapted to a band at scale 2^j: the projection of a
    tempered profile concentrates on |x| <~ 2^-j."""
    return np.linspace(0.0, extent * 2.0 ** (-j), points)


def _spectrum_eval(f: RadialProfile, rho: np.ndarray) -> np.ndarray:
    """fhat at the requested frequencies, from hat_func if carried."""
    if f.hat_func is not None:
        return np.asarray(f.hat_func(rho), dtype=complex)
    fe = f.interpolator()
    return transform_values(fe, f.n, f.support_radius(), rho)


def band_block(f: RadialProfile, band: DyadicBand, cutoff: CutoffProfile,
               out_radii=None, t_multiplier=None) -> RadialProfile:
    """Band projection of f evaluated on a band-adapted grid.

    Computes [psi_j(rho) (m(rho)) fhat(rho)]^inv on out_radii, with an optional
    extra spectral multiplier m (used for evolved profiles).
    """
    lo, hi = band.support
    if out_radii is None:
        out_radii = band_grid(band.j, f.n)
    spec_breaks = np.linspace(lo, hi, 17)
    spec_breaks = refine_breaks_by_phase(spec_breaks, float(np.max(out_radii)))
    nodes, weights = panel_nodes(spec_breaks, 12)
    fhat = _spectrum_eval(f, nodes)
    gv = fhat * cutoff.psi(band.j, nodes)
    if t_multiplier is not None:
        gv = gv * t_multiplier(nodes)
    gv = gv * nodes ** (f.n - 1) * weights
    om = omega_n_many(f.n, np.outer(out_radii, nodes))
    vals = om @ gv
    return RadialProfile(n=f.n, radii=np.asarray(out_radii, float), values=vals,
                         grid_kind="uniform")


def band_project(f: RadialProfile, band: DyadicBand,
                 cutoff: CutoffProfile | None = None) -> RadialProfile:
    """Littlewood-Paley projection P_N f rendered on f's own grid."""
    if cutoff is None:
        cutoff = build_cutoff()
    blk = band_block(f, band, cutoff, out_radii=f.radii)
    blk.grid_kind = f.grid_kind
    return blk


# ---------------------------------------------------------------------------
# Norms
# ---------------------------------------------------------------------------

def sphere_measure(n: int) -> float:
    """Surface measure of S^(n-1): 2 pi^(n/2) / Gamma(n/2)."""
    return 2.0 * math.pi ** (n / 2.0) / math.gamma(n / 2.0)


def lp_norm_radial(f: RadialProfile, p: float, n: int | None = None) -> float:
    """L^p(R^n) norm of the radial profile; p = inf gives the grid sup.

    Finite p integrates |f|^p r^(n-1) with Simpson's rule on the sample grid.
    Warns if the profile has not decayed at the boundary.
    """
    if n is None:
        n = f.n
    if p < 1:
        raise DomainError("p must be >= 1")
    mags = np.abs(f.values)
    if math.isinf(p):
        return float(mags.max())
    scale = mags.max() + 1e-300
    if mags[-1] > 1e-6 * scale:
        warnings.warn("profile |f| at the grid boundary exceeds 1e-6 of its peak; "
                      "L^p integral is truncated", SupportTruncationWarning)
    integrand = mags ** p * f.radii ** (n - 1)
    val = simpson(integrand, x=f.radii)
    return float((sphere_measure(n) * max(val, 0.0)) ** (1.0 / p))
