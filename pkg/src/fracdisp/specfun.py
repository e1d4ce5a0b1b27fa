"""Special functions: Gamma, Mittag-Leffler E_alpha, Bessel J_nu, and the
radial oscillation factor Omega_n.

The Mittag-Leffler evaluator dispatches between the defining power series and
the algebraic large-argument expansion.  The power series suffers catastrophic
cancellation of order exp(|z|^(1/alpha)), so it runs at an adaptively chosen
internal precision (mpmath) and is exact to the returned estimate for every
admissible argument.  The large-argument branch is a divergent asymptotic
series; it is truncated at its smallest term, which bounds its accuracy by
roughly exp(-|z|^(1/alpha)).  The switch radius is placed where both branches
deliver ~1e-10, and the two branches overlap on a committed annulus used for
cross-validation.
"""

from __future__ import annotations

import cmath
import math
import threading
from dataclasses import dataclass
from fractions import Fraction

import mpmath
import numpy as np
from scipy.special import jv as _scipy_jv

from .errors import ConvergenceError, DomainError, PoleError, RangeError

__all__ = [
    "MLOrder",
    "EvalDiagnostics",
    "gamma_real",
    "recip_gamma",
    "series_radius",
    "asymptotic_radius",
    "switch_radius",
    "sector_angle",
    "ml_series",
    "ml_asymptotic",
    "ml_eval",
    "ml_neg_imag_axis",
    "bessel_j",
    "omega_n",
    "omega_n_many",
]

GAMMA_OVERFLOW = 171.6

_LOG10_E = math.log10(math.e)


@dataclass(frozen=True)
class MLOrder:
    """Order parameter of the Mittag-Leffler function, 0 < alpha <= 1.

    alpha = 1 is admitted only as the classical comparison case E_1 = exp.
    """

    alpha: float

    def __post_init__(self):
        a = self.alpha
        if not (isinstance(a, (int, float)) and math.isfinite(a)):
            raise DomainError(f"alpha must be a finite real, got {a!r}")
        if not 0.0 < a <= 1.0:
            raise DomainError(f"alpha must lie in (0, 1], got {a}")


@dataclass(frozen=True)
class EvalDiagnostics:
    """How a value was produced: method, work count, committed error bound."""

    method: str  # "series" | "asymptotic" | "poisson-quadrature" | "closed-form"
    terms_or_nodes: int
    est_error: float


def _alpha_of(order) -> float:
    if isinstance(order, MLOrder):
        return order.alpha
    return MLOrder(float(order)).alpha


# ---------------------------------------------------------------------------
# Gamma
# ---------------------------------------------------------------------------

def gamma_real(x: float) -> float:
    """Gamma(x) for real non-pole x; relative accuracy <= 1e-13 on |x| <= 170."""
    x = float(x)
    if not math.isfinite(x):
        raise DomainError(f"gamma_real needs a finite argument, got {x}")
    if x <= 0.0 and x == math.floor(x):
        raise PoleError(f"Gamma has a pole at {x}")
    if x > GAMMA_OVERFLOW:
        raise RangeError(f"Gamma({x}) overflows double precision (x > {GAMMA_OVERFLOW})")
    return math.gamma(x)


def recip_gamma(x: float) -> float:
    """1/Gamma(x), entire in x; exactly 0 at the poles x = 0, -1, -2, ...

    For x < 0.5 the reflection formula 1/Gamma(x) = sin(pi x) Gamma(1-x) / pi
    is used so pole zeros come out exact rather than as 1/inf.
    """
    x = float(x)
    if x <= 0.0 and x == math.floor(x):
        return 0.0
    if x < 0.5:
        # sin(pi x) evaluated via the fractional part to keep accuracy for large |x|
        m = math.floor(x)
        s = math.sin(math.pi * (x - m))
        if int(m) % 2:
            s = -s
        if 1.0 - x > GAMMA_OVERFLOW:
            return 0.0  # Gamma(1-x) overflow means the reciprocal underflows
        return s * math.gamma(1.0 - x) / math.pi
    if x > GAMMA_OVERFLOW:
        return 0.0
    return 1.0 / math.gamma(x)


# ---------------------------------------------------------------------------
# Mittag-Leffler: radii and sector
# ---------------------------------------------------------------------------

def series_radius(order) -> float:
    """Outer radius up to which the power-series branch is supported.

    max(10, 5*(2/alpha)^alpha, 2*24^alpha).  The third term keeps the overlap
    annulus inside the region where the divergent asymptotic branch can still
    reach ~1e-9 (its optimal-truncation floor is ~exp(-|z|^(1/alpha))); without
    it the annulus is unusable for alpha above ~0.6.
    """
    a = _alpha_of(order)
    return max(10.0, 5.0 * (2.0 / a) ** a, 2.0 * 24.0 ** a)


def asymptotic_radius(order) -> float:
    """Inner radius from which the asymptotic branch is supported."""
    return series_radius(order) / 2.0


def switch_radius(order) -> float:
    """Dispatch point used by ml_eval, inside the overlap annulus.

    Sits near 1.35*24^alpha (where both branches cost little and deliver
    ~1e-10), clipped into the committed overlap annulus.
    """
    a = _alpha_of(order)
    lo = asymptotic_radius(a) * 1.02
    hi = series_radius(a) * 0.98
    return min(max(1.35 * 24.0 ** a, lo), hi)


def sector_angle(order) -> float:
    """Boundary angle theta between the exponential and algebraic sectors.

    Midpoint of the admissible interval (pi*alpha/2, min(pi, alpha*pi)).
    """
    a = _alpha_of(order)
    return (math.pi * a / 2.0 + min(math.pi, a * math.pi)) / 2.0


# ---------------------------------------------------------------------------
# Mittag-Leffler: series branch
# ---------------------------------------------------------------------------

_MAX_SERIES_TERMS = 400_000
_mp_lock = threading.Lock()  # mpmath working precision is process-global


def _series_mp(alpha: float, z: complex, tol: float, max_terms: int):
    """Direct summation of sum z^k / Gamma(alpha k + 1) at adaptive precision.

    Working precision covers the exp(|z|^(1/alpha)) peak-term cancellation.
    For alpha = p/q with small q, Gamma(alpha k + 1) advances by integer steps
    along k = r (mod q), so per-term Gamma calls collapse to running products.
    """
    s = abs(z)
    cancel_digits = (s ** (1.0 / alpha)) * _LOG10_E if s > 0 else 0.0
    dps = int(cancel_digits) + 30
    frac = Fraction(alpha).limit_denominator(64)
    streams = abs(float(frac) - alpha) < 1e-15
    with _mp_lock, mpmath.workdps(dps):
        # The Gamma arguments must be formed at working precision, and for the
        # stream recurrence alpha*q must equal p exactly, so a near-rational
        # alpha is evaluated at exactly p/q (the two orders differ by <1e-16,
        # which moves E_alpha by far less than the output precision; a
        # float-rounded argument against the exp(|z|^(1/alpha)) peak term
        # would leave pure rounding junk).
        if streams:
            amp = mpmath.mpf(frac.numerator) / frac.denominator
        else:
            amp = mpmath.mpf(alpha)
        zz = mpmath.mpc(z.real, z.imag)
        total = mpmath.mpc(0)
        zk = mpmath.mpc(1)
        peak = 1.0
        if streams:
            q, p = frac.denominator, frac.numerator
            g = [mpmath.gamma(amp * r + 1) for r in range(q)]
        k = 0
        while k <= max_terms:
            if streams:
                gk = g[k % q]
            else:
                gk = mpmath.gamma(amp * k + 1)
            term = zk / gk
            total += term
            mag = float(abs(term))
            if mag > peak:
                peak = mag
            if k > 1 and mag < tol and mag < peak:
                rounding = peak * 10.0 ** (-dps + 2)
                return complex(total), k + 1, 2.0 * mag + rounding
            if streams:
                a0 = amp * k + 1
                prod = mpmath.mpf(1)
                for i in range(p):
                    prod *= a0 + i
                g[k % q] *= prod
            zk *= zz
            k += 1
    raise ConvergenceError(
        f"Mittag-Leffler series did not meet tol={tol} within {max_terms} terms "
        f"(alpha={alpha}, |z|={s:.3g})"
    )


def ml_series(order, z: complex, tol: float = 1e-18,
              max_terms: int = _MAX_SERIES_TERMS):
    """Power-series evaluation of E_alpha(z) = sum_k z^k / Gamma(alpha k + 1).

    Valid for |z| <= series_radius(order).  Terms are summed until their
    magnitude falls below ``tol`` past the peak term.  Returns
    (value, EvalDiagnostics).
    """
    a = _alpha_of(order)
    z = complex(z)
    if not (math.isfinite(z.real) and math.isfinite(z.imag)):
        raise DomainError("ml_series needs a finite argument")
    if tol <= 0:
        raise DomainError("tol must be positive")
    if abs(z) > series_radius(a) * (1.0 + 1e-12):
        raise DomainError(
            f"|z|={abs(z):.4g} exceeds series_radius({a})={series_radius(a):.4g}"
        )
    if z == 0:
        return complex(1.0), EvalDiagnostics("series", 1, 0.0)
    val, nterms, err = _series_mp(a, z, tol, max_terms)
    return val, EvalDiagnostics("series", nterms, err)


# ---------------------------------------------------------------------------
# Mittag-Leffler: asymptotic branch
# ---------------------------------------------------------------------------

def _algebraic_sum(alpha: float, z: complex, k: int) -> complex:
    zinv = 1.0 / z
    zp = zinv
    total = 0j
    for j in range(1, k + 1):
        total += zp * recip_gamma(1.0 - alpha * j)
        zp *= zinv
    return total


def _exp_term(alpha: float, z: complex) -> complex:
    w = cmath.exp(cmath.log(z) / alpha)
    if w.real > 700.0:
        raise RangeError(
            f"exp(z^(1/alpha)) overflows for z={z}, alpha={alpha}"
        )
    return cmath.exp(w) / alpha


def ml_asymptotic(order, z: complex, k: int):
    """k-term large-argument expansion of E_alpha(z).

    For |arg z| <= theta (see sector_angle) the exponential contribution
    exp(z^(1/alpha))/alpha is included; in the remaining sector the expansion
    is purely algebraic, -sum_{j<=k} z^-j / Gamma(1 - alpha j).  The committed
    error estimate is |z|^-(1+k) * max_{j<=k+1} |1/Gamma(1 - alpha j)|.
    """
    a = _alpha_of(order)
    z = complex(z)
    if k < 1:
        raise DomainError("k must be >= 1")
    s = abs(z)
    if s < asymptotic_radius(a) * (1.0 - 1e-9):
        raise DomainError(
            f"|z|={s:.4g} below asymptotic_radius({a})={asymptotic_radius(a):.4g}"
        )
    val = -_algebraic_sum(a, z, k)
    phi = abs(cmath.phase(z))
    cmax = max(abs(recip_gamma(1.0 - a * j)) for j in range(1, k + 2))
    est = s ** (-(1.0 + k)) * cmax
    if phi <= sector_angle(a):
        val += _exp_term(a, z)
    elif phi / a <= math.pi * (1.0 + 1e-12):
        # recessive exponential omitted by the algebraic branch: it decays like
        # exp(|z|^(1/a) cos(phi/a)) and dominates the error floor near the
        # sector boundary (cos < 0 throughout this range)
        est += math.exp(s ** (1.0 / a) * math.cos(phi / a)) / a
    return val, EvalDiagnostics("asymptotic", k, est)


def _optimal_k(alpha: float, s: float, cap: int = 40) -> int:
    """Truncation index minimizing |z|^-j / |Gamma(1 - alpha j)| over j <= cap."""
    best_j, best = 1, math.inf
    mag = 1.0
    for j in range(1, cap + 1):
        mag /= s
        c = abs(recip_gamma(1.0 - alpha * j))
        if c > 0.0 and mag * c < best:
            best = mag * c
            best_j = j
    return best_j


# ---------------------------------------------------------------------------
# Mittag-Leffler: dispatching evaluator
# ---------------------------------------------------------------------------

def ml_eval(order, z: complex):
    """E_alpha(z) for 0 < alpha <= 1, any argument angle.

    Dispatches the power series below switch_radius(order) and the
    optimally-truncated asymptotic expansion above it.  alpha = 1 reduces to
    exp(z) exactly (every algebraic coefficient vanishes and the expansion
    cannot track the exponentially small values near arg z = pi).
    """
    a = _alpha_of(order)
    z = complex(z)
    if a == 1.0:
        return cmath.exp(z), EvalDiagnostics("closed-form", 1, 4e-16 * abs(cmath.exp(z)))
    s = abs(z)
    if s == 0.0:
        return complex(1.0), EvalDiagnostics("series", 1, 0.0)
    if s <= switch_radius(a):
        return ml_series(a, z)
    k = _optimal_k(a, s)
    return ml_asymptotic(a, z, k)


# --- fast vectorized evaluator on the ray z = -i s -------------------------

_axis_cache: dict[float, tuple] = {}
_axis_lock = threading.Lock()
_CHEB_TARGET = 5e-10


def _build_axis_cache(alpha: float):
    """Chebyshev model of s -> E_alpha(-i s) on [0, switch_radius]."""
    sw = switch_radius(alpha)
    n = 256
    while True:
        i = np.arange(n)
        u = np.cos(math.pi * (i + 0.5) / n)
        ss = (u + 1.0) * 0.5 * sw
        vals = np.array([_series_mp(alpha, complex(0.0, -s), 1e-18,
                                    _MAX_SERIES_TERMS)[0] for s in ss])
        basis = np.cos(math.pi * np.outer(np.arange(n), (i + 0.5)) / n)
        coef = (2.0 / n) * basis @ vals
        coef[0] *= 0.5
        # keep only meaningful coefficients
        keep = max(8, int(np.max(np.nonzero(np.abs(coef) > 1e-14 * np.max(np.abs(coef)))[0])) + 1)
        coef = coef[:keep]
        probe = np.linspace(sw * 1e-3, sw * 0.999, 17)
        approx = np.polynomial.chebyshev.chebval(2.0 * probe / sw - 1.0, coef)
        exact = np.array([_series_mp(alpha, complex(0.0, -s), 1e-18,
                                     _MAX_SERIES_TERMS)[0] for s in probe])
        err = np.max(np.abs(approx - exact) / np.maximum(np.abs(exact), 1e-30))
        if err <= _CHEB_TARGET or n >= 1024:
            break
        n *= 2
    if err > _CHEB_TARGET:
        raise ConvergenceError(
            f"axis interpolant for alpha={alpha} stuck at rel err {err:.2e}"
        )
    cs = np.array([recip_gamma(1.0 - alpha * j) for j in range(0, 44)])
    return sw, coef, cs


def ml_neg_imag_axis(order, s) -> np.ndarray:
    """Vectorized E_alpha(-i s) for s >= 0 (the multiplier ray of the kernels).

    Below the switch radius a cached Chebyshev interpolant (built once per
    alpha from the exact series, validated to 5e-10 relative) is used; above
    it the vectorized asymptotic expansion with per-point optimal truncation.
    """
    a = _alpha_of(order)
    s = np.asarray(s, dtype=float)
    scalar = s.ndim == 0
    s = np.atleast_1d(s)
    if np.any(s < 0):
        raise DomainError("ml_neg_imag_axis needs s >= 0")
    if a == 1.0:
        out = np.exp(-1j * s)
        return out[0] if scalar else out
    with _axis_lock:
        entry = _axis_cache.get(a)
        if entry is None:
            entry = _build_axis_cache(a)
            _axis_cache[a] = entry
    sw, coef, cs = entry
    out = np.empty(s.shape, dtype=complex)
    lo = s <= sw
    if np.any(lo):
        out[lo] = np.polynomial.chebyshev.chebval(2.0 * s[lo] / sw - 1.0, coef)
    hi = ~lo
    if np.any(hi):
        sh = s[hi]
        acc = np.zeros(sh.shape, dtype=complex)
        win = np.full(sh.shape, 1.0)  # |z|^-j running power
        prev = np.full(sh.shape, np.inf)
        active = np.ones(sh.shape, dtype=bool)
        ij = 1j
        for j in range(1, 41):
            win = win / sh
            c = cs[j]
            ij_j = (1j) ** j
            mag = abs(c) * win
            live = active & ((mag < prev) | (j <= 2))
            acc[live] -= ij_j * c * win[live]
            prev = np.where(live, np.where(mag > 0, mag, prev), prev)
            active &= live | (mag == 0.0)
            if not active.any() and j > 4:
                break
        if sector_angle(a) >= math.pi / 2.0:
            # arg(-is) = -pi/2 falls in the exponential sector for alpha >= 2/3;
            # the contribution decays like exp(s^(1/alpha) cos(pi/(2 alpha)))
            w = sh ** (1.0 / a) * np.exp(-1j * math.pi / (2.0 * a))
            acc += np.exp(w) / a
        out[hi] = acc
    return out[0] if scalar else out


# ---------------------------------------------------------------------------
# Bessel J_nu and the radial factor Omega_n
# ---------------------------------------------------------------------------

_SERIES_X_MAX = 12.0
_QUAD_X_MAX = 500.0
_jacobi_cache: dict[tuple, tuple] = {}


def _bessel_series(nu: float, x: float):
    half = 0.5 * x
    term = half ** nu * recip_gamma(nu + 1.0)
    total = term
    k = 0
    while True:
        k += 1
        term *= -(half * half) / (k * (nu + k))
        total += term
        if abs(term) < 1e-17 * max(1.0, abs(total)) or k > 200:
            break
    return total, k + 1


def _poisson_core(nu: float, x: float):
    """Poisson-representation quadrature via Gauss-Jacobi nodes.

    J_nu(x) = (x/2)^nu / (Gamma(1/2) Gamma(nu+1/2)) * int_-1^1 e^{ixt}(1-t^2)^(nu-1/2) dt;
    the weight is absorbed into the Jacobi rule, so only the oscillation limits
    the node count.  Closed forms short-circuit nu = +-1/2.
    """
    from scipy.special import roots_jacobi

    if nu == -0.5:
        return math.sqrt(2.0 / (math.pi * x)) * math.cos(x), 1
    if nu == 0.5:
        return math.sqrt(2.0 / (math.pi * x)) * math.sin(x), 1
    npts = min(int(0.62 * x) + 40, 400)
    key = (round(nu, 12), npts)
    nodes = _jacobi_cache.get(key)
    if nodes is None:
        tq, wq = roots_jacobi(npts, nu - 0.5, nu - 0.5)
        nodes = (tq, wq)
        _jacobi_cache[key] = nodes
    tq, wq = nodes
    integral = float(np.dot(wq, np.cos(x * tq)))
    pref = (0.5 * x) ** nu / (math.gamma(0.5) * math.gamma(nu + 0.5))
    return pref * integral, npts


def _bessel_poisson(nu: float, x: float):
    """Poisson quadrature seeded at the fractional order, then recursed up.

    The prefactor (x/2)^nu amplifies rule round-off for larger nu, so seeds are
    taken at nu0 in [-1/2, 1/2) and J is climbed with the standard three-term
    recurrence, which is forward-stable while nu stays well below x."""
    m = math.floor(nu + 0.5)
    base = nu - m
    if m == 0:
        return _poisson_core(nu, x)
    ja, na = _poisson_core(base, x)
    jb, nb = _poisson_core(base + 1.0, x)
    order = base + 1.0
    for _ in range(m - 1):
        ja, jb = jb, (2.0 * order / x) * jb - ja
        order += 1.0
    return jb, na + nb


_ASYM_TERMS = 4  # pairs of P/Q correction terms


def _pq_coeffs(nu: float, m: int) -> float:
    """m-th coefficient a_m of the large-x cosine expansion of J_nu."""
    mu = 4.0 * nu * nu
    num = 1.0
    for l in range(1, m + 1):
        num *= mu - (2 * l - 1) ** 2
    return num / (math.factorial(m) * 8.0 ** m)


def _bessel_asymptotic(nu: float, x: float):
    omega = x - 0.5 * math.pi * nu - 0.25 * math.pi
    px = 1.0
    qx = 0.0
    for m in range(1, _ASYM_TERMS + 1):
        am = _pq_coeffs(nu, m)
        if m % 2 == 0:
            px += ((-1.0) ** (m // 2)) * am / x ** m
        else:
            qx += ((-1.0) ** ((m - 1) // 2)) * am / x ** m
    val = math.sqrt(2.0 / (math.pi * x)) * (math.cos(omega) * px - math.sin(omega) * qx)
    return val, _ASYM_TERMS


def bessel_j(nu: float, x: float):
    """J_nu(x) for nu >= -1/2, x >= 0; relative accuracy target 1e-10.

    Closed forms at nu = +-1/2; power series for x <= 12; Poisson-representation
    quadrature for 12 < x <= 500; cosine asymptotics with correction terms
    beyond.  Returns (value, EvalDiagnostics).
    """
    nu = float(nu)
    x = float(x)
    if nu < -0.5:
        raise DomainError(f"bessel_j needs nu >= -1/2, got {nu}")
    if x < 0.0:
        raise DomainError(f"bessel_j needs x >= 0, got {x}")
    if nu == -0.5:
        if x == 0.0:
            return math.inf, EvalDiagnostics("closed-form", 1, 0.0)
        v = math.sqrt(2.0 / (math.pi * x)) * math.cos(x)
        return v, EvalDiagnostics("closed-form", 1, 4e-16 * abs(v) + 1e-300)
    if nu == 0.5:
        if x == 0.0:
            return 0.0, EvalDiagnostics("closed-form", 1, 0.0)
        v = math.sqrt(2.0 / (math.pi * x)) * math.sin(x)
        return v, EvalDiagnostics("closed-form", 1, 4e-16 * abs(v) + 1e-300)
    if x <= _SERIES_X_MAX:
        v, n = _bessel_series(nu, x)
        return v, EvalDiagnostics("series", n, 1e-13 * max(abs(v), 1e-8))
    if x <= _QUAD_X_MAX:
        v, n = _bessel_poisson(nu, x)
        return v, EvalDiagnostics("poisson-quadrature", n, 1e-11 * max(abs(v), x ** -0.5))
    v, n = _bessel_asymptotic(nu, x)
    est = math.sqrt(2.0 / (math.pi * x)) * abs(_pq_coeffs(nu, _ASYM_TERMS + 1)) / x ** (_ASYM_TERMS + 1)
    return v, EvalDiagnostics("asymptotic", n, est)


def omega_n(n: int, s: float) -> float:
    """Radial Fourier factor s^((2-n)/2) J_((n-2)/2)(s); at s=0 its limit
    2^((2-n)/2) / Gamma(n/2)."""
    if n < 1:
        raise DomainError("dimension n must be >= 1")
    s = float(s)
    if s < 0.0:
        raise DomainError("omega_n needs s >= 0")
    if s == 0.0:
        return 2.0 ** ((2.0 - n) / 2.0) / math.gamma(n / 2.0)
    nu = (n - 2.0) / 2.0
    if n == 1:
        return math.sqrt(2.0 / math.pi) * math.cos(s)
    val, _ = bessel_j(nu, s)
    return s ** ((2.0 - n) / 2.0) * val


def omega_n_many(n: int, s: np.ndarray) -> np.ndarray:
    """Vectorized Omega_n over an array of radii (quadrature hot path).

    Uses the closed form for n = 1 and scipy's J_nu otherwise; agreement with
    the scalar omega_n is enforced by the test suite.
    """
    if n < 1:
        raise DomainError("dimension n must be >= 1")
    s = np.asarray(s, dtype=float)
    if n == 1:
        return math.sqrt(2.0 / math.pi) * np.cos(s)
    out = np.empty(s.shape, dtype=float)
    zero = s == 0.0
    out[zero] = 2.0 ** ((2.0 - n) / 2.0) / math.gamma(n / 2.0)
    nz = ~zero
    nu = (n - 2.0) / 2.0
    out[nz] = s[nz] ** ((2.0 - n) / 2.0) * _scipy_jv(nu, s[nz])
    return out
