"""Panel quadrature utilities: Gauss-Legendre panels, a Filon-Legendre rule
for integrals against cos(x rho) with large x, and closed-form oscillatory
tail integrals.

The Filon rule expands the smooth factor in Legendre polynomials per panel and
uses the exact moments  int_-1^1 P_k(u) e^{i kappa u} du = 2 i^k j_k(kappa),
so the panel size is set by the smooth factor alone, independent of x.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np
from numpy.polynomial.legendre import leggauss, legvander
from scipy.special import spherical_jn

from .errors import QuadratureError

__all__ = [
    "gl_rule",
    "panel_nodes",
    "panel_integrate",
    "log_breaks",
    "refine_breaks_by_phase",
    "FilonPlan",
    "filon_cos",
    "exp_tail",
    "bessel_power_tail",
]

_gl_cache: dict[int, tuple[np.ndarray, np.ndarray]] = {}


def gl_rule(order: int):
    rule = _gl_cache.get(order)
    if rule is None:
        rule = leggauss(order)
        _gl_cache[order] = rule
    return rule


def panel_nodes(breaks: np.ndarray, order: int):
    """All Gauss-Legendre nodes and weights for the given panel breakpoints."""
    breaks = np.asarray(breaks, dtype=float)
    u, w = gl_rule(order)
    a = breaks[:-1]
    h = 0.5 * np.diff(breaks)
    c = a + h
    nodes = (c[:, None] + h[:, None] * u[None, :]).ravel()
    weights = (h[:, None] * w[None, :]).ravel()
    return nodes, weights


def panel_integrate(f, breaks, order: int = 12):
    """int f over [breaks[0], breaks[-1]] with per-panel Gauss-Legendre."""
    nodes, weights = panel_nodes(np.asarray(breaks, float), order)
    return np.dot(f(nodes), weights)


def log_breaks(a: float, b: float, per_decade: int = 16) -> np.ndarray:
    """Geometric breakpoints on [a, b], a > 0."""
    if not 0 < a < b:
        raise QuadratureError(f"log_breaks needs 0 < a < b, got [{a}, {b}]")
    n = max(1, int(math.ceil(per_decade * math.log10(b / a))))
    return np.geomspace(a, b, n + 1)


def refine_breaks_by_phase(breaks, rate: float, max_phase: float = 3.5) -> np.ndarray:
    """Subdivide panels so that rate * width <= max_phase on each panel."""
    breaks = np.asarray(breaks, dtype=float)
    if rate <= 0:
        return breaks
    out = [breaks[0]]
    for a, b in zip(breaks[:-1], breaks[1:]):
        nsub = max(1, int(math.ceil((b - a) * rate / max_phase)))
        out.extend(a + (b - a) * (np.arange(1, nsub + 1) / nsub))
    return np.asarray(out)


# ---------------------------------------------------------------------------
# Filon-Legendre rule for  int g(rho) cos(x rho) drho
# ---------------------------------------------------------------------------

_FILON_DEG = 20
_FILON_NODES = 24

_f_u, _f_w = leggauss(_FILON_NODES)
_f_vander = legvander(_f_u, _FILON_DEG)
# a_k = (2k+1)/2 * sum_i w_i P_k(u_i) g(u_i)
_f_proj = (np.arange(_FILON_DEG + 1) + 0.5)[:, None] * (_f_vander * _f_w[:, None]).T
_f_ik = (1j) ** np.arange(_FILON_DEG + 1)


@dataclass
class FilonPlan:
    """Precomputed moment tensor for fixed panels and a fixed x grid.

    Sweeps reuse one plan across many integrands: integrate() is then a single
    tensor contraction against the integrand values at the plan's nodes.
    """

    breaks: np.ndarray
    xs: np.ndarray
    nodes: np.ndarray          # (npanels, FILON_NODES)
    _mom_plus: np.ndarray      # (npanels, DEG+1, nx): h * e^{i x c} M_k(x h)
    _mom_minus: np.ndarray

    @classmethod
    def build(cls, breaks, xs):
        breaks = np.asarray(breaks, dtype=float)
        xs = np.atleast_1d(np.asarray(xs, dtype=float))
        if np.any(xs < 0):
            raise QuadratureError("FilonPlan expects x >= 0")
        a = breaks[:-1]
        h = 0.5 * np.diff(breaks)
        c = a + h
        nodes = c[:, None] + h[:, None] * _f_u[None, :]
        kappa = h[:, None] * xs[None, :]                      # (np, nx)
        jn = spherical_jn(np.arange(_FILON_DEG + 1)[None, :, None],
                          kappa[:, None, :])                   # (np, DEG+1, nx)
        phase = np.exp(1j * c[:, None] * xs[None, :])          # (np, nx)
        mk = 2.0 * _f_ik[None, :, None] * jn
        mom_plus = h[:, None, None] * phase[:, None, :] * mk
        mom_minus = h[:, None, None] * np.conj(phase)[:, None, :] * np.conj(mk)
        return cls(breaks, xs, nodes, mom_plus, mom_minus)

    def integrate(self, gvals: np.ndarray) -> np.ndarray:
        """gvals: g at self.nodes, shape (npanels, FILON_NODES); returns (nx,)."""
        coef = np.einsum("kn,pn->pk", _f_proj, gvals)
        out = 0.5 * (np.einsum("pk,pkx->x", coef, self._mom_plus)
                     + np.einsum("pk,pkx->x", coef, self._mom_minus))
        return out

    def coef_tail_fraction(self, gvals: np.ndarray) -> float:
        """Relative size of the last Legendre coefficients: projection-error proxy."""
        coef = np.einsum("kn,pn->pk", _f_proj, gvals)
        mags = np.abs(coef)
        scale = mags.max() + 1e-300
        return float(mags[:, -3:].max() / scale)


def filon_cos(g, breaks, xs, tol: float = 1e-9, max_splits: int = 3):
    """int g(rho) cos(rho x) drho over the panels, for every x in xs.

    Panels are bisected (up to max_splits rounds) until the Legendre tail
    coefficients of g drop below tol relative to the largest coefficient.
    """
    breaks = np.asarray(breaks, dtype=float)
    for _ in range(max_splits + 1):
        plan = FilonPlan.build(breaks, xs)
        gvals = np.asarray(g(plan.nodes.ravel())).reshape(plan.nodes.shape)
        if plan.coef_tail_fraction(gvals) <= tol:
            return plan.integrate(gvals)
        mids = 0.5 * (breaks[:-1] + breaks[1:])
        breaks = np.sort(np.concatenate([breaks, mids]))
    plan = FilonPlan.build(breaks, xs)
    gvals = np.asarray(g(plan.nodes.ravel())).reshape(plan.nodes.shape)
    return plan.integrate(gvals)


# ---------------------------------------------------------------------------
# Oscillatory tails
# ---------------------------------------------------------------------------

def exp_tail(p: float, big_a: float, tol: float = 1e-13):
    """(int_A^inf u^p e^{iu} du, bound) by integration by parts.

    The expansion is truncated at its smallest term (it diverges eventually),
    so the bound cannot drop below ~exp(-A); choose A >= 12 for 1e-6 work.
    """
    if big_a <= 1.0:
        raise QuadratureError("exp_tail needs A > 1")
    eia = complex(math.cos(big_a), math.sin(big_a))
    acc = 0j
    c = 1.0 + 0j
    pm = p
    best_bound = math.inf
    for _ in range(64):
        term = 1j * c * big_a ** pm * eia
        nxt = abs(c * pm) * big_a ** (pm - 1.0)
        if abs(term) > best_bound:
            break  # past the optimal truncation point
        acc += term
        best_bound = min(best_bound, 2.0 * nxt)
        c *= 1j * pm
        pm -= 1.0
        if pm < 0 and nxt < tol * max(abs(acc), 1e-300):
            break
    return acc, best_bound


_pq_cache: dict[tuple, np.ndarray] = {}


def _asym_a(nu: float, mmax: int) -> np.ndarray:
    """Coefficients a_m of the cosine expansion of J_nu at large argument."""
    key = (nu, mmax)
    out = _pq_cache.get(key)
    if out is None:
        mu = 4.0 * nu * nu
        vals = [1.0]
        num = 1.0
        for m in range(1, mmax + 1):
            num *= mu - (2 * m - 1) ** 2
            vals.append(num / (math.factorial(m) * 8.0 ** m))
        out = np.asarray(vals)
        _pq_cache[key] = out
    return out


def bessel_power_tail(n: int, p: float, big_a: float, mmax: int = 4):
    """(int_A^inf u^p * u^((2-n)/2) J_((n-2)/2)(u) du, bound).

    Uses J_nu(u) ~ sqrt(2/(pi u)) Re[e^{i(u - phi0)} sum_m i^m a_m u^-m] and the
    exp_tail primitive per term.  Requires A large enough that the combined
    powers decay (A >= ~10 in practice).
    """
    nu = (n - 2.0) / 2.0
    q = p + (2.0 - n) / 2.0 - 0.5  # power multiplying the cosine factor
    phi0 = nu * math.pi / 2.0 + math.pi / 4.0
    rot = complex(math.cos(phi0), -math.sin(phi0))  # e^{-i phi0}
    a = _asym_a(nu, mmax)
    total = 0.0
    bound = 0.0
    for m in range(mmax + 1):
        if a[m] == 0.0:
            continue
        val, b = exp_tail(q - m, big_a)
        contrib = (rot * (1j) ** m * a[m]) * val
        total += contrib.real
        bound += abs(a[m]) * b
    # truncation of the J asymptotic series itself
    pw = q - (mmax + 1)
    if pw < -1.0:
        bound += abs(a[mmax] * 8.0) * big_a ** (pw + 1.0) / (-(pw + 1.0))
    else:
        raise QuadratureError(
            f"bessel_power_tail: power {pw} too slow to bound; raise A or mmax"
        )
    scale = math.sqrt(2.0 / math.pi)
    return scale * total, scale * bound
