import math

import numpy as np
import pytest

from fracdisp import kernel as kn
from fracdisp.errors import DomainError
from fracdisp.freq import DyadicBand, build_cutoff
from fracdisp.specfun import ml_neg_imag_axis, recip_gamma


# ---------------------------------------------------------------------------
# Riesz constants
# ---------------------------------------------------------------------------

def test_riesz_closed_values():
    assert abs(kn.riesz_constant(1, 0.5) - math.sqrt(2 * math.pi)) < 1e-14
    assert abs(kn.riesz_constant(3, 2.0) - 2 * math.pi ** 2) < 1e-12
    assert abs(kn.riesz_constant(2, 1.0) - 2 * math.pi) < 1e-13


def test_riesz_domain():
    with pytest.raises(DomainError):
        kn.riesz_constant(1, 0.0)
    with pytest.raises(DomainError):
        kn.riesz_constant(1, 1.0)


def test_riesz_against_transform():
    # int |xi|^-theta e^{i x xi} dxi in 1d equals C(1,theta) |x|^(theta-1).
    # Substituting rho = u^2 removes the endpoint singularity; averaging the
    # partial sums at the cosine zeros handles the conditional tail.
    theta, x = 0.5, 1.7
    pred = kn.riesz_constant(1, theta) * x ** (theta - 1.0)
    partials = []
    acc = 0.0
    u_prev = 0.0
    for k in range(4000):
        u_next = math.sqrt((k + 0.5) * math.pi / x)
        uu = np.linspace(u_prev, u_next, 129)
        acc += 4.0 * np.trapezoid(uu ** (1.0 - 2.0 * theta) * np.cos(uu ** 2 * x), uu)
        u_prev = u_next
        if k >= 3990:
            partials.append(acc)
    est = 0.5 * (np.array(partials[:-1]) + np.array(partials[1:])).mean()
    assert abs(est - pred) <= 1e-3 * abs(pred)


# ---------------------------------------------------------------------------
# Band kernel
# ---------------------------------------------------------------------------

def test_band_t0_center_against_trapezoid():
    spec = kn.KernelSpec(1, 0.5, 1.0)
    s = kn.kernel_band(spec, 0.0, DyadicBand(0), 0.0)
    cut = build_cutoff()
    rr = np.linspace(0.5, 2.0, 400001)
    brute = np.trapezoid(cut.psi(0, rr), rr) * math.sqrt(2 / math.pi) * math.sqrt(2 * math.pi)
    assert abs(s.value.real - brute) < 1e-10
    assert abs(s.value.imag) < 1e-12


def test_band_triangle_bound():
    spec = kn.KernelSpec(1, 0.5, 1.0)
    cut = build_cutoff()
    rr = np.linspace(0.5, 2.0, 20001)
    for t, j, x in ((10.0, 0, 0.3), (100.0, 2, 0.02), (0.0, 1, 1.0)):
        band = DyadicBand(j)
        lam = t ** spec.alpha * band.N ** spec.beta
        s = kn.kernel_band(spec, t, band, x)
        env = np.abs(ml_neg_imag_axis(spec.alpha, lam * rr ** spec.beta))
        bound = (band.N ** spec.n * spec.prefactor * math.sqrt(2 / math.pi)
                 * np.trapezoid(env * cut.psi(0, rr), rr))
        assert abs(s.value) <= bound * (1.0 + 1e-9)


def test_band_scaling_identity():
    # (t, N, x) and (t', N', x') with equal lambda and N x give values in the
    # exact ratio (N/N')^n
    spec = kn.KernelSpec(1, 0.5, 1.0)
    t1, j1, x1 = 16.0, 2, 0.125          # lam = 4 * 4 = 16, Nx = 0.5
    t2, j2, x2 = 256.0, 0, 0.5           # lam = 16 * 1 = 16, Nx = 0.5
    v1 = kn.kernel_band(spec, t1, DyadicBand(j1), x1).value
    v2 = kn.kernel_band(spec, t2, DyadicBand(j2), x2).value
    assert abs(v1 - 4.0 * v2) <= 1e-10 * abs(v1)


def test_band_classical_alpha_one_against_trapezoid():
    spec = kn.KernelSpec(1, 1.0, 2.0)
    cut = build_cutoff()
    t, x = 3.0, 0.7
    s = kn.kernel_band(spec, t, DyadicBand(0), x)
    rr = np.linspace(0.5, 2.0, 2_000_001)
    integrand = np.exp(-1j * t * rr ** 2) * cut.psi(0, rr) * np.cos(rr * x)
    brute = math.sqrt(2 * math.pi) * math.sqrt(2 / math.pi) * np.trapezoid(integrand, rr)
    assert abs(s.value - brute) < 1e-8


def test_sup_search_grid_refinement_stability():
    spec = kn.KernelSpec(1, 0.5, 1.0)
    t = 400.0
    x1, v1 = kn.sup_search(spec, t, DyadicBand(0), kn.default_x_grid(1.0, points=512))
    x2, v2 = kn.sup_search(spec, t, DyadicBand(0), kn.default_x_grid(1.0, points=1024))
    assert abs(v1 - v2) <= 1e-3 * v2


def test_prop13_split_bounds():
    spec = kn.KernelSpec(1, 0.5, 1.0)
    prev = None
    for lam in (10.0, 100.0, 1000.0):
        t = lam ** 2
        i1, i2 = kn.prop13_split(spec, t, DyadicBand(0), 0.01)
        # I1 quadratic smallness; I2 carries the full lam^-1 mass
        assert abs(i1) * lam ** 2 <= 0.1
        assert 0.2 <= abs(i2) * lam <= 0.5
        # sup bound from the split: sup >= (|I2| - |I1|) * N^n * c_n
        _, sup = kn.sup_search(spec, t, DyadicBand(0))
        assert sup >= (abs(i2) - abs(i1)) * spec.prefactor * 0.99


# ---------------------------------------------------------------------------
# Full kernel
# ---------------------------------------------------------------------------

def test_kernel_full_requires_positive_radius_critical():
    spec = kn.KernelSpec(1, 0.5, 0.5)
    with pytest.raises(DomainError):
        kn.kernel_full(spec, 1.0, 0.0)


def test_kernel_full_bounded_at_zero_subcritical():
    spec = kn.KernelSpec(1, 0.5, 2.0)
    s = kn.kernel_full(spec, 1.0, 0.0)
    assert np.isfinite(s.value.real) and np.isfinite(s.value.imag)
    assert abs(s.value) > 0


def test_kernel_scaling_identity():
    spec = kn.KernelSpec(1, 0.5, 0.5)
    rng = np.random.default_rng(5)
    for _ in range(6):
        t = 10.0 ** rng.uniform(0.0, 3.0)
        x = 10.0 ** rng.uniform(-2.0, 1.0)
        k1 = kn.kernel_full(spec, t, x).value
        eta = x * t ** (-spec.alpha / spec.beta)
        k2 = t ** (-spec.n * spec.alpha / spec.beta) * kn.kernel_full(spec, 1.0, eta).value
        assert abs(k1 - k2) <= 1e-8 * abs(k1)


def test_kernel_full_tail_bound_reported():
    spec = kn.KernelSpec(1, 0.5, 1.0)
    s = kn.kernel_full(spec, 10.0, 0.5)
    assert s.diagnostics.tail_bound >= 0.0
    assert s.diagnostics.panels > 10


def test_regime_classifier():
    assert kn.KernelSpec(1, 0.5, 2.0).regime == "subcritical"
    assert kn.KernelSpec(1, 0.5, 0.5).regime == "critical-or-super"
    assert kn.KernelSpec(1, 0.5, 0.5).resonance_order() == 2
    assert kn.KernelSpec(2, 0.5, 1.0).resonance_order() == 2
    assert kn.KernelSpec(1, 0.5, 0.7).resonance_order() is None


# ---------------------------------------------------------------------------
# Expansion residual and W_1
# ---------------------------------------------------------------------------

def test_expansion_residual_bounded_resonant_half():
    # alpha = 1/2, beta = n/2: the resonant log coefficient vanishes
    spec = kn.KernelSpec(1, 0.5, 0.5)
    etas = np.geomspace(1e-3, 1e-1, 5)
    res = [kn.expansion_residual(spec, 1.0, e) for e in etas]
    assert max(res) / min(res) <= 10.0
    raw = abs(kn.kernel_full_rescaled(spec, etas[0]).value)
    assert raw / res[0] >= 10.0


def test_expansion_residual_log_growth():
    # alpha = 0.3 keeps the resonant k = m coefficient alive: log growth
    spec = kn.KernelSpec(1, 0.3, 0.5)
    r2 = kn.expansion_residual(spec, 1.0, 1e-2)
    r4 = kn.expansion_residual(spec, 1.0, 1e-4)
    slope = (r4 - r2) / math.log(1e2)
    expected = 2.0 * abs(recip_gamma(1.0 - 0.6))  # c_n Omega_n(0) |c_m| in 1d
    assert 0.5 * expected <= slope <= 1.5 * expected


def test_expansion_residual_empty_sum():
    spec = kn.KernelSpec(1, 0.5, 2.0)
    r = kn.expansion_residual(spec, 1.0, 0.3)
    k = abs(kn.kernel_full_rescaled(spec, 0.3).value)
    assert r == pytest.approx(k, rel=1e-12)


def test_w1_domain_and_values():
    with pytest.raises(DomainError):
        kn.w1_eval(2, 0.9)
    with pytest.raises(DomainError):
        kn.w1_eval(2, 0.0)
    w = kn.w1_eval(2, 1e-3)
    assert np.isfinite(w.real)
    # leading behavior (2 pi)^{n/2} Omega_n(0) log(1/eta) in n = 2
    assert abs(w.real / (2 * math.pi * math.log(1e3)) - 1.0) < 0.15
