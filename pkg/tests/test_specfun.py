import cmath
import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st
from scipy.special import jv as scipy_jv
from scipy.special import wofz

from fracdisp import specfun as sf
from fracdisp.errors import DomainError, PoleError, RangeError


# ---------------------------------------------------------------------------
# Gamma
# ---------------------------------------------------------------------------

def test_gamma_trivials():
    assert sf.gamma_real(1.0) == 1.0
    assert sf.gamma_real(5.0) == 24.0
    assert abs(sf.gamma_real(0.5) - math.sqrt(math.pi)) < 1e-15


def test_gamma_errors():
    with pytest.raises(PoleError):
        sf.gamma_real(0.0)
    with pytest.raises(PoleError):
        sf.gamma_real(-3.0)
    with pytest.raises(RangeError):
        sf.gamma_real(172.0)


def test_gamma_accuracy_against_mpmath():
    import mpmath
    for x in (0.1, 2.7, -0.5, -20.3, 61.2, 170.0, -150.5):
        ref = float(mpmath.gamma(x))
        assert abs(sf.gamma_real(x) - ref) <= 1e-13 * abs(ref)


def test_recip_gamma_poles_exact_zero():
    for m in range(0, 40):
        assert sf.recip_gamma(-float(m)) == 0.0


def test_recip_gamma_matches_reciprocal():
    for x in (0.3, 1.0, 4.5, -0.5, -7.3, 160.0):
        assert abs(sf.recip_gamma(x) - 1.0 / sf.gamma_real(x)) <= 2e-14 * abs(sf.recip_gamma(x))


@given(st.floats(min_value=-60.0, max_value=60.0))
@settings(max_examples=60, deadline=None)
def test_recip_gamma_inverse_property(x):
    if abs(x - round(x)) < 1e-3:
        return
    prod = sf.recip_gamma(x) * sf.gamma_real(x)
    assert abs(prod - 1.0) < 1e-12


# ---------------------------------------------------------------------------
# Mittag-Leffler series / asymptotic / dispatch
# ---------------------------------------------------------------------------

def test_ml_series_trivials():
    v, d = sf.ml_series(0.5, 0j)
    assert v == 1.0 and d.terms_or_nodes == 1
    v, d = sf.ml_series(1.0, -1j)
    assert abs(v - cmath.exp(-1j)) < 1e-15
    assert d.method == "series"


def test_ml_series_radius_precondition():
    with pytest.raises(DomainError):
        sf.ml_series(0.5, complex(0, -50.0))


def test_ml_asymptotic_leading_term():
    s = 1e6
    v, d = sf.ml_asymptotic(0.5, complex(0.0, -s), 3)
    lead = -1j / (s * math.gamma(0.5))
    assert abs(v - lead) < 1e-3 * abs(lead)
    assert abs(abs(v) - 5.6419e-7) < 1e-10
    assert d.method == "asymptotic" and d.terms_or_nodes == 3


def test_ml_asymptotic_domain_error():
    with pytest.raises(DomainError):
        sf.ml_asymptotic(0.5, complex(0, -1.0), 3)


def test_ml_asymptotic_classical_oscillation():
    # alpha = 1 exponential sector: |E_1(-is)| = 1
    v, _ = sf.ml_asymptotic(1.0, complex(0.0, -300.0), 2)
    assert abs(abs(v) - 1.0) < 1e-12


def test_ml_eval_trivials():
    v, _ = sf.ml_eval(0.7, 0j)
    assert v == 1.0
    v, _ = sf.ml_eval(0.3, complex(0, -1e8))
    assert abs(v) <= 2.0 / (1e8 * math.gamma(0.7)) * 1.1


def test_ml_eval_against_fixtures(ml_fixture_rows):
    for alpha, z, expected, _ in ml_fixture_rows:
        if abs(z) > 31.0:
            continue  # deep-annulus points are exercised by the acceptance suite
        got, diag = sf.ml_eval(alpha, z)
        assert abs(got - expected) <= 1e-12 + 1e-11 * abs(expected), (alpha, z)


def test_ml_eval_wofz_identity():
    # E_{1/2}(z) equals the Faddeeva function at -iz: independent reference
    rng = np.random.default_rng(7)
    for _ in range(40):
        z = complex(rng.uniform(-4, 4), rng.uniform(-4, 4))
        got, _ = sf.ml_eval(0.5, z)
        ref = complex(wofz(-1j * z))
        assert abs(got - ref) <= 1e-12 * max(1.0, abs(ref))


def test_classical_limit_small_sample():
    rng = np.random.default_rng(3)
    zs = (rng.uniform(-1, 1, 40) + 1j * rng.uniform(-1, 1, 40)) * 30.0
    for z in zs:
        v, _ = sf.ml_eval(1.0, complex(z))
        assert abs(v - cmath.exp(complex(z))) <= 1e-12 * abs(cmath.exp(complex(z)))


@given(st.floats(min_value=0.25, max_value=1.0),
       st.complex_numbers(max_magnitude=4.0, allow_nan=False, allow_infinity=False))
@settings(max_examples=40, deadline=None)
def test_conjugation_symmetry(alpha, z):
    v1, _ = sf.ml_eval(alpha, z)
    v2, _ = sf.ml_eval(alpha, z.conjugate())
    assert v2 == v1.conjugate()


def test_branch_agreement_spot():
    # one point per alpha inside the committed overlap annulus
    for alpha in (0.3, 0.5, 0.75):
        s = math.sqrt(sf.asymptotic_radius(alpha) * sf.series_radius(alpha))
        for ang in (math.pi / 2, -3 * math.pi / 4):
            z = s * cmath.exp(1j * ang)
            v1, _ = sf.ml_series(alpha, z)
            v2, d2 = sf.ml_asymptotic(alpha, z, sf._optimal_k(alpha, s))
            assert abs(v1 - v2) <= 1e-6 * abs(v1)


def test_asymptotic_est_error_honest(ml_fixture_rows):
    for alpha, z, expected, _ in ml_fixture_rows:
        if abs(z) < sf.asymptotic_radius(alpha):
            continue
        k = sf._optimal_k(alpha, abs(z))
        got, diag = sf.ml_asymptotic(alpha, z, k)
        assert abs(got - expected) <= 3.0 * diag.est_error + 1e-13 * abs(expected)


def test_first_term_asymptotics_invariant():
    for alpha in (0.3, 0.5, 0.8):
        c2 = abs(sf.recip_gamma(1.0 - 2.0 * alpha))
        for s in (1e3, 1e4, 1e6, 1e8):
            v, _ = sf.ml_eval(alpha, complex(0.0, -s))
            lhs = abs(s * v + 1j / math.gamma(1.0 - alpha))
            bound = (10.0 * c2 / s) if c2 > 0 else (10.0 / s)
            assert lhs <= bound


def test_axis_evaluator_matches_ml_eval():
    for alpha in (0.3, 0.5, 0.8):
        ss = np.geomspace(1e-3, 1e4, 40)
        vals = sf.ml_neg_imag_axis(alpha, ss)
        for s, v in zip(ss, vals):
            ref, _ = sf.ml_eval(alpha, complex(0.0, -s))
            assert abs(v - ref) <= 1e-9 * abs(ref)


def test_axis_evaluator_alpha_one():
    ss = np.linspace(0.0, 20.0, 7)
    assert np.allclose(sf.ml_neg_imag_axis(1.0, ss), np.exp(-1j * ss), rtol=1e-15)


# ---------------------------------------------------------------------------
# Bessel and Omega_n
# ---------------------------------------------------------------------------

def test_bessel_closed_forms():
    v, d = sf.bessel_j(-0.5, math.pi)
    assert abs(v - math.sqrt(2.0 / math.pi ** 2) * math.cos(math.pi)) < 1e-15
    assert d.method == "closed-form"
    v, _ = sf.bessel_j(0.5, math.pi / 2)
    assert abs(v - math.sqrt(2.0 / (math.pi * math.pi / 2))) < 1e-15
    v, d = sf.bessel_j(0.0, 0.0)
    assert v == 1.0 and d.method == "series"


def test_bessel_against_scipy():
    for nu in (0.0, 1.0, 1.5, 2.5):
        for x in np.geomspace(0.05, 2000.0, 60):
            v, _ = sf.bessel_j(nu, x)
            ref = scipy_jv(nu, x)
            assert abs(v - ref) <= 1e-10 * max(abs(ref), x ** -0.5), (nu, x)


def test_bessel_recurrence():
    for nu in (0.5, 1.0, 1.5):
        for x in np.geomspace(0.1, 50.0, 25):
            lhs = sf.bessel_j(nu - 1.0, x)[0] + sf.bessel_j(nu + 1.0, x)[0]
            rhs = (2.0 * nu / x) * sf.bessel_j(nu, x)[0]
            scale = max(abs(lhs), abs(rhs), x ** -0.5)
            assert abs(lhs - rhs) <= 1e-8 * scale


def test_bessel_domain_errors():
    with pytest.raises(DomainError):
        sf.bessel_j(-0.75, 1.0)
    with pytest.raises(DomainError):
        sf.bessel_j(0.5, -1.0)


def test_omega_n_limits():
    assert abs(sf.omega_n(1, 0.0) - math.sqrt(2.0 / math.pi)) < 1e-15
    assert sf.omega_n(2, 0.0) == 1.0
    assert abs(sf.omega_n(3, 0.0) - 2.0 ** -0.5 / math.gamma(1.5)) < 1e-15
    s = np.linspace(0.3, 12.0, 10)
    assert np.allclose(sf.omega_n_many(1, s), math.sqrt(2.0 / math.pi) * np.cos(s))


def test_omega_n_continuity_at_zero():
    for n in (1, 2, 3):
        diffs = [abs(sf.omega_n(n, 10.0 ** -k) - sf.omega_n(n, 0.0))
                 for k in range(1, 9)]
        assert all(d2 <= d1 + 1e-15 for d1, d2 in zip(diffs, diffs[1:]))
        assert diffs[-1] < 1e-14


def test_omega_n_many_matches_scalar():
    rng = np.random.default_rng(11)
    s = rng.uniform(0.0, 80.0, 50)
    for n in (1, 2, 3, 4):
        vec = sf.omega_n_many(n, s)
        for si, vi in zip(s, vec):
            assert abs(vi - sf.omega_n(n, si)) <= 1e-10 * max(1e-8, abs(vi))
