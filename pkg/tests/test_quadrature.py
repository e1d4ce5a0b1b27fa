import math

import mpmath
import numpy as np
import pytest

from fracdisp import quadrature as qd
from fracdisp.errors import QuadratureError


def test_panel_integrate_polynomial():
    val = qd.panel_integrate(lambda x: x ** 3, np.linspace(0, 2, 5), order=4)
    assert abs(val - 4.0) < 1e-13


def test_log_breaks_span():
    b = qd.log_breaks(1e-3, 1e3, per_decade=8)
    assert b[0] == pytest.approx(1e-3) and b[-1] == pytest.approx(1e3)
    ratios = b[1:] / b[:-1]
    assert np.allclose(ratios, ratios[0])


def test_refine_breaks_by_phase():
    b = qd.refine_breaks_by_phase(np.array([0.0, 10.0]), rate=7.0, max_phase=3.5)
    widths = np.diff(b)
    assert np.all(widths * 7.0 <= 3.5 + 1e-12)


def test_filon_matches_brute_force():
    g = lambda r: np.exp(-0.5 * (r - 1.2) ** 2) * (1.0 / (1.0 + 2j * r))
    breaks = np.linspace(0.3, 2.4, 12)
    for x in (0.0, 1.0, 10.0):
        got = qd.filon_cos(g, breaks, np.array([x]))[0]
        rr = np.linspace(0.3, 2.4, 400001)
        ref = np.trapezoid(g(rr) * np.cos(x * rr), rr)
        assert abs(got - ref) < 1e-9


def test_filon_large_phase_against_mpmath():
    g = lambda r: np.exp(-0.5 * (r - 1.2) ** 2) * (1.0 / (1.0 + 2j * r))
    x = 300.0
    got = qd.filon_cos(g, np.linspace(0.3, 2.4, 12), np.array([x]))[0]
    mpmath.mp.dps = 30
    nosc = int(2.1 * x / math.pi) + 1
    pts = [0.3 + 2.1 * i / nosc for i in range(nosc + 1)]

    def f(r):
        r = float(r)
        gr = complex(g(np.array([r]))[0])
        return mpmath.mpc(gr.real, gr.imag) * mpmath.cos(x * r)

    ref = complex(mpmath.quad(f, pts))
    # absolute agreement at the mass scale; the value itself is ~1e-10
    assert abs(got - ref) < 1e-8


def test_exp_tail_against_quadosc():
    mpmath.mp.dps = 25
    for p, big_a in ((-0.5, 12.0), (-1.0, 15.0), (-2.5, 12.0)):
        got, bound = qd.exp_tail(p, big_a)
        refc = mpmath.quadosc(lambda u: mpmath.power(u, p) * mpmath.cos(u),
                              [big_a, mpmath.inf], period=2 * mpmath.pi)
        refs = mpmath.quadosc(lambda u: mpmath.power(u, p) * mpmath.sin(u),
                              [big_a, mpmath.inf], period=2 * mpmath.pi)
        ref = complex(refc) + 1j * complex(refs)
        assert abs(got - ref) <= 1.5 * bound


def test_bessel_power_tail_against_quadosc():
    mpmath.mp.dps = 25
    for n, p, big_a in ((1, -0.5, 25.0), (2, -1.0, 25.0), (3, -1.5, 25.0)):
        nu = (n - 2.0) / 2.0
        got, bound = qd.bessel_power_tail(n, p, big_a)
        f = lambda u: mpmath.power(u, p + (2.0 - n) / 2.0) * mpmath.besselj(nu, u)
        ref = float(mpmath.quadosc(f, [big_a, mpmath.inf], period=2 * mpmath.pi))
        assert abs(got - ref) <= 2.0 * bound + 1e-12


def test_exp_tail_requires_reasonable_origin():
    with pytest.raises(QuadratureError):
        qd.exp_tail(-0.5, 0.5)
