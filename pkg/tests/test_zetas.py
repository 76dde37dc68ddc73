import math
from fractions import Fraction

import pytest

from torsionlab import (
    circle_character_heat_trace,
    digamma,
    hurwitz_zeta,
    hurwitz_zeta_prime0,
    mellin_zeta,
    product_heat_trace,
    riemann_zeta,
    riemann_zeta_prime0,
    scale_heat_trace,
    sphere2_scalar_heat_trace,
    sum_heat_traces,
    theta_expansion,
    zeta_at_zero,
)
from torsionlab.errors import BadParameter, PoleAtOne, PoleHit
from torsionlab.zetas import rgamma, sphere2_power_coefficients


# --- independent oracles ------------------------------------------------------


def eta_transform_zeta(s: float, depth: int = 40) -> float:
    """zeta via the Euler-transformed alternating series; valid for s != 1."""
    eta = 0.0
    for k in range(depth):
        inner = sum(math.comb(k, j) * (-1.0) ** j * (j + 1.0) ** (-s)
                    for j in range(k + 1))
        eta += inner / 2.0 ** (k + 1)
    return eta / (1.0 - 2.0 ** (1.0 - s))


def brute_zeta(s: float, n: int = 4000) -> float:
    """Partial sum with integral, endpoint, and B_2 corrections; s > 1."""
    total = sum(k ** (-s) for k in range(1, n))
    return total + n ** (1.0 - s) / (s - 1.0) + 0.5 * n ** (-s) \
        + s * n ** (-s - 1.0) / 12.0


def test_riemann_values():
    assert abs(riemann_zeta(2.0) - math.pi ** 2 / 6.0) < 1e-13
    assert abs(riemann_zeta(2.0) - brute_zeta(2.0)) < 1e-12
    assert abs(riemann_zeta(0.0) - eta_transform_zeta(0.0)) < 1e-12
    assert abs(riemann_zeta(0.0) + 0.5) < 1e-14
    assert abs(riemann_zeta(-1.0) - eta_transform_zeta(-1.0)) < 1e-12
    assert abs(riemann_zeta(-1.0) + 1.0 / 12.0) < 1e-14
    assert abs(riemann_zeta(3.0) - brute_zeta(3.0)) < 1e-13


def test_riemann_prime_zero():
    assert abs(riemann_zeta_prime0() + 0.5 * math.log(2.0 * math.pi)) < 1e-12


def test_riemann_pole():
    with pytest.raises(PoleAtOne):
        riemann_zeta(1.0)


def test_hurwitz_values():
    for a in (0.25, 0.5, 1.0, 1.5, 3.25):
        assert abs(hurwitz_zeta(0.0, a) - (0.5 - a)) < 1e-13
    assert abs(hurwitz_zeta(2.0, 1.0) - math.pi ** 2 / 6.0) < 1e-13
    # splitting the sum over even/odd shifts
    lhs = hurwitz_zeta(2.0, 0.5) + hurwitz_zeta(2.0, 1.0)
    assert abs(lhs - 4.0 * riemann_zeta(2.0)) < 1e-12
    with pytest.raises(BadParameter):
        hurwitz_zeta(2.0, -1.0)


def test_hurwitz_prime_zero_reflection():
    # log Gamma(1/2) = (1/2) log pi by the reflection formula
    assert abs(hurwitz_zeta_prime0(0.5) + 0.5 * math.log(2.0)) < 1e-12
    # and the lgamma closed form at a generic point
    for a in (0.3, 1.0, 2.2):
        closed = math.lgamma(a) - 0.5 * math.log(2.0 * math.pi)
        assert abs(hurwitz_zeta_prime0(a) - closed) < 1e-11


def test_hurwitz_negative_argument_bernoulli():
    # zeta_H(-1, a) = -(a^2 - a + 1/6)/2
    for a in (0.5, 1.5, 2.0):
        expected = -(a * a - a + 1.0 / 6.0) / 2.0
        assert abs(hurwitz_zeta(-1.0, a) - expected) < 1e-12


def test_digamma_values():
    euler = 0.5772156649015329
    assert abs(digamma(1.0) + euler) < 1e-12
    assert abs(digamma(0.5) + euler + 2.0 * math.log(2.0)) < 1e-12
    assert abs(digamma(5.0) - (digamma(1.0) + sum(1.0 / k for k in range(1, 5)))) < 1e-12


def test_rgamma_zeros_and_values():
    assert rgamma(1.0) == 1.0
    assert abs(rgamma(0.5) - 1.0 / math.sqrt(math.pi)) < 1e-14
    for m in (0, -1, -2, -5):
        assert abs(rgamma(float(m))) < 1e-15
    z = rgamma(complex(2.0, 1.0))
    assert abs(z * math.gamma(2.0) - rgamma(complex(2.0, 1.0)) * 1.0) == 0.0


# --- heat traces ----------------------------------------------------------------


def test_theta_split_consistency():
    factors = [theta_expansion("circle", L=2.0 * math.pi),
               theta_expansion("circle", L=1.0),
               theta_expansion("dirichlet", R=1.0),
               theta_expansion("dirichlet", R=math.pi),
               theta_expansion("neumann", R=1.0),
               theta_expansion("mixed", R=0.5),
               theta_expansion("lattice", n=2, L=1.0),
               theta_expansion("lattice", n=3, L=1.0),
               circle_character_heat_trace(2.0 * math.pi, 0.7, 2)]
    for h in factors:
        assert h.consistency_residual(1.0) < 1e-10


def test_theta_image_vs_direct_sum_small_t():
    # dirichlet on [0, pi]: images against the raw eigenvalue sum at t = 0.1
    h = theta_expansion("dirichlet", R=math.pi)
    direct = sum(math.exp(-0.1 * m * m) for m in range(1, 50))
    assert abs(h.full(0.1) - direct) < 1e-12

    h2 = theta_expansion("lattice", n=2, L=1.0)
    omega = (2.0 * math.pi) ** 2
    direct = sum(math.exp(-0.05 * omega * (i * i + j * j))
                 for i in range(-40, 41) for j in range(-40, 41))
    assert abs(h2.full(0.05) - direct) < 1e-12


def test_character_trace_reduces_to_plain_circle():
    h0 = theta_expansion("circle", L=2.0 * math.pi)
    h1 = circle_character_heat_trace(2.0 * math.pi, 0.0, 1)
    for t in (0.2, 1.0):
        assert abs(h0.full(t) - h1.full(t)) < 1e-14


def test_product_heat_trace_terms():
    R, L = 1.0, 2.0 * math.pi
    hd = product_heat_trace(theta_expansion("dirichlet", R=R),
                            theta_expansion("circle", L=L))
    terms = dict(hd.terms)
    assert abs(terms[1.0] - R * L / (4.0 * math.pi)) < 1e-14
    assert abs(terms[0.5] + L / (2.0 * math.sqrt(4.0 * math.pi))) < 1e-14
    assert 0.0 not in terms
    assert hd.kernel_dim == 0

    hn = product_heat_trace(theta_expansion("neumann", R=R),
                            theta_expansion("circle", L=L))
    terms = dict(hn.terms)
    assert abs(terms[0.5] - L / (2.0 * math.sqrt(4.0 * math.pi))) < 1e-14
    assert hn.kernel_dim == 1
    assert abs((zeta_at_zero(hn) - zeta_at_zero(hd)) - (-1.0)) < 1e-14


def test_product_heat_trace_pointwise_and_split():
    f1 = theta_expansion("neumann", R=0.8)
    f2 = theta_expansion("circle", L=1.5)
    prod = product_heat_trace(f1, f2)
    for t in (0.3, 0.7, 1.0):
        assert abs(prod.full(t) - f1.full(t) * f2.full(t)) < 1e-12
    assert prod.consistency_residual(1.0) < 1e-10


def test_sum_and_scale_heat_traces():
    f1 = theta_expansion("dirichlet", R=1.0)
    f2 = theta_expansion("neumann", R=1.0)
    s = sum_heat_traces(f1, f2)
    assert s.kernel_dim == 1
    for t in (0.4, 1.0):
        assert abs(s.full(t) - f1.full(t) - f2.full(t)) < 1e-13
    tripled = scale_heat_trace(f2, 3)
    assert tripled.kernel_dim == 3
    assert abs(tripled.full(0.5) - 3.0 * f2.full(0.5)) < 1e-13


def test_sphere_coefficients_exact():
    coeffs = dict(sphere2_power_coefficients())
    assert coeffs[-1] == Fraction(1)
    assert coeffs[0] == Fraction(1, 3)
    assert coeffs[1] == Fraction(1, 15)
    assert coeffs[2] == Fraction(4, 315)
    h = sphere2_scalar_heat_trace()
    # the truncated expansion matches the eigenvalue sum deep into small t
    assert abs(h.remainder(0.05)) < 1e-11
    assert h.consistency_residual(1.0) < 1e-12


# --- continuation engine --------------------------------------------------------


def test_mellin_circle_against_closed_form():
    for L in (2.0 * math.pi, 1.7):
        h = theta_expansion("circle", L=L)
        scale = (2.0 * math.pi / L) ** 2
        for s in (2.0, 3.0):
            closed = 2.0 * scale ** (-s) * riemann_zeta(2.0 * s)
            ev = mellin_zeta(h, s)
            assert abs(ev.value - closed) < 1e-9
            assert abs(ev.value - closed) <= max(ev.abs_error_estimate, 1e-12)
        # s = -1 lands on the trivial zero of zeta_R(2s), exactly 0
        ev = mellin_zeta(h, -1.0)
        assert abs(ev.value) < 1e-9
        assert abs(ev.value) <= max(ev.abs_error_estimate, 1e-12)
        assert mellin_zeta(h, 0.0).value == -1.0
        ev = mellin_zeta(h, 0.0, derivative=True)
        assert abs(ev.derivative + 2.0 * math.log(L)) < 1e-8


def test_mellin_dirichlet_against_closed_form():
    for R in (1.0, math.pi):
        h = theta_expansion("dirichlet", R=R)
        scale = (math.pi / R) ** 2
        for s in (-1.0, 2.0):
            closed = scale ** (-s) * riemann_zeta(2.0 * s)
            assert abs(mellin_zeta(h, s).value - closed) < 1e-9
        assert mellin_zeta(h, 0.0).value == -0.5
        ev = mellin_zeta(h, 0.0, derivative=True)
        assert abs(ev.derivative + math.log(2.0 * R)) < 1e-8


def test_mellin_pole_hits():
    h = theta_expansion("circle", L=2.0 * math.pi)
    with pytest.raises(PoleHit):
        mellin_zeta(h, 0.5)
    h2 = theta_expansion("lattice", n=2, L=1.0)
    with pytest.raises(PoleHit):
        mellin_zeta(h2, 1.0)


def test_mellin_zeta_zero_is_coefficient_arithmetic():
    cases = [
        (theta_expansion("circle", L=2.0 * math.pi), -1.0),
        (theta_expansion("dirichlet", R=1.0), -0.5),
        (theta_expansion("neumann", R=1.0), -0.5),
        (theta_expansion("mixed", R=1.0), 0.0),
        (theta_expansion("lattice", n=2, L=1.0), -1.0),
        (circle_character_heat_trace(2.0 * math.pi, 0.7, 2), 0.0),
    ]
    for h, expected in cases:
        assert mellin_zeta(h, 0.0).value == zeta_at_zero(h)
        assert abs(zeta_at_zero(h) - expected) < 1e-14


def test_mellin_character_derivative_hurwitz_oracle():
    # rank-2 character: zeta'(0) = 2 d/ds [zeta_H(2s,a) + zeta_H(2s,1-a)]|_0
    #                           = -4 log(2 sin(theta/2)), L-independent
    for theta in (0.7, math.pi / 2, 2.5):
        a = theta / (2.0 * math.pi)
        oracle = 4.0 * (hurwitz_zeta_prime0(a) + hurwitz_zeta_prime0(1.0 - a))
        closed = -4.0 * math.log(2.0 * math.sin(theta / 2.0))
        assert abs(oracle - closed) < 1e-11
        for L in (2.0 * math.pi, 1.0):
            h = circle_character_heat_trace(L, theta, 2)
            ev = mellin_zeta(h, 0.0, derivative=True)
            assert abs(ev.derivative - closed) < 1e-8


def test_mellin_sphere_zeta_zero_and_binomial_oracle():
    h = sphere2_scalar_heat_trace()
    ev = mellin_zeta(h, 0.0)
    oracle = 2.0 * (hurwitz_zeta(-1.0, 1.5) + 0.125)
    assert abs(ev.value - oracle) < 1e-12
    assert abs(ev.value + 2.0 / 3.0) < 1e-12
    # eigenvalue telescoping: sum (2l+1) / (l(l+1))^2 = 1
    assert abs(mellin_zeta(h, 2.0).value - 1.0) < 1e-9


def test_mellin_direct_sum_consistency():
    h2 = theta_expansion("lattice", n=2, L=1.0)
    omega = (2.0 * math.pi) ** 2
    brute = sum((omega * (i * i + j * j)) ** -3.0
                for i in range(-80, 81) for j in range(-80, 81)
                if (i, j) != (0, 0))
    assert abs(mellin_zeta(h2, 3.0).value - brute) < 1e-9


def test_mellin_complex_s():
    h = theta_expansion("circle", L=2.0 * math.pi)
    ev = mellin_zeta(h, complex(2.0, 0.5))
    # compare against the absolutely convergent direct sum
    direct = sum(2.0 * complex(m * m) ** complex(-2.0, -0.5)
                 for m in range(1, 4000))
    assert abs(ev.value - direct) < 1e-6
    with pytest.raises(BadParameter):
        mellin_zeta(h, complex(2.0, 0.5), derivative=True)


def test_quad_eps_env_override(monkeypatch):
    h = theta_expansion("circle", L=2.0 * math.pi)
    monkeypatch.setenv("TORSIONLAB_QUAD_EPS", "1e-6")
    loose = mellin_zeta(h, 2.0)
    monkeypatch.delenv("TORSIONLAB_QUAD_EPS")
    tight = mellin_zeta(h, 2.0)
    assert abs(loose.value - tight.value) < 1e-6
    assert loose.abs_error_estimate >= tight.abs_error_estimate
