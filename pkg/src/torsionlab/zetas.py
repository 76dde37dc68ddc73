"""Spectral zeta functions via heat-trace Mellin continuation.

A model spectrum is wrapped as a HeatTrace: exact small-time power terms
c_p t^{-p} (half-integer p), an exponentially small remainder so that

    Tr e^{-tL} = sum_p c_p t^{-p} + remainder(t)        (0 < t <= 1),

a large-time tail evaluator summing exp(-t*lambda) over the nonzero
spectrum, and the kernel dimension b.  The zeta function with the
convention  zeta(s) = sum_{lambda > 0} lambda^{-s}  is continued by
splitting its Mellin integral at t = 1:

    Gamma(s) zeta(s) = sum_p c_p/(s-p) - b/s
                       + int_0^1 t^{s-1} remainder(t) dt
                       + int_1^oo t^{s-1} tail(t) dt,

where the first group is exact and the integrals are entire in s.  In
particular zeta(0) = c_0 - b by pure coefficient arithmetic, and

    zeta'(0) = euler_gamma (c_0 - b) - sum_{p != 0} c_p / p
               + int_0^1 remainder(t)/t dt + int_1^oo tail(t)/t dt.

Riemann and Hurwitz zeta (Euler-Maclaurin) are provided as independent
closed forms for cross-checking the engine, never as its internals.

All functions are pure and deterministic for fixed quadrature settings;
the environment variable TORSIONLAB_QUAD_EPS overrides the absolute
quadrature target (default 1e-12).
"""

from __future__ import annotations

import cmath
import math
import os
import warnings
from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache
from typing import Callable

from scipy.integrate import IntegrationWarning, quad

from .errors import BadParameter, PoleAtOne, PoleHit, QuadratureFailure

EULER_GAMMA = 0.5772156649015328606065120900824024

# Bernoulli numbers B_2, B_4, ..., B_24.
_BERNOULLI = (
    Fraction(1, 6), Fraction(-1, 30), Fraction(1, 42), Fraction(-1, 30),
    Fraction(5, 66), Fraction(-691, 2730), Fraction(7, 6), Fraction(-3617, 510),
    Fraction(43867, 798), Fraction(-174611, 330), Fraction(854513, 138),
    Fraction(-236364091, 2730),
)

_EM_N = 24  # direct summands in Euler-Maclaurin before the tail correction


def _powneg(base: float, s: complex | float):
    """base^(-s) for base > 0 and real or complex s."""
    if isinstance(s, complex):
        return cmath.exp(-s * math.log(base))
    return base ** (-s)


def hurwitz_zeta(s: float | complex, a: float):
    """Hurwitz zeta(s, a) = sum_{n>=0} (n+a)^(-s), continued to s != 1.

    Euler-Maclaurin with 24 direct terms and Bernoulli corrections through
    B_24; full double precision for |s| up to a few tens and a > 0.
    """
    value, _ = _hurwitz_core(s, a, want_derivative=False)
    return value


def hurwitz_zeta_prime(s: float | complex, a: float):
    """d/ds of hurwitz_zeta at (s, a), by the differentiated continuation."""
    _, deriv = _hurwitz_core(s, a, want_derivative=True)
    return deriv


def hurwitz_zeta_prime0(a: float) -> float:
    """d/ds zeta_H(s, a) at s = 0; equals log Gamma(a) - (1/2) log(2 pi)."""
    return float(hurwitz_zeta_prime(0.0, a).real)


def riemann_zeta(s: float | complex):
    """Riemann zeta via the Hurwitz continuation at a = 1."""
    return hurwitz_zeta(s, 1.0)


def riemann_zeta_prime0() -> float:
    """zeta_R'(0) = -(1/2) log(2 pi), computed by the continuation itself."""
    return float(hurwitz_zeta_prime(0.0, 1.0).real)


def _hurwitz_core(s, a, want_derivative):
    if a <= 0.0:
        raise BadParameter(f"Hurwitz parameter must be positive, got {a}")
    s = complex(s) if isinstance(s, complex) else float(s)
    if abs(s - 1.0) < 1e-12:
        raise PoleAtOne("zeta has a simple pole at s = 1")
    n = _EM_N
    value = 0.0 if not isinstance(s, complex) else 0.0 + 0.0j
    deriv = value
    for k in range(n):
        base = k + a
        term = _powneg(base, s)
        value += term
        if want_derivative:
            deriv -= math.log(base) * term
    big = n + a
    log_big = math.log(big)
    tail_pow = _powneg(big, s)  # big^(-s)
    # integral term big^(1-s)/(s-1)
    value += big * tail_pow / (s - 1.0)
    if want_derivative:
        deriv += big * tail_pow * (-log_big / (s - 1.0) - 1.0 / (s - 1.0) ** 2)
    # half-weight endpoint
    value += 0.5 * tail_pow
    if want_derivative:
        deriv += -0.5 * log_big * tail_pow
    # Bernoulli corrections: B_{2j}/(2j)! * s(s+1)...(s+2j-2) * big^(-s-2j+1)
    fact = 1.0
    for j, b2j in enumerate(_BERNOULLI, start=1):
        fact *= (2 * j) * (2 * j - 1)
        coeff = float(b2j) / fact
        rising = 1.0 if not isinstance(s, complex) else 1.0 + 0.0j
        rising_d = 0.0 * rising
        for i in range(2 * j - 1):
            rising_d = rising_d * (s + i) + rising
            rising = rising * (s + i)
        scale = tail_pow * big ** (1 - 2 * j)
        value += coeff * rising * scale
        if want_derivative:
            deriv += coeff * (rising_d - rising * log_big) * scale
    return value, deriv


def digamma(x: float) -> float:
    """Real digamma by reflection, upward recurrence, and the asymptotic series."""
    if x <= 0.0 and x == math.floor(x):
        raise BadParameter(f"digamma pole at nonpositive integer {x}")
    result = 0.0
    if x < 0.5:
        # psi(x) = psi(1-x) - pi cot(pi x)
        result -= math.pi / math.tan(math.pi * x)
        x = 1.0 - x
    while x < 12.0:
        result -= 1.0 / x
        x += 1.0
    result += math.log(x) - 0.5 / x
    x2 = 1.0 / (x * x)
    power = x2
    for j, b2j in enumerate(_BERNOULLI[:7], start=1):
        result -= float(b2j) / (2 * j) * power
        power *= x2
    return result


_LANCZOS_G = 7.0
_LANCZOS = (
    0.99999999999980993, 676.5203681218851, -1259.1392167224028,
    771.32342877765313, -176.61502916214059, 12.507343278686905,
    -0.13857109526572012, 9.9843695780195716e-6, 1.5056327351493116e-7,
)


def _gamma_complex(z: complex) -> complex:
    if z.real < 0.5:
        return math.pi / (cmath.sin(math.pi * z) * _gamma_complex(1.0 - z))
    z -= 1.0
    x = _LANCZOS[0]
    for i, c in enumerate(_LANCZOS[1:], start=1):
        x += c / (z + i)
    t = z + _LANCZOS_G + 0.5
    return math.sqrt(2.0 * math.pi) * t ** (z + 0.5) * cmath.exp(-t) * x


def rgamma(s: float | complex):
    """1/Gamma(s), entire: exact zeros at nonpositive integers."""
    if isinstance(s, complex) and s.imag != 0.0:
        if s.real >= 0.5:
            return 1.0 / _gamma_complex(s)
        return cmath.sin(math.pi * s) * _gamma_complex(1.0 - s) / math.pi
    s = float(s.real) if isinstance(s, complex) else float(s)
    if s >= 0.5:
        return 1.0 / math.gamma(s)
    if s == math.floor(s):
        return 0.0  # exact zero at a nonpositive integer
    return math.sin(math.pi * s) * math.gamma(1.0 - s) / math.pi


def _rgamma_prime(s: float) -> float:
    # 1/Gamma is entire, so a central difference is uniformly safe.
    h = 1e-6
    return (rgamma(s + h) - rgamma(s - h)) / (2.0 * h)


# --- heat traces ------------------------------------------------------------


@dataclass(frozen=True)
class HeatTrace:
    """Exact small-time data plus spectral evaluators for one operator.

    terms are (p, c_p) pairs for sum_p c_p t^{-p}; remainder(t) is the
    difference full - power on (0, 1], vanishing as t -> 0; tail(t) sums
    exp(-t lambda) over the nonzero spectrum for t >= 1.  lambda_min is the
    smallest positive eigenvalue (used to truncate upper integrals), and
    t_floor > 0 marks models whose remainder is only trustworthy above it
    (truncated asymptotic expansions).
    """

    terms: tuple[tuple[float, float], ...]
    remainder: Callable[[float], float]
    tail: Callable[[float], float]
    kernel_dim: int
    lambda_min: float
    t_floor: float = 0.0
    label: str = ""

    def power(self, t: float) -> float:
        return sum(c * t ** (-p) for p, c in self.terms)

    def full(self, t: float) -> float:
        return self.power(t) + self.remainder(t)

    @property
    def constant_coefficient(self) -> float:
        return sum(c for p, c in self.terms if p == 0.0)

    @property
    def positive_powers(self) -> tuple[float, ...]:
        return tuple(p for p, c in self.terms if p > 0.0 and c != 0.0)

    def consistency_residual(self, t: float = 1.0) -> float:
        """|(b + tail(t)) - (power(t) + remainder(t))| at the split point."""
        return abs((self.kernel_dim + self.tail(t)) - self.full(t))


def zeta_at_zero(h: HeatTrace) -> float:
    """zeta(0) = c_0 - dim ker, by coefficient arithmetic alone."""
    return h.constant_coefficient - h.kernel_dim


def _merge_terms(pairs) -> tuple[tuple[float, float], ...]:
    acc: dict[int, float] = {}
    for p, c in pairs:
        key = round(2.0 * p)
        acc[key] = acc.get(key, 0.0) + c
    return tuple(sorted(((k / 2.0, c) for k, c in acc.items() if c != 0.0),
                        key=lambda pc: -pc[0]))


def scale_heat_trace(h: HeatTrace, m: int, label: str = "") -> HeatTrace:
    """m parallel copies of the operator (multiplicity m in every degree)."""
    rem, tl = h.remainder, h.tail
    return HeatTrace(
        terms=tuple((p, m * c) for p, c in h.terms),
        remainder=lambda t: m * rem(t),
        tail=lambda t: m * tl(t),
        kernel_dim=m * h.kernel_dim,
        lambda_min=h.lambda_min,
        t_floor=h.t_floor,
        label=label or f"{m}x({h.label})",
    )


def sum_heat_traces(h1: HeatTrace, h2: HeatTrace, label: str = "") -> HeatTrace:
    """Heat trace of a direct sum: everything adds."""
    r1, r2, t1, t2 = h1.remainder, h2.remainder, h1.tail, h2.tail
    return HeatTrace(
        terms=_merge_terms(list(h1.terms) + list(h2.terms)),
        remainder=lambda t: r1(t) + r2(t),
        tail=lambda t: t1(t) + t2(t),
        kernel_dim=h1.kernel_dim + h2.kernel_dim,
        lambda_min=min(h1.lambda_min, h2.lambda_min),
        t_floor=max(h1.t_floor, h2.t_floor),
        label=label or f"({h1.label})+({h2.label})",
    )


def product_heat_trace(h1: HeatTrace, h2: HeatTrace, label: str = "") -> HeatTrace:
    """Heat trace of a product spectrum {lam + mu}: traces multiply.

    Power terms are the Cauchy product of the factor expansions truncated
    at t^0; any dropped positive powers of t are folded into the remainder,
    which stays exponentially small.  Both factors must carry full traces
    (kernel included); the combined kernel dimension is the product.
    """
    kept, dropped = [], []
    for p1, c1 in h1.terms:
        for p2, c2 in h2.terms:
            (kept if p1 + p2 >= 0.0 else dropped).append((p1 + p2, c1 * c2))
    pw1, pw2, r1, r2 = h1.power, h2.power, h1.remainder, h2.remainder
    tl1, tl2, b1, b2 = h1.tail, h2.tail, h1.kernel_dim, h2.kernel_dim

    def remainder(t: float) -> float:
        extra = sum(c * t ** (-p) for p, c in dropped)
        return pw1(t) * r2(t) + r1(t) * pw2(t) + r1(t) * r2(t) + extra

    def tail(t: float) -> float:
        return b1 * tl2(t) + b2 * tl1(t) + tl1(t) * tl2(t)

    candidates = [h1.lambda_min + h2.lambda_min]
    if b2 > 0:
        candidates.append(h1.lambda_min)
    if b1 > 0:
        candidates.append(h2.lambda_min)
    return HeatTrace(
        terms=_merge_terms(kept),
        remainder=remainder,
        tail=tail,
        kernel_dim=b1 * b2,
        lambda_min=min(candidates),
        t_floor=max(h1.t_floor, h2.t_floor),
        label=label or f"({h1.label})x({h2.label})",
    )


_EXP_CUTOFF = 50.0  # exp(-50) ~ 2e-22, below double-precision relevance


def _gauss_series(a_over_t: float, weight=None) -> float:
    """sum_{j>=1} w_j exp(-a j^2 / t) given a/t; w_j defaults to 1."""
    total = 0.0
    j = 1
    while a_over_t * j * j <= _EXP_CUTOFF:
        w = 1.0 if weight is None else weight(j)
        total += w * math.exp(-a_over_t * j * j)
        j += 1
    return total


def theta_expansion(kind: str, *, L: float | None = None, R: float | None = None,
                    n: int | None = None) -> HeatTrace:
    """Heat-trace factors with exact theta-transformed expansions.

    circle(L):    spectrum (2 pi m / L)^2, m in Z;     power  L/sqrt(4 pi t)
    dirichlet(R): spectrum (m pi / R)^2, m >= 1;       power  R/sqrt(4 pi t) - 1/2
    neumann(R):   spectrum (m pi / R)^2, m >= 0;       power  R/sqrt(4 pi t) + 1/2
    mixed(R):     spectrum ((m+1/2) pi / R)^2, m >= 0; power  R/sqrt(4 pi t)
    lattice(n,L): n-fold product of circle(L);         power  (L/sqrt(4 pi t))^n

    The remainder closures evaluate the exact image-sum corrections, so the
    split-point identity full(t) = kernel + tail(t) holds to rounding at t = 1.
    """
    root4pi = math.sqrt(4.0 * math.pi)
    if kind == "circle":
        _positive(L, "L")
        pref = L / root4pi
        omega = (2.0 * math.pi / L) ** 2

        def remainder(t: float) -> float:
            return (pref / math.sqrt(t)) * 2.0 * _gauss_series(L * L / (4.0 * t))

        def tail(t: float) -> float:
            return 2.0 * _gauss_series(omega * t)

        return HeatTrace(terms=((0.5, pref),), remainder=remainder, tail=tail,
                         kernel_dim=1, lambda_min=omega, label=f"circle(L={L:g})")
    if kind in ("dirichlet", "neumann"):
        _positive(R, "R")
        pref = R / root4pi
        mu = (math.pi / R) ** 2
        sign = -0.5 if kind == "dirichlet" else 0.5

        def remainder(t: float) -> float:
            return (pref / math.sqrt(t)) * 2.0 * _gauss_series(R * R / t)

        def tail(t: float) -> float:
            return _gauss_series(mu * t)

        return HeatTrace(terms=((0.5, pref), (0.0, sign)), remainder=remainder,
                         tail=tail, kernel_dim=0 if kind == "dirichlet" else 1,
                         lambda_min=mu, label=f"{kind}(R={R:g})")
    if kind == "mixed":
        _positive(R, "R")
        pref = R / root4pi
        mu = (math.pi / (2.0 * R)) ** 2

        def remainder(t: float) -> float:
            alternating = _gauss_series(R * R / t, weight=lambda j: (-1.0) ** j)
            return (pref / math.sqrt(t)) * 2.0 * alternating

        def tail(t: float) -> float:
            total, m = 0.0, 0
            while mu * (2 * m + 1) ** 2 * t <= _EXP_CUTOFF:
                total += math.exp(-mu * (2 * m + 1) ** 2 * t)
                m += 1
            return total

        return HeatTrace(terms=((0.5, pref),), remainder=remainder, tail=tail,
                         kernel_dim=0, lambda_min=mu, label=f"mixed(R={R:g})")
    if kind == "lattice":
        _positive(L, "L")
        if n is None or n < 1:
            raise BadParameter("lattice factor needs a positive dimension n")
        pref = L / root4pi
        omega = (2.0 * math.pi / L) ** 2

        def full_1d(t: float) -> float:
            if omega * t >= 1.0:
                return 1.0 + 2.0 * _gauss_series(omega * t)
            return (pref / math.sqrt(t)) * (1.0 + 2.0 * _gauss_series(L * L / (4.0 * t)))

        def remainder(t: float) -> float:
            sigma = 2.0 * _gauss_series(L * L / (4.0 * t))
            return (pref / math.sqrt(t)) ** n * ((1.0 + sigma) ** n - 1.0)

        def tail(t: float) -> float:
            return full_1d(t) ** n - 1.0

        return HeatTrace(terms=((0.5 * n, pref ** n),), remainder=remainder,
                         tail=tail, kernel_dim=1, lambda_min=omega,
                         label=f"lattice(n={n}, L={L:g})")
    raise BadParameter(f"unknown theta factor {kind!r}")


def circle_character_heat_trace(L: float, theta: float, rank: int) -> HeatTrace:
    """Circle with a rotation character: spectrum ((2 pi m + theta)/L)^2, m in Z,
    with multiplicity `rank` (the two complex characters of a rank-2 rotation
    block contribute conjugate phases, giving cosine image weights).
    """
    _positive(L, "L")
    if theta == 0.0:
        return scale_heat_trace(theta_expansion("circle", L=L), rank,
                                label=f"circle(L={L:g}, trivial) x{rank}")
    if not 0.0 < theta < 2.0 * math.pi:
        raise BadParameter(f"character angle must lie in (0, 2 pi), got {theta}")
    root4pi = math.sqrt(4.0 * math.pi)
    pref = rank * L / root4pi
    a = theta / (2.0 * math.pi)
    lam_min = (2.0 * math.pi * min(a, 1.0 - a) / L) ** 2

    def remainder(t: float) -> float:
        series = _gauss_series(L * L / (4.0 * t), weight=lambda j: math.cos(j * theta))
        return (pref / math.sqrt(t)) * 2.0 * series

    def tail(t: float) -> float:
        scale = (2.0 * math.pi / L) ** 2
        total = math.exp(-scale * a * a * t)
        m = 1
        while True:
            lo = scale * (m - a) ** 2 * t
            hi = scale * (m + a) ** 2 * t
            if lo > _EXP_CUTOFF:
                break
            total += math.exp(-lo)
            if hi <= _EXP_CUTOFF:
                total += math.exp(-hi)
            m += 1
        return rank * total

    return HeatTrace(terms=((0.5, pref),), remainder=remainder, tail=tail,
                     kernel_dim=0, lambda_min=lam_min,
                     label=f"circle(L={L:g}, theta={theta:g}) x{rank}")


@lru_cache(maxsize=None)
def sphere2_power_coefficients(max_t_power: int = 10) -> tuple[tuple[int, Fraction], ...]:
    """Exact heat coefficients of the scalar round 2-sphere.

    Tr e^{-tL} = e^{t/4} * 2 sum_{u in N0 + 1/2} u e^{-t u^2}; the midpoint
    Euler-Maclaurin expansion of the half-integer sum gives

        Tr = 1/t + 1/2 - sum_{j>=1} B_{2j}/(2j)! q_{2j-1}(t)

    with q_m(t) = H_m(1/2, t) + 2 m H_{m-1}(1/2, t), where H_m are the
    Hermite-type polynomials of e^{-t y^2}.  Coefficients of t^j for
    j <= max_t_power are exact rationals once 2 * len(B) - 1 >= ... the
    Bernoulli list covers orders through B_24, enough for j <= 11.

    Returns ((t_power, coefficient), ...) starting at t^-1.
    """
    # H_m as {(y_degree, t_degree): Fraction}; H_{m+1} = -2 t y H_m + dH_m/dy
    h_prev: dict[tuple[int, int], Fraction] = {(0, 0): Fraction(1)}
    half = Fraction(1, 2)

    def at_half(poly: dict[tuple[int, int], Fraction]) -> dict[int, Fraction]:
        out: dict[int, Fraction] = {}
        for (ydeg, tdeg), coef in poly.items():
            out[tdeg] = out.get(tdeg, Fraction(0)) + coef * half ** ydeg
        return out

    polys_at_half = [at_half(h_prev)]
    h_cur = h_prev
    max_order = 2 * len(_BERNOULLI) - 1
    for _ in range(max_order):
        nxt: dict[tuple[int, int], Fraction] = {}
        for (ydeg, tdeg), coef in h_cur.items():
            key = (ydeg + 1, tdeg + 1)
            nxt[key] = nxt.get(key, Fraction(0)) - 2 * coef
            if ydeg >= 1:
                key = (ydeg - 1, tdeg)
                nxt[key] = nxt.get(key, Fraction(0)) + ydeg * coef
        h_cur = nxt
        polys_at_half.append(at_half(h_cur))

    series: dict[int, Fraction] = {-1: Fraction(1), 0: half}
    fact = Fraction(1)
    for j, b2j in enumerate(_BERNOULLI, start=1):
        fact *= (2 * j) * (2 * j - 1)
        m = 2 * j - 1
        q = dict(polys_at_half[m])
        for tdeg, coef in polys_at_half[m - 1].items():
            q[tdeg] = q.get(tdeg, Fraction(0)) + 2 * m * coef
        for tdeg, coef in q.items():
            series[tdeg] = series.get(tdeg, Fraction(0)) - b2j / fact * coef
    return tuple(sorted((td, c) for td, c in series.items()
                        if td <= max_t_power and c != 0))


def sphere2_scalar_heat_trace() -> HeatTrace:
    """Scalar Laplacian on the round 2-sphere: eigenvalues l(l+1), mult 2l+1.

    The expansion here is a truncated asymptotic series (not theta-exact),
    so the remainder is the difference from the explicit eigenvalue sum and
    the quadrature floor is positive.
    """
    coeffs = sphere2_power_coefficients()
    terms = tuple((-float(td), float(c)) for td, c in coeffs)

    def full(t: float) -> float:
        l_max = int(math.sqrt(_EXP_CUTOFF / t + 9.0)) + 4
        return sum((2 * l + 1) * math.exp(-t * l * (l + 1)) for l in range(l_max + 1))

    def power(t: float) -> float:
        return sum(float(c) * t ** td for td, c in coeffs)

    return HeatTrace(terms=terms, remainder=lambda t: full(t) - power(t),
                     tail=lambda t: full(t) - 1.0, kernel_dim=1, lambda_min=2.0,
                     t_floor=0.02, label="sphere2 scalar")


def _positive(value, name: str) -> None:
    if value is None or not value > 0.0:
        raise BadParameter(f"{name} must be positive, got {value}")


# --- the continuation engine -------------------------------------------------


@dataclass(frozen=True)
class ZetaEval:
    """One evaluation of a spectral zeta: value, optional d/ds, error bound."""

    s: complex
    value: float | complex
    derivative: float | None
    abs_error_estimate: float
    kernel_dim: int


def _quad_eps(override: float | None) -> float:
    if override is not None:
        return override
    return float(os.environ.get("TORSIONLAB_QUAD_EPS", "1e-12"))


def _integrate(fn, lo: float, hi: float, eps: float) -> tuple[float, float]:
    with warnings.catch_warnings():
        warnings.simplefilter("ignore", IntegrationWarning)
        value, err = quad(fn, lo, hi, epsabs=eps, epsrel=1e-11, limit=400)
    if not math.isfinite(value):
        raise QuadratureFailure(f"integral over [{lo:g}, {hi:g}] returned {value}")
    return value, err


def mellin_zeta(h: HeatTrace, s: float | complex, derivative: bool = False,
                quad_eps: float | None = None) -> ZetaEval:
    """Evaluate zeta(s) (and optionally zeta'(s)) for a HeatTrace model.

    s may be any real or complex number away from the poles {p > 0 with
    c_p != 0}; s = 0 is handled by exact coefficient arithmetic plus the
    entire integral parts.  Derivatives are supported for real s.
    """
    eps = _quad_eps(quad_eps)
    s = complex(s)
    for p in h.positive_powers:
        if abs(s - p) < 1e-8:
            raise PoleHit(f"zeta has a pole at s = {p}")
    is_real = s.imag == 0.0
    upper = max(2.0, _EXP_CUTOFF / h.lambda_min)
    c0, b = h.constant_coefficient, h.kernel_dim

    if abs(s) < 1e-13:
        value = c0 - float(b)
        err = 1e-15 * (abs(c0) + b + 1.0)
        deriv = None
        if derivative:
            rem_int, e1 = _integrate(lambda t: h.remainder(t) / t, h.t_floor, 1.0, eps)
            tail_int, e2 = _integrate(lambda t: h.tail(t) / t, 1.0, upper, eps)
            deriv = (EULER_GAMMA * (c0 - b)
                     - sum(c / p for p, c in h.terms if p != 0.0)
                     + rem_int + tail_int)
            err += 5.0 * (e1 + e2) + 1e-13
        return ZetaEval(s=s, value=value, derivative=deriv,
                        abs_error_estimate=err, kernel_dim=b)

    closed = sum(c / (s - p) for p, c in h.terms) - b / s

    if is_real:
        sr = s.real
        rem_int, e1 = _integrate(lambda t: t ** (sr - 1.0) * h.remainder(t),
                                 h.t_floor, 1.0, eps)
        tail_int, e2 = _integrate(lambda t: t ** (sr - 1.0) * h.tail(t),
                                  1.0, upper, eps)
        f_val = closed.real + rem_int + tail_int
        rg = rgamma(sr)
        value: float | complex = rg * f_val
        err = 5.0 * abs(rg) * (e1 + e2) + 1e-14 * (abs(f_val) + 1.0)
        deriv = None
        if derivative:
            f_prime = (-sum(c / (s - p) ** 2 for p, c in h.terms) + b / s ** 2).real
            dr, e3 = _integrate(
                lambda t: t ** (sr - 1.0) * math.log(t) * h.remainder(t),
                h.t_floor, 1.0, eps)
            dt_, e4 = _integrate(
                lambda t: t ** (sr - 1.0) * math.log(t) * h.tail(t),
                1.0, upper, eps)
            f_prime += dr + dt_
            deriv = _rgamma_prime(sr) * f_val + rg * f_prime
            err += 5.0 * abs(rg) * (e3 + e4)
        return ZetaEval(s=s, value=float(value), derivative=deriv,
                        abs_error_estimate=err, kernel_dim=b)

    if derivative:
        raise BadParameter("derivative evaluation is supported for real s only")

    def complex_piece(fn, lo, hi):
        re, er1 = _integrate(lambda t: (t ** (s - 1.0) * fn(t)).real, lo, hi, eps)
        im, er2 = _integrate(lambda t: (t ** (s - 1.0) * fn(t)).imag, lo, hi, eps)
        return complex(re, im), er1 + er2

    rem_c, e1 = complex_piece(h.remainder, h.t_floor, 1.0)
    tail_c, e2 = complex_piece(h.tail, 1.0, upper)
    f_val = closed + rem_c + tail_c
    rg = rgamma(s)
    return ZetaEval(s=s, value=rg * f_val, derivative=None,
                    abs_error_estimate=5.0 * abs(rg) * (e1 + e2) + 1e-14,
                    kernel_dim=b)
