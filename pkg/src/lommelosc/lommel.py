"""Lommel function S_{mu,nu} on the principal branch and on every other sheet.

Principal values come from one of four routes:

* terminating polynomial zeta^{mu-1} sum (-1)^k c_k zeta^{-2k} (degenerate pairs)
* optimally truncated descending expansion (large modulus, |arg| <= pi/2)
* S = s_{mu,nu} + K [sin((mu-nu)pi/2) J_nu - cos((mu-nu)pi/2) Y_nu] with the
  even power series s_{mu,nu}, in double or mpmath working precision
* an ODE integrator anchored on the descending expansion (negative odd
  mu +- nu, where the series denominators vanish, and near such pairs)

Other sheets are reached from principal values through continuation formulas
written in the Hankel basis.
"""
from __future__ import annotations

import cmath
import math
from dataclasses import dataclass
from functools import lru_cache

import mpmath
import numpy as np
from scipy.integrate import solve_ivp

from . import bessel
from .branch import BranchPoint, EvalResult
from .core import (
    Poly, abc_polys, chebyshev_u, cospi, expipi, gamma_complex, lommel_ck,
    nearest_nonpositive_int, pochhammer, sinpi,
)
from .errors import (
    BranchError, ConvergenceError, DegenerateDenominator, NotDegenerateError,
    PoleError, UnsupportedCase,
)

DEGENERACY_TOL = 1e-10
MAX_P = 64
NEAR_DEGENERATE = 1e-8
ASYMPTOTIC_MIN_MODULUS = 12.0
DENOMINATOR_TOL = 1e-12
TARGET_RTOL = 1e-12
ODE_RTOL = 1e-13
_EPS = 2.2e-16
_MAX_TERMS = 4000
_MAX_DPS = 600


@dataclass(frozen=True)
class LommelParams:
    mu: object
    nu: object

    def __post_init__(self):
        for v in (self.mu, self.nu):
            c = complex(v)
            if not (math.isfinite(c.real) and math.isfinite(c.imag)):
                raise ValueError("Lommel parameters must be finite")

    @property
    def cmu(self) -> complex:
        return complex(self.mu)

    @property
    def cnu(self) -> complex:
        return complex(self.nu)


@dataclass(frozen=True)
class DegeneracyClass:
    """tag in {"PlusOdd", "MinusOdd", "BothOdd", "NegativeOdd", "Generic"}.

    PlusOdd/MinusOdd: mu +- nu = 2p+1 (p stored; BothOdd stores both).
    NegativeOdd: mu = nu_eff - 2p - 1 with nu_eff in {nu, -nu}; case "a", "b"
    or "c" selects the continuation formula, n = -nu_eff for case "c".
    """

    tag: str
    p: int | None = None
    p_plus: int | None = None
    p_minus: int | None = None
    case: str | None = None
    nu_eff: complex | None = None
    n: int | None = None

    @property
    def is_degenerate(self) -> bool:
        return self.tag in ("PlusOdd", "MinusOdd", "BothOdd")


@dataclass(frozen=True)
class KConstants:
    """Continuation constants at branch index m; None marks a pole-limited field."""

    K: complex | None
    K_plus: complex | None
    Kp_plus: complex | None
    Kp_minus: complex | None
    Kpp_plus: float
    Kpp_minus: float
    m: int
    pole_limited: tuple[str, ...] = ()


def _as_params(params) -> LommelParams:
    if isinstance(params, LommelParams):
        return params
    mu, nu = params
    return LommelParams(mu, nu)


# classification -------------------------------------------------------------

def _positive_odd(x: complex, tol: float) -> int | None:
    p = round((x.real - 1) / 2)
    if 0 <= p <= MAX_P and abs(x - (2 * p + 1)) <= tol:
        return int(p)
    return None


def _negative_odd(x: complex, tol: float) -> int | None:
    p = round((-x.real - 1) / 2)
    if p >= 0 and abs(x + (2 * p + 1)) <= tol:
        return int(p)
    return None


def classify_degeneracy(params, tol: float = DEGENERACY_TOL) -> DegeneracyClass:
    if tol <= 0:
        raise ValueError("tol must be positive")
    prm = _as_params(params)
    mu, nu = prm.cmu, prm.cnu
    pp = _positive_odd(mu + nu, tol)
    pm = _positive_odd(mu - nu, tol)
    if pp is not None and pm is not None:
        return DegeneracyClass("BothOdd", p=min(pp, pm), p_plus=pp, p_minus=pm)
    if pp is not None:
        return DegeneracyClass("PlusOdd", p=pp, p_plus=pp)
    if pm is not None:
        return DegeneracyClass("MinusOdd", p=pm, p_minus=pm)
    # mu = nu' - 2p - 1 with nu' = nu (mu - nu odd negative) or nu' = -nu
    options = []
    for nu_eff in (nu, -nu):
        p = _negative_odd(mu - nu_eff, tol)
        if p is not None:
            options.append((nu_eff, p))
    if not options:
        return DegeneracyClass("Generic")
    for nu_eff, p in options:
        k = nearest_nonpositive_int(nu_eff)
        if k is None and abs(pochhammer(1 - nu_eff, p)) > 1e-8:
            return DegeneracyClass("NegativeOdd", p=p, case="a", nu_eff=nu_eff)
    for nu_eff, p in options:
        if abs(nu_eff) <= tol:
            return DegeneracyClass("NegativeOdd", p=p, case="b", nu_eff=0j)
    for nu_eff, p in options:
        k = nearest_nonpositive_int(nu_eff)
        if k is not None and k < 0:
            return DegeneracyClass("NegativeOdd", p=p, case="c", nu_eff=complex(k), n=-k)
    raise UnsupportedCase(f"no continuation formula covers mu={mu}, nu={nu}")


# degenerate polynomial ------------------------------------------------------

def lommel_degenerate_poly(params) -> tuple[object, Poly]:
    """(mu - 1, poly) with S = zeta^{mu-1} poly(1/zeta^2) and poly coefficients (-1)^k c_k."""
    prm = _as_params(params)
    cls = classify_degeneracy(prm)
    if not cls.is_degenerate:
        raise NotDegenerateError(f"{cls.tag} pair has no terminating series")
    coeffs = []
    for k in range(cls.p + 1):
        c = lommel_ck(prm.mu, prm.nu, k)
        coeffs.append(c if k % 2 == 0 else -c)
    # floating inputs near the degenerate set: the last factor is only ~0
    return prm.mu - 1, Poly(tuple(coeffs))


def degenerate_residual_coeffs(params) -> list:
    """Coefficients of zeta^{mu+1-2j}, j = 0..p+1, in the Bessel ODE residual of
    the degenerate polynomial minus zeta^{mu+1}; exact for exact parameters."""
    prm = _as_params(params)
    _, poly = lommel_degenerate_poly(prm)
    mu, nu = prm.mu, prm.nu
    a = list(poly.coeffs)
    p = len(a) - 1
    out = []
    for j in range(p + 2):
        # zeta^{mu+1-2j} gets a_j (from zeta^2 y) and a_{j-1}[(mu+1-2j)^2 - nu^2]
        c = a[j] if j <= p else 0
        if j >= 1:
            e = mu + 1 - 2 * j
            c = c + a[j - 1] * (e * e - nu * nu)
        if j == 0:
            c = c - 1
        out.append(c)
    return out


@lru_cache(maxsize=256, typed=True)
def _degenerate_floats(mu, nu) -> tuple[complex, tuple[complex, ...]]:
    # typed so exact and float parameters never share an entry
    exponent, poly = lommel_degenerate_poly(LommelParams(mu, nu))
    return complex(exponent), tuple(complex(c) for c in poly.coeffs)


def _poly_eval(prm: LommelParams, z: BranchPoint) -> tuple[complex, complex]:
    e, coeffs = _degenerate_floats(prm.mu, prm.nu)
    x = 1 / (z.value * z.value)
    s = 0j
    ds = 0j
    for k in reversed(range(len(coeffs))):
        s = s * x + coeffs[k]
        ds = ds * x + coeffs[k] * (e - 2 * k)
    pref = z.power(e)
    return pref * s, pref * ds / z.value


# descending expansion --------------------------------------------------------

def _descending(mu: complex, nu: complex, z: BranchPoint, terms: int | None = None):
    """Optimally truncated sum zeta^{mu-1} sum_k (-1)^k c_k zeta^{-2k}.

    Returns (S, dS/dzeta, first omitted |term|, terms used).
    """
    x = 1 / (z.value * z.value)
    pref = z.power(mu - 1)
    t = 1 + 0j
    s = t
    ds = (mu - 1) * t
    k = 0
    kmin = (abs(mu) + abs(nu)) / 2 + 1
    prev = 1.0
    while True:
        f = mu - 2 * k - 1
        nxt = -t * (f * f - nu * nu) * x
        an = abs(nxt)
        if terms is not None and k + 1 >= terms:
            break
        if terms is None:
            if an == 0.0:
                break
            if (k + 1 > kmin and an >= prev) or an <= 1e-17 * abs(s) or k >= _MAX_TERMS:
                break
        t = nxt
        k += 1
        s += t
        ds += (mu - 1 - 2 * k) * t
        prev = an
    return pref * s, pref * ds / z.value, abs(pref) * an, k + 1


def lommel_asymptotic(params, z, terms: int | None = None) -> EvalResult:
    """The descending expansion itself; terms=None truncates optimally."""
    prm = _as_params(params)
    zb = BranchPoint.coerce(z)
    if zb.modulus == 0:
        raise PoleError("expansion undefined at the origin")
    s, _, err, used = _descending(prm.cmu, prm.cnu, zb, terms)
    return EvalResult(s, err, "asymptotic", used)


# power series route ----------------------------------------------------------

def _min_denominator(mu: complex, nu: complex, zmod: float) -> float:
    jmax = int(zmod) + int(abs(mu) + abs(nu)) + 10
    return min(abs((mu + 2 * j - 1) ** 2 - nu * nu) for j in range(1, jmax + 1))


def _k_value(mu, nu):
    return 2 ** (mu - 1) * gamma_complex((mu + nu + 1) / 2) * gamma_complex((mu - nu + 1) / 2)


def _s_sum(mu, nu, zeta2, first, tol, kmin):
    """sum_k t_k with t_0 = first and t_{k+1}/t_k = -zeta^2/((mu+2k+3)^2 - nu^2)."""
    t = first
    s = first
    absum = float(abs(first))
    k = 0
    while True:
        f = mu + 2 * k + 3
        t = -t * zeta2 / (f * f - nu * nu)
        k += 1
        s = s + t
        at = abs(t)
        absum += float(at)
        if k > kmin and at <= tol * abs(s):
            return s, absum
        if k > _MAX_TERMS:
            raise ConvergenceError("Lommel power series did not converge")


def _series_double(mu, nu, z: BranchPoint):
    zeta = z.value
    kmin = int(z.modulus) + 2
    f = mu + 1
    s, absum = _s_sum(mu, nu, zeta * zeta, 1 / (f * f - nu * nu), 1e-17, kmin)
    pref = z.power(mu + 1)
    jv, yv, _, _ = bessel.bessel_all(nu, z)
    ej = bessel.bessel_j(nu, z).abs_err_est
    ey = bessel.bessel_y(nu, z).abs_err_est
    kk = _k_value(mu, nu)
    a, b = sinpi((mu - nu) / 2), cospi((mu - nu) / 2)
    val = pref * s + kk * (a * jv - b * yv)
    scale = abs(pref) * absum + abs(kk) * (abs(a * jv) + abs(b * yv))
    err = scale * 8 * _EPS + abs(kk) * (abs(a) * ej + abs(b) * ey)
    return val, err, scale


def _series_mp(mu, nu, z: BranchPoint, dps: int) -> complex:
    with mpmath.workdps(dps):
        zeta = mpmath.mpc(z.value)
        m = mpmath.mpc(mu)

        def at(order):
            f = m + 1
            s, _ = _s_sum(m, order, zeta * zeta, 1 / (f * f - order * order),
                          mpmath.mpf(10) ** (-dps), int(z.modulus) + 2)
            s = s * mpmath.exp((m + 1) * mpmath.log(zeta))
            kk = mpmath.power(2, m - 1) * mpmath.gamma((m + order + 1) / 2) * mpmath.gamma((m - order + 1) / 2)
            jp = bessel._series_j_mp(order, mpmath.log(zeta / 2), zeta * zeta, dps)
            jm = bessel._series_j_mp(-order, mpmath.log(zeta / 2), zeta * zeta, dps)
            comb = (mpmath.cospi((m - order) / 2) * jm - mpmath.cospi((m + order) / 2) * jp) / mpmath.sinpi(order)
            return s + kk * comb

        n = mpmath.mpc(nu)
        if bessel._near_int(complex(nu), 1e-6) is None:
            return complex(at(n))
        h = mpmath.mpf("1e-5")
        s1 = (at(n + h) + at(n - h)) / 2
        s2 = (at(n + h / 2) + at(n - h / 2)) / 2
        return complex((4 * s2 - s1) / 3)


def _series_route(mu, nu, z: BranchPoint) -> EvalResult:
    val, err, scale = _series_double(mu, nu, z)
    if err <= TARGET_RTOL * abs(val):
        return EvalResult(val, err, "series")
    loss = scale / max(abs(val), 1e-300 * max(scale, 1e-300))
    dps = min(_MAX_DPS, 35 + int(math.log10(max(loss, 1.0))) + int(z.modulus / math.log(10)))
    val = _series_mp(mu, nu, z, dps)
    return EvalResult(val, abs(val) * 1e-14 + 1e-300, "series")


# ODE oracle --------------------------------------------------------------------

def _ode_rhs_line(mu, nu, a0):
    nu2 = nu * nu
    e = mu - 1

    def rhs(t, y):
        zeta = a0 - t
        s, ds = y
        d2 = zeta ** e - ds / zeta - (1 - nu2 / (zeta * zeta)) * s
        return [-ds, -d2]

    return rhs


def _anchor(mu, nu, target: complex):
    """Point target + X (X >= 0) where the descending expansion is accurate."""
    radius = 40.0 + 2.0 * (abs(mu) + abs(nu))
    for _ in range(8):
        im = target.imag
        x = max(0.0, math.sqrt(max(radius * radius - im * im, 0.0)) - target.real)
        a0 = target + x
        ab = BranchPoint.from_complex(a0)
        s, ds, err, _ = _descending(mu, nu, ab)
        if err <= 1e-16 * abs(s):
            return a0, s, ds, x
        radius += 15.0
    raise ConvergenceError("no accurate anchor for the ODE integrator")


def lommel_ode(params, z) -> tuple[EvalResult, complex]:
    """(S, S') at a principal point by integrating the inhomogeneous Bessel equation
    along the horizontal line from an anchor far to the right."""
    prm = _as_params(params)
    zb = BranchPoint.coerce(z)
    if not zb.is_principal:
        raise BranchError("ODE integrator needs a principal point")
    zeta = zb.value
    if zb.modulus == 0 or (zeta.imag == 0 and zeta.real <= 0):
        raise BranchError("horizontal path would cross the cut or the origin")
    mu, nu = prm.cmu, prm.cnu
    a0, s0, ds0, length = _anchor(mu, nu, zeta)
    if length == 0.0:
        return EvalResult(s0, 1e-16 * abs(s0), "ode"), ds0
    rhs = _ode_rhs_line(mu, nu, a0)
    outs = []
    for rtol in (ODE_RTOL, 100 * ODE_RTOL):
        sol = solve_ivp(rhs, (0.0, length), np.array([s0, ds0], dtype=complex),
                        method="DOP853", rtol=rtol, atol=1e-300)
        if not sol.success:
            raise ConvergenceError(f"ODE integrator failed: {sol.message}")
        outs.append(sol.y[:, -1])
    fine, coarse = outs
    err = abs(fine[0] - coarse[0]) + 1e-15 * abs(fine[0])
    return EvalResult(complex(fine[0]), float(err), "ode"), complex(fine[1])


def lommel_arc(params, z, s0: complex, ds0: complex, turns: float) -> tuple[complex, complex]:
    """Carry (S, S') from z to z * exp(i pi turns) along |zeta| = |z|.

    Independent of every closed-form continuation formula; intended as an oracle.
    """
    prm = _as_params(params)
    zb = BranchPoint.coerce(z)
    mu, nu = prm.cmu, prm.cnu
    r, th0 = zb.modulus, zb.arg
    logr = math.log(r)
    nu2 = nu * nu

    def rhs(t, y):
        ang = th0 + t
        zeta = cmath.rect(r, ang)
        src = cmath.exp((mu - 1) * complex(logr, ang))
        s, ds = y
        d2 = src - ds / zeta - (1 - nu2 / (zeta * zeta)) * s
        return [1j * zeta * ds, 1j * zeta * d2]

    sol = solve_ivp(rhs, (0.0, math.pi * turns), np.array([s0, ds0], dtype=complex),
                    method="DOP853", rtol=1e-13, atol=1e-300)
    if not sol.success:
        raise ConvergenceError(f"arc integration failed: {sol.message}")
    return complex(sol.y[0, -1]), complex(sol.y[1, -1])


# principal branch -----------------------------------------------------------

def _core_generic(prm: LommelParams, w: BranchPoint) -> EvalResult:
    """Non-degenerate, non-negative-odd S at |arg w| <= pi/2."""
    mu, nu = prm.cmu, prm.cnu
    if w.modulus >= ASYMPTOTIC_MIN_MODULUS:
        r = lommel_asymptotic(prm, w)
        if r.abs_err_est <= 1e-2 * TARGET_RTOL * abs(r.value):
            return r
    if _min_denominator(mu, nu, w.modulus) < NEAR_DEGENERATE:
        return lommel_ode(prm, w)[0]
    return _series_route(mu, nu, w)


def _core(prm: LommelParams, cls: DegeneracyClass, w: BranchPoint) -> EvalResult:
    if cls.tag == "NegativeOdd":
        if w.modulus >= ASYMPTOTIC_MIN_MODULUS:
            r = lommel_asymptotic(prm, w)
            if r.abs_err_est <= 1e-2 * TARGET_RTOL * abs(r.value):
                return r
        return lommel_ode(prm, w)[0]
    return _core_generic(prm, w)


def lommel_S_principal(params, z, method: str = "auto") -> EvalResult:
    """S_{mu,nu}(z) for -pi < arg z < pi.

    method: "auto", or force "series", "asymptotic", "polynomial", "ode".
    """
    prm = _as_params(params)
    zb = BranchPoint.coerce(z)
    if not zb.is_principal:
        raise BranchError(f"arg {zb.arg} outside (-pi, pi)")
    if zb.modulus == 0:
        raise PoleError("S is not evaluated at the origin")
    cls = classify_degeneracy(prm)
    mu, nu = prm.cmu, prm.cnu
    if method == "polynomial" or (method == "auto" and cls.is_degenerate):
        v, _ = _poly_eval(prm, zb)
        return EvalResult(v, 4 * _EPS * abs(v), "polynomial")
    if method == "asymptotic":
        return lommel_asymptotic(prm, zb)
    if method == "ode":
        return lommel_ode(prm, zb)[0]
    if method == "series":
        if _min_denominator(mu, nu, zb.modulus) == 0.0 or cls.tag == "NegativeOdd":
            raise PoleError("series denominators vanish for a negative odd mu +- nu")
        return _series_route(mu, nu, zb)
    if method != "auto":
        raise ValueError(f"unknown method {method!r}")
    w, m = zb.split(half=True)
    if m == 0:
        return _core(prm, cls, w)
    if cls.tag == "Generic" and zb.modulus < ASYMPTOTIC_MIN_MODULUS:
        if _min_denominator(mu, nu, zb.modulus) >= NEAR_DEGENERATE:
            return _series_route(mu, nu, zb)
        return lommel_ode(prm, zb)[0]
    return _continued(prm, cls, w, m)


# continuation constants -------------------------------------------------------

def k_constants(params, m: int) -> KConstants:
    prm = _as_params(params)
    mu, nu = prm.cmu, prm.cnu
    cls = classify_degeneracy(prm)
    limited = []
    try:
        kk = _k_value(mu, nu)
    except PoleError:
        kk = None
        limited.append("K")
    if cls.tag in ("MinusOdd", "BothOdd"):
        kp = 0j
    elif kk is None:
        kp = None
        limited.append("K_plus")
    else:
        kp = kk * 1j * (1 + expipi(nu - mu)) * cospi((mu + nu) / 2)
    try:
        g = gamma_complex(nu)
        base = math.pi * 2 ** (nu - 2) * 1j * expipi(-m * nu) * g
        u = chebyshev_u(m, nu)
        kpp = base * (u * expipi((m + 1) * nu) - m)
        kpm = base * (u * expipi((m - 1) * nu) - m)
    except PoleError:
        kpp = kpm = None
        limited += ["Kp_plus", "Kp_minus"]
    return KConstants(kk, kp, kpp, kpm, -m * math.pi ** 2 * (m + 1) / 4,
                      -m * math.pi ** 2 * (m - 1) / 4, m, tuple(limited))


def _p_numerator(m: int, mu: complex, nu: complex) -> complex:
    sign = -1 if (m + 1) % 2 else 1
    return (chebyshev_u(m, nu) + expipi(-mu) * chebyshev_u(m + 1, nu)
            + sign * expipi(-(m + 1) * mu))


def continuation_coeff_P(m: int, params) -> complex:
    """P_m as a rational function of cos(nu pi) and exp(-mu pi i)."""
    prm = _as_params(params)
    mu, nu = prm.cmu, prm.cnu
    den = (1 + expipi(-(mu + nu))) * (1 + expipi(-(mu - nu)))
    if abs(den) < DENOMINATOR_TOL:
        raise DegenerateDenominator(f"|denominator| = {abs(den):.3g}")
    return _p_numerator(m, mu, nu) / den


def _kplus_p(m: int, mu: complex, nu: complex, kk: complex) -> complex:
    # K_+ P_m with the vanishing factors cancelled analytically
    return 0.5j * kk * expipi((mu + nu) / 2) * _p_numerator(m, mu, nu)


# continuation -------------------------------------------------------------------

def _hankels(nu, w: BranchPoint):
    # w may lie anywhere in (-pi, pi); the public entry points split it first
    h1, h2 = bessel.hankel(1, nu, w), bessel.hankel(2, nu, w)
    return h1.value, h2.value, max(h1.abs_err_est, h2.abs_err_est)


def _continued(prm: LommelParams, cls: DegeneracyClass, z: BranchPoint, m: int) -> EvalResult:
    """S(z e^{-m pi i}) from values at the principal point z."""
    mu, nu = prm.cmu, prm.cnu
    if cls.is_degenerate:
        v, _ = _poly_eval(prm, z.rotate(-m))
        return EvalResult(v, 4 * _EPS * abs(v), "polynomial")
    base = lommel_S_principal(prm, z)
    s0, es = base.value, base.abs_err_est
    if cls.tag == "Generic":
        kk = _k_value(mu, nu)
        h1, h2, eh = _hankels(nu, z)
        c1 = _kplus_p(m, mu, nu, kk)
        c2 = expipi(-nu) * _kplus_p(m - 1, mu, nu, kk)
        lead = expipi(-m * (mu + 1))
        val = lead * s0 + c1 * h1 + c2 * h2
        err = abs(lead) * es + (abs(c1) + abs(c2)) * eh
        return EvalResult(val, err, "continuation", m)
    p = cls.p
    if cls.case == "a":
        nu1 = cls.nu_eff
        kc = k_constants((mu, nu1), m)
        h1, h2, eh = _hankels(nu1, z)
        coef = (-1) ** p / (4 ** p * math.factorial(p) * pochhammer(1 - nu1, p))
        lead = expipi(-m * nu1)
        c1, c2 = coef * kc.Kp_plus, coef * kc.Kp_minus
        val = lead * s0 + c1 * h1 + c2 * h2
        err = abs(lead) * es + (abs(c1) + abs(c2)) * eh
        return EvalResult(val, err, "continuation", m)
    kpp_p = -m * math.pi ** 2 * (m + 1) / 4
    kpp_m = -m * math.pi ** 2 * (m - 1) / 4
    h01, h02, e0 = _hankels(0, z)
    if cls.case == "b":
        coef = (-1) ** p / (4 ** p * math.factorial(p) ** 2)
        c1, c2 = coef * kpp_p, coef * kpp_m
        val = s0 + c1 * h01 + c2 * h02
        return EvalResult(val, es + (abs(c1) + abs(c2)) * e0, "continuation", m)
    n = cls.n
    h11, h12, e1 = _hankels(1, z)
    zeta = z.value
    a, b, c = abc_polys(n)
    delta = 1 + (-1) ** (m - 1)
    sign = -1 if ((m + 1) * n + p) % 2 else 1
    coef = sign / (2 ** (2 * p + n) * math.factorial(n) * math.factorial(p) ** 2 * pochhammer(1 + n, p))
    bbar = (b - b.odd_part() * delta).evalf(zeta)
    cbar = (c - c.odd_part() * delta).evalf(zeta)
    brace = bbar * (kpp_p * h01 + kpp_m * h02) - zeta * cbar * (kpp_p * h11 + kpp_m * h12)
    err_brace = (abs(bbar) * e0 + abs(zeta * cbar) * e1) * (abs(kpp_p) + abs(kpp_m))
    if delta:
        try:
            r, d = lommel_ode((-1, 0), z)
        except ConvergenceError as exc:
            raise UnsupportedCase(f"S_(-1,0) unavailable: {exc}") from exc
        ah, bh, ch = a.odd_part().evalf(zeta), b.odd_part().evalf(zeta), c.odd_part().evalf(zeta)
        brace -= delta * (ah + bh * r.value + zeta * ch * d)
        err_brace += delta * (abs(bh) + abs(zeta * ch)) * r.abs_err_est * 10
    scale = coef * zeta ** (-n)
    lead = (-1) ** ((m * n) % 2)
    val = lead * s0 + scale * brace
    return EvalResult(val, es + abs(scale) * err_brace, "continuation", m)


def lommel_continued(params, z_principal, m: int) -> complex:
    """S_{mu,nu}(zeta e^{-m pi i}) assembled from principal values at zeta."""
    return lommel_continued_result(params, z_principal, m).value


def lommel_continued_result(params, z_principal, m: int) -> EvalResult:
    prm = _as_params(params)
    zb = BranchPoint.coerce(z_principal)
    if not zb.is_principal:
        raise BranchError(f"arg {zb.arg} outside (-pi, pi)")
    cls = classify_degeneracy(prm)
    return _continued(prm, cls, zb, int(m))


def lommel_S(params, z) -> EvalResult:
    """S_{mu,nu} on the sheet carried by z (a BranchPoint or principal complex)."""
    prm = _as_params(params)
    zb = BranchPoint.coerce(z)
    if zb.is_principal:
        return lommel_S_principal(prm, zb)
    cls = classify_degeneracy(prm)
    if cls.is_degenerate:
        v, _ = _poly_eval(prm, zb)
        return EvalResult(v, 4 * _EPS * abs(v), "polynomial")
    w, m = zb.split(half=True)
    return _continued(prm, cls, w, m)
