"""Bessel and Hankel functions of complex order on arbitrary branches.

Values are computed at a core point w with arg w in (-pi/2, pi/2] and carried
to the requested sheet with the continuation formulas

    J_nu(w e^{m pi i}) = e^{m nu pi i} J_nu(w)
    Y_nu(w e^{m pi i}) = e^{-m nu pi i} Y_nu(w) + 2i sin(m nu pi) cot(nu pi) J_nu(w)

At the core point: optimally truncated Hankel asymptotics when the modulus is
at least 12 and the truncation error is small enough, otherwise the power
series (switching to mpmath working precision when cancellation is heavy).
"""
from __future__ import annotations

import cmath
import functools
import math
from dataclasses import dataclass

import mpmath

from .branch import BranchPoint, EvalResult
from .core import chebyshev_u, cospi, expipi, rgamma, sinpi
from .errors import AccuracyError, ConvergenceError, PoleError, SectorError

ASYMPTOTIC_MIN_MODULUS = 12.0
TARGET_RTOL = 1e-12
NEAR_INTEGER = 1e-6
RICHARDSON_H = 1e-4
_EPS = 2.2e-16
_MAX_TERMS = 4000
_MAX_DPS = 600


@dataclass(frozen=True)
class _Core:
    J: complex
    Y: complex
    H1: complex
    H2: complex
    err: float
    method: str
    order: int | None


def _as_bp(z) -> BranchPoint:
    return BranchPoint.coerce(z)


def _near_int(nu: complex, tol: float) -> int | None:
    n = round(nu.real)
    return int(n) if abs(nu - n) < tol else None


# power series --------------------------------------------------------------

def _ratio_sum(nu, w2, one, tol):
    """sum_k w2^k / (k! (nu+1)_k); returns (sum, sum of |terms|)."""
    t = one
    s = one
    absum = 1.0
    kmin = int(math.sqrt(abs(w2))) + 2
    k = 0
    while True:
        t = t * w2 / ((k + 1) * (nu + k + 1))
        k += 1
        s = s + t
        at = abs(t)
        absum += float(at)
        if k > kmin and at <= tol * abs(s):
            return s, absum
        if k > _MAX_TERMS:
            raise ConvergenceError("power series did not converge")


def _series_j(nu: complex, w: BranchPoint) -> tuple[complex, float]:
    """J_nu(w) by the power series; returns (value, abs error estimate)."""
    if w.modulus == 0:
        if nu == 0:
            return 1 + 0j, 0.0
        if nu.real > 0:
            return 0j, 0.0
        raise PoleError("J_nu(0) is not finite for Re(nu) <= 0, nu != 0")
    n = _near_int(nu, 1e-12)
    if n is not None and n < 0:
        val, err = _series_j(complex(-n), w)
        return (-1) ** n * val, err
    pref = cmath.exp(nu * complex(math.log(w.modulus / 2.0), w.arg)) * rgamma(nu + 1)
    zeta = w.value
    w2 = -zeta * zeta / 4.0
    s, absum = _ratio_sum(nu, w2, 1 + 0j, 1e-17)
    loss = absum / max(abs(s), 1e-300)
    if loss * _EPS <= TARGET_RTOL * 0.1:
        return pref * s, abs(pref) * absum * 4 * _EPS
    dps = min(_MAX_DPS, 20 + int(math.log10(loss)) + 1)
    with mpmath.workdps(dps):
        smp, _ = _ratio_sum(mpmath.mpc(nu), mpmath.mpc(w2), mpmath.mpc(1), mpmath.mpf(10) ** (-dps))
        s = complex(smp)
    return pref * s, abs(pref) * (abs(s) * 8 * _EPS + absum * 10.0 ** (-dps + 2))


def _series_y(nu: complex, w: BranchPoint) -> tuple[complex, complex, float]:
    """(J_nu, Y_nu, err) by the series; Richardson near integer orders."""
    n = _near_int(nu, NEAR_INTEGER)
    jv, ej = _series_j(nu, w)
    if n is None:
        jm, em = _series_j(-nu, w)
        c, s = cospi(nu), sinpi(nu)
        y = (jv * c - jm) / s
        return jv, y, ej + (ej * abs(c) + em) / abs(s)
    h = RICHARDSON_H

    def sym(step):
        ya = _series_y(nu + step, w)
        yb = _series_y(nu - step, w)
        return 0.5 * (ya[1] + yb[1]), ya[2] + yb[2]

    s1, e1 = sym(h)
    s2, e2 = sym(h / 2)
    y = (4.0 * s2 - s1) / 3.0
    return jv, y, ej + (4 * e2 + e1) / 3 + abs(s2 - s1) * 1e-4


def _series_j_mp(nu, log_half, zeta2, dps):
    # J_nu in working precision; log_half = log(zeta/2) on the sheet of zeta
    pref = mpmath.exp(nu * log_half) * mpmath.rgamma(nu + 1)
    if pref == 0:
        n = int(mpmath.nint(mpmath.re(nu)))
        return (-1) ** n * _series_j_mp(-nu, log_half, zeta2, dps)
    s, _ = _ratio_sum(nu, -zeta2 / 4, mpmath.mpc(1), mpmath.mpf(10) ** (-dps))
    return pref * s


def _all_mp(nu: complex, w: BranchPoint, dps: int) -> tuple[complex, complex, complex, complex]:
    """(J, Y, H1, H2) at w, on its own sheet, from J_{+-nu} in working precision."""
    with mpmath.workdps(dps):
        # zeta built from (modulus, arg) so the prefactor and the series see one point
        log_half = mpmath.mpc(mpmath.log(mpmath.mpf(w.modulus) / 2), w.arg)
        zeta2 = 4 * mpmath.exp(2 * log_half)

        def four(order):
            jp = _series_j_mp(order, log_half, zeta2, dps)
            jm = _series_j_mp(-order, log_half, zeta2, dps)
            s = mpmath.sinpi(order)
            y = (jp * mpmath.cospi(order) - jm) / s
            h1 = (jm - mpmath.expjpi(-order) * jp) / (1j * s)
            h2 = (jm - mpmath.expjpi(order) * jp) / (-1j * s)
            return jp, y, h1, h2

        nu_m = mpmath.mpc(nu)
        if _near_int(nu, NEAR_INTEGER) is None:
            out = four(nu_m)
        else:
            h = mpmath.mpf(10) ** (-(dps // 4))
            a, b = four(nu_m + h), four(nu_m - h)
            c, d = four(nu_m + h / 2), four(nu_m - h / 2)
            out = [(4 * (c[i] + d[i]) - (a[i] + b[i])) / 6 for i in range(4)]
        return tuple(complex(v) for v in out)


def _hankel_pair_mp(nu: complex, w: BranchPoint, dps: int) -> tuple[complex, complex]:
    return _all_mp(nu, w, dps)[2:]


def _mp_dps(loss: float, w: BranchPoint) -> int:
    return min(_MAX_DPS, 30 + int(math.log10(loss) + 2 * w.modulus / math.log(10)))


# Hankel asymptotics --------------------------------------------------------

def _hankel_terms(nu: complex, zeta: complex, p: int | None):
    """Partial sums of sum_k (1/2-nu)_k (1/2+nu)_k / (k! (2 i zeta)^k) for both kinds.

    p=None: optimal truncation. Returns (S1, S2, first omitted |term|, terms used).
    """
    x = 2j * zeta
    t = 1 + 0j
    s1 = 1 + 0j
    s2 = 1 + 0j
    k = 0
    prev = 1.0
    limit = p if p is not None else _MAX_TERMS
    while k + 1 < limit or p is None:
        nxt = t * (0.5 - nu + k) * (0.5 + nu + k) / ((k + 1) * x)
        an = abs(nxt)
        if p is None:
            if an == 0.0:
                return s1, s2, 0.0, k + 1
            if (k + 1 > abs(nu) + 1 and an >= prev) or an <= 1e-17 * abs(s1):
                return s1, s2, an, k + 1
            if k + 1 >= _MAX_TERMS:
                return s1, s2, an, k + 1
        t = nxt
        k += 1
        s1 += t
        s2 += t if k % 2 == 0 else -t
        prev = an
    omitted = t * (0.5 - nu + k) * (0.5 + nu + k) / ((k + 1) * x)
    return s1, s2, abs(omitted), k + 1


def _hankel_prefactors(nu: complex, w: BranchPoint):
    zeta = w.value
    root = cmath.exp(-0.5 * complex(math.log(math.pi * w.modulus / 2.0), w.arg))
    omega = zeta - nu * math.pi / 2 - math.pi / 4
    return root * cmath.exp(1j * omega), root * cmath.exp(-1j * omega)


def _asymptotic_core(nu: complex, w: BranchPoint):
    s1, s2, omitted, used = _hankel_terms(nu, w.value, None)
    f1, f2 = _hankel_prefactors(nu, w)
    h1, h2 = f1 * s1, f2 * s2
    err = (abs(f1) + abs(f2)) * omitted
    return h1, h2, err, used


@functools.lru_cache(maxsize=8192)
def _core(nu: complex, w: BranchPoint) -> _Core:
    """All four functions at a point with arg in (-pi/2, pi/2]; memoized because
    J, Y and both Hankel functions are requested separately at the same point."""
    if w.modulus >= ASYMPTOTIC_MIN_MODULUS:
        h1, h2, err, used = _asymptotic_core(nu, w)
        scale = max(abs(h1), abs(h2))
        if err <= TARGET_RTOL * 0.01 * scale:
            return _Core(0.5 * (h1 + h2), (h1 - h2) / 2j, h1, h2, err, "asymptotic", used)
    jv, y, err = _series_y(nu, w)
    h1, h2 = jv + 1j * y, jv - 1j * y
    big = max(abs(jv), abs(y))
    small = min(abs(h1), abs(h2))
    if small < 1e-2 * big:
        loss = big / max(small, 1e-300 * big)
        dps = min(_MAX_DPS, 30 + int(math.log10(loss)) + int(2 * w.modulus / math.log(10)))
        h1, h2 = _hankel_pair_mp(nu, w, dps)
    return _Core(jv, y, h1, h2, err, "series", None)


def _split(z) -> tuple[BranchPoint, int]:
    """z = w * exp(k pi i) with arg w in (-pi/2, pi/2]."""
    w, m = _as_bp(z).split(half=True)
    return w, -m


def _continue_jy(nu: complex, c: _Core, k: int, zb: BranchPoint | None = None) -> tuple[complex, complex]:
    if k == 0:
        return c.J, c.Y
    j = expipi(k * nu) * c.J
    t1, t2 = expipi(-k * nu) * c.Y, 2j * chebyshev_u(k, nu) * cospi(nu) * c.J
    y = t1 + t2
    loss = max(abs(t1), abs(t2)) / max(abs(y), 1e-300)
    if zb is not None and loss > 1e2:
        j, y, _, _ = _all_mp(nu, zb, _mp_dps(loss, zb))
    return j, y


def _continue_h(nu: complex, c: _Core, k: int, zb: BranchPoint | None = None) -> tuple[complex, complex]:
    # same continuation written in the Hankel basis, so a recessive H keeps
    # its relative accuracy
    if k == 0:
        return c.H1, c.H2
    u_prev, u, u_next = chebyshev_u(k - 1, nu), chebyshev_u(k, nu), chebyshev_u(k + 1, nu)
    t = (-u_prev * c.H1, -expipi(-nu) * u * c.H2, expipi(nu) * u * c.H1, u_next * c.H2)
    h1, h2 = t[0] + t[1], t[2] + t[3]
    loss = max(max(abs(t[0]), abs(t[1])) / max(abs(h1), 1e-300),
               max(abs(t[2]), abs(t[3])) / max(abs(h2), 1e-300))
    if zb is not None and loss > 1e2:
        # complex nu makes the sheet factors large; redo both on the target sheet
        h1, h2 = _hankel_pair_mp(nu, zb, _mp_dps(loss, zb))
    return h1, h2


def _result(value, err, c: _Core, k: int) -> EvalResult:
    if k == 0:
        return EvalResult(value, err, c.method, c.order)
    return EvalResult(value, err, "continuation", k)


def bessel_j(nu, z) -> EvalResult:
    """J_nu on the sheet carried by z (a BranchPoint or a principal complex)."""
    nu = complex(nu)
    zb = _as_bp(z)
    if zb.modulus == 0:
        v, e = _series_j(nu, zb)
        return EvalResult(v, e, "series")
    w, k = _split(zb)
    if w.modulus < ASYMPTOTIC_MIN_MODULUS:
        v, e = _series_j(nu, w)
        c = _Core(v, 0j, 0j, 0j, e, "series", None)
    else:
        c = _core(nu, w)
    j = c.J * (expipi(k * nu) if k else 1)
    return _result(j, c.err * abs(expipi(k * nu)), c, k)


def bessel_y(nu, z) -> EvalResult:
    """Y_nu on the sheet carried by z."""
    nu = complex(nu)
    zb = _as_bp(z)
    if zb.modulus == 0:
        raise PoleError("Y_nu is singular at the origin")
    w, k = _split(zb)
    c = _core(nu, w)
    _, y = _continue_jy(nu, c, k, zb)
    growth = 1.0 + abs(expipi(-k * nu)) + 2 * abs(chebyshev_u(k, nu) * cospi(nu))
    return _result(y, c.err * growth, c, k)


def hankel(kind: int, nu, z) -> EvalResult:
    """H^(1) = J + iY or H^(2) = J - iY on the sheet carried by z."""
    if kind not in (1, 2):
        raise ValueError("kind must be 1 or 2")
    nu = complex(nu)
    zb = _as_bp(z)
    if zb.modulus == 0:
        raise PoleError("Hankel functions are singular at the origin")
    w, k = _split(zb)
    c = _core(nu, w)
    if k == 0:
        return EvalResult(c.H1 if kind == 1 else c.H2, c.err, c.method, c.order)
    h1, h2 = _continue_h(nu, c, k, zb)
    growth = sum(abs(chebyshev_u(j, nu)) for j in (k - 1, k, k + 1)) * (1 + abs(expipi(nu)) + abs(expipi(-nu)))
    return EvalResult(h1 if kind == 1 else h2, c.err * growth, "continuation", k)


def bessel_all(nu, z) -> tuple[complex, complex, complex, complex]:
    """(J, Y, H1, H2) on the sheet carried by z from one core evaluation."""
    nu = complex(nu)
    zb = _as_bp(z)
    w, k = _split(zb)
    c = _core(nu, w)
    if k == 0:
        return c.J, c.Y, c.H1, c.H2
    j, y = _continue_jy(nu, c, k, zb)
    h1, h2 = _continue_h(nu, c, k, zb)
    return j, y, h1, h2


def hankel_asymptotic(kind: int, nu, z, p: int) -> EvalResult:
    """p-term truncation of the Hankel asymptotic expansion, returning H itself."""
    if kind not in (1, 2):
        raise ValueError("kind must be 1 or 2")
    if p < 1:
        raise ValueError("p must be positive")
    nu = complex(nu)
    zb = _as_bp(z)
    lo, hi = (-math.pi, 2 * math.pi) if kind == 1 else (-2 * math.pi, math.pi)
    if not lo < zb.arg < hi:
        raise SectorError(f"arg {zb.arg} outside ({lo}, {hi}) for kind {kind}")
    if zb.modulus < 10.0:
        raise AccuracyError("modulus below 10")
    if p > 2 * zb.modulus + abs(nu) + 1:
        raise AccuracyError(f"p={p} exceeds the optimal truncation for modulus {zb.modulus}")
    s1, s2, omitted, _ = _hankel_terms(nu, zb.value, p)
    f1, f2 = _hankel_prefactors(nu, zb)
    if kind == 1:
        return EvalResult(f1 * s1, abs(f1) * omitted, "asymptotic", p)
    return EvalResult(f2 * s2, abs(f2) * omitted, "asymptotic", p)


def _shifted(fn, nu: complex, z, shifts) -> list[complex]:
    return [fn(nu + s, z).value for s in shifts]


def bessel_derivs(kind: str, nu, z) -> tuple[complex, complex, complex]:
    """(f, f', f'') for f in {"J", "Y", "H1", "H2"} via order recurrences.

    f' = (f_{nu-1} - f_{nu+1})/2 and f'' = (f_{nu-2} - 2 f_nu + f_{nu+2})/4.
    """
    fn = {"J": bessel_j, "Y": bessel_y,
          "H1": lambda n, x: hankel(1, n, x), "H2": lambda n, x: hankel(2, n, x)}[kind]
    nu = complex(nu)
    fm2, fm1, f0, fp1, fp2 = _shifted(fn, nu, z, (-2, -1, 0, 1, 2))
    return f0, 0.5 * (fm1 - fp1), 0.25 * (fm2 - 2 * f0 + fp2)
