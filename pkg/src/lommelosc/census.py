"""Auxiliary functions g and g-hat, their contours, and argument-principle counts.

    g(zeta)     = C e^{i zeta} + sigma zeta^{mu - 1/2}
    g-hat(zeta) = C e^{i zeta} + D e^{-i zeta} + sigma
"""
from __future__ import annotations

import cmath
import math
from dataclasses import dataclass, field
from typing import Callable

import numpy as np

from .branch import BranchPoint
from .errors import (
    DegenerateQuadratic, HypothesisError, ParamError, QuadratureError, ZeroOnContour,
)
from .wright import WrightTarget, subseq_hypothesis

MU_HALF_TOL = 1e-12
ZERO_DISTANCE = 1e-9
MAX_SAMPLES = 2 ** 20
WINDING_TOL = 1e-6

# 16-point Gauss-Legendre nodes and weights on [0, 1]
_GL_X, _GL_W = np.polynomial.legendre.leggauss(16)
_GL_X = 0.5 * (_GL_X + 1.0)
_GL_W = 0.5 * _GL_W


@dataclass(frozen=True)
class AuxParams:
    """Coefficients of g and g-hat.  mu = 1/2 is allowed for g-hat-only use."""

    C_hat: complex
    sigma_hat: complex
    mu: complex = 0.5
    D_hat: complex = 0j

    def __post_init__(self):
        if complex(self.C_hat) == 0:
            raise ParamError("C_hat must be non-zero")

    @property
    def c(self) -> complex:
        return 0.5 - complex(self.mu)

    @property
    def b(self) -> float:
        return abs(self.c)

    @property
    def phi(self) -> float:
        ph = cmath.phase(self.c)
        return math.pi if ph == -math.pi else ph


def _check_mu(params: AuxParams):
    if params.b < MU_HALF_TOL:
        raise ParamError("g needs mu != 1/2")


def _power(z, e: complex, arg=None):
    """z**e with principal argument, or with the supplied unreduced argument."""
    z = np.asarray(z, dtype=complex)
    theta = np.angle(z) if arg is None else np.asarray(arg, dtype=float)
    return np.exp(e * (np.log(np.abs(z)) + 1j * theta))


def aux_g(params: AuxParams, z, arg=None):
    """g at z (scalar, array or BranchPoint); arg overrides the principal argument."""
    _check_mu(params)
    if isinstance(z, BranchPoint):
        z, arg = z.value, z.arg
    e = complex(params.mu) - 0.5
    out = params.C_hat * np.exp(1j * np.asarray(z, dtype=complex)) + params.sigma_hat * _power(z, e, arg)
    return complex(out) if np.ndim(out) == 0 else out


def aux_g_prime(params: AuxParams, z, arg=None):
    _check_mu(params)
    if isinstance(z, BranchPoint):
        z, arg = z.value, z.arg
    zz = np.asarray(z, dtype=complex)
    e = complex(params.mu) - 0.5
    out = 1j * params.C_hat * np.exp(1j * zz) + e * params.sigma_hat * _power(zz, e - 1, arg)
    return complex(out) if np.ndim(out) == 0 else out


def aux_ghat(params: AuxParams, z):
    zz = np.asarray(z, dtype=complex)
    out = params.C_hat * np.exp(1j * zz) + params.D_hat * np.exp(-1j * zz) + params.sigma_hat
    return complex(out) if np.ndim(out) == 0 else out


def aux_ghat_prime(params: AuxParams, z):
    zz = np.asarray(z, dtype=complex)
    out = 1j * params.C_hat * np.exp(1j * zz) - 1j * params.D_hat * np.exp(-1j * zz)
    return complex(out) if np.ndim(out) == 0 else out


def g_to_wright(params: AuxParams) -> WrightTarget:
    """Target a with z = i zeta / (1/2 - mu) turning g = 0 into z e^z = a."""
    _check_mu(params)
    c = params.c
    ratio = -complex(params.sigma_hat) / complex(params.C_hat)
    a = (1j / c) * cmath.exp(cmath.log(ratio) / c)
    return WrightTarget.from_complex(a)


def wright_to_zeta(params: AuxParams, z: complex) -> complex:
    return params.c * complex(z) / 1j


# contours ---------------------------------------------------------------------

@dataclass(frozen=True)
class Segment:
    """Map t in [0, 1] to the plane; fn and dfn accept numpy arrays."""

    kind: str
    fn: Callable
    dfn: Callable

    def at(self, t):
        return self.fn(np.asarray(t, dtype=float))


@dataclass(frozen=True)
class Contour:
    segments: tuple
    samples_per_segment: int = 400
    orientation: str = "counterclockwise"
    meta: dict = field(default_factory=dict)

    def polyline(self, samples: int | None = None) -> np.ndarray:
        n = samples or self.samples_per_segment
        t = np.linspace(0.0, 1.0, n + 1)
        pts = [self.segments[0].at(t[:1])]
        for s in self.segments:
            pts.append(s.at(t[1:]))
        return np.concatenate(pts)

    def closure_defect(self) -> float:
        ends = [(s.at(0.0), s.at(1.0)) for s in self.segments]
        gaps = [abs(ends[i][1] - ends[(i + 1) % len(ends)][0]) for i in range(len(ends))]
        return float(max(gaps))

    def signed_area(self) -> float:
        p = self.polyline()
        return 0.5 * float(np.sum(p.real[:-1] * p.imag[1:] - p.real[1:] * p.imag[:-1]))

    def contains(self, z) -> bool:
        return point_in_polygon(self.polyline(), complex(z))

    def distance(self, z) -> float:
        p = self.polyline(4 * self.samples_per_segment)
        a, b = p[:-1], p[1:]
        d = b - a
        t = np.clip(np.real((complex(z) - a) * np.conj(d)) / np.maximum(np.abs(d) ** 2, 1e-300), 0, 1)
        return float(np.min(np.abs(a + t * d - complex(z))))


def point_in_polygon(poly: np.ndarray, z: complex) -> bool:
    """Even-odd rule on a closed polyline (first point repeated or not)."""
    x, y = z.real, z.imag
    px, py = poly.real, poly.imag
    inside = False
    n = len(poly)
    j = n - 1
    for i in range(n):
        if (py[i] > y) != (py[j] > y):
            xc = px[i] + (y - py[i]) * (px[j] - px[i]) / (py[j] - py[i])
            if x < xc:
                inside = not inside
        j = i
    return inside


def line(a: complex, b: complex) -> Segment:
    a, b = complex(a), complex(b)
    return Segment("line", lambda t: a + (b - a) * t, lambda t: (b - a) * np.ones_like(t, dtype=complex))


def _log_curve(bb: float, m: int, alpha: float, coef: float, r0: float, r1: float, rot: complex) -> Segment:
    # rot * b (d_r + i coef log r) for r from r0 to r1
    def fn(t):
        r = r0 + (r1 - r0) * t
        d = 2 * m * math.pi * r * r - alpha - math.pi
        return rot * bb * (d + 1j * coef * np.log(r))

    def dfn(t):
        r = r0 + (r1 - r0) * t
        return rot * bb * (4 * m * math.pi * r + 1j * coef / r) * (r1 - r0)

    return Segment("log-curve", fn, dfn)


def dominance_holds(params: AuxParams, m: int) -> bool:
    mu = complex(params.mu)
    lhs = (params.b * m * math.pi) ** abs(mu.real - 0.5) * abs(params.sigma_hat)
    return lhs > 2 * abs(params.C_hat) * math.exp(abs(mu.imag) * math.pi)


def smallest_admissible_m(params: AuxParams, limit: int = 10 ** 7) -> int | None:
    target = g_to_wright(params)
    m = 1
    while m <= limit:
        if subseq_hypothesis(target, m) and dominance_holds(params, m):
            return m
        m = m + 1 if m < 64 else int(m * 1.25)
    return None


def build_contour_omega_g(params: AuxParams, m: int, k: int, samples: int = 400) -> Contour:
    """Two log-curves between two vertical segments, rotated by e^{i(pi - phi)}."""
    _check_mu(params)
    if k < 2:
        raise HypothesisError("k must be at least 2")
    target = g_to_wright(params)
    if not (subseq_hypothesis(target, m) and dominance_holds(params, m)):
        raise HypothesisError(
            f"m={m} fails the subsequence hypothesis or the dominance condition",
            smallest_m=smallest_admissible_m(params))
    bb, alpha = params.b, target.alpha
    rot = cmath.exp(1j * (math.pi - params.phi))

    def d(r):
        return 2 * m * math.pi * r * r - alpha - math.pi

    k2 = 2 * k
    gamma2 = _log_curve(bb, m, alpha, -6.0, k, k2, rot)
    l2 = line(rot * bb * (d(k2) - 6j * math.log(k2)), rot * bb * (d(k2) - 2j * math.log(k2)))
    gamma1 = _log_curve(bb, m, alpha, -2.0, k2, k, rot)
    l1 = line(rot * bb * (d(k) - 2j * math.log(k)), rot * bb * (d(k) - 6j * math.log(k)))
    return Contour((gamma2, l2, gamma1, l1), samples, meta={"kind": "omega_g", "m": m, "k": k})


def enclosing_rectangles(params: AuxParams, m: int, k: int) -> list[list[complex]]:
    """Vertices of R_{k+j}, j = 0..k-1, rotated like the contour."""
    target = g_to_wright(params)
    bb, alpha = params.b, target.alpha
    rot = cmath.exp(1j * (math.pi - params.phi))
    out = []
    for j in range(k):
        r = k + j
        d0 = 2 * m * math.pi * r * r - alpha - math.pi
        d1 = 2 * m * math.pi * (r + 1) ** 2 - alpha - math.pi
        lo, hi = -5 * math.log(r), -2 * math.log(r) - 2
        out.append([rot * bb * complex(u, v) for u, v in ((d0, lo), (d1, lo), (d1, hi), (d0, hi))])
    return out


@dataclass(frozen=True)
class GhatZeroData:
    Delta_plus_inv: complex | None
    Delta_minus_inv: complex | None
    Delta_zero_inv: complex | None
    theta_plus: float | None
    theta_minus: float | None
    theta_zero: float | None
    d: float

    @property
    def equal_moduli(self) -> bool:
        if self.Delta_zero_inv is not None:
            return False
        return math.isclose(abs(self.Delta_plus_inv), abs(self.Delta_minus_inv), rel_tol=1e-12)


def _phase(z: complex) -> float:
    ph = cmath.phase(z)
    return math.pi if ph == -math.pi else ph


def ghat_data(params: AuxParams) -> GhatZeroData:
    C, D, s = complex(params.C_hat), complex(params.D_hat), complex(params.sigma_hat)
    if D == 0:
        if s == 0:
            raise DegenerateQuadratic("sigma_hat = D_hat = 0 leaves no zeros")
        x0 = -s / C
        return GhatZeroData(None, None, x0, None, None, _phase(x0), 1.0)
    root = cmath.sqrt(s * s - 4 * C * D)
    xp, xm = (-s + root) / (2 * C), (-s - root) / (2 * C)
    if xp == 0 or xm == 0:
        raise DegenerateQuadratic("quadratic has a zero root")
    # zeros sit at Im zeta = log|Delta| = -log|Delta^{-1}|
    lp, lm = -math.log(abs(xp)), -math.log(abs(xm))
    d = abs(lp - lm) if not math.isclose(abs(xp), abs(xm), rel_tol=1e-12) else 1.0
    return GhatZeroData(xp, xm, None, _phase(xp), _phase(xm), None, d)


def ghat_zeros(params: AuxParams, k_range) -> tuple[list[tuple[str, int, complex]], GhatZeroData]:
    """Closed-form zeros ("+", k, zeta), ("-", k, zeta) or ("0", k, zeta)."""
    data = ghat_data(params)
    out = []
    ks = list(k_range)
    if data.Delta_zero_inv is not None:
        lines = [("0", data.Delta_zero_inv, data.theta_zero)]
    else:
        lines = [("+", data.Delta_plus_inv, data.theta_plus), ("-", data.Delta_minus_inv, data.theta_minus)]
    for label, x, th in lines:
        im = -math.log(abs(x))
        for k in ks:
            out.append((label, k, complex(2 * k * math.pi + th, im)))
    return out, data


def build_contour_omega_ghat(params: AuxParams, k: int, modified: bool = False,
                             samples: int = 400, _shift: float = 0.0) -> Contour:
    data = ghat_data(params)
    if data.Delta_zero_inv is not None:
        th, level = data.theta_zero, -math.log(abs(data.Delta_zero_inv))
        if modified:
            raise ParamError("the modified contour needs two zero lines")
        x0, x1 = (2 * k - 1) * math.pi, (4 * k + 1) * math.pi
    else:
        th, level = data.theta_plus, -math.log(abs(data.Delta_plus_inv))
        if data.equal_moduli and data.theta_plus != data.theta_minus and not modified:
            raise ParamError("equal moduli with distinct angles need the modified contour")
        if modified:
            half = (data.theta_plus - data.theta_minus) / 2
            x0, x1 = 2 * k * math.pi - half, 4 * k * math.pi - half
        else:
            x0, x1 = (2 * k - 1) * math.pi, (4 * k + 1) * math.pi
    h = data.d / 2 * (1 + _shift)
    sw = complex(x0 + th, level - h)
    se = complex(x1 + th, level - h)
    ne = complex(x1 + th, level + h)
    nw = complex(x0 + th, level + h)
    contour = Contour((line(sw, se), line(se, ne), line(ne, nw), line(nw, sw)), samples,
                      meta={"kind": "omega_ghat", "k": k, "modified": modified})
    zeros, _ = ghat_zeros(params, range(k - 2, 2 * k + 3))
    for _, _, zz in zeros:
        if _rect_distance(zz, sw, ne) < ZERO_DISTANCE:
            raise ZeroOnContour(f"closed-form zero {zz} lies on the contour")
    return contour


def _rect_distance(z: complex, sw: complex, ne: complex) -> float:
    x, y = z.real, z.imag
    inside_x = sw.real <= x <= ne.real
    inside_y = sw.imag <= y <= ne.imag
    dx = min(abs(x - sw.real), abs(x - ne.real))
    dy = min(abs(y - sw.imag), abs(y - ne.imag))
    if inside_x and inside_y:
        return min(dx, dy)
    if inside_x:
        return dy
    if inside_y:
        return dx
    return math.hypot(dx, dy)


def ghat_zeros_inside(params: AuxParams, contour: Contour, k: int) -> list[tuple[str, int, complex]]:
    zeros, _ = ghat_zeros(params, range(k - 2, 2 * k + 3))
    poly = contour.polyline()
    return [z for z in zeros if point_in_polygon(poly, z[2])]


# argument principle -----------------------------------------------------------

@dataclass(frozen=True)
class CountResult:
    winding: int
    raw_winding: float
    min_abs_on_contour: float
    samples: int


def _vec(f):
    def call(z):
        z = np.asarray(z, dtype=complex)
        try:
            out = np.asarray(f(z), dtype=complex)
            if out.shape == z.shape:
                return out
        except (TypeError, ValueError):
            pass
        return np.array([complex(f(complex(v))) for v in z.ravel()]).reshape(z.shape)
    return call


class _Budget:
    def __init__(self):
        self.used = 0

    def spend(self, n: int):
        self.used += n
        if self.used > MAX_SAMPLES:
            raise QuadratureError(f"refinement exceeded {MAX_SAMPLES} samples")


def _panel(fv, dfv, seg: Segment, a: float, b: float):
    t = a + (b - a) * _GL_X
    z = seg.fn(t)
    fz = fv(z)
    dz = dfv(z)
    integrand = dz / fz * seg.dfn(t)
    return complex(np.sum(_GL_W * integrand) * (b - a)), fz, dz


def _check_zero(fz, dz, where):
    dist = np.abs(fz) / np.maximum(np.abs(dz), 1e-300)
    if np.any(fz == 0) or np.min(dist) < ZERO_DISTANCE:
        raise ZeroOnContour(f"zero within {ZERO_DISTANCE} of the contour near {where}")


def _quad_segment(fv, dfv, seg: Segment, budget: _Budget, start_panels: int):
    total = 0j
    min_abs = math.inf
    stack = [(i / start_panels, (i + 1) / start_panels) for i in reversed(range(start_panels))]
    ends = {}

    def fend(t):
        if t not in ends:
            ends[t] = complex(fv(seg.fn(np.array([t])))[0])
            if ends[t] == 0:
                raise ZeroOnContour(f"f vanishes at the contour point {seg.fn(np.array([t]))[0]}")
        return ends[t]

    while stack:
        a, b = stack.pop()
        whole, fz, dz = _panel(fv, dfv, seg, a, b)
        mid = 0.5 * (a + b)
        left, fl, dl = _panel(fv, dfv, seg, a, mid)
        right, fr, dr = _panel(fv, dfv, seg, mid, b)
        budget.spend(48)
        _check_zero(fz, dz, seg.fn(np.array([mid]))[0])
        min_abs = min(min_abs, float(np.min(np.abs(fz))), float(np.min(np.abs(fl))), float(np.min(np.abs(fr))))
        halves = left + right
        ratio = fend(b) / fend(a)
        consistent = abs(cmath.exp(halves) - ratio) <= 1e-8 * abs(ratio)
        if abs(halves - whole) <= 1e-10 * max(1.0, abs(halves)) and consistent and abs(halves.imag) < 3.0:
            total += halves
        else:
            if b - a < 1e-12:
                raise QuadratureError("panel refinement underflow")
            stack.append((mid, b))
            stack.append((a, mid))
    return total, min_abs


def _phase_segment(fv, seg: Segment, budget: _Budget, start: int):
    """Sum of principal arg increments, bisecting until each is below 0.5 rad
    and stable under one further bisection."""
    t = np.linspace(0.0, 1.0, start + 1)
    z = seg.fn(t)
    fz = fv(z)
    budget.spend(len(t))
    total = 0.0
    min_abs = float(np.min(np.abs(fz)))
    stack = [(t[i], t[i + 1], fz[i], fz[i + 1]) for i in reversed(range(start))]
    while stack:
        a, b, fa, fb = stack.pop()
        if fa == 0 or fb == 0:
            raise ZeroOnContour("f vanishes at a contour sample")
        step = cmath.phase(fb / fa)
        mid = 0.5 * (a + b)
        fm = complex(fv(seg.fn(np.array([mid])))[0])
        budget.spend(1)
        min_abs = min(min_abs, abs(fm))
        if fm == 0:
            raise ZeroOnContour("f vanishes at a contour sample")
        split = cmath.phase(fm / fa) + cmath.phase(fb / fm)
        za, zb = seg.fn(np.array([a, b]))
        df = abs(fb - fa) / max(abs(zb - za), 1e-300)
        if df > 0 and min(abs(fa), abs(fb)) / df < ZERO_DISTANCE and abs(zb - za) < 1e-6:
            raise ZeroOnContour(f"zero within {ZERO_DISTANCE} of the contour near {za}")
        if abs(step) <= 0.5 and abs(split - step) <= 1e-9:
            total += step
        else:
            if b - a < 1e-13:
                raise ZeroOnContour(f"argument jumps at {za}; zero on the contour")
            stack.append((mid, b, fm, fb))
            stack.append((a, mid, fa, fm))
    return total, min_abs


def count_zeros(f, contour: Contour, df=None, start_panels: int = 8) -> CountResult:
    """Zeros of f inside the contour, counted with multiplicity.

    With df: adaptive 16-point Gauss-Legendre on f'/f.  Without df: adaptive
    tracking of the continuous argument of f.
    """
    fv = _vec(f)
    budget = _Budget()
    total = 0j
    min_abs = math.inf
    for seg in contour.segments:
        if df is not None:
            part, mabs = _quad_segment(fv, _vec(df), seg, budget, start_panels)
            total += part
        else:
            part, mabs = _phase_segment(fv, seg, budget, max(start_panels, 16))
            total += 1j * part
        min_abs = min(min_abs, mabs)
    raw = (total / (2j * math.pi)).real
    winding = round(raw)
    if abs(raw - winding) > WINDING_TOL:
        raise QuadratureError(f"winding {raw} is not an integer to {WINDING_TOL}")
    return CountResult(int(winding), float(raw), float(min_abs), budget.used)


def count_zeros_retry(f, build: Callable[[float], Contour], df=None) -> CountResult:
    """count_zeros on build(0); after ZeroOnContour, once more on build(+-1%)."""
    try:
        return count_zeros(f, build(0.0), df)
    except ZeroOnContour:
        try:
            return count_zeros(f, build(0.01), df)
        except ZeroOnContour:
            return count_zeros(f, build(-0.01), df)


def rouche_margin(f, g, contour: Contour, samples: int | None = None) -> float:
    """min over the contour of |g| - |f - g|, refined around the minimiser."""
    fv, gv = _vec(f), _vec(g)
    n = samples or 4 * contour.samples_per_segment
    best = math.inf
    for seg in contour.segments:
        t = np.linspace(0.0, 1.0, n + 1)
        for _ in range(3):
            z = seg.fn(t)
            gz = gv(z)
            vals = np.abs(gz) - np.abs(fv(z) - gz)
            i = int(np.argmin(vals))
            best = min(best, float(vals[i]))
            lo, hi = t[max(i - 1, 0)], t[min(i + 1, len(t) - 1)]
            t = np.linspace(lo, hi, 65)
    return best
