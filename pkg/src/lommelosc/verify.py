"""Solutions of f'' + 2N f' + [L^2 M^2 e^{2Mz} + (N^2 - nu^2 M^2)] f = sum_j sigma_j L^{mu_j+1} M^2 e^{[M(mu_j+1) - N] z},
their residuals, the finite/infinite zero-exponent verdict, and zero censuses.

Solutions are e^{-Nz} [A J_nu + B Y_nu + sum_j sigma_j S_{mu_j,nu}](L e^{Mz}) with
zeta = L e^{Mz} carried as a point with argument arg L + Im(Mz).
"""
from __future__ import annotations

import cmath
import math
from dataclasses import dataclass, field
from fractions import Fraction

import numpy as np

from . import bessel
from .branch import BranchPoint
from .census import Contour, count_zeros, line
from .errors import DerivativeError, ParamError, ZeroOnContour
from .lommel import (
    DegeneracyClass, LommelParams, classify_degeneracy, degenerate_residual_coeffs,
    lommel_continued_result, lommel_S,
)

FD_STEP = 1e-3
MAX_CENSUS_RADIUS = 8.0


@dataclass(frozen=True)
class OdeParams:
    L: object
    M: object
    N: object
    nu: object
    terms: tuple

    def __post_init__(self):
        if complex(self.L) == 0 or complex(self.M) == 0:
            raise ParamError("L and M must be non-zero")
        terms = tuple((s, m) for s, m in self.terms)
        object.__setattr__(self, "terms", terms)
        if not terms or all(complex(s) == 0 for s, _ in terms):
            raise ParamError("at least one sigma_j must be non-zero")
        re = [complex(m).real for _, m in terms]
        if len(set(re)) != len(re):
            raise ParamError("Re(mu_j) must be pairwise distinct")

    @property
    def K(self):
        """nu^2 M^2 - N^2, the constant of the reduced equation f'' + (e^z - K) f = ..."""
        return self.nu * self.nu * self.M * self.M - self.N * self.N


@dataclass(frozen=True)
class SolutionSpec:
    A: object
    B: object
    params: OdeParams

    @property
    def hankel_coefficients(self) -> tuple[complex, complex]:
        """(C, D) with A J + B Y = C H1 + D H2."""
        a, b = complex(self.A), complex(self.B)
        return (a - 1j * b) / 2, (a + 1j * b) / 2

    @classmethod
    def from_hankel(cls, C, D, params: OdeParams) -> "SolutionSpec":
        c, d = complex(C), complex(D)
        return cls(c + d, 1j * (c - d), params)


@dataclass(frozen=True)
class QuantizationVerdict:
    finite_lambda_predicted: bool
    per_term: tuple
    required: bool

    def to_dict(self) -> dict:
        return {
            "finite_lambda_predicted": self.finite_lambda_predicted,
            "required_A_B_zero": self.required,
            "per_term": [_class_dict(c) for c in self.per_term],
        }


def _class_dict(c: DegeneracyClass) -> dict:
    out = {"tag": c.tag}
    for k in ("p", "p_plus", "p_minus", "case", "n"):
        v = getattr(c, k)
        if v is not None:
            out[k] = v
    if c.nu_eff is not None:
        out["nu_eff"] = [c.nu_eff.real, c.nu_eff.imag]
    return out


@dataclass(frozen=True)
class CensusCurve:
    points: tuple
    lambda_estimate: float
    infinite_flag: bool
    region: str = "square |Re z| <= r, |Im z| <= r"

    def __post_init__(self):
        counts = [c for _, c in self.points]
        if any(b < a for a, b in zip(counts, counts[1:])):
            raise ValueError("census counts must be non-decreasing")

    def to_dict(self) -> dict:
        return {"region": self.region, "points": [[r, c] for r, c in self.points],
                "lambda_estimate": "inf" if self.infinite_flag else self.lambda_estimate,
                "infinite_flag": self.infinite_flag}


# assembly -----------------------------------------------------------------------

def zeta_point(params: OdeParams, z) -> BranchPoint:
    L, M = complex(params.L), complex(params.M)
    mz = M * complex(z)
    return BranchPoint(abs(L) * math.exp(mz.real), cmath.phase(L) + mz.imag)


def _bessel_pair(nu: complex, zb: BranchPoint, route: str):
    if route == "half":
        j, y, _, _ = bessel.bessel_all(nu, zb)
        return j, y
    # base with arg in (-pi, pi], then the J/Y continuation with k = arg shift / pi
    w, m = zb.split(half=False)
    j0, y0, _, _ = bessel.bessel_all(nu, w)
    core = bessel._Core(j0, y0, 0j, 0j, 0.0, "series", None)
    return bessel._continue_jy(nu, core, -m)


def _lommel_value(mu, nu, zb: BranchPoint, route: str) -> complex:
    prm = LommelParams(mu, nu)
    if route == "half" or zb.is_principal:
        return lommel_S(prm, zb).value
    w, m = zb.split(half=False)
    if not w.is_principal:
        # arg w = pi sits on the cut; one half-turn lands on the positive axis
        w, m = w.rotate(-1), m - 1
    return lommel_continued_result(prm, w, m).value


def assemble_solution(spec: SolutionSpec, z, route: str = "half") -> complex:
    """f(z); route picks how the sheet of zeta is reached ("half" or "full" split)."""
    prm = spec.params
    z = complex(z)
    zb = zeta_point(prm, z)
    nu = complex(prm.nu)
    total = 0j
    a, b = complex(spec.A), complex(spec.B)
    if a != 0 or b != 0:
        j, y = _bessel_pair(nu, zb, route)
        total += a * j + b * y
    for sigma, mu in prm.terms:
        if complex(sigma) != 0:
            total += complex(sigma) * _lommel_value(mu, nu, zb, route)
    return cmath.exp(-complex(prm.N) * z) * total


# residuals ----------------------------------------------------------------------

_D1 = ((1, 3 / 4), (2, -3 / 20), (3, 1 / 60))
_D2 = ((0, -49 / 18), (1, 3 / 2), (2, -3 / 20), (3, 1 / 90))


def central_derivs(f, z: complex, h: float) -> tuple[complex, complex, complex]:
    """(f, f', f'') by sixth-order central differences along the real direction."""
    vals = {k: f(z + k * h) for k in range(-3, 4)}
    d1 = sum(c * (vals[k] - vals[-k]) for k, c in _D1) / h
    d2 = (_D2[0][1] * vals[0] + sum(c * (vals[k] + vals[-k]) for k, c in _D2[1:])) / (h * h)
    return vals[0], d1, d2


def ode_residual_zeta(params: OdeParams, y, zeta, h: float | None = None) -> complex:
    """zeta^2 y'' + zeta y' + (zeta^2 - nu^2) y - sum_j sigma_j zeta^{mu_j+1}.

    y(zeta) may return a value or a tuple (y, y', y''); plain values are
    differentiated with sixth-order central differences.
    """
    zb = BranchPoint.coerce(zeta)
    if zb.modulus == 0:
        raise ParamError("zeta must be non-zero")
    zv = zb.value
    out = y(zb)
    if isinstance(out, tuple):
        if len(out) != 3:
            raise DerivativeError("y must return (y, y', y'') or a value")
        v, d1, d2 = out
    else:
        step = h if h is not None else 1e-3 * max(1.0, zb.modulus)

        def shifted(x):
            return y(BranchPoint(abs(x), zb.arg + cmath.phase(x / zv)))

        v, d1, d2 = central_derivs(shifted, zv, step)
    nu = complex(params.nu)
    rhs = sum(complex(s) * zb.power(complex(m) + 1) for s, m in params.terms)
    return zv * zv * d2 + zv * d1 + (zv * zv - nu * nu) * v - rhs


def ode_rhs_z(params: OdeParams, z: complex) -> complex:
    L, M, N = complex(params.L), complex(params.M), complex(params.N)
    lb = BranchPoint.from_complex(L)
    return sum(complex(s) * lb.power(complex(m) + 1) * M * M * cmath.exp((M * (complex(m) + 1) - N) * z)
               for s, m in params.terms)


def ode_residual_terms(spec: SolutionSpec, z, h: float | None = None) -> tuple[complex, float]:
    """(residual, term scale) of the z-equation; the scale is the summed modulus
    of f'', 2N f', the coefficient times f and the right-hand side."""
    prm = spec.params
    z = complex(z)
    step = h if h is not None else FD_STEP * max(1.0, abs(z))
    if not 1e-6 <= step <= 1e-3 * max(1.0, abs(z)):
        raise ValueError("h must lie in [1e-6, 1e-3 max(1, |z|)]")
    L, M, N, nu = (complex(prm.L), complex(prm.M), complex(prm.N), complex(prm.nu))
    f0, d1, d2 = central_derivs(lambda x: assemble_solution(spec, x), z, step)
    coef = L * L * M * M * cmath.exp(2 * M * z) + (N * N - nu * nu * M * M)
    rhs = ode_rhs_z(prm, z)
    res = d2 + 2 * N * d1 + coef * f0 - rhs
    return res, abs(d2) + abs(2 * N * d1) + abs(coef * f0) + abs(rhs)


def ode_residual_z(spec: SolutionSpec, z, h: float | None = None) -> complex:
    """Residual of the z-equation with sixth-order central differences of f."""
    return ode_residual_terms(spec, z, h)[0]


def relative_residual_z(spec: SolutionSpec, z, h: float | None = None) -> float:
    res, scale = ode_residual_terms(spec, z, h)
    return abs(res) / scale if scale > 0 else abs(res)


def degenerate_symbolic_residual(mu, nu) -> list:
    """Exact residual coefficients of the degenerate polynomial (all zero when correct)."""
    return degenerate_residual_coeffs(LommelParams(mu, nu))


# quantization ---------------------------------------------------------------------

def quantization_classify(spec: SolutionSpec) -> QuantizationVerdict:
    prm = spec.params
    per = tuple(classify_degeneracy(LommelParams(m, prm.nu)) for _, m in prm.terms)
    ab_zero = complex(spec.A) == 0 and complex(spec.B) == 0
    active = [c for (s, _), c in zip(prm.terms, per) if complex(s) != 0]
    finite = ab_zero and all(c.is_degenerate for c in active)
    return QuantizationVerdict(finite, per, ab_zero)


# census ------------------------------------------------------------------------------

def square_contour(r: float, center: complex = 0j) -> Contour:
    c = complex(center)
    sw, se, ne, nw = c + complex(-r, -r), c + complex(r, -r), c + complex(r, r), c + complex(-r, r)
    return Contour((line(sw, se), line(se, ne), line(ne, nw), line(nw, sw)), 200,
                   meta={"kind": "square", "r": r})


def count_in_square(f, r: float) -> int:
    """Zeros of f in the square of half-side r; retries at r(1 +- 1%) on a grazing zero."""
    def fv(z):
        z = np.asarray(z, dtype=complex)
        return np.array([complex(f(complex(v))) for v in z.ravel()]).reshape(z.shape)

    for rr in (r, 1.01 * r, 0.99 * r):
        try:
            return count_zeros(fv, square_contour(rr)).winding
        except ZeroOnContour:
            continue
    raise ZeroOnContour(f"zeros on the square contour at r={r} and both perturbations")


def _lambda_from(points) -> tuple[float, bool]:
    rs = [r for r, _ in points]
    cs = [c for _, c in points]
    tail = list(zip(rs, cs))[-3:]
    if len(tail) >= 3 and all(b[1] > 2 * a[1] > 0 for a, b in zip(tail, tail[1:])):
        return math.inf, True
    if tail[-1][1] == 0 or len(tail) < 2:
        return 0.0, False
    xs = np.log([r for r, c in tail if c > 0])
    ys = np.log([c for r, c in tail if c > 0])
    if len(xs) < 2:
        return 0.0, False
    return float(np.polyfit(xs, ys, 1)[0]), False


def zero_census(spec: SolutionSpec, r_list) -> CensusCurve:
    rs = [float(r) for r in r_list]
    if any(b <= a for a, b in zip(rs, rs[1:])):
        raise ValueError("r_list must be strictly ascending")
    if rs and (rs[0] <= 0 or rs[-1] > MAX_CENSUS_RADIUS):
        raise ValueError(f"radii must lie in (0, {MAX_CENSUS_RADIUS}]")

    def f(z):
        return assemble_solution(spec, z)

    points = tuple((r, count_in_square(f, r)) for r in rs)
    lam, inf = _lambda_from(points)
    return CensusCurve(points, lam, inf)


# Table 1 -------------------------------------------------------------------------

# the zero sets repeat every 2 pi i in z; for p <= 5 the last two radii share a
# plateau between the principal preimages and their first periodic copies
TABLE1_RADII = (2.0, 3.0, 4.0, 5.0, 6.0)
TABLE1_MU = {1: Fraction(1), 2: Fraction(0), 3: Fraction(-1)}


def table1_parameters(case: int, p: int) -> tuple[Fraction, Fraction, Fraction]:
    """(mu, nu, K) for a row; nu is chosen so that mu + nu = 2p + 1."""
    if case not in (1, 2, 3, 4):
        raise ValueError("case must be 1, 2, 3 or 4")
    if not 0 <= p <= 5:
        raise ValueError("p must lie in 0..5")
    if case == 4:
        mu = nu = Fraction(2 * p + 1, 2)
    else:
        mu = TABLE1_MU[case]
        nu = 2 * p + 1 - mu
    K = {1: Fraction(p * p), 2: Fraction((2 * p + 1) ** 2, 4),
         3: Fraction((p + 1) ** 2), 4: Fraction((2 * p + 1) ** 2, 16)}[case]
    return mu, Fraction(nu), K


@dataclass(frozen=True)
class Table1Report:
    case: int
    p: int
    K: Fraction
    spec: SolutionSpec
    residual_max: float
    census: CensusCurve
    grid: tuple = field(default=(), repr=False)

    def to_dict(self) -> dict:
        prm = self.spec.params
        mu = prm.terms[0][1]
        return {"case": self.case, "p": self.p, "K": str(self.K), "K_float": float(self.K),
                "mu": str(mu), "nu": str(prm.nu), "residual_max": self.residual_max,
                "census": self.census.to_dict()}


def table1_grid(n: int = 20) -> tuple[complex, ...]:
    """Fixed 20-point grid in |z| <= 2 (golden-angle spiral)."""
    golden = math.pi * (3 - math.sqrt(5))
    return tuple(cmath.rect(2 * math.sqrt((j + 0.5) / n), j * golden) for j in range(n))


def table1_case(case: int, p: int, sigma=1, radii=TABLE1_RADII) -> Table1Report:
    mu, nu, K = table1_parameters(case, p)
    prm = OdeParams(2, Fraction(1, 2), 0, nu, ((sigma, mu),))
    if prm.K != K:
        raise AssertionError("K from the parameters disagrees with the table value")
    spec = SolutionSpec(0, 0, prm)
    grid = table1_grid()
    worst = max(relative_residual_z(spec, z) for z in grid)
    return Table1Report(case, p, K, spec, worst, zero_census(spec, radii), grid)
