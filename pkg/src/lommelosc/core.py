"""Scalar primitives and exact polynomial recurrences.

Complex gamma (Lanczos with reflection), Pochhammer symbols, Hankel
coefficients, the Chebyshev ratio sin(m nu pi)/sin(nu pi), and the
polynomial families Q_m, (A_n, B_n, C_n), D_n^+- and the Lommel products c_k.
"""
from __future__ import annotations

import cmath
import math
from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache

from .errors import PoleError

POLE_TOL = 1e-12

_LANCZOS_G = 7
_LANCZOS = (
    0.99999999999980993,
    676.5203681218851,
    -1259.1392167224028,
    771.32342877765313,
    -176.61502916214059,
    12.507343278686905,
    -0.13857109526572012,
    9.9843695780195716e-6,
    1.5056327351493116e-7,
)
_HALF_LOG_2PI = 0.5 * math.log(2.0 * math.pi)
# B_{2k} / (2k (2k-1)) for the Stirling tail, k = 1..10
_STIRLING = tuple(
    float(Fraction(n, d) / ((2 * k) * (2 * k - 1)))
    for k, (n, d) in enumerate(
        [(1, 6), (-1, 30), (1, 42), (-1, 30), (5, 66), (-691, 2730), (7, 6),
         (-3617, 510), (43867, 798), (-174611, 330)], start=1)
)
_STIRLING_MIN = 8.0


class QQi:
    """Exact Gaussian rational re + i*im with Fraction parts."""

    __slots__ = ("re", "im")

    def __init__(self, re=0, im=0):
        if isinstance(re, QQi):
            re, im = re.re, re.im + Fraction(im)
        self.re = Fraction(re)
        self.im = Fraction(im)

    @staticmethod
    def _lift(x):
        if isinstance(x, QQi):
            return x
        if isinstance(x, complex):
            return QQi(Fraction(x.real), Fraction(x.imag))
        return QQi(x)

    def __add__(self, o):
        o = QQi._lift(o)
        return QQi(self.re + o.re, self.im + o.im)

    __radd__ = __add__

    def __sub__(self, o):
        o = QQi._lift(o)
        return QQi(self.re - o.re, self.im - o.im)

    def __rsub__(self, o):
        return QQi._lift(o) - self

    def __neg__(self):
        return QQi(-self.re, -self.im)

    def __mul__(self, o):
        o = QQi._lift(o)
        return QQi(self.re * o.re - self.im * o.im, self.re * o.im + self.im * o.re)

    __rmul__ = __mul__

    def __truediv__(self, o):
        o = QQi._lift(o)
        den = o.re * o.re + o.im * o.im
        if den == 0:
            raise ZeroDivisionError("QQi division by zero")
        return QQi((self.re * o.re + self.im * o.im) / den,
                   (self.im * o.re - self.re * o.im) / den)

    def __rtruediv__(self, o):
        return QQi._lift(o) / self

    def __pow__(self, k):
        if not isinstance(k, int) or k < 0:
            raise ValueError("QQi supports non-negative integer powers only")
        out = QQi(1)
        for _ in range(k):
            out = out * self
        return out

    def __eq__(self, o):
        try:
            o = QQi._lift(o)
        except (TypeError, ValueError):
            return NotImplemented
        return self.re == o.re and self.im == o.im

    def __hash__(self):
        return hash((self.re, self.im))

    def __complex__(self):
        return complex(float(self.re), float(self.im))

    def __repr__(self):
        return f"QQi({self.re}, {self.im})"


I = QQi(0, 1)


def _is_zero(c) -> bool:
    return c == 0


@dataclass(frozen=True)
class Poly:
    """Polynomial with coefficients indexed by power; trailing zeros trimmed."""

    coeffs: tuple = ()

    def __post_init__(self):
        cs = list(self.coeffs)
        while cs and _is_zero(cs[-1]):
            cs.pop()
        object.__setattr__(self, "coeffs", tuple(cs))

    @property
    def degree(self) -> int:
        """Degree; -1 for the zero polynomial."""
        return len(self.coeffs) - 1

    def __call__(self, x):
        acc = 0
        for c in reversed(self.coeffs):
            acc = acc * x + c
        return acc

    def evalf(self, x: complex) -> complex:
        acc = 0j
        for c in reversed(self.coeffs):
            acc = acc * x + complex(c)
        return acc

    def __add__(self, o):
        if not isinstance(o, Poly):
            o = Poly((o,))
        n = max(len(self.coeffs), len(o.coeffs))
        a = self.coeffs + (0,) * (n - len(self.coeffs))
        b = o.coeffs + (0,) * (n - len(o.coeffs))
        return Poly(tuple(x + y for x, y in zip(a, b)))

    __radd__ = __add__

    def __neg__(self):
        return Poly(tuple(-c for c in self.coeffs))

    def __sub__(self, o):
        return self + (-o if isinstance(o, Poly) else Poly((-o,)))

    def __mul__(self, o):
        if not isinstance(o, Poly):
            return Poly(tuple(c * o for c in self.coeffs))
        if not self.coeffs or not o.coeffs:
            return Poly(())
        out = [0] * (len(self.coeffs) + len(o.coeffs) - 1)
        for i, a in enumerate(self.coeffs):
            for j, b in enumerate(o.coeffs):
                out[i + j] = out[i + j] + a * b
        return Poly(tuple(out))

    __rmul__ = __mul__

    def shift(self, k: int) -> "Poly":
        """Multiply by x**k (k >= 0)."""
        if not self.coeffs:
            return self
        return Poly((0,) * k + self.coeffs)

    def derivative(self) -> "Poly":
        return Poly(tuple(i * c for i, c in enumerate(self.coeffs) if i > 0))

    def integral(self) -> "Poly":
        """Antiderivative vanishing at 0 (exact for Fraction coefficients)."""
        return Poly((0,) + tuple(Fraction(1, i + 1) * c for i, c in enumerate(self.coeffs)))

    def odd_part(self) -> "Poly":
        return Poly(tuple(c if i % 2 else 0 for i, c in enumerate(self.coeffs)))


# scalar functions ----------------------------------------------------------

def _sinpi_real(x: float) -> float:
    r = x - 2.0 * round(x / 2.0)  # exact reduction to [-1, 1]
    if r > 0.5:
        r = 1.0 - r
    elif r < -0.5:
        r = -1.0 - r
    return math.sin(math.pi * r)


def _cospi_real(x: float) -> float:
    return _sinpi_real(x + 0.5) if abs(x) < 2**52 else math.cos(math.pi * x)


def sinpi(z: complex) -> complex:
    """sin(pi z) with exact period reduction of the real part."""
    z = complex(z)
    y = math.pi * z.imag
    return complex(_sinpi_real(z.real) * math.cosh(y), _cospi_real(z.real) * math.sinh(y))


def cospi(z: complex) -> complex:
    """cos(pi z) with exact period reduction of the real part."""
    z = complex(z)
    y = math.pi * z.imag
    return complex(_cospi_real(z.real) * math.cosh(y), -_sinpi_real(z.real) * math.sinh(y))


def expipi(z: complex) -> complex:
    """exp(i pi z) with exact reduction of the real part."""
    z = complex(z)
    return cmath.exp(-math.pi * z.imag) * complex(_cospi_real(z.real), _sinpi_real(z.real))


def nearest_nonpositive_int(z: complex) -> int | None:
    """Return the non-positive integer within POLE_TOL of z, else None."""
    z = complex(z)
    n = round(z.real)
    if n <= 0 and abs(z - n) < POLE_TOL:
        return int(n)
    return None


def _loggamma_lanczos(z: complex) -> complex:
    # valid for Re z >= 0.5
    z = z - 1.0
    x = _LANCZOS[0]
    for i in range(1, len(_LANCZOS)):
        x = x + _LANCZOS[i] / (z + i)
    t = z + _LANCZOS_G + 0.5
    return _HALF_LOG_2PI + (z + 0.5) * cmath.log(t) - t + cmath.log(x)


def _loggamma_stirling(z: complex) -> complex:
    # valid for |z| >= 8, Re z >= 0.5
    lg = (z - 0.5) * cmath.log(z) - z + _HALF_LOG_2PI
    w2 = 1.0 / (z * z)
    t = 1.0 / z
    for c in _STIRLING:
        lg += c * t
        t *= w2
    return lg


def gamma_complex(z) -> complex:
    """Gamma function of a complex argument.

    Lanczos (g=7, n=9) for |z| < 8, Stirling with ten terms beyond, and the
    reflection formula when Re z < 1/2.
    Raises PoleError within 1e-12 of a non-positive integer.
    """
    z = complex(z)
    if nearest_nonpositive_int(z) is not None:
        raise PoleError(f"gamma pole at z={z}")
    if z.imag == 0.0 and z.real == round(z.real) and 1 <= z.real <= 171:
        return complex(math.factorial(int(z.real) - 1))
    if z.real < 0.5:
        return math.pi / (sinpi(z) * gamma_complex(1.0 - z))
    if abs(z) >= _STIRLING_MIN:
        return cmath.exp(_loggamma_stirling(z))
    return cmath.exp(_loggamma_lanczos(z))


def rgamma(z) -> complex:
    """Reciprocal gamma; exactly zero at the poles of gamma."""
    z = complex(z)
    if nearest_nonpositive_int(z) is not None:
        return 0j
    return 1.0 / gamma_complex(z)


def pochhammer(x, k: int):
    """Rising factorial x(x+1)...(x+k-1); exact for exact inputs."""
    if k < 0:
        raise ValueError("k must be non-negative")
    out = 1
    for j in range(k):
        out = out * (x + j)
    return out


def hankel_coefficient(nu, k: int):
    """(nu, k) = (-1)^k (1/2-nu)_k (1/2+nu)_k / k!."""
    if k < 0:
        raise ValueError("k must be non-negative")
    half = Fraction(1, 2) if isinstance(nu, (int, Fraction, QQi)) else 0.5
    val = pochhammer(half - nu, k) * pochhammer(half + nu, k)
    sign = -1 if k % 2 else 1
    return val * sign / math.factorial(k)


def chebyshev_u(m: int, nu) -> complex:
    """sin(m nu pi)/sin(nu pi) through u_{j+1} = 2 cos(nu pi) u_j - u_{j-1}.

    u_0 = 0, u_1 = 1, u_{-m} = -u_m.  Integer nu gives the limiting value.
    """
    if m < 0:
        return -chebyshev_u(-m, nu)
    if m == 0:
        return 0j
    c2 = 2.0 * cospi(nu)
    prev, cur = 0j, 1 + 0j
    for _ in range(m - 1):
        prev, cur = cur, c2 * cur - prev
    return cur


@lru_cache(maxsize=None)
def wright_q_poly(m: int) -> Poly:
    """Q_1 = t, Q_{m+1} = Q_m + m * int_0^t Q_m, exact rational coefficients."""
    if m < 1:
        raise ValueError("m must be >= 1")
    q = Poly((Fraction(0), Fraction(1)))
    for j in range(1, m):
        q = q + q.integral() * j
    return q


@lru_cache(maxsize=None)
def abc_polys(n: int) -> tuple[Poly, Poly, Poly]:
    """(A_n, B_n, C_n) from A_1 = B_1 = 0, C_1 = 1 and the three-term recurrence."""
    if n < 1:
        raise ValueError("n must be >= 1")
    zeta = Poly((0, 1))
    a, b, c = Poly(()), Poly(()), Poly((1,))
    for j in range(2, n + 1):
        f = -2 * (j - 1)
        a, b, c = (
            a * f + zeta * a.derivative() + c,
            b * f + zeta * b.derivative() - c.shift(2),
            c * f + b + zeta * c.derivative(),
        )
    return a, b, c


@lru_cache(maxsize=None)
def d_polys(n: int) -> tuple[Poly, Poly]:
    """D_n^+- = B_n +- i zeta C_n with exact Gaussian-rational coefficients."""
    _, b, c = abc_polys(n)
    bq = Poly(tuple(QQi(x) for x in b.coeffs))
    izc = Poly(tuple(QQi(x) * I for x in c.coeffs)).shift(1)
    return bq + izc, bq - izc


def lommel_ck(mu, nu, k: int):
    """c_k = prod_{m=1}^k [(mu - 2m + 1)^2 - nu^2]; exact for exact inputs."""
    if k < 0:
        raise ValueError("k must be non-negative")
    out = 1
    for m in range(1, k + 1):
        t = mu - 2 * m + 1
        out = out * (t * t - nu * nu)
    return out
