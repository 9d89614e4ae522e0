"""Zeros of z e^z = a away from the principal branch.

For a = A e^{i alpha} and |n| large the n-th zero is x + iy with

    H_n = 2|n|pi + sgn(n) alpha - pi/2,   beta_n = log(A / H_n),
    eta_n = sum_j (-1)^j Q_{2j+1}(beta_n) H_n^{-2j-1},
    x = (H_n + eta_n) tan(eta_n),          y = sgn(n) (H_n + eta_n).
"""
from __future__ import annotations

import cmath
import math
from dataclasses import dataclass

from .core import wright_q_poly
from .errors import BoxEscapeError, DivergenceError, HypothesisError, ValidityError

DEFAULT_J_MAX = 3
MAX_ITERATIONS = 50


@dataclass(frozen=True)
class WrightTarget:
    a: complex
    A: float
    alpha: float

    @classmethod
    def from_complex(cls, a) -> "WrightTarget":
        a = complex(a)
        if a == 0:
            raise ValueError("a must be non-zero")
        alpha = cmath.phase(a)
        if alpha == -math.pi:
            alpha = math.pi
        return cls(a, abs(a), alpha)

    def __post_init__(self):
        if not self.A > 0:
            raise ValueError("A = |a| must be positive")
        if not -math.pi < self.alpha <= math.pi:
            raise ValueError("alpha must lie in (-pi, pi]")


@dataclass(frozen=True)
class ZeroSeed:
    n: int
    H_n: float
    beta_n: float
    eta_n: float
    x: float
    y: float
    valid: bool
    j_max: int

    @property
    def z(self) -> complex:
        return complex(self.x, self.y)


@dataclass(frozen=True)
class Box:
    """Open axis-aligned rectangle x_lo < x < x_hi, y_lo < y < y_hi."""

    x_lo: float
    x_hi: float
    y_lo: float
    y_hi: float

    def contains(self, z) -> bool:
        z = complex(z)
        return self.x_lo < z.real < self.x_hi and self.y_lo < z.imag < self.y_hi


@dataclass(frozen=True)
class RefinedZero:
    seed: ZeroSeed
    z: complex
    residual: float
    iterations: int


def _as_target(target) -> WrightTarget:
    return target if isinstance(target, WrightTarget) else WrightTarget.from_complex(target)


def _sgn(n: int) -> int:
    return 1 if n > 0 else -1


def h_n(target: WrightTarget, n: int) -> float:
    return 2 * abs(n) * math.pi + _sgn(n) * target.alpha - math.pi / 2


def seed_is_valid(target, n: int) -> bool:
    """Both validity inequalities, evaluated as written."""
    t = _as_target(target)
    h = h_n(t, n)
    beta = math.log(t.A / h)
    la = math.log(t.A)
    first = 2 * h * abs(beta) < (h - 1) ** 2
    second = la * la < (h - math.pi / 2) ** 2 + 2 * (1 + la) * math.log(h) + 1
    return first and second


def wright_seed(target, n: int, j_max: int = DEFAULT_J_MAX) -> ZeroSeed:
    t = _as_target(target)
    if n == 0:
        raise ValueError("n must be non-zero")
    if j_max < 0:
        raise ValueError("j_max must be non-negative")
    h = h_n(t, n)
    beta = math.log(t.A / h)
    eta = 0.0
    for j in range(j_max + 1):
        q = wright_q_poly(2 * j + 1).evalf(beta).real
        eta += (-1) ** j * q * h ** (-2 * j - 1)
    x = (h + eta) * math.tan(eta)
    y = _sgn(n) * (h + eta)
    return ZeroSeed(n, h, beta, eta, x, y, seed_is_valid(t, n), j_max)


def wright_bounds(target, n: int) -> Box:
    t = _as_target(target)
    if n == 0:
        raise ValueError("n must be non-zero")
    if not seed_is_valid(t, n):
        raise ValidityError(f"validity inequalities fail for n={n}")
    an = abs(n)
    x_lo = 2 * math.log(t.A / ((2 * an + 1) * math.pi)) - 1
    x_hi = math.log(t.A / (2 * (an - 1) * math.pi)) + 1 if an > 1 else math.inf
    if n > 0:
        y_lo, y_hi = (2 * n - 1) * math.pi + t.alpha, 2 * n * math.pi + t.alpha
    else:
        y_lo, y_hi = 2 * n * math.pi + t.alpha, (2 * n + 1) * math.pi + t.alpha
    return Box(x_lo, x_hi, y_lo, y_hi)


def subseq_hypothesis(target, m: int) -> bool:
    t = _as_target(target)
    return math.log(t.A) - math.log(m * math.pi) + 1 < -3


def smallest_subseq_m(target) -> int:
    t = _as_target(target)
    # log A - log(m pi) + 1 < -3  <=>  m > A e^4 / pi
    m = max(1, math.floor(t.A * math.exp(4) / math.pi))
    while not subseq_hypothesis(t, m):
        m += 1
    return m


def d_r(target, m: int, r: float) -> float:
    t = _as_target(target)
    return 2 * m * math.pi * r * r - t.alpha - math.pi


def subseq_box(target, m: int, k: int) -> Box:
    """Rectangle that must hold the zero of index n_k = -m k^2."""
    t = _as_target(target)
    return Box(-5 * math.log(k), -2 * math.log(k) - 2, -d_r(t, m, k + 1), -d_r(t, m, k))


def wright_subseq_seed(target, m: int, k: int, j_max: int = DEFAULT_J_MAX) -> ZeroSeed:
    t = _as_target(target)
    if m < 1 or k < 1:
        raise ValueError("m and k must be positive")
    if not subseq_hypothesis(t, m):
        raise HypothesisError(
            f"log A - log(m pi) + 1 = {math.log(t.A) - math.log(m * math.pi) + 1:.4g} is not < -3",
            smallest_m=smallest_subseq_m(t))
    n = -m * k * k
    if not seed_is_valid(t, n):
        raise ValidityError(f"validity inequalities fail for n_k={n}")
    return wright_seed(t, n, j_max)


def _residual(z: complex, a: complex) -> float:
    return abs(z * cmath.exp(z) - a)


def wright_refine(target, seed: ZeroSeed, tol: float = 1e-12) -> RefinedZero:
    """Newton on F(z) = z e^z - a from the seed, halving steps that raise |F|."""
    t = _as_target(target)
    if not seed.valid:
        raise ValidityError(f"seed for n={seed.n} is not valid")
    if tol < 1e-14:
        raise ValueError("tol must be at least 1e-14")
    box = wright_bounds(t, seed.n)
    z = seed.z
    res = _residual(z, t.a)
    it = 0
    while res > tol:
        if it >= MAX_ITERATIONS:
            raise DivergenceError(f"no convergence after {MAX_ITERATIONS} iterations (|F| = {res:.3g})")
        it += 1
        step = (z - t.a * cmath.exp(-z)) / (1 + z)
        trial = z - step
        tres = _residual(trial, t.a)
        halvings = 0
        while tres > res and halvings < 30:
            step *= 0.5
            trial = z - step
            tres = _residual(trial, t.a)
            halvings += 1
        if not box.contains(trial):
            raise BoxEscapeError(f"iterate {trial} left the bound box for n={seed.n}")
        if trial == z:
            raise DivergenceError(f"stalled at |F| = {res:.3g} above tol {tol:.3g}")
        z, res = trial, tres
    return RefinedZero(seed, z, res, it)
