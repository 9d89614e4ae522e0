"""Points on the logarithmic Riemann surface and evaluation records."""
from __future__ import annotations

import cmath
import math
from dataclasses import dataclass

TWO_PI = 2.0 * math.pi


@dataclass(frozen=True)
class BranchPoint:
    """modulus * exp(i * arg) with the argument kept unreduced.

    modulus = 0 is tolerated only so that limits at the origin can be
    requested; log and power raise for it.
    """

    modulus: float
    arg: float

    def __post_init__(self):
        if not (math.isfinite(self.modulus) and math.isfinite(self.arg)):
            raise ValueError("BranchPoint components must be finite")
        if self.modulus < 0:
            raise ValueError("modulus must be non-negative")

    @classmethod
    def from_complex(cls, z, sheet: int = 0) -> "BranchPoint":
        """Principal representative of z, moved `sheet` full turns."""
        z = complex(z)
        return cls(abs(z), cmath.phase(z) + TWO_PI * sheet)

    @classmethod
    def coerce(cls, z) -> "BranchPoint":
        return z if isinstance(z, BranchPoint) else cls.from_complex(z)

    @property
    def value(self) -> complex:
        return cmath.rect(self.modulus, self.arg)

    @property
    def is_principal(self) -> bool:
        return -math.pi < self.arg < math.pi

    def log(self) -> complex:
        if self.modulus == 0:
            raise ValueError("log of zero")
        return complex(math.log(self.modulus), self.arg)

    def power(self, a) -> complex:
        """z**a on this sheet, exp(a (log|z| + i arg)); integer a is sheet-free."""
        a = complex(a)
        if a.imag == 0 and a.real.is_integer() and abs(a.real) <= 64 and self.modulus > 0:
            return self.value ** int(a.real)
        return cmath.exp(a * self.log())

    def rotate(self, k: int) -> "BranchPoint":
        """The point z * exp(k pi i)."""
        return BranchPoint(self.modulus, self.arg + k * math.pi)

    def scale(self, c: float) -> "BranchPoint":
        return BranchPoint(self.modulus * c, self.arg)

    def split(self, half: bool = True) -> tuple["BranchPoint", int]:
        """Return (w, m) with self = w * exp(-m pi i).

        half=True puts arg w in (-pi/2, pi/2]; otherwise in (-pi, pi] with m even.
        """
        if half:
            m = -math.ceil(self.arg / math.pi - 0.5)
        else:
            m = -2 * math.ceil(self.arg / TWO_PI - 0.5)
        return BranchPoint(self.modulus, self.arg + m * math.pi), m


@dataclass(frozen=True)
class EvalResult:
    """Value, absolute error estimate and provenance of an evaluation.

    method is one of "series", "asymptotic", "continuation", "polynomial",
    "ode"; order holds the truncation p or the branch shift m where relevant.
    """

    value: complex
    abs_err_est: float
    method: str
    order: int | None = None

    def __post_init__(self):
        v = complex(self.value)
        if not (math.isfinite(v.real) and math.isfinite(v.imag)):
            raise OverflowError(f"non-finite value from {self.method}")
        if not math.isfinite(self.abs_err_est) or self.abs_err_est < 0:
            raise OverflowError(f"invalid error estimate from {self.method}")

    @property
    def label(self) -> str:
        return self.method if self.order is None else f"{self.method}({self.order})"
