import cmath
import math
from fractions import Fraction

import mpmath
import pytest
import sympy as sp
from hypothesis import given, settings, strategies as st

from lommelosc.branch import BranchPoint, EvalResult
from lommelosc.core import (
    QQi, Poly, abc_polys, chebyshev_u, d_polys, gamma_complex, hankel_coefficient,
    lommel_ck, pochhammer, rgamma, wright_q_poly,
)
from lommelosc.errors import PoleError

finite = st.floats(-5, 5, allow_nan=False)


# gamma ---------------------------------------------------------------------------

@pytest.mark.parametrize("z,expected", [(1, 1), (0.5, math.sqrt(math.pi)), (4, 6)])
def test_gamma_known_values(z, expected):
    assert abs(gamma_complex(z) - expected) <= 1e-14 * abs(expected)


def test_gamma_pole():
    for n in (0, -1, -7):
        with pytest.raises(PoleError):
            gamma_complex(n + 1e-13)
    assert rgamma(-3) == 0


@settings(max_examples=200, deadline=None)
@given(st.floats(-40, 50), st.floats(-40, 40))
def test_gamma_against_mpmath(x, y):
    z = complex(x, y)
    if abs(z) > 50 or min(abs(z - n) for n in range(-45, 1)) < 1e-3:
        return
    ref = complex(mpmath.gamma(mpmath.mpc(x, y)))
    assert abs(gamma_complex(z) - ref) <= 1e-13 * abs(ref)


# pochhammer and Hankel coefficients ----------------------------------------------------

def test_pochhammer_examples():
    assert pochhammer(2.5 + 1j, 0) == 1
    assert pochhammer(1, 3) == 6
    assert pochhammer(0.5, 2) == 0.75


def test_hankel_coefficient_examples():
    assert hankel_coefficient(0.3, 0) == 1
    for k in range(1, 6):
        assert hankel_coefficient(0.5, k) == 0
    # (-1)^1 (1/2)_1 (1/2)_1 / 1! by hand
    assert hankel_coefficient(0, 1) == Fraction(-1, 4)


# Chebyshev U ---------------------------------------------------------------------------

def test_chebyshev_examples():
    assert chebyshev_u(0, 0.37) == 0
    assert chebyshev_u(1, 0.37) == 1
    assert abs(chebyshev_u(2, 1 / 3) - 1) < 1e-15


@settings(max_examples=20, deadline=None)
@given(finite, finite)
def test_chebyshev_recurrence(x, y):
    nu = complex(x, y / 5)
    c = 2 * cmath.cos(math.pi * nu)
    for m in range(1, 12):
        lhs = chebyshev_u(m + 1, nu)
        rhs = c * chebyshev_u(m, nu) - chebyshev_u(m - 1, nu)
        assert abs(lhs - rhs) <= 1e-13 * max(1, abs(lhs))


@pytest.mark.parametrize("nu", [0.3, 0.25 + 0.2j, 1.7])
def test_chebyshev_matches_sine_ratio(nu):
    for m in range(-6, 7):
        ref = cmath.sin(m * nu * math.pi) / cmath.sin(nu * math.pi)
        assert abs(chebyshev_u(m, nu) - ref) <= 1e-12 * max(1, abs(ref))


@pytest.mark.parametrize("n", [0, 1, 2, -3])
def test_chebyshev_integer_limit(n):
    for m in range(0, 6):
        ref = complex(mpmath.limit(lambda t: mpmath.sin(m * t * mpmath.pi) / mpmath.sin(t * mpmath.pi), n))
        assert abs(chebyshev_u(m, n) - ref) < 1e-12


# Wright Q polynomials --------------------------------------------------------------------

def _sympy_q(m):
    t, s = sp.symbols("t s")
    q = t
    for j in range(1, m):
        q = sp.expand(q + j * sp.integrate(q.subs(t, s), (s, 0, t)))
    return sp.Poly(q, t)


def test_wright_q_examples():
    assert wright_q_poly(1).coeffs == (0, 1)
    assert wright_q_poly(2).coeffs == (0, 1, Fraction(1, 2))
    assert wright_q_poly(3).coeffs == (0, 1, Fraction(3, 2), Fraction(1, 3))


@pytest.mark.parametrize("m", range(1, 10))
def test_wright_q_against_sympy(m):
    ref = _sympy_q(m).all_coeffs()[::-1]
    got = wright_q_poly(m).coeffs
    assert [Fraction(int(sp.numer(c)), int(sp.denom(c))) for c in ref] == list(got)
    assert got[1] == 1
    assert wright_q_poly(m).degree <= m
    assert all(c > 0 for c in got[1:])


# A_n, B_n, C_n and D_n ----------------------------------------------------------------

def _sympy_abc(n):
    z = sp.symbols("z")
    a, b, c = sp.Integer(0), sp.Integer(0), sp.Integer(1)
    for j in range(2, n + 1):
        a, b, c = (sp.expand(-2 * (j - 1) * a + z * sp.diff(a, z) + c),
                   sp.expand(-2 * (j - 1) * b + z * sp.diff(b, z) - z**2 * c),
                   sp.expand(-2 * (j - 1) * c + b + z * sp.diff(c, z)))
    return z, (a, b, c)


def _coeffs(expr, z):
    if expr == 0:
        return ()
    return tuple(int(c) for c in sp.Poly(expr, z).all_coeffs()[::-1])


def test_abc_base_and_small():
    assert abc_polys(1) == (Poly(()), Poly(()), Poly((1,)))
    assert abc_polys(2) == (Poly((1,)), Poly((0, 0, -1)), Poly((-2,)))
    # one more hand step: A_3 = -6, B_3 = 4 zeta^2, C_3 = 8 - zeta^2
    assert abc_polys(3) == (Poly((-6,)), Poly((0, 0, 4)), Poly((8, 0, -1)))


@pytest.mark.parametrize("n", range(1, 9))
def test_abc_against_sympy(n):
    z, ref = _sympy_abc(n)
    got = abc_polys(n)
    for g, r in zip(got, ref):
        assert g.coeffs == _coeffs(r, z)
        assert g.degree <= n


def test_abc_numeric_vs_symbolic():
    pts = [complex(0.3 * j - 1, 0.7 - 0.2 * j) for j in range(10)]
    for n in range(2, 9):
        z, ref = _sympy_abc(n)
        for g, r in zip(abc_polys(n), ref):
            for zv in pts:
                rv = complex(r.subs(z, zv))
                assert abs(g.evalf(zv) - rv) <= 1e-13 * max(1, abs(rv))


def test_d_polys_small():
    dp, dm = d_polys(1)
    assert dp.coeffs == (0, QQi(0, 1)) and dm.coeffs == (0, QQi(0, -1))
    dp, dm = d_polys(2)
    assert dp.coeffs == (0, QQi(0, -2), -1)
    assert dm.coeffs == (0, QQi(0, 2), -1)


@pytest.mark.parametrize("n", range(1, 11))
def test_d_polys_degree(n):
    dp, dm = d_polys(n)
    assert max(dp.degree, dm.degree) == n


# c_k -------------------------------------------------------------------------------

def test_lommel_ck_examples():
    assert lommel_ck(2.2, 0.7, 0) == 1
    assert lommel_ck(3, 0, 1) == 4
    nu = Fraction(3, 7)
    assert lommel_ck(nu + 1, nu, 1) == 0


@settings(max_examples=50, deadline=None)
@given(finite, finite, finite, finite, st.integers(0, 8))
def test_lommel_ck_even_in_nu(a, b, c, d, k):
    mu, nu = complex(a, b), complex(c, d)
    x, y = lommel_ck(mu, nu, k), lommel_ck(mu, -nu, k)
    assert abs(x - y) <= 1e-12 * max(1, abs(x))


# BranchPoint and EvalResult ----------------------------------------------------------

@settings(max_examples=100, deadline=None)
@given(st.floats(1e-3, 1e3), st.floats(-40, 40))
def test_branch_split_roundtrip(r, arg):
    z = BranchPoint(r, arg)
    w, m = z.split()
    assert -math.pi / 2 < w.arg <= math.pi / 2 + 1e-12
    assert abs(w.rotate(-m).arg - arg) < 1e-12
    w2, m2 = z.split(half=False)
    assert m2 % 2 == 0 and -math.pi < w2.arg <= math.pi + 1e-12


def test_branch_power_uses_unreduced_arg():
    z = BranchPoint(2.0, 0.3 + 2 * math.pi)
    assert abs(z.power(0.5) - cmath.exp(0.5 * complex(math.log(2), 0.3 + 2 * math.pi))) < 1e-15
    assert abs(z.power(0.5) + BranchPoint(2.0, 0.3).power(0.5)) < 1e-15


def test_eval_result_rejects_nonfinite():
    with pytest.raises(OverflowError):
        EvalResult(complex(float("nan"), 0), 0.0, "series")
    with pytest.raises(OverflowError):
        EvalResult(1.0, float("inf"), "series")
