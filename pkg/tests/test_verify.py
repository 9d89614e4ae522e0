import cmath
import json
import math
from fractions import Fraction

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from lommelosc.bessel import bessel_derivs
from lommelosc.branch import BranchPoint
from lommelosc.errors import ParamError
from lommelosc.lommel import lommel_degenerate_poly, lommel_S
from lommelosc.verify import (
    CensusCurve, OdeParams, SolutionSpec, TABLE1_RADII, _lambda_from, assemble_solution,
    central_derivs, count_in_square, degenerate_symbolic_residual, ode_residual_zeta,
    quantization_classify, relative_residual_z, table1_case, table1_grid, table1_parameters,
    zero_census, zeta_point,
)


def preimage_count(mu, nu, L, M, r):
    """Zeros of the degenerate form in the square |Re z|, |Im z| <= r, from the roots
    rho of its polynomial in x = zeta^-2: z = (log(1/(rho L^2)) + 2 pi i k) / (2M)."""
    _, poly = lommel_degenerate_poly((mu, nu))
    c = [complex(x) for x in poly.coeffs]
    roots = np.roots(c[::-1]) if len(c) > 1 else []
    n = 0
    for rho in roots:
        base = cmath.log(1 / (rho * L * L))
        for k in range(-100, 101):
            z = (base + 2j * math.pi * k) / (2 * M)
            if abs(z.real) <= r and abs(z.imag) <= r:
                n += 1
    return n


def spec(A, B, nu, terms, L=1, M=1, N=0):
    return SolutionSpec(A, B, OdeParams(L, M, N, nu, terms))


# types ---------------------------------------------------------------------------

def test_ode_params_validation():
    with pytest.raises(ParamError):
        OdeParams(0, 1, 0, 0, ((1, 3),))
    with pytest.raises(ParamError):
        OdeParams(1, 0, 0, 0, ((1, 3),))
    with pytest.raises(ParamError):
        OdeParams(1, 1, 0, 0, ((0, 3),))
    with pytest.raises(ParamError):
        OdeParams(1, 1, 0, 0, ((1, 3), (2, 3 + 1j)))
    assert OdeParams(2, Fraction(1, 2), Fraction(1, 3), 3, ((1, 1),)).K == Fraction(9, 4) - Fraction(1, 9)


@settings(max_examples=50, deadline=None)
@given(*(st.floats(-5, 5) for _ in range(4)))
def test_hankel_coefficients_round_trip(a, b, c, d):
    prm = OdeParams(1, 1, 0, 0.3, ((1, 1.5),))
    s = SolutionSpec(complex(a, b), complex(c, d), prm)
    C, D = s.hankel_coefficients
    back = SolutionSpec.from_hankel(C, D, prm)
    assert abs(back.A - s.A) < 1e-12 and abs(back.B - s.B) < 1e-12


def test_zeta_point_tracks_argument():
    zb = zeta_point(OdeParams(-2, 1, 0, 0, ((1, 3),)), 0.5 + 7j)
    assert zb.modulus == pytest.approx(2 * math.exp(0.5))
    assert zb.arg == pytest.approx(math.pi + 7)


def test_census_curve_rejects_decrease():
    with pytest.raises(ValueError):
        CensusCurve(((1, 3), (2, 2)), 0.0, False)


# assembly and residuals ------------------------------------------------------------

def test_assemble_degenerate_root():
    s = spec(0, 0, 0, ((1, 3),))
    assert abs(assemble_solution(s, math.log(2))) < 1e-14


def test_symbolic_residual_of_zeta_squared_minus_4():
    assert all(c == 0 for c in degenerate_symbolic_residual(3, 0))


def test_residual_exact_polynomial():
    prm = OdeParams(1, 1, 0, 0, ((1, 3),))
    for zeta in (2.0, 1 + 1j, BranchPoint(3.0, 5.0)):
        z = BranchPoint.coerce(zeta).value
        res = ode_residual_zeta(prm, lambda w: (w.value ** 2 - 4, 2 * w.value, 2.0 + 0j), zeta)
        assert abs(res) <= 1e-14 * abs(z) ** 4
    assert ode_residual_zeta(prm, lambda w: (w.value ** 2 - 4, 2 * w.value, 2.0 + 0j), 2.0) == 0


@pytest.mark.parametrize("nu", [0.3, 1.7 - 0.2j])
def test_residual_bessel_homogeneous(nu):
    # y = J + S solves the equation with the S right-hand side, so J must cancel exactly
    prm = OdeParams(1, 1, 0, nu, ((1, 1.3),))
    for zeta in (0.7, 3 + 2j, 9.5 - 1j):
        def y(w):
            j, dj, d2j = bessel_derivs("J", nu, w)
            return j, dj, d2j
        zv = complex(zeta)
        hom = ode_residual_zeta(prm, y, zeta) + zv ** 2.3
        assert abs(hom) <= 1e-10 * max(1, abs(zv * zv * y(BranchPoint.coerce(zeta))[0]))


def test_residual_generic_series():
    prm = OdeParams(1, 1, 0, 0.4, ((1, 1.3),))
    rng = np.random.default_rng(7)
    for _ in range(20):
        r, th = rng.uniform(0.5, 10), rng.uniform(-3, 3)
        zb = BranchPoint(r, th)
        res = ode_residual_zeta(prm, lambda w: lommel_S((1.3, 0.4), w).value, zb)
        scale = max(abs(zb.power(2.3)), abs(zb.value ** 2 * lommel_S((1.3, 0.4), zb).value))
        assert abs(res) <= 1e-8 * scale


def test_central_derivs_polynomial():
    v, d1, d2 = central_derivs(lambda z: z ** 3, 1.5 + 0.5j, 1e-2)
    z = 1.5 + 0.5j
    assert abs(v - z ** 3) < 1e-15 and abs(d1 - 3 * z * z) < 1e-12 and abs(d2 - 6 * z) < 1e-10


def test_relative_residual_degenerate_grid():
    s = spec(0, 0, 0, ((1, 3),))
    rng = np.random.default_rng(3)
    for _ in range(20):
        z = cmath.rect(rng.uniform(0, 2), rng.uniform(-math.pi, math.pi))
        assert relative_residual_z(s, z) <= 1e-7


@pytest.mark.parametrize("s", [
    spec(1, 0.5j, 0.3, ((1, 1.3),)),
    spec(0, 1, 0.5, ((1, 2.2), (0.5, 0.7))),
    spec(0, 0, 0, ((1, 3),), L=2, M=0.5, N=0.25),
    spec(0.7, 0, 1.2, ((1, 0.4),), L=1 + 1j, M=1 - 0.5j, N=0.1),
])
def test_residual_small_for_mixed_specs(s):
    for z in (0.3 + 0.2j, -1.1 + 2.5j, 1.4 - 3.9j, -1.9 - 0.4j):
        assert relative_residual_z(s, z) <= 1e-7


def test_residual_step_range():
    s = spec(0, 0, 0, ((1, 3),))
    with pytest.raises(ValueError):
        relative_residual_z(s, 0.5, h=1e-7)
    with pytest.raises(ValueError):
        relative_residual_z(s, 0.5, h=1e-2)


@settings(max_examples=15, deadline=None)
@given(st.floats(-3, 3), st.floats(-6, 6))
def test_route_independence(x, y):
    z = complex(x, y)
    for s in (spec(1, 0.5j, 0.3, ((1, 1.3),)), spec(0, 0, 0.5, ((1, 2.5),)),
              spec(1, 1, 0.2 + 0.1j, ((1, -2.7 + 0.1j),)), spec(0.5, 0, 0.4, ((1, 1.6),), L=-1, M=1j)):
        a = assemble_solution(s, z, route="half")
        b = assemble_solution(s, z, route="full")
        assert abs(a - b) <= 1e-10 * max(1, abs(a))


# quantization ---------------------------------------------------------------------

def test_quantize_examples():
    assert quantization_classify(spec(0, 0, 0, ((1, 3),))).finite_lambda_predicted
    assert not quantization_classify(spec(1, 0, 0, ((1, 3),))).finite_lambda_predicted
    assert not quantization_classify(spec(0, 0, 0.2, ((1, 1.5),))).finite_lambda_predicted


def test_quantize_needs_every_active_term():
    assert not quantization_classify(spec(0, 0, 0, ((1, 3), (1, 1.5)))).finite_lambda_predicted
    assert quantization_classify(spec(0, 0, 0, ((1, 3), (2, 5)))).finite_lambda_predicted
    v = quantization_classify(spec(0, 0, 0, ((1, 3),)))
    json.dumps(v.to_dict())


# census -----------------------------------------------------------------------------

DEGENERATE = [
    (3, 0, 1, 1), (2.5, 0.5, 1, 1), (3.3 + 0.1j, 0.3 + 0.1j, 1, 1), (6, 1, 1, 1), (4, 1, 2, 0.5),
]


@pytest.mark.parametrize("mu,nu,L,M", DEGENERATE)
def test_census_matches_preimages(mu, nu, L, M):
    s = spec(0, 0, nu, ((1, mu),), L=L, M=M)
    curve = zero_census(s, (2, 3, 4, 5))
    assert [c for _, c in curve.points] == [preimage_count(mu, nu, L, M, r) for r in (2, 3, 4, 5)]
    assert not curve.infinite_flag


def test_census_empty_square():
    s = spec(0, 0, 0, ((1, 3),))
    assert count_in_square(lambda z: assemble_solution(s, z), 0.1) == 0


def test_census_radius_validation():
    s = spec(0, 0, 0, ((1, 3),))
    with pytest.raises(ValueError):
        zero_census(s, (3, 2))
    with pytest.raises(ValueError):
        zero_census(s, (2, 9))


def test_lambda_estimates():
    assert _lambda_from(((2, 3), (3, 9), (4, 27))) == (math.inf, True)
    lam, inf = _lambda_from(((2, 4), (3, 4), (4, 4)))
    assert not inf and abs(lam) < 1e-12
    lam, _ = _lambda_from(((4, 16), (5, 25), (6, 36)))
    assert lam == pytest.approx(2)
    assert _lambda_from(((2, 0), (3, 0), (4, 0))) == (0.0, False)


def test_census_curve_json():
    curve = zero_census(spec(0, 0, 0, ((1, 3),)), (2, 3))
    d = json.loads(json.dumps(curve.to_dict()))
    assert d["points"] == [[2.0, 1], [3.0, 1]]


# Table 1 --------------------------------------------------------------------------

K_EXPECTED = {
    1: lambda p: Fraction(p * p),
    2: lambda p: Fraction((2 * p + 1) ** 2, 4),
    3: lambda p: Fraction((p + 1) ** 2),
    4: lambda p: Fraction((2 * p + 1) ** 2, 16),
}


@pytest.mark.parametrize("case", [1, 2, 3, 4])
@pytest.mark.parametrize("p", range(6))
def test_table1_k_values(case, p):
    mu, nu, K = table1_parameters(case, p)
    assert K == K_EXPECTED[case](p)
    assert isinstance(K, Fraction)
    # the reduced constant nu^2 M^2 with M = 1/2
    assert nu * nu / 4 == K
    assert all(c == 0 for c in degenerate_symbolic_residual(mu, nu))


def test_table1_examples():
    assert table1_parameters(1, 0)[2] == 0
    assert table1_parameters(4, 1)[2] == Fraction(9, 16)
    rep = table1_case(3, 0)
    assert rep.K == 1 and rep.residual_max <= 1e-7
    with pytest.raises(ValueError):
        table1_parameters(5, 0)
    with pytest.raises(ValueError):
        table1_parameters(1, 6)


@pytest.mark.parametrize("case,p", [(1, 1), (2, 2), (4, 2)])
def test_table1_census_matches_preimages(case, p):
    mu, nu, _ = table1_parameters(case, p)
    rep = table1_case(case, p)
    expected = [preimage_count(mu, nu, 2, 0.5, r) for r in TABLE1_RADII]
    assert [c for _, c in rep.census.points] == expected
    assert len(table1_grid()) == 20 and all(abs(z) <= 2 for z in table1_grid())
    json.dumps(rep.to_dict())
