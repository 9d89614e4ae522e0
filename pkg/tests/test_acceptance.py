import cmath
import math
import time
from fractions import Fraction

import mpmath
import numpy as np
import pytest

from lommelosc.bessel import hankel_asymptotic
from lommelosc.branch import BranchPoint
from lommelosc.census import (
    AuxParams, aux_g, aux_g_prime, aux_ghat, aux_ghat_prime, build_contour_omega_g,
    build_contour_omega_ghat, count_zeros, dominance_holds, g_to_wright, ghat_zeros,
    ghat_zeros_inside,
)
from lommelosc.core import QQi, d_polys
from lommelosc.errors import DegenerateDenominator
from lommelosc.lommel import (
    LommelParams, continuation_coeff_P, lommel_S, lommel_S_principal, lommel_continued,
    lommel_degenerate_poly,
)
from lommelosc.verify import (
    OdeParams, SolutionSpec, degenerate_symbolic_residual, table1_case, zero_census,
)
from lommelosc.wright import (
    d_r, subseq_box, subseq_hypothesis, wright_bounds, wright_refine, wright_seed,
    wright_subseq_seed,
)


def crit(n):
    return pytest.mark.criterion(n)


class Timer:
    def __enter__(self):
        self.t0 = time.perf_counter()
        return self

    def __exit__(self, *exc):
        self.seconds = time.perf_counter() - self.t0


# 1 ----------------------------------------------------------------------------------

C1_NU = [Fraction(0), Fraction(1, 2), Fraction(-1, 2), Fraction(1), Fraction(-1), QQi(Fraction(3, 10), Fraction(1, 10))]


def _c1_pairs():
    for nu in C1_NU:
        for p in range(6):
            yield nu + 2 * p + 1, nu
            yield -nu + 2 * p + 1, nu


def _degenerate_terms(coeffs, zb):
    """y, y', y'' from the terminating expansion, term by term."""
    y = dy = d2y = 0j
    for a, c in coeffs:
        y += c * zb.power(a)
        dy += c * a * zb.power(a - 1)
        d2y += c * a * (a - 1) * zb.power(a - 2)
    return y, dy, d2y


@crit(1)
def test_c1_degenerate_residual():
    rng = np.random.default_rng(1)
    pts = [BranchPoint(r, t) for r, t in zip(rng.uniform(0.5, 10, 50), rng.uniform(-3.1, 3.1, 50))]
    with Timer() as tm:
        for mu, nu in _c1_pairs():
            assert all(c == 0 for c in degenerate_symbolic_residual(mu, nu))
            m, n = complex(mu), complex(nu)
            e, poly = lommel_degenerate_poly((mu, nu))
            coeffs = [(complex(e) - 2 * k, complex(c)) for k, c in enumerate(poly.coeffs)]
            for zb in pts:
                y, dy, d2y = _degenerate_terms(coeffs, zb)
                assert abs(lommel_S((mu, nu), zb).value - y) <= 1e-13 * max(1, abs(y))
                z = zb.value
                rhs = zb.power(m + 1)
                parts = (z * z * d2y, z * dy, z * z * y, n * n * y, rhs)
                res = parts[0] + parts[1] + parts[2] - parts[3] - rhs
                assert abs(res) <= 1e-12 * max(abs(x) for x in parts)
    assert tm.seconds < 2


# 2 ----------------------------------------------------------------------------------

C2_TARGETS = [1, 2 * cmath.exp(1j * math.pi / 3), 0.5 - 0.2j]


@crit(2)
def test_c2_wright_seeds_and_refinement():
    checked = 0
    with Timer() as tm:
        for a in C2_TARGETS:
            alpha = cmath.phase(a)
            for n in [*range(-200, -9), *range(10, 201)]:
                s = wright_seed(a, n)
                if not s.valid:
                    continue
                box = wright_bounds(a, n)
                assert box.contains(s.z)
                r = wright_refine(a, s, 1e-12)
                assert r.residual <= 1e-12 and r.iterations <= 12
                lo = (2 * n - 1) * math.pi + alpha if n > 0 else 2 * n * math.pi + alpha
                assert lo < r.z.imag < lo + math.pi
                checked += 1
    assert checked >= 0.9 * 3 * 382
    assert tm.seconds < 5


# 3 ----------------------------------------------------------------------------------

@crit(3)
def test_c3_subsequence_membership():
    A, m = 1e-3, 1
    assert math.log(A) - math.log(math.pi) + 1 < -3 and subseq_hypothesis(A, m)
    for k in range(20, 41):
        s = wright_subseq_seed(A, m, k)
        z = wright_refine(A, s).z
        for w in (s.z, z):
            assert -5 * math.log(k) < w.real < -2 * math.log(k) - 2
            assert -d_r(A, m, k + 1) < w.imag < -d_r(A, m, k)
            assert subseq_box(A, m, k).contains(w)


# 4 ----------------------------------------------------------------------------------

# |Delta_+| != |Delta_-|
C4_UNEQUAL = AuxParams(1, 3, 0.5, 1)
# roots on the unit circle: equal moduli, distinct angles
_XP, _XM = cmath.exp(0.3j), cmath.exp(2.0j)
C4_EQUAL = AuxParams(1, -(_XP + _XM), 0.5, _XP * _XM)


@crit(4)
def test_c4_ghat_zero_residuals():
    rng = np.random.default_rng(4)
    draws = 0
    while draws < 100:
        C, s, D = (complex(*rng.uniform(-2, 2, 2)) for _ in range(3))
        if min(abs(C), abs(s), abs(D)) < 0.1:
            continue
        draws += 1
        p = AuxParams(C, s, 0.5, D)
        zs, _ = ghat_zeros(p, range(-3, 4))
        for _, _, z in zs:
            scale = max(abs(C * cmath.exp(1j * z)), abs(s), abs(D * cmath.exp(-1j * z)))
            assert abs(aux_ghat(p, z)) <= 1e-12 * scale


@crit(4)
@pytest.mark.parametrize("k", range(2, 7))
def test_c4_unmodified_count(k):
    c = build_contour_omega_ghat(C4_UNEQUAL, k)
    res = count_zeros(lambda z: aux_ghat(C4_UNEQUAL, z), c, lambda z: aux_ghat_prime(C4_UNEQUAL, z))
    assert res.winding == k + 1


@crit(4)
@pytest.mark.parametrize("k", range(2, 7))
def test_c4_modified_count(k):
    # stated value 2k+1; the strip is 2k pi wide and holds 2k zeros (see the decisions ledger)
    c = build_contour_omega_ghat(C4_EQUAL, k, modified=True)
    res = count_zeros(lambda z: aux_ghat(C4_EQUAL, z), c, lambda z: aux_ghat_prime(C4_EQUAL, z))
    assert res.winding == len(ghat_zeros_inside(C4_EQUAL, c, k))
    assert res.winding == 2 * k + 1


# 5 ----------------------------------------------------------------------------------

@crit(5)
def test_c5_g_contour_counts():
    p, m = AuxParams(1, 100, 2), 1
    assert p.phi == math.pi and dominance_holds(p, m) and subseq_hypothesis(g_to_wright(p), m)
    with Timer() as tm:
        for k in range(3, 9):
            c = build_contour_omega_g(p, m, k)
            res = count_zeros(lambda z: aux_g(p, z), c, lambda z: aux_g_prime(p, z))
            assert res.winding >= k
    assert tm.seconds < 60


# 6 ----------------------------------------------------------------------------------

@crit(6)
def test_c6_P_vanishes():
    rng = np.random.default_rng(6)
    done = 0
    while done < 1000:
        mu, nu = complex(*rng.uniform(-4, 4, 2)), complex(*rng.uniform(-4, 4, 2))
        prm = LommelParams(mu, nu)
        try:
            p0, pm1, p1 = (continuation_coeff_P(m, prm) for m in (0, -1, 1))
        except DegenerateDenominator:
            continue
        done += 1
        assert abs(p0) <= 1e-14 * max(1, abs(p1))
        assert abs(pm1) <= 1e-14 * max(1, abs(p1))


@crit(6)
@pytest.mark.parametrize("mu,nu", [(1.3, 0.4), (3, 0), (3.5, 0.5), (2.5, 0.5), (-2.7, 0.3), (-3, 0), (-5, 2)])
def test_c6_m_zero_identity(mu, nu):
    for z in (1.2 + 0.8j, -3 + 0.1j, 0.4 - 2j, 15 + 4j):
        zb = BranchPoint.from_complex(z)
        base = lommel_S_principal((mu, nu), zb).value
        assert lommel_continued((mu, nu), zb, 0) == base


@crit(6)
@pytest.mark.parametrize("mu,nu", [(3.5, 0.5), (5.25 + 0.1j, 0.25 + 0.1j), (4, 1), (3, 0), (1, 0)])
def test_c6_degenerate_rotation(mu, nu):
    for z in (1.7 - 0.6j, -2 + 3j, 6 + 0.5j):
        zb = BranchPoint.from_complex(z)
        base = lommel_S_principal((mu, nu), zb).value
        for m in range(-4, 5):
            ref = cmath.exp(-1j * m * complex(nu) * math.pi) * base
            assert abs(lommel_continued((mu, nu), zb, m) - ref) <= 1e-10 * abs(ref)


# 7 ----------------------------------------------------------------------------------

def _series_hankel(kind, nu, r):
    with mpmath.workdps(40):
        j, y = mpmath.besselj(nu, r), mpmath.bessely(nu, r)
        return complex(j + 1j * y if kind == 1 else j - 1j * y)


@crit(7)
@pytest.mark.parametrize("nu", [0, Fraction(1, 3), Fraction(1, 2)])
@pytest.mark.parametrize("p", [2, 4, 6])
def test_c7_truncation_order(nu, p):
    for kind in (1, 2):
        err = []
        for r in (30.0, 60.0):
            exact = _series_hankel(kind, mpmath.mpf(nu.numerator) / nu.denominator if nu else 0, r)
            err.append(abs(hankel_asymptotic(kind, float(nu), r, p).value - exact))
        if nu == Fraction(1, 2):
            # the expansion terminates after one term, so every truncation is exact
            assert max(err) <= 1e-15
            continue
        ratio = err[0] / err[1]
        assert 2 ** p / 2 <= ratio <= 2 ** p * 2


# 8 ----------------------------------------------------------------------------------

C8_K = {
    1: lambda p: Fraction(p * p),
    2: lambda p: Fraction((2 * p + 1) ** 2, 4),
    3: lambda p: Fraction((p + 1) ** 2),
    4: lambda p: Fraction((2 * p + 1) ** 2, 16),
}


@crit(8)
@pytest.mark.parametrize("case", [1, 2, 3, 4])
@pytest.mark.parametrize("p", [0, 1, 2])
def test_c8_table1(case, p):
    rep = table1_case(case, p)
    assert rep.K == C8_K[case](p)
    assert rep.residual_max <= 1e-7
    counts = [c for _, c in rep.census.points]
    assert counts[-1] == counts[-2]


# 9 ----------------------------------------------------------------------------------

def _spec(A, B, nu, terms, L=1, M=1):
    return SolutionSpec(A, B, OdeParams(L, M, 0, nu, terms))


C9_DEGENERATE = [
    _spec(0, 0, 0, ((1, 3),)),
    _spec(0, 0, 0.5, ((1, 2.5),)),
    _spec(0, 0, 0.3 + 0.1j, ((1, 3.3 + 0.1j),)),
    _spec(0, 0, 1, ((1, 6),)),
    _spec(0, 0, 1, ((1, 4),), L=2, M=0.5),
]
C9_GROWTH = [
    _spec(1, 0, 0.4, ((1, 1.3),)),
    _spec(0, 1, 0.5, ((1, 2.2),)),
    _spec(0.5, 0, 0.3 + 0.1j, ((1, 1.5),)),
    _spec(1, 0, 0, ((1, 3),)),
    _spec(1, 0, 1.2, ((1, 2.5),)),
]
C9_RADII = (2, 3, 4, 5)


@crit(9)
@pytest.mark.parametrize("idx", range(5))
def test_c9_degenerate_counts_settle(idx):
    counts = [c for _, c in zero_census(C9_DEGENERATE[idx], C9_RADII).points]
    assert counts[-1] == counts[-2]


@crit(9)
@pytest.mark.parametrize("idx", range(5))
def test_c9_oscillatory_counts_grow(idx):
    counts = [c for _, c in zero_census(C9_GROWTH[idx], C9_RADII).points]
    assert all(b > a for a, b in zip(counts, counts[1:]))
    assert counts[-1] >= 2 * counts[-2]


# 10 ---------------------------------------------------------------------------------

@crit(10)
@pytest.mark.parametrize("n", range(1, 11))
def test_c10_d_poly_degree(n):
    dp, dm = d_polys(n)
    assert max(dp.degree, dm.degree) == n
