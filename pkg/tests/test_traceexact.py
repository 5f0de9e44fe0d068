import math
from fractions import Fraction

import mpmath
import pytest
from hypothesis import assume, given, settings, strategies as st
from sympy import I, Poly, symbols

from cmlv.algprecomp import ZiPoly
from cmlv.errors import InputError
from cmlv.gaussint import GaussInt
from cmlv.refdata import B13_COMMON_FACTOR, B13_REDUCED
from cmlv.traceexact import (
    bn_poly_exact,
    cp_plus_exact,
    newton_power_sums,
    p_valuation,
    unit_digit,
)

small = st.builds(GaussInt, st.integers(-9, 9), st.integers(-9, 9))


def _monic(*coeffs):
    return ZiPoly(tuple(GaussInt(c, 0) if isinstance(c, int) else c for c in coeffs))


def test_newton_small_example():
    s = newton_power_sums(_monic(2, -3, 1))
    assert s[0] == GaussInt(2, 0) and s[1] == GaussInt(3, 0)
    assert newton_power_sums(_monic(2, -3, 1), 2).values == (GaussInt(2, 0), GaussInt(3, 0))
    s = newton_power_sums(_monic(2, -3, 1), 6)
    assert [z.re for z in s.values] == [2, 3, 5, 9, 17, 33]


def test_newton_rejects():
    with pytest.raises(InputError):
        newton_power_sums(_monic(2, 2))
    with pytest.raises(InputError):
        newton_power_sums(_monic(2, -3, 1), 0)


@settings(max_examples=60, deadline=None)
@given(st.lists(small, min_size=1, max_size=8), st.integers(0, 4))
def test_newton_vs_exact_roots(roots, extra):
    poly = [GaussInt(1, 0)]
    for r in roots:  # multiply by (X - r)
        nxt = [GaussInt(0, 0)] * (len(poly) + 1)
        for k, c in enumerate(poly):
            nxt[k + 1] = nxt[k + 1] + c
            nxt[k] = nxt[k] - c * r
        poly = nxt
    s = newton_power_sums(ZiPoly(tuple(poly)), len(roots) + extra)
    for m in range(len(roots) + extra):
        want = GaussInt(0, 0)
        for r in roots:
            want = want + r ** m
        assert s[m] == want


@settings(max_examples=40, deadline=None)
@given(st.lists(small, min_size=1, max_size=8))
def test_newton_vs_numeric_roots(low):
    G = ZiPoly(tuple(low) + (GaussInt(1, 0),))
    X = symbols("X")
    assume(Poly([c.re + c.im * I for c in reversed(G.coeffs)], X).discriminant() != 0)
    with mpmath.workdps(60):
        roots = mpmath.polyroots([mpmath.mpc(c.re, c.im) for c in reversed(G.coeffs)],
                                 maxsteps=400, extraprec=400)
        s = newton_power_sums(G)
        for m in range(G.degree):
            got = sum(r ** m for r in roots)
            assert abs(got - mpmath.mpc(s[m].re, s[m].im)) < 1e-20 * (1 + abs(got))


def test_b1_and_parity():
    assert bn_poly_exact(17, 0).coeffs == (1,)
    assert bn_poly_exact(17, 1).coeffs == (0, 12)
    for n in range(1, 12):
        b = bn_poly_exact(-14, n)
        assert b.degree == n
        assert all(c == 0 for k, c in enumerate(b.coeffs) if (k - n) % 2)


def test_b2_by_hand():
    # D_2 = 12 (4X^3 - 4DX) + 12X (6X^2 - 2D) = 120X^3 - 72DX
    assert bn_poly_exact(5, 2).coeffs == (-72 * 5, 0, 360)


@pytest.mark.parametrize("D", [17, -14])
def test_b13_fixture(D):
    b = bn_poly_exact(D, 13)
    want = [0] * 14
    for j, c in enumerate(B13_REDUCED[D]):
        want[2 * j + 1] = c * B13_COMMON_FACTOR
    assert list(b.coeffs) == want


def test_b13_leading_coefficient():
    assert bn_poly_exact(17, 13).coeffs[-1] == 7496723869173 * 2 ** 24 * 1212046875
    # lead(B_n) = (n + 1) (2n + 1)!
    assert bn_poly_exact(-14, 13).coeffs[-1] == 14 * math.factorial(27)


def test_bn_rejects_negative():
    with pytest.raises(InputError):
        bn_poly_exact(17, -1)


def test_valuation_helpers():
    x = Fraction(27 * 29 ** 3 + 5 * 29 ** 4, 7)
    assert p_valuation(x, 29) == 3
    assert unit_digit(x, 29) == 27 * pow(7, -1, 29) % 29
    assert p_valuation(Fraction(1, 25), 5) == -2


@pytest.mark.parametrize("name, p, ord_, digit", [
    ("bundle17", 5, 2, 3),
    ("bundle17", 13, 2, 8),
    ("bundle_m14", 5, 2, 4),
    ("bundle_m14", 13, 2, 4),
])
def test_cp_exact_table_rows(request, name, p, ord_, digit):
    c = cp_plus_exact(request.getfixturevalue(name), p)
    assert p_valuation(c, p) == ord_
    assert unit_digit(c, p) == digit


def test_cp_exact_exceptional_29(bundle_m14):
    c = cp_plus_exact(bundle_m14, 29)
    q = 29 ** 4
    assert c.numerator * pow(c.denominator, -1, q) % q == 27 * 29 ** 3


def test_cp_exact_rejects(bundle17):
    with pytest.raises(InputError):
        cp_plus_exact(bundle17, 17)
    with pytest.raises(InputError):
        cp_plus_exact(bundle17, 109)
    with pytest.raises(InputError):
        cp_plus_exact(bundle17, 21)
