"""Exact traces of the Eisenstein-type values and the normalized L-value c_p+.

For a good prime p the relevant quantity is

    Xi_p = sum_b B_n(u_b) wp'_b,   n = (p - 3) / 2,

where B_n is the polynomial with wp^(2n+1) = B_n(wp) wp' on E_D. Writing
wp'_b = J(u_b), Xi_p is the trace of (B_n J mod G)(u), which is a linear
combination of the Newton power sums of G. Then

    c_p+ = -(1/w) (f alpha)^-p ((p-1)!)^-1 Xi_p,

a rational number.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache
from math import factorial

from sympy import isprime

from .curvefam import CurveParams
from .errors import InputError, VerificationError
from .gaussint import GaussInt

EXACT_P_LIMIT = 101


@dataclass(frozen=True)
class PowerSums:
    values: tuple[GaussInt, ...]

    def __getitem__(self, m):
        return self.values[m]

    def __len__(self):
        return len(self.values)


def newton_power_sums(G, count: int | None = None) -> PowerSums:
    """s_m = sum_b u_b^m for m = 0 .. count-1 (default d), from Newton's identities.

    Any count works; e_h = 0 for h > d carries the recursion past the degree.
    """
    d = G.degree
    if d < 1 or not G.is_monic():
        raise InputError("G must be monic with denominator 1 and degree >= 1", code="not-monic")
    count = d if count is None else count
    if count < 1:
        raise InputError("count must be positive", code="bad-count")
    g = [(c.re, c.im) for c in G.coeffs]

    def e(h):  # elementary symmetric functions of the roots
        if h > d:
            return (0, 0)
        sign = -1 if h % 2 else 1
        c = g[d - h]
        return (sign * c[0], sign * c[1])

    s = [(d, 0)]
    for m in range(1, count):
        em = e(m) if m <= d else (0, 0)
        sign = 1 if m % 2 else -1
        re, im = sign * m * em[0], sign * m * em[1]
        for h in range(1, min(m, d + 1)):
            eh = e(h)
            sr, si = s[m - h]
            sg = 1 if h % 2 else -1
            re += sg * (sr * eh[0] - si * eh[1])
            im += sg * (sr * eh[1] + si * eh[0])
        s.append((re, im))
    return PowerSums(tuple(GaussInt(*x) for x in s))


# polynomials in Z[X] as coefficient lists, index = degree


def _deriv(a):
    return [k * a[k] for k in range(1, len(a))] or [0]


def _mul(a, b):
    out = [0] * (len(a) + len(b) - 1)
    for i, x in enumerate(a):
        if x:
            for j, y in enumerate(b):
                out[i + j] += x * y
    return out


def _add(a, b):
    n = max(len(a), len(b))
    return [(a[k] if k < len(a) else 0) + (b[k] if k < len(b) else 0) for k in range(n)]


@dataclass(frozen=True)
class BnPoly:
    n: int
    D: int
    coeffs: tuple[int, ...]

    @property
    def degree(self) -> int:
        return len(self.coeffs) - 1

    def __call__(self, x):
        acc = 0
        for c in reversed(self.coeffs):
            acc = acc * x + c
        return acc


@lru_cache(maxsize=None)
def _dn_bn(D: int, n: int) -> tuple[tuple[int, ...], tuple[int, ...]]:
    """(D_n, B_n) with wp^(2n) = D_n(wp) and B_n = D_n'."""
    if n == 1:
        dn = [-2 * D, 0, 6]
    else:
        _, prev = _dn_bn(D, n - 1)
        prev = list(prev)
        dn = _add(_mul(_deriv(prev), [0, -4 * D, 0, 4]), _mul(prev, [-2 * D, 0, 6]))
        lead_prev = _dn_bn(D, n - 1)[0][-1]
        if dn[-1] != n * (4 * n + 2) * lead_prev:
            raise VerificationError(f"lead(D_{n}) breaks the (n+1)(4n+6) law")
    bn = _deriv(dn)
    if bn[-1] != (n + 1) * dn[-1]:
        raise VerificationError(f"lead(B_{n}) != (n+1) lead(D_{n})")
    if len(bn) - 1 != n:
        raise VerificationError(f"B_{n} has degree {len(bn) - 1}")
    if any(c for k, c in enumerate(bn) if (k - n) % 2):
        raise VerificationError(f"B_{n} has terms of the wrong parity")
    return tuple(dn), tuple(bn)


def bn_poly_exact(D: int, n: int) -> BnPoly:
    """B_n in Z[X] with wp^(2n+1) = B_n(wp) wp' on y^2 = 4x^3 - 4Dx.

    D_1 = 6X^2 - 2D, B_n = D_n', D_{n+1} = B_n' (4X^3 - 4DX) + B_n (6X^2 - 2D).
    Degree, parity and leading coefficients are checked at every step.
    """
    if n < 0:
        raise InputError("n must be nonnegative", code="bad-n")
    if n == 0:
        return BnPoly(0, D, (1,))
    for m in range(1, n):  # fill the cache bottom-up, no deep recursion
        _dn_bn(D, m)
    return BnPoly(n, D, _dn_bn(D, n)[1])


def _check_prime(params: CurveParams, p: int):
    if p < 5 or not isprime(p):
        raise InputError(f"{p} is not a prime >= 5", code="bad-prime")
    if (2 * params.D) % p == 0:
        raise InputError(f"{p} divides 2D", code="bad-reduction")


def _mulmod_gauss(bn: BnPoly, J, G):
    from .algprecomp import poly_mulmod

    return poly_mulmod([(c, 0) for c in bn.coeffs], [(c.re, c.im) for c in J.coeffs], G)


def xi_exact(bundle, p: int) -> tuple[GaussInt, int]:
    """Xi_p as (numerator, denominator) with numerator in Z[i], denominator = denom(J)."""
    params = bundle.params
    _check_prime(params, p)
    bn = bn_poly_exact(params.D, (p - 3) // 2)
    A = _mulmod_gauss(bn, bundle.J, bundle.G)
    re = im = 0
    for (ar, ai), s in zip(A, bundle.power_sums):
        re += ar * s.re - ai * s.im
        im += ar * s.im + ai * s.re
    return GaussInt(re, im), bundle.J.denom


def cp_plus_from_xi(params: CurveParams, p: int, xi_num: GaussInt, xi_den: int) -> Fraction:
    """c_p+ = -(1/w) (f alpha)^-p ((p-1)!)^-1 Xi_p; the result must be rational."""
    fa = params.f_alpha
    num = -(xi_num * fa.conj() ** p)  # divide by fa^p via conj(fa)^p / N(fa)^p
    if num.im != 0:
        raise VerificationError(f"c_{p}+ has nonzero imaginary part; conductor or character mismatch")
    den = params.w * factorial(p - 1) * xi_den * fa.norm() ** p
    return Fraction(num.re, den)


def cp_plus_exact(bundle, p: int, allow_large: bool = False) -> Fraction:
    """c_p+ as an exact rational, p prime, 5 <= p <= 101 unless allow_large."""
    if p > EXACT_P_LIMIT and not allow_large:
        raise InputError(f"exact path is limited to p <= {EXACT_P_LIMIT}", code="p-too-large")
    xi, den = xi_exact(bundle, p)
    return cp_plus_from_xi(bundle.params, p, xi, den)


def p_valuation(x: Fraction, p: int) -> int:
    if x == 0:
        raise ValueError("valuation of 0")
    v = 0
    n, d = x.numerator, x.denominator
    while n % p == 0:
        n //= p
        v += 1
    while d % p == 0:
        d //= p
        v -= 1
    return v


def unit_digit(x: Fraction, p: int) -> int:
    """(x / p^ord) mod p."""
    v = p_valuation(x, p)
    y = x / Fraction(p) ** v
    return y.numerator * pow(y.denominator, -1, p) % p
