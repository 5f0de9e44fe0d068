"""Multiprecision evaluation of the Weierstrass function of the square lattice Z[i].

Values are :class:`mpmath.mpc` numbers. ``wp`` reduces the argument to the
unit square around 0, halves it until it is well inside the disc where the
Laurent series about 0 converges, sums the series and then doubles back
with the duplication formula. The lattice Z[i] has g2 = 4 * Omega^4 and
g3 = 0, where Omega = pi / AGM(1, sqrt 2) is the lemniscate constant.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from functools import lru_cache

import mpmath
from mpmath import mpc, mpf

from .errors import InputError, PrecisionError
from .gaussint import GaussInt

HALVING_RADIUS = 0.0625
GUARD_BITS_PER_HALVING = 32
BASE_GUARD_BITS = 32
# halvings needed from the corner of the unit square, |z0| <= sqrt(2)/2
MAX_HALVINGS = math.ceil(math.log2(math.sqrt(0.5) / HALVING_RADIUS))


@dataclass(frozen=True)
class PrecisionCtx:
    prec_bits: int
    series_terms: int = 0
    halving_depth: int = 0

    def __post_init__(self):
        if self.prec_bits < 64:
            raise InputError("prec_bits must be at least 64", code="precision")
        if self.series_terms <= 0:
            # (0.35)^(4j) < 2^-prec_bits, with slack for the coefficient growth
            terms = math.ceil((self.prec_bits + BASE_GUARD_BITS) / (-4 * math.log2(HALVING_RADIUS))) + 8
            object.__setattr__(self, "series_terms", terms)

    @property
    def working_bits(self) -> int:
        depth = max(self.halving_depth, MAX_HALVINGS)
        return self.prec_bits + BASE_GUARD_BITS + GUARD_BITS_PER_HALVING * depth


def agm(a, b, tol_bits: int) -> tuple[mpf, int]:
    """Arithmetic-geometric mean and the number of iterations used."""
    a, b = mpf(a), mpf(b)
    eps = mpf(2) ** (-tol_bits)
    steps = 0
    while abs(a - b) > eps * abs(a):
        a, b = (a + b) / 2, mpmath.sqrt(a * b)
        steps += 1
    return a, steps


def lemniscate_period(ctx: PrecisionCtx) -> mpf:
    """The least positive real period of y^2 = x^3 - x (2.622057...)."""
    return _lemniscate(ctx.prec_bits)[0]


@lru_cache(maxsize=16)
def _lemniscate(prec_bits: int) -> tuple[mpf, int]:
    with mpmath.workprec(prec_bits + 16):
        m, steps = agm(1, mpmath.sqrt(2), prec_bits + 8)
        omega = +(mpmath.pi / m)
    return omega, steps


def reduce_to_fundamental(z) -> tuple[mpc, GaussInt]:
    """Write z = z0 + shift with shift in Z[i] and z0 in [-1/2, 1/2)^2."""
    z = mpc(z)
    a = int(mpmath.floor(z.real + mpf(0.5)))
    b = int(mpmath.floor(z.imag + mpf(0.5)))
    return z - mpc(a, b), GaussInt(a, b)


@lru_cache(maxsize=8)
def _laurent_coeffs(prec_bits: int, terms: int) -> tuple[mpf, ...]:
    """Coefficients A_j of wp(z) = z^-2 + sum_{j>=1} A_j z^(4j-2) for Z[i].

    From the standard recurrence c_2 = g2/20, c_3 = g3/28 = 0,
    c_k = 3/((2k+1)(k-3)) sum_{m=2}^{k-2} c_m c_{k-m}; only even k survive.
    """
    with mpmath.workprec(prec_bits):
        omega = _lemniscate(prec_bits)[0]
        c = {2: 4 * omega ** 4 / 20}
        for j in range(2, terms + 1):
            k = 2 * j
            s = mpf(0)
            for m in range(2, k - 1, 2):
                s += c[m] * c[k - m]
            c[k] = 3 * s / ((2 * k + 1) * (k - 3))
        return tuple(c[2 * j] for j in range(1, terms + 1))


def _real_poly_at(coeffs, x: mpc) -> mpc:
    """sum_k coeffs[k] x^k for real coefficients, two real products per term.

    Second-order recurrence b_k = a_k + t b_(k+1) - s b_(k+2) with t = 2 Re x,
    s = |x|^2, i.e. division by the real quadratic with roots x and conj(x).
    """
    t = 2 * x.real
    s = x.real * x.real + x.imag * x.imag
    b1 = b2 = mpf(0)
    for a in reversed(coeffs[1:]):
        b1, b2 = a + t * b1 - s * b2, b1
    return coeffs[0] + x * b1 - s * b2


def _series(w: mpc, coeffs, omega4) -> tuple[mpc, mpc]:
    """(wp(w), wp'(w)/2) from the Laurent series, w small and nonzero.

    wp' comes from the curve equation y^2 = x^3 - Omega^4 x; the branch is the one
    closest to the leading term -1/w^3.
    """
    w2 = w * w
    x = 1 / w2 + _real_poly_at(coeffs, w2 * w2) * w2
    y = mpmath.sqrt(x * (x * x - omega4))
    lead = -1 / (w2 * w)
    if abs(y - lead) > abs(y + lead):
        y = -y
    return x, y


def _wp_pair(z, ctx: PrecisionCtx) -> tuple[mpc, mpc]:
    z0, _ = reduce_to_fundamental(z)
    if abs(z0) < mpf(2) ** (-(ctx.prec_bits // 2)):
        raise InputError(f"wp has a pole at the lattice point {z}", code="pole")
    m = 0
    r = abs(z0)
    while r > HALVING_RADIUS:
        r /= 2
        m += 1
    ctx2 = PrecisionCtx(ctx.prec_bits, ctx.series_terms, m)
    with mpmath.workprec(ctx2.working_bits):
        coeffs = _laurent_coeffs(ctx2.working_bits, ctx2.series_terms)
        omega4 = _lemniscate(ctx2.working_bits)[0] ** 4
        w = mpc(z0) / 2 ** m
        x, y = _series(w, coeffs, omega4)  # point (x, y) on y^2 = x^3 - Omega^4 x
        for _ in range(m):
            if y == 0:
                raise PrecisionError("duplication hit a 2-torsion point")
            lam = (3 * x * x - omega4) / (2 * y)
            x2 = lam * lam - 2 * x
            y = lam * (x - x2) - y
            x = x2
        return x, 2 * y


def wp(z, ctx: PrecisionCtx) -> mpc:
    """wp(z; Z[i])."""
    return _wp_pair(z, ctx)[0]


def wp_prime(z, ctx: PrecisionCtx) -> mpc:
    """wp'(z; Z[i])."""
    return _wp_pair(z, ctx)[1]


def wp_and_prime(z, ctx: PrecisionCtx) -> tuple[mpc, mpc]:
    return _wp_pair(z, ctx)


def g2_lattice(ctx: PrecisionCtx) -> mpf:
    """g2 of Z[i], namely 4 * Omega^4."""
    with mpmath.workprec(ctx.prec_bits + 16):
        return 4 * lemniscate_period(ctx) ** 4
