"""Numeric cross-check of Xi_p by direct summation over the conjugates.

Xi_p = sum_b B_n(u_b) wp'_b is summed in high precision from the conjugate
points themselves. No Newton identities, no J and no reduction mod G are
involved, so agreement with the exact trace tests exactly those steps.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction

import mpmath
from mpmath import mpc, mpf

from .algprecomp import conjugate_points
from .curvefam import CurveParams
from .errors import InputError, PrecisionError
from .gaussint import GaussInt
from .mpcomplex import PrecisionCtx
from .traceexact import EXACT_P_LIMIT, bn_poly_exact, cp_plus_from_xi, xi_exact

MATCH_TOL_BITS = 32


@dataclass(frozen=True)
class OracleReport:
    p: int
    xi_numeric: mpc
    theta_numeric: mpc  # -Xi_p / (p-1)!
    rounded: tuple[GaussInt, int]  # (numerator, denominator)
    residual: mpf
    matched: bool
    cp_plus: Fraction | None = None


def xi_numeric(params: CurveParams, p: int, ctx: PrecisionCtx, points=None) -> mpc:
    return _xi_with_scale(params, p, ctx, points)[0]


def _xi_with_scale(params, p, ctx, points=None) -> tuple[mpc, mpf]:
    """Xi_p and sum |B_n(u_b) wp'_b|, which bounds the cancellation in the sum."""
    if p > EXACT_P_LIMIT:
        raise InputError(f"oracle is limited to p <= {EXACT_P_LIMIT}", code="p-too-large")
    if p < 5 or p % 4 != 1 or (2 * params.D) % p == 0:
        raise InputError(f"{p} is not a good split prime for D={params.D}", code="bad-prime")
    bn = bn_poly_exact(params.D, (p - 3) // 2)
    points = conjugate_points(params, ctx) if points is None else points
    with mpmath.workprec(ctx.prec_bits + 64):
        total, scale = mpc(0), mpf(0)
        for u, y in points:
            acc = mpc(0)
            for c in reversed(bn.coeffs):
                acc = acc * u + c
            total += acc * y
            scale += abs(acc * y)
    return total, scale


def xi_p_numeric(params: CurveParams, p: int, ctx: PrecisionCtx, bundle=None, points=None) -> OracleReport:
    """Sum Xi_p numerically and round it with the denominator of the exact value.

    With a bundle, the rounded value is compared with the exact trace; without
    one, Xi_p is rounded to Z[i] after clearing the given denominator of 1.
    """
    xi, scale = _xi_with_scale(params, p, ctx, points)
    den = bundle.J.denom if bundle is not None else 1
    tol = mpf(2) ** -MATCH_TOL_BITS
    with mpmath.workprec(ctx.prec_bits + 64):
        # the points carry about prec_bits correct bits, so the rounding is
        # meaningless once den * scale * 2^-prec_bits reaches the tolerance
        err = den * scale * mpf(2) ** -ctx.prec_bits
        if err >= tol:
            raise PrecisionError(f"Xi_{p} needs more than {ctx.prec_bits} bits (error estimate {err})")
        scaled = xi * den
        a, b = mpmath.nint(scaled.real), mpmath.nint(scaled.imag)
        residual = max(abs(scaled.real - a), abs(scaled.imag - b))
        theta = -xi / mpmath.factorial(p - 1)
    num = GaussInt(int(a), int(b))
    if residual >= tol:
        raise PrecisionError(f"Xi_{p} does not round at {ctx.prec_bits} bits (residual {residual})")
    matched = True
    if bundle is not None:
        exact_num, exact_den = xi_exact(bundle, p)
        matched = exact_num == num and exact_den == den
    cp = None
    if matched:
        try:
            cp = cp_plus_from_xi(params, p, num, den)
        except Exception:
            matched = False
    return OracleReport(p, xi, theta, (num, den), residual, matched, cp)
