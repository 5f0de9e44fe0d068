"""Invariants of the quartic twists E_D : y^2 = x^3 - D x.

Covers the conductor and its fixed generator, the real-period correction
alpha(E), the Grossencharacter psi_E, torsion-field degrees and a brute
force point count used to pin down the character convention.
"""

from __future__ import annotations

from dataclasses import dataclass

from sympy import factorint, isprime

from .errors import InputError
from .gaussint import (
    GaussInt,
    IdealRep,
    ONE,
    ONE_PLUS_I,
    as_gauss,
    divides,
    euler_phi,
    factor,
    gcd,
    normalize,
    normalize_primary,
    quartic_symbol,
)

W = 4  # roots of unity in Q(i)


@dataclass(frozen=True)
class CurveParams:
    D: int
    Delta: int
    f_gen: GaussInt
    alpha: GaussInt
    f_alpha: GaussInt
    d: int
    w: int = W
    # the generator of L is Omega_inf = omega_sign * Omega_inf+ / alpha
    omega_sign: int = 1

    @property
    def case(self) -> str:
        """Which of the four generator conventions applies: i, ii, iii or iv."""
        one_mod_4 = self.D % 4 == 1
        if self.D > 0:
            return "i" if one_mod_4 else "iii"
        return "ii" if one_mod_4 else "iv"

    @property
    def conductor(self) -> IdealRep:
        return IdealRep(self.f_gen)


def _odd_prime_factors(n: int) -> dict[int, int]:
    return {q: e for q, e in factorint(abs(n)).items() if q != 2}


def make_params(D: int) -> CurveParams:
    """Conductor generator, alpha(E), f*alpha and d = phi(f)/4 for E_D."""
    D = int(D)
    if D == 0:
        raise InputError("D must be nonzero", code="zero")
    fac = factorint(abs(D))
    if any(e >= 4 for e in fac.values()):
        raise InputError(f"D = {D} is divisible by a fourth power", code="fourth-power")
    if not _odd_prime_factors(D):
        raise InputError(f"D = {D} has no odd prime factor", code="no-odd-prime")
    delta = 1
    for q in fac:
        delta *= q
    if D % 4 == 1:
        f_gen = (ONE_PLUS_I ** 3) * delta
        if D > 0:
            f_gen = GaussInt(2, 0) * ONE_PLUS_I * delta
    else:
        f_gen = GaussInt(4 * delta, 0)
    alpha = ONE if D > 0 else ONE_PLUS_I
    d = euler_phi(f_gen) // W
    # for D < 0 the generator -Omega_inf+/(1+i) is the one that reproduces the reference digits
    omega_sign = 1 if D > 0 else -1
    return CurveParams(D, delta, f_gen, alpha, f_gen * alpha, d, W, omega_sign)


def grossencharacter(D: int, beta) -> GaussInt:
    """psi_E((beta)) for an odd beta prime to D.

    With beta0 the primary associate, psi = conj((D/beta0)_4) * beta0, the
    quartic symbol extended multiplicatively over the primary prime factors.
    """
    beta0 = normalize_primary(beta)
    chi = ONE
    for pi, e in factor(beta0):
        chi = chi * quartic_symbol(D, normalize_primary(pi)) ** e
    return chi.conj() * beta0


def psi(params: CurveParams, b) -> GaussInt:
    gen = b.gen if isinstance(b, IdealRep) else as_gauss(b)
    if gcd(gen, params.f_gen).norm() != 1:
        raise InputError(f"ideal ({gen}) is not prime to the conductor", code="not-coprime")
    return grossencharacter(params.D, gen)


def ap_point_count(D: int, p: int) -> int:
    """a_p = p - #{affine points of y^2 = x^3 - Dx over F_p}, by exhaustion."""
    if p < 3 or not isprime(p):
        raise InputError(f"{p} is not an odd prime", code="bad-prime")
    if D % p == 0:
        raise InputError(f"E_{D} has bad reduction at {p}", code="bad-reduction")
    squares = [0] * p
    for y in range(p):
        squares[y * y % p] += 1
    affine = sum(squares[(x * x * x - D * x) % p] for x in range(p))
    return p - affine


def _is_power_of_one_plus_i(h: GaussInt) -> int | None:
    k = 0
    while h.norm() > 1:
        if h.norm() % 2:
            return None
        h = h.exact_div(ONE_PLUS_I)
        k += 1
    return k


def torsion_field_degree(params: CurveParams, h) -> int:
    """[K(E_h) : K] for the ideal shapes whose degree is known in closed form.

    Multiples of the conductor give phi(h)/4. Powers (1+i)^k give 2^(k-1) when an
    odd prime divides D to an odd power.
    (D) with D odd gives phi(D). (M) with D = 2^a M, a in {1, 3}, gives phi(M).
    """
    h = h if isinstance(h, IdealRep) else IdealRep(as_gauss(h))
    D = params.D
    if divides(params.f_gen, h.gen):
        return euler_phi(h) // W
    k = _is_power_of_one_plus_i(h.gen)
    if k is not None:
        if not any(e % 2 for e in _odd_prime_factors(D).values()):
            raise InputError(
                "(1+i)^k degree needs an odd prime dividing D to an odd power",
                code="uncovered-shape",
            )
        return 2 ** (k - 1) if k else 1
    if D % 2 and normalize(h.gen) == normalize(GaussInt(abs(D), 0)):
        return euler_phi(h)
    a, m = 0, abs(D)
    while m % 2 == 0:
        m //= 2
        a += 1
    if a in (1, 3) and normalize(h.gen) == GaussInt(m, 0):
        return euler_phi(h)
    raise InputError(f"no closed-form degree for h = ({h.gen}) and D = {D}", code="uncovered-shape")


def ap_from_psi(params: CurveParams, p: int) -> int:
    """a_p = psi(P) + psi(conj P) for a split prime p of good reduction."""
    if p % 4 != 1 or not isprime(p):
        raise InputError(f"{p} is not a split prime", code="bad-prime")
    if params.D % p == 0:
        raise InputError(f"E_{params.D} has bad reduction at {p}", code="bad-reduction")
    pi = factor(GaussInt(p, 0))[0][0]
    a = psi(params, pi) + psi(params, pi.conj())
    if a.im != 0:
        raise AssertionError("trace of psi is not rational")
    return a.re
