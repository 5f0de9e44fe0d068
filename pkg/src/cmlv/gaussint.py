"""Exact arithmetic in the Gaussian integers Z[i].

Elements are immutable :class:`GaussInt` values with arbitrary-precision
components. Ideals are represented by a single generator (Z[i] is a PID).
"""

from __future__ import annotations

from dataclasses import dataclass
from functools import lru_cache
from math import gcd as igcd

from sympy import factorint

from .errors import InputError

__all__ = [
    "GaussInt",
    "IdealRep",
    "UNITS",
    "as_gauss",
    "norm",
    "gcd",
    "divides",
    "factor",
    "normalize",
    "normalize_primary",
    "is_primary",
    "euler_phi",
    "quartic_symbol",
    "ray_class_reps",
    "ResidueSystem",
]


@dataclass(frozen=True, slots=True)
class GaussInt:
    re: int
    im: int

    def __add__(self, other):
        other = as_gauss(other)
        return GaussInt(self.re + other.re, self.im + other.im)

    __radd__ = __add__

    def __sub__(self, other):
        other = as_gauss(other)
        return GaussInt(self.re - other.re, self.im - other.im)

    def __rsub__(self, other):
        return as_gauss(other) - self

    def __neg__(self):
        return GaussInt(-self.re, -self.im)

    def __mul__(self, other):
        other = as_gauss(other)
        a, b, c, d = self.re, self.im, other.re, other.im
        return GaussInt(a * c - b * d, a * d + b * c)

    __rmul__ = __mul__

    def __pow__(self, e: int):
        if e < 0:
            raise ValueError("negative exponent")
        result = ONE
        base = self
        while e:
            if e & 1:
                result = result * base
            base = base * base
            e >>= 1
        return result

    def conj(self) -> GaussInt:
        return GaussInt(self.re, -self.im)

    def norm(self) -> int:
        return self.re * self.re + self.im * self.im

    def __bool__(self):
        return bool(self.re or self.im)

    def divmod(self, other) -> tuple[GaussInt, GaussInt]:
        """Euclidean division with the quotient rounded to the nearest lattice point."""
        other = as_gauss(other)
        n = other.norm()
        if n == 0:
            raise ZeroDivisionError("division by zero Gaussian integer")
        num = self * other.conj()
        q = GaussInt(_round_div(num.re, n), _round_div(num.im, n))
        return q, self - q * other

    def __floordiv__(self, other):
        return self.divmod(other)[0]

    def __mod__(self, other):
        return self.divmod(other)[1]

    def exact_div(self, other) -> GaussInt:
        q, r = self.divmod(other)
        if r:
            raise ValueError(f"{other} does not divide {self}")
        return q

    def __complex__(self):
        return complex(self.re, self.im)

    def __str__(self):
        if self.im == 0:
            return str(self.re)
        if self.re == 0:
            return f"{self.im}i"
        sign = "+" if self.im > 0 else "-"
        return f"{self.re}{sign}{abs(self.im)}i"


ZERO = GaussInt(0, 0)
ONE = GaussInt(1, 0)
I = GaussInt(0, 1)
UNITS = (ONE, I, GaussInt(-1, 0), GaussInt(0, -1))
ONE_PLUS_I = GaussInt(1, 1)
_PRIMARY_MODULUS = GaussInt(2, 2)  # (1+i)^3 up to a unit


def _round_div(a: int, b: int) -> int:
    # nearest integer to a/b for b > 0, ties rounded up
    return (2 * a + b) // (2 * b)


def as_gauss(z) -> GaussInt:
    if isinstance(z, GaussInt):
        return z
    if isinstance(z, int):
        return GaussInt(z, 0)
    if isinstance(z, tuple) and len(z) == 2:
        return GaussInt(int(z[0]), int(z[1]))
    if isinstance(z, complex) and z.real.is_integer() and z.imag.is_integer():
        return GaussInt(int(z.real), int(z.imag))
    raise TypeError(f"cannot interpret {z!r} as a Gaussian integer")


def norm(z) -> int:
    return as_gauss(z).norm()


def divides(a, b) -> bool:
    """True iff a | b in Z[i]."""
    a, b = as_gauss(a), as_gauss(b)
    if not a:
        return not b
    return not (b % a)


def normalize(z) -> GaussInt:
    """First-quadrant associate: re > 0 and im >= 0 (0 maps to 0)."""
    z = as_gauss(z)
    if not z:
        return z
    for u in UNITS:
        w = z * u
        if w.re > 0 and w.im >= 0:
            return w
    raise AssertionError("unreachable")


def gcd(a, b) -> GaussInt:
    a, b = as_gauss(a), as_gauss(b)
    if not a and not b:
        raise InputError("gcd(0, 0) is undefined")
    while b:
        a, b = b, a % b
    return normalize(a)


def is_primary(z) -> bool:
    z = as_gauss(z)
    return z.norm() % 2 == 1 and not ((z - ONE) % _PRIMARY_MODULUS)


def normalize_primary(z) -> GaussInt:
    """The associate of an odd z congruent to 1 mod (1+i)^3."""
    z = as_gauss(z)
    if z.norm() % 2 == 0:
        raise InputError(f"{z} is not odd; no primary associate", code="even")
    for u in UNITS:
        w = u * z
        if is_primary(w):
            return w
    raise AssertionError("unreachable: every odd element has a primary associate")


@lru_cache(maxsize=4096)
def sqrt_minus_one(p: int) -> int:
    # p prime, p = 1 mod 4
    for c in range(2, p):
        if pow(c, (p - 1) // 2, p) == p - 1:
            return pow(c, (p - 1) // 4, p)
    raise AssertionError(f"no non-residue mod {p}")


def _split_rational_prime(p: int) -> list[GaussInt]:
    """Normalized Gaussian primes above the rational prime p."""
    if p == 2:
        return [ONE_PLUS_I]
    if p % 4 == 3:
        return [GaussInt(p, 0)]
    x = sqrt_minus_one(p)
    pi = gcd(GaussInt(p, 0), GaussInt(x, 1))
    return sorted([pi, normalize(pi.conj())], key=lambda q: (q.norm(), q.re))


def factor(z) -> list[tuple[GaussInt, int]]:
    """Prime factorization of z up to a unit, ordered by (norm, re)."""
    z = as_gauss(z)
    if not z:
        raise InputError("cannot factor 0", code="zero")
    out = []
    rest = z
    for p in sorted(factorint(z.norm())):
        for pi in _split_rational_prime(p):
            e = 0
            while True:
                q, r = rest.divmod(pi)
                if r:
                    break
                rest, e = q, e + 1
            if e:
                out.append((pi, e))
    if rest.norm() != 1:
        raise AssertionError(f"incomplete factorization of {z}: leftover {rest}")
    out.sort(key=lambda t: (t[0].norm(), t[0].re))
    return out


def unit_part(z, factors) -> GaussInt:
    """The unit u with z = u * prod(prime**e)."""
    prod = ONE
    for pi, e in factors:
        prod = prod * pi ** e
    return as_gauss(z).exact_div(prod)


@dataclass(frozen=True, slots=True)
class IdealRep:
    """A nonzero ideal of Z[i], stored by a fixed generator."""

    gen: GaussInt

    def __post_init__(self):
        object.__setattr__(self, "gen", as_gauss(self.gen))
        if not self.gen:
            raise InputError("the zero ideal is not allowed", code="zero")

    def __eq__(self, other):
        if not isinstance(other, IdealRep):
            return NotImplemented
        return normalize(self.gen) == normalize(other.gen)

    def __hash__(self):
        return hash(normalize(self.gen))

    def __mul__(self, other):
        return IdealRep(self.gen * other.gen)

    def norm(self) -> int:
        return self.gen.norm()

    def contains(self, z) -> bool:
        return divides(self.gen, z)


def _as_ideal(h) -> IdealRep:
    return h if isinstance(h, IdealRep) else IdealRep(as_gauss(h))


def euler_phi(h) -> int:
    """#(Z[i]/h)^x."""
    h = _as_ideal(h)
    phi = h.norm()
    for pi, _ in factor(h.gen):
        n = pi.norm()
        phi = phi // n * (n - 1)
    return phi


def _powmod(a: GaussInt, e: int, m: GaussInt) -> GaussInt:
    result = ONE % m
    a = a % m
    while e:
        if e & 1:
            result = (result * a) % m
        a = (a * a) % m
        e >>= 1
    return result


def quartic_symbol(a, pi) -> GaussInt:
    """Quartic residue character of a modulo the primary prime pi.

    Returns the fourth root of unity congruent to a^((N pi - 1)/4) mod pi.
    """
    a, pi = as_gauss(a), as_gauss(pi)
    n = pi.norm()
    if n % 2 == 0:
        raise InputError(f"modulus {pi} is even", code="even")
    if len(factor(pi)) != 1 or factor(pi)[0][1] != 1:
        raise InputError(f"{pi} is not a Gaussian prime", code="not-prime")
    if not is_primary(pi):
        raise InputError(f"{pi} is not primary", code="not-primary")
    if divides(pi, a):
        raise InputError(f"{a} is not coprime to {pi}", code="not-coprime")
    r = _powmod(a, (n - 1) // 4, pi)
    for u in UNITS:
        if divides(pi, r - u):
            return u
    raise AssertionError(f"{a}^((N{pi}-1)/4) is not a unit mod {pi}")


class ResidueSystem:
    """Canonical residues of Z[i] modulo the ideal (f).

    The lattice f*Z[i] has Hermite basis (g, h12), (0, N/g) in the (re, im)
    coordinates, with g = gcd(re f, im f); residues are x + yi with
    0 <= x < g and 0 <= y < N/g.
    """

    def __init__(self, f):
        f = as_gauss(f)
        if not f:
            raise InputError("modulus must be nonzero", code="zero")
        self.f = f
        a, b = f.re, f.im
        g, m, n = _xgcd(a, -b)  # m*a - n*(-b)... m*a + n*(-b) = g
        # m*(a, b) + n*(-b, a) = (g, m*b + n*a)
        self.g = abs(g)
        sign = 1 if g > 0 else -1
        self.h12 = sign * (m * b + n * a)
        self.h22 = f.norm() // self.g

    def key(self, z) -> tuple[int, int]:
        z = as_gauss(z)
        t = z.re // self.g
        x = z.re - t * self.g
        y = (z.im - t * self.h12) % self.h22
        return x, y

    def reduce(self, z) -> GaussInt:
        return GaussInt(*self.key(z))

    def __iter__(self):
        for x in range(self.g):
            for y in range(self.h22):
                yield GaussInt(x, y)

    def __len__(self):
        return self.g * self.h22


def _xgcd(a: int, b: int) -> tuple[int, int, int]:
    x0, x1, y0, y1 = 1, 0, 0, 1
    while b:
        q = a // b
        a, b = b, a - q * b
        x0, x1 = x1, x0 - q * x1
        y0, y1 = y1, y0 - q * y1
    return a, x0, y0


def _coprime(z: GaussInt, f: GaussInt) -> bool:
    if not z:
        return f.norm() == 1
    return igcd(z.norm(), f.norm()) == 1 or gcd(z, f).norm() == 1


def ray_class_reps(f) -> list[IdealRep]:
    """One generator per class of (Z[i]/f)^x modulo the units {1, i, -1, -i}.

    The representative of each class is its first residue in the sweep order
    of :class:`ResidueSystem`, so the output is deterministic.
    """
    f = _as_ideal(f)
    rs = ResidueSystem(f.gen)
    seen = set()
    reps = []
    for z in rs:
        k = rs.key(z)
        if k in seen or not _coprime(z, f.gen):
            continue
        for u in UNITS:
            seen.add(rs.key(u * z))
        reps.append(IdealRep(z))
    return reps
