"""c_p+ modulo p^k through an embedding Z[i] -> Z/p^k.

This is the scanning path for large p. The integer polynomial B_n is
generated directly with coefficients mod p^k; J, G and the power sums are
pushed through i -> r with r^2 = -1 mod p^k. Both square roots of -1 are
used and must give the same residue, because c_p+ is rational.
"""

from __future__ import annotations

import csv
import enum
import io
import logging
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass

import numpy as np
from sympy import isprime, primerange

from .curvefam import CurveParams
from .errors import InputError, VerificationError
from .gaussint import GaussInt, sqrt_minus_one

logger = logging.getLogger(__name__)

CSV_FIELDS = ["p", "ord", "unit_digit", "table_digit", "exceptional", "verdict"]


class Verdict(str, enum.Enum):
    SHA_TRIVIAL = "ShaTrivialAtP"
    SHA_FINITE = "ShaFiniteAtP"
    INCONCLUSIVE = "Inconclusive"

    def __str__(self):
        return self.value


@dataclass(frozen=True)
class ModCtx:
    p: int
    k: int
    modulus: int
    r: int
    r_conj: int


@dataclass(frozen=True)
class CpResult:
    p: int
    k: int
    ord: int | None = None
    saturated: bool = False
    residue: int | None = None  # c_p+ mod p^k
    unit_digit: int | None = None
    table_digit: int | None = None
    exceptional: bool = False
    verdict: Verdict | None = None
    m_p_bound_note: str = ""
    skip_reason: str | None = None
    anomalies: tuple[str, ...] = ()

    @property
    def skipped(self) -> bool:
        return self.skip_reason is not None

    def ord_text(self) -> str:
        if self.ord is None:
            return ""
        return f">={self.ord}" if self.saturated else str(self.ord)


def default_k(g: int) -> int:
    return g + 3


def _check_split_prime(p: int, D: int):
    if p < 5 or not isprime(p):
        raise InputError(f"{p} is not a prime >= 5", code="bad-prime")
    if p % 4 != 1:
        raise InputError(f"{p} is not 1 mod 4 (inert in Z[i])", code="inert-prime")
    if (2 * D) % p == 0:
        raise InputError(f"{p} divides 2D = {2 * D}", code="bad-reduction")


def make_ctx(p: int, k: int, params: CurveParams | None = None) -> ModCtx:
    """Lift the smaller square root of -1 mod p to p^k."""
    if k < 1:
        raise InputError("k must be at least 1", code="bad-k")
    if p < 5 or not isprime(p) or p % 4 != 1:
        raise InputError(f"{p} is not a prime = 1 mod 4", code="inert-prime")
    if params is not None and (2 * params.f_alpha.norm()) % p == 0:
        raise InputError(f"{p} divides 2 N(f alpha)", code="bad-reduction")
    r0 = sqrt_minus_one(p)
    r = min(r0, p - r0)
    q = p ** k
    e = 1
    while e < k:
        e = min(2 * e, k)
        m = p ** e
        r = (r - (r * r + 1) * pow(2 * r, -1, m)) % m
    assert (r * r + 1) % q == 0
    return ModCtx(p, k, q, r, (-r) % q)


def embed(z, ctx: ModCtx, conj: bool = False) -> int:
    z = z if isinstance(z, GaussInt) else GaussInt(int(z), 0)
    r = ctx.r_conj if conj else ctx.r
    return (z.re + z.im * r) % ctx.modulus


def bn_mod(D: int, n: int, q: int) -> np.ndarray:
    """Coefficients of B_n mod q (index = degree), as an object array.

    Uses the coefficient form of the recurrence:
    b'_e = (e+1) ((4e+2) b_(e-1) - (4e+6) D b_(e+1)), stepping n-1 -> n.
    """
    e = np.arange(n + 2, dtype=object)
    m1 = ((e + 1) * (4 * e + 2)) % q
    m2 = ((e + 1) * (4 * e + 6) * D) % q
    b = np.zeros(n + 2, dtype=object)  # one spare slot for b_(e+1)
    b[0] = 1 % q
    for j in range(1, n + 1):
        lo = j % 2  # B_j has exponents = j mod 2
        new = np.zeros(n + 2, dtype=object)
        idx = slice(lo, j + 1, 2)
        prev = np.zeros(j + 3, dtype=object)
        prev[1:j + 1] = b[:j]
        # prev[e] = b_(e-1) and prev[e+2] = b_(e+1)
        ev = np.arange(lo, j + 1, 2)
        new[idx] = (m1[idx] * prev[ev] - m2[idx] * prev[ev + 2]) % q
        b = new
    return b[: n + 1]


def _a_times_j_mod_g(bn, jv, gv, q: int):
    """Coefficients of B(X) J(X) mod G(X), all embedded mod q; G monic."""
    d = len(gv) - 1
    low = np.array(gv[:d], dtype=object)
    jarr = np.zeros(d, dtype=object)
    jarr[: len(jv)] = jv
    acc = np.zeros(d, dtype=object)
    for c in reversed(list(bn)):
        top = acc[d - 1]
        acc[1:] = acc[:-1].copy()
        acc[0] = 0
        if top:
            acc -= top * low
        if c:
            acc += c * jarr
        acc %= q
    return acc


def _embedded(bundle, ctx: ModCtx, conj: bool):
    jv = [embed(c, ctx, conj) for c in bundle.J.coeffs]
    gv = [embed(c, ctx, conj) for c in bundle.G.coeffs]
    sv = np.array([embed(c, ctx, conj) for c in bundle.power_sums], dtype=object)
    return jv, gv, sv


def _cp_residue(bundle, bn, ctx: ModCtx, conj: bool) -> int:
    params = bundle.params
    p, q = ctx.p, ctx.modulus
    jv, gv, sv = _embedded(bundle, ctx, conj)
    a = _a_times_j_mod_g(bn, jv, gv, q)
    xi = int(np.dot(a, sv) % q) * pow(bundle.J.denom, -1, q) % q
    fact = 1
    for t in range(2, p):
        fact = fact * t % q
    fa_p = pow(embed(params.f_alpha, ctx, conj), p, q)
    inv = pow(params.w * fact * fa_p % q, -1, q)
    return (-xi * inv) % q


def cp_residue(bundle, p: int, k: int) -> int:
    """c_p+ mod p^k, checked under both embeddings of Z[i]."""
    params = bundle.params
    _check_split_prime(p, params.D)
    ctx = make_ctx(p, k, params)
    bn = bn_mod(params.D, (p - 3) // 2, ctx.modulus)
    c1 = _cp_residue(bundle, bn, ctx, conj=False)
    c2 = _cp_residue(bundle, bn, ctx, conj=True)
    if c1 != c2:
        raise VerificationError(f"the two embeddings disagree at p={p}: {c1} vs {c2} (c_p+ not rational)")
    return c1


def verdict(ord: int, g: int, p: int, parity_ok: bool, good_ordinary_ok: bool) -> Verdict:
    if not parity_ok or ord >= g + 2:
        return Verdict.INCONCLUSIVE
    if ord == g and good_ordinary_ok:
        return Verdict.SHA_TRIVIAL
    return Verdict.SHA_FINITE


def good_ordinary(p: int, D: int) -> bool:
    """p > 5, split in Z[i] and prime to 6D."""
    return p > 5 and p % 4 == 1 and (6 * D) % p != 0


def result_from_residue(p: int, k: int, c: int, g: int, D: int, parity_ok: bool) -> CpResult:
    q = p ** k
    c %= q
    anomalies = []
    if c == 0:
        ord_, saturated = k, True
        anomalies.append(f"ord saturated: c_p+ = 0 mod {p}^{k}")
    else:
        ord_, t = 0, c
        while t % p == 0:
            t //= p
            ord_ += 1
        saturated = False
    unit = None if saturated else (c // p ** ord_) % p
    if ord_ < 2:
        table = None
        anomalies.append(f"ord = {ord_} < 2, no table digit")
    elif ord_ >= 3:
        table = 0
    else:
        table = (c // (p * p)) % p if k >= 3 else None
    if saturated and k < g + 2:
        v = Verdict.INCONCLUSIVE
    else:
        v = verdict(ord_, g, p, parity_ok, good_ordinary(p, D))
    note = f"s_p <= m_p, m_p >= {ord_}" if saturated else f"s_p <= m_p = {ord_}"
    return CpResult(
        p=p,
        k=k,
        ord=ord_,
        saturated=saturated,
        residue=c,
        unit_digit=unit,
        table_digit=table,
        exceptional=ord_ > g,
        verdict=v,
        m_p_bound_note=note,
        anomalies=tuple(anomalies),
    )


def cp_plus_mod(params: CurveParams, bundle, p: int, k: int | None = None, g: int = 2,
                parity_ok: bool = True) -> CpResult:
    if bundle.params != params:
        raise InputError(f"bundle is for D={bundle.params.D}, not D={params.D}", code="bundle-mismatch")
    k = default_k(g) if k is None else k
    c = cp_residue(bundle, p, k)
    return result_from_residue(p, k, c, g, params.D, parity_ok)


def _skip_reason(p: int, D: int) -> str | None:
    if (2 * D) % p == 0:
        return "not valid (p divides 2D)"
    return None


_WORKER_BUNDLE = None


def _init_worker(bundle):
    global _WORKER_BUNDLE
    _WORKER_BUNDLE = bundle


def _work(args):
    p, k, g, parity_ok = args
    b = _WORKER_BUNDLE
    return cp_plus_mod(b.params, b, p, k, g, parity_ok)


def scan(params: CurveParams, bundle, p_min: int, p_max: int, k: int | None = None, g: int = 2,
         parity_ok: bool = True, workers: int = 1) -> list[CpResult]:
    """All primes p = 1 mod 4 with p_min <= p <= p_max, ascending.

    Primes dividing 2D are returned as skipped entries.
    """
    k = default_k(g) if k is None else k
    if k < 1:
        raise InputError("k must be at least 1", code="bad-k")
    primes = [p for p in primerange(max(p_min, 5), p_max + 1) if p % 4 == 1]
    out: dict[int, CpResult] = {}
    todo = []
    for p in primes:
        reason = _skip_reason(p, params.D)
        if reason:
            out[p] = CpResult(p=p, k=k, skip_reason=reason)
        else:
            todo.append(p)
    if workers > 1 and len(todo) > 1:
        with ProcessPoolExecutor(workers, initializer=_init_worker, initargs=(bundle,)) as ex:
            for res in ex.map(_work, [(p, k, g, parity_ok) for p in todo]):
                out[res.p] = res
    else:
        for p in todo:
            out[p] = cp_plus_mod(params, bundle, p, k, g, parity_ok)
            logger.info("p=%s ord=%s", p, out[p].ord_text())
    return [out[p] for p in primes]


def _cell(x) -> str:
    return "" if x is None else str(x)


def results_to_csv(results) -> str:
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(CSV_FIELDS)
    for r in results:
        if r.skipped:
            w.writerow([r.p, "", "", "", "", r.skip_reason])
        else:
            w.writerow([r.p, r.ord_text(), _cell(r.unit_digit), _cell(r.table_digit),
                        str(r.exceptional).lower(), r.verdict.value])
    return buf.getvalue()
