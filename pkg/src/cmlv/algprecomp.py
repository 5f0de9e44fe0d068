"""Exact algebraic data for E_D built from numeric conjugates.

For u = wp(Omega_inf / f, L) this module produces the minimal polynomial
G(X) of u over Z[i], a polynomial J(X) over Z[i][1/f] with
wp'(Omega_inf / f, L) = J(u), and the Newton power sums of G. Everything is
rounded from high-precision numerics and then certified by exact identities,
the strongest being J^2 = 4X^3 - 4DX mod G.
"""

from __future__ import annotations

import logging
import os
from dataclasses import dataclass, field
from math import gcd as igcd

import mpmath
from mpmath import mpc, mpf

from .curvefam import CurveParams, make_params, psi
from .errors import BundleError, BundleNotFoundError, PrecisionError, VerificationError
from .gaussint import GaussInt, ray_class_reps
from .mpcomplex import PrecisionCtx, lemniscate_period, wp_and_prime

logger = logging.getLogger(__name__)

FORMAT_HEADER = "cmlv-bundle v1"
ROUND_TOL_BITS = 32
MAX_PREC_BITS = 2 ** 20
MAX_DENOM_EXPONENT = 4096
PSI_CONVENTION = "primary-generator, conj quartic symbol"


@dataclass(frozen=True)
class ZiPoly:
    """(1/denom) * sum(coeffs[j] X^j) with Gaussian integer coefficients."""

    coeffs: tuple[GaussInt, ...]
    denom: int = 1

    def __post_init__(self):
        coeffs = tuple(self.coeffs)
        while len(coeffs) > 1 and not coeffs[-1]:
            coeffs = coeffs[:-1]
        object.__setattr__(self, "coeffs", coeffs)
        if self.denom <= 0:
            raise ValueError("denominator must be positive")

    @property
    def degree(self) -> int:
        if len(self.coeffs) == 1 and not self.coeffs[0]:
            return -1
        return len(self.coeffs) - 1

    def is_monic(self) -> bool:
        return self.denom == 1 and self.coeffs[-1] == GaussInt(1, 0)

    def conj(self) -> ZiPoly:
        return ZiPoly(tuple(c.conj() for c in self.coeffs), self.denom)

    def negate_variable(self) -> ZiPoly:
        """The polynomial P(-X)."""
        return ZiPoly(tuple(c if j % 2 == 0 else -c for j, c in enumerate(self.coeffs)), self.denom)

    def __call__(self, x):
        acc = mpc(0)
        for c in reversed(self.coeffs):
            acc = acc * x + mpc(c.re, c.im)
        return acc / self.denom


@dataclass
class PrecompBundle:
    params: CurveParams
    G: ZiPoly
    J: ZiPoly
    power_sums: list[GaussInt]
    provenance: dict = field(default_factory=dict)

    def __eq__(self, other):
        if not isinstance(other, PrecompBundle):
            return NotImplemented
        return (
            self.params == other.params
            and self.G == other.G
            and self.J == other.J
            and self.power_sums == other.power_sums
        )


# --- numerics ---------------------------------------------------------------


def period_scalings(params: CurveParams, ctx: PrecisionCtx) -> tuple[mpc, mpc]:
    """(Omega_inf^-2, Omega_inf^-3) where L = Omega_inf Z[i].

    Omega_inf+ = Omega / D^(1/4) for D > 0 and Omega / (-D/4)^(1/4) for D < 0,
    and Omega_inf = omega_sign * Omega_inf+ / alpha.
    """
    D = params.D
    omega = lemniscate_period(ctx)
    if D > 0:
        inv = mpmath.root(mpf(D), 4) / omega
    else:
        inv = mpmath.root(mpf(-D) / 4, 4) / omega * mpc(1, 1)
    inv = mpc(inv) * params.omega_sign
    inv2 = inv * inv
    return inv2, inv2 * inv


def _reduced_point(ps: GaussInt, f: GaussInt) -> mpc:
    # exact reduction of ps / f into [-1/2, 1/2)^2
    n = f.norm()
    num = ps * f.conj()
    a = (num.re + n // 2) % n - n // 2
    b = (num.im + n // 2) % n - n // 2
    return mpc(mpf(a) / n, mpf(b) / n)


def conjugate_points(params: CurveParams, ctx: PrecisionCtx) -> list[tuple[mpc, mpc]]:
    """(u_b, wp'_b) = (wp, wp')(psi(b) Omega_inf / f, L) for every ray class b mod f.

    Computed on Z[i] by homogeneity: wp(psi(b) Omega_inf / f, L) equals
    Omega_inf^-2 wp(psi(b)/f, Z[i]), and wp' scales by Omega_inf^-3.
    """
    with mpmath.workprec(ctx.prec_bits + 64):
        s2, s3 = period_scalings(params, ctx)
        pts = []
        for b in ray_class_reps(params.f_gen):
            z = _reduced_point(psi(params, b), params.f_gen)
            x, y = wp_and_prime(z, ctx)
            pts.append((s2 * x, s3 * y))
    if len(pts) != params.d:
        raise VerificationError(f"expected {params.d} conjugates, got {len(pts)}")
    return pts


def _poly_from_roots(roots) -> list[mpc]:
    c = [mpc(1)]
    for r in roots:
        nxt = [mpc(0)] * (len(c) + 1)
        for k, a in enumerate(c):
            nxt[k + 1] += a
            nxt[k] -= r * a
        c = nxt
    return c


def _round_gauss(z: mpc) -> tuple[GaussInt, mpf]:
    a, b = mpmath.nint(z.real), mpmath.nint(z.imag)
    err = max(abs(z.real - a), abs(z.imag - b))
    return GaussInt(int(a), int(b)), err


def _round_poly(coeffs) -> tuple[tuple[GaussInt, ...], mpf]:
    out, worst = [], mpf(0)
    for c in coeffs:
        g, err = _round_gauss(c)
        out.append(g)
        worst = max(worst, err)
    return tuple(out), worst


def _log2(x) -> int:
    return int(mpmath.floor(mpmath.log(x, 2))) if x > 0 else -(10 ** 9)


def initial_precision(d: int) -> int:
    return 256 + 16 * d


def _g_at(params, prec):
    ctx = PrecisionCtx(prec)
    pts = conjugate_points(params, ctx)
    with mpmath.workprec(prec + 64):
        coeffs, err = _round_poly(_poly_from_roots([u for u, _ in pts]))
    return pts, coeffs, err


def build_G(params: CurveParams, start_bits: int | None = None, max_bits: int = MAX_PREC_BITS):
    """Monic G(X) = prod_b (X - u_b), rounded to Z[i][X] and certified.

    Returns (G, levels, provenance) where levels maps each of the last two
    precisions to its conjugate points. Rounding is accepted only when every coefficient is within
    2^-32 of Z[i] at two successive precisions and both roundings agree.
    """
    prec = start_bits or initial_precision(params.d)
    tol = mpf(2) ** -ROUND_TOL_BITS
    pts, prev, err = _g_at(params, prec)
    while True:
        if 2 * prec > max_bits:
            raise PrecisionError(
                f"G for D={params.D} not certified below {max_bits} bits (worst rounding error {err})"
            )
        prec2 = 2 * prec
        pts2, coeffs2, err2 = _g_at(params, prec2)
        logger.info("G for D=%s: rounding error 2^%s at %s bits, 2^%s at %s bits",
                    params.D, _log2(err), prec, _log2(err2), prec2)
        if err < tol and err2 < tol and prev == coeffs2:
            break
        prec, pts, prev, err = prec2, pts2, coeffs2, err2
    G = ZiPoly(coeffs2)
    if not G.is_monic() or G.degree != params.d:
        raise VerificationError(f"G is not monic of degree {params.d}")
    with mpmath.workprec(64):
        mags = [mpmath.sqrt(c.norm()) for c in G.coeffs]
    worst = mpf(0)
    for u, _ in pts2:
        with mpmath.workprec(prec2 + 64):
            r = abs(G(u))
        with mpmath.workprec(64):
            au, scale = abs(u), mpf(0)
            for m in reversed(mags):
                scale = scale * au + m
            worst = max(worst, r / scale)
    if worst > tol:
        raise PrecisionError(f"G(u_b) relative residual {worst} exceeds 2^-{ROUND_TOL_BITS}")
    provenance = {
        "prec_bits": prec2,
        "g_start_bits": start_bits or initial_precision(params.d),
        "g_round_err_log2": _log2(err2),
        "g_residual_log2": _log2(worst),
    }
    return G, {prec: pts, prec2: pts2}, provenance


def _interpolate(G: ZiPoly, pts) -> list[mpc]:
    """Coefficients of the degree < d polynomial through (u_b, wp'_b)."""
    d = G.degree
    gc = [mpc(c.re, c.im) for c in G.coeffs]
    J = [mpc(0)] * d
    for u, y in pts:
        q = [mpc(0)] * d  # G / (X - u)
        acc = mpc(0)
        for k in range(d, 0, -1):
            acc = acc * u + gc[k]
            q[k - 1] = acc
        dg = mpc(0)  # G'(u) = q(u)
        for k in range(d - 1, -1, -1):
            dg = dg * u + q[k]
        s = y / dg
        for k in range(d):
            J[k] += s * q[k]
    return J


def _recognize_denominator(J, base: int, prec: int) -> tuple[tuple[GaussInt, ...], int, mpf]:
    """Smallest t with base^t * J within 2^-32 of Z[i][X]; returns the reduced fraction."""
    tol = mpf(2) ** -ROUND_TOL_BITS
    size = max(_log2(abs(c)) for c in J if c != 0) if any(c != 0 for c in J) else 0
    t = 0
    while t <= MAX_DENOM_EXPONENT:
        den = base ** t
        if den.bit_length() + size + 2 * ROUND_TOL_BITS > prec:
            break
        dm = mpf(den)
        nums, err = _round_poly([c * dm for c in J])
        if err < tol:
            content = 0
            for c in nums:
                content = igcd(content, igcd(c.re, c.im))
            g = igcd(content, den) if content else den
            return tuple(GaussInt(c.re // g, c.im // g) for c in nums), den // g, err
        t += 1
    raise PrecisionError(f"J coefficients do not round in Z[i][1/{base}] at {prec} bits")


def build_J(params: CurveParams, G: ZiPoly, pts, prec: int) -> tuple[ZiPoly, dict]:
    """J with J(u_b) = wp'_b for all b, in Z[i][1/f][X], certified exactly."""
    base = params.f_gen.norm()
    with mpmath.workprec(prec + 64):
        Jn = _interpolate(G, pts)
        nums, den, err = _recognize_denominator(Jn, base, prec)
        J = ZiPoly(nums, den)
        worst = mpf(0)
        for u, y in pts:
            worst = max(worst, abs(J(u) - y) / max(abs(y), mpf(1)))
    tol = mpf(2) ** -ROUND_TOL_BITS
    if worst > tol:
        raise PrecisionError(f"J(u_b) residual {worst} exceeds 2^-{ROUND_TOL_BITS}")
    if J.degree > params.d - 1:
        raise VerificationError("deg J >= d")
    check_j_congruence(params.D, G, J)
    return J, {"j_round_err_log2": _log2(err), "j_residual_log2": _log2(worst)}


# --- exact polynomial helpers ------------------------------------------------


def _gmul(a, b):
    return (a[0] * b[0] - a[1] * b[1], a[0] * b[1] + a[1] * b[0])


def poly_mulmod(A: list, B: list, G: ZiPoly) -> list:
    """A * B mod the monic G over Z[i]; polynomials are lists of (re, im) pairs."""
    d = G.degree
    g = [(c.re, c.im) for c in G.coeffs]
    prod = [[0, 0] for _ in range(max(len(A) + len(B) - 1, d))]
    for i, a in enumerate(A):
        if a == (0, 0):
            continue
        ar, ai = a
        for j, (br, bi) in enumerate(B):
            cell = prod[i + j]
            cell[0] += ar * br - ai * bi
            cell[1] += ar * bi + ai * br
    for k in range(len(prod) - 1, d - 1, -1):
        cr, ci = prod[k]
        if cr == 0 and ci == 0:
            continue
        off = k - d
        for j in range(d):
            gr, gi = g[j]
            cell = prod[off + j]
            cell[0] -= cr * gr - ci * gi
            cell[1] -= cr * gi + ci * gr
        prod[k] = [0, 0]
    return [tuple(c) for c in prod[:d]]


def check_j_congruence(D: int, G: ZiPoly, J: ZiPoly) -> None:
    """Exact test of J^2 = 4X^3 - 4DX mod G (scaled by denom^2)."""
    if not G.is_monic():
        raise VerificationError("G must be monic")
    Jp = [(c.re, c.im) for c in J.coeffs]
    lhs = poly_mulmod(Jp, Jp, G)
    s = J.denom ** 2
    rhs = [(0, 0)] * max(4, G.degree)
    rhs[1] = (-4 * D * s, 0)
    rhs[3] = (4 * s, 0)
    rhs = poly_mulmod(rhs, [(1, 0)], G)
    if lhs != rhs:
        raise VerificationError(f"J^2 != 4X^3 - 4DX mod G for D={D}")


# --- bundle -----------------------------------------------------------------


def build_bundle(D_or_params, start_bits: int | None = None) -> PrecompBundle:
    from .traceexact import newton_power_sums

    params = D_or_params if isinstance(D_or_params, CurveParams) else make_params(D_or_params)
    G, levels, prov = build_G(params, start_bits=start_bits)
    for prec in sorted(levels):
        try:
            J, jprov = build_J(params, G, levels[prec], prec)
            break
        except PrecisionError as exc:
            logger.info("J at %s bits: %s", prec, exc)
    else:
        raise PrecisionError(f"J for D={params.D} not recognized at {max(levels)} bits")
    jprov["j_prec_bits"] = prec
    prov.update(jprov)
    prov["psi_convention"] = PSI_CONVENTION
    prov["omega_sign"] = params.omega_sign
    s = newton_power_sums(G).values
    bundle = PrecompBundle(params, G, J, list(s), prov)
    verify_bundle(bundle)
    return bundle


def verify_bundle(bundle: PrecompBundle) -> None:
    p = bundle.params
    if bundle.G.degree != p.d or not bundle.G.is_monic():
        raise VerificationError(f"G is not monic of degree {p.d}")
    if bundle.J.degree > p.d - 1:
        raise VerificationError("deg J >= d")
    if len(bundle.power_sums) != p.d or bundle.power_sums[0] != GaussInt(p.d, 0):
        raise VerificationError("power sums must have length d and s_0 = d")
    check_j_congruence(p.D, bundle.G, bundle.J)


def _write_poly(lines, name, poly: ZiPoly):
    lines.append(name)
    for j, c in enumerate(poly.coeffs):
        lines.append(f"{j} {c.re} {c.im}")
    lines.append(f"denom {poly.denom}")


def save_bundle(bundle: PrecompBundle, path) -> None:
    p = bundle.params
    lines = [
        FORMAT_HEADER,
        f"D {p.D}",
        f"f_gen {p.f_gen.re} {p.f_gen.im}",
        f"alpha {p.alpha.re} {p.alpha.im}",
        f"d {p.d}",
    ]
    _write_poly(lines, "G", bundle.G)
    _write_poly(lines, "J", bundle.J)
    lines.append("s")
    for j, c in enumerate(bundle.power_sums):
        lines.append(f"{j} {c.re} {c.im}")
    for key in sorted(bundle.provenance):
        val = str(bundle.provenance[key]).replace("\n", " ")
        lines.append(f"provenance {key} {val}")
    lines.append("end")
    tmp = f"{path}.tmp"
    with open(tmp, "w", encoding="ascii") as fh:
        fh.write("\n".join(lines) + "\n")
    os.replace(tmp, path)


def _parse_triples(lines, i, count=None):
    out = []
    while i < len(lines):
        parts = lines[i].split()
        if len(parts) != 3 or not parts[0].lstrip("-").isdigit():
            break
        j, re, im = (int(x) for x in parts)
        if j != len(out):
            raise BundleError(f"coefficient index {j} out of order at line {i + 1}")
        out.append(GaussInt(re, im))
        i += 1
    return out, i


def _expect(lines, i, key):
    if i >= len(lines) or lines[i].split()[0] != key:
        raise BundleError(f"expected '{key}' at line {i + 1}")
    return lines[i].split()[1:]


def load_bundle(path) -> PrecompBundle:
    if not os.path.exists(path):
        raise BundleNotFoundError(f"bundle file not found: {path}")
    with open(path, encoding="ascii") as fh:
        lines = [ln.strip() for ln in fh if ln.strip()]
    if not lines or lines[0] != FORMAT_HEADER:
        head = lines[0] if lines else "<empty>"
        raise BundleError(f"unsupported bundle header {head!r}; expected {FORMAT_HEADER!r}")
    try:
        D = int(_expect(lines, 1, "D")[0])
        f_gen = GaussInt(*map(int, _expect(lines, 2, "f_gen")))
        alpha = GaussInt(*map(int, _expect(lines, 3, "alpha")))
        d = int(_expect(lines, 4, "d")[0])
        params = make_params(D)
        if (params.f_gen, params.alpha, params.d) != (f_gen, alpha, d):
            raise BundleError(f"bundle header does not match the parameters of D={D}")
        _expect(lines, 5, "G")
        g, i = _parse_triples(lines, 6)
        gden = int(_expect(lines, i, "denom")[0])
        _expect(lines, i + 1, "J")
        j, i = _parse_triples(lines, i + 2)
        jden = int(_expect(lines, i, "denom")[0])
        _expect(lines, i + 1, "s")
        s, i = _parse_triples(lines, i + 2)
        prov = {}
        while i < len(lines) and lines[i].startswith("provenance "):
            _, key, *rest = lines[i].split(" ", 2) + [""]
            val = rest[0]
            prov[key] = int(val) if val.lstrip("-").isdigit() else val
            i += 1
        if i >= len(lines) or lines[i] != "end":
            raise BundleError("missing 'end' line (truncated bundle?)")
    except (ValueError, IndexError) as exc:
        raise BundleError(f"malformed bundle {path}: {exc}") from exc
    if gden != 1:
        raise BundleError("G must have denominator 1")
    bundle = PrecompBundle(params, ZiPoly(tuple(g), gden), ZiPoly(tuple(j), jden), s, prov)
    try:
        verify_bundle(bundle)
    except VerificationError as exc:
        raise BundleError(f"bundle {path} failed verification: {exc}") from exc
    return bundle


# --- cache ------------------------------------------------------------------

CACHE_ENV = "CMLV_CACHE"
DEFAULT_CACHE_DIR = ".cmlv-cache"


def cache_dir(override=None) -> str:
    """Bundle directory: explicit override, then $CMLV_CACHE, then ./.cmlv-cache."""
    return str(override or os.environ.get(CACHE_ENV) or DEFAULT_CACHE_DIR)


def bundle_path(D: int, directory=None) -> str:
    return os.path.join(cache_dir(directory), f"bundle_D{int(D)}.txt")


def get_bundle(D: int, directory=None, build: bool = False) -> PrecompBundle:
    """Load the cached bundle for D, building and saving it first if allowed."""
    path = bundle_path(D, directory)
    if os.path.exists(path):
        return load_bundle(path)
    if not build:
        raise BundleNotFoundError(f"no bundle for D={D} at {path}; run 'cmlv precompute --d-param {D}'")
    bundle = build_bundle(D)
    os.makedirs(os.path.dirname(path) or ".", exist_ok=True)
    save_bundle(bundle, path)
    return bundle
