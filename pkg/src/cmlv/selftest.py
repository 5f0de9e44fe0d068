"""The invariant matrix behind ``cmlv selftest``."""

from __future__ import annotations

import os
from dataclasses import dataclass, field

from sympy import primerange

from . import refdata
from .algprecomp import build_bundle, bundle_path, check_j_congruence, conjugate_points, get_bundle
from .curvefam import ap_from_psi, ap_point_count, make_params
from .errors import CmlvError
from .mpcomplex import PrecisionCtx
from .numoracle import xi_p_numeric
from .padicscan import cp_residue, scan
from .traceexact import bn_poly_exact, cp_plus_exact, newton_power_sums

SMOKE_D = (3, 5)
REFERENCE_D = (17, -14)


@dataclass
class Report:
    results: list = field(default_factory=list)  # (name, status, detail)

    def add(self, name, status, detail=""):
        self.results.append((name, status, detail))

    @property
    def ok(self) -> bool:
        return all(s != "FAIL" for _, s, _ in self.results)

    def lines(self):
        for name, status, detail in self.results:
            yield f"{status:4} {name}" + (f": {detail}" if detail else "")
        n_fail = sum(s == "FAIL" for _, s, _ in self.results)
        yield f"{len(self.results)} checks, {n_fail} failed"


def _check(report, name, fn):
    try:
        detail = fn()
    except (CmlvError, AssertionError, ArithmeticError) as exc:
        report.add(name, "FAIL", str(exc) or type(exc).__name__)
    else:
        report.add(name, "PASS", detail or "")


def _b13(D):
    b = bn_poly_exact(D, 13).coeffs
    want = [0] * 14
    for j, c in enumerate(refdata.B13_REDUCED[D]):
        want[2 * j + 1] = c * refdata.B13_COMMON_FACTOR
    assert list(b) == want, f"B_13 for D={D} differs from the reference polynomial"


def _psi_ap(D):
    params = make_params(D)
    for p in primerange(5, 200):
        if p % 4 == 1 and D % p:
            a, b = ap_from_psi(params, p), ap_point_count(D, p)
            assert a == b, f"p={p}: trace of psi {a} != point count {b}"


def _paths_agree(bundle, primes, k=3):
    for p in primes:
        c = cp_plus_exact(bundle, p)
        q = p ** k
        exact = c.numerator * pow(c.denominator, -1, q) % q
        mod = cp_residue(bundle, p, k)  # raises if the two embeddings disagree
        assert exact == mod, f"p={p}: exact {exact} != modular {mod} mod {p}^{k}"
        assert c.denominator % p, f"p={p}: negative valuation"
    return f"{len(primes)} primes"


def _power_sums(bundle):
    assert list(newton_power_sums(bundle.G).values) == bundle.power_sums, "stored power sums differ"


def _oracle(bundle, primes):
    prec = int(bundle.provenance.get("j_prec_bits", 1024))
    ctx = PrecisionCtx(prec)
    pts = conjugate_points(bundle.params, ctx)
    for p in primes:
        rep = xi_p_numeric(bundle.params, p, ctx, bundle=bundle, points=pts)
        assert rep.matched, f"p={p}: numeric trace does not round to the exact trace"
        assert rep.theta_numeric != 0, f"p={p}: Theta_p = 0"
    return f"{len(primes)} primes"


def _table(bundle, ref):
    D = bundle.params.D
    for r in scan(bundle.params, bundle, 5, 100):
        if r.skipped:
            assert r.p not in ref, f"p={r.p} skipped but has a reference digit"
            continue
        assert r.table_digit == ref[r.p], f"D={D} p={r.p}: {r.table_digit} != {ref[r.p]}"


def _small_primes(D, limit):
    return [p for p in primerange(5, limit + 1) if p % 4 == 1 and (2 * D) % p]


def run_selftest(cache=None, full=False) -> Report:
    report = Report()
    for D in REFERENCE_D:
        _check(report, f"b13-reference D={D}", lambda D=D: _b13(D))
    for D in SMOKE_D + REFERENCE_D:
        _check(report, f"psi-vs-point-count D={D}", lambda D=D: _psi_ap(D))
    bundles = {}
    for D in SMOKE_D:
        try:
            bundles[D] = build_bundle(D)
        except CmlvError as exc:
            report.add(f"bundle D={D}", "FAIL", str(exc))
    for D in REFERENCE_D:
        if full or os.path.exists(bundle_path(D, cache)):
            try:
                bundles[D] = get_bundle(D, cache, build=full)
            except CmlvError as exc:
                report.add(f"bundle D={D}", "FAIL", str(exc))
        else:
            report.add(f"bundle D={D}", "SKIP", "not cached; run precompute or selftest --full")
    for D, b in bundles.items():
        _check(report, f"j-congruence D={D}", lambda b=b: check_j_congruence(b.params.D, b.G, b.J))
        _check(report, f"power-sums D={D}", lambda b=b: _power_sums(b))
        _check(report, f"exact-vs-modular+dual-embedding D={D}",
               lambda b=b, D=D: _paths_agree(b, _small_primes(D, 101)))
        _check(report, f"oracle D={D}", lambda b=b, D=D: _oracle(b, _small_primes(D, 41)))
    refs = {17: refdata.DIGITS_D17, -14: refdata.DIGITS_DM14}
    for D in REFERENCE_D:
        if D in bundles:
            _check(report, f"table-reference p<100 D={D}", lambda D=D: _table(bundles[D], refs[D]))
    return report
