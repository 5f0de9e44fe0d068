"""Command line interface: ``cmlv precompute | cp | scan | verdict | selftest``."""

from __future__ import annotations

import argparse
import logging
import os
import sys
import time

from sympy import isprime

from . import __version__
from .algprecomp import bundle_path, build_bundle, cache_dir, get_bundle, save_bundle
from .curvefam import make_params
from .errors import CmlvError, InputError, VerificationError
from .padicscan import cp_plus_mod, default_k, good_ordinary, results_to_csv, scan, verdict

EXIT_OK = 0
EXIT_ANOMALY = 6


def _add_common(p, rank=True):
    p.add_argument("--d-param", type=int, required=True, metavar="D", help="curve y^2 = x^3 - D x")
    p.add_argument("--cache-dir", default=None, help="bundle directory (default $CMLV_CACHE or ./.cmlv-cache)")
    if rank:
        p.add_argument("--rank", type=int, default=2, metavar="G", help="rank g of E over Q (default 2)")
        p.add_argument("--k", type=int, default=None, help="work mod p^k (default rank + 3)")
        p.add_argument("--parity-ok", action="store_true",
                       help="assert the rank parity condition needed for Sha verdicts")
        p.add_argument("--build", action="store_true", help="build and cache the bundle if it is missing")


def build_parser() -> argparse.ArgumentParser:
    ap = argparse.ArgumentParser(prog="cmlv", description="Normalized Hecke L-values of y^2 = x^3 - Dx.")
    ap.add_argument("--version", action="version", version=f"%(prog)s {__version__}")
    ap.add_argument("-v", "--verbose", action="store_true")
    sub = ap.add_subparsers(dest="command", required=True)

    p = sub.add_parser("precompute", help="build, verify and save the bundle for D")
    _add_common(p, rank=False)
    p.add_argument("--out", default=None, help="bundle path (default: cache directory)")

    p = sub.add_parser("cp", help="c_p+ for a single prime")
    _add_common(p)
    p.add_argument("--p", type=int, required=True)
    p.add_argument("--exact", action="store_true", help="also run the exact rational path (p <= 101)")

    p = sub.add_parser("scan", help="table of c_p+ p^-2 mod p over a prime range")
    _add_common(p)
    p.add_argument("--pmin", type=int, default=5)
    p.add_argument("--pmax", type=int, required=True, help="inclusive upper bound")
    p.add_argument("--format", choices=("table", "csv"), default="table")
    p.add_argument("--threads", type=int, default=1, help="worker processes")

    p = sub.add_parser("verdict", help="Sha verdict from a known valuation")
    p.add_argument("--ord", type=int, required=True)
    p.add_argument("--rank", type=int, default=2)
    p.add_argument("--p", type=int, required=True)
    p.add_argument("--d-param", type=int, default=None, metavar="D")
    p.add_argument("--parity-ok", action="store_true")

    p = sub.add_parser("selftest", help="run the invariant matrix")
    p.add_argument("--cache-dir", default=None)
    p.add_argument("--full", action="store_true", help="build missing D=17 and D=-14 bundles")
    return ap


def _check_config(args):
    if getattr(args, "rank", 0) < 0:
        raise InputError("--rank must be nonnegative")
    if getattr(args, "k", None) is not None and args.k < 1:
        raise InputError("--k must be at least 1")


def cmd_precompute(args) -> int:
    params = make_params(args.d_param)
    t0 = time.time()
    bundle = build_bundle(params)
    path = args.out or bundle_path(params.D, args.cache_dir)
    os.makedirs(os.path.dirname(os.path.abspath(path)), exist_ok=True)
    save_bundle(bundle, path)
    pv = bundle.provenance
    print(f"D = {params.D}  f = {params.f_gen}  f*alpha = {params.f_alpha}  d = {params.d}")
    print(f"G: monic, degree {bundle.G.degree}, rounding error 2^{pv['g_round_err_log2']} at {pv['prec_bits']} bits")
    print(f"J: degree {bundle.J.degree}, denominator {bundle.J.denom.bit_length()} bits, J^2 = 4X^3-4DX mod G verified")
    print(f"saved {path} ({time.time() - t0:.1f}s)")
    return EXIT_OK


def _load(args):
    params = make_params(args.d_param)
    return params, get_bundle(params.D, args.cache_dir, build=args.build)


def cmd_cp(args) -> int:
    params, bundle = _load(args)
    k = default_k(args.rank) if args.k is None else args.k
    r = cp_plus_mod(params, bundle, args.p, k, args.rank, args.parity_ok)
    print(f"p = {r.p}  k = {r.k}")
    print(f"c_p+ mod p^k = {r.residue}")
    print(f"ord = {r.ord_text()}")
    print(f"unit digit = {'' if r.unit_digit is None else r.unit_digit}")
    print(f"table digit = {'' if r.table_digit is None else r.table_digit}")
    print(f"exceptional = {str(r.exceptional).lower()}")
    print(f"verdict = {r.verdict.value}  ({r.m_p_bound_note})")
    if args.exact:
        from .traceexact import cp_plus_exact

        c = cp_plus_exact(bundle, args.p)
        print(f"exact c_p+ = {c}")
        q = args.p ** k
        if c.numerator * pow(c.denominator, -1, q) % q != r.residue:
            raise VerificationError("exact and modular paths disagree")
    for a in r.anomalies:
        print(f"anomaly: {a}", file=sys.stderr)
    return EXIT_ANOMALY if r.anomalies else EXIT_OK


def format_table(results, D: int) -> str:
    lines = [f"p\tD={D}"]
    for r in results:
        if r.skipped:
            lines.append(f"{r.p}\t{r.skip_reason}")
            continue
        cell = "-" if r.table_digit is None else str(r.table_digit)
        notes = []
        if r.exceptional:
            notes.append(f"exceptional, ord {r.ord_text()}, unit {r.unit_digit}")
        notes.extend(f"anomaly: {a}" for a in r.anomalies)
        lines.append(f"{r.p}\t{cell}" + (f"\t{'; '.join(notes)}" if notes else ""))
    return "\n".join(lines) + "\n"


def cmd_scan(args) -> int:
    if args.pmin < 1 or args.pmax < 1:
        raise InputError("range bounds must be positive")
    if args.threads < 1:
        raise InputError("--threads must be at least 1")
    params, bundle = _load(args)
    k = default_k(args.rank) if args.k is None else args.k
    results = scan(params, bundle, args.pmin, args.pmax, k, args.rank, args.parity_ok, args.threads)
    if args.format == "csv":
        sys.stdout.write(results_to_csv(results))
    else:
        sys.stdout.write(format_table(results, params.D))
    return EXIT_ANOMALY if any(r.anomalies for r in results) else EXIT_OK


def cmd_verdict(args) -> int:
    if args.ord < 0 or args.rank < 0:
        raise InputError("--ord and --rank must be nonnegative")
    if args.p < 3 or not isprime(args.p):
        raise InputError(f"{args.p} is not an odd prime", code="bad-prime")
    D = args.d_param if args.d_param is not None else 1
    good = good_ordinary(args.p, D)
    v = verdict(args.ord, args.rank, args.p, args.parity_ok, good)
    print(v.value)
    if args.ord > args.rank:
        print(f"exceptional: ord {args.ord} > g = {args.rank}")
    return EXIT_OK


def cmd_selftest(args) -> int:
    from .selftest import run_selftest

    report = run_selftest(cache=cache_dir(args.cache_dir), full=args.full)
    for line in report.lines():
        print(line)
    return EXIT_OK if report.ok else VerificationError.exit_code


COMMANDS = {
    "precompute": cmd_precompute,
    "cp": cmd_cp,
    "scan": cmd_scan,
    "verdict": cmd_verdict,
    "selftest": cmd_selftest,
}


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    logging.basicConfig(level=logging.INFO if args.verbose else logging.WARNING,
                        format="%(levelname)s %(name)s: %(message)s")
    try:
        _check_config(args)
        return COMMANDS[args.command](args)
    except CmlvError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return exc.exit_code


if __name__ == "__main__":
    sys.exit(main())
