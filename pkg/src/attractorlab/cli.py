"""Command-line front end.

Subcommands cover the full pipeline: exact coefficients (gen-poly), zero
finding (roots), winner grids (phase-map), boundary tracing (trace),
assembled attractors (attractor), the cross-module invariant suite
(verify), estimate-vs-exact reports (asymptotics), and single special
function evaluations (dilog).

Exit codes: 0 success, 1 validation error, 2 computational failure, and 3
when verify finds an invariant violation.  Outputs are deterministic for a
fixed configuration: no timestamps, fixed orderings, sorted JSON keys.
"""

from __future__ import annotations

import argparse
import configparser
import json
import os
import sys

import mpmath as mp

from . import curves as curves_mod
from . import harness as harness_mod
from . import phases as phases_mod
from . import roots as roots_mod
from .dilog import catalan, clausen2, dilog
from .errors import (
    AttractorlabError,
    DomainError,
    GcdError,
    UnsupportedFamily,
)
from .partitions import (
    ExponentSequence,
    generate,
    generate_single,
    tail_series,
    write_coefficients_csv,
    write_coefficients_json,
)
from .precision import DEFAULT_POLICY, PrecisionPolicy

__all__ = ["main", "build_parser", "load_config"]

_CONFIG_KEYS = {
    "family",
    "a",
    "p",
    "parts",
    "n",
    "max_n",
    "weights",
    "bits",
    "tol",
    "resolution",
    "boundary_tol",
    "out",
    "format",
    "threads",
}


def load_config(path: str) -> dict:
    """Flat key=value config with optional [sections]; unknown keys rejected."""
    parser = configparser.ConfigParser()
    with open(path, "r", encoding="utf-8") as fh:
        text = fh.read()
    # allow a bare top-level section
    if not text.lstrip().startswith("["):
        text = "[top]\n" + text
    parser.read_string(text)
    merged = {}
    for section in parser.sections():
        for key, value in parser.items(section):
            if key not in _CONFIG_KEYS:
                raise DomainError("unknown config key: %s" % key)
            merged[key] = value
    return merged


def _family_from(args) -> ExponentSequence:
    kind = (args.family or "").strip().lower()
    if kind in ("all", "all-parts", "allparts"):
        return ExponentSequence.all_parts()
    if kind in ("odd", "odd-parts"):
        return ExponentSequence.odd_parts()
    if kind == "residue":
        if args.a is None or args.p is None:
            raise DomainError("residue family needs --a and --p")
        return ExponentSequence.residue(int(args.a), int(args.p))
    if kind in ("quadratic", "quadratic-units"):
        if args.p is None:
            raise DomainError("quadratic-units family needs --p")
        return ExponentSequence.quadratic_units(int(args.p))
    if kind == "explicit":
        if not args.parts:
            raise DomainError("explicit family needs --parts")
        parts = tuple(int(x) for x in args.parts.split(",") if x.strip())
        return ExponentSequence.explicit(parts)
    raise DomainError("unknown family: %r" % (args.family,))


def _policy_from(args) -> PrecisionPolicy:
    bits = int(args.bits) if getattr(args, "bits", None) else DEFAULT_POLICY.bits
    if getattr(args, "tol", None):
        return PrecisionPolicy(bits=bits, tol=float(args.tol))
    if bits == DEFAULT_POLICY.bits:
        return DEFAULT_POLICY
    return PrecisionPolicy(bits=bits, tol=mp.mpf(2) ** (8 - bits))


def _parse_complex(text: str) -> mp.mpc:
    parts = text.split(",")
    if len(parts) != 2:
        raise DomainError("complex values are written re,im")
    return mp.mpc(mp.mpf(parts[0]), mp.mpf(parts[1]))


def _require(args, *names) -> None:
    # config-backed flags stay optional at the parser level so a config
    # file can supply them; presence is enforced after the merge
    for name in names:
        if getattr(args, name, None) is None:
            raise DomainError("missing required option --%s" % name.replace("_", "-"))


def _out_format(args) -> str:
    fmt = (getattr(args, "format", None) or "").strip().lower()
    if fmt:
        if fmt not in ("csv", "json"):
            raise DomainError("format must be csv or json")
        return fmt
    out = getattr(args, "out", None) or ""
    return "json" if out.endswith(".json") else "csv"


def build_parser() -> argparse.ArgumentParser:
    top = argparse.ArgumentParser(
        prog="attractorlab",
        description="Partition polynomial phases, zeros, and attractors.",
    )
    top.add_argument("--config", help="key=value config file; flags override")
    sub = top.add_subparsers(dest="command", required=True)

    def family_flags(p):
        p.add_argument("--family", required=False, help="all-parts|odd|residue|quadratic|explicit")
        p.add_argument("--a", type=int, help="residue class (residue family)")
        p.add_argument("--p", type=int, help="modulus (residue or quadratic family)")
        p.add_argument("--parts", help="comma list of allowed parts (explicit family)")
        p.add_argument("--bits", type=int, help="precision bits (default 128)")
        p.add_argument("--tol", type=float, help="comparison tolerance")

    gen = sub.add_parser("gen-poly", help="exact partition polynomial coefficients")
    family_flags(gen)
    gen.add_argument("--n", type=int, help="single weight")
    gen.add_argument("--max-n", dest="max_n", type=int, help="all weights up to this")
    gen.add_argument("--out")
    gen.add_argument("--format", help="csv|json (default from extension)")

    rts = sub.add_parser("roots", help="all zeros of one partition polynomial")
    family_flags(rts)
    rts.add_argument("--n", type=int)
    rts.add_argument("--out")
    rts.add_argument("--format", help="csv|json (default from extension)")

    pmap = sub.add_parser("phase-map", help="winner/tie grid over the disk")
    family_flags(pmap)
    pmap.add_argument("--resolution", type=int)
    pmap.add_argument("--boundary-tol", dest="boundary_tol", type=float)
    pmap.add_argument("--threads", type=int)
    pmap.add_argument("--out")
    pmap.add_argument("--format", help="csv|json (default from extension)")

    trc = sub.add_parser("trace", help="trace one boundary level set")
    family_flags(trc)
    trc.add_argument("--pair", required=True,
                     help="k1,k2 or h1,k1,h2,k2 candidate pair")
    trc.add_argument("--bracket", required=True,
                     help="t_lo,t_hi circle-angle bracket for the seed")
    trc.add_argument("--out")
    trc.add_argument("--format", help="csv|json (default from extension)")

    att = sub.add_parser("attractor", help="assemble the limit attractor")
    family_flags(att)
    att.add_argument("--out")

    ver = sub.add_parser("verify", help="cross-module invariant suite")
    family_flags(ver)
    ver.add_argument("--max-n", dest="max_n", type=int, default=120)
    ver.add_argument("--out", help="optional JSON report path")

    asy = sub.add_parser("asymptotics", help="estimate vs exact report")
    family_flags(asy)
    asy.add_argument("--point", action="append", required=True,
                     help="re,im sample point (repeatable)")
    asy.add_argument("--weights", help="comma list of weights")
    asy.add_argument("--out")

    dlg = sub.add_parser("dilog", help="special function evaluations")
    dlg.add_argument("--z", help="re,im dilogarithm argument")
    dlg.add_argument("--clausen", help="real angle t for the Clausen value")
    dlg.add_argument("--catalan", action="store_true", help="print the Catalan constant")
    dlg.add_argument("--bits", type=int)
    dlg.add_argument("--tol", type=float)
    dlg.add_argument("--digits", type=int, default=30)
    dlg.add_argument("--out", help="optional JSON path (default stdout)")

    return top


def _cmd_gen_poly(args) -> int:
    seq = _family_from(args)
    _require(args, "out")
    if args.n is None and args.max_n is None:
        raise DomainError("gen-poly needs --n or --max-n")
    if args.max_n is not None:
        polys = generate(seq, int(args.max_n))
    else:
        polys = [generate_single(seq, int(args.n))]
    if _out_format(args) == "json":
        write_coefficients_json(args.out, polys, family_label=seq.label())
    else:
        write_coefficients_csv(args.out, polys)
    return 0


def _cmd_roots(args) -> int:
    seq = _family_from(args)
    pol = _policy_from(args)
    _require(args, "n", "out")
    F = generate_single(seq, int(args.n))
    rootset = roots_mod.find_roots(F, pol)
    if _out_format(args) == "json":
        roots_mod.write_roots_json(args.out, rootset, pol)
    else:
        roots_mod.write_roots_csv(args.out, rootset, F)
    return 0


def _cmd_phase_map(args) -> int:
    seq = _family_from(args)
    pol = _policy_from(args)
    _require(args, "resolution", "out")
    grid = harness_mod.phase_grid(
        seq,
        int(args.resolution),
        boundary_tol=float(args.boundary_tol) if args.boundary_tol is not None else None,
        policy=pol,
        threads=int(args.threads) if args.threads is not None else None,
    )
    if _out_format(args) == "json":
        phases_mod.write_phase_map_json(
            args.out,
            grid.points,
            grid.verdicts,
            pol,
            seq.label(),
            grid.resolution,
            grid.boundary_tol,
        )
    else:
        phases_mod.write_phase_map_csv(args.out, grid.points, grid.verdicts)
    return 0


def _cmd_trace(args) -> int:
    seq = _family_from(args)
    pol = _policy_from(args)
    _require(args, "out")
    nums = [int(x) for x in args.pair.split(",")]
    if len(nums) == 2:
        pair = (nums[0], nums[1])
    elif len(nums) == 4:
        pair = ((nums[0], nums[1]), (nums[2], nums[3]))
    else:
        raise DomainError("--pair takes 2 or 4 comma-separated integers")
    lo, hi = (mp.mpf(x) for x in args.bracket.split(","))
    seed = curves_mod.seed_on_circle(seq, pair, (lo, hi), pol)
    curve = curves_mod.trace(seq, seed, pair, policy=pol)
    if _out_format(args) == "json":
        curves_mod.write_curve_json(args.out, curve, pol, family_label=seq.label())
    else:
        curves_mod.write_curves_csv(args.out, [curve])
    return 0


def _cmd_attractor(args) -> int:
    seq = _family_from(args)
    pol = _policy_from(args)
    _require(args, "out")
    aset = curves_mod.attractor_set(seq, pol)
    curves_mod.write_attractor_json(args.out, aset, pol)
    return 0


def _cmd_asymptotics(args) -> int:
    seq = _family_from(args)
    pol = _policy_from(args)
    _require(args, "weights", "out")
    points = [_parse_complex(p) for p in args.point]
    weights = [int(x) for x in args.weights.split(",")]
    checks = harness_mod.asymptotic_report(seq, points, weights, pol)
    report = harness_mod.ConvergenceReport(
        family=seq.label(),
        weights=tuple(weights),
        per_n=(),
        asymptotic_checks=tuple(checks),
    )
    harness_mod.write_report_json(args.out, report, pol)
    return 0


def _cmd_dilog(args) -> int:
    bits = int(args.bits) if args.bits else DEFAULT_POLICY.bits
    pol = PrecisionPolicy(bits=bits, tol=float(args.tol)) if args.tol else (
        DEFAULT_POLICY if bits == DEFAULT_POLICY.bits
        else PrecisionPolicy(bits=bits, tol=mp.mpf(2) ** (8 - bits))
    )
    digits = int(args.digits)
    payload = {"precision_bits": pol.bits, "digits": digits}
    did = False
    with mp.workprec(pol.bits + 32):
        if args.z:
            z = _parse_complex(args.z)
            val = dilog(z, pol)
            payload["dilog"] = {
                "re": mp.nstr(val.real, digits),
                "im": mp.nstr(val.imag, digits),
                "z": [mp.nstr(z.real, digits), mp.nstr(z.imag, digits)],
            }
            did = True
        if args.clausen:
            t = mp.mpf(args.clausen)
            payload["clausen"] = {
                "t": mp.nstr(t, digits),
                "value": mp.nstr(clausen2(t, pol), digits),
            }
            did = True
        if args.catalan:
            payload["catalan"] = mp.nstr(catalan(pol), digits)
            did = True
    if not did:
        raise DomainError("dilog needs --z, --clausen, or --catalan")
    text = json.dumps(payload, indent=2, sort_keys=True) + "\n"
    if args.out:
        with open(args.out, "w", encoding="utf-8") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)
    return 0


def _verify_checks(seq: ExponentSequence, max_n: int, pol: PrecisionPolicy):
    """Cross-module invariant suite; yields (name, ok, detail)."""
    from itertools import combinations

    # exact combinatorics against brute-force enumeration at small weight
    def brute(n):
        parts = [m for m in range(1, n + 1) if seq.exponent(m)]
        counts = [0] * (n + 1)

        def rec(rem, mmax, k):
            if rem == 0:
                counts[k] += 1
                return
            for m in (x for x in parts if x <= min(mmax, rem)):
                rec(rem - m, m, k + 1)

        rec(n, n, 0)
        return counts

    small = min(max_n, 14)
    polys = generate(seq, max_n)
    ok = all(tuple(brute(n)) == polys[n].coeffs for n in range(small + 1))
    yield "coefficients-match-enumeration", ok, "n <= %d" % small

    # nonnegativity and degree bounds
    ok = all(
        all(c >= 0 for c in F.coeffs) and F.degree <= F.n for F in polys[1:]
    )
    yield "coefficients-nonnegative-degree-bounded", ok, "n <= %d" % max_n

    # tail stabilization against the infinite-product tail series
    if seq.exponent(1):
        order = min(max_n // 2 - 1, 40)
        if order >= 1:
            h = tail_series(seq, order)
            n = max_n
            ok = all(
                polys[n].coeffs[n - k] == h[k] for k in range(order + 1) if 2 * k < n
            )
            yield "tail-coefficients-stabilize", ok, "order %d at n=%d" % (order, n)

    # candidate geometry: winner exists and margins are conjugate-symmetric
    try:
        zs = [mp.mpc("0.41", "0.23"), mp.mpc("-0.57", "0.44"), mp.mpc("0.12", "-0.66")]
        ok = True
        for z in zs:
            v1 = phases_mod.classify(seq, z, policy=pol)
            v2 = phases_mod.classify(seq, mp.conj(z), policy=pol)
            if abs(v1.margin - v2.margin) > pol.tolerance() * 100:
                ok = False
        yield "classification-conjugation-symmetric", ok, "3 probe points"
    except UnsupportedFamily:
        pass

    # dominance inequality: the k=1 direction wins on the positive real axis
    try:
        pf1 = phases_mod.phase_function(seq, 1, 1)
        others = [hk for hk in phases_mod.candidates(seq) if hk != (1, 1)]
        ok = True
        for r in ("0.2", "0.5", "0.8"):
            z = mp.mpc(r)
            f1 = pf1.re_L(z)
            for h, k in others:
                if phases_mod.phase_function(seq, h, k).re_L(z) >= f1:
                    ok = False
        yield "positive-axis-dominance", ok, "3 radii"
    except UnsupportedFamily:
        pass

    # roots: conjugation closure and reconstruction at a modest weight
    n_root = min(max_n, 60)
    F = polys[n_root]
    if F.degree >= 1:
        rs = roots_mod.find_roots(F, pol)
        with mp.workprec(rs.precision_bits + 64):
            tol = 10 * rs.residual_bound
            ok = True
            for r in rs.roots:
                if min(abs(mp.conj(r) - s) for s in rs.roots) > tol:
                    ok = False
        yield "roots-conjugation-closed", ok, "n=%d" % n_root

        with mp.workprec(rs.precision_bits + 64):
            coeffs = [mp.mpc(1)]
            for r in rs.roots:
                coeffs = [
                    (coeffs[i] if i < len(coeffs) else 0)
                    - r * (coeffs[i - 1] if i >= 1 else 0)
                    for i in range(len(coeffs) + 1)
                ]
            coeffs = list(reversed(coeffs))
            lead = F.coeffs[-1]
            recon_ok = True
            m = rs.zero_multiplicity_at_origin
            for k, c in enumerate(F.coeffs):
                if k < m:
                    continue
                approx = lead * coeffs[k - m]
                if c == 0:
                    if abs(approx) > mp.mpf("1e-8"):
                        recon_ok = False
                elif abs(approx - c) / abs(c) > mp.mpf("1e-10"):
                    recon_ok = False
        yield "roots-reconstruct-coefficients", recon_ok, "n=%d rel 1e-10" % n_root

    # asymptotics: estimate within 25% of exact on an interior point
    try:
        checks = harness_mod.asymptotic_report(
            seq, [mp.mpf("0.5")], [min(max_n, 100)], pol
        )
        ok = all(c["log_error"] * mp.sqrt(c["n"]) < mp.mpf("0.25") for c in checks)
        yield "asymptotic-estimate-close", ok, "z=0.5"
    except (UnsupportedFamily, DomainError):
        pass


def _cmd_verify(args) -> int:
    seq = _family_from(args)
    pol = _policy_from(args)
    max_n = int(args.max_n)
    if max_n < 8:
        raise DomainError("verify needs --max-n at least 8")
    results = list(_verify_checks(seq, max_n, pol))
    for name, ok, detail in results:
        sys.stdout.write("%-42s %s  (%s)\n" % (name, "ok" if ok else "FAIL", detail))
    if args.out:
        payload = {
            "family": seq.label(),
            "max_n": max_n,
            "checks": [
                {"name": name, "ok": bool(ok), "detail": detail}
                for name, ok, detail in results
            ],
        }
        with open(args.out, "w", encoding="utf-8") as fh:
            json.dump(payload, fh, indent=2, sort_keys=True)
            fh.write("\n")
    return 0 if all(ok for _, ok, _ in results) else 3


_COMMANDS = {
    "gen-poly": _cmd_gen_poly,
    "roots": _cmd_roots,
    "phase-map": _cmd_phase_map,
    "trace": _cmd_trace,
    "attractor": _cmd_attractor,
    "verify": _cmd_verify,
    "asymptotics": _cmd_asymptotics,
    "dilog": _cmd_dilog,
}


def main(argv=None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        # argparse exits 2 on bad flags; that is a validation error here
        return 0 if exc.code == 0 else 1

    try:
        if args.config:
            defaults = load_config(args.config)
            for key, value in defaults.items():
                attr = key.replace("-", "_")
                if getattr(args, attr, None) in (None, False):
                    setattr(args, attr, value)
        return _COMMANDS[args.command](args)
    except (DomainError, GcdError, UnsupportedFamily, ValueError, OSError) as exc:
        sys.stderr.write("error: %s\n" % exc)
        return 1
    except AttractorlabError as exc:
        sys.stderr.write("computation failed: %s\n" % exc)
        return 2


if __name__ == "__main__":
    sys.exit(main())
