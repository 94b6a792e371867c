"""Command-line front end.

Exit codes: 0 success, 1 semantic failure (rejected certificate, target
exponent not reached), 2 invalid input, 3 resource or precision limits.
The default precision budget (bits) comes from ``LIOUVILLE_PRECISION``.
"""

from __future__ import annotations

import argparse
import json
import os
import sys

import gmpy2

from . import __version__
from .certify import (
    build_pairwise_certificate,
    build_selfpower_certificate,
    build_tuned_certificate,
    build_tuned_parameters,
    dumps,
    loads,
    poly_closure_certificate,
    verify_certificate,
)
from .certify.common import normalize
from .diophantine import JarnikTarget, forced_schedule, jarnik_generate
from .errors import (
    AmbiguousEnclosureError,
    AnchorMismatchError,
    DomainError,
    IncomparableError,
    MalformedCertificateError,
    MixedScheduleError,
    PrecisionInsufficientError,
    UnmaterializableError,
)
from .interval import DEFAULT_BUDGET, IntervalReal, decimal_str, e_inv, rat, rat_str
from .magnitude import Magnitude, mag_leq_power
from .schedule import DigitSequence, ExponentSchedule, SpiffyNumber, liouville_exponent_lower, tail_bound, truncate
from .selfpower import hausdorff_series_partial, invert_self_power, non_liouville_scan

EXIT_OK, EXIT_FAIL, EXIT_INPUT, EXIT_RESOURCE = 0, 1, 2, 3


class UsageError(Exception):
    """Invalid configuration detected before computing anything."""


# ---------------------------------------------------------------------------
# mini-language
# ---------------------------------------------------------------------------


def parse_schedule(spec: str) -> ExponentSchedule:
    """``paper``, ``tower:B:E1``, ``factorial[:K]`` or ``custom:e1,e2,...``."""
    head, _, rest = spec.strip().partition(":")
    try:
        if head == "paper" and not rest:
            return ExponentSchedule.paper_tower()
        if head == "tower":
            b, e1 = rest.split(":")
            return ExponentSchedule.tower(int(b), int(e1))
        if head == "factorial":
            return ExponentSchedule.factorial(int(rest) if rest else 1)
        if head == "custom":
            return ExponentSchedule.custom(int(v) for v in rest.split(","))
    except ValueError as exc:
        raise UsageError(f"bad schedule {spec!r}: {exc}") from None
    raise UsageError(f"unknown schedule {spec!r}")


def _digit_list(text: str) -> tuple:
    return tuple(int(d) for d in text.split(",")) if text else ()


def parse_digits(spec: str) -> DigitSequence:
    """``all2``, ``all0``, ``periodic:2,0`` or ``PREFIX/PATTERN`` (``2,0/2``).

    Any form may be followed by edits ``@n=d``, e.g. ``all2@2=0``.
    """
    base, *edits = spec.strip().split("@")
    try:
        if base == "all2":
            seq = DigitSequence.all2()
        elif base == "all0":
            seq = DigitSequence.all0()
        elif base.startswith("periodic:"):
            seq = DigitSequence.periodic(_digit_list(base[len("periodic:"):]))
        elif "/" in base:
            prefix, pattern = base.split("/")
            seq = DigitSequence.periodic(_digit_list(pattern), _digit_list(prefix))
        else:
            raise UsageError(f"unknown digit spec {spec!r}")
        for e in edits:
            n, d = e.split("=")
            if int(n) < 1:
                raise ValueError("digit positions start at 1")
            seq = seq.with_digit(int(n), int(d))
    except ValueError as exc:
        raise UsageError(f"bad digit spec {spec!r}: {exc}") from None
    return seq


def parse_xi(spec: str, budget: int) -> IntervalReal:
    """``rational:p/q`` or ``invert:y`` (the preimage of ``y`` under x**x above 1/e)."""
    head, _, rest = spec.partition(":")
    try:
        if head == "rational":
            return IntervalReal.exact(rat(rest), budget)
        if head == "invert":
            pre = invert_self_power(IntervalReal.exact(rat(rest), budget))
            if not pre:
                raise UsageError(f"{rest} is below the minimum of x**x")
            return pre[-1]
        return IntervalReal.exact(rat(spec), budget)
    except (ValueError, ZeroDivisionError) as exc:
        raise UsageError(f"bad xi spec {spec!r}: {exc}") from None


def _int_list(text: str) -> list:
    try:
        out = [int(v) for v in text.split(",")]
    except ValueError:
        raise UsageError(f"expected a comma-separated integer list, got {text!r}") from None
    return out


def _levels(text: str) -> list:
    """``6`` means levels 1..6; ``2,3,5`` is taken literally."""
    vals = _int_list(text)
    if len(vals) == 1:
        return list(range(1, vals[0] + 1))
    return vals


def _budget(args) -> int:
    if args.budget is not None:
        b = args.budget
    else:
        env = os.environ.get("LIOUVILLE_PRECISION")
        try:
            b = int(env) if env else DEFAULT_BUDGET
        except ValueError:
            raise UsageError(f"LIOUVILLE_PRECISION must be an integer, got {env!r}") from None
    if b < 32:
        raise UsageError("precision budget must be at least 32 bits")
    return b


# ---------------------------------------------------------------------------
# I/O helpers
# ---------------------------------------------------------------------------


def _read_json(path: str):
    try:
        with open(path, encoding="utf-8") as fh:
            return json.load(fh)
    except OSError as exc:
        raise UsageError(f"cannot read {path}: {exc.strerror}") from None
    except json.JSONDecodeError as exc:
        raise MalformedCertificateError(f"{path}: not valid JSON: {exc}") from None


def _emit(text: str, out: str | None) -> None:
    if out:
        with open(out, "w", encoding="utf-8", newline="\n") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)


def _say(msg: str, args) -> None:
    """Human-readable summary: stdout when the payload went to a file, else stderr."""
    print(msg, file=sys.stdout if getattr(args, "out", None) else sys.stderr)


def _load_spiffies(paths) -> list:
    out = []
    for p in paths:
        doc = _read_json(p)
        items = doc if isinstance(doc, list) else doc.get("inputs", [doc]) if isinstance(doc, dict) else None
        if items is None:
            raise UsageError(f"{p}: expected a spiffy number or a list of them")
        for item in items:
            try:
                out.append(SpiffyNumber.from_json(item))
            except (KeyError, TypeError, ValueError) as exc:
                raise UsageError(f"{p}: not a spiffy number ({exc})") from None
    return out


def fmt_enclosure(e, digits: int = 6) -> str:
    if e is None:
        return "-"
    return f"[{decimal_str(e.lower, digits)}, {decimal_str(e.upper, digits, up=True)}]"


def fmt_rational(q) -> str:
    """``p/q`` with a large power-of-3 denominator shown as ``3^k``."""
    q = rat(q)
    d, k = gmpy2.remove(q.denominator, 3)
    if d == 1 and k > 12:
        return f"{q.numerator}/3^{k}"
    return rat_str(q) if q.denominator != 1 else str(q.numerator)


def _table(header, rows) -> str:
    cols = [header] + [[str(c) for c in r] for r in rows]
    widths = [max(len(r[i]) for r in cols) for i in range(len(header))]
    lines = ["  ".join(c.ljust(w) for c, w in zip(r, widths)).rstrip() for r in cols]
    return "\n".join(lines)


def _mag_text(m) -> str:
    if isinstance(m, Magnitude):
        if m.level == 0:
            return fmt_rational(m.value)
        return f"level-{m.level} magnitude"
    return fmt_rational(m)


# ---------------------------------------------------------------------------
# construct
# ---------------------------------------------------------------------------


def cmd_construct(args) -> int:
    budget = _budget(args)
    if args.kind == "spiffy":
        schedule = parse_schedule(args.schedule)
        seqs = [parse_digits(d) for d in (args.digits or ["all2"])]
        levels = _levels(args.levels)
        docs, rows = [], []
        for seq in seqs:
            x = SpiffyNumber(schedule, seq)
            recs = []
            for m in levels:
                tb = tail_bound(x, m)
                rep = liouville_exponent_lower(x, m, budget)
                g = rep.guaranteed
                recs.append(
                    {
                        "m": str(m),
                        "e_m": str(schedule.exponent_int(m)),
                        "truncation": rat_str(truncate(x, m)),
                        "tail_generic": tb.generic.to_json(),
                        "tail_refined": tb.refined.to_json(),
                        "guaranteed_exponent": g.to_json() if isinstance(g, Magnitude) else rat_str(g),
                        "achieved_exponent": None if rep.achieved is None else rep.achieved.to_json(),
                        "liouville_grade": rep.liouville_grade,
                    }
                )
                rows.append([m, schedule.exponent_int(m), _mag_text(g), fmt_enclosure(rep.achieved, 4)])
            docs.append({"kind": "spiffy", **x.to_json(), "levels": recs})
        doc = docs[0] if len(docs) == 1 else {"kind": "spiffy-list", "inputs": docs}
        _emit(dumps(doc), args.out)
        _say(_table(["m", "e_m", "guaranteed", "achieved"], rows), args)
        return EXIT_OK
    if args.kind == "jarnik":
        try:
            forced_schedule(args.forced)
        except ValueError as exc:
            raise UsageError(str(exc)) from None
        u = jarnik_generate(args.forced, args.filler, args.stages, budget)
        _emit(dumps({"kind": "jarnik", **normalize(u.to_json())}), args.out)
        rows = [[s.n, s.forced_quotient, s.B.bit_length(), fmt_enclosure(s.achieved_exponent, 4)] for s in u.stages]
        _say(_table(["n", "forced", "bits(B)", "achieved"], rows), args)
        return EXIT_OK
    if args.j is None or args.j < 1:
        raise UsageError("tuned-params needs --j >= 1")
    V, B = build_tuned_parameters(args.j, budget)
    _emit(dumps({"kind": "tuned-params", "j": str(args.j), "V": str(V), "B": str(B)}), args.out)
    _say(f"j={args.j} V={V} B={B}", args)
    return EXIT_OK


# ---------------------------------------------------------------------------
# certify
# ---------------------------------------------------------------------------


def _certifies(total: Magnitude, Q: int, N: int, budget: int) -> bool:
    return Q > 1 and mag_leq_power(total, Magnitude.of(Q), N, budget, strict=True)


def _target_report(rows, targets, args) -> int:
    """rows: (label, Q, total error, achieved enclosure)."""
    budget = _budget(args)
    table = [[lab, fmt_enclosure(e, 4)] for lab, _, _, e in rows]
    _say(_table(["stage", "achieved exponent"], table), args)
    missing = []
    for N in targets:
        hits = [lab for lab, Q, tot, _ in rows if _certifies(tot, Q, N, budget)]
        _say(f"N={N}: " + (f"certified at stage {hits[0]}" if hits else "not reached"), args)
        if not hits:
            missing.append(N)
    return EXIT_FAIL if missing else EXIT_OK


def cmd_certify(args) -> int:
    budget = _budget(args)
    targets = _int_list(args.target_N) if args.target_N else []
    if any(N < 1 for N in targets):
        raise UsageError("target exponents must be positive")
    if args.kind == "selfpower":
        if not args.source:
            raise UsageError("certify selfpower needs --from")
        doc = _read_json(args.source)
        if not isinstance(doc, dict):
            raise UsageError(f"{args.source}: expected a JSON object")
        if doc.get("kind") == "spiffy":
            x = _load_spiffies([args.source])[0]
            levels = _levels(args.levels or str(args.stages or 1))
            cert = build_tuned_certificate(x, levels, budget)
            rows = [(str(s.j), s.B, s.total_error, s.achieved_exponent) for s in cert.stages]
        else:
            try:
                u = JarnikTarget.from_json(doc, budget)
            except (KeyError, TypeError, ValueError) as exc:
                raise UsageError(f"{args.source}: not a Jarnik target ({exc})") from None
            if args.stages and args.stages > len(u.stages):
                try:
                    u = jarnik_generate(u.forced, u.filler, args.stages, budget)
                except ValueError:
                    raise UsageError(f"cannot extend forced schedule {u.forced!r}") from None
            ns = [s.n for s in u.stages][: args.stages] if args.stages else None
            cert = build_selfpower_certificate(u, ns, args.L_rule, budget)
            rows = [(str(s.n), s.Q, s.total_error, s.achieved_exponent) for s in cert.stages]
    elif args.kind == "poly":
        if not args.poly or not args.inputs:
            raise UsageError("certify poly needs --poly and --inputs")
        xs = _load_spiffies(args.inputs)
        levels = _int_list(args.m) if args.m else [1]
        cert = poly_closure_certificate(args.poly, xs, levels, budget)
        rows = []
        for m, st in zip(cert.levels, cert.stages):
            R = rat(st["R"])
            if st["verdict"] == "rational":
                _say(f"m={m}: rational {fmt_rational(R)}", args)
                continue
            e = None if st["achieved_exponent"] is None else IntervalReal.from_json(st["achieved_exponent"])
            rows.append((str(m), int(R.denominator), Magnitude.from_json(st["error"]), e))
        _emit(dumps(cert.to_json()), args.out)
        if not rows:
            return EXIT_OK
        return _target_report(rows, targets, args)
    else:
        xs = _load_spiffies(args.inputs or []) + _load_spiffies([p for p in (args.x, args.y) if p])
        if len(xs) == 1:
            xs = xs * 2
        if len(xs) != 2:
            raise UsageError("certify pairwise needs exactly two inputs (x and y)")
        if not args.levels:
            raise UsageError("certify pairwise needs --levels")
        cert = build_pairwise_certificate(xs[0], xs[1], _int_list(args.levels), None, args.gap_rule, budget)
        rows = [(str(s.k), s.Q, s.total_error, s.achieved_exponent) for s in cert.stages]
    _emit(dumps(cert.to_json()), args.out)
    return _target_report(rows, targets, args)


# ---------------------------------------------------------------------------
# verify / scan / report
# ---------------------------------------------------------------------------


def _load_certificate(path: str) -> dict:
    try:
        with open(path, encoding="utf-8") as fh:
            text = fh.read()
    except OSError as exc:
        raise UsageError(f"cannot read {path}: {exc.strerror}") from None
    return loads(text)


def cmd_verify(args) -> int:
    doc = _load_certificate(args.certificate)
    v = verify_certificate(doc, args.budget)
    rows = [[lab, fmt_enclosure(e, 4)] for lab, e in v.table]
    if rows:
        print(_table(["stage", "achieved exponent"], rows))
    if v.accepted:
        print(v.verdict)
        return EXIT_OK
    print(f"rejected: {v.first_failure()}")
    return EXIT_FAIL


def cmd_scan(args) -> int:
    budget = _budget(args)
    xi = parse_xi(args.xi, budget)
    try:
        tau = rat(args.tau)
    except ValueError:
        raise UsageError(f"bad tau {args.tau!r}") from None
    c = e_inv(budget)
    if xi.lower <= c.upper or xi.upper > 1:
        raise UsageError("xi must lie in (1/e, 1]")
    rep = non_liouville_scan(xi, tau, args.bmax, args.window, args.jobs, budget)
    _emit(rep.to_csv(), args.out)
    print(f"scanned={rep.scanned} cleared={rep.cleared} violations={len(rep.violations)}", file=sys.stderr)
    return EXIT_OK


def cmd_report(args) -> int:
    budget = _budget(args)
    if args.subject == "certificate":
        if not args.certificate:
            raise UsageError("report certificate needs a file")
        return cmd_verify(argparse.Namespace(certificate=args.certificate, budget=args.budget))
    if args.subject == "exponents":
        x = SpiffyNumber(parse_schedule(args.schedule), parse_digits(args.digits))
        rows = []
        for m in _levels(args.levels):
            rep = liouville_exponent_lower(x, m, budget)
            rows.append([m, _mag_text(rep.guaranteed), fmt_enclosure(rep.achieved, 4), "yes" if rep.liouville_grade else "no"])
        print(_table(["m", "guaranteed", "achieved", "grade"], rows))
        return EXIT_OK
    lo, _, hi = args.b_range.partition(":")
    try:
        h = hausdorff_series_partial(rat(args.s), rat(args.tau), (int(lo), int(hi)), budget)
    except ValueError as exc:
        raise UsageError(str(exc)) from None
    print(f"exponent={rat_str(h.exponent)} partial_sum={fmt_enclosure(h.enclosure, 12)} regime={h.verdict}")
    return EXIT_OK


# ---------------------------------------------------------------------------
# entry point
# ---------------------------------------------------------------------------


def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="liouville", description=__doc__.splitlines()[0])
    p.add_argument("--version", action="version", version=f"liouville {__version__}")
    sub = p.add_subparsers(dest="command", required=True)

    def common(sp):
        sp.add_argument("--budget", type=int, default=None, help="precision budget in bits")
        sp.add_argument("--out", default=None, help="output path (default stdout)")
        sp.add_argument("--jobs", type=int, default=1)

    c = sub.add_parser("construct", help="build spiffy numbers, Jarnik targets or tuned parameters")
    c.add_argument("kind", choices=["spiffy", "jarnik", "tuned-params"])
    c.add_argument("--schedule", default="factorial")
    c.add_argument("--digits", action="append", help="digit spec; repeat for several numbers")
    c.add_argument("--levels", default="3")
    c.add_argument("--forced", default="2^(2^n)")
    c.add_argument("--filler", type=int, default=2)
    c.add_argument("--stages", type=int, default=4)
    c.add_argument("--j", type=int, default=None)
    common(c)
    c.set_defaults(func=cmd_construct)

    c = sub.add_parser("certify", help="build a certificate")
    c.add_argument("kind", choices=["selfpower", "poly", "pairwise"])
    c.add_argument("--from", dest="source")
    c.add_argument("--stages", type=int, default=None)
    c.add_argument("--levels", default=None)
    c.add_argument("--L-rule", dest="L_rule", default="n^2")
    c.add_argument("--target-N", dest="target_N", default=None, help="comma-separated exponents to certify")
    c.add_argument("--poly")
    c.add_argument("--inputs", action="append")
    c.add_argument("--m", default=None, help="level or comma-separated levels")
    c.add_argument("--x")
    c.add_argument("--y")
    c.add_argument("--gap-rule", default="increasing", choices=["increasing", "square", "exp"])
    common(c)
    c.set_defaults(func=cmd_certify)

    c = sub.add_parser("verify", help="re-derive and check a certificate")
    c.add_argument("certificate")
    c.add_argument("--budget", type=int, default=None, help="override the recorded budget")
    c.set_defaults(func=cmd_verify)

    c = sub.add_parser("scan", help="exclusion scan of rationals near xi**xi")
    c.add_argument("--xi", required=True)
    c.add_argument("--tau", required=True)
    c.add_argument("--bmax", type=int, required=True)
    c.add_argument("--window", choices=["enclosure", "tau"], default="enclosure")
    common(c)
    c.set_defaults(func=cmd_scan)

    c = sub.add_parser("report", help="tables for certificates, exponents and series")
    c.add_argument("subject", choices=["certificate", "exponents", "hausdorff"])
    c.add_argument("certificate", nargs="?")
    c.add_argument("--schedule", default="factorial")
    c.add_argument("--digits", default="all2")
    c.add_argument("--levels", default="5")
    c.add_argument("--s", default="1")
    c.add_argument("--tau", default="3")
    c.add_argument("--b-range", dest="b_range", default="1:100")
    c.add_argument("--budget", type=int, default=None)
    c.set_defaults(func=cmd_report)
    return p


def _diagnostic(kind: str, exc: Exception, extra: dict | None = None) -> None:
    print(json.dumps({"error": kind, "message": str(exc), **(extra or {})}, sort_keys=True), file=sys.stderr)


def main(argv=None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return EXIT_OK if exc.code == 0 else EXIT_INPUT
    if getattr(args, "jobs", 1) < 1:
        _diagnostic("invalid-config", ValueError("--jobs must be at least 1"))
        return EXIT_INPUT
    try:
        return args.func(args)
    except AnchorMismatchError as exc:
        _diagnostic("anchor-mismatch", exc)
    except MixedScheduleError as exc:
        _diagnostic("mixed-schedule", exc)
    except MalformedCertificateError as exc:
        _diagnostic("malformed-certificate", exc)
    except (UsageError, DomainError) as exc:
        _diagnostic("invalid-config", exc)
    except PrecisionInsufficientError as exc:
        _diagnostic("precision-insufficient", exc, {"undecided": [f"{a}/{b}" for a, b in exc.pairs]})
        return EXIT_RESOURCE
    except UnmaterializableError as exc:
        _diagnostic("unmaterializable", exc)
        return EXIT_RESOURCE
    except (IncomparableError, AmbiguousEnclosureError) as exc:
        _diagnostic("incomparable-enclosure", exc)
        return EXIT_RESOURCE
    except ValueError as exc:
        _diagnostic("invalid-config", exc)
    return EXIT_INPUT


if __name__ == "__main__":
    sys.exit(main())
