"""Command-line front end.

    oggcheck verify-ogg --level 11 --p 5 --format json
    oggcheck batch --levels 10..30 --pmax 50
    oggcheck basis --level 15
    oggcheck cuspidal --level 11 --p 5
    oggcheck ideal --level 11 --p 5
    oggcheck cuspforms --level 37 --prec 20 --format csv

Exit status: 0 when every hard check passes, 1 when a check fails, 2 for
usage errors (including a level that is not square-free or p dividing 6N).
"""

import argparse
import csv
import io
import json
import sys

from .arith import is_prime, is_squarefree
from .hecke import DEFAULT_QMAX, eisenstein_ideal, ideal_J, m_integral_basis
from .hecke import cuspidal_ideal_index, presentation_check
from .verify import DEFAULT_QSET_SIZE, FLAG_NAMES, batch, default_qset, verify_ogg

EXIT_OK, EXIT_FAIL, EXIT_USAGE = 0, 1, 2


class UsageError(Exception):
    pass


def parse_levels(text):
    """'A..B' (inclusive) or a single integer."""
    try:
        if ".." in text:
            a, b = text.split("..", 1)
            lo, hi = int(a), int(b)
        else:
            lo = hi = int(text)
    except ValueError:
        raise argparse.ArgumentTypeError(f"bad level range {text!r}; expected A..B")
    if lo > hi:
        raise argparse.ArgumentTypeError(f"empty level range {text!r}")
    return range(lo, hi + 1)


def build_parser():
    parser = argparse.ArgumentParser(prog="oggcheck", description=__doc__.split("\n")[0])
    sub = parser.add_subparsers(dest="command", required=True)

    def common(p, prime=False):
        p.add_argument("--level", type=int, required=True)
        if prime:
            p.add_argument("--p", type=int, required=True, dest="prime")
        p.add_argument("--format", choices=("text", "json", "csv"), default="text")
        p.add_argument("--output", help="write to this file instead of stdout")

    v = sub.add_parser("verify-ogg", help="all checks for one (N, p)")
    common(v, prime=True)
    v.add_argument("--qmax", type=int, default=DEFAULT_QMAX)
    v.add_argument("--qset-size", type=int, default=DEFAULT_QSET_SIZE)
    v.add_argument("--timings", action="store_true", help="include timings in JSON")

    b = sub.add_parser("batch", help="verify-ogg over a range of levels")
    b.add_argument("--levels", type=parse_levels, required=True)
    b.add_argument("--pmax", type=int, required=True)
    b.add_argument("--qmax", type=int, default=DEFAULT_QMAX)
    b.add_argument("--format", choices=("text", "json", "csv"), default="text")
    b.add_argument("--output")

    common(sub.add_parser("basis", help="Z-basis of M_2(N) at the Sturm bound"))
    common(sub.add_parser("cuspidal", help="p-part of the cuspidal group"), prime=True)
    i = sub.add_parser("ideal", help="Eisenstein ideal and the ideal J")
    common(i, prime=True)
    i.add_argument("--qmax", type=int, default=DEFAULT_QMAX)
    c = sub.add_parser("cuspforms", help="integral cusp form basis")
    common(c)
    c.add_argument("--prec", type=int, required=True)
    return parser


def _validate(args):
    N = getattr(args, "level", None)
    if N is not None and (N < 2 or not is_squarefree(N)):
        raise UsageError(f"level {N} must be square-free and > 1")
    p = getattr(args, "prime", None)
    if p is not None:
        if not is_prime(p):
            raise UsageError(f"{p} is not prime")
        if (6 * N) % p == 0:
            raise UsageError(f"p = {p} divides 6N = {6 * N}")
    if getattr(args, "qmax", DEFAULT_QMAX) < 20:
        raise UsageError("--qmax must be at least 20")
    if getattr(args, "prec", 1) is not None and getattr(args, "prec", 1) < 1:
        raise UsageError("--prec must be positive")
    if getattr(args, "qset_size", 1) < 1:
        raise UsageError("--qset-size must be positive")


def _csv(rows, header):
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(header)
    w.writerows(rows)
    return buf.getvalue()


def _report_text(rep):
    lines = [f"level {rep.level}  prime {rep.prime}"]
    lines.append(f"  ord_p|C| = {rep.ord_p_C}   ord_p[T:I] = {rep.ord_p_TI}   "
                 f"ord_p|X| = {rep.ord_p_X}")
    lines.append(f"  torsion bound = {rep.torsion_bound}  (qset {rep.qset}, qmax {rep.qmax})")
    for f in FLAG_NAMES:
        lines.append(f"  {f}: {'true' if getattr(rep, f) else 'false'}")
    if rep.error:
        lines.append(f"  error: {rep.error}")
    lines.append(f"  {'PASS' if rep.passed else 'FAIL'}")
    return "\n".join(lines) + "\n"


REPORT_CSV_FIELDS = ("level", "prime", "ord_p_C", "ord_p_TI", "ord_p_X", "torsion_bound",
                     "qmax") + FLAG_NAMES + ("passed",)


def _report_csv_row(rep):
    row = [getattr(rep, k) for k in REPORT_CSV_FIELDS[:-1]] + [rep.passed]
    return [str(x).lower() if isinstance(x, bool) else x for x in row]


def cmd_verify(args):
    qset = default_qset(args.level, args.prime, args.qset_size)
    rep = verify_ogg(args.level, args.prime, args.qmax, qset)
    if args.format == "json":
        out = json.dumps(rep.to_dict(args.timings), indent=2) + "\n"
    elif args.format == "csv":
        out = _csv([_report_csv_row(rep)], REPORT_CSV_FIELDS)
    else:
        out = _report_text(rep)
    return out, rep.passed


def cmd_batch(args):
    reps = batch(args.levels, args.pmax, args.qmax)
    if args.format == "json":
        out = json.dumps([r.to_dict() for r in reps], indent=2) + "\n"
    elif args.format == "csv":
        out = _csv([_report_csv_row(r) for r in reps], REPORT_CSV_FIELDS)
    else:
        out = "".join(_report_text(r) for r in reps)
        out += f"{sum(r.passed for r in reps)}/{len(reps)} pairs passed\n"
    return out, all(r.passed for r in reps)


def _series_output(named, fmt):
    """named: list of (label, Series)."""
    if fmt == "json":
        data = [{"name": k, "coefficients": [str(c) for c in s.coeffs]} for k, s in named]
        return json.dumps(data, indent=2) + "\n"
    if fmt == "csv":
        rows = []
        for k, s in named:
            rows.extend([k, n, c.numerator, c.denominator] for n, c in enumerate(s.coeffs))
        return _csv(rows, ("form", "n", "numerator", "denominator"))
    return "".join(f"{k}: {s!r}\n" for k, s in named)


def cmd_basis(args):
    J = m_integral_basis(args.level)
    named = [(f"m{j}", s) for j, s in enumerate(J.series())]
    head = "" if args.format != "text" else (
        f"M_2({args.level}, Z): rank {J.rank} = genus {J.genus} + {J.eis_dim} Eisenstein; "
        f"precision {J.prec}\n")
    return head + _series_output(named, args.format), True


def cmd_cuspforms(args):
    from .modsym import integral_cuspform_basis

    basis = integral_cuspform_basis(args.level, args.prec)
    named = [(f"g{j}", s) for j, s in enumerate(basis)]
    return _series_output(named, args.format), True


def cmd_cuspidal(args):
    from .cusps import cuspidal_group, lambda_and_cyclicity

    C = cuspidal_group(args.level, args.prime)
    lam = lambda_and_cyclicity(args.level, args.prime)
    data = {
        "level": args.level,
        "prime": args.prime,
        "invariants": list(C.invariants.invariant_factors),
        "full_invariants": list(C.full.invariant_factors),
        "generators": [list(g) for g in C.generators],
        "lambda_values": [str(v) for v in lam.values],
        "lambda_denominators": list(lam.denominators),
        "cyclic": lam.cyclic,
    }
    ok = lam.cyclic
    if args.format == "json":
        return json.dumps(data, indent=2) + "\n", ok
    if args.format == "csv":
        rows = [[str(g), o, str(v)] for g, o, v in zip(C.generators, C.orders, lam.values)]
        return _csv(rows, ("generator", "order", "lambda")), ok
    lines = [f"cuspidal group at level {args.level}: {data['full_invariants']}",
             f"  {args.prime}-part: {data['invariants']}"]
    for g, o, v in zip(C.generators, C.orders, lam.values):
        lines.append(f"  generator {list(g)} of order {o}, lambda = {v}")
    lines.append(f"  cyclic: {'true' if lam.cyclic else 'false'}")
    return "\n".join(lines) + "\n", ok


def cmd_ideal(args):
    N, p = args.level, args.prime
    E = eisenstein_ideal(N)
    _, rep = ideal_J(N, p, args.qmax)
    pres = presentation_check(N, p)
    data = {
        "level": N,
        "prime": p,
        "rank_TtildeI": E.quotient_rank,
        "TtildeI_torsion": list(E.quotient.torsion),
        "index_TI_ppart": cuspidal_ideal_index(N, p),
        "J_equals_Itilde_ppart": rep.equals_Itilde_ppart,
        "memberships": rep.memberships,
        "qset": list(rep.qset),
        "qmax": rep.qmax,
        "presentation_cokernel_order": pres.cokernel_order,
        "presentation_iso_at_p": pres.isomorphism_at_p,
    }
    ok = rep.equals_Itilde_ppart and rep.memberships_ok and pres.isomorphism_at_p
    if args.format == "json":
        return json.dumps(data, indent=2) + "\n", ok
    if args.format == "csv":
        return _csv([[k, json.dumps(v)] for k, v in data.items()], ("key", "value")), ok
    return "".join(f"{k}: {v}\n" for k, v in data.items()), ok


COMMANDS = {
    "verify-ogg": cmd_verify,
    "batch": cmd_batch,
    "basis": cmd_basis,
    "cuspidal": cmd_cuspidal,
    "ideal": cmd_ideal,
    "cuspforms": cmd_cuspforms,
}


def main(argv=None):
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return EXIT_OK if exc.code == 0 else EXIT_USAGE
    try:
        _validate(args)
    except UsageError as exc:
        parser.print_usage(sys.stderr)
        print(f"oggcheck: error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    try:
        out, ok = COMMANDS[args.command](args)
    except ArithmeticError as exc:
        print(f"oggcheck: check failed: {exc}", file=sys.stderr)
        return EXIT_FAIL
    if args.output:
        with open(args.output, "w") as fh:
            fh.write(out)
    else:
        sys.stdout.write(out)
    return EXIT_OK if ok else EXIT_FAIL


if __name__ == "__main__":
    sys.exit(main())
