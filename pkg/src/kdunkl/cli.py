"""Command-line interface: ``kdunkl VERB ...``.

Exit codes: 0 success, 1 verification failure, 2 usage error,
3 undecided because a resource cap was hit.
"""

from __future__ import annotations

import argparse
import json
import sys
from typing import Callable, Optional, Sequence

from . import bruhatrep, dunkl
from .cache import PolynomialCache
from .perm import Permutation, parse_permutation
from .polyring import (
    RankTooSmall,
    grothendieck,
    kmonk_chains,
    monk_multiply,
    schubert,
    set_polynomial_cache,
    structure_constants_poly,
)

EXIT_OK, EXIT_FAIL, EXIT_USAGE, EXIT_UNDECIDED = 0, 1, 2, 3


class UsageError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message: str):
        raise UsageError(message)


def _perm(text: str) -> Permutation:
    try:
        return parse_permutation(text)
    except ValueError as exc:
        raise argparse.ArgumentTypeError(str(exc)) from None


def _int_list(text: str) -> list[int]:
    try:
        return [int(t) for t in text.replace(" ", "").split(",") if t]
    except ValueError:
        raise argparse.ArgumentTypeError(f"expected a comma-separated list of integers, got {text!r}") from None


def _positive(text: str) -> int:
    try:
        v = int(text)
    except ValueError:
        raise argparse.ArgumentTypeError(f"expected an integer, got {text!r}") from None
    if v < 1:
        raise argparse.ArgumentTypeError(f"expected a positive integer, got {v}")
    return v


# --------------------------------------------------------------------------
# output helpers


class Output:
    """Collects stdout lines and emits them in one write at the end."""

    def __init__(self, as_json: bool):
        self.as_json = as_json
        self.lines: list[str] = []

    def text(self, line: str) -> None:
        if not self.as_json:
            self.lines.append(line)

    def json(self, obj) -> None:
        if self.as_json:
            self.lines.append(json.dumps(obj, sort_keys=True))

    def flush(self, stream) -> None:
        if self.lines:
            stream.write("\n".join(self.lines) + "\n")
            stream.flush()


def _rank(args, *perms: Permutation, minimum: int = 1) -> int:
    n = max([len(w) for w in perms] + [minimum])
    if args.n is not None:
        need = max([w.rank for w in perms] + [minimum])
        if args.n < need:
            raise UsageError(f"--n {args.n} is smaller than the required rank {need}")
        n = args.n
    return n


def _terms(d: dict[Permutation, int]) -> list[tuple[Permutation, int]]:
    return sorted(d.items(), key=lambda t: (t[0].length, t[0].word))


def _signed_sum(d: dict[Permutation, int]) -> str:
    return str(bruhatrep.GroupAlgebraVector(d, len(next(iter(d)))) if d else "0")


def _report_exit(report: dunkl.Report, fatal: bool = True) -> int:
    if report.undecided:
        return EXIT_UNDECIDED
    if fatal and not report.ok:
        return EXIT_FAIL
    return EXIT_OK


def _emit_report(out: Output, report: dunkl.Report, title: str) -> None:
    for r in report.records:
        out.json(json.loads(r.to_json()))
        params = " ".join(f"{k}={_fmt(v)}" for k, v in sorted(r.params.items()))
        extra = f" size={r.certificate_size}" if r.certificate_size else ""
        ring = f" ring={r.ring}" if r.ring else ""
        detail = f" ({r.detail})" if r.detail else ""
        out.text(f"{r.check} {params}: {r.status}{extra}{ring} {r.elapsed_ms:.1f}ms{detail}")
    for note in report.notes:
        out.text(f"note: {note}")
    bad = len(report.failures())
    if report.undecided:
        out.text(f"{title}: UNDECIDED ({bad} of {len(report.records)} checks not certified)")
    elif bad:
        out.text(f"{title}: FAILED ({bad} of {len(report.records)} checks)")
    else:
        out.text(f"{title}: OK ({len(report.records)} checks)")


def _fmt(v) -> str:
    if isinstance(v, list):
        return ",".join(map(str, v)) or "-"
    return str(v)


# --------------------------------------------------------------------------
# verbs


def cmd_polynomial(args, out: Output) -> int:
    w = args.w
    if args.n is not None:
        w = w.embed(_rank(args, w))
    poly = schubert(w) if args.verb == "schubert" else grothendieck(w)
    out.text(str(poly))
    out.json({"kind": args.verb, "w": str(w), "poly": poly.to_json()})
    return EXIT_OK


def cmd_dunkl(args, out: Output) -> int:
    make = dunkl.kappa if args.verb == "kappa" else dunkl.theta
    if not 1 <= args.p <= args.N:
        raise UsageError(f"P={args.p} must lie in 1..{args.N}")
    e = make(args.p, args.N).element
    out.text(str(e))
    out.json({"kind": args.verb, "p": args.p, "n": args.N, "element": e.to_json()})
    return EXIT_OK


def cmd_monk(args, out: Output) -> int:
    n = _rank(args, args.v, minimum=args.p + 1)
    v = args.v.embed(n)
    rule = monk_multiply if args.verb == "monk" else kmonk_chains
    res = rule(args.p, v, rank=n)
    out.text(_signed_sum(res))
    out.json({"kind": args.verb, "p": args.p, "v": str(v), "n": n,
              "terms": [{"w": str(w), "c": c} for w, c in _terms(res)]})
    return EXIT_OK


def cmd_constants(args, out: Output) -> int:
    n = _rank(args, args.u, args.v)
    u, v = args.u.embed(n), args.v.embed(n)
    results = {}
    if args.method in ("poly", "both"):
        expansion = structure_constants_poly(u, v)
        full = expansion.coefficients
        results["poly"] = expansion.restricted(n) if args.method == "both" else {
            w.embed(max(n, w.rank)): c for w, c in full.items()}
    if args.method in ("dunkl", "both"):
        results["dunkl"] = bruhatrep.structure_constants_dunkl(u, v, n)
    payload = [bruhatrep.constants_to_json(u, v, n, m, c) for m, c in results.items()]
    for m, c in results.items():
        out.text(f"# {m}: G_{u} * G_{v}" + (f", w in S_{n}" if args.method == "both" else ""))
        out.text(bruhatrep.constants_table(c))
    if args.method == "both":
        agree = results["poly"] == results["dunkl"]
        out.text("AGREE" if agree else "DISAGREE")
        out.json({"routes": payload, "agree": agree})
        return EXIT_OK if agree else EXIT_FAIL
    out.json(payload[0])
    return EXIT_OK


def cmd_verify(args, out: Output) -> int:
    what = args.what
    if what == "commute":
        mode = args.mode or ("full" if args.n <= 4 else "restricted")
        report = dunkl.verify_commutation(args.n, mode)
        if args.mode is None and mode == "restricted":
            # the default large-n route also checks the operators themselves
            report.extend(bruhatrep.verify_representation(args.n))
        title = f"commutation n={args.n} ({mode})"
    elif what == "sum-zero":
        report, title = dunkl.verify_sum_zero(args.n), f"sum-zero n={args.n}"
    elif what == "lemma1":
        X = set(args.X)
        if not X or min(X) < 1:
            raise UsageError("--X must list positive integers")
        if args.d is not None and not len(X) <= args.d <= 2 * len(X) + 2:
            raise UsageError(f"--d {args.d} outside [{len(X)}, {2 * len(X) + 2}]")
        report, title = dunkl.verify_lemma1(X, args.d), f"Sigma(X={sorted(X)}) = 0 in E_X"
    elif what == "starstar":
        report, title = dunkl.verify_starstar(args.s), f"starred products s={args.s}"
    else:
        report, title = bruhatrep.verify_representation(args.n), f"Bruhat representation n={args.n}"
    _emit_report(out, report, title)
    return _report_exit(report)


def cmd_check(args, out: Output) -> int:
    w = None
    if args.w is not None:
        if args.w.rank > args.n:
            raise UsageError(f"--w {args.w} is not in S_{args.n}")
        w = args.w
    report = dunkl.check_nonnegativity(args.n, w, args.theory)
    _emit_report(out, report, f"nonnegativity n={args.n} theory={args.theory}")
    return _report_exit(report)


def cmd_probe(args, out: Output) -> int:
    if not 1 <= args.k <= args.n:
        raise UsageError(f"--k {args.k} must lie in 1..{args.n}")
    report = dunkl.symmetric_probe(args.k, args.n)
    _emit_report(out, report, f"e_{args.k}(kappa) n={args.n}")
    return _report_exit(report, fatal=False)


# --------------------------------------------------------------------------
# parser


def build_parser() -> argparse.ArgumentParser:
    common = _Parser(add_help=False)
    common.add_argument("--json", action="store_true", default=argparse.SUPPRESS,
                        help="machine-readable output")
    common.add_argument("--cache", metavar="DIR", default=argparse.SUPPRESS,
                        help="directory for the polynomial cache")

    rank = _Parser(add_help=False)
    rank.add_argument("--n", type=_positive, default=argparse.SUPPRESS,
                      help="override the rank inferred from the permutation words")

    parser = _Parser(prog="kdunkl", parents=[common],
                     description="K-theoretic Dunkl elements, Grothendieck polynomials and their structure constants.")
    sub = parser.add_subparsers(dest="verb", required=True, parser_class=_Parser)

    def leaf(name: str, func: Callable, help_: str, extra=()):
        p = sub.add_parser(name, parents=[common, *extra], help=help_)
        p.set_defaults(func=func)
        return p

    for name in ("schubert", "grothendieck"):
        p = leaf(name, cmd_polynomial, f"{name} polynomial of W", [rank])
        p.add_argument("w", type=_perm, metavar="W")
    for name in ("kappa", "theta"):
        p = leaf(name, cmd_dunkl, f"{name}_P in E_N")
        p.add_argument("p", type=_positive, metavar="P")
        p.add_argument("N", type=_positive)
    for name, kind in (("monk", "Schubert"), ("kmonk", "Grothendieck")):
        p = leaf(name, cmd_monk, f"x_P times the {kind} class of V", [rank])
        p.add_argument("p", type=_positive, metavar="P")
        p.add_argument("v", type=_perm, metavar="V")
    p = leaf("constants", cmd_constants, "Grothendieck structure constants c_UV^w", [rank])
    p.add_argument("u", type=_perm, metavar="U")
    p.add_argument("v", type=_perm, metavar="V")
    p.add_argument("--method", choices=("poly", "dunkl", "both"), default="both")

    verify = sub.add_parser("verify", parents=[common], help="certify identities")
    vsub = verify.add_subparsers(dest="what", required=True, parser_class=_Parser)

    def vleaf(name: str, help_: str):
        q = vsub.add_parser(name, parents=[common], help=help_)
        q.set_defaults(func=cmd_verify)
        return q

    q = vleaf("commute", "kappa_p kappa_q = kappa_q kappa_p in E_n")
    q.add_argument("--n", type=_positive, required=True)
    q.add_argument("--mode", choices=("full", "restricted"))
    q = vleaf("sum-zero", "kappa_1 + ... + kappa_n = 0 in E_n")
    q.add_argument("--n", type=_positive, required=True)
    q = vleaf("lemma1", "Sigma(X, d) = 0 in E_X")
    q.add_argument("--X", type=_int_list, required=True)
    q.add_argument("--d", type=int)
    q = vleaf("starstar", "*i1 i1'...is is'* = 0 in E_X")
    q.add_argument("--s", type=_positive, required=True)
    q = vleaf("rep", "Bruhat representation checks")
    q.add_argument("--n", type=_positive, required=True)

    check = sub.add_parser("check", parents=[common], help="cone (nonnegativity) checks")
    csub = check.add_subparsers(dest="what", required=True, parser_class=_Parser)
    q = csub.add_parser("nonneg", parents=[common], help="G_w(kappa) or S_w(theta) in the cone")
    q.set_defaults(func=cmd_check)
    q.add_argument("--n", type=_positive, required=True)
    q.add_argument("--w", type=_perm)
    q.add_argument("--theory", choices=("k", "cohomology"), default="k")

    probe = sub.add_parser("probe", parents=[common], help="exploratory probes")
    psub = probe.add_subparsers(dest="what", required=True, parser_class=_Parser)
    q = psub.add_parser("symmetric", parents=[common], help="e_k(kappa_1..kappa_n) in the ideal?")
    q.set_defaults(func=cmd_probe)
    q.add_argument("--k", type=_positive, required=True)
    q.add_argument("--n", type=_positive, required=True)
    return parser


def run(argv: Optional[Sequence[str]] = None, stdout=None, stderr=None) -> int:
    stdout = stdout or sys.stdout
    stderr = stderr or sys.stderr
    parser = build_parser()
    argv = list(sys.argv[1:] if argv is None else argv)
    try:
        args = parser.parse_args(argv)
    except UsageError as exc:
        stderr.write(f"kdunkl: error: {exc}\n")
        return EXIT_USAGE
    except SystemExit as exc:  # --help
        return int(exc.code or 0)
    for name in ("json", "cache", "n"):
        if not hasattr(args, name):
            setattr(args, name, None)
    out = Output(bool(args.json))
    previous = None
    if args.cache:
        previous = set_polynomial_cache(PolynomialCache(args.cache))
    try:
        code = args.func(args, out)
    except UsageError as exc:
        stderr.write(f"kdunkl: error: {exc}\n")
        return EXIT_USAGE
    except RankTooSmall as exc:
        stderr.write(f"kdunkl: {exc}\n")
        return EXIT_UNDECIDED
    except (ValueError, IndexError) as exc:
        stderr.write(f"kdunkl: error: {exc}\n")
        return EXIT_USAGE
    finally:
        if args.cache:
            set_polynomial_cache(previous)
    out.flush(stdout)
    return code


def main() -> None:
    sys.exit(run())


if __name__ == "__main__":
    main()
