"""Command-line front end: ``gbt <subcommand> ...``.

Exit codes: 0 success, 1 failed verification or failed scan instance,
2 usage error.
"""

from __future__ import annotations

import argparse
import json
import sys

from . import exact, search, spectra, verify
from .partition import divisor_matrix, divisor_to_text
from .tree import (
    DegreeSequence,
    InvalidDegreeSequence,
    adjacency,
    build_tree,
    classify,
    counterexample_degrees,
)

FLOAT_DIGITS = 12


def _fix_floats(obj):
    if isinstance(obj, float):
        return round(obj, FLOAT_DIGITS) + 0.0  # folds -0.0
    if isinstance(obj, dict):
        return {str(k): _fix_floats(v) for k, v in obj.items()}
    if isinstance(obj, (list, tuple)):
        return [_fix_floats(v) for v in obj]
    return obj


def dumps(obj) -> str:
    """Deterministic JSON: sorted keys, floats rounded to a fixed number of decimals."""
    return json.dumps(_fix_floats(obj), sort_keys=True, indent=2)


class UsageError(Exception):
    pass


def _degree_sequence(args) -> DegreeSequence:
    if getattr(args, "degrees", None):
        return args.degrees
    if getattr(args, "k", None) is not None:
        return counterexample_degrees(args.k)
    raise UsageError("one of --degrees or --k is required")


def _degrees_arg(text: str) -> DegreeSequence:
    try:
        return DegreeSequence.parse(text)
    except InvalidDegreeSequence as exc:
        raise argparse.ArgumentTypeError(str(exc)) from None


def _add_instance_flags(p: argparse.ArgumentParser) -> None:
    group = p.add_mutually_exclusive_group(required=True)
    group.add_argument("--degrees", type=_degrees_arg, help="comma-separated degrees, e.g. 5,3,5,3,2")
    group.add_argument("--k", type=int, help="use the even-k counterexample B(5,k-3,5,3,2,...,2)")


def _add_output_flags(p: argparse.ArgumentParser, text: bool = True) -> None:
    choices = ["json", "text"] if text else ["json"]
    p.add_argument("--format", choices=choices, default="json")
    p.add_argument("--out", help="write the report here instead of stdout")


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="gbt", description="Main spectra of generalized Bethe trees.")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("build", help="construct the tree; JSON or 0-based edge list")
    _add_instance_flags(p)
    _add_output_flags(p)

    p = sub.add_parser("divisor", help="divisor matrix of the level partition")
    _add_instance_flags(p)
    _add_output_flags(p)

    p = sub.add_parser("charpoly", help="characteristic polynomials of divisor (and tree)")
    _add_instance_flags(p)
    p.add_argument("--tree", action="store_true", help="also compute det(xI - A) of the full tree")
    _add_output_flags(p)

    p = sub.add_parser("main-count", help="number of main eigenvalues")
    _add_instance_flags(p)
    mode = p.add_mutually_exclusive_group()
    mode.add_argument("--exact", dest="mode", action="store_const", const="exact")
    mode.add_argument("--numeric", dest="mode", action="store_const", const="numeric")
    mode.add_argument("--both", dest="mode", action="store_const", const="both")
    p.set_defaults(mode="exact")
    p.add_argument("--tol-cluster", type=float, default=spectra.TOL_CLUSTER)
    p.add_argument("--tol-main", type=float, default=spectra.TOL_MAIN)
    p.add_argument("--tol-resid", type=float, default=spectra.TOL_RESID)
    _add_output_flags(p)

    p = sub.add_parser("verify", help="run verification checks")
    p.add_argument("claim", choices=["counterexample", "theorem1", "hou", "lemma8", "identities", "all"])
    p.add_argument("--k", type=int)
    p.add_argument("--d", type=int)
    p.add_argument("--alpha", type=int)
    p.add_argument("--degrees", type=_degrees_arg)
    _add_output_flags(p, text=False)

    p = sub.add_parser("search", help="exhaustive exact scan over degree sequences")
    p.add_argument("--k", type=int, required=True)
    p.add_argument("--max-degree", type=int, required=True)
    p.add_argument("--jobs", type=int, default=1)
    p.add_argument("--out", help="JSON output path")
    p.add_argument("--quiet", action="store_true", help="no progress on stderr")
    return parser


def _cmd_build(args):
    tree = build_tree(_degree_sequence(args))
    if args.format == "text":
        return tree.edge_list_text(), 0
    return dumps(tree.to_dict()), 0


def _cmd_divisor(args):
    ds = _degree_sequence(args)
    B = divisor_matrix(ds)
    if args.format == "text":
        return divisor_to_text(B), 0
    return dumps({"degrees": list(ds.degrees), "k": ds.k, "divisor": B.tolist()}), 0


def _cmd_charpoly(args):
    ds = _degree_sequence(args)
    p = exact.charpoly_tridiagonal(divisor_matrix(ds))
    report = {"degrees": list(ds.degrees), "divisor_charpoly": p.to_json_list()}
    lines = [f"det(xI - B) = {p}"]
    if args.tree:
        q = exact.charpoly_tree(ds)
        divides = exact.poly_divides(p, q)
        report.update(tree_charpoly=q.to_json_list(), divides=divides)
        lines += [f"det(xI - A) = {q}", f"divides: {divides}"]
    if args.format == "text":
        return "\n".join(lines) + "\n", 0
    return dumps(report), 0


def _cmd_main_count(args):
    ds = _degree_sequence(args)
    report = {"degrees": list(ds.degrees), "k": ds.k, "class": str(classify(ds)), "method": args.mode}
    if args.mode in ("exact", "both"):
        report["main_count"] = exact.main_count_divisor(divisor_matrix(ds))
    if args.mode in ("numeric", "both"):
        A = adjacency(build_tree(ds, cap=spectra.DEFAULT_EIGEN_CAP))
        numeric = spectra.main_spectrum_numeric(
            A, tol_cluster=args.tol_cluster, tol_main=args.tol_main, tol_resid=args.tol_resid)
        report["numeric"] = numeric.to_dict()
        if args.mode == "numeric":
            report["main_count"] = numeric.main_count
        else:
            report["agree"] = numeric.main_count == report["main_count"]
            if not report["agree"]:
                report["diagnostic"] = "numeric count differs from exact; exact is authoritative"
    if args.format == "text":
        lines = [f"B({ds}) k={ds.k} main_count={report['main_count']} ({args.mode})"]
        if "numeric" in report:
            lines.append(f"{'value':>16} {'mult':>5} {'proj':>12} main")
            for c in report["numeric"]["clusters"]:
                lines.append(f"{c['value']:16.10f} {c['mult']:5d} {c['proj']:12.3e} {'yes' if c['main'] else 'no'}")
            if "agree" in report:
                lines.append(f"exact={report['main_count']} numeric={report['numeric']['main_count']} "
                             f"agree={report['agree']}")
        return "\n".join(lines) + "\n", 0
    return dumps(report), 0


def _require(args, *names):
    missing = [n for n in names if getattr(args, n) is None]
    if missing:
        raise UsageError(f"verify {args.claim} needs --{' --'.join(missing)}")


def _cmd_verify(args):
    if args.claim == "counterexample":
        _require(args, "k")
        outcomes = [verify.verify_counterexample(args.k)]
    elif args.claim == "theorem1":
        _require(args, "d", "k")
        outcomes = [verify.verify_theorem1(args.d, args.k)]
    elif args.claim == "hou":
        _require(args, "alpha")
        outcomes = [verify.verify_hou(args.alpha)]
    elif args.claim == "lemma8":
        _require(args, "degrees")
        outcomes = [verify.verify_main_spectrum_equality(args.degrees)]
    elif args.claim == "identities":
        _require(args, "degrees")
        outcomes = [verify.verify_divisor_identities(args.degrees), verify.verify_similarity(args.degrees)]
    else:
        outcomes = verify.default_suite()
    print(verify.summarize(outcomes), file=sys.stderr)
    code = 0 if all(o.passed for o in outcomes) else 1
    return dumps([o.to_dict() for o in outcomes]), code


def _cmd_search(args):
    config = search.SearchConfig(args.k, args.max_degree, args.jobs, None)

    def progress(done, total):
        print(f"\rscanned {done}/{total}", end="" if done < total else "\n", file=sys.stderr)

    if args.k == 4:
        report = search.scan_k4(args.max_degree, args.jobs, None if args.quiet else progress)
        ok = not report["failures"] and all(h["reverified"] is not False for h in report["hits"])
    else:
        result = search.scan(config, None if args.quiet else progress)
        report, ok = result.to_dict(), result.ok
    text = dumps(report)
    if args.out:
        with open(args.out, "w") as fh:
            fh.write(text + "\n")
    print(f"{len(report['hits'])} hit(s) among {report['total']} sequences", file=sys.stderr)
    return text, 0 if ok else 1


COMMANDS = {
    "build": _cmd_build,
    "divisor": _cmd_divisor,
    "charpoly": _cmd_charpoly,
    "main-count": _cmd_main_count,
    "verify": _cmd_verify,
    "search": _cmd_search,
}


def run(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)  # exits 2 on bad flags
    try:
        text, code = COMMANDS[args.command](args)
    except (UsageError, ValueError) as exc:
        print(f"gbt {args.command}: error: {exc}", file=sys.stderr)
        return 2
    if not text.endswith("\n"):
        text += "\n"
    out = getattr(args, "out", None)
    if out and args.command != "search":
        with open(out, "w") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)
    return code


def main() -> None:
    sys.exit(run())


if __name__ == "__main__":
    main()
