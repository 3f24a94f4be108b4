"""Command-line front end: ``ekrcheck <subcommand>``.

One canonical JSON object per suite goes to stdout, a human summary to
stderr.  Exit codes: 0 pass, 1 mathematical failure, 2 usage or parse
error, 3 capacity exceeded.
"""

from __future__ import annotations

import argparse
import os
import sys
from pathlib import Path
from typing import Optional

from . import boolfn, cert, clique, io, representation as rep, suites
from .domains import Kind, is_t_intersecting_family
from .errors import CapacityError, MathematicalAssertionError, UsageError

EXIT_PASS, EXIT_FAIL, EXIT_USAGE, EXIT_CAPACITY = 0, 1, 2, 3
THREADS_ENV = "EKRCHECK_THREADS"
# members listed individually in the cert report up to this many 1-inputs
MAX_LISTED_MEMBERS = 256


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        raise UsageError(message)


def parse_range(text: str) -> list[int]:
    """'4..7', '5' or '4,6'."""
    try:
        if ".." in text:
            lo, hi = text.split("..")
            values = list(range(int(lo), int(hi) + 1))
        else:
            values = [int(v) for v in text.split(",")]
    except ValueError:
        raise UsageError(f"bad range {text!r}; use e.g. 4..7 or 4,5") from None
    if not values:
        raise UsageError(f"empty range {text!r}")
    return values


def resolve_threads(flag: Optional[int]) -> int:
    if flag is not None:
        value = flag
    else:
        raw = os.environ.get(THREADS_ENV, "1")
        try:
            value = int(raw)
        except ValueError:
            raise UsageError(f"{THREADS_ENV}={raw!r} is not an integer") from None
    if value < 1:
        raise UsageError("thread count must be positive")
    return value


class Reporter:
    def __init__(self, timings: bool):
        self.timings = timings
        self.failed = False

    def emit(self, result: suites.SuiteResult) -> None:
        print(io.dumps(result.as_dict(self.timings)), flush=True)
        status = "PASS" if result.passed else "FAIL"
        print(f"[{status}] {result.name} ({result.elapsed:.2f}s)", file=sys.stderr)
        for n, seconds in result.timings.items():
            print(f"    n={n}: {seconds:.2f}s", file=sys.stderr)
        self.failed |= not result.passed


def _function_header(f) -> dict:
    return {"kind": f.kind.value, "n": f.n, "weight": f.weight}


# -- subcommands -------------------------------------------------------------------

def cmd_sens_scan(args, out: Reporter) -> None:
    if args.k < 1 or args.s < 0:
        raise UsageError("need k >= 1 and s >= 0")

    def body():
        witness = boolfn.degree2_sensitivity_scan(args.k, args.s, args.point, args.strategy)
        # the exhaustive scans up to k = 5 find degree-2 sensitivity at most 3
        expect_witness = args.s <= min(3, args.k)
        evidence = {
            "span_dimension": boolfn.cube_span_dimension(args.k, 2),
            "witness": None if witness is None else {
                "table": list(witness.truth),
                "degree": boolfn.cube_degree(witness),
                "sensitivity": boolfn.sensitivity_at(witness, args.point),
            },
            "expected_witness": expect_witness,
        }
        return (witness is not None) == expect_witness, evidence

    params = {"k": args.k, "s": args.s, "point": args.point, "strategy": args.strategy}
    out.emit(suites._timed("sens-scan", params, body))


def cmd_verify(args, out: Reporter) -> None:
    ns = parse_range(args.n)
    kind = Kind(args.kind)
    if min(ns) < 2:
        raise UsageError("verify needs n >= 2")
    limit = clique.MAX_N[kind]
    if max(ns) > limit:
        raise CapacityError(f"verify supports {kind.value} n <= {limit}")
    threads = resolve_threads(args.threads)
    emit = args.emit_cliques is not None

    def body():
        results = suites.run_verifications(kind, ns, threads, emit)
        timings.update((str(r["n"]), r.pop("elapsed_s")) for r in results)
        if emit:
            _write_cliques(Path(args.emit_cliques), kind, results)
        if args.dump_graph:
            _dump_graphs(Path(args.dump_graph), kind, ns)
        evidence = {
            "clique_numbers": [r["clique_number"] for r in results],
            "maximum_clique_counts": [r["maximum_clique_count"] for r in results],
            "per_n": results,
        }
        return all(r["passed"] for r in results), evidence

    timings: dict = {}
    result = suites._timed("verify", {"kind": kind.value, "n": ns, "t": 2}, body)
    result.timings = timings
    out.emit(result)


def _write_cliques(directory: Path, kind: Kind, results: list[dict]) -> None:
    directory.mkdir(parents=True, exist_ok=True)
    for r in results:
        n = r["n"]
        for k, ranks in enumerate(r.pop("cliques", []), start=1):
            members = clique.clique_family(kind, n, ranks)
            io.write_family(directory / f"{kind.value}-n{n}-clique{k:02d}.json", kind, n, members)


def _dump_graphs(directory: Path, kind: Kind, ns) -> None:
    directory.mkdir(parents=True, exist_ok=True)
    for n in ns:
        graph = clique.build_graph(kind, n, 2)
        (directory / f"{kind.value}-n{n}-t2.dimacs").write_text(graph.dimacs())


def cmd_degree(args, out: Reporter) -> None:
    f = io.load_function(args.file)

    def body():
        d_poly = boolfn.polynomial_degree(f)
        evidence = {**_function_header(f), "polynomial_degree": d_poly}
        if args.polynomial_only:
            return True, evidence
        d_spec = rep.spectral_degree(f)
        evidence["spectral_degree"] = d_spec
        return d_poly == d_spec, evidence

    out.emit(suites._timed("degree", {"file": Path(args.file).name}, body))


def cmd_cert(args, out: Reporter) -> None:
    f = io.load_function(args.file)

    def body():
        evidence = {**_function_header(f),
                    "certificate_complexity": cert.certificate_complexity(f, args.limit),
                    "one_side_certificate_complexity": cert.one_side_certificate_complexity(f, args.limit)}
        ones = f.ones()
        if len(ones) <= MAX_LISTED_MEMBERS:
            evidence["members"] = [
                {"element": io.element_to_json(x), "size": size, "certificate": io.certificate_to_json(c)}
                for x in ones for size, c in [cert.min_certificate(f, x)]]
        passed = True
        if is_t_intersecting_family(ones, 2) and len(ones) <= MAX_LISTED_MEMBERS:
            report = cert.check_pairwise_certificate_intersection(f, args.limit)
            evidence["pairwise_intersection"] = report.as_dict()
            # a violation while the hypothesis holds is a genuine failure
            passed = not (report.precondition and report.violations)
        return passed, evidence

    out.emit(suites._timed("cert", {"file": Path(args.file).name}, body))


def cmd_isotypic(args, out: Reporter) -> None:
    f = io.load_function(args.file)

    def body():
        comps = rep.decompose(f)
        checks = suites.check_decomposition(f)
        evidence = {
            **_function_header(f),
            "components": [
                {"lambda": list(c.partition), "norm_sq": io.fraction_text(c.norm_sq),
                 "dimension": rep.component_dimension(f.kind, c.partition)}
                for c in comps],
            "spectral_degree": rep.spectral_degree(f),
            **checks,
        }
        return all(checks.values()), evidence

    out.emit(suites._timed("isotypic", {"file": Path(args.file).name}, body))


def cmd_properties(args, out: Reporter) -> None:
    names = args.suite or list(suites.SUITES)
    unknown = [name for name in names if name not in suites.SUITES]
    if unknown:
        raise UsageError(f"unknown suite(s) {unknown}; choose from {sorted(suites.SUITES)}")
    if not 4 <= args.pm_max_n <= clique.MAX_N[Kind.PM]:
        raise UsageError(f"--pm-max-n must lie in 4..{clique.MAX_N[Kind.PM]}")
    opts = {"threads": resolve_threads(args.threads), "pm_max_n": args.pm_max_n}
    for name in names:
        result = suites.SUITES[name](args.seed, opts)
        result.parameters = {**result.parameters, "seed": args.seed}
        out.emit(result)


# -- wiring ---------------------------------------------------------------------------

def build_parser() -> argparse.ArgumentParser:
    common = _Parser(add_help=False)
    common.add_argument("--threads", type=int, default=None,
                        help=f"worker processes (default: ${THREADS_ENV} or 1)")
    common.add_argument("--seed", type=int, default=suites.DEFAULT_SEED)
    common.add_argument("--timings", action="store_true",
                        help="include wall-clock timings in the JSON reports (not byte-stable)")

    parser = _Parser(prog="ekrcheck", description=__doc__.splitlines()[0])
    sub = parser.add_subparsers(dest="command", required=True, parser_class=_Parser)

    p = sub.add_parser("sens-scan", parents=[common], help="degree-2 sensitivity scan on the cube")
    p.add_argument("--k", type=int, required=True)
    p.add_argument("--s", type=int, required=True)
    p.add_argument("--point", type=int, default=0)
    p.add_argument("--strategy", choices=["auto", "truth-table", "span"], default="auto")
    p.set_defaults(run=cmd_sens_scan)

    p = sub.add_parser("verify", parents=[common], help="maximum 2-intersecting families via cliques")
    p.add_argument("--kind", choices=[k.value for k in Kind], required=True)
    p.add_argument("--n", required=True, help="e.g. 4..7")
    p.add_argument("--emit-cliques", metavar="DIR", help="write every maximum clique as a family file")
    p.add_argument("--dump-graph", metavar="DIR", help="write each graph in DIMACS format")
    p.set_defaults(run=cmd_verify)

    for name, fn, text in (("degree", cmd_degree, "polynomial and spectral degree"),
                           ("cert", cmd_cert, "certificate complexity"),
                           ("isotypic", cmd_isotypic, "isotypic decomposition")):
        p = sub.add_parser(name, parents=[common], help=text)
        p.add_argument("file", help="family file or bits file (JSON)")
        p.set_defaults(run=fn)
        if name == "degree":
            p.add_argument("--polynomial-only", action="store_true")
        if name == "cert":
            p.add_argument("--limit", type=int, default=None, help="largest n for full-domain exhaustion")

    p = sub.add_parser("properties", parents=[common], help="run the invariant suites")
    p.add_argument("--suite", action="append", help=f"one of {', '.join(suites.SUITES)} (repeatable)")
    p.add_argument("--pm-max-n", type=int, default=6, help="largest n for the matching clique suite")
    p.set_defaults(run=cmd_properties)
    return parser


def main(argv: Optional[list[str]] = None) -> int:
    try:
        args = build_parser().parse_args(argv)
        reporter = Reporter(args.timings)
        args.run(args, reporter)
    except UsageError as exc:
        print(f"usage error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except CapacityError as exc:
        print(f"capacity exceeded: {exc}", file=sys.stderr)
        return EXIT_CAPACITY
    except MathematicalAssertionError as exc:
        print(f"mathematical assertion failed: {exc}", file=sys.stderr)
        return EXIT_FAIL
    return EXIT_FAIL if reporter.failed else EXIT_PASS


if __name__ == "__main__":
    sys.exit(main())
