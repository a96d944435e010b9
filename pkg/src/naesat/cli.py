"""Command line front end: ``naesat <command> ...``.

Exit codes: 0 ok / satisfiable / valid, 1 unsatisfiable / invalid / nothing
found, 2 usage or parse error.
"""

from __future__ import annotations

import argparse
import sys
from pathlib import Path

from . import gadgets, textio
from .formula import Decomposition, Formula, Profile, ProfileError, validate
from .generator import DEFAULT_MAX_REJECTIONS, GenerationError, GenSpec, gen_k_disjoint
from .hypergraph import formula_to_hypergraph, hypergraph_to_formula
from .reductions import ROUTES, run_route
from .solver import CapExceeded, count_solutions, solve_backtracking, solve_exhaustive

OK, NEGATIVE, USAGE = 0, 1, 2


class _Out:
    def __init__(self, quiet: bool):
        self.quiet = quiet

    def report(self, *lines: str) -> None:
        if not self.quiet:
            for line in lines:
                print(line, file=sys.stderr)


def _read(path: str) -> bytes:
    if path == "-":
        return sys.stdin.buffer.read()
    return Path(path).read_bytes()


def _write(text: str, path: str | None) -> None:
    if path is None or path == "-":
        sys.stdout.write(text)
    else:
        Path(path).write_text(text)


def _load(path: str) -> tuple[Formula, Decomposition | None]:
    return textio.parse(_read(path))


def witness_line(a: dict[int, bool], n: int) -> str:
    return "v " + " ".join(str(v + 1) if a[v] else str(-(v + 1)) for v in range(n)) + " 0"


def cmd_validate(args, out: _Out) -> int:
    f, d = _load(args.file)
    profile = Profile.parse(args.profile) if args.profile else None
    report = validate(f, d, profile)
    print("\n".join(report.lines()))
    return OK if report.passed in (None, True) else NEGATIVE


def cmd_solve(args, out: _Out) -> int:
    f, _ = _load(args.file)
    if args.count:
        print(count_solutions(f, cap=args.cap))
        return OK
    if args.exhaustive:
        result = solve_exhaustive(f, cap=args.cap)
        out.report(f"c assignments tested {result.assignments_tested}")
    else:
        result = solve_backtracking(f, chains=not args.no_chains)
        out.report(f"c nodes {result.nodes}")
    print("s SATISFIABLE" if result.satisfiable else "s UNSATISFIABLE")
    if result.satisfiable and args.witness:
        print(witness_line(result.witness, f.num_vars))
    return OK if result.satisfiable else NEGATIVE


def cmd_reduce(args, out: _Out) -> int:
    f, d = _load(args.file)
    art = run_route(args.route, f, d)
    _write(textio.serialize(art.target, art.target_decomposition), args.output)
    if args.provenance:
        Path(args.provenance).write_text(textio.serialize_provenance(art.provenance))
    out.report(
        f"c route {art.route}",
        f"c source {f.num_vars} variables, {f.num_clauses} clauses",
        f"c target {art.target.num_vars} variables, {art.target.num_clauses} clauses, "
        f"{art.target_decomposition.k} blocks",
        f"c profile {art.profile.name}: PASS",
    )
    return OK


def cmd_gadget(args, out: _Out) -> int:
    if args.kind == "noinstance":
        f, d = gadgets.canonical_no_instance()
        _write(textio.serialize(f, d), args.output)
        return OK
    if args.kind == "padding":
        g = gadgets.padding_set()
    else:
        g = gadgets.eq_gadget() if args.kind == "eq" else gadgets.eq_lin_gadget()
    f, d = g.formula()
    if args.verify:
        if args.kind == "padding":
            print("padding sets have no interface check", file=sys.stderr)
            return USAGE
        v = gadgets.verify_equality_gadget(g)
        for row in v.rows:
            bits = "".join("T" if b else "F" for b in row.interface)
            print(f"{bits}\textensions={len(row.extensions)}\t{'ok' if row.ok else 'FAIL'}")
        out.report(f"c {v.kind}: {v.evaluations} evaluations, {'PASS' if v.passed else 'FAIL'}")
        return OK if v.passed else NEGATIVE
    # padding blocks have unequal sizes but still tag every clause once
    _write(textio.serialize(f, d), args.output)
    return OK


def cmd_convert(args, out: _Out) -> int:
    if args.to_hypergraph:
        f, d = _load(args.file)
        _write(textio.serialize_hypergraph(formula_to_hypergraph(f, d)), args.output)
    else:
        h = textio.parse_hypergraph(_read(args.file))
        f, d = hypergraph_to_formula(h)
        _write(textio.serialize(f, d), args.output)
    return OK


def cmd_gen(args, out: _Out) -> int:
    spec = GenSpec(args.vars, args.k, args.linear, args.disjoint, args.seed, args.max_rejections)
    f, d = gen_k_disjoint(spec)
    if not args.disjoint and not d.is_index_partition(f.num_clauses):
        out.report("c blocks share clauses; writing without block tags")
        d = None
    _write(textio.serialize(f, d), args.output)
    return OK


def cmd_hunt(args, out: _Out) -> int:
    """Generate-and-solve loop looking for an unsatisfiable k-disjoint instance."""
    for i in range(args.tries):
        spec = GenSpec(args.vars, args.k, args.linear, True, args.seed + i, args.max_rejections)
        try:
            f, d = gen_k_disjoint(spec)
        except GenerationError as e:
            out.report(f"c seed {spec.seed}: {e}")
            continue
        if not solve_backtracking(f).satisfiable:
            out.report(f"c seed {spec.seed}: unsatisfiable")
            _write(textio.serialize(f, d), args.output)
            return OK
    out.report(f"c no unsatisfiable instance in {args.tries} tries")
    return NEGATIVE


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--quiet", action="store_true", default=argparse.SUPPRESS,
                        help="suppress reports on stderr")
    p = argparse.ArgumentParser(prog="naesat", parents=[common],
                                description="Not-all-equal satisfiability toolkit")
    sub = p.add_subparsers(dest="command", required=True)

    s = sub.add_parser("validate", parents=[common], help="structural report")
    s.add_argument("file")
    s.add_argument("--profile", help="e.g. positive-linear-4-disjoint-e4, linear-pq:2,1")
    s.set_defaults(run=cmd_validate)

    s = sub.add_parser("solve", parents=[common], help="decide nae-satisfiability")
    s.add_argument("file")
    mode = s.add_mutually_exclusive_group()
    mode.add_argument("--exhaustive", action="store_true")
    mode.add_argument("--backtracking", action="store_true", help="the default")
    mode.add_argument("--count", action="store_true", help="count all satisfying assignments")
    s.add_argument("--witness", action="store_true")
    s.add_argument("--no-chains", action="store_true", help="forcing rule only")
    s.add_argument("--cap", type=int, default=30, help="exhaustive variable cap")
    s.set_defaults(run=cmd_solve)

    s = sub.add_parser("reduce", parents=[common], help="apply a reduction")
    s.add_argument("file")
    s.add_argument("--route", required=True, help=", ".join(ROUTES))
    s.add_argument("-o", "--output")
    s.add_argument("--provenance", help="write the provenance sidecar here")
    s.set_defaults(run=cmd_reduce)

    s = sub.add_parser("gadget", parents=[common], help="emit a gadget fragment")
    s.add_argument("kind", choices=["eq", "eqlin", "padding", "noinstance"])
    s.add_argument("--verify", action="store_true", help="exhaustive interface check")
    s.add_argument("-o", "--output")
    s.set_defaults(run=cmd_gadget)

    s = sub.add_parser("convert", parents=[common], help="formula <-> hypergraph")
    s.add_argument("file")
    way = s.add_mutually_exclusive_group(required=True)
    way.add_argument("--to-hypergraph", action="store_true")
    way.add_argument("--from-hypergraph", action="store_true")
    s.add_argument("-o", "--output")
    s.set_defaults(run=cmd_convert)

    for name, fn, about in (("gen", cmd_gen, "generate a random k-partition instance"),
                            ("hunt", cmd_hunt, "search random disjoint instances for an unsatisfiable one")):
        s = sub.add_parser(name, parents=[common], help=about)
        s.add_argument("--vars", type=int, required=(name == "gen"), default=9)
        s.add_argument("--k", type=int, required=True)
        s.add_argument("--linear", action="store_true")
        s.add_argument("--seed", type=int, default=0)
        s.add_argument("--max-rejections", type=int, default=DEFAULT_MAX_REJECTIONS)
        s.add_argument("-o", "--output")
        if name == "gen":
            s.add_argument("--disjoint", action="store_true")
        else:
            s.add_argument("--tries", type=int, default=100)
        s.set_defaults(run=fn)
    return p


def main(argv: list[str] | None = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    out = _Out(getattr(args, "quiet", False))
    try:
        return args.run(args, out)
    except textio.ParseError as e:
        print(f"parse error: {e}", file=sys.stderr)
        return USAGE
    except (ProfileError, GenerationError) as e:
        print(f"error: {e}", file=sys.stderr)
        return NEGATIVE
    except (CapExceeded, OSError, ValueError) as e:
        print(f"error: {e}", file=sys.stderr)
        return USAGE


if __name__ == "__main__":
    sys.exit(main())
