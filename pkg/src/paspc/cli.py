"""Command-line interface.

Exit codes: 0 success, 2 parse error, 3 invalid or ill-matched decomposition
file, 4 algorithm/class mismatch, 5 oracle-check mismatch.  The count is the
final stdout line, formatted ``c <count>``; --stats emits JSON on stderr.
"""

from __future__ import annotations

import argparse
import json
import os
import sys

from . import formats, oracle
from .decomposition import primal_graph, validate_td
from .pipeline import AlgorithmMismatchError, solve

EXIT_OK = 0
EXIT_PARSE = 2
EXIT_TD = 3
EXIT_ALGORITHM = 4
EXIT_ORACLE = 5


def _build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="paspc", description="Projected answer-set counter")
    sub = parser.add_subparsers(dest="command", required=True)
    s = sub.add_parser("solve", help="count projected answer sets of a ground program")
    s.add_argument("file", help="program file")
    proj_group = s.add_mutually_exclusive_group()
    proj_group.add_argument("--project", help="comma-separated projection atoms (overrides #project)")
    proj_group.add_argument("--project-all", action="store_true", help="project onto all atoms")
    proj_group.add_argument("--project-none", action="store_true", help="empty projection (consistency as count)")
    s.add_argument("--algorithm", default="auto", choices=["auto", "phc", "phc-tight", "prim"])
    s.add_argument("--td", default="min-fill", help="min-fill | min-degree | file:<path>")
    s.add_argument("--seed", type=int, default=0)
    s.add_argument("--stats", action="store_true", help="print JSON run statistics to stderr")
    s.add_argument("--emit-td", metavar="PATH", help="write the decomposition used, PACE format")
    s.add_argument("--trace", metavar="DIR", help="dump per-node tables into a directory")
    s.add_argument("--oracle-check", action="store_true", help="cross-check against brute force")
    return parser


def main(argv: list[str] | None = None) -> int:
    args = _build_parser().parse_args(argv)

    try:
        with open(args.file, "r", encoding="utf-8") as fh:
            text = fh.read()
    except OSError as exc:
        print(f"error: cannot read {args.file}: {exc}", file=sys.stderr)
        return EXIT_PARSE

    try:
        program = formats.parse_program(text)
    except formats.ParseError as exc:
        print(f"parse error: {exc.diagnostic}", file=sys.stderr)
        return EXIT_PARSE

    if args.project_all:
        program = program.with_projection(program.atom_mask)
    elif args.project_none:
        program = program.with_projection(0)
    elif args.project is not None:
        names = [n.strip() for n in args.project.split(",") if n.strip()]
        try:
            program = program.with_projection(program.mask(names))
        except KeyError as exc:
            print(f"parse error: projection atom {exc.args[0]!r} does not occur in the program", file=sys.stderr)
            return EXIT_PARSE

    td = None
    heuristic = args.td
    if args.td.startswith("file:"):
        path = args.td[len("file:") :]
        try:
            with open(path, "r", encoding="utf-8") as fh:
                td_text = fh.read()
        except OSError as exc:
            print(f"error: cannot read decomposition {path}: {exc}", file=sys.stderr)
            return EXIT_TD
        try:
            td = formats.read_td(td_text, program.n_atoms)
        except formats.ParseError as exc:
            print(f"invalid decomposition: {exc.diagnostic}", file=sys.stderr)
            return EXIT_TD
        problems = validate_td(primal_graph(program), td)
        if problems:
            print("invalid decomposition: " + "; ".join(problems), file=sys.stderr)
            return EXIT_TD
        heuristic = "min-fill"
    elif args.td not in ("min-fill", "min-degree"):
        print(f"error: unknown --td value {args.td!r}", file=sys.stderr)
        return EXIT_TD

    try:
        result = solve(program, algorithm=args.algorithm, heuristic=heuristic, seed=args.seed, td=td)
    except AlgorithmMismatchError as exc:
        print(f"algorithm mismatch: {exc}", file=sys.stderr)
        return EXIT_ALGORITHM

    if args.emit_td:
        with open(args.emit_td, "w", encoding="utf-8") as fh:
            fh.write(formats.write_td(result.td))

    if args.trace:
        _dump_trace(result, args.trace)

    if args.stats:
        print(json.dumps(result.stats.to_dict()), file=sys.stderr)

    code = EXIT_OK
    if args.oracle_check:
        try:
            expected = oracle.projected_count(program)
        except oracle.OracleSizeError as exc:
            print(f"error: {exc}", file=sys.stderr)
            return EXIT_PARSE
        if expected != result.count:
            print(f"oracle-check mismatch: dp={result.count} oracle={expected}", file=sys.stderr)
            code = EXIT_ORACLE

    print(f"c {result.count}")
    return code


def _dump_trace(result, directory: str) -> None:
    from . import engine

    os.makedirs(directory, exist_ok=True)
    ttd = result.ttd
    with open(os.path.join(directory, "tables.txt"), "w", encoding="utf-8") as fh:
        for t in ttd.post_order:
            fh.write(engine.format_table(ttd, t) + "\n")
    with open(os.path.join(directory, "purged.txt"), "w", encoding="utf-8") as fh:
        for t in ttd.post_order:
            nd = ttd.td.nodes[t]
            names = ",".join(sorted(result.program.names(nd.bag_mask)))
            fh.write(f"node {t} kind={nd.kind} bag={{{names}}} rows={len(result.purged.rows[t])}\n")
            for i, row in enumerate(result.purged.rows[t]):
                fh.write(f"  {i}: {ttd.alg.format_row(row, result.program)} origins={result.purged.origins[t][i]}\n")
    with open(os.path.join(directory, "proj.txt"), "w", encoding="utf-8") as fh:
        for t in ttd.post_order:
            table = result.proj_tables.tables[t]
            fh.write(f"node {t} entries={len(table)}\n")
            for key in sorted(table, key=sorted):
                fh.write(f"  {sorted(key)}: {table[key]}\n")


def entry() -> None:
    sys.exit(main())


if __name__ == "__main__":
    entry()
