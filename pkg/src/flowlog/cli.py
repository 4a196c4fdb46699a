"""Command-line driver: ``flowlog run``, ``flowlog oracle`` and ``flowlog gen``."""

from __future__ import annotations

import argparse
import sys
from pathlib import Path

from .errors import FlowlogError, IoError
from .explain import explain
from .frontend.parser import parse_program
from .io import Dictionary, load_inputs, write_outputs
from .oracle.generate import RandomGraphSpec, generate_graph
from .oracle.naive import naive_evaluate
from .pipeline import RunConfig, compile_program, run_program

EXIT_CODES = """exit codes:
  0  success
  1  internal error
  2  usage error
  3  syntax error
  4  validation error (arity, undeclared relation, unsafe rule)
  5  unstratifiable program
  6  malformed input row
  7  iteration cap reached
  8  missing or unwritable file
  9  plan search space exceeded
  10 transformation not applicable
  11 monoid mismatch
  12 unsupported monoid
  13 unsupported lift
  14 negative edge weight"""


def _read_program(path: str):
    try:
        text = Path(path).read_text(encoding="utf-8")
    except OSError as exc:
        raise IoError(f"cannot read {path}: {exc.strerror}") from exc
    return parse_program(text)


def _delimiter(text: str) -> str:
    return {"\\t": "\t", "tab": "\t"}.get(text, text)


def _cmd_run(args) -> int:
    config = RunConfig(
        program_path=args.program,
        facts_dir=args.facts,
        output_dir=args.out,
        workers=args.workers,
        plan_opt=not args.no_plan_opt,
        sip=not args.no_sip,
        sip_all=args.sip,
        fusion=not args.no_fusion,
        sharing=not args.no_sharing,
        boolean_spec=not args.count_diffs,
        stats_path=args.stats,
        explain=args.explain,
        run=args.run,
        max_iterations=args.max_iterations,
        delimiter=_delimiter(args.delimiter),
        has_header=args.header,
    )
    program = _read_program(args.program)
    compiled = compile_program(program, config)
    if config.explain:
        sys.stdout.write(explain(compiled))
        if not config.run:
            return 0
    dictionary = Dictionary()
    inputs = load_inputs(program, config.facts_dir, dictionary, config.delimiter, config.has_header)
    result = run_program(compiled, inputs, config)
    if config.output_dir:
        write_outputs(result.outputs, config.output_dir, program, dictionary, config.delimiter)
    text = result.stats.to_text()
    if config.stats_path:
        try:
            Path(config.stats_path).write_text(result.stats.to_json() + "\n", encoding="utf-8")
        except OSError as exc:
            raise IoError(f"cannot write {config.stats_path}: {exc.strerror}") from exc
        sys.stderr.write(text)
    return 0


def _cmd_oracle(args) -> int:
    program = _read_program(args.program)
    dictionary = Dictionary()
    delim = _delimiter(args.delimiter)
    inputs = load_inputs(program, args.facts, dictionary, delim, args.header)
    outputs = naive_evaluate(program, {k: v.tuples() for k, v in inputs.items()})
    if args.out:
        write_outputs(outputs, args.out, program, dictionary, delim)
    return 0


def _cmd_gen(args) -> int:
    spec = RandomGraphSpec(
        nodes=args.nodes,
        prob=args.prob,
        edges=args.edges,
        seed=args.seed,
        weighted=args.weighted,
        max_weight=args.max_weight,
        self_loops=args.self_loops,
        symmetric=args.symmetric,
    )
    rows = generate_graph(spec)
    text = "".join("\t".join(str(v) for v in r) + "\n" for r in rows)
    if args.out in (None, "-"):
        sys.stdout.write(text)
    else:
        try:
            Path(args.out).parent.mkdir(parents=True, exist_ok=True)
            Path(args.out).write_text(text, encoding="utf-8")
        except OSError as exc:
            raise IoError(f"cannot write {args.out}: {exc.strerror}") from exc
    return 0


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="flowlog",
        description="Compile and evaluate Datalog programs.",
        epilog=EXIT_CODES,
        formatter_class=argparse.RawDescriptionHelpFormatter,
    )
    sub = parser.add_subparsers(dest="command", required=True)

    run = sub.add_parser("run", help="evaluate a program", epilog=EXIT_CODES,
                         formatter_class=argparse.RawDescriptionHelpFormatter)
    run.add_argument("program")
    run.add_argument("--facts", help="directory holding <relation>.facts files")
    run.add_argument("--out", help="directory for <relation>.csv outputs")
    run.add_argument("--workers", type=int, default=1)
    run.add_argument("--no-plan-opt", action="store_true", help="use the body listing order")
    run.add_argument("--no-sip", action="store_true", help="disable semijoin prefiltering")
    run.add_argument("--sip", action="store_true", help="prefilter every rule with two or more join atoms")
    run.add_argument("--no-fusion", action="store_true")
    run.add_argument("--no-sharing", action="store_true")
    run.add_argument("--count-diffs", action="store_true", help="count multiplicities instead of presence")
    run.add_argument("--stats", metavar="PATH", help="write a JSON stats summary; key=value lines go to stderr")
    run.add_argument("--explain", action="store_true", help="print plans and stop (unless --run)")
    run.add_argument("--run", action="store_true", help="evaluate after --explain")
    run.add_argument("--delimiter", default="\t", metavar="C")
    run.add_argument("--header", action="store_true", help="fact files start with a header row")
    run.add_argument("--max-iterations", type=int, metavar="N")
    run.set_defaults(func=_cmd_run)

    ora = sub.add_parser("oracle", help="evaluate with the naive reference evaluator")
    ora.add_argument("program")
    ora.add_argument("--facts")
    ora.add_argument("--out")
    ora.add_argument("--delimiter", default="\t", metavar="C")
    ora.add_argument("--header", action="store_true")
    ora.set_defaults(func=_cmd_oracle)

    gen = sub.add_parser("gen", help="write a seeded random graph")
    gen.add_argument("--nodes", type=int, required=True)
    gen.add_argument("--prob", type=float)
    gen.add_argument("--edges", type=int)
    gen.add_argument("--seed", type=int, default=0)
    gen.add_argument("--weighted", action="store_true")
    gen.add_argument("--max-weight", type=int, default=10)
    gen.add_argument("--self-loops", action="store_true")
    gen.add_argument("--symmetric", action="store_true")
    gen.add_argument("--out", help="output file, or - for stdout")
    gen.set_defaults(func=_cmd_gen)
    return parser


def main(argv: list[str] | None = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    if getattr(args, "workers", 1) < 1:
        parser.error("--workers must be at least 1")
    if args.command == "gen" and (args.prob is None) == (args.edges is None):
        parser.error("give exactly one of --prob and --edges")
    try:
        return args.func(args)
    except FlowlogError as exc:
        sys.stderr.write(f"flowlog: {type(exc).__name__}: {exc}\n")
        return exc.exit_code


if __name__ == "__main__":
    sys.exit(main())
