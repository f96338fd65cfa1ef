"""``cbt`` command line: ``check``, ``eval`` and ``repl``."""

from __future__ import annotations

import argparse
import sys

from . import setmodel as sm
from .frontend import driver


def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="cbt", description="Check .cbt files against the type theory kernel.")
    sub = p.add_subparsers(dest="command", required=True)

    chk = sub.add_parser("check", help="check every declaration of one or more files")
    chk.add_argument("files", nargs="+")
    chk.add_argument("--oracle", action="store_true", help="cross-check every verdict in the finite-set model")
    chk.add_argument("--dump-core", action="store_true", help="print the core judgment of each declaration")
    chk.add_argument("--no-prelude", action="store_true", help="do not load the prelude definitions")

    ev = sub.add_parser("eval", help="print the set-model value of a definition")
    ev.add_argument("file")
    ev.add_argument("--defn", required=True, metavar="NAME")
    ev.add_argument("--no-prelude", action="store_true")

    repl = sub.add_parser("repl", help="interactive session")
    repl.add_argument("--no-prelude", action="store_true")
    return p


def main(argv=None, stdout=None, stdin=None) -> int:
    stdout = stdout or sys.stdout
    try:
        args = build_parser().parse_args(argv)
    except SystemExit as e:
        return int(e.code or 0)
    try:
        budget = sm.budget_from_env()
    except ValueError as e:
        print(f"cbt: error: {e}", file=sys.stderr)
        return driver.EXIT_USAGE
    prelude = not args.no_prelude
    match args.command:
        case "check":
            flags = driver.CheckFlags(args.oracle, args.dump_core, prelude, budget)
            report = driver.run_check(args.files, flags)
        case "eval":
            report = driver.eval_defn(args.file, args.defn, driver.CheckFlags(prelude=prelude, budget=budget))
        case "repl":
            return driver.repl_loop(driver.repl_init(prelude, budget), stdin or sys.stdin, stdout)
    stdout.write(report.text)
    return report.exit_code


if __name__ == "__main__":
    sys.exit(main())
