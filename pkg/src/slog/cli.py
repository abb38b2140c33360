"""Command line front end.

With no goal arguments this starts the interactive loop.  ``--goal`` runs
goals in batch; the ``prove`` and ``check-invariants`` verbs drive proof
obligations.  Exit status: 0 success / expectations met, 1 expectation or
proof failure, 2 error.
"""
import argparse
import sys

from .engine import Engine
from .errors import SlogError
from .parser import parse_goal
from .session import Session, WARN_NONFINITE, repl_loop
from .terms import VarRegistry
from .verify import check_invariants, prove


def main(argv=None):
    argv = list(sys.argv[1:]) if argv is None else list(argv)
    if argv and argv[0] == "prove":
        return _cmd_prove(argv[1:])
    if argv and argv[0] == "check-invariants":
        return _cmd_check_invariants(argv[1:])
    return _cmd_batch(argv)


def _common_flags(p):
    p.add_argument("--consult", action="append", default=[], metavar="FILE",
                   help="consult FILE before running (repeatable)")
    p.add_argument("--type-check", action="store_true",
                   help="activate the typechecker")
    p.add_argument("--golden", action="store_true",
                   help="stable output: sort set elements and constraints "
                        "by their printed form")


def _cmd_batch(argv):
    p = argparse.ArgumentParser(
        prog="slog", description="finite-set constraint solving sessions")
    _common_flags(p)
    p.add_argument("--goal", action="append", default=[], metavar="G",
                   help="run goal G instead of starting the interactive "
                        "loop (repeatable)")
    p.add_argument("--int-solver", choices=["clpq", "clpfd"],
                   help="arithmetic mode (default clpq)")
    p.add_argument("--all-solutions", action="store_true",
                   help="enumerate every answer of each goal")
    p.add_argument("--max-solutions", type=int, metavar="N",
                   help="enumerate at most N answers per goal")
    p.add_argument("--expect", choices=["sat", "unsat"],
                   help="require every goal to be (un)satisfiable")
    p.add_argument("--expect-file", metavar="FILE",
                   help="per-goal expectations, one 'sat', 'unsat' or "
                        "'answers=N' line per goal")
    args = p.parse_args(argv)

    session = Session(golden=args.golden)
    session.type_checking = args.type_check
    if args.int_solver:
        session.set_mode(args.int_solver)
    try:
        for f in args.consult:
            session.consult(f)
    except SlogError as e:
        print(f"***ERROR***: {e}", file=sys.stderr)
        return 2

    if not args.goal:
        return repl_loop(session)

    expectations = [args.expect] * len(args.goal)
    if args.expect_file:
        try:
            with open(args.expect_file, encoding="utf-8") as f:
                lines = [ln.strip() for ln in f if ln.strip()]
        except OSError as e:
            print(f"***ERROR***: {e}", file=sys.stderr)
            return 2
        for i, ln in enumerate(lines[:len(args.goal)]):
            expectations[i] = ln

    status = 0
    for text, expect in zip(args.goal, expectations):
        limit = None if args.all_solutions else 1
        if args.max_solutions is not None:
            limit = args.max_solutions
        if expect and expect.startswith("answers="):
            need = int(expect.split("=", 1)[1])
            if limit is not None:
                limit = max(limit, need + 1)
        try:
            goal = parse_goal(_dotted(text), session.registry)
            answers = _collect(session, goal, limit)
        except SlogError as e:
            print(f"***ERROR***: {e}", file=sys.stderr)
            return 2
        for ans in answers:
            if ans.warned:
                print(WARN_NONFINITE)
            print(session.format_answer(ans))
            print()
        if not answers:
            print("no")
        if expect and not _expectation_met(expect, len(answers)):
            print(f"goal {text!r}: expected {expect}, "
                  f"got {len(answers)} answer(s)", file=sys.stderr)
            status = 1
    return status


def _collect(session, goal, limit):
    answers = []
    if limit is not None and limit <= 0:
        return answers
    for ans in session.solve(goal):
        answers.append(ans)
        if limit is not None and len(answers) >= limit:
            break
    return answers


def _expectation_met(expect, count):
    if expect == "sat":
        return count >= 1
    if expect == "unsat":
        return count == 0
    if expect.startswith("answers="):
        return count == int(expect.split("=", 1)[1])
    raise SlogError(f"bad expectation {expect!r}")


def _cmd_prove(argv):
    p = argparse.ArgumentParser(
        prog="slog prove",
        description="run a negated obligation; no answers means theorem")
    p.add_argument("goal", help="the obligation goal, e.g. "
                   "\"inv(S) & op(S,S_) & ninv(S_)\"")
    _common_flags(p)
    p.add_argument("--budget", type=float, default=60.0, metavar="SECONDS",
                   help="wall-clock budget per proof (default 60)")
    args = p.parse_args(argv)

    session = Session(golden=args.golden)
    session.type_checking = args.type_check
    try:
        for f in args.consult:
            session.consult(f)
        goal = parse_goal(_dotted(args.goal), session.registry)
        if session.type_checking:
            session.checker().check_goal(goal)
        res = prove(goal, session.engine, budget=args.budget)
    except SlogError as e:
        print(f"***ERROR***: {e}", file=sys.stderr)
        return 2
    print("%s  (%.2fs)" % (res.verdict.upper(), res.elapsed))
    if res.verdict == "counterexample":
        print(session.format_answer(res.answer))
        return 1
    if res.verdict == "inconclusive":
        print(res.reason)
        return 2
    return 0


def _cmd_check_invariants(argv):
    p = argparse.ArgumentParser(
        prog="slog check-invariants",
        description="prove every obligation of a manifest against a spec")
    p.add_argument("spec", help=".slog file defining the state machine")
    p.add_argument("manifest", help="JSON file listing the obligations")
    p.add_argument("--budget", type=float, metavar="SECONDS",
                   help="wall-clock budget per proof (default 60)")
    args = p.parse_args(argv)

    def make_engine():
        return Engine(VarRegistry())

    rows = []
    try:
        for name, res in check_invariants(args.spec, args.manifest,
                                          make_engine, budget=args.budget):
            rows.append((name, res))
    except (SlogError, OSError, KeyError, ValueError) as e:
        print(f"***ERROR***: {e}", file=sys.stderr)
        return 2
    width = max(len(n) for n, _ in rows) if rows else 10
    width = max(width, len("obligation"))
    print("%-*s  %-15s  %s" % (width, "obligation", "verdict", "time"))
    for name, res in rows:
        print("%-*s  %-15s  %.2fs" % (width, name, res.verdict.upper(),
                                      res.elapsed))
    return 0 if rows and all(r.verdict == "theorem" for _, r in rows) else 1


def _dotted(text):
    text = text.strip()
    return text if text.endswith(".") else text + "."


if __name__ == "__main__":
    sys.exit(main())
