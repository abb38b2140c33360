"""Interactive sessions: the state shared by the REPL and the batch runner,
and the read-solve-print loop itself.

A session owns one clause database plus two mode flags (type checking on or
off, symbolic or finite-domain arithmetic).  Flag changes only affect goals
issued after them, which is why ``type_check`` must come before ``consult``
for the consulted file to be checked.
"""
import sys

from .engine import Engine
from .errors import SlogError
from .parser import parse_repl_input
from .render import render_answer
from .solver import Solver
from .terms import VarRegistry
from .typecheck import TypeChecker

PROMPT = "{log}=> "
MORE = "Another solution? (y/n)"
WARN_NONFINITE = "***WARNING***: non-finite domain"


class Session:
    def __init__(self, golden=False):
        self.registry = VarRegistry()
        self.engine = Engine(self.registry)
        self.engine.on_directive = self._file_mode
        self.type_checking = False
        self.mode = "clpq"
        self.golden = golden

    def _file_mode(self, d):
        """Mode switches may also appear as directives inside files."""
        if d.kind == "type_check":
            self.type_checking = True
        elif d.kind == "notype_check":
            self.type_checking = False
        elif d.kind == "int_solver":
            self.set_mode(d.args[0])
        else:
            raise SlogError(f"unknown command {d.kind}")

    def set_mode(self, mode):
        if mode not in ("clpq", "clpfd"):
            raise SlogError(f"unknown arithmetic mode {mode}")
        self.mode = mode

    def checker(self):
        tc = TypeChecker()
        tc.load(self.engine.type_decls)
        return tc

    def consult(self, path, base_dir=None):
        self.engine.consult(path, base_dir)
        if self.type_checking:
            self.checker().check_database(self.engine)

    def solve(self, goal, deadline=None):
        """Type-check (when enabled) and return the answer generator."""
        if self.type_checking:
            self.checker().check_goal(goal)
        solver = Solver(self.registry, self.engine, self.mode, deadline)
        return solver.solve(goal)

    def format_answer(self, ans):
        if ans.is_true():
            return "yes"
        return render_answer(ans.bindings, ans.residuals,
                             golden=self.golden)


def dispatch_command(session, d):
    if d.kind == "consult":
        session.consult(d.args[0])
    elif d.kind == "type_check":
        session.type_checking = True
    elif d.kind == "notype_check":
        session.type_checking = False
    elif d.kind == "int_solver":
        session.set_mode(d.args[0])
    else:
        raise SlogError(f"unknown command {d.kind}")


def repl_loop(session=None, inp=None, out=None):
    """Prompt, read one command or goal, solve, ask for more; returns the
    process exit status.  Every error is printed and the loop continues."""
    session = session if session is not None else Session()
    inp = inp if inp is not None else sys.stdin
    out = out if out is not None else sys.stdout
    while True:
        out.write(PROMPT)
        out.flush()
        text = _read_input(inp)
        if text is None:
            out.write("\n")
            return 0
        if not text.strip():
            continue
        try:
            kind, item = parse_repl_input(text, session.registry)
        except SlogError as e:
            out.write(f"***ERROR***: {e}\n")
            continue
        if kind == "directive":
            if item.kind == "halt":
                return 0
            try:
                dispatch_command(session, item)
            except SlogError as e:
                out.write(f"***ERROR***: {e}\n")
            continue
        run_goal(session, item, inp, out)


def run_goal(session, goal, inp, out):
    try:
        gen = session.solve(goal)
        while True:
            ans = next(gen)
            if ans.warned:
                out.write(WARN_NONFINITE + "\n")
            out.write(session.format_answer(ans) + "\n")
            out.write(MORE + "\n")
            out.flush()
            resp = inp.readline()
            if not resp or not resp.strip().lower().startswith("y"):
                return
    except StopIteration:
        out.write("no\n")
    except SlogError as e:
        out.write(f"***ERROR***: {e}\n")


def _read_input(inp):
    """Collect lines until the goal's closing '.' (quotes and comments
    aside); None on end of input."""
    lines = []
    while True:
        line = inp.readline()
        if not line:
            return "\n".join(lines) if lines else None
        lines.append(line.rstrip("\n"))
        text = "\n".join(lines)
        if text.strip() == "":
            return text
        if _ends_goal(text):
            return text


def _ends_goal(text):
    last = ""
    i, n = 0, len(text)
    while i < n:
        c = text[i]
        if c == "'":
            j = i + 1
            while j < n:
                if text[j] == "'":
                    if j + 1 < n and text[j + 1] == "'":
                        j += 2
                        continue
                    break
                j += 1
            last = "'"
            i = j + 1
            continue
        if c == "%":
            while i < n and text[i] != "\n":
                i += 1
            continue
        if not c.isspace():
            last = c
        i += 1
    return last == "."
