"""A finite-set constraint solver and specification animator.

Goals are built from conjunction/disjunction over set, binary-relation,
sequence and integer constraints whose arguments may be partially
specified sets such as ``{X/A}``.  Solving yields answers — bindings plus
residual constraints — and an unsatisfiable goal certifies its negation,
which is what the proof helpers in :mod:`slog.verify` automate.
"""

from .engine import Engine
from .errors import (ResourceLimitError, SlogError, SlogSyntaxError,
                     SlogTypeError, UnknownClauseError)
from .parser import parse_goal, parse_program, parse_term
from .render import (render_answer, render_constraint, render_goal,
                     render_term)
from .session import Session, dispatch_command, repl_loop
from .solver import Answer, Solver, solve_goal
from .terms import VarRegistry
from .typecheck import TypeChecker
from .verify import (InvarianceObligation, ProofResult,
                     build_invariance_goal, check_invariants,
                     negate_constraint, negate_goal, prove)

__version__ = "0.1.0"

__all__ = [
    "Answer", "Engine", "InvarianceObligation", "ProofResult",
    "ResourceLimitError", "Session", "SlogError", "SlogSyntaxError",
    "SlogTypeError", "Solver", "TypeChecker", "UnknownClauseError",
    "VarRegistry", "build_invariance_goal", "check_invariants",
    "dispatch_command", "negate_constraint", "negate_goal", "parse_goal",
    "parse_program", "parse_term", "prove", "render_answer",
    "render_constraint", "render_goal", "render_term", "repl_loop",
    "solve_goal",
]
