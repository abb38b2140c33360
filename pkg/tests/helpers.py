"""Shared plumbing for the test suite.

Builds goal text from plain Python values, reads ground answers back into
plain values (the representation tests/oracle.py evaluates), and wraps
one-shot solving so tests stay one line per case.
"""
from slog import Session, parse_goal
from slog.terms import (Atom, EmptySet, IntExpr, IntLit, Interval, SetCons,
                        Tup, TypedConst, Var)


def lit(v):
    """Plain value -> source-text literal.  Set elements are sorted by
    their rendered form so the same value always produces the same text."""
    if isinstance(v, bool):
        raise TypeError("no boolean values in goals")
    if isinstance(v, int):
        return str(v)
    if isinstance(v, str):
        return v
    if isinstance(v, tuple):
        return "[" + ",".join(lit(x) for x in v) + "]"
    if isinstance(v, frozenset):
        return "{" + ",".join(sorted(lit(x) for x in v)) + "}"
    raise TypeError("cannot spell %r" % (v,))


def goal_text(sym, *args):
    if sym == "=":
        return "%s = %s" % (lit(args[0]), lit(args[1]))
    if sym == "neq":
        return "%s neq %s" % (lit(args[0]), lit(args[1]))
    if sym in ("in", "nin"):
        return "%s %s %s" % (lit(args[0]), sym, lit(args[1]))
    return "%s(%s)" % (sym, ",".join(lit(a) for a in args))


def eval_int(t):
    """Arithmetic value of a ground integer expression.  div/mod follow the
    solver's convention: the remainder is never negative."""
    if isinstance(t, IntLit):
        return t.value
    if isinstance(t, IntExpr):
        args = [eval_int(a) for a in t.args]
        if len(args) == 1:
            return -args[0]
        a, b = args
        if t.op == "+":
            return a + b
        if t.op == "-":
            return a - b
        if t.op == "*":
            return a * b
        if t.op in ("div", "mod"):
            q, r = divmod(a, b)
            if r < 0:
                q, r = q + 1, r - b
            return q if t.op == "div" else r
        raise ValueError("bad op %r" % (t.op,))
    raise ValueError("not an integer expression: %r" % (t,))


def to_value(t):
    """Ground term -> plain value (str/int/tuple/frozenset)."""
    if isinstance(t, Atom):
        return t.name
    if isinstance(t, IntLit):
        return t.value
    if isinstance(t, (IntExpr,)):
        return eval_int(t)
    if isinstance(t, TypedConst):
        return "%s?%s" % (t.base, t.payload)
    if isinstance(t, Tup):
        return tuple(to_value(x) for x in t.items)
    if isinstance(t, EmptySet):
        return frozenset()
    if isinstance(t, SetCons):
        elems = []
        while isinstance(t, SetCons):
            elems.append(to_value(t.elem))
            t = t.rest
        rest = to_value(t)
        if not isinstance(rest, frozenset):
            raise ValueError("set tail is %r" % (rest,))
        return frozenset(elems) | rest
    if isinstance(t, Interval):
        lo, hi = eval_int(t.lo), eval_int(t.hi)
        return frozenset(range(lo, hi + 1))
    if isinstance(t, Var):
        raise ValueError("unbound variable %s" % t.name)
    raise ValueError("no plain value for %r" % (t,))


def make_session(consult=None, mode=None, type_check=False, golden=False):
    s = Session(golden=golden)
    s.type_checking = type_check
    if mode:
        s.set_mode(mode)
    for path in ([consult] if isinstance(consult, str) else consult or []):
        s.consult(path)
    return s


def run(text, limit=None, session=None, **kw):
    """Solve one goal, return (list of answers, session)."""
    s = session or make_session(**kw)
    g = parse_goal(text if text.rstrip().endswith(".") else text + ".",
                   s.registry)
    out = []
    for ans in s.solve(g):
        out.append(ans)
        if limit is not None and len(out) >= limit:
            break
    return out, s


def sat(text, **kw):
    return bool(run(text, limit=1, **kw)[0])


def show(text, **kw):
    """Rendered first answer, or 'no'."""
    answers, s = run(text, limit=1, **kw)
    return s.format_answer(answers[0]) if answers else "no"


def show_all(text, limit=20, **kw):
    answers, s = run(text, limit=limit, **kw)
    return [s.format_answer(a) for a in answers]
