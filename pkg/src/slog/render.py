"""Turning terms, constraints and answers back into source text.

Two modes: "display" prints atoms raw the way interactive answers do, while
"canonical" quotes any atom that wouldn't survive a round trip through the
parser.  Golden rendering additionally sorts set elements by their printed
form so that answer text is stable across runs.
"""
from .goals import Call, Conj, Constraint, Disj
from .terms import (Atom, CartProd, EmptySet, IntExpr, IntLit, Interval,
                    SetCons, Term, Tup, TypedConst, Var, set_parts)

_WORD_OPS = {"is", "neq", "in", "nin"}
_SYM_OPS = {"=", "=<", "<", ">", ">=", "<="}

# precedence levels for arithmetic rendering
_LEVEL = {"+": 1, "-": 1, "*": 2, "div": 2, "mod": 2}


def _ident_shaped(s):
    if not s or not ("a" <= s[0] <= "z"):
        return False
    return all(c.isalnum() or c == "_" for c in s)


def _quote(s):
    return "'" + s.replace("'", "''") + "'"


def render_term(t, mode="display", golden=False):
    return _rt(t, mode, golden, 0)


def _rt(t, mode, golden, level):
    if isinstance(t, Var):
        return t.name
    if isinstance(t, Atom):
        if mode == "canonical" and not _ident_shaped(t.name):
            return _quote(t.name)
        return t.name
    if isinstance(t, TypedConst):
        p = t.payload
        if mode == "canonical" and not _ident_shaped(p):
            p = _quote(p)
        return f"{t.base}?{p}"
    if isinstance(t, IntLit):
        s = str(t.value)
        return f"({s})" if t.value < 0 and level >= 2 else s
    if isinstance(t, IntExpr):
        return _render_arith(t, mode, golden, level)
    if isinstance(t, Tup):
        return "[" + ",".join(_rt(i, mode, golden, 0) for i in t.items) + "]"
    if isinstance(t, EmptySet):
        return "{}"
    if isinstance(t, SetCons):
        elems, tail = set_parts(t)
        texts = []
        for e in elems:
            s = _rt(e, mode, golden, 0)
            if s not in texts:    # {M,M} and {M} are the same set
                texts.append(s)
        if golden:
            texts.sort()
        inner = ",".join(texts)
        if isinstance(tail, EmptySet):
            return "{" + inner + "}"
        return "{" + inner + "/" + _rt(tail, mode, golden, 0) + "}"
    if isinstance(t, Interval):
        return "int(%s,%s)" % (_rt(t.lo, mode, golden, 0),
                               _rt(t.hi, mode, golden, 0))
    if isinstance(t, CartProd):
        return "cp(%s,%s)" % (_rt(t.left, mode, golden, 0),
                              _rt(t.right, mode, golden, 0))
    raise TypeError(f"cannot render {t!r}")


def _render_arith(t, mode, golden, level):
    if len(t.args) == 1:  # unary minus
        inner = _rt(t.args[0], mode, golden, 3)
        s = "-" + inner
        return f"({s})" if level >= 1 else s
    mylevel = _LEVEL[t.op]
    lhs = _rt(t.args[0], mode, golden, mylevel)
    rhs = _rt(t.args[1], mode, golden, mylevel + 1)
    op = f" {t.op} " if t.op in ("div", "mod") else t.op
    s = lhs + op + rhs
    return f"({s})" if level > mylevel else s


def render_constraint(c, mode="display", golden=False):
    sym = c.sym
    if sym in _WORD_OPS:
        a, b = c.args
        return "%s %s %s" % (render_term(a, mode, golden), sym,
                             render_term(b, mode, golden))
    if sym in _SYM_OPS:
        a, b = c.args
        return "%s%s%s" % (render_term(a, mode, golden), sym,
                           render_term(b, mode, golden))
    if sym == "true":
        return "true"
    if sym == "foreach":
        v, s, body = c.args
        return "foreach(%s in %s,%s)" % (render_term(v, mode, golden),
                                         render_term(s, mode, golden),
                                         render_goal(body, mode, golden))
    if sym == "dec":
        target, te = c.args
        return "dec(%s,%s)" % (render_term(target, mode, golden), te)
    args = ",".join(render_term(a, mode, golden) for a in c.args)
    return f"{sym}({args})"


def render_goal(g, mode="display", golden=False):
    if isinstance(g, Conj):
        parts = []
        for p in g.parts:
            s = render_goal(p, mode, golden)
            if isinstance(p, Disj):
                s = f"({s})"
            parts.append(s)
        return " & ".join(parts)
    if isinstance(g, Disj):
        return " or ".join(render_goal(p, mode, golden) for p in g.parts)
    if isinstance(g, Constraint):
        return render_constraint(g, mode, golden)
    if isinstance(g, Call):
        if not g.args:
            return g.name
        return "%s(%s)" % (g.name, ",".join(render_term(a, mode, golden)
                                            for a in g.args))
    raise TypeError(f"cannot render goal node {g!r}")


def render_answer(bindings, residuals, mode="display", golden=False):
    """Format one solver answer the way the interactive loop prints it.

    ``bindings`` is a list of (name, term) pairs; ``residuals`` a list of
    Constraint objects (already pruned and ordered by the solver).
    """
    lines = []
    if bindings:
        for i, (name, t) in enumerate(bindings):
            sep = "" if i == len(bindings) - 1 else ","
            lines.append("%s = %s%s" % (name, render_term(t, mode, golden), sep))
    else:
        lines.append("true")
    if residuals:
        rendered = [render_constraint(c, mode, golden) for c in residuals]
        if golden:
            rendered.sort()
        lines.append("Constraint: " + ", ".join(rendered))
    return "\n".join(lines)
