"""Static type checking for goals and clause databases.

Types are the surface-syntax type expressions (basic names, ``stype(T)``
sets, ``[T1,...,Tn]`` products) plus internal type unknowns used for
polymorphic built-ins.  ``dec_type`` introduces a synonym, ``dec_p_type``
a predicate signature, and ``dec`` gives a variable its type inside a
goal or clause body.
"""

from .errors import SlogTypeError
from .goals import (BasicType, Call, Conj, Constraint, Disj, ProdType,
                    SetType)
from .render import render_constraint, render_term
from .terms import (Atom, CartProd, EmptySet, IntExpr, IntLit, Interval,
                    SetCons, Tup, TypedConst, Var)

INT = BasicType("int")


class TVar:
    """A type unknown; compared and bound by identity."""
    __slots__ = ("id",)
    _count = 0

    def __init__(self):
        TVar._count += 1
        self.id = TVar._count

    def __repr__(self):
        return f"TVar({self.id})"


def _walk(t, bnd):
    while isinstance(t, TVar) and t.id in bnd:
        t = bnd[t.id]
    return t


def _occurs(v, t, bnd):
    t = _walk(t, bnd)
    if isinstance(t, TVar):
        return t is v
    if isinstance(t, SetType):
        return _occurs(v, t.elem, bnd)
    if isinstance(t, ProdType):
        return any(_occurs(v, i, bnd) for i in t.items)
    return False


def render_type(t, bnd=None):
    if bnd is None:
        bnd = {}
    t = _walk(t, bnd)
    if isinstance(t, TVar):
        return "_"
    if isinstance(t, BasicType):
        return t.name
    if isinstance(t, SetType):
        return "stype(%s)" % render_type(t.elem, bnd)
    if isinstance(t, ProdType):
        return "[%s]" % ",".join(render_type(i, bnd) for i in t.items)
    return str(t)


class TypeChecker:
    def __init__(self):
        self.synonyms = {}   # type name -> TypeExpr it abbreviates
        self.sigs = {}       # (pred name, arity) -> tuple of TypeExpr

    # -- declarations -----------------------------------------------------------

    def declare_synonym(self, name, te):
        if name == "int":
            raise SlogTypeError("type error: cannot redefine type int")
        if self._mentions(te, name, {name}):
            raise SlogTypeError(
                f"type error: recursive type declaration for {name}")
        self.synonyms[name] = te

    def _mentions(self, te, name, seen):
        if isinstance(te, BasicType):
            if te.name == name:
                return True
            if te.name in self.synonyms and te.name not in seen:
                return self._mentions(self.synonyms[te.name], name,
                                      seen | {te.name})
            return False
        if isinstance(te, SetType):
            return self._mentions(te.elem, name, seen)
        if isinstance(te, ProdType):
            return any(self._mentions(i, name, seen) for i in te.items)
        return False

    def declare_sig(self, name, tes):
        self.sigs[(name, len(tes))] = tuple(tes)

    def load(self, type_decls):
        """Absorb (Directive, origin) pairs collected while consulting."""
        for d, _origin in type_decls:
            if d.kind == "dec_type":
                self.declare_synonym(d.args[0], d.args[1])
            elif d.kind == "dec_p_type":
                self.declare_sig(d.args[0], d.args[1])

    # -- type unification ---------------------------------------------------------

    def unify(self, x, y, bnd):
        x = _walk(x, bnd)
        y = _walk(y, bnd)
        if x is y:
            return True
        if isinstance(x, TVar):
            if _occurs(x, y, bnd):
                return False
            bnd[x.id] = y
            return True
        if isinstance(y, TVar):
            return self.unify(y, x, bnd)
        if isinstance(x, BasicType) and isinstance(y, BasicType) \
                and x.name == y.name:
            return True
        if isinstance(x, BasicType) and x.name in self.synonyms:
            return self.unify(self.synonyms[x.name], y, bnd)
        if isinstance(y, BasicType) and y.name in self.synonyms:
            return self.unify(x, self.synonyms[y.name], bnd)
        if isinstance(x, SetType) and isinstance(y, SetType):
            return self.unify(x.elem, y.elem, bnd)
        if isinstance(x, ProdType) and isinstance(y, ProdType) \
                and len(x.items) == len(y.items):
            return all(self.unify(a, b, bnd)
                       for a, b in zip(x.items, y.items))
        return False

    # -- term typing ------------------------------------------------------------

    def infer(self, t, env, bnd, strict):
        if isinstance(t, Var):
            if t.name in env:
                return env[t.name]
            if strict and not t.name.startswith("_"):
                raise SlogTypeError("type error: variable %s has no type "
                                    "declaration" % t.name)
            tv = TVar()
            env[t.name] = tv
            return tv
        if isinstance(t, Atom):
            return TVar()       # plain constants are polymorphic
        if isinstance(t, TypedConst):
            return BasicType(t.base)
        if isinstance(t, (IntLit, IntExpr)):
            if isinstance(t, IntExpr):
                for a in t.args:
                    ta = self.infer(a, env, bnd, strict)
                    if not self.unify(ta, INT, bnd):
                        raise SlogTypeError(_mismatch(
                            render_term(t),
                            [(render_term(a), render_type(ta, bnd), "int")]))
            return INT
        if isinstance(t, Tup):
            return ProdType(tuple(self.infer(i, env, bnd, strict)
                                  for i in t.items))
        if isinstance(t, EmptySet):
            return SetType(TVar())
        if isinstance(t, SetCons):
            te = self.infer(t.elem, env, bnd, strict)
            tr = self.infer(t.rest, env, bnd, strict)
            if not self.unify(tr, SetType(te), bnd):
                raise SlogTypeError(_mismatch(
                    render_term(t),
                    [(render_term(t.rest), render_type(tr, bnd),
                      render_type(SetType(te), bnd))]))
            return _walk(tr, bnd)
        if isinstance(t, Interval):
            for side in (t.lo, t.hi):
                ts = self.infer(side, env, bnd, strict)
                if not self.unify(ts, INT, bnd):
                    raise SlogTypeError(_mismatch(
                        render_term(t),
                        [(render_term(side), render_type(ts, bnd), "int")]))
            return SetType(INT)
        if isinstance(t, CartProd):
            a, b = TVar(), TVar()
            items = []
            for side, tv in ((t.left, a), (t.right, b)):
                ts = self.infer(side, env, bnd, strict)
                if not self.unify(ts, SetType(tv), bnd):
                    items.append((render_term(side), render_type(ts, bnd),
                                  render_type(SetType(tv), bnd)))
            if items:
                raise SlogTypeError(_mismatch(render_term(t), items))
            return SetType(ProdType((_walk(a, bnd), _walk(b, bnd))))
        raise SlogTypeError("type error: cannot type %s" % render_term(t))

    # -- goal checking ------------------------------------------------------------

    def check_goal(self, goal, strict=True, env=None):
        """Raise SlogTypeError if the goal is ill-typed.

        strict mode (the default, used for top-level goals) requires a
        dec for every named variable; clause bodies are checked leniently
        so undeclared locals become type unknowns.
        """
        if env is None:
            env = {}
        bnd = {}
        self._collect_decs(goal, env, bnd)
        self._check(goal, env, bnd, strict)

    def check_clause(self, clause):
        sig = self.sigs.get((clause.name, len(clause.params)))
        if sig is None:
            raise SlogTypeError(
                "type error: predicate %s/%d has no type declaration"
                % (clause.name, len(clause.params)))
        env = {}
        bnd = {}
        items = []
        for p, tsig in zip(clause.params, sig):
            tp = self.infer(p, env, bnd, False)
            if not self.unify(tp, tsig, bnd):
                items.append((render_term(p), render_type(tp, bnd),
                              render_type(tsig, bnd)))
        if items:
            head = "%s(%s)" % (clause.name,
                               ",".join(render_term(p)
                                        for p in clause.params))
            raise SlogTypeError(_mismatch(head, items))
        if clause.body is not None:
            self._collect_decs(clause.body, env, bnd)
            self._check(clause.body, env, bnd, False)

    def check_database(self, engine):
        self.load(engine.type_decls)
        for defs in engine.db.values():
            for d in defs:
                self.check_clause(d)

    def _collect_decs(self, g, env, bnd):
        if isinstance(g, (Conj, Disj)):
            for p in g.parts:
                self._collect_decs(p, env, bnd)
        elif isinstance(g, Constraint):
            if g.sym == "dec":
                target, te = g.args
                vs = target.items if isinstance(target, Tup) else (target,)
                for v in vs:
                    if v.name in env:
                        if not self.unify(env[v.name], te, bnd):
                            raise SlogTypeError(
                                "type error: variable %s has conflicting "
                                "type declarations" % v.name)
                    else:
                        env[v.name] = te
            elif g.sym == "foreach":
                self._collect_decs(g.args[2], env, bnd)

    def _check(self, g, env, bnd, strict):
        if isinstance(g, (Conj, Disj)):
            for p in g.parts:
                self._check(p, env, bnd, strict)
        elif isinstance(g, Call):
            self._check_call(g, env, bnd, strict)
        elif isinstance(g, Constraint):
            self._check_constraint(g, env, bnd, strict)

    def _check_call(self, call, env, bnd, strict):
        sig = self.sigs.get((call.name, len(call.args)))
        if sig is None:
            raise SlogTypeError(
                "type error: predicate %s/%d has no type declaration"
                % (call.name, len(call.args)))
        items = []
        for a, tsig in zip(call.args, sig):
            ta = self.infer(a, env, bnd, strict)
            if not self.unify(ta, tsig, bnd):
                items.append((render_term(a), render_type(ta, bnd),
                              render_type(tsig, bnd)))
        if items:
            text = "%s(%s)" % (call.name,
                               ",".join(render_term(a) for a in call.args))
            raise SlogTypeError(_mismatch(text, items))

    def _check_constraint(self, c, env, bnd, strict):
        if c.sym in ("true", "dec"):
            return
        if c.sym == "foreach":
            v, s, body = c.args
            ts = self.infer(s, env, bnd, strict)
            elem = TVar()
            if not self.unify(ts, SetType(elem), bnd):
                raise SlogTypeError(_mismatch(
                    render_constraint(c),
                    [(render_term(s), render_type(ts, bnd),
                      render_type(SetType(elem), bnd))]))
            inner = dict(env)
            if v.name in inner:
                if not self.unify(inner[v.name], elem, bnd):
                    raise SlogTypeError(
                        "type error: variable %s has conflicting type "
                        "declarations" % v.name)
            else:
                inner[v.name] = elem
            self._check(body, inner, bnd, strict)
            return
        schema = _schema(c.sym)
        if schema is None or len(schema) != len(c.args):
            return
        items = []
        for a, tsig in zip(c.args, schema):
            ta = self.infer(a, env, bnd, strict)
            if not self.unify(ta, tsig, bnd):
                items.append((render_term(a), render_type(ta, bnd),
                              render_type(tsig, bnd)))
        if items:
            raise SlogTypeError(_mismatch(render_constraint(c), items))


def _mismatch(ctx, items):
    lines = ["type error:",
             "  in %s arguments have the wrong type:" % ctx]
    for arg, actual, expected in items:
        lines.append("    %s is %s but should be %s"
                     % (arg, actual, expected))
    return "\n".join(lines)


def _schema(sym):
    """Fresh argument types for a built-in constraint, or None."""
    a, b, c = TVar(), TVar(), TVar()

    def rel(x, y):
        return SetType(ProdType((x, y)))

    seq = rel(INT, a)
    table = {
        "=": (a, a), "neq": (a, a),
        "in": (a, SetType(a)), "nin": (a, SetType(a)),
        "set": (SetType(a),),
        "un": (SetType(a), SetType(a), SetType(a)),
        "nun": (SetType(a), SetType(a), SetType(a)),
        "inters": (SetType(a), SetType(a), SetType(a)),
        "ninters": (SetType(a), SetType(a), SetType(a)),
        "diff": (SetType(a), SetType(a), SetType(a)),
        "ndiff": (SetType(a), SetType(a), SetType(a)),
        "subset": (SetType(a), SetType(a)),
        "nsubset": (SetType(a), SetType(a)),
        "ssubset": (SetType(a), SetType(a)),
        "disj": (SetType(a), SetType(a)),
        "ndisj": (SetType(a), SetType(a)),
        "size": (SetType(a), INT),
        "is": (INT, INT),
        "=<": (INT, INT), "<": (INT, INT),
        ">": (INT, INT), ">=": (INT, INT),
        "rel": (rel(a, b),), "nrel": (rel(a, b),),
        "pfun": (rel(a, b),), "npfun": (rel(a, b),),
        "dom": (rel(a, b), SetType(a)), "ndom": (rel(a, b), SetType(a)),
        "ran": (rel(a, b), SetType(b)), "nran": (rel(a, b), SetType(b)),
        "comp": (rel(a, b), rel(b, c), rel(a, c)),
        "ncomp": (rel(a, b), rel(b, c), rel(a, c)),
        "inv": (rel(a, b), rel(b, a)), "ninv": (rel(a, b), rel(b, a)),
        "apply": (rel(a, b), a, b), "napply": (rel(a, b), a, b),
        "applyTo": (rel(a, b), a, b),
        "dres": (SetType(a), rel(a, b), rel(a, b)),
        "ndres": (SetType(a), rel(a, b), rel(a, b)),
        "dares": (SetType(a), rel(a, b), rel(a, b)),
        "ndares": (SetType(a), rel(a, b), rel(a, b)),
        "rres": (rel(a, b), SetType(b), rel(a, b)),
        "nrres": (rel(a, b), SetType(b), rel(a, b)),
        "rares": (rel(a, b), SetType(b), rel(a, b)),
        "nrares": (rel(a, b), SetType(b), rel(a, b)),
        "oplus": (rel(a, b), rel(a, b), rel(a, b)),
        "noplus": (rel(a, b), rel(a, b), rel(a, b)),
        "ring": (rel(a, b), SetType(a), SetType(b)),
        "nring": (rel(a, b), SetType(a), SetType(b)),
        "slist": (seq,),
        "head": (seq, a), "last": (seq, a),
        "tail": (seq, seq), "front": (seq, seq),
        "add": (seq, a, seq), "concat": (seq, seq, seq),
        "filter": (SetType(INT), seq, seq),
        "extract": (seq, SetType(a), seq),
    }
    return table.get(sym)
