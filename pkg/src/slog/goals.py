"""Goal syntax: constraints, predicate calls, conjunction and disjunction.

A parsed goal is a tree of Conj/Disj nodes whose leaves are Constraint or
Call objects.  Constraints are also the runtime currency of the solver: the
store keeps lists of them, rewrite rules consume and emit them.
"""
from dataclasses import dataclass, field

from .terms import (CartProd, IntExpr, Interval, SetCons, Term, Tup, Var)


def ordered_term_vars(t, acc=None, seen=None):
    """Variable names in left-to-right first-occurrence order."""
    if acc is None:
        acc = []
    if seen is None:
        seen = set(acc)
    if isinstance(t, Var):
        if t.name not in seen:
            seen.add(t.name)
            acc.append(t.name)
    elif isinstance(t, IntExpr):
        for a in t.args:
            ordered_term_vars(a, acc, seen)
    elif isinstance(t, Tup):
        for a in t.items:
            ordered_term_vars(a, acc, seen)
    elif isinstance(t, SetCons):
        ordered_term_vars(t.elem, acc, seen)
        ordered_term_vars(t.rest, acc, seen)
    elif isinstance(t, Interval):
        ordered_term_vars(t.lo, acc, seen)
        ordered_term_vars(t.hi, acc, seen)
    elif isinstance(t, CartProd):
        ordered_term_vars(t.left, acc, seen)
        ordered_term_vars(t.right, acc, seen)
    return acc


@dataclass(frozen=True, slots=True)
class TypeExpr:
    """Base class for type expressions appearing in declarations."""


@dataclass(frozen=True, slots=True)
class BasicType(TypeExpr):
    name: str

    def __str__(self):
        return self.name


@dataclass(frozen=True, slots=True)
class SetType(TypeExpr):
    elem: TypeExpr

    def __str__(self):
        return "stype(%s)" % self.elem


@dataclass(frozen=True, slots=True)
class ProdType(TypeExpr):
    items: tuple

    def __str__(self):
        return "[" + ",".join(str(i) for i in self.items) + "]"


@dataclass(frozen=True, slots=True)
class Constraint:
    """A single constraint literal, e.g. un(A,B,C) or X in S.

    ``args`` holds Term objects, except for two special forms:
    foreach(V in A, body) stores (V, A, body) with body a goal tree, and
    dec(Vars, t) stores (varsterm, TypeExpr).
    """
    sym: str
    args: tuple = ()

    def vars(self, acc=None):
        """Variable names, in first-occurrence order."""
        if acc is None:
            acc = []
        seen = set(acc)
        if self.sym == "foreach":
            ordered_term_vars(self.args[0], acc, seen)
            ordered_term_vars(self.args[1], acc, seen)
            goal_vars(self.args[2], acc)
        elif self.sym == "dec":
            ordered_term_vars(self.args[0], acc, seen)
        else:
            for a in self.args:
                ordered_term_vars(a, acc, seen)
        return acc

    def map_terms(self, f):
        if self.sym == "foreach":
            v, s, body = self.args
            return Constraint("foreach", (f(v), f(s), map_goal_terms(body, f)))
        if self.sym == "dec":
            return Constraint("dec", (f(self.args[0]), self.args[1]))
        return Constraint(self.sym, tuple(f(a) for a in self.args))


@dataclass(frozen=True, slots=True)
class Call:
    """A user-defined predicate call, resolved against the clause database."""
    name: str
    args: tuple = ()

    def vars(self, acc=None):
        if acc is None:
            acc = []
        seen = set(acc)
        for a in self.args:
            ordered_term_vars(a, acc, seen)
        return acc


@dataclass(frozen=True, slots=True)
class Conj:
    parts: tuple

    def vars(self, acc=None):
        if acc is None:
            acc = []
        for p in self.parts:
            p.vars(acc)
        return acc


@dataclass(frozen=True, slots=True)
class Disj:
    parts: tuple

    def vars(self, acc=None):
        if acc is None:
            acc = []
        for p in self.parts:
            p.vars(acc)
        return acc


def goal_vars(g, acc=None):
    """All variables in a goal tree, in first-occurrence order."""
    if acc is None:
        acc = []
    g.vars(acc)
    return acc


def map_goal_terms(g, f):
    if isinstance(g, Conj):
        return Conj(tuple(map_goal_terms(p, f) for p in g.parts))
    if isinstance(g, Disj):
        return Disj(tuple(map_goal_terms(p, f) for p in g.parts))
    if isinstance(g, Constraint):
        return g.map_terms(f)
    if isinstance(g, Call):
        return Call(g.name, tuple(f(a) for a in g.args))
    raise TypeError(f"not a goal node: {g!r}")


def conj_parts(g):
    """Flatten a goal known to be a pure conjunction into a list of leaves."""
    if isinstance(g, Conj):
        out = []
        for p in g.parts:
            out.extend(conj_parts(p))
        return out
    return [g]


@dataclass(frozen=True, slots=True)
class Clause:
    """head :- body.  Head is (name, args); a fact has body None."""
    name: str
    params: tuple
    body: object = None


@dataclass(frozen=True, slots=True)
class Directive:
    """A ':-' directive or a REPL command: kind plus raw arguments."""
    kind: str
    args: tuple = ()


@dataclass(slots=True)
class Program:
    items: list = field(default_factory=list)
