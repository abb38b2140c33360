"""Term language: variables, atoms, integers, tuples and extensional sets.

Every syntactic object the solver manipulates is one of the immutable
classes below.  Sets are built from ``EmptySet`` and the binary
constructor ``SetCons(e, rest)`` (written ``{e/rest}``), where the rest
may itself be a variable — a *partially specified* set.  Integer
expressions are inert terms: nothing outside the arithmetic module ever
evaluates them.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Iterator, Optional


class Term:
    __slots__ = ()


@dataclass(frozen=True, slots=True)
class Var(Term):
    name: str

    def __repr__(self) -> str:
        return self.name


@dataclass(frozen=True, slots=True)
class Atom(Term):
    name: str

    def __repr__(self) -> str:
        return self.name


@dataclass(frozen=True, slots=True)
class TypedConst(Term):
    """A constant of a declared basic type, written ``t?atom``."""

    base: str
    payload: str

    def __repr__(self) -> str:
        return f"{self.base}?{self.payload}"


@dataclass(frozen=True, slots=True)
class IntLit(Term):
    value: int

    def __repr__(self) -> str:
        return str(self.value)


@dataclass(frozen=True, slots=True)
class IntExpr(Term):
    """Uninterpreted arithmetic expression; op in {+, -, *, div, mod}.

    Unary minus is the one-argument '-' form.
    """

    op: str
    args: tuple[Term, ...]

    def __repr__(self) -> str:
        if len(self.args) == 1:
            return f"-({self.args[0]!r})"
        return f"({self.args[0]!r} {self.op} {self.args[1]!r})"


@dataclass(frozen=True, slots=True)
class Tup(Term):
    """Bracketed tuple ``[a,b,...]``; ordered pairs are the arity-2 case."""

    items: tuple[Term, ...]

    def __repr__(self) -> str:
        return "[" + ",".join(repr(i) for i in self.items) + "]"


@dataclass(frozen=True, slots=True)
class EmptySet(Term):
    def __repr__(self) -> str:
        return "{}"


@dataclass(frozen=True, slots=True)
class SetCons(Term):
    elem: Term
    rest: Term

    def __repr__(self) -> str:
        return "{" + repr(self.elem) + "/" + repr(self.rest) + "}"


@dataclass(frozen=True, slots=True)
class Interval(Term):
    """Integer interval ``int(lo,hi)``; empty when lo > hi."""

    lo: Term
    hi: Term

    def __repr__(self) -> str:
        return f"int({self.lo!r},{self.hi!r})"


@dataclass(frozen=True, slots=True)
class CartProd(Term):
    left: Term
    right: Term

    def __repr__(self) -> str:
        return f"cp({self.left!r},{self.right!r})"


EMPTY = EmptySet()

SET_TERM_TYPES = (EmptySet, SetCons, Interval, CartProd)


def mkset(elems: list[Term] | tuple[Term, ...], tail: Term = EMPTY) -> Term:
    """Build {e1,...,en/tail} as nested SetCons cells."""
    out = tail
    for e in reversed(elems):
        out = SetCons(e, out)
    return out


def set_parts(t: Term) -> tuple[list[Term], Term]:
    """Split a set term into its listed elements and its ultimate tail."""
    elems = []
    while isinstance(t, SetCons):
        elems.append(t.elem)
        t = t.rest
    return elems, t


def pair(a: Term, b: Term) -> Tup:
    return Tup((a, b))


def is_pair(t: Term) -> bool:
    return isinstance(t, Tup) and len(t.items) == 2


def term_vars(t: Term, acc: Optional[set[str]] = None) -> set[str]:
    """All variable names occurring in t."""
    if acc is None:
        acc = set()
    stack = [t]
    while stack:
        s = stack.pop()
        if isinstance(s, Var):
            acc.add(s.name)
        elif isinstance(s, (IntExpr, Tup)):
            stack.extend(s.args if isinstance(s, IntExpr) else s.items)
        elif isinstance(s, SetCons):
            stack.append(s.elem)
            stack.append(s.rest)
        elif isinstance(s, Interval):
            stack.append(s.lo)
            stack.append(s.hi)
        elif isinstance(s, CartProd):
            stack.append(s.left)
            stack.append(s.right)
    return acc


def is_ground(t: Term) -> bool:
    return not term_vars(t)


def subterms(t: Term) -> Iterator[Term]:
    stack = [t]
    while stack:
        s = stack.pop()
        yield s
        if isinstance(s, IntExpr):
            stack.extend(s.args)
        elif isinstance(s, Tup):
            stack.extend(s.items)
        elif isinstance(s, SetCons):
            stack.extend((s.elem, s.rest))
        elif isinstance(s, Interval):
            stack.extend((s.lo, s.hi))
        elif isinstance(s, CartProd):
            stack.extend((s.left, s.right))


class Subst:
    """A substitution: mapping from variable names to terms.

    Internally triangular (bindings may mention other bound variables);
    `resolve` chases to a fully substituted term.  `to_idempotent`
    produces the flattened, idempotent map the unifier hands out.
    """

    __slots__ = ("bindings",)

    def __init__(self, bindings: Optional[dict[str, Term]] = None):
        self.bindings = bindings if bindings is not None else {}

    def copy(self) -> "Subst":
        return Subst(dict(self.bindings))

    def walk(self, t: Term) -> Term:
        """Follow variable bindings at the top level only."""
        while isinstance(t, Var):
            nxt = self.bindings.get(t.name)
            if nxt is None:
                return t
            t = nxt
        return t

    def bind(self, name: str, t: Term) -> None:
        self.bindings[name] = t

    def resolve(self, t: Term) -> Term:
        """Apply the substitution all the way down."""
        t = self.walk(t)
        if isinstance(t, Var):
            return t
        if isinstance(t, IntExpr):
            return IntExpr(t.op, tuple(self.resolve(a) for a in t.args))
        if isinstance(t, Tup):
            return Tup(tuple(self.resolve(a) for a in t.items))
        if isinstance(t, SetCons):
            return SetCons(self.resolve(t.elem), self.resolve(t.rest))
        if isinstance(t, Interval):
            return Interval(self.resolve(t.lo), self.resolve(t.hi))
        if isinstance(t, CartProd):
            return CartProd(self.resolve(t.left), self.resolve(t.right))
        return t

    def to_idempotent(self) -> dict[str, Term]:
        return {n: self.resolve(Var(n)) for n in self.bindings}

    def __len__(self) -> int:
        return len(self.bindings)

    def __repr__(self) -> str:
        inner = ", ".join(f"{k}={v!r}" for k, v in self.bindings.items())
        return "{" + inner + "}"


def apply_subst(bindings: dict[str, Term], t: Term) -> Term:
    """Apply an (idempotent) bindings map to a term."""
    return Subst(dict(bindings)).resolve(t)


class VarRegistry:
    """Fresh-variable supply for one engine session.

    Names are `_<hint><n>` with a single global counter, and the counter
    skips past any name already seen by the parser so fresh variables
    can never collide with user-written ones.
    """

    def __init__(self) -> None:
        self._counter = 0
        self._seen: set[str] = set()

    def note(self, name: str) -> None:
        self._seen.add(name)

    def fresh(self, hint: str = "N") -> Var:
        hint = hint.lstrip("_") or "N"
        # keep only the leading identifier-ish chunk, drop trailing digits
        hint = hint.rstrip("0123456789") or "N"
        while True:
            self._counter += 1
            name = f"_{hint}{self._counter}"
            if name not in self._seen:
                self._seen.add(name)
                return Var(name)
