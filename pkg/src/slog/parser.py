"""Tokenizer and recursive-descent parser.

Three entry points: whole source files (clauses + directives), single goals,
and single terms.  The grammar is small enough that hand-rolled descent stays
readable and gives precise positions in error messages.
"""
from .errors import SlogSyntaxError
from .goals import (BasicType, Call, Clause, Conj, Constraint, Directive,
                    Disj, ProdType, Program, SetType)
from .terms import (EMPTY, Atom, CartProd, IntExpr, IntLit, Interval, Tup,
                    TypedConst, Var, VarRegistry, mkset)

# Constraint symbols recognised in goal position, with their arities.
CONSTRAINT_ARITY = {
    "set": 1, "un": 3, "nun": 3, "inters": 3, "ninters": 3,
    "diff": 3, "ndiff": 3, "subset": 2, "nsubset": 2, "ssubset": 2,
    "disj": 2, "ndisj": 2, "size": 2,
    "rel": 1, "nrel": 1, "pfun": 1, "npfun": 1,
    "apply": 3, "napply": 3, "applyTo": 3,
    "dom": 2, "ndom": 2, "ran": 2, "nran": 2,
    "comp": 3, "ncomp": 3, "inv": 2, "ninv": 2,
    "dres": 3, "ndres": 3, "dares": 3, "ndares": 3,
    "rres": 3, "nrres": 3, "rares": 3, "nrares": 3,
    "oplus": 3, "noplus": 3, "ring": 3, "nring": 3,
    "slist": 1, "head": 2, "tail": 2, "last": 2, "front": 2,
    "add": 3, "concat": 3, "filter": 3, "extract": 3,
}

INFIX_OPS = {"=", "neq", "in", "nin", "is", "=<", "<", ">", ">="}

_SYMBOLS = (":-", "=<", "<=", ">=", "=", "<", ">", "&", "(", ")", "{", "}",
            "[", "]", ",", "/", ".", "?", "+", "-", "*")

_NAME_START = "abcdefghijklmnopqrstuvwxyz"
_VAR_START = "ABCDEFGHIJKLMNOPQRSTUVWXYZ_"
_IDENT = _NAME_START + _VAR_START + "0123456789"


class Token:
    __slots__ = ("kind", "value", "line", "col")

    def __init__(self, kind, value, line, col):
        self.kind = kind
        self.value = value
        self.line = line
        self.col = col

    def __repr__(self):
        return f"Token({self.kind},{self.value!r})"


def tokenize(text):
    toks = []
    i, n = 0, len(text)
    line, col = 1, 1

    def advance(k):
        nonlocal i, line, col
        for _ in range(k):
            if text[i] == "\n":
                line += 1
                col = 1
            else:
                col += 1
            i += 1

    while i < n:
        c = text[i]
        if c in " \t\r\n":
            advance(1)
            continue
        if c == "%":
            while i < n and text[i] != "\n":
                advance(1)
            continue
        if c == "'":
            l0, c0 = line, col
            advance(1)
            buf = []
            while True:
                if i >= n:
                    raise SlogSyntaxError("unterminated quoted atom", l0, c0)
                if text[i] == "'":
                    if i + 1 < n and text[i + 1] == "'":
                        buf.append("'")
                        advance(2)
                        continue
                    advance(1)
                    break
                buf.append(text[i])
                advance(1)
            toks.append(Token("qatom", "".join(buf), l0, c0))
            continue
        if c.isdigit():
            l0, c0 = line, col
            j = i
            while j < n and text[j].isdigit():
                j += 1
            toks.append(Token("int", int(text[i:j]), l0, c0))
            advance(j - i)
            continue
        if c in _NAME_START or c in _VAR_START:
            l0, c0 = line, col
            j = i
            while j < n and text[j] in _IDENT:
                j += 1
            word = text[i:j]
            kind = "name" if c in _NAME_START else "var"
            toks.append(Token(kind, word, l0, c0))
            advance(j - i)
            continue
        for sym in _SYMBOLS:
            if text.startswith(sym, i):
                toks.append(Token("op", "=<" if sym == "<=" else sym, line, col))
                advance(len(sym))
                break
        else:
            raise SlogSyntaxError(f"unexpected character {c!r}", line, col)
    toks.append(Token("eof", None, line, col))
    return toks


class Parser:
    def __init__(self, text, registry=None):
        self.toks = tokenize(text)
        self.pos = 0
        self.registry = registry if registry is not None else VarRegistry()

    # -- token plumbing ----------------------------------------------------

    def peek(self, ahead=0):
        return self.toks[min(self.pos + ahead, len(self.toks) - 1)]

    def next(self):
        t = self.toks[self.pos]
        if t.kind != "eof":
            self.pos += 1
        return t

    def expect(self, kind, value=None):
        t = self.peek()
        if t.kind != kind or (value is not None and t.value != value):
            want = value if value is not None else kind
            got = t.value if t.value is not None else t.kind
            raise SlogSyntaxError(f"expected {want!r}, found {got!r}",
                                  t.line, t.col)
        return self.next()

    def at(self, kind, value=None, ahead=0):
        t = self.peek(ahead)
        return t.kind == kind and (value is None or t.value == value)

    # -- terms --------------------------------------------------------------

    def parse_term(self):
        return self._additive()

    def _additive(self):
        t = self._multiplicative()
        while self.at("op", "+") or self.at("op", "-"):
            op = self.next().value
            rhs = self._multiplicative()
            t = IntExpr(op, (t, rhs))
        return t

    def _multiplicative(self):
        t = self._unary()
        while self.at("op", "*") or self.at("name", "div") or self.at("name", "mod"):
            op = self.next().value
            rhs = self._unary()
            t = IntExpr(op, (t, rhs))
        return t

    def _unary(self):
        if self.at("op", "-"):
            tok = self.next()
            inner = self._unary()
            if isinstance(inner, IntLit):
                return IntLit(-inner.value)
            return IntExpr("-", (inner,))
        return self._primary()

    def _primary(self):
        t = self.peek()
        if t.kind == "int":
            self.next()
            return IntLit(t.value)
        if t.kind == "qatom":
            self.next()
            return self._maybe_typed(Atom(t.value))
        if t.kind == "var":
            self.next()
            if t.value == "_":
                return self.registry.fresh("V")
            self.registry.note(t.value)
            return Var(t.value)
        if t.kind == "name":
            if t.value == "int" and self.at("op", "(", 1):
                self.next(); self.next()
                lo = self.parse_term()
                self.expect("op", ",")
                hi = self.parse_term()
                self.expect("op", ")")
                return Interval(lo, hi)
            if t.value == "cp" and self.at("op", "(", 1):
                self.next(); self.next()
                a = self.parse_term()
                self.expect("op", ",")
                b = self.parse_term()
                self.expect("op", ")")
                return CartProd(a, b)
            self.next()
            return self._maybe_typed(Atom(t.value))
        if t.kind == "op" and t.value == "{":
            return self._set_term()
        if t.kind == "op" and t.value == "[":
            return self._bracket_term()
        if t.kind == "op" and t.value == "(":
            self.next()
            inner = self.parse_term()
            self.expect("op", ")")
            return inner
        got = t.value if t.value is not None else t.kind
        raise SlogSyntaxError(f"expected a term, found {got!r}", t.line, t.col)

    def _maybe_typed(self, base_atom):
        """name?payload makes a constant of a declared basic type."""
        if not self.at("op", "?"):
            return base_atom
        qtok = self.next()
        p = self.peek()
        if p.kind in ("name", "qatom"):
            self.next()
            return TypedConst(base_atom.name, p.value)
        raise SlogSyntaxError("expected an atom after '?'", qtok.line, qtok.col)

    def _set_term(self):
        self.expect("op", "{")
        if self.at("op", "}"):
            self.next()
            return EMPTY
        elems = [self.parse_term()]
        while self.at("op", ","):
            self.next()
            elems.append(self.parse_term())
        tail = EMPTY
        if self.at("op", "/"):
            self.next()
            tail = self.parse_term()
        self.expect("op", "}")
        return mkset(elems, tail)

    def _bracket_term(self):
        tok = self.expect("op", "[")
        if self.at("op", "]"):
            raise SlogSyntaxError("empty bracket term", tok.line, tok.col)
        items = [self.parse_term()]
        while self.at("op", ","):
            self.next()
            items.append(self.parse_term())
        self.expect("op", "]")
        return Tup(tuple(items))

    # -- type expressions ----------------------------------------------------

    def parse_typeexpr(self):
        t = self.peek()
        if t.kind == "name":
            if t.value == "stype" and self.at("op", "(", 1):
                self.next(); self.next()
                inner = self.parse_typeexpr()
                self.expect("op", ")")
                return SetType(inner)
            self.next()
            return BasicType(t.value)
        if t.kind == "op" and t.value == "[":
            self.next()
            items = [self.parse_typeexpr()]
            while self.at("op", ","):
                self.next()
                items.append(self.parse_typeexpr())
            self.expect("op", "]")
            if len(items) < 2:
                raise SlogSyntaxError("product type needs at least two components",
                                      t.line, t.col)
            return ProdType(tuple(items))
        got = t.value if t.value is not None else t.kind
        raise SlogSyntaxError(f"expected a type, found {got!r}", t.line, t.col)

    # -- goals ----------------------------------------------------------------

    def parse_goal_expr(self):
        left = self._conj()
        if self.at("name", "or"):
            self.next()
            right = self.parse_goal_expr()
            # splice same-type operands: or/& are associative, so redundant
            # grouping parses to the same flat goal it prints as
            lparts = left.parts if isinstance(left, Disj) else (left,)
            rparts = right.parts if isinstance(right, Disj) else (right,)
            return Disj(lparts + rparts)
        return left

    def _conj(self):
        left = self._goal_prim()
        if self.at("op", "&"):
            self.next()
            right = self._conj()
            lparts = left.parts if isinstance(left, Conj) else (left,)
            rparts = right.parts if isinstance(right, Conj) else (right,)
            return Conj(lparts + rparts)
        return left

    def _goal_prim(self):
        t = self.peek()
        if t.kind == "op" and t.value == "(":
            # Could be a parenthesised goal or a parenthesised arithmetic
            # term starting an infix constraint; try the goal reading first.
            saved = self.pos
            self.next()
            try:
                inner = self.parse_goal_expr()
                self.expect("op", ")")
                return inner
            except SlogSyntaxError:
                self.pos = saved
                return self._infix_constraint()
        if t.kind == "name":
            if t.value == "foreach" and self.at("op", "(", 1):
                return self._foreach()
            if t.value == "dec" and self.at("op", "(", 1):
                return self._dec()
            if t.value in CONSTRAINT_ARITY and self.at("op", "(", 1):
                return self._prefix_constraint(t)
            if t.value == "true" and not self.at("op", "(", 1):
                self.next()
                return Constraint("true")
            if self.at("op", "(", 1) and t.value not in ("int", "cp"):
                return self._call(t)
        return self._infix_constraint()

    def _args(self):
        self.expect("op", "(")
        args = [self.parse_term()]
        while self.at("op", ","):
            self.next()
            args.append(self.parse_term())
        self.expect("op", ")")
        return tuple(args)

    def _prefix_constraint(self, t):
        self.next()
        args = self._args()
        want = CONSTRAINT_ARITY[t.value]
        if len(args) != want:
            raise SlogSyntaxError(
                f"{t.value} takes {want} argument{'s' if want != 1 else ''},"
                f" found {len(args)}", t.line, t.col)
        return Constraint(t.value, args)

    def _call(self, t):
        self.next()
        return Call(t.value, self._args())

    def _infix_constraint(self):
        lhs = self.parse_term()
        t = self.peek()
        op = None
        if t.kind == "op" and t.value in INFIX_OPS:
            op = t.value
        elif t.kind == "name" and t.value in INFIX_OPS:
            op = t.value
        if op is None:
            got = t.value if t.value is not None else t.kind
            raise SlogSyntaxError(f"expected a constraint operator, found {got!r}",
                                  t.line, t.col)
        self.next()
        rhs = self.parse_term()
        return Constraint(op, (lhs, rhs))

    def _foreach(self):
        tok = self.next()
        self.expect("op", "(")
        v = self.parse_term()
        if not isinstance(v, Var):
            raise SlogSyntaxError("foreach needs a variable before 'in'",
                                  tok.line, tok.col)
        self.expect("name", "in")
        s = self.parse_term()
        self.expect("op", ",")
        body = self.parse_goal_expr()
        self.expect("op", ")")
        for leaf in _goal_leaves(body):
            if isinstance(leaf, Call):
                raise SlogSyntaxError("foreach body must contain only constraints",
                                      tok.line, tok.col)
        return Constraint("foreach", (v, s, body))

    def _dec(self):
        self.next()
        self.expect("op", "(")
        if self.at("op", "["):
            self.next()
            vs = [self._dec_var()]
            while self.at("op", ","):
                self.next()
                vs.append(self._dec_var())
            self.expect("op", "]")
            target = Tup(tuple(vs))
        else:
            target = self._dec_var()
        self.expect("op", ",")
        te = self.parse_typeexpr()
        self.expect("op", ")")
        return Constraint("dec", (target, te))

    def _dec_var(self):
        t = self.expect("var")
        self.registry.note(t.value)
        return Var(t.value)

    # -- programs ---------------------------------------------------------------

    def parse_program(self):
        prog = Program()
        while not self.at("eof"):
            if self.at("op", ":-"):
                self.next()
                prog.items.append(self._directive())
            else:
                prog.items.append(self._clause())
        return prog

    def _directive(self):
        t = self.expect("name")
        kind = t.value
        if kind == "dec_type":
            self.expect("op", "(")
            name = self.expect("name").value
            self.expect("op", ",")
            te = self.parse_typeexpr()
            self.expect("op", ")")
            d = Directive("dec_type", (name, te))
        elif kind == "dec_p_type":
            self.expect("op", "(")
            pname = self.expect("name").value
            self.expect("op", "(")
            tes = [self.parse_typeexpr()]
            while self.at("op", ","):
                self.next()
                tes.append(self.parse_typeexpr())
            self.expect("op", ")")
            self.expect("op", ")")
            d = Directive("dec_p_type", (pname, tuple(tes)))
        elif kind in ("consult", "int_solver"):
            self.expect("op", "(")
            a = self.peek()
            if a.kind in ("name", "qatom"):
                self.next()
                arg = a.value
            else:
                raise SlogSyntaxError("expected an atom argument", a.line, a.col)
            self.expect("op", ")")
            d = Directive(kind, (arg,))
        elif kind in ("type_check", "notype_check"):
            d = Directive(kind)
        else:
            raise SlogSyntaxError(f"unknown directive {kind!r}", t.line, t.col)
        self.expect("op", ".")
        return d

    def _clause(self):
        t = self.expect("name")
        params = self._args() if self.at("op", "(") else ()
        body = None
        if self.at("op", ":-"):
            self.next()
            body = self.parse_goal_expr()
        self.expect("op", ".")
        return Clause(t.value, params, body)

    # -- top-level inputs ----------------------------------------------------

    def parse_goal(self):
        g = self.parse_goal_expr()
        self.expect("op", ".")
        self.expect("eof")
        return g

    def parse_repl_input(self):
        """One interactive line: ('directive', d) or ('goal', g)."""
        t = self.peek()
        if t.kind == "name":
            if t.value == "halt" and self.at("op", ".", 1):
                self.next(); self.next()
                return ("directive", Directive("halt"))
            if t.value in ("type_check", "notype_check") and self.at("op", ".", 1):
                self.next(); self.next()
                return ("directive", Directive(t.value))
            if t.value in ("consult", "int_solver") and self.at("op", "(", 1):
                saved = self.pos
                try:
                    d = self._directive()
                    self.expect("eof")
                    return ("directive", d)
                except SlogSyntaxError:
                    self.pos = saved
        return ("goal", self.parse_goal())


def _goal_leaves(g):
    if isinstance(g, (Conj, Disj)):
        for p in g.parts:
            yield from _goal_leaves(p)
    else:
        yield g


def parse_program(text, registry=None):
    return Parser(text, registry).parse_program()


def parse_goal(text, registry=None):
    return Parser(text, registry).parse_goal()


def parse_repl_input(text, registry=None):
    return Parser(text, registry).parse_repl_input()


def parse_term(text, registry=None):
    p = Parser(text, registry)
    t = p.parse_term()
    p.expect("eof")
    return t
