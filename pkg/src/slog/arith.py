"""Integer constraint store and decision procedures.

Arithmetic expressions are inert terms everywhere except inside `is` and the
order predicates, which funnel through this module.  The store keeps linear
equalities, inequalities and disequalities over integer variables, plus the
finite domains registered by `V in int(a,b)`.

Satisfiability: equalities are eliminated exactly (with a divisibility check),
disequalities are split, and the remaining inequalities go through
Fourier-Motzkin with branch-and-bound on fractional coordinates.  Rational
feasibility with every branch open is reported as satisfiable, which matches
how a rational solver behaves on integer unknowns.
"""
from fractions import Fraction

from .goals import Constraint
from .terms import IntExpr, IntLit, Var


def euclid_mod(a, n):
    return a % abs(n)


def euclid_div(a, n):
    return (a - euclid_mod(a, n)) // n


def eval_ground(t, walk=None):
    """Evaluate a ground arithmetic term to an int, or None."""
    if walk is not None:
        t = walk(t)
    if isinstance(t, IntLit):
        return t.value
    if isinstance(t, IntExpr):
        xs = [eval_ground(a, walk) for a in t.args]
        if any(x is None for x in xs):
            return None
        if len(xs) == 1:
            return -xs[0]
        a, b = xs
        if t.op == "+":
            return a + b
        if t.op == "-":
            return a - b
        if t.op == "*":
            return a * b
        if t.op == "div":
            return None if b == 0 else euclid_div(a, b)
        if t.op == "mod":
            return None if b == 0 else euclid_mod(a, b)
    return None


class Lin:
    """A linear form sum(coeffs[v] * v) + const, compared as <=0 / ==0 / !=0."""
    __slots__ = ("coeffs", "const")

    def __init__(self, coeffs=None, const=0):
        self.coeffs = ({v: Fraction(c) for v, c in coeffs.items()}
                       if coeffs else {})
        self.const = Fraction(const)

    @staticmethod
    def var(name):
        return Lin({name: Fraction(1)})

    def scale(self, k):
        k = Fraction(k)
        return Lin({v: c * k for v, c in self.coeffs.items()}, self.const * k)

    def add(self, other):
        out = dict(self.coeffs)
        for v, c in other.coeffs.items():
            nc = out.get(v, Fraction(0)) + c
            if nc:
                out[v] = nc
            else:
                out.pop(v, None)
        return Lin(out, self.const + other.const)

    def sub(self, other):
        return self.add(other.scale(-1))

    def shift(self, k):
        return Lin(self.coeffs, self.const + k)

    def is_const(self):
        return not self.coeffs

    def subst(self, var, repl):
        """Replace var by the linear form repl."""
        c = self.coeffs.get(var)
        if c is None:
            return self
        rest = Lin({v: k for v, k in self.coeffs.items() if v != var}, self.const)
        return rest.add(repl.scale(c))

    def value(self, point):
        tot = self.const
        for v, c in self.coeffs.items():
            tot += c * point[v]
        return tot

    def int_normal(self):
        """Scale to coprime integer coefficients; returns (lin, ok) where
        ok=False means an equality with this form has no integer solution."""
        from math import gcd, lcm
        if not self.coeffs:
            return self, True
        denom = lcm(*[c.denominator for c in self.coeffs.values()],
                    self.const.denominator)
        coeffs = {v: int(c * denom) for v, c in self.coeffs.items()}
        const = self.const * denom
        g = 0
        for c in coeffs.values():
            g = gcd(g, abs(c))
        if g > 1:
            if const % g != 0:
                return Lin(coeffs, const), False
            coeffs = {v: c // g for v, c in coeffs.items()}
            const = const / g
        return Lin(coeffs, const), True

    def key(self):
        lin, _ = self.int_normal()
        items = tuple(sorted((v, c) for v, c in lin.coeffs.items()))
        return (items, lin.const)

    def __repr__(self):
        parts = [f"{c}*{v}" for v, c in sorted(self.coeffs.items())]
        parts.append(str(self.const))
        return "+".join(parts)


def lin_of(t, walk=None):
    """Linear form of a term, or None when not linear (or not arithmetic)."""
    if walk is not None:
        t = walk(t)
    if isinstance(t, IntLit):
        return Lin({}, t.value)
    if isinstance(t, Var):
        return Lin.var(t.name)
    if isinstance(t, IntExpr):
        g = eval_ground(t, walk)
        if g is not None:
            return Lin({}, g)
        if len(t.args) == 1:
            a = lin_of(t.args[0], walk)
            return None if a is None else a.scale(-1)
        a = lin_of(t.args[0], walk)
        b = lin_of(t.args[1], walk)
        if a is None or b is None:
            return None
        if t.op == "+":
            return a.add(b)
        if t.op == "-":
            return a.sub(b)
        if t.op == "*":
            if a.is_const():
                return b.scale(a.const)
            if b.is_const():
                return a.scale(b.const)
            return None
        return None  # div/mod with variables
    return None


# ---------------------------------------------------------------------------
# core solving over lists of Lin

def _eliminate_eqs(eqs, les, neqs):
    """Gaussian elimination; returns (solved, les, neqs) or None if unsat.
    ``solved`` maps var -> Lin over the remaining variables."""
    eqs = list(eqs)
    les = list(les)
    neqs = list(neqs)
    solved = {}
    while eqs:
        eq = eqs.pop()
        norm, ok = eq.int_normal()
        if not norm.coeffs:
            if norm.const != 0:
                return None
            continue
        if not ok:
            return None
        var = min(norm.coeffs, key=lambda v: (abs(norm.coeffs[v]), v))
        c = norm.coeffs[var]
        repl = Lin({v: -k / c for v, k in norm.coeffs.items() if v != var},
                   -norm.const / c)
        eqs = [e.subst(var, repl) for e in eqs]
        les = [e.subst(var, repl) for e in les]
        neqs = [e.subst(var, repl) for e in neqs]
        solved = {v: e.subst(var, repl) for v, e in solved.items()}
        solved[var] = repl
    return solved, les, neqs


def _fm_solve(les):
    """Fourier-Motzkin with back-substitution.

    Returns a rational point satisfying all lins <= 0, or None."""
    les = [l for l in les if l.coeffs or l.const > 0]
    for l in les:
        if not l.coeffs and l.const > 0:
            return None
    vars_ = sorted({v for l in les for v in l.coeffs})
    stack = []
    for x in vars_:
        lowers, uppers, rest = [], [], []
        for l in les:
            c = l.coeffs.get(x, Fraction(0))
            if c > 0:
                uppers.append(l)
            elif c < 0:
                lowers.append(l)
            else:
                rest.append(l)
        stack.append((x, lowers, uppers))
        new = rest
        for lo in lowers:
            cl = -lo.coeffs[x]
            for up in uppers:
                cu = up.coeffs[x]
                comb = lo.scale(cu).add(up.scale(cl))
                if not comb.coeffs:
                    if comb.const > 0:
                        return None
                else:
                    new.append(comb)
        les = new
    for l in les:
        if not l.coeffs and l.const > 0:
            return None
    point = {}
    for x, lowers, uppers in reversed(stack):
        lo = hi = None
        for l in lowers:
            c = l.coeffs[x]
            rest = Lin({v: k for v, k in l.coeffs.items() if v != x}, l.const)
            b = rest.value(point) / (-c)  # x >= b
            lo = b if lo is None else max(lo, b)
        for l in uppers:
            c = l.coeffs[x]
            rest = Lin({v: k for v, k in l.coeffs.items() if v != x}, l.const)
            b = -rest.value(point) / c  # x <= b
            hi = b if hi is None else min(hi, b)
        if lo is None and hi is None:
            point[x] = Fraction(0)
        elif lo is None:
            v = _floor(hi)
            point[x] = Fraction(min(v, 0))
        elif hi is None:
            v = _ceil(lo)
            point[x] = Fraction(max(v, 0))
        else:
            il, ih = _ceil(lo), _floor(hi)
            if il <= ih:
                point[x] = Fraction(max(il, min(0, ih)))
            else:
                point[x] = (lo + hi) / 2
    return point


def _floor(f):
    return f.numerator // f.denominator


def _ceil(f):
    return -((-f.numerator) // f.denominator)


def _bb(les, depth=40):
    """Branch and bound for an integer point. Returns ('unsat', None),
    ('model', point) or ('open', None) when the search gave up."""
    point = _fm_solve(les)
    if point is None:
        return ("unsat", None)
    frac = next((v for v in sorted(point) if point[v].denominator != 1), None)
    if frac is None:
        return ("model", {v: int(c) for v, c in point.items()})
    if depth == 0:
        return ("open", None)
    v = point[frac]
    left = les + [Lin({frac: Fraction(1)}, -_floor(v))]        # x <= floor
    status, model = _bb(left, depth - 1)
    if status == "model":
        return (status, model)
    right = les + [Lin({frac: Fraction(-1)}, _ceil(v))]        # x >= ceil
    status2, model2 = _bb(right, depth - 1)
    if status2 == "model":
        return (status2, model2)
    if status == "unsat" and status2 == "unsat":
        return ("unsat", None)
    return ("open", None)


def _implicit_eqs(les):
    """Pairs f<=0, -f<=0 hiding an equality."""
    seen = set()
    out = []
    for l in les:
        if l.is_const():
            continue
        k = l.key()
        if l.scale(-1).key() in seen:
            out.append(l)
        else:
            seen.add(k)
    return out


def _split_neqs(les, neqs, depth=24):
    """Treat each neq as (f<=-1 or f>=1). Returns ('unsat'|'model'|'open', pt)."""
    while neqs:
        f = neqs[0]
        if f.is_const():
            if f.const == 0:
                return ("unsat", None)
            neqs = neqs[1:]
            continue
        if depth == 0:
            return ("open", None)
        rest = neqs[1:]
        s1, m1 = _split_neqs(les + [f.shift(1)], rest, depth - 1)
        if s1 == "model":
            return (s1, m1)
        s2, m2 = _split_neqs(les + [f.scale(-1).shift(1)], rest, depth - 1)
        if s2 == "model":
            return (s2, m2)
        if s1 == "unsat" and s2 == "unsat":
            return ("unsat", None)
        return ("open", None)
    return _bb(les)


class IntStore:
    """Linear integer constraints plus registered finite domains."""

    __slots__ = ("eqs", "les", "neqs", "doms", "dom_order", "surface",
                 "known", "_cache")

    def __init__(self):
        self.eqs = []
        self.les = []
        self.neqs = []
        self.doms = {}        # var -> (lo, hi), registered via in int(a,b)
        self.dom_order = []
        self.surface = []     # Constraints for residual rendering
        self.known = set()    # every var ever mentioned arithmetically
        self._cache = None

    def copy(self):
        s = IntStore.__new__(IntStore)
        s.eqs = list(self.eqs)
        s.les = list(self.les)
        s.neqs = list(self.neqs)
        s.doms = dict(self.doms)
        s.dom_order = list(self.dom_order)
        s.surface = list(self.surface)
        s.known = set(self.known)
        s._cache = self._cache
        return s

    # -- posting -------------------------------------------------------------

    def _note(self, lin):
        self.known.update(lin.coeffs)
        self._cache = None

    def _add_surface(self, c):
        if c not in self.surface:
            self.surface.append(c)

    def post_is(self, x, e, walk=None):
        """x is e with e linear; returns False when e isn't linear."""
        lx = lin_of(x, walk)
        le = lin_of(e, walk)
        if lx is None or le is None:
            return False
        self.eqs.append(lx.sub(le))
        self._note(lx)
        self._note(le)
        self._add_surface(Constraint("is", (x, e)))
        return True

    def post_cmp(self, op, a, b, walk=None, surface=True):
        la = lin_of(a, walk)
        lb = lin_of(b, walk)
        if la is None or lb is None:
            return False
        if op in (">", ">="):
            la, lb = lb, la
            op = "<" if op == ">" else "=<"
        d = la.sub(lb)
        if op == "<":
            d = d.shift(1)
        self.les.append(d)
        self._note(d)
        if surface:
            self._add_surface(Constraint(op if op != "<" else "<", (a, b)))
        return True

    def post_neq(self, a, b, walk=None):
        la = lin_of(a, walk)
        lb = lin_of(b, walk)
        if la is None or lb is None:
            return False
        d = la.sub(lb)
        self.neqs.append(d)
        self._note(d)
        self._add_surface(Constraint("neq", (a, b)))
        return True

    def post_interval(self, var, lo, hi):
        """var in int(lo,hi) with ground integer bounds: bounds + domain."""
        self.les.append(Lin({var.name: Fraction(-1)}, lo))   # lo - v <= 0
        self.les.append(Lin({var.name: Fraction(1)}, -hi))   # v - hi <= 0
        self.known.add(var.name)
        self._cache = None
        old = self.doms.get(var.name)
        if old is None:
            self.doms[var.name] = (lo, hi)
            self.dom_order.append(var.name)
        else:
            self.doms[var.name] = (max(old[0], lo), min(old[1], hi))
        self._add_surface(Constraint(">=", (var, IntLit(lo))))
        self._add_surface(Constraint("<=", (var, IntLit(hi))))
        return True

    def post_eq_terms(self, a, b, walk=None):
        la = lin_of(a, walk)
        lb = lin_of(b, walk)
        if la is None or lb is None:
            return False
        self.eqs.append(la.sub(lb))
        self._note(la)
        self._note(lb)
        return True

    def mentions(self, name):
        return name in self.known

    # -- solving ---------------------------------------------------------------

    def _core(self):
        """Eliminate equalities (with implicit-equality saturation).

        Returns None when unsat, else (solved, les, neqs)."""
        eqs, les, neqs = list(self.eqs), list(self.les), list(self.neqs)
        solved = {}
        while True:
            r = _eliminate_eqs(eqs, les, neqs)
            if r is None:
                return None
            sol, les, neqs = r
            for v, repl in sol.items():
                solved = {w: e.subst(v, repl) for w, e in solved.items()}
                solved[v] = repl
            hidden = _implicit_eqs(les)
            if not hidden:
                return solved, les, neqs
            eqs = hidden
            les = [l for l in les]

    def sat(self):
        if self._cache is not None:
            return self._cache
        core = self._core()
        if core is None:
            self._cache = False
            return False
        _, les, neqs = core
        status, _ = _split_neqs(les, neqs)
        self._cache = status != "unsat"
        return self._cache

    def fixed_values(self):
        """Vars forced to a single integer by the equalities (and implicit
        equalities).  Empty when unsat; call sat() first."""
        core = self._core()
        if core is None:
            return {}
        solved, _, _ = core
        out = {}
        for v, e in solved.items():
            if e.is_const() and e.const.denominator == 1:
                out[v] = int(e.const)
        return out

    def witness(self, extra=()):
        """An integer model covering known vars plus ``extra``, or None."""
        core = self._core()
        if core is None:
            return None
        solved, les, neqs = core
        status, model = _split_neqs(les, neqs)
        if status == "unsat":
            return None
        if status == "open" or model is None:
            model = self._boxed_search(les, neqs)
            if model is None:
                return None
        vars_all = set(self.known) | set(extra)
        for v in vars_all:
            model.setdefault(v, 0)
        out = {}
        for v, e in solved.items():
            val = e.value({w: Fraction(model.get(w, 0)) for w in e.coeffs})
            if val.denominator != 1:
                # elimination used a non-unit pivot; search the full system
                model = self._full_boxed()
                if model is None:
                    return None
                for w in vars_all:
                    model.setdefault(w, 0)
                return {w: model.get(w, 0) for w in vars_all | set(model)}
            out[v] = int(val)
        for v in vars_all:
            out.setdefault(v, model.get(v, 0))
        return out

    def _full_boxed(self):
        les = list(self.les)
        for e in self.eqs:
            les.append(e)
            les.append(e.scale(-1))
        return self._boxed_search(les, list(self.neqs))

    def _boxed_search(self, les, neqs):
        names = sorted({v for l in les + neqs for v in l.coeffs})
        for bound in (4, 16, 64, 256, 1024, 4096):
            boxed = list(les)
            for v in names:
                boxed.append(Lin({v: Fraction(1)}, -bound))
                boxed.append(Lin({v: Fraction(-1)}, -bound))
            status, model = _split_neqs(boxed, neqs)
            if status == "model":
                return model
            if status == "unsat" and bound == 4096:
                return None
        return None

    # -- labeling (clpfd) -----------------------------------------------------

    def registered(self):
        return [v for v in self.dom_order]

    def label(self):
        """Enumerate assignments of the registered domain variables, in
        registration order, ascending.  Yields (assignment, fixed) pairs for
        each satisfiable assignment, where fixed holds the other variables
        forced to constants under it."""
        regs = self.registered()
        if not regs:
            return
        ranges = [range(self.doms[v][0], self.doms[v][1] + 1) for v in regs]

        def rec(i, acc):
            if i == len(regs):
                s = self.copy()
                for v, val in acc.items():
                    s.eqs.append(Lin({v: Fraction(1)}, -val))
                s._cache = None
                if s.sat():
                    fixed = s.fixed_values()
                    for v in regs:
                        fixed.pop(v, None)
                    yield (dict(acc), fixed)
                return
            for val in ranges[i]:
                acc[regs[i]] = val
                yield from rec(i + 1, acc)
                del acc[regs[i]]

        yield from rec(0, {})

    # -- rendering --------------------------------------------------------------

    def residual_surfaces(self, resolve):
        """Surface constraints with bindings applied; ground-true ones drop."""
        out = []
        for c in self.surface:
            rc = c.map_terms(resolve)
            a = eval_ground(rc.args[0])
            b = eval_ground(rc.args[1])
            if a is not None and b is not None:
                if _cmp_holds(rc.sym, a, b):
                    continue
            if rc not in out:
                out.append(rc)
        return out


def _cmp_holds(op, a, b):
    if op == "is" or op == "=":
        return a == b
    if op == "neq":
        return a != b
    if op == "=<" or op == "<=":
        return a <= b
    if op == "<":
        return a < b
    if op == ">=":
        return a >= b
    if op == ">":
        return a > b
    return False
