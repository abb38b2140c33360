"""Rewrite rules for the constraint symbols of the core language.

Each rule takes (store, constraint) and returns a list of child stores:
an empty list means the constraint is unsatisfiable on this branch, a
singleton [store] means deterministic progress (the store was mutated in
place), several stores mean a case split.  Irreducible constraints are
parked on the store's residue and woken when one of their variables gets
bound; a few of them get one more chance in the final stage (see solver).
"""
from .arith import eval_ground
from .goals import Call, Conj, Constraint, Disj
from .terms import (EMPTY, Atom, CartProd, EmptySet, IntExpr, IntLit,
                    Interval, SetCons, Tup, TypedConst, Var, is_ground,
                    mkset, pair, term_vars)
from .unify import eq, expand_cartprod, expand_interval, unify_step

SET_SHAPES = (EmptySet, SetCons, Interval, CartProd)


def C(sym, *args):
    return Constraint(sym, tuple(args))


def _branch(store, alts):
    """One child store per alternative (a list of constraints to push)."""
    if not alts:
        return []
    if len(alts) == 1:
        store.push_all(alts[0])
        return [store]
    out = []
    for cs in alts:
        child = store.clone()
        child.push_all(cs)
        out.append(child)
    return out


def _park(store, c):
    store.park(c)
    return [store]


# ---------------------------------------------------------------------------
# ground denotations

def ground_key(t):
    """Hashable denotation of a ground term; sets compare modulo order and
    duplicates, arithmetic expressions stay inert syntax trees."""
    if isinstance(t, Atom):
        return ("a", t.name)
    if isinstance(t, TypedConst):
        return ("c", t.base, t.payload)
    if isinstance(t, IntLit):
        return ("i", t.value)
    if isinstance(t, IntExpr):
        return ("e", t.op, tuple(ground_key(a) for a in t.args))
    if isinstance(t, Tup):
        return ("p", tuple(ground_key(a) for a in t.items))
    if isinstance(t, EmptySet):
        return ("s", frozenset())
    if isinstance(t, SetCons):
        elems = []
        while isinstance(t, SetCons):
            elems.append(t.elem)
            t = t.rest
        tailkey = ground_key(t)
        if tailkey[0] != "s":
            return None
        return ("s", tailkey[1] | frozenset(ground_key(e) for e in elems))
    if isinstance(t, Interval):
        if isinstance(t.lo, IntLit) and isinstance(t.hi, IntLit):
            return ("s", frozenset(("i", i) for i in
                                   range(t.lo.value, t.hi.value + 1)))
        return None
    if isinstance(t, CartProd):
        lk = ground_key(t.left)
        rk = ground_key(t.right)
        if lk is None or rk is None or lk[0] != "s" or rk[0] != "s":
            return None
        return ("s", frozenset(("p", (x, y)) for x in lk[1] for y in rk[1]))
    return None


def _resolved_ground(store, t):
    rt = store.resolve(t)
    return rt if is_ground(rt) else None


# ---------------------------------------------------------------------------
# helpers shared by the set rules

def _ensure_sets(store, terms):
    """Mark var args as sets; a non-set non-var arg sinks the constraint."""
    for t in terms:
        w = store.walk(t)
        if isinstance(w, Var):
            if not store.mark_sort(w.name, "set"):
                return False
        elif not isinstance(w, SET_SHAPES):
            return False
    return True


def _expand_arg(store, c, i):
    """Replace an Interval/CartProd argument by an explicit set when ground
    and small; otherwise park the whole constraint.  Returns the rewritten
    children, or None when the argument needs no expansion."""
    w = store.walk(c.args[i])
    if isinstance(w, Interval):
        ex = expand_interval(store, w)
    elif isinstance(w, CartProd):
        ex = expand_cartprod(store, w)
    else:
        return None
    if ex is None:
        return _park(store, c)
    args = list(c.args)
    args[i] = ex
    store.push(Constraint(c.sym, tuple(args)))
    return [store]


def _pairify(store, e):
    """View a relation element as an ordered pair, binding a variable to a
    fresh pair if needed.  Returns (x, y) or None when e can't be a pair."""
    w = store.walk(e)
    if isinstance(w, Tup) and len(w.items) == 2:
        return w.items
    if isinstance(w, Var):
        x, y = store.fresh("N"), store.fresh("N")
        if store.bind(w.name, pair(x, y)):
            return (x, y)
        return None
    return None


def _same_var(store, a, b):
    a = store.walk(a)
    b = store.walk(b)
    return isinstance(a, Var) and isinstance(b, Var) and a.name == b.name


def _spine(store, t):
    """(head, rest-term) of a walked SetCons."""
    elems, tail = store.set_view(t)
    return elems[0], mkset(elems[1:], tail)


# ---------------------------------------------------------------------------
# equality and disequality

def _r_eq(store, c):
    return unify_step(store, c.args[0], c.args[1])


_LEAFY = (Var, IntLit)


def _intish(t):
    """True when a (resolved) term is built purely from arithmetic parts."""
    if isinstance(t, _LEAFY):
        return True
    if isinstance(t, IntExpr):
        return all(_intish(a) for a in t.args)
    return False


_CLASSES = [(Atom, "atom"), (TypedConst, "tconst"), (IntLit, "int"),
            (IntExpr, "expr"), (Tup, "tup"),
    (EmptySet, "set"), (SetCons, "set"), (Interval, "set"), (CartProd, "set")]


def _cls(t):
    for k, name in _CLASSES:
        if isinstance(t, k):
            return name
    return "var"


def _r_neq(store, c):
    a = store.walk(c.args[0])
    b = store.walk(c.args[1])
    ra = store.resolve(a)
    rb = store.resolve(b)
    if is_ground(ra) and is_ground(rb):
        ka, kb = ground_key(ra), ground_key(rb)
        if ka is not None and kb is not None:
            return [] if ka == kb else [store]
    ca, cb = _cls(a), _cls(b)

    if ca == "var" and cb == "var":
        if a.name == b.name:
            return []
        sa, sb = store.sort_of(a.name), store.sort_of(b.name)
        if sa == "int" and sb == "int":
            if store.ints.post_neq(a, b, walk=store.walk):
                return [store] if store.ints.sat() else []
        return _park(store, c)

    if ca == "var" or cb == "var":
        v, other = (a, b) if ca == "var" else (b, a)
        if v.name in term_vars(store.resolve(other)):
            # occurs: never unifiable -- unless only as a set spine tail
            if isinstance(other, SetCons):
                elems, tail = store.set_view(other)
                tail_only = (isinstance(tail, Var) and tail.name == v.name
                             and not any(v.name in term_vars(store.resolve(e))
                                         for e in elems))
                if tail_only:
                    return _park(store, c)
            return [store]
        if store.sort_of(v.name) == "int" and _intish(store.resolve(other)):
            if not isinstance(other, IntExpr):
                if store.ints.post_neq(v, other, walk=store.walk):
                    return [store] if store.ints.sat() else []
        return _park(store, c)

    if ca != cb:
        # different constructors never unify; arithmetic terms are inert
        return [store]

    if ca == "atom":
        return [] if a.name == b.name else [store]
    if ca == "tconst":
        return [] if (a.base, a.payload) == (b.base, b.payload) else [store]
    if ca == "int":
        return [] if a.value == b.value else [store]
    if ca == "expr":
        if a.op != b.op or len(a.args) != len(b.args):
            return [store]
        return _branch(store, [[C("neq", x, y)]
                               for x, y in zip(a.args, b.args)])
    if ca == "tup":
        if len(a.items) != len(b.items):
            return [store]
        return _branch(store, [[C("neq", x, y)]
                               for x, y in zip(a.items, b.items)])

    # both set-shaped
    ea, ta = store.set_view(a)
    eb, tb = store.set_view(b)
    if isinstance(a, SetCons) and isinstance(b, EmptySet):
        return [store]
    if isinstance(b, SetCons) and isinstance(a, EmptySet):
        return [store]
    return _park(store, c)


# ---------------------------------------------------------------------------
# membership

def _r_in(store, c):
    x, s = c.args
    sw = store.walk(s)
    if isinstance(sw, EmptySet):
        return []
    if isinstance(sw, SetCons):
        gx = _resolved_ground(store, x)
        gs = _resolved_ground(store, sw)
        if gx is not None and gs is not None:
            kx, ks = ground_key(gx), ground_key(gs)
            if kx is not None and ks is not None:
                return [store] if kx in ks[1] else []
        e, rest = _spine(store, sw)
        return _branch(store, [[eq(x, e)], [C("in", x, rest)]])
    if isinstance(sw, Var):
        if not store.mark_sort(sw.name, "set"):
            return []
        n = store.fresh()
        return [store] if store.bind(sw.name, SetCons(x, n)) else []
    if isinstance(sw, Interval):
        lo = store.walk(sw.lo)
        hi = store.walk(sw.hi)
        xw = store.walk(x)
        if not (store.mark_int_term(lo) and store.mark_int_term(hi)
                and store.mark_int_term(xw) and _intish(store.resolve(xw))):
            return []
        if isinstance(lo, IntLit) and isinstance(hi, IntLit):
            gv = eval_ground(xw, store.walk)
            if gv is not None:
                return [store] if lo.value <= gv <= hi.value else []
            if isinstance(xw, Var):
                store.ints.post_interval(xw, lo.value, hi.value)
                return [store] if store.ints.sat() else []
        okl = store.ints.post_cmp("=<", lo, xw, walk=store.walk)
        okh = store.ints.post_cmp("=<", xw, hi, walk=store.walk)
        if okl and okh:
            return [store] if store.ints.sat() else []
        return _park(store, c)
    if isinstance(sw, CartProd):
        p = _pairify(store, x)
        if p is None:
            return []
        store.push_all([C("in", p[0], sw.left), C("in", p[1], sw.right)])
        return [store]
    return []


def _r_nin(store, c):
    x, s = c.args
    sw = store.walk(s)
    if isinstance(sw, EmptySet):
        return [store]
    if isinstance(sw, SetCons):
        gx = _resolved_ground(store, x)
        gs = _resolved_ground(store, sw)
        if gx is not None and gs is not None:
            kx, ks = ground_key(gx), ground_key(gs)
            if kx is not None and ks is not None:
                return [] if kx in ks[1] else [store]
        e, rest = _spine(store, sw)
        store.push_all([C("neq", x, e), C("nin", x, rest)])
        return [store]
    if isinstance(sw, Var):
        return _park(store, c)
    if isinstance(sw, Interval):
        lo = store.walk(sw.lo)
        hi = store.walk(sw.hi)
        xw = store.walk(x)
        if not _intish(store.resolve(xw)):
            return [store]  # non-integers are outside any interval
        if isinstance(lo, IntLit) and isinstance(hi, IntLit):
            gv = eval_ground(xw, store.walk)
            if gv is not None:
                return [] if lo.value <= gv <= hi.value else [store]
            if not store.mark_int_term(xw):
                return []
            lo1 = IntLit(lo.value - 1)
            hi1 = IntLit(hi.value + 1)
            return _branch(store, [[C("=<", xw, lo1)], [C(">=", xw, hi1)]])
        return _park(store, c)
    if isinstance(sw, CartProd):
        xw = store.walk(x)
        if isinstance(xw, Tup) and len(xw.items) == 2:
            return _branch(store, [[C("nin", xw.items[0], sw.left)],
                                   [C("nin", xw.items[1], sw.right)]])
        if isinstance(xw, Var):
            return _park(store, c)
        return [store]
    return [store]


def _r_set(store, c):
    w = store.walk(c.args[0])
    if isinstance(w, Var):
        return [store] if store.mark_sort(w.name, "set") else []
    return [store] if isinstance(w, SET_SHAPES) else []


# ---------------------------------------------------------------------------
# union, intersection, difference and friends

def _r_un(store, c):
    if not _ensure_sets(store, c.args):
        return []
    for i in range(3):
        r = _expand_arg(store, c, i)
        if r is not None:
            return r
    a, b, t = (store.walk(x) for x in c.args)
    if _same_var(store, a, b):
        store.push(eq(a, t))
        return [store]
    if _same_var(store, a, t):
        store.push(C("subset", b, a))
        return [store]
    if _same_var(store, b, t):
        store.push(C("subset", a, b))
        return [store]
    if isinstance(a, EmptySet):
        store.push(eq(b, t))
        return [store]
    if isinstance(b, EmptySet):
        store.push(eq(a, t))
        return [store]
    if isinstance(t, EmptySet):
        store.push_all([eq(a, EMPTY), eq(b, EMPTY)])
        return [store]
    if isinstance(t, SetCons):
        e, rest = _spine(store, t)
        n1, n2 = store.fresh(), store.fresh()
        return _branch(store, [
            [eq(a, SetCons(e, n1)), C("un", n1, b, rest)],
            [eq(b, SetCons(e, n2)), C("un", a, n2, rest)],
            [eq(a, SetCons(e, n1)), eq(b, SetCons(e, n2)),
             C("un", n1, n2, rest)],
        ])
    if isinstance(a, SetCons):
        e, rest = _spine(store, a)
        n = store.fresh()
        store.push_all([eq(t, SetCons(e, n)), C("un", rest, b, n)])
        return [store]
    if isinstance(b, SetCons):
        e, rest = _spine(store, b)
        n = store.fresh()
        store.push_all([eq(t, SetCons(e, n)), C("un", a, rest, n)])
        return [store]
    return _park(store, c)


def _r_nun(store, c):
    a, b, t = c.args
    n = store.fresh()
    return _branch(store, [
        [C("in", n, a), C("nin", n, t)],
        [C("in", n, b), C("nin", n, t)],
        [C("in", n, t), C("nin", n, a), C("nin", n, b)],
    ])


def _r_inters(store, c):
    if not _ensure_sets(store, c.args):
        return []
    for i in range(3):
        r = _expand_arg(store, c, i)
        if r is not None:
            return r
    a, b, t = (store.walk(x) for x in c.args)
    if _same_var(store, a, b):
        store.push(eq(a, t))
        return [store]
    if _same_var(store, a, t):
        store.push(C("subset", a, b))
        return [store]
    if _same_var(store, b, t):
        store.push(C("subset", b, a))
        return [store]
    if isinstance(a, EmptySet) or isinstance(b, EmptySet):
        store.push(eq(t, EMPTY))
        return [store]
    if isinstance(a, SetCons):
        e, rest = _spine(store, a)
        n = store.fresh()
        return _branch(store, [
            [C("in", e, b), eq(t, SetCons(e, n)), C("inters", rest, b, n)],
            [C("nin", e, b), C("inters", rest, b, t)],
        ])
    if isinstance(b, SetCons):
        e, rest = _spine(store, b)
        n = store.fresh()
        return _branch(store, [
            [C("in", e, a), eq(t, SetCons(e, n)), C("inters", a, rest, n)],
            [C("nin", e, a), C("inters", a, rest, t)],
        ])
    if isinstance(t, SetCons):
        e, rest = _spine(store, t)
        n1, n2 = store.fresh(), store.fresh()
        store.push_all([eq(a, SetCons(e, n1)), eq(b, SetCons(e, n2)),
                        C("inters", n1, n2, rest)])
        return [store]
    return _park(store, c)


def _r_ninters(store, c):
    a, b, t = c.args
    n = store.fresh()
    return _branch(store, [
        [C("in", n, a), C("in", n, b), C("nin", n, t)],
        [C("in", n, t), C("nin", n, a)],
        [C("in", n, t), C("nin", n, b)],
    ])


def _r_diff(store, c):
    if not _ensure_sets(store, c.args):
        return []
    for i in range(3):
        r = _expand_arg(store, c, i)
        if r is not None:
            return r
    a, b, t = (store.walk(x) for x in c.args)
    if _same_var(store, a, b):
        store.push(eq(t, EMPTY))
        return [store]
    if _same_var(store, a, t):
        store.push(C("disj", a, b))
        return [store]
    if _same_var(store, b, t):
        store.push_all([eq(a, EMPTY), eq(b, EMPTY)])
        return [store]
    if isinstance(a, EmptySet):
        store.push(eq(t, EMPTY))
        return [store]
    if isinstance(b, EmptySet):
        store.push(eq(a, t))
        return [store]
    if isinstance(a, SetCons):
        e, rest = _spine(store, a)
        n = store.fresh()
        return _branch(store, [
            [C("in", e, b), C("diff", rest, b, t)],
            [C("nin", e, b), eq(t, SetCons(e, n)), C("diff", rest, b, n)],
        ])
    if isinstance(b, SetCons):
        e, rest = _spine(store, b)
        n = store.fresh()
        return _branch(store, [
            [C("nin", e, a), C("diff", a, rest, t)],
            [eq(a, SetCons(e, n)), C("nin", e, n), C("diff", n, rest, t)],
        ])
    if isinstance(t, SetCons):
        e, rest = _spine(store, t)
        n = store.fresh()
        store.push_all([eq(a, SetCons(e, n)), C("nin", e, b),
                        C("diff", n, b, rest)])
        return [store]
    return _park(store, c)


def _r_ndiff(store, c):
    a, b, t = c.args
    n = store.fresh()
    return _branch(store, [
        [C("in", n, a), C("nin", n, b), C("nin", n, t)],
        [C("in", n, t), C("nin", n, a)],
        [C("in", n, t), C("in", n, b)],
    ])


def _r_subset(store, c):
    if not _ensure_sets(store, c.args):
        return []
    for i in range(2):
        r = _expand_arg(store, c, i)
        if r is not None:
            return r
    a, b = (store.walk(x) for x in c.args)
    if isinstance(a, EmptySet):
        return [store]
    if _same_var(store, a, b):
        return [store]
    if isinstance(a, SetCons):
        e, rest = _spine(store, a)
        store.push_all([C("in", e, b), C("subset", rest, b)])
        return [store]
    # a is a variable
    if isinstance(b, EmptySet):
        store.push(eq(a, EMPTY))
        return [store]
    if isinstance(b, SetCons):
        e, rest = _spine(store, b)
        n = store.fresh()
        return _branch(store, [
            [C("subset", a, rest)],
            [eq(a, SetCons(e, n)), C("nin", e, n), C("subset", n, rest)],
        ])
    return _park(store, c)


def _r_nsubset(store, c):
    a, b = c.args
    n = store.fresh()
    store.push_all([C("in", n, a), C("nin", n, b)])
    return [store]


def _r_ssubset(store, c):
    a, b = c.args
    n = store.fresh()
    store.push_all([C("subset", a, b), C("in", n, b), C("nin", n, a)])
    return [store]


def _r_disj(store, c):
    if not _ensure_sets(store, c.args):
        return []
    for i in range(2):
        r = _expand_arg(store, c, i)
        if r is not None:
            return r
    a, b = (store.walk(x) for x in c.args)
    if isinstance(a, EmptySet) or isinstance(b, EmptySet):
        return [store]
    if _same_var(store, a, b):
        store.push_all([eq(a, EMPTY), eq(b, EMPTY)])
        return [store]
    if isinstance(a, SetCons):
        e, rest = _spine(store, a)
        store.push_all([C("nin", e, b), C("disj", rest, b)])
        return [store]
    if isinstance(b, SetCons):
        e, rest = _spine(store, b)
        store.push_all([C("nin", e, a), C("disj", a, rest)])
        return [store]
    return _park(store, c)


def _r_ndisj(store, c):
    a, b = c.args
    n = store.fresh()
    store.push_all([C("in", n, a), C("in", n, b)])
    return [store]


def _r_size(store, c):
    a, n = c.args
    aw = store.walk(a)
    if isinstance(aw, Var) and not store.mark_sort(aw.name, "set"):
        return []
    if not isinstance(aw, Var) and not isinstance(aw, SET_SHAPES):
        return []
    nw = store.walk(n)
    if isinstance(nw, IntExpr):
        return []
    if isinstance(nw, IntLit):
        if nw.value < 0:
            return []
        if nw.value == 0:
            store.push(eq(aw, EMPTY))
            return [store]
        if isinstance(aw, Interval):
            r = _expand_arg(store, Constraint("size", (aw, nw)), 0)
            if r is not None:
                return r
        t, rest = store.fresh(), store.fresh()
        store.push_all([eq(aw, SetCons(t, rest)), C("nin", t, rest),
                        C("size", rest, IntLit(nw.value - 1))])
        return [store]
    if isinstance(nw, Var):
        if not store.mark_sort(nw.name, "int"):
            return []
        store.ints.post_cmp(">=", nw, IntLit(0), walk=store.walk,
                            surface=False)
        if not store.ints.sat():
            return []
        if isinstance(aw, EmptySet):
            store.push(eq(nw, IntLit(0)))
            return [store]
        if isinstance(aw, Interval):
            r = _expand_arg(store, Constraint("size", (aw, nw)), 0)
            if r is not None:
                return r
        if isinstance(aw, SetCons):
            t, rest, n1 = store.fresh(), store.fresh(), store.fresh()
            store.push_all([
                eq(aw, SetCons(t, rest)), C("nin", t, rest),
                C("size", rest, n1),
                C("is", nw, IntExpr("+", (n1, IntLit(1)))),
            ])
            return [store]
        return _park(store, c)  # both open: enumerate in the final stage
    return []


# ---------------------------------------------------------------------------
# relational operators

def _r_rel(store, c):
    r = store.walk(c.args[0])
    if isinstance(r, Var):
        if not store.mark_sort(r.name, "set"):
            return []
        return _park(store, c)
    if isinstance(r, EmptySet):
        return [store]
    if isinstance(r, CartProd):
        return [store]
    if isinstance(r, Interval):
        return []
    if isinstance(r, SetCons):
        e, rest = _spine(store, r)
        if _pairify(store, e) is None:
            return []
        store.push(C("rel", rest))
        return [store]
    return []


def _r_nrel(store, c):
    n = store.fresh()
    store.push_all([C("in", n, c.args[0]), C("npair", n)])
    return [store]


def _r_npair(store, c):
    w = store.walk(c.args[0])
    if isinstance(w, Var):
        return _park(store, c)
    if isinstance(w, Tup) and len(w.items) == 2:
        return []
    return [store]


def _r_dom(store, c):
    if not _ensure_sets(store, c.args):
        return []
    r, d = (store.walk(x) for x in c.args)
    if _same_var(store, r, d):
        store.push(eq(r, EMPTY))
        return [store]
    if isinstance(r, EmptySet):
        store.push(eq(d, EMPTY))
        return [store]
    if isinstance(r, SetCons):
        e, rest = _spine(store, r)
        p = _pairify(store, e)
        if p is None:
            return []
        n = store.fresh()
        store.push_all([eq(d, SetCons(p[0], n)), C("dom", rest, n)])
        return [store]
    if isinstance(r, CartProd):
        # dom(cp(A,B)) is A unless B is empty
        return _branch(store, [
            [C("neq", r.right, EMPTY), eq(d, r.left)],
            [eq(r.right, EMPTY), eq(d, EMPTY)],
        ])
    # r is a variable
    if isinstance(d, EmptySet):
        store.push(eq(r, EMPTY))
        return [store]
    if isinstance(d, SetCons):
        # peel one element of the domain per step: some pair [x,_] is in
        # r, and the rest of r (everything not mapping x) has the rest of
        # the domain.  Splitting off all of x's pairs at once keeps the
        # recursion on a strictly smaller domain spine.
        x, rest = _spine(store, d)
        y, r1, d1 = store.fresh(), store.fresh(), store.fresh()
        store.push_all([
            C("in", pair(x, y), r),
            C("dares", mkset([x]), r, r1),
            C("diff", rest, mkset([x]), d1),
            C("dom", r1, d1),
        ])
        return [store]
    return _park(store, c)


def _r_ndom(store, c):
    r, d = c.args
    x, y, n = store.fresh(), store.fresh(), store.fresh()
    return _branch(store, [
        [C("in", pair(x, y), r), C("nin", x, d)],
        [C("in", x, d), C("comp", mkset([pair(x, x)]), r, EMPTY)],
        [C("in", n, r), C("npair", n)],
    ])


def _r_ran(store, c):
    if not _ensure_sets(store, c.args):
        return []
    r, a = (store.walk(x) for x in c.args)
    if _same_var(store, r, a):
        store.push(eq(r, EMPTY))
        return [store]
    if isinstance(r, EmptySet):
        store.push(eq(a, EMPTY))
        return [store]
    if isinstance(r, SetCons):
        e, rest = _spine(store, r)
        p = _pairify(store, e)
        if p is None:
            return []
        n = store.fresh()
        store.push_all([eq(a, SetCons(p[1], n)), C("ran", rest, n)])
        return [store]
    if isinstance(r, CartProd):
        return _branch(store, [
            [C("neq", r.left, EMPTY), eq(a, r.right)],
            [eq(r.left, EMPTY), eq(a, EMPTY)],
        ])
    if isinstance(a, EmptySet):
        store.push(eq(r, EMPTY))
        return [store]
    if isinstance(a, SetCons):
        # mirror of the dom case, splitting by second components
        y, rest = _spine(store, a)
        x, r1, a1 = store.fresh(), store.fresh(), store.fresh()
        store.push_all([
            C("in", pair(x, y), r),
            C("rares", r, mkset([y]), r1),
            C("diff", rest, mkset([y]), a1),
            C("ran", r1, a1),
        ])
        return [store]
    return _park(store, c)


def _r_nran(store, c):
    r, a = c.args
    x, y, n = store.fresh(), store.fresh(), store.fresh()
    return _branch(store, [
        [C("in", pair(x, y), r), C("nin", y, a)],
        [C("in", y, a), C("comp", r, mkset([pair(y, y)]), EMPTY)],
        [C("in", n, r), C("npair", n)],
    ])


def _r_pfun(store, c):
    f = store.walk(c.args[0])
    if isinstance(f, Var):
        if not store.mark_sort(f.name, "set"):
            return []
        return _park(store, c)
    if isinstance(f, EmptySet):
        return [store]
    if isinstance(f, SetCons):
        # functionality is pairwise: equal keys force equal values among the
        # listed maplets, and no listed key may reappear in the tail
        elems, tail = store.set_view(f)
        pairs = []
        for e in elems:
            p = _pairify(store, e)
            if p is None:
                return []
            pairs.append(p)
        for i in range(len(pairs)):
            for j in range(i + 1, len(pairs)):
                store.push(Constraint(
                    "pfkey", (pairs[i][0], pairs[i][1],
                              pairs[j][0], pairs[j][1])))
        if not isinstance(tail, EmptySet):
            for x, _ in pairs:
                store.push(C("comp", mkset([pair(x, x)]), tail, EMPTY))
            store.push(C("pfun", tail))
        return [store]
    if isinstance(f, Interval):
        ex = expand_interval(store, f)
        if ex is None:
            return _park(store, c)
        store.push(C("pfun", ex))
        return [store]
    if isinstance(f, CartProd):
        ex = expand_cartprod(store, f)
        if ex is None:
            return _park(store, c)
        store.push(C("pfun", ex))
        return [store]
    return []


def _r_pfkey(store, c):
    """Two maplets of one function: distinct keys, or equal values."""
    x1, y1, x2, y2 = c.args
    return _branch(store, [
        [C("neq", x1, x2)],
        [eq(x1, x2), eq(y1, y2)],
    ])


def _r_npfun(store, c):
    f = c.args[0]
    x, y1, y2 = store.fresh(), store.fresh(), store.fresh()
    return _branch(store, [
        [C("nrel", f)],
        [C("in", pair(x, y1), f), C("in", pair(x, y2), f), C("neq", y1, y2)],
    ])


def _r_apply(store, c):
    f, x, y = c.args
    store.push_all([C("pfun", f), C("in", pair(x, y), f)])
    return [store]


def _r_napply(store, c):
    f, x, y = c.args
    return _branch(store, [
        [C("npfun", f)],
        [C("nin", pair(x, y), f)],
    ])


def _r_applyto(store, c):
    f, x, y = c.args
    g = store.fresh()
    store.push_all([
        eq(f, SetCons(pair(x, y), g)), C("nin", pair(x, y), g),
        C("comp", mkset([pair(x, x)]), g, EMPTY),
    ])
    return [store]


def _diag_elem(store, r):
    """The y of a singleton {[y,y]}, or None."""
    elems, tail = store.set_view(r)
    if len(elems) == 1 and isinstance(tail, EmptySet):
        e = store.walk(elems[0])
        if isinstance(e, Tup) and len(e.items) == 2:
            u = store.resolve(e.items[0])
            v = store.resolve(e.items[1])
            if u == v:
                return store.walk(e.items[0])
    return None


def _compose_ground(store, r, s):
    """Forward composition of two ground relations, or None."""
    kr = ground_key(store.resolve(r))
    ks = ground_key(store.resolve(s))
    if kr is None or ks is None:
        return None
    pairs_r, pairs_s = [], []
    for k in kr[1]:
        if k[0] != "p" or len(k[1]) != 2:
            return ()
        pairs_r.append(k[1])
    for k in ks[1]:
        if k[0] != "p" or len(k[1]) != 2:
            return ()
        pairs_s.append(k[1])
    out = {(x, z) for x, w in pairs_r for w2, z in pairs_s if w == w2}
    return out


def _key_to_term(k):
    if k[0] == "a":
        return Atom(k[1])
    if k[0] == "c":
        return TypedConst(k[1], k[2])
    if k[0] == "i":
        return IntLit(k[1])
    if k[0] == "e":
        return IntExpr(k[1], tuple(_key_to_term(x) for x in k[2]))
    if k[0] == "p":
        return Tup(tuple(_key_to_term(x) for x in k[1]))
    if k[0] == "s":
        return mkset([_key_to_term(x) for x in sorted(k[1], key=repr)])
    raise ValueError(k)


def _r_comp(store, c, sym="comp"):
    if not _ensure_sets(store, c.args):
        return []
    r, s, t = (store.walk(x) for x in c.args)
    if isinstance(r, EmptySet) or isinstance(s, EmptySet):
        store.push(eq(t, EMPTY))
        return [store]
    rr = store.resolve(r)
    rs = store.resolve(s)
    if is_ground(rr) and is_ground(rs):
        out = _compose_ground(store, rr, rs)
        if out == ():
            return []  # a non-pair member: not relations
        if out is not None:
            store.push(eq(t, mkset([Tup((_key_to_term(a), _key_to_term(b)))
                                    for a, b in sorted(out, key=repr)])))
            return [store]
    if isinstance(t, EmptySet):
        yd = _diag_elem(store, r) if isinstance(r, SetCons) else None
        if yd is not None:
            if isinstance(s, SetCons):
                q, rest = _spine(store, s)
                p = _pairify(store, q)
                if p is None:
                    return []
                store.push_all([C("neq", yd, p[0]),
                                C(sym, r, rest, EMPTY)])
                return [store]
            if isinstance(s, CartProd):
                return _branch(store, [
                    [C("nin", yd, s.left)],
                    [eq(s.right, EMPTY)],
                ])
            return _park(store, Constraint(sym, (r, s, EMPTY)))
        ud = _diag_elem(store, s) if isinstance(s, SetCons) else None
        if ud is not None:
            if isinstance(r, SetCons):
                q, rest = _spine(store, r)
                p = _pairify(store, q)
                if p is None:
                    return []
                store.push_all([C("neq", p[1], ud),
                                C(sym, rest, s, EMPTY)])
                return [store]
            if isinstance(r, CartProd):
                return _branch(store, [
                    [C("nin", ud, r.right)],
                    [eq(r.left, EMPTY)],
                ])
            return _park(store, Constraint(sym, (r, s, EMPTY)))
        if isinstance(r, SetCons):
            q, rest = _spine(store, r)
            p = _pairify(store, q)
            if p is None:
                return []
            store.push_all([C(sym, mkset([pair(p[1], p[1])]), s, EMPTY),
                            C(sym, rest, s, EMPTY)])
            return [store]
        if isinstance(s, SetCons):
            q, rest = _spine(store, s)
            p = _pairify(store, q)
            if p is None:
                return []
            store.push_all([C(sym, r, mkset([pair(p[0], p[0])]), EMPTY),
                            C(sym, r, rest, EMPTY)])
            return [store]
        for side in (r, s):
            if isinstance(side, (Interval, CartProd)):
                return _park(store, Constraint(sym, (r, s, EMPTY)))
        return _park(store, Constraint(sym, (r, s, EMPTY)))
    if isinstance(t, SetCons) and sym == "comp":
        # pull one witness, then wait for the rest to become ground
        e, _rest = _spine(store, t)
        p = _pairify(store, e)
        if p is None:
            return []
        w, r1, s1 = store.fresh(), store.fresh(), store.fresh()
        store.push_all([
            eq(r, SetCons(pair(p[0], w), r1)),
            eq(s, SetCons(pair(w, p[1]), s1)),
            Constraint("comp$w", (r, s, t)),
        ])
        return [store]
    return _park(store, Constraint(sym, (r, s, t)))


def _r_comp_w(store, c):
    """A composition that already gave up a witness; only ground evaluation
    can discharge it now."""
    r, s, t = (store.walk(x) for x in c.args)
    rr, rs = store.resolve(r), store.resolve(s)
    if is_ground(rr) and is_ground(rs):
        store.push(C("comp", r, s, t))
        return [store]
    return _park(store, c)


def _r_ncomp(store, c):
    r, s, t = c.args
    x, w, z, n = (store.fresh(), store.fresh(), store.fresh(), store.fresh())
    r1, s1 = store.fresh(), store.fresh()
    return _branch(store, [
        [C("in", pair(x, z), t), C("dres", mkset([x]), r, r1),
         C("rres", s, mkset([z]), s1), C("comp", r1, s1, EMPTY)],
        [C("in", pair(x, w), r), C("in", pair(w, z), s),
         C("nin", pair(x, z), t)],
        [C("in", n, r), C("npair", n)],
        [C("in", n, s), C("npair", n)],
        [C("in", n, t), C("npair", n)],
    ])


def _r_inv(store, c):
    if not _ensure_sets(store, c.args):
        return []
    r, s = (store.walk(x) for x in c.args)
    if _same_var(store, r, s):
        return _park(store, c)  # symmetric relation; solved form
    if isinstance(r, EmptySet):
        store.push(eq(s, EMPTY))
        return [store]
    if isinstance(s, EmptySet):
        store.push(eq(r, EMPTY))
        return [store]
    if isinstance(r, SetCons):
        e, rest = _spine(store, r)
        p = _pairify(store, e)
        if p is None:
            return []
        n = store.fresh()
        store.push_all([eq(s, SetCons(pair(p[1], p[0]), n)),
                        C("inv", rest, n)])
        return [store]
    if isinstance(s, SetCons):
        e, rest = _spine(store, s)
        p = _pairify(store, e)
        if p is None:
            return []
        y, x = p
        r1, n = store.fresh(), store.fresh()
        store.push_all([
            eq(r, SetCons(pair(x, y), r1)), C("inv", r1, n),
            C("un", n, mkset([pair(y, x)]), SetCons(pair(y, x), rest)),
        ])
        return [store]
    if isinstance(r, CartProd):
        store.push(eq(s, CartProd(r.right, r.left)))
        return [store]
    if isinstance(s, CartProd):
        store.push(eq(r, CartProd(s.right, s.left)))
        return [store]
    return _park(store, c)


def _r_ninv(store, c):
    r, s = c.args
    x, y, n = store.fresh(), store.fresh(), store.fresh()
    return _branch(store, [
        [C("in", pair(x, y), r), C("nin", pair(y, x), s)],
        [C("in", pair(y, x), s), C("nin", pair(x, y), r)],
        [C("in", n, r), C("npair", n)],
        [C("in", n, s), C("npair", n)],
    ])


def _restriction_rule(store, c, *, on_dom, keep_in):
    """Shared engine for dres/dares (domain side) and rres/rares (range).

    on_dom selects which pair component is tested; keep_in tells whether a
    member of the restriction set is kept (dres/rres) or dropped."""
    if not _ensure_sets(store, c.args):
        return []
    if on_dom:
        a, r, s = (store.walk(x) for x in c.args)
    else:
        r, a, s = (store.walk(x) for x in c.args)
    sym = c.sym
    inop, outop = ("in", "nin") if keep_in else ("nin", "in")

    def rebuild(aa, rr, ss):
        return Constraint(sym, (aa, rr, ss) if on_dom else (rr, aa, ss))

    if isinstance(r, EmptySet):
        store.push(eq(s, EMPTY))
        return [store]
    if isinstance(a, EmptySet):
        if keep_in:
            store.push(eq(s, EMPTY))
        else:
            store.push(eq(r, s))
        return [store]
    if isinstance(r, SetCons):
        e, rest = _spine(store, r)
        p = _pairify(store, e)
        if p is None:
            return []
        comp_elem = p[0] if on_dom else p[1]
        n = store.fresh()
        return _branch(store, [
            [C(inop, comp_elem, a), eq(s, SetCons(pair(*p), n)),
             rebuild(a, rest, n)],
            [C(outop, comp_elem, a), rebuild(a, rest, s)],
        ])
    if isinstance(s, SetCons):
        # a known result pair comes from r; the rest of the result is the
        # restriction of r without that pair, so both spines shrink and the
        # recursion bottoms out.
        e, rest = _spine(store, s)
        p = _pairify(store, e)
        if p is None:
            return []
        comp_elem = p[0] if on_dom else p[1]
        r1, s1 = store.fresh(), store.fresh()
        store.push_all([
            C(inop, comp_elem, a),
            eq(r, SetCons(pair(*p), r1)),
            C("nin", pair(*p), r1),
            C("diff", rest, mkset([pair(*p)]), s1),
            rebuild(a, r1, s1),
        ])
        return [store]
    return _park(store, c)


def _r_dres(store, c):
    return _restriction_rule(store, c, on_dom=True, keep_in=True)


def _r_dares(store, c):
    return _restriction_rule(store, c, on_dom=True, keep_in=False)


def _r_rres(store, c):
    return _restriction_rule(store, c, on_dom=False, keep_in=True)


def _r_rares(store, c):
    return _restriction_rule(store, c, on_dom=False, keep_in=False)


def _nrestriction(store, c, *, on_dom, keep_in):
    if on_dom:
        a, r, s = c.args
    else:
        r, a, s = c.args
    x, y, n = store.fresh(), store.fresh(), store.fresh()
    tested = x if on_dom else y
    inop, outop = ("in", "nin") if keep_in else ("nin", "in")
    return _branch(store, [
        [C("in", pair(x, y), r), C(inop, tested, a),
         C("nin", pair(x, y), s)],
        [C("in", pair(x, y), s), C(outop, tested, a)],
        [C("in", pair(x, y), s), C("nin", pair(x, y), r)],
        [C("in", n, r), C("npair", n)],
        [C("in", n, s), C("npair", n)],
    ])


def _r_ndres(store, c):
    return _nrestriction(store, c, on_dom=True, keep_in=True)


def _r_ndares(store, c):
    return _nrestriction(store, c, on_dom=True, keep_in=False)


def _r_nrres(store, c):
    return _nrestriction(store, c, on_dom=False, keep_in=True)


def _r_nrares(store, c):
    return _nrestriction(store, c, on_dom=False, keep_in=False)


def _r_oplus(store, c):
    r, s, t = c.args
    d, n = store.fresh(), store.fresh()
    store.push_all([C("dom", s, d), C("dares", d, r, n), C("un", s, n, t)])
    return [store]


def _r_noplus(store, c):
    r, s, t = c.args
    d, n, m = store.fresh(), store.fresh(), store.fresh()
    return _branch(store, [
        [C("dom", s, d), C("dares", d, r, n), C("nun", s, n, t)],
        [C("in", m, r), C("npair", m)],
        [C("in", m, s), C("npair", m)],
    ])


def _r_ring(store, c):
    r, a, b = c.args
    n = store.fresh()
    store.push_all([C("dres", a, r, n), C("ran", n, b)])
    return [store]


def _r_nring(store, c):
    r, a, b = c.args
    n, m = store.fresh(), store.fresh()
    return _branch(store, [
        [C("dres", a, r, n), C("nran", n, b)],
        [C("in", m, r), C("npair", m)],
    ])


# ---------------------------------------------------------------------------
# arithmetic

def _r_is(store, c):
    x, e = c.args
    re = store.resolve(e)
    rx = store.resolve(x)
    if not (_intish(re) and _intish(rx)):
        return []
    if not (store.mark_int_term(x) and store.mark_int_term(e)):
        return []
    v = eval_ground(re)
    if v is not None:
        xw = store.walk(x)
        if isinstance(xw, Var):
            store.push(eq(xw, IntLit(v)))
            return [store]
        if isinstance(xw, IntLit):
            return [store] if xw.value == v else []
        return []  # an inert expression is not a number
    if store.ints.post_is(x, e, walk=store.walk):
        return [store] if store.ints.sat() else []
    return _park(store, c)


def _r_cmp(store, c):
    a, b = c.args
    ra, rb = store.resolve(a), store.resolve(b)
    if not (_intish(ra) and _intish(rb)):
        return []
    if not (store.mark_int_term(a) and store.mark_int_term(b)):
        return []
    va, vb = eval_ground(ra), eval_ground(rb)
    if va is not None and vb is not None:
        op = c.sym
        ok = ((op in ("=<", "<=") and va <= vb) or (op == "<" and va < vb)
              or (op == ">" and va > vb) or (op == ">=" and va >= vb))
        return [store] if ok else []
    if store.ints.post_cmp(c.sym if c.sym != "<=" else "=<", a, b,
                           walk=store.walk):
        return [store] if store.ints.sat() else []
    return _park(store, c)


# ---------------------------------------------------------------------------
# bounded quantification and declarations

def _dnf(g):
    if isinstance(g, Conj):
        acc = [[]]
        for p in g.parts:
            acc = [xs + ys for xs in acc for ys in _dnf(p)]
        return acc
    if isinstance(g, Disj):
        out = []
        for p in g.parts:
            out.extend(_dnf(p))
        return out
    if isinstance(g, Constraint):
        return [[g]]
    raise TypeError(f"foreach body holds a non-constraint: {g!r}")


def _subst_goal(g, name, value):
    from .goals import map_goal_terms
    from .terms import Subst
    sub = Subst({name: value})
    return map_goal_terms(g, sub.resolve)


def _r_foreach(store, c):
    v, s, body = c.args
    sw = store.walk(s)
    if isinstance(sw, EmptySet):
        return [store]
    if isinstance(sw, Interval):
        ex = expand_interval(store, sw)
        if ex is None:
            return _park(store, c)
        store.push(Constraint("foreach", (v, ex, body)))
        return [store]
    if isinstance(sw, SetCons):
        e, rest = _spine(store, sw)
        inst = _subst_goal(body, v.name, e)
        alts = [cs + [Constraint("foreach", (v, rest, body))]
                for cs in _dnf(inst)]
        return _branch(store, alts)
    return _park(store, c)


def _r_dec(store, c):
    return [store]


def _r_true(store, c):
    return [store]


# ---------------------------------------------------------------------------

from . import seqlib

RULES = {
    "=": _r_eq,
    "neq": _r_neq,
    "in": _r_in,
    "nin": _r_nin,
    "set": _r_set,
    "un": _r_un,
    "nun": _r_nun,
    "inters": _r_inters,
    "ninters": _r_ninters,
    "diff": _r_diff,
    "ndiff": _r_ndiff,
    "subset": _r_subset,
    "nsubset": _r_nsubset,
    "ssubset": _r_ssubset,
    "disj": _r_disj,
    "ndisj": _r_ndisj,
    "size": _r_size,
    "rel": _r_rel,
    "nrel": _r_nrel,
    "npair": _r_npair,
    "pfun": _r_pfun,
    "pfkey": _r_pfkey,
    "npfun": _r_npfun,
    "apply": _r_apply,
    "napply": _r_napply,
    "applyTo": _r_applyto,
    "dom": _r_dom,
    "ndom": _r_ndom,
    "ran": _r_ran,
    "nran": _r_nran,
    "comp": _r_comp,
    "comp$w": _r_comp_w,
    "ncomp": _r_ncomp,
    "inv": _r_inv,
    "ninv": _r_ninv,
    "dres": _r_dres,
    "ndres": _r_ndres,
    "dares": _r_dares,
    "ndares": _r_ndares,
    "rres": _r_rres,
    "nrres": _r_nrres,
    "rares": _r_rares,
    "nrares": _r_nrares,
    "oplus": _r_oplus,
    "noplus": _r_noplus,
    "ring": _r_ring,
    "nring": _r_nring,
    "is": _r_is,
    "=<": _r_cmp,
    "<=": _r_cmp,
    "<": _r_cmp,
    ">": _r_cmp,
    ">=": _r_cmp,
    "foreach": _r_foreach,
    "dec": _r_dec,
    "true": _r_true,
    "slist": seqlib.rewrite,
    "head": seqlib.rewrite,
    "tail": seqlib.rewrite,
    "last": seqlib.rewrite,
    "front": seqlib.rewrite,
    "add": seqlib.rewrite,
    "concat": seqlib.rewrite,
    "filter": seqlib.rewrite,
    "extract": seqlib.rewrite,
}


def rewrite(store, c):
    fn = RULES.get(c.sym)
    if fn is None:
        raise ValueError(f"no rewrite rule for constraint {c.sym!r}")
    return fn(store, c)


# ---------------------------------------------------------------------------
# final-stage rules: only run once no other rewrite applies anywhere

def final_rewrite(store, c):
    """A last chance for parked constraints once the store is stable.
    Returns child stores, or None to keep the constraint parked."""
    if c.sym == "neq":
        a = store.walk(c.args[0])
        b = store.walk(c.args[1])

        def setish(t):
            if isinstance(t, SET_SHAPES):
                return True
            return (isinstance(t, Var) and store.sort_of(t.name) == "set")

        if setish(a) and setish(b):
            n = store.fresh()
            return _branch(store, [
                [C("in", n, a), C("nin", n, b)],
                [C("nin", n, a), C("in", n, b)],
            ])
        return None
    if c.sym == "size":
        a = store.walk(c.args[0])
        n = store.walk(c.args[1])
        if isinstance(a, Var) and isinstance(n, Var):
            t, rest, n1 = store.fresh(), store.fresh(), store.fresh()
            return _branch(store, [
                [eq(a, EMPTY), eq(n, IntLit(0))],
                [eq(a, SetCons(t, rest)), C("nin", t, rest),
                 C("size", rest, n1),
                 C("is", n, IntExpr("+", (n1, IntLit(1))))],
            ])
        return None
    if c.sym in ("comp", "comp$w"):
        r, s, t = (store.walk(x) for x in c.args)
        if is_ground(store.resolve(r)) and is_ground(store.resolve(s)):
            store.push(C("comp", r, s, t))
            return [store]
        return None
    return None
