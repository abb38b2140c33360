"""Equality solving, including set unification.

Sets unify modulo duplicates and element order, which needs branching: one
equation between two extensional sets rewrites into up to four alternatives
(the classical rule), with a dedicated variant when both sides share their
tail variable.  Sub-equations are pushed back on the store queue as '='
constraints rather than solved recursively, so branching stays flat.
"""
from .goals import Constraint
from .terms import (EMPTY, Atom, CartProd, EmptySet, IntExpr, IntLit,
                    Interval, SetCons, Tup, TypedConst, Var, is_ground,
                    mkset, pair, term_vars)

EXPAND_LIMIT = 2000


def eq(a, b):
    return Constraint("=", (a, b))


def expand_interval(store, t):
    """Ground int(a,b) as an explicit set, or None when that's not on."""
    lo = store.walk(t.lo)
    hi = store.walk(t.hi)
    if isinstance(lo, IntLit) and isinstance(hi, IntLit):
        if hi.value - lo.value + 1 <= EXPAND_LIMIT:
            return mkset([IntLit(i) for i in range(lo.value, hi.value + 1)])
    return None


def expand_cartprod(store, t):
    """Ground cp(A,B) as an explicit set of pairs, or None."""
    ae, at = store.set_view(t.left)
    be, bt = store.set_view(t.right)
    if isinstance(at, Interval):
        left = expand_interval(store, at)
        if left is None:
            return None
        more, at = store.set_view(left)
        ae = ae + more
    if isinstance(bt, Interval):
        right = expand_interval(store, bt)
        if right is None:
            return None
        more, bt = store.set_view(right)
        be = be + more
    if not isinstance(at, EmptySet) or not isinstance(bt, EmptySet):
        return None
    ae = [store.resolve(x) for x in ae]
    be = [store.resolve(x) for x in be]
    if any(not is_ground(x) for x in ae + be):
        return None
    if len(ae) * len(be) > EXPAND_LIMIT:
        return None
    return mkset([pair(x, y) for x in ae for y in be])


def unify_step(store, a, b):
    """Rewrite one equation; returns child stores ([] means failure)."""
    a = store.walk(a)
    b = store.walk(b)
    if isinstance(a, Var) and isinstance(b, Var) and a.name == b.name:
        return [store]
    if isinstance(a, Var):
        return _bind_var(store, a, b)
    if isinstance(b, Var):
        return _bind_var(store, b, a)

    if isinstance(a, IntLit):
        return [store] if isinstance(b, IntLit) and a.value == b.value else []
    if isinstance(a, Atom):
        return [store] if isinstance(b, Atom) and a.name == b.name else []
    if isinstance(a, TypedConst):
        ok = (isinstance(b, TypedConst) and a.base == b.base
              and a.payload == b.payload)
        return [store] if ok else []
    if isinstance(a, IntExpr):
        if (isinstance(b, IntExpr) and a.op == b.op
                and len(a.args) == len(b.args)):
            store.push_all([eq(x, y) for x, y in zip(a.args, b.args)])
            return [store]
        return []
    if isinstance(b, IntExpr):
        return []
    if isinstance(a, Tup):
        if isinstance(b, Tup) and len(a.items) == len(b.items):
            store.push_all([eq(x, y) for x, y in zip(a.items, b.items)])
            return [store]
        return []
    if isinstance(b, Tup):
        return []

    # both are set-shaped from here on
    if isinstance(a, Interval):
        return _interval_eq(store, a, b)
    if isinstance(b, Interval):
        return _interval_eq(store, b, a)
    if isinstance(a, CartProd):
        return _cartprod_eq(store, a, b)
    if isinstance(b, CartProd):
        return _cartprod_eq(store, b, a)

    if isinstance(a, EmptySet):
        return [store] if isinstance(b, EmptySet) else []
    if isinstance(b, EmptySet):
        return []
    return _setcons_eq(store, a, b)


def _occurs_in_any(name, terms, resolve):
    return any(name in term_vars(resolve(t)) for t in terms)


def _bind_var(store, v, t):
    if isinstance(t, Var):
        return [store] if store.bind(v.name, t) else []
    if v.name in term_vars(store.resolve(t)):
        if isinstance(t, SetCons):
            elems, tail = store.set_view(t)
            if (isinstance(tail, Var) and tail.name == v.name
                    and not _occurs_in_any(v.name, elems, store.resolve)):
                # X = {t1..tn / X} has the solutions of X = {t1..tn / N}
                return [store] if store.bind(v.name, mkset(elems, store.fresh())) else []
        return []
    return [store] if store.bind(v.name, t) else []


def _interval_eq(store, ivl, other):
    lo = store.walk(ivl.lo)
    hi = store.walk(ivl.hi)
    ground = isinstance(lo, IntLit) and isinstance(hi, IntLit)
    if isinstance(other, EmptySet):
        if ground:
            return [store] if lo.value > hi.value else []
        if not (store.mark_int_term(lo) and store.mark_int_term(hi)):
            return []
        if not store.ints.post_cmp("<", hi, lo, walk=store.walk, surface=False):
            return []
        return [store] if store.ints.sat() else []
    expanded = expand_interval(store, ivl)
    if expanded is not None:
        store.push(eq(expanded, other))
        return [store]
    store.park(eq(ivl, other))
    return [store]


def _cartprod_eq(store, cp, other):
    if isinstance(other, EmptySet):
        s1 = store.clone()
        s1.push(eq(cp.left, EMPTY))
        s2 = store
        s2.push(eq(cp.right, EMPTY))
        return [s1, s2]
    expanded = expand_cartprod(store, cp)
    if expanded is not None:
        store.push(eq(expanded, other))
        return [store]
    if isinstance(other, CartProd):
        # componentwise, or both sides empty in one of four ways
        out = []
        combos = [
            [eq(cp.left, other.left), eq(cp.right, other.right)],
            [eq(cp.left, EMPTY), eq(other.left, EMPTY)],
            [eq(cp.left, EMPTY), eq(other.right, EMPTY)],
            [eq(cp.right, EMPTY), eq(other.left, EMPTY)],
            [eq(cp.right, EMPTY), eq(other.right, EMPTY)],
        ]
        for cs in combos:
            s = store.clone()
            s.push_all(cs)
            out.append(s)
        return out
    store.park(eq(cp, other))
    return [store]


def _setcons_eq(store, a, b):
    ae, at = store.set_view(a)
    be, bt = store.set_view(b)
    if (isinstance(at, Var) and isinstance(bt, Var) and at.name == bt.name):
        return _same_tail_eq(store, ae, be, at)
    s, s0 = ae[0], mkset(ae[1:], at)
    t, t0 = be[0], mkset(be[1:], bt)
    whole_a = mkset(ae, at)
    whole_b = mkset(be, bt)
    n = store.fresh()
    alts = [
        [eq(s, t), eq(s0, t0)],
        [eq(s, t), eq(whole_a, t0)],
        [eq(s, t), eq(s0, whole_b)],
        [eq(s0, SetCons(t, n)), eq(SetCons(s, n), t0)],
    ]
    out = []
    for cs in alts:
        child = store.clone()
        child.push_all(cs)
        out.append(child)
    return out


def _same_tail_eq(store, ae, be, x):
    """{a1..am / X} = {b1..bn / X}"""
    if not ae and not be:
        return [store]
    if not ae or not be:
        # X = {t1..tk / X}: X just has to contain the listed elements
        elems = be or ae
        return _bind_var(store, x, mkset(elems, x))
    s = ae[0]
    out = []
    for j, t in enumerate(be):
        child = store.clone()
        child.push(eq(s, t))
        child.push(eq(mkset(ae[1:], x), mkset(be[:j] + be[j + 1:], x)))
        out.append(child)
    child = store.clone()
    n = store.fresh()
    child.push(eq(x, SetCons(s, n)))
    child.push(eq(mkset(ae[1:], n), mkset(be, n)))
    out.append(child)
    return out
