"""Sequence operations over the pair-set encoding {[1,a],[2,b],...}.

A sequence is a set of index/value pairs whose indices are exactly 1..n.
These rules only fire when the sequence argument is extensional with ground
integer indices; anything less determined stays parked as a frozen residual
(the solver treats those as solved forms).
"""
from .goals import Constraint
from .terms import EmptySet, IntLit, SetCons, Tup, Var, is_ground, mkset, pair

SEQ_SYMS = {"slist", "head", "tail", "last", "front", "add", "concat",
            "filter", "extract"}


def _park(store, c):
    store.park(c)
    return [store]


def _seq_view(store, t):
    """Return the list of values v1..vn of a fully indexed sequence term,
    "open" when the term is not determined enough to read off, or "bad"
    when it can never be a sequence."""
    w = store.walk(t)
    if isinstance(w, Var):
        if not store.mark_sort(w.name, "set"):
            return "bad"
        return "open"
    if isinstance(w, EmptySet):
        return []
    if not isinstance(w, SetCons):
        return "bad"
    elems, tail = store.set_view(w)
    if not isinstance(tail, EmptySet):
        if isinstance(tail, Var):
            return "open"
        return "bad"
    by_index = {}
    for e in elems:
        ew = store.walk(e)
        if isinstance(ew, Var):
            return "open"
        if not (isinstance(ew, Tup) and len(ew.items) == 2):
            return "bad"
        idx = store.walk(ew.items[0])
        if not isinstance(idx, IntLit):
            return "open" if not is_ground(store.resolve(idx)) else "bad"
        val = ew.items[1]
        if idx.value in by_index:
            prev = store.resolve(by_index[idx.value])
            cur = store.resolve(val)
            if prev != cur:
                if is_ground(prev) and is_ground(cur):
                    return "bad"
                return "open"
        else:
            by_index[idx.value] = val
    n = len(by_index)
    if sorted(by_index) != list(range(1, n + 1)):
        return "bad"
    return [by_index[i] for i in range(1, n + 1)]


def _mk(vals):
    return mkset([pair(IntLit(i), v) for i, v in enumerate(vals, start=1)])


def _ground_elems(store, t):
    """Members of a ground set as a list of resolved terms, else None."""
    from .rules import ground_key, _key_to_term
    rt = store.resolve(t)
    if not is_ground(rt):
        return None
    k = ground_key(rt)
    if k is None or k[0] != "s":
        return "bad"
    return [_key_to_term(x) for x in sorted(k[1], key=repr)]


def rewrite(store, c):
    from .unify import eq
    sym = c.sym
    if sym == "slist":
        v = _seq_view(store, c.args[0])
        if v == "open":
            return _park(store, c)
        return [] if v == "bad" else [store]

    if sym in ("head", "tail", "last", "front"):
        s, out = c.args
        v = _seq_view(store, s)
        if v == "open":
            return _park(store, c)
        if v == "bad" or v == []:
            return []
        if sym == "head":
            store.push(eq(out, v[0]))
        elif sym == "last":
            store.push(eq(out, v[-1]))
        elif sym == "tail":
            store.push(eq(out, _mk(v[1:])))
        else:
            store.push(eq(out, _mk(v[:-1])))
        return [store]

    if sym == "add":
        s, e, t = c.args
        v = _seq_view(store, s)
        if v == "open":
            return _park(store, c)
        if v == "bad":
            return []
        store.push(eq(t, _mk(list(v) + [e])))
        return [store]

    if sym == "concat":
        s, t, u = c.args
        vs = _seq_view(store, s)
        vt = _seq_view(store, t)
        if vs == "bad" or vt == "bad":
            return []
        if vs == "open" or vt == "open":
            return _park(store, c)
        store.push(eq(u, _mk(list(vs) + list(vt))))
        return [store]

    if sym == "filter":
        a, s, t = c.args
        v = _seq_view(store, s)
        if v == "bad":
            return []
        idxs = _ground_elems(store, a)
        if idxs == "bad":
            return []
        if v == "open" or idxs is None:
            return _park(store, c)
        if not all(isinstance(i, IntLit) for i in idxs):
            return []
        wanted = {i.value for i in idxs}
        kept = [x for n, x in enumerate(v, start=1) if n in wanted]
        store.push(eq(t, _mk(kept)))
        return [store]

    if sym == "extract":
        s, a, t = c.args
        from .rules import ground_key
        v = _seq_view(store, s)
        if v == "bad":
            return []
        if v == "open":
            return _park(store, c)
        ra = store.resolve(a)
        if not is_ground(ra):
            return _park(store, c)
        ka = ground_key(ra)
        if ka is None or ka[0] != "s":
            return []
        resolved = [store.resolve(x) for x in v]
        if not all(is_ground(x) for x in resolved):
            return _park(store, c)
        kept = [x for x in v
                if ground_key(store.resolve(x)) in ka[1]]
        store.push(eq(t, _mk(kept)))
        return [store]

    raise ValueError(f"not a sequence constraint: {sym!r}")
