"""Ground-truth evaluation of constraints over fully known values.

Everything here is computed straight from the mathematical definition on
plain Python data, with no help from the solver: atoms are strings,
integers are ints, ordered pairs are 2-tuples, sets are frozensets.
Property tests compare the solver's sat/unsat verdicts on ground goals
against these functions, so nothing in this module may import the package
under test.

Relational operators require their relation argument to actually be a set
of ordered pairs; on anything else they are false (and their negations
true).  Sequences are the usual pair-set encoding {[1,e1],...,[n,en]}.
"""


def is_set(v):
    return isinstance(v, frozenset)


def is_pair(v):
    return isinstance(v, tuple) and len(v) == 2


def is_rel(v):
    return is_set(v) and all(is_pair(p) for p in v)


def functional(r):
    return len({x for x, _ in r}) == len(r)


# -- Table 1 ----------------------------------------------------------------

def set_(a):
    return is_set(a)


def eq(a, b):
    return a == b


def member(x, a):
    return is_set(a) and x in a


def un(a, b, c):
    return all(map(is_set, (a, b, c))) and c == a | b


def inters(a, b, c):
    return all(map(is_set, (a, b, c))) and c == a & b


def diff(a, b, c):
    return all(map(is_set, (a, b, c))) and c == a - b


def subset(a, b):
    return is_set(a) and is_set(b) and a <= b


def ssubset(a, b):
    return is_set(a) and is_set(b) and a < b


def disj(a, b):
    return is_set(a) and is_set(b) and not (a & b)


def size(a, n):
    return is_set(a) and isinstance(n, int) and len(a) == n


# -- Table 2 ----------------------------------------------------------------

def rel(r):
    return is_rel(r)


def pfun(r):
    return is_rel(r) and functional(r)


def apply_(f, x, y):
    return pfun(f) and (x, y) in f


def apply_to(f, x, y):
    """Function application without the functionality requirement on all
    of f: enough that x maps to y and to nothing else."""
    return is_rel(f) and (x, y) in f and \
        all(b == y for a, b in f if a == x)


def dom(r, a):
    return is_rel(r) and a == frozenset(x for x, _ in r)


def ran(r, a):
    return is_rel(r) and a == frozenset(y for _, y in r)


def comp(r, s, t):
    return is_rel(r) and is_rel(s) and t == frozenset(
        (x, z) for x, y in r for y2, z in s if y == y2)


def inv(r, s):
    return is_rel(r) and s == frozenset((y, x) for x, y in r)


def dres(a, r, s):
    return is_set(a) and is_rel(r) and \
        s == frozenset(p for p in r if p[0] in a)


def dares(a, r, s):
    return is_set(a) and is_rel(r) and \
        s == frozenset(p for p in r if p[0] not in a)


def rres(r, a, s):
    return is_set(a) and is_rel(r) and \
        s == frozenset(p for p in r if p[1] in a)


def rares(r, a, s):
    return is_set(a) and is_rel(r) and \
        s == frozenset(p for p in r if p[1] not in a)


def oplus(r, s, t):
    if not (is_rel(r) and is_rel(s)):
        return False
    sdom = frozenset(x for x, _ in s)
    return t == frozenset(p for p in r if p[0] not in sdom) | s


def ring(r, a, b):
    return is_rel(r) and is_set(a) and \
        b == frozenset(y for x, y in r if x in a)


# -- Table 3 (list semantics) ------------------------------------------------

def as_list(s):
    """The list a pair-set encodes, or None if it encodes no sequence."""
    if not (is_rel(s) and functional(s)):
        return None
    if {x for x, _ in s} != set(range(1, len(s) + 1)):
        return None
    return [dict(s)[i] for i in range(1, len(s) + 1)]


def slist(s):
    return as_list(s) is not None


def head(s, e):
    lst = as_list(s)
    return bool(lst) and lst[0] == e


def tail(s, t):
    lst = as_list(s)
    return bool(lst) and as_list(t) == lst[1:]


def last(s, e):
    lst = as_list(s)
    return bool(lst) and lst[-1] == e


def front(s, t):
    lst = as_list(s)
    return bool(lst) and as_list(t) == lst[:-1]


def add(s, e, t):
    lst = as_list(s)
    return lst is not None and as_list(t) == lst + [e]


def concat(s, t, u):
    ls, lt = as_list(s), as_list(t)
    return ls is not None and lt is not None and as_list(u) == ls + lt


def filter_(a, s, t):
    lst = as_list(s)
    if lst is None or not is_set(a):
        return False
    return as_list(t) == [e for i, e in enumerate(lst, 1) if i in a]


def extract(s, a, t):
    lst = as_list(s)
    if lst is None or not is_set(a):
        return False
    return as_list(t) == [e for e in lst if e in a]


# -- integers and internal predicates ----------------------------------------

def npair(v):
    return not is_pair(v)


def pfkey(x1, y1, x2, y2):
    return x1 != x2 or y1 == y2


_CMP = {
    "=<": lambda a, b: a <= b,
    "<=": lambda a, b: a <= b,
    "<": lambda a, b: a < b,
    ">=": lambda a, b: a >= b,
    ">": lambda a, b: a > b,
}


def compare(op, a, b):
    return isinstance(a, int) and isinstance(b, int) and _CMP[op](a, b)


# -- dispatch -----------------------------------------------------------------

POSITIVE = {
    "set": set_,
    "=": eq,
    "in": member,
    "un": un,
    "inters": inters,
    "diff": diff,
    "subset": subset,
    "ssubset": ssubset,
    "disj": disj,
    "size": size,
    "rel": rel,
    "pfun": pfun,
    "apply": apply_,
    "applyTo": apply_to,
    "dom": dom,
    "ran": ran,
    "comp": comp,
    "comp$w": comp,
    "inv": inv,
    "dres": dres,
    "dares": dares,
    "rres": rres,
    "rares": rares,
    "oplus": oplus,
    "ring": ring,
    "slist": slist,
    "head": head,
    "tail": tail,
    "last": last,
    "front": front,
    "add": add,
    "concat": concat,
    "filter": filter_,
    "extract": extract,
    "npair": npair,
    "pfkey": pfkey,
    "true": lambda: True,
}

# the complemented symbols, exactly as the answer language spells them
NEGATIONS = {
    "neq": "=",
    "nin": "in",
    "nun": "un",
    "ninters": "inters",
    "ndiff": "diff",
    "nsubset": "subset",
    "ndisj": "disj",
    "nrel": "rel",
    "npfun": "pfun",
    "napply": "apply",
    "ndom": "dom",
    "nran": "ran",
    "ncomp": "comp",
    "ninv": "inv",
    "ndres": "dres",
    "ndares": "dares",
    "nrres": "rres",
    "nrares": "rares",
    "noplus": "oplus",
    "nring": "ring",
}


def holds(sym, *args):
    """Truth of one ground constraint atom."""
    if sym in POSITIVE:
        return POSITIVE[sym](*args)
    if sym in NEGATIONS:
        return not POSITIVE[NEGATIONS[sym]](*args)
    if sym in _CMP:
        return compare(sym, *args)
    raise ValueError("no ground reading for %r" % (sym,))
