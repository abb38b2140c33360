"""The per-branch solver state.

A Store bundles the substitution, the queue of constraints still to be
rewritten, the parked residue, the integer store and the variable sorts.
Branching clones the whole store; the variable registry is shared so fresh
names stay globally unique.
"""
from .arith import IntStore
from .terms import (CartProd, EmptySet, IntExpr, IntLit, Interval, SetCons,
                    Subst, Var, term_vars)

_SETLIKE = (EmptySet, SetCons, Interval, CartProd)
_INTLIKE = (IntLit, IntExpr)

# lower class rewrites first; ties go to posting order
_PRIORITY = {"=": 0, "in": 1, "nin": 1}


class Store:
    __slots__ = ("subst", "queue", "residue", "ints", "sorts", "registry")

    def __init__(self, registry):
        self.subst = Subst()
        self.queue = []
        self.residue = []
        self.ints = IntStore()
        self.sorts = {}
        self.registry = registry

    def clone(self):
        s = Store.__new__(Store)
        s.subst = self.subst.copy()
        s.queue = list(self.queue)
        s.residue = list(self.residue)
        s.ints = self.ints.copy()
        s.sorts = dict(self.sorts)
        s.registry = self.registry
        return s

    def walk(self, t):
        return self.subst.walk(t)

    def set_view(self, t):
        """Elements along a set spine plus the walked tail."""
        elems = []
        t = self.walk(t)
        while isinstance(t, SetCons):
            elems.append(t.elem)
            t = self.walk(t.rest)
        return elems, t

    def resolve(self, t):
        return self.subst.resolve(t)

    def fresh(self, hint="N"):
        return self.registry.fresh(hint)

    # -- queue -------------------------------------------------------------

    def push(self, c):
        self.queue.append(c)

    def push_all(self, cs):
        self.queue.extend(cs)

    def pick(self):
        if not self.queue:
            return None
        best = 0
        best_p = _PRIORITY.get(self.queue[0].sym, 2)
        for i in range(1, len(self.queue)):
            if best_p == 0:
                break
            p = _PRIORITY.get(self.queue[i].sym, 2)
            if p < best_p:
                best, best_p = i, p
        return self.queue.pop(best)

    def park(self, c):
        self.residue.append(c)

    def reactivate_mentioning(self, names):
        """Move parked constraints that mention any of the names back onto
        the queue.  Must run before the name is rewritten away by a bind,
        while resolving a parked constraint still exposes it."""
        if not self.residue:
            return
        keep, moved = [], []
        for c in self.residue:
            cvars = set(c.map_terms(self.resolve).vars())
            if cvars & names:
                moved.append(c)
            else:
                keep.append(c)
        if moved:
            self.residue = keep
            self.queue.extend(moved)

    # -- sorts ----------------------------------------------------------------

    def _sort_ok(self, sort, t):
        if isinstance(t, Var):
            return True
        if sort == "set":
            return isinstance(t, _SETLIKE)
        return isinstance(t, _INTLIKE)

    def mark_sort(self, name, sort):
        """Record that the variable has the given sort; False on clash."""
        t = self.walk(Var(name))
        if isinstance(t, Var):
            have = self.sorts.get(t.name)
            if have is not None and have != sort:
                return False
            self.sorts[t.name] = sort
            return True
        return self._sort_ok(sort, t)

    def mark_int_term(self, t):
        """Mark every variable inside an arithmetic term as integer."""
        for name in term_vars(self.resolve(t)):
            if not self.mark_sort(name, "int"):
                return False
        return True

    def sort_of(self, name):
        return self.sorts.get(name)

    # -- binding -----------------------------------------------------------------

    def bind(self, name, term):
        """Bind an unbound variable, keeping sorts and the integer store in
        step and waking parked constraints that mention it."""
        sort = self.sorts.get(name)
        if sort is not None and not self._sort_ok(sort, term):
            return False
        if isinstance(term, Var):
            other = self.sorts.get(term.name)
            if sort is not None and other is not None and sort != other:
                return False
            if sort is not None and other is None:
                self.sorts[term.name] = sort
            elif other is not None and sort is None:
                sort = other
                self.sorts[name] = sort
        self.reactivate_mentioning({name})
        self.subst.bind(name, term)
        if sort == "int" or self.ints.mentions(name):
            if isinstance(term, _INTLIKE) or isinstance(term, Var):
                if not self.ints.post_eq_terms(Var(name), term, walk=self.walk):
                    # inert non-linear right-hand side; leave it to `is`
                    pass
                if isinstance(term, Var):
                    self.sorts.setdefault(term.name, "int")
                elif not self.mark_int_term(term):
                    return False
                if not self.ints.sat():
                    return False
            elif sort == "int":
                return False
        return True

    # -- introspection ------------------------------------------------------------

    def free_set_vars(self, terms):
        """Unbound set-sorted variable names reachable from the given terms."""
        out = []
        seen = set()
        for t in terms:
            for name in sorted(term_vars(self.resolve(t))):
                if name in seen:
                    continue
                seen.add(name)
                if self.sorts.get(name) == "set":
                    out.append(name)
        return out
