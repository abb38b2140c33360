"""Goal solving: depth-first search over stores with chronological
backtracking, constraint propagation to a stable store, an optional final
stage for delayed constraints, and answer extraction.

Two integer-solving modes mirror the two arithmetic backends:

* ``clpq``  — rational reasoning; uniquely determined variables get bound,
  everything else is reported as residual constraints.
* ``clpfd`` — finite domains; variables registered through ``in int(a,b)``
  are labeled (enumerated in registration order, ascending), and goals whose
  arithmetic part has no registered finite domain raise a warning flag.
"""
import time

from . import rules
from .errors import ResourceLimitError, UnknownClauseError
from .goals import Call, Conj, Constraint, Disj, goal_vars
from .seqlib import SEQ_SYMS
from .store import Store
from .terms import (Atom, EMPTY, IntLit, Subst, Var, VarRegistry,
                    is_ground, term_vars)
from .unify import eq


class Answer:
    """One solution: variable bindings plus whatever could not be solved."""

    __slots__ = ("bindings", "residuals", "warned", "store")

    def __init__(self, bindings, residuals, warned, store):
        self.bindings = bindings
        self.residuals = residuals
        self.warned = warned
        self.store = store

    def is_true(self):
        return not self.bindings and not self.residuals


class Solver:
    def __init__(self, registry=None, engine=None, mode="clpq",
                 deadline=None):
        self.registry = registry if registry is not None else VarRegistry()
        self.engine = engine
        self.mode = mode
        self.deadline = deadline
        self._steps = 0

    # -- search ------------------------------------------------------------

    def solve(self, goal):
        """Yield Answers for a goal, left-to-right, depth-first."""
        store = Store(self.registry)
        self._goal_rank = {n: i
                           for i, n in enumerate(goal_vars(goal))}
        yield from self._run([(store, [goal])], top=True)

    def _tick(self):
        self._steps += 1
        if self.deadline is not None and self._steps % 512 == 0:
            if time.monotonic() > self.deadline:
                raise ResourceLimitError("time budget exhausted")

    def _run(self, stack, top):
        while stack:
            store, agenda = stack.pop()
            dead = False
            while True:
                self._tick()
                if agenda:
                    item = agenda[0]
                    rest = agenda[1:]
                    if isinstance(item, Conj):
                        agenda = list(item.parts) + rest
                        continue
                    if isinstance(item, Disj):
                        for part in reversed(item.parts):
                            stack.append((store.clone(), [part] + rest))
                        dead = True
                        break
                    if isinstance(item, Constraint):
                        store.push(item)
                        agenda = rest
                        continue
                    if isinstance(item, Call):
                        if self.engine is None:
                            raise UnknownClauseError(
                                f"unknown predicate: "
                                f"{item.name}/{len(item.args)}")
                        branches = self.engine.expand(store, item)
                        for st, g in reversed(branches):
                            stack.append((st, [g] + rest))
                        dead = True
                        break
                    raise TypeError(f"cannot solve agenda item {item!r}")
                c = store.pick()
                if c is not None:
                    kids = rules.rewrite(store, c)
                    if not kids:
                        dead = True
                        break
                    if len(kids) == 1:
                        store = kids[0]
                        continue
                    for k in reversed(kids):
                        stack.append((k, []))
                    dead = True
                    break
                prog = self._final_stage(store)
                if prog is None:
                    break
                for k in reversed(prog):
                    stack.append((k, []))
                dead = True
                break
            if dead:
                continue
            yield from self._emit(store, top)

    def _final_stage(self, store):
        for i, c in enumerate(store.residue):
            probe = store.clone()
            del probe.residue[i]
            kids = rules.final_rewrite(probe, c)
            if kids is not None:
                return kids
        return None

    # -- answers -----------------------------------------------------------

    def _emit(self, store, top):
        if self.mode == "clpfd" and top:
            regs = store.ints.registered()
            if regs:
                for assignment, fixed in store.ints.label():
                    child = store.clone()
                    vals = dict(fixed)
                    vals.update(assignment)
                    for n, v in vals.items():
                        if isinstance(child.walk(Var(n)), Var):
                            child.push(eq(Var(n), IntLit(v)))
                    yield from self._run([(child, [])], top=False)
                return
        fixed = store.ints.fixed_values()
        todo = [(n, v) for n, v in fixed.items()
                if isinstance(store.walk(Var(n)), Var)]
        if todo:
            for n, v in todo:
                store.push(eq(Var(n), IntLit(v)))
            yield from self._run([(store, [])], top=False)
            return
        yield self._answer(store)

    def _answer(self, store):
        rank = getattr(self, "_goal_rank", {})
        shown = [n for n in sorted(rank, key=rank.get)
                 if not n.startswith("_")]
        raw = []
        classes = {}
        for name in shown:
            t = store.resolve(Var(name))
            if isinstance(t, Var):
                if t.name != name:
                    classes.setdefault(t.name, []).append(name)
            else:
                raw.append((name, t))
        # goal variables that unified with each other display against the
        # earliest one (M = N with N left free, never N = M), and that
        # earliest name replaces the internal representative everywhere
        bindings = []
        disp = {}
        for rep, members in classes.items():
            cls = list(members)
            if rep in rank and not rep.startswith("_"):
                cls.append(rep)
            cls.sort(key=rank.get)
            if cls[0] != rep:
                disp[rep] = Var(cls[0])
            for g in cls[1:]:
                bindings.append((g, Var(cls[0])))
        sub = Subst(disp) if disp else None

        def out(t):
            return sub.resolve(t) if sub else t

        bindings.extend((n, out(t)) for n, t in raw)
        bindings.sort(key=lambda nv: rank.get(nv[0], len(rank)))

        plain, neqs = [], []
        seen = set()
        for c in store.residue:
            rc = c.map_terms(lambda t: out(store.resolve(t)))
            if rc.sym == "neq":
                rc = self._orient_neq(rc, rank)
            key = (rc.sym, tuple(repr(a) for a in rc.args))
            if key not in seen:
                seen.add(key)
                (neqs if rc.sym == "neq" else plain).append(rc)
        neqs.sort(key=lambda c: tuple(
            (0, rank[a.name]) if isinstance(a, Var) and a.name in rank
            else (1, 0) for a in c.args))
        residuals = plain + neqs
        surfaces = [c.map_terms(out)
                    for c in store.ints.residual_surfaces(store.resolve)]

        warned = False
        if self.mode == "clpfd":
            warned = bool(surfaces) or any(
                not is_ground(a) for c in residuals
                if c.sym in ("is", "=<", "<", ">", ">=") for a in c.args)

        markers = []
        marked = set()
        def note_sets(t):
            for n in sorted(term_vars(t)):
                if (n not in marked and store.sort_of(n) == "set"
                        and isinstance(store.walk(Var(n)), Var)):
                    marked.add(n)
                    markers.append(Constraint("set", (Var(n),)))
        for _, t in bindings:
            note_sets(t)
        for c in residuals + surfaces:
            if c.sym == "foreach":
                continue
            for a in c.args:
                note_sets(a)

        return Answer(bindings, markers + residuals + surfaces, warned, store)

    @staticmethod
    def _orient_neq(c, rank):
        a, b = c.args
        def key(t):
            if isinstance(t, Var):
                return (0, rank.get(t.name, len(rank)), t.name)
            return (1, 0, "")
        if key(b) < key(a):
            return Constraint("neq", (b, a))
        return c

    # -- grounding of open answers ------------------------------------------

    def ground_answer(self, answer):
        """Instantiate every unbound variable of an answer: set variables
        become {}, integer variables take witness values from the store,
        everything else becomes a fresh distinct atom.  Returns the map, or
        None when even the arithmetic part has no integer witness."""
        store = answer.store
        names = []
        seen = set()
        def collect(t):
            for n in term_vars(t):
                if n not in seen:
                    seen.add(n)
                    if isinstance(store.walk(Var(n)), Var):
                        names.append(n)
        for _, t in answer.bindings:
            collect(t)
        for c in answer.residuals:
            if c.sym == "foreach":
                continue
            for a in c.args:
                collect(a)

        int_names = [n for n in names if store.sort_of(n) == "int"]
        wit = store.ints.witness() or {}
        gmap = {}
        counter = 0
        for n in names:
            sort = store.sort_of(n)
            if sort == "set":
                gmap[n] = EMPTY
            elif sort == "int" or n in wit:
                gmap[n] = IntLit(wit.get(n, 0))
            else:
                counter += 1
                gmap[n] = Atom(f"a__{counter}")
        del int_names
        return gmap

    def check_grounding(self, answer, gmap):
        """Re-solve the answer's leftovers under a grounding map.  Frozen
        sequence constraints are exempt; everything else must discharge."""
        child = answer.store.clone()
        for n, t in gmap.items():
            child.push(eq(Var(n), t))
        try:
            for st in self._run([(child, [])], top=False):
                open_res = [c for c in st.residue if c.sym not in SEQ_SYMS
                            and c.sym != "foreach"]
                if not open_res and st.ints.sat():
                    surf = st.ints.residual_surfaces(st.resolve)
                    if not surf:
                        return True
        except ResourceLimitError:
            return False
        return False

    def grounded_answer(self, answer, retries=3):
        """ground_answer + check_grounding with a couple of retries that
        nudge integer witnesses; returns a validated map or None."""
        gmap = self.ground_answer(answer)
        if gmap is None:
            return None
        if self.check_grounding(answer, gmap):
            return gmap
        ints = [n for n in gmap
                if isinstance(gmap[n], IntLit)]
        for attempt in range(1, retries + 1):
            alt = dict(gmap)
            for n in ints:
                alt[n] = IntLit(gmap[n].value + attempt * attempt)
            if self.check_grounding(answer, alt):
                return alt
        return None


def solve_goal(goal, registry=None, engine=None, mode="clpq", deadline=None):
    return Solver(registry, engine, mode, deadline).solve(goal)
