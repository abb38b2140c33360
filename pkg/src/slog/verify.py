"""Proof support: invariance obligations and their unsatisfiability goals.

To prove that an operation preserves an invariant we run the goal
``I(before) & Op(before, io, after) & not-I(after)`` and read an empty
answer stream as "theorem".  Negation never uses logical negation: each
atomic constraint is replaced by its complementary symbol and negation is
distributed over conjunction/disjunction down to the atoms.
"""
import json
import time
from dataclasses import dataclass

from .errors import ResourceLimitError, SlogError
from .goals import Call, Conj, Constraint, Disj, map_goal_terms
from .solver import Solver
from .terms import (CartProd, Interval, IntExpr, SetCons, Tup, Var)

# complementary constraint symbols; applying the map twice is the identity
NEG = {
    "=": "neq", "in": "nin",
    "un": "nun", "inters": "ninters", "diff": "ndiff",
    "subset": "nsubset", "disj": "ndisj",
    "rel": "nrel", "pfun": "npfun", "apply": "napply",
    "dom": "ndom", "ran": "nran", "comp": "ncomp", "inv": "ninv",
    "dres": "ndres", "dares": "ndares",
    "rres": "nrres", "rares": "nrares",
    "oplus": "noplus", "ring": "nring",
    "=<": ">", "<": ">=",
}
NEG.update({v: k for k, v in NEG.items()})


def negate_constraint(c):
    """The complementary constraint, e.g. in(X,A) -> nin(X,A)."""
    sym = NEG.get(c.sym)
    if sym is None:
        raise SlogError(
            f"cannot negate {c.sym}: no complementary symbol; "
            "rewrite the negation by hand")
    return Constraint(sym, c.args)


def negate_goal(g):
    """Distribute negation over &/or down to atomic constraints."""
    if isinstance(g, Conj):
        return Disj(tuple(negate_goal(p) for p in g.parts))
    if isinstance(g, Disj):
        return Conj(tuple(negate_goal(p) for p in g.parts))
    if isinstance(g, Call):
        raise SlogError(
            f"cannot negate a call to {g.name}; supply an explicit "
            "negated invariant instead")
    return negate_constraint(g)


@dataclass
class ProofResult:
    verdict: str                # "theorem" | "counterexample" | "inconclusive"
    answer: object = None       # the witness Answer for a counterexample
    reason: str = ""            # what made the proof inconclusive
    elapsed: float = 0.0


@dataclass
class InvarianceObligation:
    """I(before) and Op(before,io,after) imply I(after).

    ``before``/``io``/``after`` name the variables wiring the two clauses
    together; when omitted they default to the operation clause's own
    parameter names split positionally (state-before first, inputs and
    outputs in the middle, state-after last).  ``hypotheses`` are extra
    goals conjoined in front; ``negated_invariant`` overrides the
    automatic negation when the invariant body has no complement.
    """
    invariant: str
    operation: str
    before: tuple = None
    io: tuple = None
    after: tuple = None
    hypotheses: tuple = ()
    negated_invariant: object = None
    name: str = ""

    def __post_init__(self):
        if not self.name:
            self.name = f"{self.operation}-{self.invariant}"


def _lookup(engine, name):
    defs = [d for (n, _a), ds in engine.db.items() if n == name for d in ds]
    if not defs:
        raise SlogError(f"unknown predicate: {name}")
    if len({len(d.params) for d in defs}) > 1:
        raise SlogError(f"{name} is defined at several arities")
    return defs[0]


def _rename(t, ren):
    """One-shot simultaneous variable renaming (never chases chains, so
    wiring an invariant onto variables that reuse the clause's own
    parameter names is fine)."""
    if isinstance(t, Var):
        return ren.get(t.name, t)
    if isinstance(t, IntExpr):
        return IntExpr(t.op, tuple(_rename(a, ren) for a in t.args))
    if isinstance(t, Tup):
        return Tup(tuple(_rename(a, ren) for a in t.items))
    if isinstance(t, SetCons):
        return SetCons(_rename(t.elem, ren), _rename(t.rest, ren))
    if isinstance(t, Interval):
        return Interval(_rename(t.lo, ren), _rename(t.hi, ren))
    if isinstance(t, CartProd):
        return CartProd(_rename(t.left, ren), _rename(t.right, ren))
    return t


def _instantiate(engine, clause, args):
    """The clause body with parameters replaced by args, locals renamed."""
    if clause.body is None:
        raise SlogError(f"{clause.name} has no body to instantiate")
    if len(args) != len(clause.params):
        raise SlogError(f"{clause.name} expects {len(clause.params)} "
                        f"arguments, got {len(args)}")
    ren = {}
    for p, a in zip(clause.params, args):
        if not isinstance(p, Var):
            raise SlogError(f"{clause.name} has a non-variable parameter; "
                            "cannot wire it into an obligation")
        ren[p.name] = a
    names = set()
    _body_vars(clause.body, names)
    for n in names:
        if n not in ren:
            ren[n] = engine.registry.fresh("L")
    return map_goal_terms(clause.body, lambda t: _rename(t, ren))


def _body_vars(g, acc):
    if isinstance(g, (Conj, Disj)):
        for p in g.parts:
            _body_vars(p, acc)
    else:
        for n in g.vars():
            acc.add(n)


def build_invariance_goal(ob, engine):
    inv = _lookup(engine, ob.invariant)
    op = _lookup(engine, ob.operation)
    s = len(inv.params)
    n = len(op.params)

    before, io, after = ob.before, ob.io, ob.after
    if before is None and io is None and after is None:
        if n < 2 * s:
            raise SlogError(
                f"{ob.operation}/{n} is too short to carry two copies of "
                f"a {s}-place state")
        for p in op.params:
            if not isinstance(p, Var):
                raise SlogError(f"{ob.operation} has non-variable "
                                "parameters; wire the obligation explicitly")
        names = [p.name for p in op.params]
        before, io, after = names[:s], names[s:n - s], names[n - s:]
    before = tuple(before or ())
    io = tuple(io or ())
    after = tuple(after or ())

    if len(before) != s or len(after) != s:
        raise SlogError(f"{ob.invariant} has arity {s}; the state wiring "
                        f"must list {s} before- and {s} after-variables")
    if len(before) + len(io) + len(after) != n:
        raise SlogError(f"{ob.operation} has arity {n}; the wiring lists "
                        f"{len(before) + len(io) + len(after)} variables")
    wired = list(before) + list(io) + list(after)
    if len(set(wired)) != len(wired):
        raise SlogError("wiring variables must be distinct")

    bvars = tuple(Var(x) for x in before)
    avars = tuple(Var(x) for x in after)
    inv_before = _instantiate(engine, inv, bvars)
    if ob.negated_invariant is not None:
        ninv_after = ob.negated_invariant
    else:
        ninv_after = negate_goal(_instantiate(engine, inv, avars))
    parts = list(ob.hypotheses)
    parts.append(inv_before)
    parts.append(Call(ob.operation, tuple(Var(x) for x in wired)))
    parts.append(ninv_after)
    return Conj(tuple(parts))


def prove(goal, engine, budget=60.0):
    """Run a negated obligation; no answers at all means it is a theorem.

    Proofs always run in symbolic (clpq) arithmetic mode.
    """
    t0 = time.monotonic()
    solver = Solver(registry=engine.registry, engine=engine, mode="clpq",
                    deadline=t0 + budget if budget else None)
    try:
        for ans in solver.solve(goal):
            return ProofResult("counterexample", answer=ans,
                               elapsed=time.monotonic() - t0)
    except ResourceLimitError:
        return ProofResult("inconclusive",
                           reason=f"no verdict within {budget:g}s",
                           elapsed=time.monotonic() - t0)
    return ProofResult("theorem", elapsed=time.monotonic() - t0)


# -- obligation manifests ---------------------------------------------------------


def load_manifest(path):
    """Read a JSON list of obligations (under an "obligations" key)."""
    from .parser import parse_goal

    with open(path, encoding="utf-8") as f:
        data = json.load(f)
    entries = data["obligations"] if isinstance(data, dict) else data
    budget = data.get("budget", 60.0) if isinstance(data, dict) else 60.0
    obs = []
    for e in entries:
        hyps = tuple(parse_goal(_dotted(h))
                     for h in e.get("hypotheses", ()))
        ninv = e.get("negated_invariant")
        obs.append((InvarianceObligation(
            invariant=e["invariant"],
            operation=e["operation"],
            before=tuple(e["before"]) if "before" in e else None,
            io=tuple(e["io"]) if "io" in e else None,
            after=tuple(e["after"]) if "after" in e else None,
            hypotheses=hyps,
            negated_invariant=parse_goal(_dotted(ninv)) if ninv else None,
            name=e.get("name", "")),
            float(e.get("budget", budget))))
    return obs


def _dotted(text):
    text = text.strip()
    return text if text.endswith(".") else text + "."


def check_invariants(spec_path, manifest_path, make_engine, budget=None):
    """Prove every obligation in a manifest against a freshly consulted
    spec; yields (name, ProofResult) pairs, one engine per obligation."""
    obs = load_manifest(manifest_path)
    for ob, ob_budget in obs:
        engine = make_engine()
        engine.consult(spec_path)
        goal = build_invariance_goal(ob, engine)
        yield ob.name, prove(goal, engine,
                             budget if budget is not None else ob_budget)
