"""Term model: fresh variables, substitution, set sugar."""
import random

from slog import parse_goal, parse_term, render_term
from slog.terms import (Atom, EmptySet, IntLit, SetCons, Subst, Tup, Var,
                        VarRegistry, mkset, set_parts)

from helpers import to_value


def test_fresh_names_follow_hint():
    reg = VarRegistry()
    v = reg.fresh("N")
    assert v.name == "_N1", v


def test_fresh_always_distinct():
    reg = VarRegistry()
    seen = {reg.fresh("N").name for _ in range(100)}
    assert len(seen) == 100


def test_fresh_skips_names_seen_by_parser():
    reg = VarRegistry()
    parse_goal("_N1 = {} & _N3 in _N1.", reg)
    names = [reg.fresh("N").name for _ in range(3)]
    assert "_N1" not in names and "_N3" not in names, names


def test_subst_replaces_inside_sets():
    reg = VarRegistry()
    t = parse_term("{X}", reg)
    out = Subst({"X": Atom("maxi")}).resolve(t)
    assert render_term(out) == "{maxi}"


def test_empty_subst_is_identity():
    reg = VarRegistry()
    for text in ("{}", "[X,[a,b]]", "{1,2/X}", "int(1,5)"):
        t = parse_term(text, reg)
        assert Subst({}).resolve(t) == t


def test_subst_set_for_var_keeps_structure():
    reg = VarRegistry()
    t = parse_term("{X/Z}", reg)
    out = Subst({"X": parse_term("{a/Y}", reg)}).resolve(t)
    assert out == SetCons(SetCons(Atom("a"), Var("Y")), Var("Z"))


def test_extensional_sugar_nests_right():
    reg = VarRegistry()
    t = parse_term("{1, 2 / X}", reg)
    assert t == SetCons(IntLit(1), SetCons(IntLit(2), Var("X")))
    assert render_term(t) == "{1,2/X}"


def test_duplicate_elements_kept_syntactically():
    reg = VarRegistry()
    t = parse_term("{a,a}", reg)
    elems, tail = set_parts(t)
    assert len(elems) == 2 and tail == EmptySet()
    # ... but the denoted set has one member
    assert to_value(t) == frozenset(["a"])


def _random_term(rng, depth=3):
    pick = rng.randrange(8 if depth else 4)
    if pick == 0:
        return Atom(rng.choice("abc"))
    if pick == 1:
        return IntLit(rng.randrange(-9, 10))
    if pick == 2:
        return Var(rng.choice("XYZ"))
    if pick == 3:
        return EmptySet()
    if pick == 4:
        return Tup((_random_term(rng, depth - 1),
                    _random_term(rng, depth - 1)))
    tail = Var("T") if pick == 5 else EmptySet()
    elems, texts = [], set()
    for _ in range(rng.randrange(1, 4)):
        e = _random_term(rng, depth - 1)
        # distinct elements only: printing absorbs duplicates, so terms
        # with syntactic repeats round-trip to the absorbed form
        if render_term(e) not in texts:
            texts.add(render_term(e))
            elems.append(e)
    return mkset(elems, tail)


def test_render_parse_round_trip():
    rng = random.Random(7)
    reg = VarRegistry()
    for _ in range(300):
        t = _random_term(rng)
        back = parse_term(render_term(t), reg)
        assert back == t, (render_term(t), back)


def _ground_term(rng):
    return rng.choice([Atom("k"), IntLit(3), EmptySet(),
                       mkset([Atom("a"), IntLit(1)]),
                       Tup((Atom("a"), Atom("b")))])


def test_subst_distributes_over_constructors():
    rng = random.Random(8)
    for _ in range(200):
        s = Subst({"X": _ground_term(rng), "Y": _ground_term(rng)})
        e, r = _random_term(rng, 2), mkset([_random_term(rng, 1)], Var("Y"))
        assert s.resolve(SetCons(e, r)) == SetCons(s.resolve(e),
                                                   s.resolve(r))
        assert s.resolve(Tup((e, r))) == Tup((s.resolve(e), s.resolve(r)))
