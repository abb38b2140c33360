"""Surface syntax: programs, goals, errors, and printing round-trips."""
import random

import pytest

from slog import (SlogSyntaxError, parse_goal, parse_program, render_goal,
                  VarRegistry)
from slog.goals import Call, Clause, Conj, Constraint, Directive

CORPUS = "src/slog/corpus/bb.slog"

WITHDRAW_BODY = """
  (dom(Sa, D) &
   N_i nin D
   or
   apply(Sa, N_i, Y) &
   A_i > Y
   or
   A_i =< 0
  ) &
  Msg_o = error &
  Sa_ = Sa.
"""


def _load_corpus():
    with open(CORPUS, encoding="utf-8") as f:
        return parse_program(f.read(), VarRegistry())


def test_corpus_program_counts():
    prog = _load_corpus()
    directives = [i for i in prog.items if isinstance(i, Directive)]
    clauses = [i for i in prog.items if isinstance(i, Clause)]
    assert len([d for d in directives if d.kind == "dec_type"]) == 2
    assert len([d for d in directives if d.kind == "dec_p_type"]) == 9
    assert len(clauses) == 9
    assert {c.name for c in clauses} == {
        "birthdayBookInit", "birthdayBookInv", "addBirthdayOk",
        "nameAlreadyExists", "addBirthday", "findBirthdayOk", "notAFriend",
        "findBirthday", "remind"}


def test_empty_program():
    assert parse_program("", VarRegistry()).items == []
    assert parse_program("  % only a comment\n", VarRegistry()).items == []


def test_unclosed_set_is_a_syntax_error():
    with pytest.raises(SlogSyntaxError) as e:
        parse_program("foo(X) :- X in {1,2.", VarRegistry())
    # the offending token is the '.' where '}' or ',' was expected
    assert e.value.line == 1
    assert e.value.col == 20, e.value


def test_two_call_goal_is_a_conjunction():
    g = parse_goal("birthdayBookInit(K,B) & "
                   "addBirthday(K,B,maxi,160367,K_,B_).", VarRegistry())
    assert isinstance(g, Conj) and len(g.parts) == 2
    first, second = g.parts
    assert isinstance(first, Call) and first.name == "birthdayBookInit"
    assert isinstance(second, Call) and len(second.args) == 6


def test_single_equality_goal():
    g = parse_goal("X = {}.", VarRegistry())
    assert isinstance(g, Constraint)
    assert g.sym == "="


def test_conjunction_binds_tighter_than_or():
    g = parse_goal("a in A or b in A & c in A.", VarRegistry())
    # or at the top, the & nested on its right
    assert type(g).__name__ == "Disj"
    assert isinstance(g.parts[-1], Conj)


def test_parentheses_override_precedence():
    reg = VarRegistry()
    g = parse_goal("(a in A or b in A) & c in A.", reg)
    assert isinstance(g, Conj)
    assert type(g.parts[0]).__name__ == "Disj"
    # the disjunctive guard of an error-path clause keeps its grouping
    body = parse_goal(WITHDRAW_BODY, reg)
    assert isinstance(body, Conj)
    assert type(body.parts[0]).__name__ == "Disj"
    again = parse_goal(render_goal(body) + ".", reg)
    assert again == body


def test_goal_render_round_trip_on_corpus():
    reg = VarRegistry()
    prog = _load_corpus()
    for item in prog.items:
        if isinstance(item, Clause) and item.body is not None:
            back = parse_goal(render_goal(item.body) + ".", reg)
            assert back == item.body, item.name


_SYMS = [
    ("un", 3), ("inters", 3), ("diff", 3), ("subset", 2), ("disj", 2),
    ("dom", 2), ("ran", 2), ("comp", 3), ("size", 2), ("in", 2),
    ("neq", 2), ("=", 2),
]


def _random_goal(rng, depth=2):
    if depth and rng.random() < 0.5:
        a, b = _random_goal(rng, depth - 1), _random_goal(rng, depth - 1)
        return "(%s %s %s)" % (a, "&" if rng.random() < 0.7 else "or", b)
    sym, arity = rng.choice(_SYMS)
    args = [rng.choice(["X", "Y", "{}", "{a}", "{a,b}", "[a,b]", "3", "c"])
            for _ in range(arity)]
    if sym in ("=", "neq", "in"):
        return "%s %s %s" % (args[0], sym, args[1])
    return "%s(%s)" % (sym, ",".join(args))


def test_goal_render_round_trip_random():
    rng = random.Random(11)
    reg = VarRegistry()
    for _ in range(300):
        g = parse_goal(_random_goal(rng) + ".", reg)
        assert parse_goal(render_goal(g) + ".", reg) == g
