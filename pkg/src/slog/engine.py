"""Clause database, file loading and call expansion (SLD-style)."""
import os

from .errors import SlogError, UnknownClauseError
from .goals import Call, Conj, Constraint, Directive, goal_vars, map_goal_terms
from .parser import parse_program
from .terms import Subst, term_vars
from .unify import eq

# Loading these library files is accepted and ignored: the operations they
# provide in the reference system are built into the rewrite rules here.
LIB_FILES = {"setlogliblist.slog", "setloglibpf.slog", "setloglib.slog"}

CORPUS_DIR = os.path.join(os.path.dirname(__file__), "corpus")


class ClauseDef:
    __slots__ = ("name", "params", "body", "origin")

    def __init__(self, name, params, body, origin=None):
        self.name = name
        self.params = params
        self.body = body
        self.origin = origin


class Engine:
    """Holds user-defined predicates and expands calls against them."""

    def __init__(self, registry):
        self.registry = registry
        self.db = {}
        self.type_decls = []
        self.on_directive = None  # session hook for mode/type-check switches

    # -- loading ------------------------------------------------------------

    def add_clause(self, clause, origin=None):
        key = (clause.name, len(clause.params))
        self.db.setdefault(key, []).append(
            ClauseDef(clause.name, clause.params, clause.body, origin))

    def _resolve_path(self, path, base_dir=None):
        if os.path.isabs(path) and os.path.exists(path):
            return path
        for d in (base_dir, os.getcwd(), CORPUS_DIR):
            if d is None:
                continue
            cand = os.path.join(d, path)
            if os.path.exists(cand):
                return cand
        # a path like some/dir/bb.slog may still name a bundled file
        cand = os.path.join(CORPUS_DIR, os.path.basename(path))
        if os.path.exists(cand):
            return cand
        return None

    def consult(self, path, base_dir=None):
        if os.path.basename(path) in LIB_FILES:
            return
        resolved = self._resolve_path(path, base_dir)
        if resolved is None:
            raise SlogError(f"cannot open {path!r}")
        with open(resolved, encoding="utf-8") as f:
            text = f.read()
        prog = parse_program(text, self.registry)
        # reconsulting a file replaces what it defined before
        for key in list(self.db):
            self.db[key] = [d for d in self.db[key] if d.origin != resolved]
            if not self.db[key]:
                del self.db[key]
        self.type_decls = [(d, o) for d, o in self.type_decls
                           if o != resolved]
        for item in prog.items:
            if isinstance(item, Directive):
                self._file_directive(item, os.path.dirname(resolved),
                                     resolved)
            else:
                self.add_clause(item, origin=resolved)

    def _file_directive(self, d, base_dir, origin):
        if d.kind == "consult":
            self.consult(d.args[0], base_dir)
        elif d.kind in ("dec_type", "dec_p_type"):
            self.type_decls.append((d, origin))
        elif self.on_directive is not None:
            self.on_directive(d)

    # -- resolution -----------------------------------------------------------

    def expand(self, store, call):
        key = (call.name, len(call.args))
        defs = self.db.get(key)
        if not defs:
            raise UnknownClauseError(
                f"unknown predicate: {call.name}/{len(call.args)}")
        out = []
        for d in defs:
            st = store.clone()
            names = set()
            for p in d.params:
                term_vars(p, names)
            if d.body is not None:
                names |= set(goal_vars(d.body))
            ren = Subst({n: st.fresh("N") for n in names})
            items = [eq(ren.resolve(p), a)
                     for p, a in zip(d.params, call.args)]
            if d.body is not None:
                items.append(map_goal_terms(d.body, ren.resolve))
            if not items:
                items.append(Constraint("true"))
            out.append((st, Conj(tuple(items))))
        return out
