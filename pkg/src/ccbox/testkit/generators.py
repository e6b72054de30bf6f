"""Rule-directed generators for environments, well-formed types and
well-typed programs.

Everything draws from a :class:`~ccbox.testkit.choices.ChoiceSource`, so the
same choices always rebuild the same case.
"""

from __future__ import annotations

from collections import Counter
from dataclasses import dataclass

from ..binding import (
    close_term_var_in_term,
    close_term_var_in_type,
    close_type_var_in_term,
    close_type_var_in_type,
    open_term_var_in_type,
    open_type_var_in_type,
)
from ..subtyping import expose, subcapture, subtype
from ..syntax import (
    EMPTY,
    TOP,
    Abs,
    App,
    Arrow,
    Atom,
    Box,
    BoxVal,
    Capt,
    CaptureSet,
    Kind,
    Let,
    TAbs,
    TAll,
    TApp,
    TermExpr,
    Top,
    TVarFree,
    TypeExpr,
    Unbox,
    VarBound,
    VarFree,
    split_capt,
)
from ..typecheck import TypingError, check_against, infer_type
from ..wellformed import Env

WF_RULES = ("TOP-WF", "TVAR-WF", "CAPT-WF", "BOX-WF", "FUN-WF", "TFUN-WF")


@dataclass(frozen=True)
class GenConfig:
    seed: int = 0
    max_env_depth: int = 4
    max_type_depth: int = 4
    max_term_depth: int = 6
    count: int = 500


IDENTITY = Abs(Capt(EMPTY, TOP), VarBound(0))


class Gen:
    def __init__(self, src, cfg: GenConfig = GenConfig(), first_id: int = 0):
        self.src = src
        self.cfg = cfg
        self._next = first_id

    def draw(self, n: int) -> int:
        return self.src.draw(n) if n > 1 else 0

    def pick(self, seq):
        return seq[self.draw(len(seq))]

    def chance(self, num: int, den: int) -> bool:
        """True with probability num/den; the simplest (zero) choice is False."""
        return self.draw(den) >= den - num

    def fresh(self, kind: Kind, name: str = "") -> Atom:
        a = Atom(self._next, kind, name)
        self._next += 1
        return a

    def reserve(self, g: Env) -> None:
        self._next = max(self._next, g.max_id + 1)


# -- types ---------------------------------------------------------------------


class TypeGen(Gen):
    """Generates types by picking a well-formedness rule and recursing."""

    def __init__(self, src, cfg: GenConfig = GenConfig(), first_id: int = 0):
        super().__init__(src, cfg, first_id)
        self.rule_counts: Counter = Counter()

    def captures(self, g: Env, universal_ok: bool = True) -> CaptureSet:
        atoms = [x for x in g.term_atoms() if self.chance(1, 2)]
        universal = universal_ok and self.chance(1, 5)
        return CaptureSet(frozenset(atoms), frozenset(), universal)

    def wf_type(self, g: Env, depth: int | None = None) -> TypeExpr:
        """A type with ``wf_type(g, t)``; may be capturing or pure."""
        self.reserve(g)
        depth = self.cfg.max_type_depth if depth is None else depth
        if depth > 0 and self.chance(1, 2):
            self.rule_counts["CAPT-WF"] += 1
            return Capt(self.captures(g), self.pure(g, depth - 1))
        return self.pure(g, depth)

    def pure(self, g: Env, depth: int | None = None) -> TypeExpr:
        self.reserve(g)
        depth = self.cfg.max_type_depth if depth is None else depth
        tvars = g.type_atoms()
        rules = ["TOP-WF"] + (["TVAR-WF"] if tvars else [])
        if depth > 0:
            rules += ["BOX-WF", "FUN-WF", "TFUN-WF"]
        rule = self.pick(rules)
        self.rule_counts[rule] += 1
        if rule == "TOP-WF":
            return TOP
        if rule == "TVAR-WF":
            return TVarFree(self.pick(tvars))
        if rule == "BOX-WF":
            self.rule_counts["CAPT-WF"] += 1
            return Box(Capt(self.captures(g), self.pure(g, depth - 1)))
        if rule == "FUN-WF":
            s = self.wf_type(g, depth - 1)
            x = self.fresh(Kind.TERM)
            t = self.wf_type(g.bind_term(x, s), depth - 1)
            return Arrow(s, close_term_var_in_type(t, 0, x))
        b = self.pure(g, depth - 1)
        a = self.fresh(Kind.TYPE)
        t = self.wf_type(g.bind_type(a, b), depth - 1)
        return TAll(b, close_type_var_in_type(t, 0, a))

    def env(self, depth: int | None = None) -> Env:
        depth = self.cfg.max_env_depth if depth is None else depth
        g = Env()
        for _ in range(self.draw(depth + 1)):
            if self.chance(1, 3):
                g = g.bind_type(self.fresh(Kind.TYPE), self.pure(g, 1))
            else:
                g = g.bind_term(self.fresh(Kind.TERM), self.wf_type(g, 2))
        return g

    # related types, for transitivity

    def super_captures(self, g: Env, c: CaptureSet) -> CaptureSet:
        frees = set(c.frees)
        universal = c.universal
        if frees and self.chance(1, 3):
            # replace a variable by its own capture set
            x = self.pick(sorted(frees, key=lambda a: a.id))
            own, _ = split_capt(g.term_type(x))
            frees.discard(x)
            frees |= own.frees
            universal = universal or own.universal
        frees |= {x for x in g.term_atoms() if self.chance(1, 4)}
        universal = universal or self.chance(1, 6)
        return CaptureSet(frozenset(frees), frozenset(), universal)

    def sub_captures(self, g: Env, c: CaptureSet) -> CaptureSet:
        frees = {x for x in c.frees if not self.chance(1, 3)}
        universal = c.universal and not self.chance(1, 3)
        # variables whose own capture set is already covered
        for x in g.term_atoms():
            if x not in frees and self.chance(1, 4):
                own, _ = split_capt(g.term_type(x))
                if subcapture(g, own, c):
                    frees.add(x)
        return CaptureSet(frozenset(frees), frozenset(), universal)

    def supertype(self, g: Env, t: TypeExpr) -> TypeExpr:
        self.reserve(g)
        c, r = split_capt(t)
        if isinstance(t, Capt) or self.chance(1, 2):
            return Capt(self.super_captures(g, c), self.super_pure(g, r))
        return self.super_pure(g, r)

    def subtype(self, g: Env, t: TypeExpr) -> TypeExpr:
        self.reserve(g)
        c, r = split_capt(t)
        c2 = self.sub_captures(g, c)
        r2 = self.sub_pure(g, r)
        if c2.is_empty and self.chance(1, 2):
            return r2
        return Capt(c2, r2)

    def super_pure(self, g: Env, r: TypeExpr) -> TypeExpr:
        if self.chance(1, 5):
            return TOP
        match r:
            case TVarFree(atom=a):
                if self.chance(1, 2):
                    return self.super_pure(g, g.type_bound(a))
                return r
            case Box(type=t):
                return Box(self.supertype(g, t))
            case Arrow(param=s, result=u):
                s2 = self.subtype(g, s)
                x = self.fresh(Kind.TERM)
                u2 = self.supertype(g.bind_term(x, s2), open_term_var_in_type(u, 0, x))
                return Arrow(s2, close_term_var_in_type(u2, 0, x))
            case TAll(bound=b, result=u):
                b2 = self.sub_pure(g, b)
                a = self.fresh(Kind.TYPE)
                u2 = self.supertype(g.bind_type(a, b2), open_type_var_in_type(u, 0, TVarFree(a)))
                return TAll(b2, close_type_var_in_type(u2, 0, a))
        return r

    def sub_pure(self, g: Env, r: TypeExpr) -> TypeExpr:
        match r:
            case Top():
                return self.pure(g, 2)
            case TVarFree(atom=a):
                below = [y for y in g.type_atoms() if _reaches(g, y, a)]
                return TVarFree(self.pick(below))
            case Box(type=t):
                return Box(self.subtype(g, t))
            case Arrow(param=s, result=u):
                s2 = self.supertype(g, s)
                x = self.fresh(Kind.TERM)
                u2 = self.subtype(g.bind_term(x, s), open_term_var_in_type(u, 0, x))
                return Arrow(s2, close_term_var_in_type(u2, 0, x))
            case TAll(bound=b, result=u):
                b2 = self.super_pure(g, b)
                a = self.fresh(Kind.TYPE)
                u2 = self.subtype(g.bind_type(a, b), open_type_var_in_type(u, 0, TVarFree(a)))
                return TAll(b2, close_type_var_in_type(u2, 0, a))
        return r


def _reaches(g: Env, y: Atom, target: Atom) -> bool:
    """Whether type variable ``y`` is bounded, transitively, by ``target``."""
    seen = set()
    while y not in seen:
        if y == target:
            return True
        seen.add(y)
        b = g.type_bound(y)
        if not isinstance(b, TVarFree):
            return False
        y = b.atom
    return False


# -- programs ------------------------------------------------------------------


class ProgramGen(Gen):
    """Builds closed well-typed programs, keeping each piece typeable.

    Elimination forms are built around operands of the shape they need; when
    none is in scope one is let-bound first, so the elimination also runs.
    """

    ANNOTATION_DEPTH = 2

    def __init__(self, src, cfg: GenConfig = GenConfig(), first_id: int = 0):
        super().__init__(src, cfg, first_id)
        self.types = TypeGen(src, cfg)

    def fresh(self, kind: Kind, name: str = "") -> Atom:
        a = super().fresh(kind, name)
        self.types._next = self._next
        return a

    def _sync(self) -> None:
        self._next = max(self._next, self.types._next)

    def annotation(self, g: Env) -> TypeExpr:
        self.types._next = self._next
        t = self.types.wf_type(g, self.ANNOTATION_DEPTH)
        self._sync()
        return t

    def annotation_pure(self, g: Env) -> TypeExpr:
        self.types._next = self._next
        t = self.types.pure(g, 1)
        self._sync()
        return t

    def program(self, depth: int | None = None) -> TermExpr:
        depth = self.cfg.max_term_depth if depth is None else depth
        return self.expr(Env(), depth)

    # helpers

    def _typed_vars(self, g: Env):
        out = []
        for x in g.term_atoms():
            _, r = split_capt(g.term_type(x))
            out.append((x, r, expose(g, r)))
        return out

    def let_(self, g: Env, e1: TermExpr, body_fn) -> TermExpr | None:
        t1 = infer_type(g, e1)
        x = self.fresh(Kind.TERM)
        body = body_fn(g.bind_term(x, t1), x)
        if body is None:
            return None
        e = Let(e1, close_term_var_in_term(body, 0, x))
        try:
            infer_type(g, e)
        except TypingError:
            return Let(e1, VarBound(0))
        return e

    # forms

    def expr(self, g: Env, depth: int) -> TermExpr:
        self.reserve(g)
        if depth <= 0:
            return self.leaf(g)
        form = self.pick(("leaf", "value", "let", "app", "tapp", "unbox", "let"))
        e = None
        if form == "value":
            e = self.value(g, depth)
        elif form == "let":
            e = self.let_(g, self.expr(g, depth - 1), lambda g2, _x: self.expr(g2, depth - 1))
        elif form == "app":
            e = self.app(g, depth)
        elif form == "tapp":
            e = self.tapp(g, depth)
        elif form == "unbox":
            e = self.unbox(g, depth)
        return e if e is not None else self.leaf(g)

    def leaf(self, g: Env) -> TermExpr:
        xs = g.term_atoms()
        if xs and self.chance(2, 3):
            return VarFree(self.pick(xs))
        return IDENTITY

    def value(self, g: Env, depth: int) -> TermExpr:
        kind = self.draw(3)
        if kind == 0:
            return self.abs_value(g, depth)
        if kind == 1:
            return self.tabs_value(g, depth)
        xs = g.term_atoms()
        return BoxVal(VarFree(self.pick(xs))) if xs else self.abs_value(g, depth)

    def abs_value(self, g: Env, depth: int) -> TermExpr:
        s = self.annotation(g)
        x = self.fresh(Kind.TERM)
        body = self.expr(g.bind_term(x, s), depth - 1)
        return Abs(s, close_term_var_in_term(body, 0, x))

    def tabs_value(self, g: Env, depth: int) -> TermExpr:
        b = self.annotation_pure(g)
        a = self.fresh(Kind.TYPE)
        body = self.expr(g.bind_type(a, b), depth - 1)
        return TAbs(b, close_type_var_in_term(body, 0, a))

    def app(self, g: Env, depth: int) -> TermExpr | None:
        fns = [x for x, _, head in self._typed_vars(g) if isinstance(head, Arrow)]
        if fns and self.chance(1, 2):
            return self._apply(g, self.pick(fns), depth)
        return self.let_(g, self.abs_value(g, depth - 1), lambda g2, f: self._apply(g2, f, depth - 1))

    def _apply(self, g: Env, f: Atom, depth: int) -> TermExpr | None:
        _, r = split_capt(g.term_type(f))
        param = expose(g, r).param
        args = [y for y, ry, _ in self._typed_vars(g) if subtype(g, Capt(CaptureSet.of(y), ry), param)]
        if args and self.chance(2, 3):
            return App(VarFree(f), VarFree(self.pick(args)))
        arg = self.term_of(g, param, depth - 1)
        if arg is None:
            return None
        return self.let_(g, arg, lambda _g2, y: App(VarFree(f), VarFree(y)))

    def tapp(self, g: Env, depth: int) -> TermExpr | None:
        tfs = [x for x, _, head in self._typed_vars(g) if isinstance(head, TAll)]
        if tfs and self.chance(1, 2):
            return self._instantiate(g, self.pick(tfs))
        return self.let_(g, self.tabs_value(g, depth - 1), lambda g2, f: self._instantiate(g2, f))

    def _instantiate(self, g: Env, f: Atom) -> TermExpr:
        _, r = split_capt(g.term_type(f))
        bound = expose(g, r).bound
        candidates = [bound]
        for y, ry, _ in self._typed_vars(g):
            boxed = Box(Capt(CaptureSet.of(y), ry))
            if subtype(g, boxed, bound):
                candidates.append(boxed)
        self.types._next = self._next
        lower = self.types.sub_pure(g, bound)
        self._sync()
        if subtype(g, lower, bound):
            candidates.append(lower)
        return TApp(VarFree(f), self.pick(candidates))

    def unbox(self, g: Env, depth: int) -> TermExpr | None:
        boxes = []
        for x, _, head in self._typed_vars(g):
            if isinstance(head, Box) and not split_capt(head.type)[0].universal:
                boxes.append(x)
        if boxes and self.chance(1, 2):
            return self._open(g, self.pick(boxes))
        xs = g.term_atoms()
        if xs and self.chance(1, 2):
            y = self.pick(xs)
            return self.let_(g, BoxVal(VarFree(y)), lambda g2, b: self._open(g2, b))
        return self.let_(
            g,
            self.value(g, depth - 1),
            lambda g2, y: self.let_(g2, BoxVal(VarFree(y)), lambda g3, b: self._open(g3, b)),
        )

    def _open(self, g: Env, b: Atom) -> TermExpr:
        _, r = split_capt(g.term_type(b))
        inner, _ = split_capt(expose(g, r).type)
        extra = {x for x in g.term_atoms() if self.chance(1, 4)}
        return Unbox(CaptureSet(inner.frees | extra), VarFree(b))

    # backward generation towards a goal type

    def term_of(self, g: Env, goal: TypeExpr, depth: int) -> TermExpr | None:
        """A term whose inferred type is a subtype of ``goal``, or None."""
        self.reserve(g)
        fits = [
            y for y, ry, _ in self._typed_vars(g) if subtype(g, Capt(CaptureSet.of(y), ry), goal)
        ]
        if fits and self.chance(1, 2):
            return VarFree(self.pick(fits))
        if depth > 1 and self.chance(1, 4):
            e = self.let_(g, self.expr(g, depth - 1), lambda g2, _x: self.term_of(g2, goal, depth - 1))
        else:
            e = self.value_of(g, goal, depth)
        if e is None or not check_against(g, e, goal):
            return VarFree(fits[0]) if fits else None
        return e

    def value_of(self, g: Env, goal: TypeExpr, depth: int) -> TermExpr | None:
        _, r = split_capt(goal)
        r = expose(g, r)
        match r:
            case Top():
                if depth > 0 and self.chance(1, 2):
                    return self.value(g, depth - 1)
                return IDENTITY
            case Arrow(param=s, result=u):
                x = self.fresh(Kind.TERM)
                body = self.term_of(g.bind_term(x, s), open_term_var_in_type(u, 0, x), depth - 1)
                return None if body is None else Abs(s, close_term_var_in_term(body, 0, x))
            case TAll(bound=b, result=u):
                a = self.fresh(Kind.TYPE)
                body = self.term_of(g.bind_type(a, b), open_type_var_in_type(u, 0, TVarFree(a)), depth - 1)
                return None if body is None else TAbs(b, close_type_var_in_term(body, 0, a))
            case Box(type=inner):
                content = self.term_of(g, inner, depth - 1)
                if content is None:
                    return None
                if isinstance(content, VarFree):
                    return BoxVal(content)
                return self.let_(g, content, lambda _g2, y: BoxVal(VarFree(y)))
        return None


def gen_wf_type(cfg: GenConfig, g: Env, src) -> TypeExpr:
    return TypeGen(src, cfg).wf_type(g)


def gen_well_typed_program(cfg: GenConfig, src) -> TermExpr:
    return ProgramGen(src, cfg).program()
