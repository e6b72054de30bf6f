"""Pretty-printer producing text that ``parse`` reads back to the same syntax."""

from __future__ import annotations

import itertools

from ..syntax import (
    Abs,
    App,
    Arrow,
    Box,
    BoxVal,
    Capt,
    CaptureSet,
    Let,
    TAbs,
    TAll,
    TApp,
    TermExpr,
    Top,
    TVarBound,
    TVarFree,
    TypeExpr,
    Unbox,
    VarBound,
    VarFree,
    free_atoms,
)

_TERM_POOL = ("x", "y", "z", "w", "u", "v")
_TYPE_POOL = ("X", "Y", "Z", "W", "U", "V")


def _candidates(pool):
    yield from pool
    for n in itertools.count(1):
        for stem in pool:
            yield f"{stem}{n}"


class Printer:
    def __init__(self, *roots):
        self.free_names = {a: str(a) for r in roots for a in free_atoms(r)}
        self.taken = set(self.free_names.values())

    def _pick(self, pool, scope) -> str:
        for name in _candidates(pool):
            if name not in scope and name not in self.taken:
                return name

    def _bound(self, scope, i: int) -> str:
        if i < len(scope):
            return scope[-1 - i]
        return f"?{i}"

    # -- types --

    def captures(self, c: CaptureSet, terms: list) -> str:
        elems = sorted({self.free_names[a] for a in c.frees} | {self._bound(terms, i) for i in c.bounds})
        if c.universal:
            elems.append("*")
        return "{" + ", ".join(elems) + "}"

    def type(self, t: TypeExpr, terms: list, types: list) -> str:
        match t:
            case Top():
                return "Top"
            case TVarBound(index=i):
                return self._bound(types, i)
            case TVarFree(atom=a):
                return self.free_names[a]
            case Box(type=inner):
                return "box " + self.type(inner, terms, types)
            case Capt(captures=c, pure=r):
                return self.captures(c, terms) + " " + self.type(r, terms, types)
            case Arrow(param=s, result=r):
                x = self._pick(_TERM_POOL, terms)
                return f"({x} : {self.type(s, terms, types)}) -> {self.type(r, terms + [x], types)}"
            case TAll(bound=b, result=r):
                a = self._pick(_TYPE_POOL, types)
                return f"[{a} <: {self.type(b, terms, types)}] -> {self.type(r, terms, types + [a])}"
        raise TypeError(f"not a type: {t!r}")

    # -- terms --

    def var(self, v, terms: list) -> str:
        if isinstance(v, VarBound):
            return self._bound(terms, v.index)
        return self.free_names[v.atom]

    def term(self, e: TermExpr, terms: list, types: list) -> str:
        match e:
            case VarBound() | VarFree():
                return self.var(e, terms)
            case Abs(param=t, body=b):
                x = self._pick(_TERM_POOL, terms)
                return f"fun ({x} : {self.type(t, terms, types)}) => {self.term(b, terms + [x], types)}"
            case TAbs(bound=t, body=b):
                a = self._pick(_TYPE_POOL, types)
                return f"tfun [{a} <: {self.type(t, terms, types)}] => {self.term(b, terms, types + [a])}"
            case BoxVal(var=v):
                return "box " + self.var(v, terms)
            case App(fn=f, arg=a):
                return f"{self.var(f, terms)} {self.var(a, terms)}"
            case TApp(fn=f, type=t):
                return f"{self.var(f, terms)}[{self.type(t, terms, types)}]"
            case Unbox(captures=c, var=v):
                return f"{self.captures(c, terms)} unbox {self.var(v, terms)}"
            case Let(bound=a, body=b):
                x = self._pick(_TERM_POOL, terms)
                return f"let {x} = {self.term(a, terms, types)} in {self.term(b, terms + [x], types)}"
        raise TypeError(f"not a term: {e!r}")


def show_type(t: TypeExpr) -> str:
    return Printer(t).type(t, [], [])


def show_term(e: TermExpr) -> str:
    return Printer(e).term(e, [], [])


def pretty(x: TermExpr | TypeExpr) -> str:
    return show_type(x) if isinstance(x, TypeExpr) else show_term(x)


def show_state(s) -> str:
    """One-line rendering of a machine state ``⟨store | stack | focus⟩``."""
    roots = [s.focus] + [f.body for f in s.stack] + [v for _, v in s.store]
    p = Printer(*roots)
    for x, _ in s.store:
        p.free_names[x] = str(x)
        p.taken.add(str(x))
    store = ", ".join(f"{p.free_names[x]} = {p.term(v, [], [])}" for x, v in s.store)
    frames = []
    for f in s.stack:
        x = p._pick(_TERM_POOL, [])
        frames.append(f"({x} => {p.term(f.body, [x], [])})")
    stack = " :: ".join(frames + ["[]"])
    return f"⟨{store} | {stack} | {p.term(s.focus, [], [])}⟩"
