"""Locally-nameless raw syntax: atoms, capture sets, types and MNF terms.

Types use a single inductive family. Whether a type is *pure* (no capture
set at the root) or a *type* (pure, or a capture set over a pure type) is a
predicate over that family rather than a separate grammar.

Bound variables come in two independent index spaces. Term indices are
introduced by ``Arrow`` results, ``Abs`` bodies and ``Let`` bodies; type
indices by ``TAll`` results and ``TAbs`` bodies.
"""

from __future__ import annotations

import enum
from dataclasses import dataclass, field
from typing import Iterable, Union


class Kind(enum.Enum):
    TERM = "term"
    TYPE = "type"


@dataclass(frozen=True)
class Atom:
    """A free name. Equality and hashing use ``id`` only."""

    id: int
    kind: Kind = field(compare=False)
    name: str = field(default="", compare=False)

    def __str__(self) -> str:
        stem = self.name or ("x" if self.kind is Kind.TERM else "X")
        return f"{stem}{self.id}"


def term_atom(id: int, name: str = "") -> Atom:
    return Atom(id, Kind.TERM, name)


def type_atom(id: int, name: str = "") -> Atom:
    return Atom(id, Kind.TYPE, name)


@dataclass(frozen=True)
class CaptureSet:
    frees: frozenset = frozenset()
    bounds: frozenset = frozenset()
    universal: bool = False

    def __post_init__(self) -> None:
        for a in self.frees:
            if not isinstance(a, Atom) or a.kind is not Kind.TERM:
                raise TypeError(f"capture sets hold term atoms only, got {a!r}")

    @classmethod
    def of(cls, *atoms: Atom, bounds: Iterable[int] = (), universal: bool = False) -> "CaptureSet":
        return cls(frozenset(atoms), frozenset(bounds), universal)

    @property
    def is_closed(self) -> bool:
        return not self.bounds

    @property
    def is_empty(self) -> bool:
        return not (self.frees or self.bounds or self.universal)

    def union(self, other: "CaptureSet") -> "CaptureSet":
        return CaptureSet(
            self.frees | other.frees,
            self.bounds | other.bounds,
            self.universal or other.universal,
        )

    def without(self, atom: Atom) -> "CaptureSet":
        return CaptureSet(self.frees - {atom}, self.bounds, self.universal)

    def __contains__(self, atom: Atom) -> bool:
        return atom in self.frees

    def __str__(self) -> str:
        elems = sorted(str(a) for a in self.frees)
        elems += [f"#{i}" for i in sorted(self.bounds)]
        if self.universal:
            elems.append("*")
        return "{" + ", ".join(elems) + "}"


EMPTY = CaptureSet()
UNIVERSAL = CaptureSet(universal=True)


# -- types ------------------------------------------------------------------


class TypeExpr:
    __slots__ = ()


@dataclass(frozen=True)
class TVarBound(TypeExpr):
    index: int


@dataclass(frozen=True)
class TVarFree(TypeExpr):
    atom: Atom

    def __post_init__(self) -> None:
        if self.atom.kind is not Kind.TYPE:
            raise TypeError(f"type variable needs a type atom, got {self.atom!r}")


@dataclass(frozen=True)
class Top(TypeExpr):
    pass


@dataclass(frozen=True)
class Box(TypeExpr):
    type: TypeExpr


@dataclass(frozen=True)
class Capt(TypeExpr):
    captures: CaptureSet
    pure: TypeExpr


@dataclass(frozen=True)
class Arrow(TypeExpr):
    """Dependent function type; ``result`` binds term index 0."""

    param: TypeExpr
    result: TypeExpr


@dataclass(frozen=True)
class TAll(TypeExpr):
    """Bounded universal type; ``result`` binds type index 0."""

    bound: TypeExpr
    result: TypeExpr


TOP = Top()


# -- terms ------------------------------------------------------------------


class TermExpr:
    __slots__ = ()


@dataclass(frozen=True)
class VarBound(TermExpr):
    index: int


@dataclass(frozen=True)
class VarFree(TermExpr):
    atom: Atom

    def __post_init__(self) -> None:
        if self.atom.kind is not Kind.TERM:
            raise TypeError(f"term variable needs a term atom, got {self.atom!r}")


Var = Union[VarBound, VarFree]


def _need_var(e: object, where: str) -> None:
    if not isinstance(e, (VarBound, VarFree)):
        raise TypeError(f"{where} operand must be a variable (MNF), got {type(e).__name__}")


@dataclass(frozen=True)
class Abs(TermExpr):
    param: TypeExpr
    body: TermExpr


@dataclass(frozen=True)
class TAbs(TermExpr):
    bound: TypeExpr
    body: TermExpr


@dataclass(frozen=True)
class BoxVal(TermExpr):
    var: TermExpr

    def __post_init__(self) -> None:
        _need_var(self.var, "box")


@dataclass(frozen=True)
class App(TermExpr):
    fn: TermExpr
    arg: TermExpr

    def __post_init__(self) -> None:
        _need_var(self.fn, "application")
        _need_var(self.arg, "application")


@dataclass(frozen=True)
class TApp(TermExpr):
    fn: TermExpr
    type: TypeExpr

    def __post_init__(self) -> None:
        _need_var(self.fn, "type application")


@dataclass(frozen=True)
class Unbox(TermExpr):
    captures: CaptureSet
    var: TermExpr

    def __post_init__(self) -> None:
        _need_var(self.var, "unbox")


@dataclass(frozen=True)
class Let(TermExpr):
    """``let e1 in e2``; ``body`` binds term index 0."""

    bound: TermExpr
    body: TermExpr


# -- classification ----------------------------------------------------------


def check_pure(t: TypeExpr) -> bool:
    return _pure(t, 0, 0)


def check_type(t: TypeExpr) -> bool:
    return _type(t, 0, 0)


def _capt(c: CaptureSet, tm: int) -> bool:
    return all(i < tm for i in c.bounds)


def _type(t: TypeExpr, tm: int, ty: int) -> bool:
    if isinstance(t, Capt):
        return _capt(t.captures, tm) and _pure(t.pure, tm, ty)
    return _pure(t, tm, ty)


# Opening a binder with a fresh atom and checking the result is equivalent to
# counting enclosing binders: an index is closed iff it points at one of them.
def _pure(t: TypeExpr, tm: int, ty: int) -> bool:
    match t:
        case TVarBound(index=i):
            return i < ty
        case TVarFree() | Top():
            return True
        case Box(type=inner):
            return _type(inner, tm, ty)
        case Arrow(param=s, result=r):
            return _type(s, tm, ty) and _type(r, tm + 1, ty)
        case TAll(bound=b, result=r):
            return _pure(b, tm, ty) and _type(r, tm, ty + 1)
    return False


def is_value(e: TermExpr) -> bool:
    return isinstance(e, (Abs, TAbs, BoxVal))


def is_var(e: TermExpr) -> bool:
    return isinstance(e, (VarBound, VarFree))


def split_capt(t: TypeExpr) -> tuple[CaptureSet, TypeExpr]:
    """View any type as ``(C, R)``; a pure type gets the empty capture set."""
    if isinstance(t, Capt):
        return t.captures, t.pure
    return EMPTY, t


# -- free atoms ---------------------------------------------------------------


def free_atoms(x: TermExpr | TypeExpr | CaptureSet) -> frozenset:
    out: set[Atom] = set()
    _collect(x, out)
    return frozenset(out)


def _collect(x: object, out: set) -> None:
    match x:
        case CaptureSet(frees=fs):
            out.update(fs)
        case TVarFree(atom=a) | VarFree(atom=a):
            out.add(a)
        case TVarBound() | Top() | VarBound():
            pass
        case Box(type=t):
            _collect(t, out)
        case Capt(captures=c, pure=r):
            out.update(c.frees)
            _collect(r, out)
        case Arrow(param=a, result=b) | TAll(bound=a, result=b):
            _collect(a, out)
            _collect(b, out)
        case Abs(param=a, body=b) | TAbs(bound=a, body=b) | App(fn=a, arg=b) | Let(bound=a, body=b):
            _collect(a, out)
            _collect(b, out)
        case BoxVal(var=v):
            _collect(v, out)
        case TApp(fn=f, type=t):
            _collect(f, out)
            _collect(t, out)
        case Unbox(captures=c, var=v):
            out.update(c.frees)
            _collect(v, out)
        case _:
            raise TypeError(f"not a syntax node: {x!r}")


def max_atom_id(*xs: TermExpr | TypeExpr | CaptureSet) -> int:
    best = -1
    for x in xs:
        for a in free_atoms(x):
            if a.id > best:
                best = a.id
    return best


def size(x: TermExpr | TypeExpr) -> int:
    """Number of syntax nodes; used by shrinking and reporting."""
    match x:
        case Box(type=t):
            return 1 + size(t)
        case Capt(pure=r):
            return 1 + size(r)
        case Arrow(param=a, result=b) | TAll(bound=a, result=b):
            return 1 + size(a) + size(b)
        case Abs(param=a, body=b) | TAbs(bound=a, body=b):
            return 1 + size(a) + size(b)
        case Let(bound=a, body=b):
            return 1 + size(a) + size(b)
        case TApp(type=t):
            return 2 + size(t)
        case App():
            return 3
        case BoxVal() | Unbox():
            return 2
    return 1
