"""Typing environments and well-formedness of types."""

from __future__ import annotations

from dataclasses import dataclass
from typing import Iterable, Iterator, Union

from .binding import open_term_var_in_type, open_type_var_in_type
from .syntax import (
    Arrow,
    Atom,
    Box,
    Capt,
    CaptureSet,
    Kind,
    TAll,
    Top,
    TVarFree,
    TypeExpr,
    VarFree,
    check_pure,
    check_type,
    max_atom_id,
)


@dataclass(frozen=True)
class TermBind:
    atom: Atom
    type: TypeExpr

    def __post_init__(self) -> None:
        if self.atom.kind is not Kind.TERM:
            raise TypeError(f"term binding needs a term atom, got {self.atom!r}")


@dataclass(frozen=True)
class TypeBind:
    atom: Atom
    bound: TypeExpr

    def __post_init__(self) -> None:
        if self.atom.kind is not Kind.TYPE:
            raise TypeError(f"type binding needs a type atom, got {self.atom!r}")


Binding = Union[TermBind, TypeBind]


class DuplicateBinding(ValueError):
    pass


class Env:
    """Persistent telescope of bindings, oldest first.

    ``extend`` returns a new environment; atoms may be bound at most once.
    """

    __slots__ = ("bindings", "_index", "max_id")

    def __init__(self, bindings: Iterable[Binding] = ()):
        self.bindings: tuple = ()
        self._index: dict = {}
        self.max_id = -1
        for b in bindings:
            self._push(b)

    def _push(self, b: Binding) -> None:
        if b.atom in self._index:
            raise DuplicateBinding(f"{b.atom} is already bound")
        self.bindings += (b,)
        self._index[b.atom] = b
        ty = b.type if isinstance(b, TermBind) else b.bound
        self.max_id = max(self.max_id, b.atom.id, max_atom_id(ty))

    def extend(self, b: Binding) -> "Env":
        new = Env.__new__(Env)
        new.bindings = self.bindings
        new._index = dict(self._index)
        new.max_id = self.max_id
        new._push(b)
        return new

    def bind_term(self, x: Atom, t: TypeExpr) -> "Env":
        return self.extend(TermBind(x, t))

    def bind_type(self, a: Atom, bound: TypeExpr) -> "Env":
        return self.extend(TypeBind(a, bound))

    def __add__(self, other: "Env") -> "Env":
        return Env(self.bindings + other.bindings)

    def term_type(self, x: Atom) -> TypeExpr | None:
        b = self._index.get(x)
        return b.type if isinstance(b, TermBind) else None

    def type_bound(self, a: Atom) -> TypeExpr | None:
        b = self._index.get(a)
        return b.bound if isinstance(b, TypeBind) else None

    def domain(self) -> frozenset:
        return frozenset(self._index)

    def term_atoms(self) -> list[Atom]:
        return [b.atom for b in self.bindings if isinstance(b, TermBind)]

    def type_atoms(self) -> list[Atom]:
        return [b.atom for b in self.bindings if isinstance(b, TypeBind)]

    def prefix(self, n: int) -> "Env":
        return Env(self.bindings[:n])

    def fresh(self, kind: Kind, *avoid, name: str = "") -> Atom:
        """An atom not bound here and not free in any of ``avoid``."""
        top = max(self.max_id, max_atom_id(*avoid)) if avoid else self.max_id
        return Atom(top + 1, kind, name)

    def __contains__(self, a: Atom) -> bool:
        return a in self._index

    def __iter__(self) -> Iterator[Binding]:
        return iter(self.bindings)

    def __len__(self) -> int:
        return len(self.bindings)

    def __eq__(self, other: object) -> bool:
        return isinstance(other, Env) and self.bindings == other.bindings

    def __hash__(self) -> int:
        return hash(self.bindings)

    def __repr__(self) -> str:
        parts = []
        for b in self.bindings:
            if isinstance(b, TermBind):
                parts.append(f"{b.atom}: {b.type!r}")
            else:
                parts.append(f"{b.atom} <: {b.bound!r}")
        return "Env[" + ", ".join(parts) + "]"


def domain(g: Env) -> frozenset:
    return g.domain()


def wf_capture_set(g: Env, c: CaptureSet) -> bool:
    return c.is_closed and all(g.term_type(x) is not None for x in c.frees)


def wf_type(g: Env, t: TypeExpr) -> bool:
    match t:
        case Capt(captures=c, pure=r):
            return wf_capture_set(g, c) and check_pure(r) and wf_type(g, r)
        case Top():
            return True
        case TVarFree(atom=a):
            return g.type_bound(a) is not None
        case Box(type=inner):
            return wf_type(g, inner)
        case Arrow(param=s, result=r):
            if not wf_type(g, s):
                return False
            x = g.fresh(Kind.TERM, r)
            # the parameter is in scope for the result, so {x} can be well formed
            return wf_type(g.bind_term(x, s), open_term_var_in_type(r, 0, x))
        case TAll(bound=b, result=r):
            if not (check_pure(b) and wf_type(g, b)):
                return False
            a = g.fresh(Kind.TYPE, r)
            return wf_type(g.bind_type(a, b), open_type_var_in_type(r, 0, TVarFree(a)))
    return False


def wf_env(g: Env) -> bool:
    seen = Env()
    for b in g:
        if b.atom in seen:
            return False
        if isinstance(b, TermBind):
            ok = check_type(b.type) and wf_type(seen, b.type)
        else:
            ok = check_pure(b.bound) and wf_type(seen, b.bound)
        if not ok:
            return False
        seen = seen.extend(b)
    return True


def lookup_var(g: Env, v) -> TypeExpr | None:
    if isinstance(v, VarFree):
        return g.term_type(v.atom)
    return None
