"""Abstract machine over states ``<store | stack | focus>``.

The store holds value bindings and only ever grows; the stack holds let
bodies waiting for the value of the focused expression (each frame binds
term index 0). Fresh store names come from an :class:`AtomSupply` owned by
the run.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass
from typing import Iterator

from .binding import open_term_var_in_term, open_type_var_in_term
from .subtyping import subtype
from .syntax import (
    Abs,
    App,
    Atom,
    BoxVal,
    Kind,
    Let,
    TAbs,
    TApp,
    TermExpr,
    Unbox,
    VarFree,
    check_pure,
    free_atoms,
    is_value,
)
from .typecheck import avoid_binding, infer_type
from .wellformed import Env

RULES = ("APP", "TAPP", "OPEN", "RENAME", "LIFT", "LET")


class AtomSupply:
    """Monotone counter handing out fresh term atoms."""

    def __init__(self, start: int = 0, name: str = "x"):
        self._ids = itertools.count(start)
        self.name = name

    def fresh(self) -> Atom:
        return Atom(next(self._ids), Kind.TERM, self.name)


@dataclass(frozen=True)
class Store:
    bindings: tuple = ()

    def __post_init__(self) -> None:
        object.__setattr__(self, "_index", dict(self.bindings))

    def lookup(self, x: Atom) -> TermExpr | None:
        return self._index.get(x)

    def add(self, x: Atom, v: TermExpr) -> "Store":
        if x in self._index:
            raise ValueError(f"{x} is already in the store")
        return Store(self.bindings + ((x, v),))

    def domain(self) -> frozenset:
        return frozenset(self._index)

    def __len__(self) -> int:
        return len(self.bindings)

    def __iter__(self) -> Iterator:
        return iter(self.bindings)


@dataclass(frozen=True)
class Frame:
    body: TermExpr


@dataclass(frozen=True)
class MachineState:
    store: Store
    stack: tuple  # of Frame, innermost first
    focus: TermExpr

    @classmethod
    def initial(cls, program: TermExpr) -> "MachineState":
        return cls(Store(), (), program)


@dataclass(frozen=True)
class Stepped:
    next: MachineState
    rule: str


@dataclass(frozen=True)
class Final:
    answer: TermExpr
    store: Store


@dataclass(frozen=True)
class Stuck:
    reason: str
    state: MachineState | None = None


def _stored(s: MachineState, v) -> TermExpr | None:
    return s.store.lookup(v.atom) if isinstance(v, VarFree) else None


def step(s: MachineState, supply: AtomSupply) -> Stepped | Final | Stuck:
    e = s.focus
    if not s.stack and (is_value(e) or _stored(s, e) is not None):
        return Final(e, s.store)

    match e:
        case Let(bound=e1, body=e2):
            return Stepped(MachineState(s.store, (Frame(e2),) + s.stack, e1), "LET")

        case App(fn=f, arg=y):
            fn = _stored(s, f)
            if not isinstance(fn, Abs):
                return Stuck(f"{_name(f)} is not bound to a lambda in the store", s)
            if _stored(s, y) is None:
                return Stuck(f"{_name(y)} is not bound to a value in the store", s)
            return Stepped(MachineState(s.store, s.stack, open_term_var_in_term(fn.body, 0, y.atom)), "APP")

        case TApp(fn=f, type=r):
            fn = _stored(s, f)
            if not isinstance(fn, TAbs):
                return Stuck(f"{_name(f)} is not bound to a type abstraction in the store", s)
            if not check_pure(r):
                return Stuck("type argument is not pure", s)
            return Stepped(MachineState(s.store, s.stack, open_type_var_in_term(fn.body, 0, r)), "TAPP")

        case Unbox(var=x):
            boxed = _stored(s, x)
            if not isinstance(boxed, BoxVal):
                return Stuck(f"{_name(x)} is not bound to a box in the store", s)
            return Stepped(MachineState(s.store, s.stack, boxed.var), "OPEN")

        case VarFree(atom=x) if s.stack:
            if s.store.lookup(x) is None:
                return Stuck(f"{x} is not bound in the store", s)
            frame, rest = s.stack[0], s.stack[1:]
            return Stepped(MachineState(s.store, rest, open_term_var_in_term(frame.body, 0, x)), "RENAME")

        case _ if s.stack and is_value(e):
            x = supply.fresh()
            frame, rest = s.stack[0], s.stack[1:]
            return Stepped(
                MachineState(s.store.add(x, e), rest, open_term_var_in_term(frame.body, 0, x)),
                "LIFT",
            )

    return Stuck(f"no rule applies to {type(e).__name__}", s)


def _name(v) -> str:
    return str(v.atom) if isinstance(v, VarFree) else f"index {v.index}"


# -- runs ---------------------------------------------------------------------


@dataclass(frozen=True)
class TraceEntry:
    rule: str
    state: MachineState


@dataclass(frozen=True)
class Answer:
    value: TermExpr
    var: Atom | None
    store: Store
    steps: int
    trace: tuple = ()


@dataclass(frozen=True)
class OutOfFuel:
    state: MachineState
    steps: int
    trace: tuple = ()


@dataclass(frozen=True)
class RunStuck:
    state: MachineState
    reason: str
    steps: int
    trace: tuple = ()


def iter_steps(program: TermExpr, supply: AtomSupply | None = None) -> Iterator[tuple[MachineState, object]]:
    """Yield ``(state, result_of_step)`` pairs until a non-``Stepped`` result."""
    supply = supply or AtomSupply()
    s = MachineState.initial(program)
    while True:
        r = step(s, supply)
        yield s, r
        if not isinstance(r, Stepped):
            return
        s = r.next


def run(program: TermExpr, fuel: int = 10_000, supply: AtomSupply | None = None, trace: bool = False):
    steps = 0
    entries: list[TraceEntry] = []
    for s, r in iter_steps(program, supply):
        if isinstance(r, Final):
            var = r.answer.atom if isinstance(r.answer, VarFree) else None
            value = r.store.lookup(var) if var is not None else r.answer
            return Answer(value, var, r.store, steps, tuple(entries))
        if isinstance(r, Stuck):
            return RunStuck(s, r.reason, steps, tuple(entries))
        if steps == fuel:
            return OutOfFuel(s, steps, tuple(entries))
        steps += 1
        if trace:
            entries.append(TraceEntry(r.rule, r.next))
    raise AssertionError("unreachable")


# -- state typing ----------------------------------------------------------------


def store_env(store: Store) -> Env:
    """Type each stored value in the environment of the bindings before it."""
    g = Env()
    for x, v in store:
        g = g.bind_term(x, infer_type(g, v))
    return g


def type_state(s: MachineState, env: Env | None = None) -> tuple[Env, object]:
    """Type a whole machine state; returns ``(store_env, type)``.

    Raises ``TypingError`` if the state is ill typed. ``env`` may pass a
    precomputed ``store_env(s.store)``.
    """
    g = env if env is not None else store_env(s.store)
    t = infer_type(g, s.focus)
    for frame in s.stack:
        x = g.fresh(Kind.TERM, frame.body, t)
        u = infer_type(g.bind_term(x, t), open_term_var_in_term(frame.body, 0, x))
        t = avoid_binding(g, x, t, u)
    return g, t


def preserved(before: tuple, after: tuple) -> bool:
    """``after``'s type is a subtype of ``before``'s, in the grown store env."""
    _, t_before = before
    g_after, t_after = after
    return subtype(g_after, t_after, t_before)


def state_atoms(s: MachineState) -> frozenset:
    out = set(free_atoms(s.focus))
    for f in s.stack:
        out |= free_atoms(f.body)
    return frozenset(out)
