"""Declarative subcapturing, decided by bounded derivation search.

The search works over every capture set that can be formed from the
environment's term atoms and the universal element, and builds derivations
bottom-up by height using these rules:

* element:    {x} <: C  when x is in C (x may be the universal element)
* universal:  C <: D    when D is universal
* variable:   {x} <: D  when x : C R is bound and C <: D
* set:        C <: D    when every singleton of C is below D (height is the
                         max of the premises; the empty set is height 1)
* transitive: C <: D    when C <: E and E <: D for some set E

None of this shares code with the algorithmic procedure it checks.
"""

from __future__ import annotations

from functools import lru_cache
from itertools import chain, combinations

from ..syntax import TOP, Capt, CaptureSet, term_atom
from ..wellformed import Env, TermBind

STAR = "*"


def _elements(c: CaptureSet) -> frozenset:
    return frozenset(c.frees) | ({STAR} if c.universal else frozenset())


def _powerset(items):
    items = list(items)
    return [frozenset(s) for s in chain.from_iterable(combinations(items, k) for k in range(len(items) + 1))]


@lru_cache(maxsize=4096)
def _relation(bindings: tuple, extra: frozenset, max_depth: int) -> frozenset:
    """All pairs (C, D) of element sets derivable with height <= max_depth."""
    own = {}
    for b in bindings:
        if isinstance(b, TermBind):
            c = b.type.captures if isinstance(b.type, Capt) else CaptureSet()
            own[b.atom] = _elements(c)
    universe = _powerset(set(own) | set(extra) | {STAR})
    singletons = [s for s in universe if len(s) == 1]

    derived: set = set()
    for h in range(1, max_depth + 1):
        prev = frozenset(derived)
        new = set(prev)
        for d in universe:
            for s in singletons:
                (e,) = s
                if e in d or STAR in d:
                    new.add((s, d))
                elif e in own and (own[e], d) in prev:
                    new.add((s, d))
            if STAR in d:
                new.update((c, d) for c in universe)
        # transitivity through any intermediate set, premises from the previous height
        by_left: dict = {}
        for c, e in prev:
            by_left.setdefault(c, []).append(e)
        for c, es in by_left.items():
            for e in es:
                for d in by_left.get(e, ()):
                    new.add((c, d))
        # set rule: closes over singletons derived at this height
        for d in universe:
            for c in universe:
                if len(c) != 1 and all((frozenset([e]), d) in new for e in c):
                    new.add((c, d))
        derived = new
        if frozenset(derived) == prev:
            break
    return frozenset(derived)


def declarative_subcapture(g: Env, c1: CaptureSet, c2: CaptureSet, max_depth: int | None = None) -> bool:
    if max_depth is None:
        max_depth = len(g) + 2
    extra = frozenset(c1.frees | c2.frees)
    rel = _relation(g.bindings, extra, max_depth)
    return (_elements(c1), _elements(c2)) in rel


# -- exhaustive small domain -----------------------------------------------------


def small_envs(max_bindings: int = 3):
    """Every telescope of up to ``max_bindings`` term bindings over atoms
    a, b, c bound in that order, where each binding's type is either pure
    ``Top`` or a capture set over earlier atoms and ``*`` prefixing ``Top``."""
    atoms = [term_atom(i, n) for i, n in enumerate("abc"[:max_bindings])]

    def extend(g: Env, i: int):
        yield g
        if i == len(atoms):
            return
        earlier = atoms[:i]
        choices = [TOP]
        for subset in _powerset(earlier):
            for universal in (False, True):
                choices.append(Capt(CaptureSet(frozenset(subset), frozenset(), universal), TOP))
        for t in choices:
            yield from extend(g.bind_term(atoms[i], t), i + 1)

    yield from extend(Env(), 0)


def capture_sets_over(g: Env):
    """All well-formed capture sets in ``g``, with and without ``*``."""
    for subset in _powerset(g.term_atoms()):
        for universal in (False, True):
            yield CaptureSet(frozenset(subset), frozenset(), universal)
