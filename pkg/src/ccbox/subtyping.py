"""Algorithmic subcapturing and subtyping.

Inputs are assumed well formed in the given environment. A pure type compared
against a capturing one is read as carrying the empty capture set.
"""

from __future__ import annotations

from .binding import open_term_var_in_type, open_type_var_in_type
from .syntax import (
    Arrow,
    Box,
    Capt,
    CaptureSet,
    Kind,
    TAll,
    Top,
    TVarFree,
    TypeExpr,
    split_capt,
)
from .wellformed import Env


def binding_captures(g: Env, x) -> CaptureSet | None:
    """Capture set declared for term atom ``x``, or None if unbound."""
    t = g.term_type(x)
    if t is None:
        return None
    return split_capt(t)[0]


def subcapture(g: Env, c1: CaptureSet, c2: CaptureSet) -> bool:
    if c2.universal:
        return True
    if c1.universal:
        return False
    return all(_var_sub(g, x, c2, frozenset()) for x in c1.frees)


def _var_sub(g: Env, x, c2: CaptureSet, visiting: frozenset) -> bool:
    if x in c2.frees:
        return True
    if x in visiting:
        return False
    own = binding_captures(g, x)
    if own is None or own.universal:
        return False
    seen = visiting | {x}
    return all(_var_sub(g, y, c2, seen) for y in own.frees)


def subtype(g: Env, t1: TypeExpr, t2: TypeExpr) -> bool:
    if isinstance(t1, Capt) or isinstance(t2, Capt):
        c1, r1 = split_capt(t1)
        c2, r2 = split_capt(t2)
        return subcapture(g, c1, c2) and subtype_pure(g, r1, r2)
    return subtype_pure(g, t1, t2)


def subtype_pure(g: Env, r1: TypeExpr, r2: TypeExpr) -> bool:
    if isinstance(r2, Top):
        return True
    if isinstance(r1, TVarFree):
        if r1 == r2:
            return True
        bound = g.type_bound(r1.atom)
        return bound is not None and subtype_pure(g, bound, r2)
    match (r1, r2):
        case (Box(type=a), Box(type=b)):
            return subtype(g, a, b)
        case (Arrow(param=s1, result=u1), Arrow(param=s2, result=u2)):
            if not subtype(g, s2, s1):
                return False
            x = g.fresh(Kind.TERM, u1, u2)
            return subtype(
                g.bind_term(x, s2),
                open_term_var_in_type(u1, 0, x),
                open_term_var_in_type(u2, 0, x),
            )
        case (TAll(bound=b1, result=u1), TAll(bound=b2, result=u2)):
            if not subtype_pure(g, b2, b1):
                return False
            a = g.fresh(Kind.TYPE, u1, u2)
            var = TVarFree(a)
            return subtype(
                g.bind_type(a, b2),
                open_type_var_in_type(u1, 0, var),
                open_type_var_in_type(u2, 0, var),
            )
    return False


def expose(g: Env, r: TypeExpr) -> TypeExpr:
    """Chase a type variable through its bounds until a structural head shows."""
    seen = set()
    while isinstance(r, TVarFree) and r.atom not in seen:
        seen.add(r.atom)
        bound = g.type_bound(r.atom)
        if bound is None:
            break
        r = bound
    return r
