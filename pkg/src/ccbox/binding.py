"""Opening, closing and substitution over locally-nameless syntax.

``open_*`` replaces a bound index by a free atom (or, for type variables, by a
locally closed type); ``close_*`` is the inverse for atoms. Every function
takes the index to target explicitly, and increments it when it passes under
a binder of the same sort.
"""

from __future__ import annotations

from .syntax import (
    Abs,
    App,
    Arrow,
    Atom,
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
)

# -- capture sets --------------------------------------------------------------


def open_capture_set(c: CaptureSet, depth: int, x: Atom) -> CaptureSet:
    if depth not in c.bounds:
        return c
    return CaptureSet(c.frees | {x}, c.bounds - {depth}, c.universal)


def close_capture_set(c: CaptureSet, depth: int, x: Atom) -> CaptureSet:
    if x not in c.frees:
        return c
    return CaptureSet(c.frees - {x}, c.bounds | {depth}, c.universal)


def subst_atom_in_capture_set(c: CaptureSet, old: Atom, new: Atom) -> CaptureSet:
    if old not in c.frees:
        return c
    return CaptureSet((c.frees - {old}) | {new}, c.bounds, c.universal)


# -- types ---------------------------------------------------------------------


def _map_type(t: TypeExpr, on_capt, on_tvar, tm: int, ty: int) -> TypeExpr:
    """Rebuild ``t`` applying ``on_capt(C, tm)`` to capture sets and
    ``on_tvar(node, ty)`` to type-variable leaves, tracking binder depths."""
    match t:
        case TVarBound() | TVarFree():
            return on_tvar(t, ty)
        case Top():
            return t
        case Box(type=inner):
            return Box(_map_type(inner, on_capt, on_tvar, tm, ty))
        case Capt(captures=c, pure=r):
            return Capt(on_capt(c, tm), _map_type(r, on_capt, on_tvar, tm, ty))
        case Arrow(param=s, result=r):
            return Arrow(
                _map_type(s, on_capt, on_tvar, tm, ty),
                _map_type(r, on_capt, on_tvar, tm + 1, ty),
            )
        case TAll(bound=b, result=r):
            return TAll(
                _map_type(b, on_capt, on_tvar, tm, ty),
                _map_type(r, on_capt, on_tvar, tm, ty + 1),
            )
    raise TypeError(f"not a type: {t!r}")


def _same_tvar(t: TypeExpr, _ty: int) -> TypeExpr:
    return t


def _same_capt(c: CaptureSet, _tm: int) -> CaptureSet:
    return c


def open_type_var_in_type(t: TypeExpr, depth: int, r: TypeExpr) -> TypeExpr:
    def tvar(node, ty):
        return r if isinstance(node, TVarBound) and node.index == ty else node

    return _map_type(t, _same_capt, tvar, 0, depth)


def close_type_var_in_type(t: TypeExpr, depth: int, a: Atom) -> TypeExpr:
    def tvar(node, ty):
        return TVarBound(ty) if isinstance(node, TVarFree) and node.atom == a else node

    return _map_type(t, _same_capt, tvar, 0, depth)


def open_term_var_in_type(t: TypeExpr, depth: int, x: Atom) -> TypeExpr:
    return _map_type(t, lambda c, tm: open_capture_set(c, tm, x), _same_tvar, depth, 0)


def close_term_var_in_type(t: TypeExpr, depth: int, x: Atom) -> TypeExpr:
    return _map_type(t, lambda c, tm: close_capture_set(c, tm, x), _same_tvar, depth, 0)


def subst_term_atom_in_type(t: TypeExpr, old: Atom, new: Atom) -> TypeExpr:
    return _map_type(t, lambda c, _: subst_atom_in_capture_set(c, old, new), _same_tvar, 0, 0)


def subst_type_atom_in_type(t: TypeExpr, a: Atom, r: TypeExpr) -> TypeExpr:
    def tvar(node, _ty):
        return r if isinstance(node, TVarFree) and node.atom == a else node

    return _map_type(t, _same_capt, tvar, 0, 0)


# -- terms ---------------------------------------------------------------------


def _map_term(e: TermExpr, on_var, on_type, on_capt, tm: int, ty: int) -> TermExpr:
    """Term analogue of ``_map_type``: ``on_var(node, tm)`` for variables,
    ``on_type(T, tm, ty)`` for annotations, ``on_capt(C, tm)`` for unbox sets."""

    def go(e, tm, ty):
        match e:
            case VarBound() | VarFree():
                return on_var(e, tm)
            case Abs(param=t, body=b):
                return Abs(on_type(t, tm, ty), go(b, tm + 1, ty))
            case TAbs(bound=t, body=b):
                return TAbs(on_type(t, tm, ty), go(b, tm, ty + 1))
            case BoxVal(var=v):
                return BoxVal(on_var(v, tm))
            case App(fn=f, arg=a):
                return App(on_var(f, tm), on_var(a, tm))
            case TApp(fn=f, type=t):
                return TApp(on_var(f, tm), on_type(t, tm, ty))
            case Unbox(captures=c, var=v):
                return Unbox(on_capt(c, tm), on_var(v, tm))
            case Let(bound=a, body=b):
                return Let(go(a, tm, ty), go(b, tm + 1, ty))
        raise TypeError(f"not a term: {e!r}")

    return go(e, tm, ty)


def open_term_var_in_term(e: TermExpr, depth: int, x: Atom) -> TermExpr:
    def var(v, tm):
        return VarFree(x) if isinstance(v, VarBound) and v.index == tm else v

    return _map_term(
        e,
        var,
        lambda t, tm, _ty: open_term_var_in_type(t, tm, x),
        lambda c, tm: open_capture_set(c, tm, x),
        depth,
        0,
    )


def close_term_var_in_term(e: TermExpr, depth: int, x: Atom) -> TermExpr:
    def var(v, tm):
        return VarBound(tm) if isinstance(v, VarFree) and v.atom == x else v

    return _map_term(
        e,
        var,
        lambda t, tm, _ty: close_term_var_in_type(t, tm, x),
        lambda c, tm: close_capture_set(c, tm, x),
        depth,
        0,
    )


def open_type_var_in_term(e: TermExpr, depth: int, r: TypeExpr) -> TermExpr:
    return _map_term(
        e,
        lambda v, _tm: v,
        lambda t, _tm, ty: open_type_var_in_type(t, ty, r),
        lambda c, _tm: c,
        0,
        depth,
    )


def close_type_var_in_term(e: TermExpr, depth: int, a: Atom) -> TermExpr:
    return _map_term(
        e,
        lambda v, _tm: v,
        lambda t, _tm, ty: close_type_var_in_type(t, ty, a),
        lambda c, _tm: c,
        0,
        depth,
    )


def subst_term_atom_in_term(e: TermExpr, old: Atom, new: Atom) -> TermExpr:
    def var(v, _tm):
        return VarFree(new) if isinstance(v, VarFree) and v.atom == old else v

    return _map_term(
        e,
        var,
        lambda t, _tm, _ty: subst_term_atom_in_type(t, old, new),
        lambda c, _tm: subst_atom_in_capture_set(c, old, new),
        0,
        0,
    )


def subst_type_atom_in_term(e: TermExpr, a: Atom, r: TypeExpr) -> TermExpr:
    return _map_term(
        e,
        lambda v, _tm: v,
        lambda t, _tm, _ty: subst_type_atom_in_type(t, a, r),
        lambda c, _tm: c,
        0,
        0,
    )
