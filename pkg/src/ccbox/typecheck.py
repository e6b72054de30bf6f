"""Algorithmic typing of MNF terms, with captured variables (cv) and avoidance.

Errors are reported by raising :class:`TypingError`. ``path`` in an error is
the term path to the offending node: a tuple of child positions, where
``Abs``/``TAbs`` bodies are child 0 and ``Let`` has children 0 (bound) and
1 (body).
"""

from __future__ import annotations

import enum

from .binding import (
    close_term_var_in_type,
    close_type_var_in_type,
    open_term_var_in_term,
    open_term_var_in_type,
    open_type_var_in_term,
    open_type_var_in_type,
)
from .subtyping import binding_captures, expose, subcapture, subtype
from .syntax import (
    Abs,
    App,
    Arrow,
    Atom,
    Box,
    BoxVal,
    Capt,
    CaptureSet,
    EMPTY,
    Kind,
    Let,
    TAbs,
    TAll,
    TApp,
    TermExpr,
    TVarFree,
    TypeExpr,
    Unbox,
    VarBound,
    VarFree,
    check_pure,
    check_type,
    split_capt,
)
from .wellformed import Env, wf_capture_set, wf_type


class ErrorKind(enum.Enum):
    UNBOUND_VARIABLE = "UnboundVariable"
    NOT_A_FUNCTION = "NotAFunction"
    NOT_A_TYPE_FUNCTION = "NotATypeFunction"
    NOT_A_BOX = "NotABox"
    ARGUMENT_MISMATCH = "ArgumentMismatch"
    IMPURE_TYPE_ARGUMENT = "ImpureTypeArgument"
    UNIVERSAL_INSTANTIATION = "UniversalInstantiation"
    ESCAPING_VARIABLE = "EscapingVariable"
    ILL_FORMED_ANNOTATION = "IllFormedAnnotation"
    UNBOX_CAPTURE_MISMATCH = "UnboxCaptureMismatch"


class TypingError(Exception):
    def __init__(self, kind: ErrorKind, detail: str, path: tuple = ()):
        super().__init__(f"{kind.value}: {detail}")
        self.kind = kind
        self.detail = detail
        self.path = path


# -- captured variables ---------------------------------------------------------


def cv(e: TermExpr) -> CaptureSet:
    """Captured variables of a locally closed term.

    Boxes contribute nothing: what they hide is revealed only by unboxing.
    """
    frees: set = set()
    universal = _cv(e, 0, frees)
    return CaptureSet(frozenset(frees), frozenset(), universal)


def _cv_var(v, depth: int, out: set) -> None:
    if isinstance(v, VarFree):
        out.add(v.atom)


def _cv(e: TermExpr, depth: int, out: set) -> bool:
    match e:
        case VarFree() | VarBound():
            _cv_var(e, depth, out)
            return False
        case Abs(body=b):
            return _cv(b, depth + 1, out)
        case TAbs(body=b):
            return _cv(b, depth, out)
        case BoxVal():
            return False
        case App(fn=f, arg=a):
            _cv_var(f, depth, out)
            _cv_var(a, depth, out)
            return False
        case TApp(fn=f):
            _cv_var(f, depth, out)
            return False
        case Unbox(captures=c, var=v):
            out.update(c.frees)
            _cv_var(v, depth, out)
            return c.universal
        case Let(bound=a, body=b):
            u1 = _cv(a, depth, out)
            u2 = _cv(b, depth + 1, out)
            return u1 or u2
    raise TypeError(f"not a term: {e!r}")


# -- avoidance ------------------------------------------------------------------


class _Escape(Exception):
    pass


def avoid(t: TypeExpr, x: Atom, widen_to: CaptureSet) -> TypeExpr:
    """Remove term atom ``x`` from ``t`` by widening it to ``widen_to``.

    Sound only where capture sets are covariant; an occurrence in a parameter
    type or type bound raises ``_Escape``.
    """

    def go(t: TypeExpr, positive: bool) -> TypeExpr:
        match t:
            case Capt(captures=c, pure=r):
                if x in c.frees:
                    if not positive:
                        raise _Escape
                    c = c.without(x).union(widen_to)
                return Capt(c, go(r, positive))
            case Box(type=inner):
                return Box(go(inner, positive))
            case Arrow(param=s, result=r):
                return Arrow(go(s, not positive), go(r, positive))
            case TAll(bound=b, result=r):
                return TAll(go(b, not positive), go(r, positive))
        return t

    return go(t, True)


# -- inference ------------------------------------------------------------------


def _var_type(g: Env, v, path: tuple) -> tuple[Atom, TypeExpr]:
    """Look up an operand; returns the atom and its precise type ``{x} R``."""
    if isinstance(v, VarBound):
        raise TypingError(ErrorKind.UNBOUND_VARIABLE, f"dangling index {v.index}", path)
    declared = g.term_type(v.atom)
    if declared is None:
        raise TypingError(ErrorKind.UNBOUND_VARIABLE, f"{v.atom} is not in scope", path)
    _, r = split_capt(declared)
    return v.atom, Capt(CaptureSet.of(v.atom), r)


def _annotation(g: Env, t: TypeExpr, path: tuple, *, pure: bool = False) -> None:
    ok = check_pure(t) if pure else check_type(t)
    if not (ok and wf_type(g, t)):
        what = "pure type" if pure else "type"
        raise TypingError(ErrorKind.ILL_FORMED_ANNOTATION, f"annotation is not a well-formed {what}", path)


def infer_type(g: Env, e: TermExpr, path: tuple = ()) -> TypeExpr:
    match e:
        case VarFree() | VarBound():
            return _var_type(g, e, path)[1]

        case Abs(param=t, body=body):
            _annotation(g, t, path)
            x = g.fresh(Kind.TERM, e)
            u = infer_type(g.bind_term(x, t), open_term_var_in_term(body, 0, x), path + (0,))
            return Capt(cv(e), Arrow(t, close_term_var_in_type(u, 0, x)))

        case TAbs(bound=r, body=body):
            _annotation(g, r, path, pure=True)
            a = g.fresh(Kind.TYPE, e)
            u = infer_type(g.bind_type(a, r), open_type_var_in_term(body, 0, TVarFree(a)), path + (0,))
            return Capt(cv(e), TAll(r, close_type_var_in_type(u, 0, a)))

        case BoxVal(var=v):
            x, t = _var_type(g, v, path)
            return Capt(EMPTY, Box(t))

        case App(fn=f, arg=a):
            _, tf = _var_type(g, f, path)
            head = expose(g, tf.pure)
            if not isinstance(head, Arrow):
                raise TypingError(ErrorKind.NOT_A_FUNCTION, "applied variable is not a function", path)
            y, ta = _var_type(g, a, path)
            if not subtype(g, ta, head.param):
                raise TypingError(ErrorKind.ARGUMENT_MISMATCH, "argument type is not a subtype of the parameter type", path)
            return open_term_var_in_type(head.result, 0, y)

        case TApp(fn=f, type=arg):
            _, tf = _var_type(g, f, path)
            head = expose(g, tf.pure)
            if not isinstance(head, TAll):
                raise TypingError(ErrorKind.NOT_A_TYPE_FUNCTION, "instantiated variable is not a type function", path)
            if not check_pure(arg):
                raise TypingError(ErrorKind.IMPURE_TYPE_ARGUMENT, "type arguments must be pure; box a capturing type first", path)
            _annotation(g, arg, path, pure=True)
            if not subtype(g, arg, head.bound):
                raise TypingError(ErrorKind.ARGUMENT_MISMATCH, "type argument violates the declared bound", path)
            return open_type_var_in_type(head.result, 0, arg)

        case Unbox(captures=c, var=v):
            _, tx = _var_type(g, v, path)
            head = expose(g, tx.pure)
            if not isinstance(head, Box):
                raise TypingError(ErrorKind.NOT_A_BOX, "unboxed variable is not a box", path)
            if c.universal:
                raise TypingError(
                    ErrorKind.UNIVERSAL_INSTANTIATION,
                    "cannot unbox at the universal capture set; it is never in scope",
                    path,
                )
            if not wf_capture_set(g, c):
                raise TypingError(ErrorKind.ILL_FORMED_ANNOTATION, "unbox annotation mentions variables not in scope", path)
            inner_c, inner_r = split_capt(head.type)
            if not subcapture(g, inner_c, c):
                raise TypingError(
                    ErrorKind.UNBOX_CAPTURE_MISMATCH,
                    "unbox annotation does not cover the boxed capture set",
                    path,
                )
            return Capt(c, inner_r)

        case Let(bound=e1, body=e2):
            t1 = infer_type(g, e1, path + (0,))
            x = g.fresh(Kind.TERM, e)
            u = infer_type(g.bind_term(x, t1), open_term_var_in_term(e2, 0, x), path + (1,))
            return avoid_binding(g, x, t1, u, path)

    raise TypeError(f"not a term: {e!r}")


def avoid_binding(g: Env, x: Atom, bound_type: TypeExpr, u: TypeExpr, path: tuple = ()) -> TypeExpr:
    """Result type of a let whose body has type ``u`` under ``x : bound_type``."""
    own, _ = split_capt(bound_type)
    try:
        return avoid(u, x, own)
    except _Escape:
        raise TypingError(
            ErrorKind.ESCAPING_VARIABLE,
            "let-bound variable escapes through a parameter or bound of the result type",
            path,
        ) from None


def check_against(g: Env, e: TermExpr, t: TypeExpr) -> bool:
    try:
        u = infer_type(g, e)
    except TypingError:
        return False
    return subtype(g, u, t)


__all__ = [
    "ErrorKind",
    "TypingError",
    "avoid",
    "avoid_binding",
    "binding_captures",
    "check_against",
    "cv",
    "infer_type",
]
