import pytest

from ccbox.frontend import parse
from ccbox.syntax import (
    EMPTY,
    TOP,
    UNIVERSAL,
    Abs,
    Arrow,
    Box,
    BoxVal,
    Capt,
    CaptureSet,
    TAbs,
    TAll,
    TVarBound,
    TApp,
    Unbox,
    VarBound,
    VarFree,
    term_atom,
)
from ccbox.typecheck import ErrorKind, TypingError, check_against, cv, infer_type
from ccbox.wellformed import Env

c, f, x, err, p = (term_atom(i, n) for i, n in enumerate(["c", "f", "x", "err", "p"]))
PURE_TOP = Capt(EMPTY, TOP)
FN = Arrow(PURE_TOP, PURE_TOP)
IDENTITY = Abs(PURE_TOP, VarBound(0))


def kind_of(g, e):
    with pytest.raises(TypingError) as info:
        infer_type(g, e)
    return info.value.kind


def test_cv():
    assert cv(BoxVal(VarFree(x))) == EMPTY
    assert cv(IDENTITY) == EMPTY
    assert cv(Unbox(CaptureSet.of(err), VarFree(p))) == CaptureSet.of(err, p)


def test_var_rule():
    g = Env().bind_term(f, Capt(UNIVERSAL, FN))
    assert infer_type(g, VarFree(f)) == Capt(CaptureSet.of(f), FN)


def test_dependent_identity():
    assert infer_type(Env(), IDENTITY) == Capt(EMPTY, Arrow(PURE_TOP, Capt(CaptureSet(bounds=frozenset({0})), TOP)))


def test_box_rule():
    g = Env().bind_term(c, Capt(UNIVERSAL, TOP)).bind_term(f, Capt(CaptureSet.of(c), FN))
    assert infer_type(g, BoxVal(VarFree(f))) == Capt(EMPTY, Box(Capt(CaptureSet.of(f), FN)))


def test_universal_type_argument_is_rejected():
    g = Env().bind_term(x, Capt(EMPTY, TAll(TOP, PURE_TOP)))
    assert kind_of(g, TApp(VarFree(x), Capt(UNIVERSAL, TOP))) is ErrorKind.IMPURE_TYPE_ARGUMENT


def test_unbox_with_universal_annotation_is_rejected():
    g = Env().bind_term(c, Capt(UNIVERSAL, TOP)).bind_term(p, Capt(EMPTY, Box(Capt(CaptureSet.of(c), TOP))))
    assert kind_of(g, Unbox(UNIVERSAL, VarFree(p))) is ErrorKind.UNIVERSAL_INSTANTIATION


def test_check_against():
    g = Env().bind_term(x, PURE_TOP)
    assert check_against(g, VarFree(x), Capt(UNIVERSAL, TOP))
    assert check_against(g, VarFree(x), infer_type(g, VarFree(x)))
    # a pure arrow sits below Top
    assert check_against(Env(), IDENTITY, PURE_TOP)


def test_unbound_variable():
    assert kind_of(Env(), VarFree(x)) is ErrorKind.UNBOUND_VARIABLE


def test_not_a_function():
    g = Env().bind_term(x, PURE_TOP)
    assert kind_of(g, parse_in(g, "x x")) is ErrorKind.NOT_A_FUNCTION


def parse_in(g, text):
    # the programs below are closed; a tiny wrapper binds x as a lambda parameter
    e = parse(f"fun (x : {{}} Top) => {text}").term
    assert isinstance(e, Abs)
    from ccbox.binding import open_term_var_in_term

    return open_term_var_in_term(e.body, 0, x)


@pytest.mark.parametrize(
    "text, kind",
    [
        ("let f = fun (x : {} Top) => x in f[Top]", ErrorKind.NOT_A_TYPE_FUNCTION),
        ("let f = fun (x : {} Top) => x in {} unbox f", ErrorKind.NOT_A_BOX),
        ("let f = fun (x : {} (y : {} Top) -> {} Top) => x in f f", ErrorKind.ARGUMENT_MISMATCH),
        ("fun (c : {*} Top) => let b = box c in {} unbox b", ErrorKind.UNBOX_CAPTURE_MISMATCH),
        ("let x = fun (u : {} Top) => u in fun (y : {x} Top) => y", ErrorKind.ESCAPING_VARIABLE),
    ],
)
def test_rejections(text, kind):
    assert kind_of(Env(), parse(text).term) is kind


def test_argument_below_bound_is_required():
    e = parse("let t = tfun [X <: (y : {} Top) -> {} Top] => fun (z : {} Top) => z in t[Top]").term
    assert kind_of(Env(), e) is ErrorKind.ARGUMENT_MISMATCH


def test_let_widens_covariant_occurrence():
    # the body's type {f} (x : ...) -> ... mentions f; f's own captures are empty
    e = parse("let f = fun (x : {} Top) => x in f").term
    assert infer_type(Env(), e) == infer_type(Env(), IDENTITY)


def test_type_abstraction():
    assert infer_type(Env(), TAbs(TOP, IDENTITY)) == Capt(EMPTY, TAll(TOP, infer_type(Env(), IDENTITY)))


def test_type_application_substitutes_argument():
    poly = TAbs(TOP, Abs(Capt(EMPTY, TVarBound(0)), VarBound(0)))
    g = Env().bind_term(f, infer_type(Env(), poly))
    t = infer_type(g, TApp(VarFree(f), FN))
    assert t == Capt(EMPTY, Arrow(Capt(EMPTY, FN), Capt(CaptureSet(bounds=frozenset({0})), FN)))
