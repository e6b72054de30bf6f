from hypothesis import given, settings, strategies as st

from ccbox.binding import (
    close_term_var_in_term,
    close_type_var_in_type,
    open_term_var_in_term,
    open_term_var_in_type,
    open_type_var_in_term,
    open_type_var_in_type,
    subst_atom_in_capture_set,
    subst_type_atom_in_type,
)
from ccbox.syntax import (
    EMPTY,
    TOP,
    Abs,
    App,
    Arrow,
    Box,
    Capt,
    CaptureSet,
    Let,
    TApp,
    TVarBound,
    TVarFree,
    VarBound,
    VarFree,
    check_pure,
    term_atom,
    type_atom,
)

x, y, z, c = (term_atom(i, n) for i, n in enumerate("xyzc"))
X = type_atom(10, "X")
CR = Capt(CaptureSet.of(c), TOP)


def test_open_type_var():
    assert open_type_var_in_type(TVarBound(0), 0, TOP) == TOP
    assert open_type_var_in_type(TOP, 0, TVarFree(X)) == TOP


def test_opening_with_capturing_type_is_not_pure():
    t = open_type_var_in_type(TVarBound(0), 0, CR)
    assert t == CR and not check_pure(t)


def test_open_term_var_in_type():
    assert open_term_var_in_type(Capt(CaptureSet(bounds=frozenset({0})), TOP), 0, x) == Capt(CaptureSet.of(x), TOP)
    assert open_term_var_in_type(Capt(CaptureSet.of(x), TOP), 0, y) == Capt(CaptureSet.of(x), TOP)


def test_open_shifts_under_arrow():
    s = Capt(EMPTY, TOP)
    t = Arrow(s, Capt(CaptureSet(bounds=frozenset({1})), TOP))
    assert open_term_var_in_type(t, 0, x) == Arrow(s, Capt(CaptureSet.of(x), TOP))


def test_open_term_var_in_term():
    assert open_term_var_in_term(VarBound(0), 0, y) == VarFree(y)
    assert open_term_var_in_term(App(VarBound(0), VarFree(z)), 0, y) == App(VarFree(y), VarFree(z))


def test_open_under_let_uses_depth_one():
    e = Let(VarBound(0), VarBound(1))
    opened = open_term_var_in_term(e, 0, y)
    assert opened == Let(VarFree(y), VarFree(y))
    assert close_term_var_in_term(opened, 0, y) == e


def test_open_type_var_in_term():
    assert open_type_var_in_term(Abs(TVarBound(0), VarBound(0)), 0, TOP) == Abs(TOP, VarBound(0))
    assert open_type_var_in_term(TApp(VarFree(x), TVarBound(0)), 0, TOP) == TApp(VarFree(x), TOP)
    assert open_type_var_in_term(VarFree(x), 0, TOP) == VarFree(x)


def test_subst_in_capture_set():
    assert subst_atom_in_capture_set(CaptureSet.of(x, y), x, z) == CaptureSet.of(z, y)
    u = CaptureSet(universal=True)
    assert subst_atom_in_capture_set(u, x, z) == u
    assert subst_atom_in_capture_set(CaptureSet.of(x, z), x, z) == CaptureSet.of(z)


def test_subst_type_atom():
    assert subst_type_atom_in_type(TVarFree(X), X, TOP) == TOP
    assert subst_type_atom_in_type(Box(TVarFree(X)), X, CR) == Box(CR)
    assert subst_type_atom_in_type(TOP, X, TVarFree(X)) == TOP


def _types(depth):
    leaf = st.sampled_from([TOP, TVarFree(X), Capt(CaptureSet.of(x), TOP)])
    if depth == 0:
        return leaf
    sub = _types(depth - 1)
    return st.one_of(
        leaf,
        sub.map(Box),
        st.tuples(sub, sub).map(lambda p: Arrow(*p)),
        sub.map(lambda r: Capt(CaptureSet.of(y, bounds=(0,)), r)),
    )


@settings(max_examples=200)
@given(_types(3))
def test_close_then_open_type_var_is_identity(t):
    # t is locally closed, so the only index 0 after closing is X
    assert open_type_var_in_type(close_type_var_in_type(t, 0, X), 0, TVarFree(X)) == t
