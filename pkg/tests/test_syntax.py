import pytest

from ccbox.syntax import (
    EMPTY,
    TOP,
    Abs,
    App,
    Arrow,
    Box,
    BoxVal,
    Capt,
    CaptureSet,
    TAll,
    TVarBound,
    TVarFree,
    Unbox,
    VarBound,
    VarFree,
    check_pure,
    check_type,
    free_atoms,
    is_value,
    term_atom,
    type_atom,
)

x, y, c = term_atom(1, "x"), term_atom(2, "y"), term_atom(3, "c")
X = type_atom(4, "X")


def test_top_is_pure():
    assert check_pure(TOP)


def test_capturing_type_is_not_pure():
    assert not check_pure(Capt(CaptureSet.of(x), TOP))


def test_box_of_capturing_type_is_pure():
    assert check_pure(Box(Capt(CaptureSet.of(x), TOP)))


def test_empty_capture_type():
    assert check_type(Capt(EMPTY, TOP))


def test_dangling_bound_in_capture_set_is_not_a_type():
    assert not check_type(Capt(CaptureSet(bounds=frozenset({0})), TOP))


def test_dependent_arrow_result_is_a_type():
    t = Arrow(Capt(EMPTY, TOP), Capt(CaptureSet(bounds=frozenset({0})), TOP))
    assert check_pure(t) and check_type(t)


def test_dangling_type_index_is_rejected():
    assert not check_pure(TVarBound(0))
    assert check_pure(TAll(TOP, TVarBound(0)))


def test_nested_capt_is_not_a_type():
    assert not check_type(Capt(EMPTY, Capt(EMPTY, TOP)))


def test_values():
    assert is_value(Abs(Capt(EMPTY, TOP), VarBound(0)))
    assert not is_value(App(VarFree(x), VarFree(y)))
    assert is_value(BoxVal(VarFree(x)))


def test_free_atoms():
    assert free_atoms(Capt(CaptureSet.of(x), TOP)) == {x}
    t = Capt(CaptureSet.of(c), TVarFree(X))
    assert free_atoms(Abs(t, VarBound(0))) == free_atoms(t) == {c, X}
    a, b = term_atom(5, "a"), term_atom(6, "b")
    assert free_atoms(Unbox(CaptureSet.of(a, b), VarFree(c))) == {a, b, c}


def test_atom_equality_ignores_name():
    assert term_atom(7, "p") == term_atom(7, "q")


def test_mnf_is_enforced():
    with pytest.raises(TypeError):
        App(Abs(TOP, VarBound(0)), VarFree(x))
    with pytest.raises(TypeError):
        BoxVal(Abs(TOP, VarBound(0)))


def test_capture_set_union_and_universal():
    s = CaptureSet.of(x).union(CaptureSet.of(y, universal=True))
    assert s.universal and x in s and y in s
    assert s.without(x) == CaptureSet.of(y, universal=True)
