import pytest

from ccbox.syntax import EMPTY, TOP, Capt, CaptureSet, TVarFree, term_atom, type_atom
from ccbox.wellformed import DuplicateBinding, Env, TypeBind, domain, wf_env, wf_type

x, y, a, b = (term_atom(i, n) for i, n in enumerate("xyab"))
X = type_atom(9, "X")


def test_domain():
    assert domain(Env()) == frozenset()
    assert domain(Env().bind_term(x, Capt(EMPTY, TOP)).bind_type(X, TOP)) == {x, X}


def test_wf_capture_sets():
    g = Env().bind_term(x, Capt(EMPTY, TOP))
    assert wf_type(g, Capt(CaptureSet.of(x), TOP))
    assert not wf_type(Env(), Capt(CaptureSet.of(y), TOP))
    assert wf_type(Env(), Capt(CaptureSet(universal=True), TOP))


def test_type_variable_needs_binding():
    assert not wf_type(Env(), TVarFree(X))
    assert wf_type(Env().bind_type(X, TOP), TVarFree(X))


def test_wf_env():
    assert wf_env(Env())
    assert wf_env(Env().bind_term(a, Capt(EMPTY, TOP)).bind_term(b, Capt(CaptureSet.of(a), TOP)))
    assert not wf_env(Env().bind_term(b, Capt(CaptureSet.of(a), TOP)))


def test_duplicate_binding():
    g = Env().bind_term(x, TOP)
    with pytest.raises(DuplicateBinding):
        g.bind_term(x, TOP)


def test_type_bound_must_be_pure():
    assert not wf_env(Env([TypeBind(X, Capt(EMPTY, TOP))]))


def test_fresh_avoids_domain():
    g = Env().bind_term(x, TOP).bind_type(X, TOP)
    assert g.fresh(x.kind) not in g
