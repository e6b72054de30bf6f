"""Hypothesis drives the same generators the fuzz harness uses."""

from hypothesis import given, settings, strategies as st

from conftest import HypothesisSource

from ccbox.binding import subst_type_atom_in_type
from ccbox.machine import run
from ccbox.subtyping import subcapture, subtype
from ccbox.syntax import Kind, check_pure, check_type, split_capt
from ccbox.testkit import GenConfig, ProgramGen, TypeGen
from ccbox.testkit.properties import check_soundness, deterministic
from ccbox.typecheck import infer_type
from ccbox.wellformed import Env, wf_env, wf_type

CFG = GenConfig()
fast = settings(max_examples=100, deadline=None)


@fast
@given(st.data())
def test_generated_types_are_well_formed(data):
    tg = TypeGen(HypothesisSource(data), CFG)
    g = tg.env()
    assert wf_env(g) and wf_type(g, tg.wf_type(g))


@fast
@given(st.data())
def test_reflexivity(data):
    tg = TypeGen(HypothesisSource(data), CFG)
    g = tg.env()
    t = tg.wf_type(g)
    assert subtype(g, t, t)


@fast
@given(st.data())
def test_transitivity(data):
    tg = TypeGen(HypothesisSource(data), CFG)
    g = tg.env()
    t = tg.wf_type(g, 3)
    s, u = tg.subtype(g, t), tg.supertype(g, t)
    assert subtype(g, s, t) and subtype(g, t, u)
    assert subtype(g, s, u)
    assert subcapture(g, split_capt(s)[0], split_capt(u)[0])


@fast
@given(st.data())
def test_purity_is_stable_under_pure_substitution(data):
    tg = TypeGen(HypothesisSource(data), CFG)
    g = tg.env(2)
    a = tg.fresh(Kind.TYPE)
    g2 = g.bind_type(a, tg.pure(g, 1))
    t, r = tg.wf_type(g2, 3), tg.pure(g, 2)
    out = subst_type_atom_in_type(t, a, r)
    assert check_pure(out) == check_pure(t)
    assert check_type(out) == check_type(t)
    assert wf_type(g, out)


@fast
@given(st.data())
def test_weakening(data):
    tg = TypeGen(HypothesisSource(data), CFG)
    g = tg.env(2)
    t = tg.wf_type(g)
    ext = g.bind_term(tg.fresh(Kind.TERM), tg.wf_type(g, 2)).bind_type(tg.fresh(Kind.TYPE), tg.pure(g, 1))
    assert wf_type(ext, t)


@fast
@given(st.data())
def test_soundness(data):
    e = ProgramGen(HypothesisSource(data), CFG).program()
    infer_type(Env(), e)
    result = check_soundness(e)
    assert result.typed and not result.preservation and not result.progress


@fast
@given(st.data())
def test_determinism(data):
    e = ProgramGen(HypothesisSource(data), CFG).program()
    assert deterministic(e) is None


@fast
@given(st.data())
def test_generated_programs_terminate(data):
    # the generated fragment has no recursion, so every run reaches an answer
    e = ProgramGen(HypothesisSource(data), CFG).program()
    assert type(run(e)).__name__ == "Answer"
