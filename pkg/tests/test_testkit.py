

from ccbox import subtyping
from ccbox.syntax import EMPTY, TOP, Abs, Capt, CaptureSet, VarBound, term_atom
from ccbox.testkit import GenConfig, ProgramGen, RandomSource, ReplaySource, TypeGen, shrink
from ccbox.testkit.generators import WF_RULES
from ccbox.testkit.oracles import capture_sets_over, declarative_subcapture, small_envs
from ccbox.testkit.properties import check_random, prop_subcapture_oracle, write_failures, Report
from ccbox.typecheck import check_against, infer_type
from ccbox.wellformed import Env, wf_type


def test_replay_reproduces_random():
    src = RandomSource(7)
    e = ProgramGen(src, GenConfig()).program()
    assert ProgramGen(ReplaySource(src.record), GenConfig()).program() == e


def test_all_zero_choices_give_simplest_type():
    tg = TypeGen(ReplaySource([]), GenConfig())
    assert tg.wf_type(Env(), 0) in (TOP, Capt(EMPTY, TOP))


def test_backward_generation_of_identity():
    goal = infer_type(Env(), Abs(Capt(EMPTY, TOP), VarBound(0)))
    pg = ProgramGen(ReplaySource([]), GenConfig())
    e = pg.term_of(Env(), goal, 1)
    assert e is not None and check_against(Env(), e, goal)


def test_shrink_finds_minimal_failure():
    # fails whenever some choice is at least 5
    assert shrink([1, 9, 3, 7], lambda cs: any(c >= 5 for c in cs)) == [5]


def test_type_rules_all_exercised():
    tg = TypeGen(RandomSource(0), GenConfig())
    for _ in range(300):
        g = tg.env()
        assert wf_type(g, tg.wf_type(g))
    assert set(tg.rule_counts) == set(WF_RULES)


def test_oracle_examples():
    a, b, c = (term_atom(i, n) for i, n in enumerate("abc"))
    assert declarative_subcapture(Env(), EMPTY, EMPTY, max_depth=1)
    g = Env().bind_term(a, Capt(EMPTY, TOP)).bind_term(b, Capt(CaptureSet.of(a), TOP))
    g = g.bind_term(c, Capt(CaptureSet.of(b), TOP))
    assert declarative_subcapture(g, CaptureSet.of(c), CaptureSet.of(a))
    assert not declarative_subcapture(g, CaptureSet(universal=True), CaptureSet.of(a))


def test_small_domain_size():
    envs = list(small_envs(3))
    queries = sum(len(list(capture_sets_over(g))) ** 2 for g in envs)
    assert len(envs) == 1 + 3 + 3 * 5 + 3 * 5 * 9 and queries > 1000


def test_broken_subcapture_is_caught(monkeypatch):
    # without SC-VAR expansion the algorithm loses {x} <: {} for pure x
    def no_expansion(g, x, c2, visiting):
        return x in c2.frees

    monkeypatch.setattr(subtyping, "_var_sub", no_expansion)
    (result,) = prop_subcapture_oracle(GenConfig(), max_bindings=2)
    assert result.failures > 0 and result.counterexample is not None


def test_failing_property_is_shrunk_and_written(tmp_path):
    cfg = GenConfig(count=30)
    build = lambda src: ProgramGen(src, cfg).program()
    check = lambda e: "has a let" if "Let" in repr(e) else None
    result = check_random("no_lets", cfg, build, check)
    assert result.failures > 0
    ce = result.counterexample
    assert ce.shrunk and check(ce.case) == "has a let"
    (path,) = write_failures(Report([result]), tmp_path)
    text = path.read_text()
    assert text.startswith("# property=no_lets") and "let" in text
