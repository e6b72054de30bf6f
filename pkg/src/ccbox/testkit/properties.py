"""Property harness: the executable stand-in for the metatheory.

Each property draws ``cfg.count`` cases from per-case seeded choice streams,
checks them, and shrinks the first failure through its choice sequence.
Failures are returned as data.
"""

from __future__ import annotations

import time
from collections import Counter
from dataclasses import dataclass, field
from pathlib import Path
from typing import Callable

from ..binding import (
    close_term_var_in_term,
    close_term_var_in_type,
    close_type_var_in_term,
    close_type_var_in_type,
    open_term_var_in_term,
    open_term_var_in_type,
    open_type_var_in_term,
    open_type_var_in_type,
    subst_term_atom_in_term,
    subst_type_atom_in_type,
)
from ..frontend.parser import parse
from ..frontend.printer import show_state, show_term, show_type
from ..machine import (
    Answer,
    AtomSupply,
    Final,
    MachineState,
    Stuck,
    preserved,
    run,
    step,
    type_state,
)
from ..subtyping import subcapture, subtype
from ..syntax import (
    Abs,
    Arrow,
    CaptureSet,
    Kind,
    Let,
    TAbs,
    TAll,
    TermExpr,
    TVarFree,
    TypeExpr,
    VarBound,
    check_pure,
    check_type,
    max_atom_id,
    split_capt,
    term_atom,
    type_atom,
)
from ..typecheck import TypingError, infer_type
from ..wellformed import Env, wf_env, wf_type
from .choices import RandomSource, ReplaySource, case_seed, shrink
from .generators import GenConfig, ProgramGen, TypeGen
from .oracles import capture_sets_over, declarative_subcapture, small_envs

SKIP = object()  # a case whose premises do not hold


@dataclass
class Counterexample:
    property: str
    case: object
    detail: str
    choices: list | None = None
    shrunk: bool = False
    trace: list | None = None

    def render(self) -> str:
        lines = [f"property {self.property} failed: {self.detail}"]
        lines.append(f"  case{' (shrunk)' if self.shrunk else ''}: {render_case(self.case)}")
        if self.choices is not None:
            lines.append(f"  choices: {self.choices}")
        for t in self.trace or ():
            lines.append(f"  {t}")
        return "\n".join(lines)


@dataclass
class PropertyResult:
    name: str
    cases: int = 0
    failures: int = 0
    discarded: int = 0
    counterexample: Counterexample | None = None
    notes: dict = field(default_factory=dict)
    seconds: float = 0.0

    @property
    def ok(self) -> bool:
        return self.failures == 0

    def line(self) -> str:
        status = "PASS" if self.ok else "FAIL"
        extra = f", {self.discarded} discarded" if self.discarded else ""
        return f"{status} {self.name}: {self.cases} cases, {self.failures} failures{extra} ({self.seconds:.1f}s)"


@dataclass
class Report:
    results: list[PropertyResult]

    @property
    def ok(self) -> bool:
        return all(r.ok for r in self.results)

    def __getitem__(self, name: str) -> PropertyResult:
        for r in self.results:
            if r.name == name:
                return r
        raise KeyError(name)

    def render(self) -> str:
        lines = [r.line() for r in self.results]
        for r in self.results:
            if r.counterexample is not None:
                lines.append(r.counterexample.render())
        passed = sum(r.ok for r in self.results)
        lines.append(f"{passed}/{len(self.results)} properties passed")
        return "\n".join(lines)


def render_case(case) -> str:
    if isinstance(case, TermExpr):
        return show_term(case)
    if isinstance(case, TypeExpr):
        return show_type(case)
    if isinstance(case, tuple):
        return "(" + ", ".join(render_case(c) for c in case) + ")"
    return repr(case)


# -- generic driver ----------------------------------------------------------------


def check_random(
    name: str,
    cfg: GenConfig,
    build: Callable,
    check: Callable,
    count: int | None = None,
    max_attempts: int | None = None,
) -> PropertyResult:
    """Run ``check(build(src))`` until ``count`` non-skipped cases were checked.

    ``check`` returns None on success, SKIP when the premises fail, or a
    failure message.
    """
    result = PropertyResult(name)
    count = cfg.count if count is None else count
    max_attempts = max_attempts or 4 * count
    started = time.perf_counter()
    i = 0
    while result.cases < count and i < max_attempts:
        src = RandomSource(case_seed(cfg.seed, name, i))
        i += 1
        case = build(src)
        verdict = check(case)
        if verdict is SKIP:
            result.discarded += 1
            continue
        result.cases += 1
        if verdict is None:
            continue
        result.failures += 1
        if result.counterexample is None:
            result.counterexample = minimise(name, build, check, src.record, verdict)
    result.seconds = time.perf_counter() - started
    return result


def minimise(name: str, build, check, choices: list[int], detail: str) -> Counterexample:
    def fails(cand) -> bool:
        try:
            v = check(build(ReplaySource(cand)))
        except RecursionError:
            return False
        return isinstance(v, str)

    small = shrink(choices, fails)
    src = ReplaySource(small)
    case = build(src)
    verdict = check(case)
    trace = None
    if isinstance(case, TermExpr):
        trace = [f"[{e.rule}] {show_state(e.state)}" for e in run(case, 200, trace=True).trace]
    return Counterexample(name, case, verdict if isinstance(verdict, str) else detail, src.record, small != choices, trace)


# -- builders ------------------------------------------------------------------------


def build_program(cfg: GenConfig):
    return lambda src: ProgramGen(src, cfg).program()


def build_env_type(cfg: GenConfig):
    def build(src):
        tg = TypeGen(src, cfg)
        g = tg.env()
        return g, tg.wf_type(g)

    return build


# -- soundness of the machine ------------------------------------------------------------


@dataclass
class SoundnessRun:
    typed: bool
    rules: list = field(default_factory=list)
    preservation: list = field(default_factory=list)
    progress: list = field(default_factory=list)
    outcome: object = None


def check_soundness(program: TermExpr, fuel: int = 10_000, supply: AtomSupply | None = None) -> SoundnessRun:
    """Step ``program`` while typing every state.

    Preservation: each state's type is a subtype of its predecessor's (in the
    grown store environment). Progress: a typed state is final or steps.
    """
    supply = supply or AtomSupply()
    s = MachineState.initial(program)
    g = Env()
    try:
        before = type_state(s, g)
    except TypingError:
        return SoundnessRun(typed=False)
    out = SoundnessRun(typed=True)
    for n in range(1, fuel + 1):
        r = step(s, supply)
        if isinstance(r, Final):
            out.outcome = r
            return out
        if isinstance(r, Stuck):
            out.progress.append(f"typed state stuck after {n - 1} steps: {r.reason}: {show_state(s)}")
            out.outcome = r
            return out
        out.rules.append(r.rule)
        nxt = r.next
        try:
            if len(nxt.store) > len(s.store):
                x, v = nxt.store.bindings[-1]
                g = g.bind_term(x, infer_type(g, v))
            after = type_state(nxt, g)
        except TypingError as err:
            out.preservation.append(f"step {n} [{r.rule}] lost typing: {err}: {show_state(nxt)}")
            out.outcome = r
            return out
        if not preserved(before, after):
            out.preservation.append(
                f"step {n} [{r.rule}] type {show_type(after[1])} is not below {show_type(before[1])}"
            )
        before, s = after, nxt
    out.outcome = "out of fuel"
    return out


def soundness_results(programs, cfg: GenConfig, label: str = "") -> tuple[PropertyResult, PropertyResult]:
    """Preservation and progress over an explicit list of programs."""
    pres = PropertyResult("preservation" + label)
    prog = PropertyResult("progress" + label)
    rules: Counter = Counter()
    started = time.perf_counter()
    for e in programs:
        run_ = check_soundness(e)
        if not run_.typed:
            pres.discarded += 1
            prog.discarded += 1
            continue
        rules.update(run_.rules)
        for res, bad in ((pres, run_.preservation), (prog, run_.progress)):
            res.cases += 1
            if bad:
                res.failures += 1
                if res.counterexample is None:
                    res.counterexample = Counterexample(res.name, e, bad[0])
    pres.seconds = prog.seconds = time.perf_counter() - started
    pres.notes["rules"] = prog.notes["rules"] = rules
    return pres, prog


def prop_soundness(cfg: GenConfig) -> list[PropertyResult]:
    build = build_program(cfg)
    programs = [build(RandomSource(case_seed(cfg.seed, "program", i))) for i in range(cfg.count)]
    pres, prog = soundness_results(programs, cfg)
    for res, attr in ((pres, "preservation"), (prog, "progress")):
        if res.counterexample is not None:
            # re-derive with choices so the failure can be shrunk and replayed
            def check(e, attr=attr):
                bad = getattr(check_soundness(e), attr)
                return bad[0] if bad else None

            for i, e in enumerate(programs):
                if check(e) is not None:
                    src = RandomSource(case_seed(cfg.seed, "program", i))
                    build(src)
                    res.counterexample = minimise(res.name, build, check, src.record, check(e))
                    break
    return [pres, prog]


# -- individual properties -----------------------------------------------------------


def prop_generator_soundness(cfg: GenConfig) -> list[PropertyResult]:
    def check_type_case(case):
        g, t = case
        if not wf_env(g):
            return "generated environment is not well formed"
        return None if wf_type(g, t) else "generated type is not well formed"

    def check_program(e):
        try:
            infer_type(Env(), e)
        except TypingError as err:
            return f"generated program does not type-check: {err}"
        return None

    return [
        check_random("generated_types_wf", cfg, build_env_type(cfg), check_type_case),
        check_random("generated_programs_typed", cfg, build_program(cfg), check_program),
    ]


def prop_purity_stability(cfg: GenConfig, count: int | None = None) -> list[PropertyResult]:
    def build(src):
        tg = TypeGen(src, cfg)
        g = tg.env(2)
        a = tg.fresh(Kind.TYPE)
        g2 = g.bind_type(a, tg.pure(g, 1))
        t = tg.wf_type(g2, 3)
        r = tg.pure(g, 2)
        return g, a, t, r

    def check(case):
        g, a, t, r = case
        substituted = subst_type_atom_in_type(t, a, r)
        opened = open_type_var_in_type(close_type_var_in_type(t, 0, a), 0, r)
        if opened != substituted:
            return "opening the closed type disagrees with substitution"
        if check_pure(t) and not check_pure(substituted):
            return "substituting a pure type into a pure type lost purity"
        if check_type(t) and not check_type(substituted):
            return "substituting a pure type into a type lost typehood"
        if not wf_type(g, substituted):
            return "substitution result is not well formed"
        return None

    return [check_random("purity_stability", cfg, build, check, count)]


def _binder_roundtrips(e) -> str | None:
    """Open-then-close every binder body in ``e`` with a fresh atom."""
    fresh_id = max_atom_id(e) + 1
    x = term_atom(fresh_id)
    a = type_atom(fresh_id)

    def term_ok(body, depth_kind) -> bool:
        if depth_kind == "term":
            return close_term_var_in_term(open_term_var_in_term(body, 0, x), 0, x) == body
        return close_type_var_in_term(open_type_var_in_term(body, 0, TVarFree(a)), 0, a) == body

    def type_ok(t, kind) -> bool:
        if kind == "term":
            return close_term_var_in_type(open_term_var_in_type(t, 0, x), 0, x) == t
        return close_type_var_in_type(open_type_var_in_type(t, 0, TVarFree(a)), 0, a) == t

    def walk_type(t) -> str | None:
        if isinstance(t, Arrow):
            if not type_ok(t.result, "term"):
                return f"arrow result round-trip failed: {t!r}"
            return walk_type(t.param) or walk_type(t.result)
        if isinstance(t, TAll):
            if not type_ok(t.result, "type"):
                return f"forall result round-trip failed: {t!r}"
            return walk_type(t.bound) or walk_type(t.result)
        for child in getattr(t, "__dict__", {}).values():
            if isinstance(child, TypeExpr):
                bad = walk_type(child)
                if bad:
                    return bad
        return None

    def walk(e) -> str | None:
        if isinstance(e, (Abs, Let)):
            if not term_ok(e.body, "term"):
                return "term binder round-trip failed"
        if isinstance(e, TAbs) and not term_ok(e.body, "type"):
            return "type binder round-trip failed"
        for child in e.__dict__.values():
            if isinstance(child, TermExpr):
                bad = walk(child)
            elif isinstance(child, TypeExpr):
                bad = walk_type(child)
            else:
                bad = None
            if bad:
                return bad
        return None

    return walk(e)


def prop_open_close(cfg: GenConfig) -> list[PropertyResult]:
    def check_type_case(case):
        g, t = case
        e = Let(Abs(t, VarBound(0)), VarBound(0))
        x = g.fresh(Kind.TERM, e)
        if subst_term_atom_in_term(e, x, term_atom(x.id + 1)) != e:
            return "substituting a non-occurring atom changed the term"
        return _binder_roundtrips(e)

    return [
        check_random("open_close_roundtrip", cfg, build_program(cfg), _binder_roundtrips),
        check_random("open_close_roundtrip_types", cfg, build_env_type(cfg), check_type_case),
    ]


def prop_wf_weakening(cfg: GenConfig) -> list[PropertyResult]:
    def build(src):
        tg = TypeGen(src, cfg)
        g = tg.env()
        t = tg.wf_type(g)
        ext = g
        for _ in range(tg.draw(3) + 1):
            if tg.chance(1, 3):
                ext = ext.bind_type(tg.fresh(Kind.TYPE), tg.pure(ext, 1))
            else:
                ext = ext.bind_term(tg.fresh(Kind.TERM), tg.wf_type(ext, 2))
        return g, ext, t

    def check(case):
        g, ext, t = case
        if not wf_type(g, t):
            return SKIP
        return None if wf_type(ext, t) else "well-formedness lost after extending the environment"

    return [check_random("wf_weakening", cfg, build, check)]


def prop_subtype_reflexivity(cfg: GenConfig, count: int | None = None) -> list[PropertyResult]:
    def check(case):
        g, t = case
        return None if subtype(g, t, t) else "type is not a subtype of itself"

    return [check_random("subtype_reflexivity", cfg, build_env_type(cfg), check, count)]


def build_chain(cfg: GenConfig):
    def build(src):
        tg = TypeGen(src, cfg)
        g = tg.env()
        t = tg.wf_type(g, 3)
        s = tg.subtype(g, t)
        u = tg.supertype(g, t)
        return g, s, t, u

    return build


def prop_subtype_transitivity(cfg: GenConfig, count: int | None = None) -> list[PropertyResult]:
    def check(case):
        g, s, t, u = case
        if not (wf_type(g, s) and wf_type(g, u)):
            return "chain generator produced an ill-formed type"
        if not (subtype(g, s, t) and subtype(g, t, u)):
            return SKIP
        return None if subtype(g, s, u) else "S <: T and T <: U but not S <: U"

    def check_capt(case):
        g, s, t, u = case
        cs, ct, cu = (split_capt(x)[0] for x in (s, t, u))
        if not (subcapture(g, cs, ct) and subcapture(g, ct, cu)):
            return SKIP
        return None if subcapture(g, cs, cu) else "subcapturing is not transitive"

    return [
        check_random("subtype_transitivity", cfg, build_chain(cfg), check, count),
        check_random("subcapture_transitivity", cfg, build_chain(cfg), check_capt, count),
    ]


def prop_subcapture_oracle(cfg: GenConfig, max_bindings: int = 3) -> list[PropertyResult]:
    """Exhaustive agreement with the declarative search on a small domain."""
    result = PropertyResult("subcapture_oracle")
    started = time.perf_counter()
    for g in small_envs(max_bindings):
        sets = list(capture_sets_over(g))
        for c1 in sets:
            for c2 in sets:
                result.cases += 1
                algorithmic = subcapture(g, c1, c2)
                declarative = declarative_subcapture(g, c1, c2)
                if algorithmic != declarative:
                    result.failures += 1
                    if result.counterexample is None:
                        result.counterexample = Counterexample(
                            result.name,
                            (g, c1, c2),
                            f"algorithmic={algorithmic} declarative={declarative} for {c1} <: {c2} in {g!r}",
                        )
                # reflexivity and monotonicity come for free on this domain
                if not subcapture(g, c1, c1):
                    result.failures += 1
                for x in g.term_atoms():
                    if algorithmic and not subcapture(g, c1, c2.union(CaptureSet.of(x))):
                        result.failures += 1
    result.seconds = time.perf_counter() - started
    return [result]


def prop_parse_print(cfg: GenConfig, count: int | None = None) -> list[PropertyResult]:
    def check(e):
        text = show_term(e)
        try:
            back = parse(text).term
        except Exception as err:  # any parse failure is a counterexample
            return f"printed program does not parse: {err}"
        return None if back == e else f"round-trip changed the program: {text}"

    return [check_random("parse_print_roundtrip", cfg, build_program(cfg), check, count)]


def canonical_answer(result):
    """Rename store atoms by allocation order so answers can be compared."""
    if not isinstance(result, Answer):
        return None
    renaming = {x: term_atom(-1 - i) for i, (x, _) in enumerate(result.store)}

    def rename(e):
        for old, new in renaming.items():
            e = subst_term_atom_in_term(e, old, new)
        return e

    store = tuple((renaming[x], rename(v)) for x, v in result.store)
    var = renaming.get(result.var) if result.var is not None else None
    return var, rename(result.value), store


def deterministic(program: TermExpr, fuel: int = 10_000) -> str | None:
    a = run(program, fuel, AtomSupply(0), trace=True)
    b = run(program, fuel, AtomSupply(10_000, name="y"), trace=True)
    if [t.rule for t in a.trace] != [t.rule for t in b.trace]:
        return "rule sequences differ between atom supplies"
    if type(a) is not type(b) or canonical_answer(a) != canonical_answer(b):
        return "answers differ after canonical renaming"
    return None


def prop_determinism(cfg: GenConfig, count: int | None = None) -> list[PropertyResult]:
    return [check_random("determinism", cfg, build_program(cfg), deterministic, count)]


PROPERTIES: dict[str, Callable[[GenConfig], list[PropertyResult]]] = {
    "generators": prop_generator_soundness,
    "purity_stability": prop_purity_stability,
    "open_close": prop_open_close,
    "wf_weakening": prop_wf_weakening,
    "subcapture_oracle": prop_subcapture_oracle,
    "subtype_reflexivity": prop_subtype_reflexivity,
    "subtype_transitivity": prop_subtype_transitivity,
    "parse_print": prop_parse_print,
    "soundness": prop_soundness,
    "determinism": prop_determinism,
}


def run_property_suite(cfg: GenConfig = GenConfig(), only: list[str] | None = None) -> Report:
    results = []
    for name, prop in PROPERTIES.items():
        if only and name not in only:
            continue
        results.extend(prop(cfg))
    return Report(results)


def write_failures(report: Report, directory: Path) -> list[Path]:
    directory.mkdir(parents=True, exist_ok=True)
    written = []
    for r in report.results:
        ce = r.counterexample
        if ce is None:
            continue
        path = directory / f"{r.name}.ccbox"
        meta = f"# property={ce.property} shrunk={ce.shrunk} choices={ce.choices} detail={ce.detail}"
        if isinstance(ce.case, TermExpr):
            body = show_term(ce.case)
        else:
            body = "\n".join("# " + line for line in render_case(ce.case).splitlines())
        path.write_text(meta + "\n" + body + "\n", encoding="utf-8")
        written.append(path)
    return written
