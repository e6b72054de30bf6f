import pytest

from ccbox.machine import (
    Answer,
    AtomSupply,
    Final,
    Frame,
    MachineState,
    OutOfFuel,
    RunStuck,
    Store,
    Stepped,
    Stuck,
    run,
    step,
    type_state,
)
from ccbox.syntax import EMPTY, TOP, Abs, App, BoxVal, Capt, CaptureSet, Let, Unbox, VarBound, VarFree, term_atom
from ccbox.typecheck import ErrorKind, TypingError, infer_type

IDENTITY = Abs(Capt(EMPTY, TOP), VarBound(0))
SELFAPP = Let(IDENTITY, App(VarBound(0), VarBound(0)))
f, x, y = term_atom(100, "f"), term_atom(101, "x"), term_atom(102, "y")


def test_let_pushes_frame():
    e2 = App(VarBound(0), VarBound(0))
    r = step(MachineState(Store(), (), Let(IDENTITY, e2)), AtomSupply())
    assert r == Stepped(MachineState(Store(), (Frame(e2),), IDENTITY), "LET")


def test_lift_stores_value():
    supply = AtomSupply()
    r = step(MachineState(Store(), (Frame(VarBound(0)),), IDENTITY), supply)
    assert isinstance(r, Stepped) and r.rule == "LIFT"
    (atom, value), = r.next.store
    assert value == IDENTITY and r.next.focus == VarFree(atom) and r.next.stack == ()


def test_app_then_final():
    s = MachineState(Store(((f, IDENTITY),)), (), App(VarFree(f), VarFree(f)))
    r = step(s, AtomSupply(200))
    assert r == Stepped(MachineState(s.store, (), VarFree(f)), "APP")
    assert isinstance(step(r.next, AtomSupply(200)), Final)


def test_open_rule():
    store = Store(((y, IDENTITY), (x, BoxVal(VarFree(y)))))
    r = step(MachineState(store, (), Unbox(CaptureSet.of(y), VarFree(x))), AtomSupply(200))
    assert r == Stepped(MachineState(store, (), VarFree(y)), "OPEN")


def test_value_with_empty_stack_is_final():
    result = run(IDENTITY, 10)
    assert isinstance(result, Answer) and result.steps == 0 and result.value == IDENTITY


def test_selfapp_runs_in_three_steps():
    result = run(SELFAPP, 10, trace=True)
    assert isinstance(result, Answer)
    assert [t.rule for t in result.trace] == ["LET", "LIFT", "APP"]
    assert result.value == IDENTITY and len(result.store) == 1


def test_unbound_application_is_stuck():
    result = run(App(VarFree(f), VarFree(f)), 10)
    assert isinstance(result, RunStuck)
    assert isinstance(step(MachineState.initial(VarFree(f)), AtomSupply()), Stuck)


def test_fuel():
    assert isinstance(run(SELFAPP, 1), OutOfFuel)


def test_type_state_of_closed_program():
    _, t = type_state(MachineState.initial(IDENTITY))
    assert t == infer_type(type_state.__globals__["Env"](), IDENTITY)


def test_type_state_unbound():
    with pytest.raises(TypingError) as info:
        type_state(MachineState.initial(VarFree(x)))
    assert info.value.kind is ErrorKind.UNBOUND_VARIABLE


def test_atom_supply_respects_start():
    s = AtomSupply(5)
    assert [s.fresh().id for _ in range(3)] == [5, 6, 7]
