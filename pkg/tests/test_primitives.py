import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from sim import PrimitiveKind, PrimitiveOp, is_conditional, is_trivial

SMALL = st.integers(min_value=-3, max_value=3)


def make(kind, a=0, b=0):
    return {
        PrimitiveKind.READ: PrimitiveOp.read,
        PrimitiveKind.LL: PrimitiveOp.ll,
        PrimitiveKind.WRITE: lambda: PrimitiveOp.write(a),
        PrimitiveKind.CAS: lambda: PrimitiveOp.cas(a, b),
        PrimitiveKind.SC: lambda: PrimitiveOp.sc(a),
        PrimitiveKind.FETCH_ADD: lambda: PrimitiveOp.fetch_add(a),
    }[kind]()


@pytest.mark.parametrize(
    "kind, trivial, conditional",
    [
        (PrimitiveKind.READ, True, False),
        (PrimitiveKind.LL, True, False),
        (PrimitiveKind.WRITE, False, False),
        (PrimitiveKind.CAS, False, True),
        (PrimitiveKind.SC, False, True),
        (PrimitiveKind.FETCH_ADD, False, False),
    ],
)
def test_classification_is_total(kind, trivial, conditional):
    assert is_trivial(kind) is trivial
    assert is_conditional(kind) is conditional
    op = make(kind, 1, 2)
    assert op.nontrivial is not trivial


def test_cas_success_and_failure():
    assert PrimitiveOp.cas(5, 7).apply(5) == (7, True)
    assert PrimitiveOp.cas(6, 7).apply(5) == (5, False)


def test_fetch_add_returns_old_value():
    assert PrimitiveOp.fetch_add(3).apply(4) == (7, 4)


def test_write_responds_none():
    assert PrimitiveOp.write(9).apply(1) == (9, None)


def test_sc_needs_link():
    assert PrimitiveOp.sc(8).apply(1, linked=False) == (1, False)
    assert PrimitiveOp.sc(8).apply(1, linked=True) == (8, True)


def test_wrong_arity_rejected():
    with pytest.raises(ValueError):
        PrimitiveOp(PrimitiveKind.CAS, (1,))
    with pytest.raises(ValueError):
        PrimitiveOp(PrimitiveKind.READ, (1,))


@given(state=SMALL, a=SMALL, b=SMALL, linked=st.booleans())
@settings(max_examples=200, deadline=None)
def test_trivial_kinds_never_change_state(state, a, b, linked):
    for kind in (PrimitiveKind.READ, PrimitiveKind.LL):
        after, response = make(kind, a, b).apply(state, linked)
        assert after == state
        assert response == state


def test_conditional_kinds_have_fixing_and_moving_inputs():
    states = range(-2, 3)
    cas_moves = {PrimitiveOp.cas(a, b).apply(s)[0] != s for s in states for a in states for b in states}
    sc_moves = {PrimitiveOp.sc(v).apply(s, linked)[0] != s for s in states for v in states for linked in (True, False)}
    assert cas_moves == {True, False}
    assert sc_moves == {True, False}


def test_unconditional_nontrivial_kinds_always_move_somewhere():
    # write and fetch-and-add change the state for every nonzero operand
    assert all(PrimitiveOp.fetch_add(d).apply(s)[0] != s for s in range(-2, 3) for d in (1, -1, 2))
    assert all(PrimitiveOp.write(v).apply(s)[0] != s for s in range(-2, 3) for v in range(-2, 3) if v != s)


def test_modifies_tracks_successful_conditionals():
    assert PrimitiveOp.cas(0, 1).modifies(True)
    assert not PrimitiveOp.cas(0, 1).modifies(False)
    assert PrimitiveOp.write(1).modifies(None)
    assert not PrimitiveOp.read().modifies(0)
