import pytest

from erasure_resilient import generators as gen
from erasure_resilient.adversaries import NullStrategy, Strategy
from erasure_resilient.core import ERASED, DomainError, Point, SequenceFunction
from erasure_resilient.oracle import (AdversaryError, BudgetExceeded, OracleMode, inspect,
                                      open_session)


class Scripted(Strategy):
    """Returns pre-set actions in order; records the transcript length it saw."""

    def __init__(self, actions):
        super().__init__()
        self.actions = list(actions)
        self.seen = []

    def act(self, view):
        self.seen.append(view.query_count)
        return self.actions.pop(0) if self.actions else []


def test_erasure_applies_to_later_queries_only():
    f = gen.parity_function(4, 0b1111)
    s = open_session(f, 2, "erasure", Scripted([[3, 5]]))
    assert s.query(3) == 0
    assert s.query(3) is ERASED
    assert s.query(5) is ERASED
    assert s.query(6) == 0
    assert s.transcript.erasure_count == 2


def test_strategy_sees_only_answered_queries():
    st = Scripted([])
    s = open_session(gen.parity_function(3, 1), 1, "erasure", st)
    for x in (1, 2, 3):
        s.query(x)
    assert st.seen == [1, 2, 3]


def test_budget_is_enforced():
    s = open_session(gen.parity_function(3, 1), 1, "erasure", Scripted([[1, 2]]))
    with pytest.raises(BudgetExceeded):
        s.query(0)


def test_targets_must_be_in_domain():
    s = open_session(gen.parity_function(3, 1), 1, "erasure", Scripted([[8]]))
    with pytest.raises(AdversaryError):
        s.query(0)
    s = open_session(SequenceFunction([1, 2, 3]), 1, "erasure", Scripted([[0]]))
    with pytest.raises(AdversaryError):
        s.query(1)


def test_corruption_writes_values_and_may_retarget():
    f = gen.parity_function(3, 0b001)
    s = open_session(f, 2, "corruption", Scripted([[(2, 1), 3], [2]]))
    s.query(0)
    assert s.peek(2) == 1
    assert s.peek(3) == 0  # bare target flips f(3) = 1
    s.query(1)
    assert s.peek(2) == 0  # flipped again
    with pytest.raises(AdversaryError):
        open_session(f, 1, "corruption", Scripted([[(2, 5)]])).query(0)


def test_corruption_on_sequences_increments():
    s = open_session(SequenceFunction([4, 4, 4]), 1, "corruption", Scripted([[2]]))
    s.query(1)
    assert s.query(2) == 5


def test_domain_checks_and_points():
    f = gen.parity_function(3, 0b111)
    s = open_session(f, 0, "erasure")
    assert s.query(Point(0b011, 3)) == 0
    with pytest.raises(DomainError):
        s.query(8)
    with pytest.raises(DomainError):
        s.query(Point(1, 4))
    seq = open_session(SequenceFunction([1, 2]), 0)
    with pytest.raises(DomainError):
        seq.query(0)


def test_inspect_returns_copies():
    s = open_session(gen.parity_function(3, 1), 1, "erasure", Scripted([[4]]))
    s.query(1)
    tr, ov = inspect(s)
    assert tr.entries == [(1, 1)] and ov == {4: ERASED}
    ov[5] = ERASED
    tr.entries.clear()
    assert 5 not in s.overlay and s.query_count == 1


def test_overlay_view_is_read_only():
    s = open_session(gen.parity_function(3, 1), 1)
    with pytest.raises(TypeError):
        s.overlay[1] = ERASED


def test_mode_parsing_and_tags():
    assert OracleMode.parse("Corruption") is OracleMode.CORRUPTION
    with pytest.raises(ValueError):
        OracleMode.parse("noise")
    s = open_session(gen.parity_function(3, 1), 1, strategy="random_eraser", seed=1)
    s.announce("x")
    assert s.view.tester_tag == "x"
    assert isinstance(open_session(gen.parity_function(3, 1), 1).strategy, NullStrategy)
    with pytest.raises(ValueError):
        open_session(gen.parity_function(3, 1), -1)


def test_same_seed_same_transcript():
    def run():
        s = open_session(gen.uniform_function(8, seed=2), 3, "erasure", "random_eraser", seed=9)
        for x in range(0, 256, 3):
            s.query(x)
        return s.transcript.entries

    assert run() == run()
