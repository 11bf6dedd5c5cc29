import pickle

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from erasure_resilient.core import (ERASED, BooleanFunction, DimensionError, DomainError,
                                    FormatError, Point, SequenceFunction, Transcript,
                                    dumps_function, eval_point, format_answer, load_function,
                                    loads_function, parity_table, parse_answer, save_function,
                                    xor_sum)


def test_erased_is_a_singleton_that_survives_pickling():
    assert pickle.loads(pickle.dumps(ERASED)) is ERASED
    assert str(ERASED) == "BOT"
    with pytest.raises(TypeError):
        bool(ERASED)


def test_answer_tokens_round_trip():
    for a in (0, 1, 2, ERASED):
        assert parse_answer(format_answer(a)) == a or parse_answer(format_answer(a)) is a
    with pytest.raises(FormatError):
        parse_answer("bottom")


def test_point_coordinates_are_lsb_first():
    p = Point.from_coords([1, 0, 1])
    assert p.bits == 0b101
    assert [p.coord(i) for i in (1, 2, 3)] == [1, 0, 1]
    with pytest.raises(DomainError):
        p.coord(4)


def test_point_bounds_and_dimension_checks():
    with pytest.raises(DomainError):
        Point(8, 3)
    with pytest.raises(DimensionError):
        Point(0, 31)
    with pytest.raises(DimensionError):
        Point(1, 3) ^ Point(1, 4)


@given(st.integers(1, 30).flatmap(lambda d: st.lists(st.integers(0, (1 << d) - 1), min_size=1,
                                                     max_size=8).map(lambda xs: (d, xs))))
def test_xor_sum_matches_integer_xor(case):
    d, xs = case
    acc = 0
    for x in xs:
        acc ^= x
    assert xor_sum([Point(x, d) for x in xs]) == Point(acc, d)


def test_empty_xor_sum_needs_dimension():
    assert xor_sum([], d=5) == Point(0, 5)
    with pytest.raises(DimensionError):
        xor_sum([])


def test_rule_and_table_agree():
    S = 0b1011
    rule = BooleanFunction(4, rule=lambda x: (x & S).bit_count() & 1)
    table = BooleanFunction(4, [(x & S).bit_count() & 1 for x in range(16)])
    assert not rule.is_materialized
    assert rule == table
    assert rule(Point(0b0001, 4)) == 1
    with pytest.raises(DimensionError):
        rule(Point(1, 5))
    with pytest.raises(DomainError):
        eval_point(rule, 16)


def test_boolean_function_validates_table():
    with pytest.raises(DimensionError):
        BooleanFunction(3, [0] * 7)
    with pytest.raises(ValueError):
        BooleanFunction(2, [0, 1, 2, 0])
    assert BooleanFunction(2, [0, 1, 2, 0], range_size=3).range_size == 3
    with pytest.raises(ValueError):
        BooleanFunction(2)


def test_sequence_function_is_one_indexed():
    f = SequenceFunction([5, 3, 9])
    assert (f(1), f(2), f(3)) == (5, 3, 9)
    with pytest.raises(DomainError):
        f(0)
    assert f.r == 3
    g = SequenceFunction(np.array([0, 1, 1], dtype=np.uint8))
    assert g.fast_lookup()(3) == 1
    with pytest.raises(ValueError):
        SequenceFunction([1, -1])


def test_rule_sequence_needs_n_and_r():
    f = SequenceFunction(rule=lambda i: i // 3, n=7, r=3)
    assert f.values.tolist() == [0, 0, 1, 1, 1, 2, 2]
    with pytest.raises(ValueError):
        SequenceFunction(rule=lambda i: i, n=4)


def test_transcript_round_trip():
    t = Transcript()
    t.append(0x1f, 1)
    t.append(3, ERASED)
    t.append(0, 0)
    text = t.dumps()
    assert text.splitlines() == ["1f 1", "3 BOT", "0 0"]
    back = Transcript.loads(text)
    assert back.entries == t.entries
    assert back.erasure_count == 1
    with pytest.raises(FormatError):
        Transcript.loads("1 2 3\n")


@settings(max_examples=40)
@given(st.integers(1, 8), st.data())
def test_function_text_round_trip(d, data):
    rs = data.draw(st.sampled_from([2, 3]))
    tab = data.draw(st.lists(st.integers(0, rs - 1), min_size=1 << d, max_size=1 << d))
    f = BooleanFunction(d, tab, range_size=rs)
    g = loads_function(dumps_function(f))
    assert g == f and g.range_size == rs


def test_sequence_file_round_trip(tmp_path):
    f = SequenceFunction([3, 1, 4, 1, 5])
    path = tmp_path / "seq.txt"
    save_function(f, path)
    assert path.read_text().startswith("seq n=5\n")
    assert load_function(path) == f


@pytest.mark.parametrize("text", ["bool d=2\n010\n", "bool d=2\n0102\n", "seq n=2\n1\n",
                                  "cube d=2\n0000\n", "bool\n0\n"])
def test_malformed_files_raise(text):
    with pytest.raises(FormatError):
        loads_function(text)


def test_parity_table():
    assert parity_table(3).tolist() == [0, 1, 1, 0, 1, 0, 0, 1]
