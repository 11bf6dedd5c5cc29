import itertools
from fractions import Fraction

import numpy as np
import pytest

from erasure_resilient import generators as gen
from erasure_resilient import ground_truth as gt
from erasure_resilient.core import BooleanFunction, DimensionError, SequenceFunction
from erasure_resilient.oracle import Witness


def random_table(d, seed):
    return BooleanFunction(d, np.random.default_rng(seed).integers(0, 2, 1 << d, dtype=np.uint8))


def test_spectrum_matches_naive():
    for d in range(1, 7):
        f = random_table(d, d)
        assert np.array_equal(gt.walsh_hadamard(f).counts, gt.naive_spectrum(f).counts)


def test_distance_to_linearity_matches_enumeration():
    for d in range(1, 8):
        for s in range(3):
            f = random_table(d, 100 * d + s)
            assert gt.distance_to_linearity(f) == gt.distance_to_linearity_enum(f)


def test_parities_are_at_distance_zero():
    for S in range(16):
        assert gt.distance_to_linearity(gen.parity_function(4, S)) == 0


def test_constant_one_is_half_far():
    f = BooleanFunction(3, np.ones(8, dtype=np.uint8))
    assert gt.distance_to_linearity(f) == Fraction(1, 2)


@pytest.mark.parametrize("k", [2, 3, 4])
def test_violation_count_matches_fourier_identity(k):
    for d in (2, 3):
        f = random_table(d, k * d)
        assert gt.violation_probability_linearity(f, k, mode="exact") == \
            gt.linearity_violation_fourier(f, k)


def test_sampled_violation_probability_brackets_exact():
    f = random_table(6, 9)
    exact = gt.violation_probability_linearity(f, 2, mode="exact")
    est = gt.violation_probability_linearity(f, 2, mode="sampled", samples=200_000, seed=1)
    assert est.lo <= float(exact) <= est.hi


def test_eval_T_vanishes_on_quadratics():
    rng = np.random.default_rng(0)
    for s in range(5):
        f = gen.random_quadratic(5, seed=s)
        for _ in range(50):
            x, y, z = (int(v) for v in rng.integers(0, 32, 3))
            assert gt.eval_T(f, x, y, z) == 0
        assert gt.violation_probability_quadraticity(f, mode="exact") == 0


def test_far_cubic_eta_by_brute_force():
    f = gen.far_cubic(3)
    bad = sum(gt.eval_T(f, x, y, z) for x, y, z in itertools.product(range(8), repeat=3))
    assert gt.violation_probability_quadraticity(f, mode="exact") == Fraction(bad, 512)


def test_quadratic_codebook_size_and_membership():
    book = gt.quadratic_codebook(3)
    assert book.shape == (64, 8)
    assert len({row.tobytes() for row in book}) == 64
    assert all(row[0] == 0 for row in book)
    f = gen.random_quadratic(3, seed=4)
    assert gt.distance_to_quadraticity(f) == 0
    assert gt.distance_to_quadraticity(gen.far_cubic(3)) > 0
    with pytest.raises(DimensionError):
        gt.distance_to_quadraticity(random_table(5, 0))


def test_sortedness_distance_two_ways():
    rng = np.random.default_rng(2)
    for _ in range(30):
        v = rng.integers(0, 2, 25)
        assert gt.distance_to_sortedness(SequenceFunction(v)) == gt.boolean_sortedness_distance(v)
    assert gt.distance_to_sortedness(SequenceFunction([1, 2, 2, 5])) == 0
    assert gt.distance_to_sortedness(SequenceFunction([3, 2, 1])) == Fraction(2, 3)


def test_lipschitz_line_distance():
    assert gt.distance_to_lipschitz_line(SequenceFunction([0, 1, 2, 1])) == 0
    assert gt.distance_to_lipschitz_line(SequenceFunction([0, 2])) == Fraction(1, 2)
    assert gt.distance_to_lipschitz_line(SequenceFunction([0, 3, 0, 0])) == Fraction(1, 4)


def test_lipschitz_cube_distance():
    f = BooleanFunction(2, [0, 1, 1, 2], range_size=3)
    assert gt.is_lipschitz_cube(f) and gt.distance_to_lipschitz_cube(f) == 0
    g = BooleanFunction(2, [0, 2, 1, 1], range_size=3)
    assert not gt.is_lipschitz_cube(g)
    assert gt.distance_to_lipschitz_cube(g) == Fraction(1, 4)


def test_linear_consistency_by_enumeration():
    # independent oracle: try every parity on d = 4
    rng = np.random.default_rng(7)
    for _ in range(200):
        m = int(rng.integers(1, 6))
        pts = [int(p) for p in rng.integers(0, 16, m)]
        vals = [int(v) for v in rng.integers(0, 2, m)]
        want = any(all(((p & S).bit_count() & 1) == v for p, v in zip(pts, vals)) for S in range(16))
        assert gt.linear_consistent(pts, vals) == want


def test_quadratic_consistency_by_enumeration():
    book = gt.quadratic_codebook(3)
    rng = np.random.default_rng(8)
    for _ in range(200):
        m = int(rng.integers(1, 8))
        pts = [int(p) for p in rng.integers(0, 8, m)]
        vals = [int(v) for v in rng.integers(0, 2, m)]
        want = any(all(row[p] == v for p, v in zip(pts, vals)) for row in book)
        assert gt.quadratic_consistent(pts, vals, 3) == want


def test_witness_validators():
    w = Witness([1, 2, 3], [0, 0, 1], "linearity", (0, 1, 2))
    assert gt.witness_is_valid(w) and gt.linearity_parity_check(w)
    ok = Witness([1, 2, 3], [1, 0, 1], "linearity", (0, 1, 2))
    assert not gt.witness_is_valid(ok) and not gt.linearity_parity_check(ok)
    s = Witness([2, 5], [1, 0], "sortedness", (0, 1))
    assert gt.witness_is_valid(s)
    assert not gt.witness_is_valid(Witness([2, 5], [0, 1], "sortedness", (0, 1)))


def test_exhaustive_suites_small():
    assert gt.check_linearity_theorem(2, (2, 4))["passed"]
    assert gt.check_odd_counterexample()["passed"]
    assert gt.check_eta_bound(2)["passed"]
    assert gt.check_parseval(50)["passed"]


def test_hoeffding_bound_monotone():
    assert gt.hoeffding_far_bound(26, 0.25) < 1e-9
    assert gt.hoeffding_far_bound(4, 0.25) == 1.0
    assert gt.hoeffding_far_bound(26, 0.5) == 1.0
