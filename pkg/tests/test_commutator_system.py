"""The linear system for the nested-commutator coefficients at odd n."""
from fractions import Fraction as F

import pytest

from hcourant.commutator_system import (
    MAX_N,
    build_system,
    cross_validate_operator,
    expand_commutator,
    solve_system,
    transform_and_split,
    transform_rows,
)
from hcourant.structures import builtin_model


def fr(rows):
    return [[F(x) for x in r] for r in rows]


N5_MATRIX = fr([[1, 1], [-2, -4], [0, 6], [2, -4], [-1, 1]])
N5_RHS = [F(9, 8), F(-3), F(9, 4), F(0), F(-3, 8)]

N7_MATRIX = fr([
    [1, 1, 1, 1],
    [-1, -2, -2, -3],
    [-1, 1, -1, 3],
    [0, 0, 4, -2],
    [1, -1, -1, 3],
    [1, 2, -2, -3],
    [-1, -1, 1, 1],
])
N7_RHS = [F(67, 48), F(-3), F(23, 16), F(0), F(7, 16), F(0), F(-13, 48)]


def test_expand_commutator_small_cases():
    # [S, pi] = S pi - pi S in the E basis
    assert expand_commutator([1], 1) == {1: 1, 0: -1}
    assert expand_commutator([2, 1], 3) == {3: 1, 1: -1, 2: -1, 0: 1}
    with pytest.raises(ValueError):
        expand_commutator([2, 1], 4)


def test_n5_system_matches_known_display():
    s = build_system(5)
    assert s.matrix == N5_MATRIX
    assert s.rhs == N5_RHS
    assert s.d == F(1, 4)
    assert s.b == {2: F(5, 8)}
    assert s.row_labels == ["E4", "E3", "E2", "E1", "E0"]


def test_n7_system_matches_known_display():
    s = build_system(7)
    assert s.matrix == N7_MATRIX
    assert s.rhs == N7_RHS
    assert s.d == F(1, 6)
    assert s.b == {2: F(7, 16)}
    assert [p for _, p in s.column_labels] == [(3, 2), (4, 1), (2, 2), (3, 1)]


def test_n7_folded_blocks():
    top, bot = transform_and_split(build_system(7))
    assert not top.dropped_nonzero and not bot.dropped_nonzero
    assert top.matrix == fr([[1, 1], [-2, -3], [-1, 3], [4, -2]])
    assert top.rhs == [F(9, 16), F(-3, 2), F(15, 16), F(0)]
    assert bot.matrix == fr([[-1, 1], [-1, -2], [1, 1]])
    assert bot.rhs == [F(1, 2), F(-3, 2), F(5, 6)]
    assert {k for k, _ in top.column_labels} == {"k4k3"}
    assert {k for k, _ in bot.column_labels} == {"k3k2"}


def test_n9_top_block_second_column():
    top, _ = transform_and_split(build_system(9))
    assert [r[1] for r in top.matrix] == [1, -2, 0, 2, -2]


def test_fold_twice_is_half_the_identity():
    rows = fr([[1, 2], [3, 4], [5, 6], [7, 8], [9, 10]])
    twice = transform_rows(transform_rows(rows))
    assert twice[2] == rows[2]
    for k in (0, 1, 3, 4):
        assert twice[k] == [x / 2 for x in rows[k]]


def test_known_solutions():
    r5 = solve_system(build_system(5))
    assert r5.ok and r5.solution == [F(3, 4), F(3, 8)]
    r7 = solve_system(build_system(7))
    assert r7.ok and r7.solution == [F(1, 6), F(2, 3), F(3, 16), F(3, 8)]
    assert r7.as_dict() == {"a_32": "1/6", "a_41": "2/3", "a_22": "3/16", "a_31": "3/8"}


@pytest.mark.parametrize("n", range(5, MAX_N + 1, 2))
def test_unique_and_certified(n):
    s = build_system(n)
    r = solve_system(s)
    assert r.unique and r.solution is not None
    assert all(r.certificates.values()), r.certificates
    assert cross_validate_operator(n, r.solution)["symbolic"]


def test_perturbed_solution_fails_symbolically():
    a = list(solve_system(build_system(7)).solution)
    a[0] += 1
    assert not cross_validate_operator(7, a)["symbolic"]


def test_operator_cross_check_on_five_dimensional_model():
    model = builtin_model("R5")
    a = solve_system(build_system(5)).solution
    good = cross_validate_operator(5, a, model, tuples=4, seed=3)
    assert good == {"symbolic": True, "operator_tuples": 4, "operator": True}
    bad = cross_validate_operator(5, [a[0] + 1, a[1]], model, tuples=2, seed=3)
    assert not bad["operator"]


@pytest.mark.parametrize("n", [4, 3, 1, 6, MAX_N + 2])
def test_invalid_n(n):
    with pytest.raises(ValueError):
        build_system(n)
