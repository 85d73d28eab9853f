import pytest
from hypothesis import given, settings, strategies as st

from odlin.linalg import InputError, LinSys, feasible_nonneg_strict
from odlin.semieq import (
    SemiEqBuilder,
    max_support_solution,
    oracle_subset,
    semieq_from_lists,
    solve_qplus,
)


@st.composite
def semieqs(draw, max_vars=5, max_eqs=3, max_imps=4):
    n = draw(st.integers(1, max_vars))
    m = draw(st.integers(0, max_eqs))
    a = draw(st.lists(st.lists(st.integers(-2, 2), min_size=n, max_size=n), min_size=m, max_size=m))
    b = draw(st.lists(st.integers(-2, 2), min_size=m, max_size=m))
    pairs = st.tuples(st.integers(0, n - 1), st.integers(0, n - 1))
    imps = draw(st.lists(pairs, max_size=max_imps))
    return semieq_from_lists(a, b, imps, n)


EXAMPLES = [
    (semieq_from_lists([[1, -1]], [0], [(0, 1)]), True),
    (semieq_from_lists([[1, 0], [0, 1]], [1, 0], [(0, 1)]), False),
    (semieq_from_lists([[1, 1]], [1], [(0, 1), (1, 0)]), True),
]


@pytest.mark.parametrize("se, solvable", EXAMPLES)
def test_solve_qplus_examples(se, solvable):
    x = solve_qplus(se)
    assert (x is not None) == solvable
    if x is not None:
        assert se.satisfied_by(x)


@pytest.mark.parametrize("se, solvable", EXAMPLES)
def test_oracle_agrees_on_examples(se, solvable):
    assert (oracle_subset(se) is not None) == solvable


def test_midpoint_example_is_strictly_positive():
    x = solve_qplus(EXAMPLES[2][0])
    assert x[0] > 0 and x[1] > 0


def test_no_implications_is_plain_feasibility():
    se = semieq_from_lists([[1, 2, -1]], [3])
    assert (solve_qplus(se) is not None) == (feasible_nonneg_strict(se.system) is not None)
    infeasible = semieq_from_lists([[1, 1]], [-1])
    assert solve_qplus(infeasible) is None and oracle_subset(infeasible) is None


def test_implication_out_of_range():
    with pytest.raises(InputError):
        semieq_from_lists([[1]], [0], [(0, 3)])


@settings(max_examples=80, deadline=None)
@given(semieqs())
def test_solve_qplus_matches_subset_oracle(se):
    x = solve_qplus(se)
    y = oracle_subset(se)
    assert (x is None) == (y is None)
    if x is not None:
        assert se.satisfied_by(x)


@settings(max_examples=60, deadline=None)
@given(semieqs())
def test_convex_combination_of_witnesses(se):
    # any two witnesses average to a witness
    x, y = solve_qplus(se), oracle_subset(se)
    if x is not None:
        assert se.satisfied_by(tuple((a + b) / 2 for a, b in zip(x, y)))


@settings(max_examples=60, deadline=None)
@given(semieqs(max_imps=0))
def test_max_support_solution_is_maximal(se):
    x, support = max_support_solution(se.system)
    if x is None:
        assert feasible_nonneg_strict(se.system) is None
        return
    assert support == {i for i, v in enumerate(x) if v > 0}
    for i in set(range(se.nvars)) - support:
        assert feasible_nonneg_strict(se.system, {i}) is None


def test_builder_accumulates_repeated_variables():
    b = SemiEqBuilder()
    x, y = b.new_vars(2)
    b.add_sum_eq([(1, x), (1, x), (-1, y)])
    b.implies(x, y)
    se = b.build()
    assert se.system == LinSys.of([[2, -1]], [0])
    assert se.implications == {(0, 1)}
