import itertools
from fractions import Fraction as F

import flint
import numpy as np
import pytest
from hypothesis import given, settings, strategies as st
from scipy.optimize import linprog

from odlin.certlp import certified_max_support, max_support
from odlin.linalg import (
    InputError,
    LinSys,
    enumerate_n_solutions_bounded,
    feasible_nonneg_strict,
    hybrid_linear_set,
    kernel_basis,
    max_support_sparse,
    simplex,
    solve_integer,
    solve_rational,
    split_pos_neg,
)


def small_systems(max_rows=3, max_cols=4, lo=-3, hi=3):
    return st.integers(1, max_rows).flatmap(lambda m: st.integers(1, max_cols).flatmap(
        lambda n: st.tuples(
            st.lists(st.lists(st.integers(lo, hi), min_size=n, max_size=n), min_size=m, max_size=m),
            st.lists(st.integers(lo, hi), min_size=m, max_size=m),
        )))


def rank(rows) -> int:
    if not rows or not rows[0]:
        return 0
    return flint.fmpq_mat([[int(v) for v in r] for r in rows]).rank()


# --- split_pos_neg


@pytest.mark.parametrize("v, pos, neg", [
    ((2, -3, 0), (2, 0, 0), (0, 3, 0)),
    ((0, 0), (0, 0), (0, 0)),
    ((-1, -1), (0, 0), (1, 1)),
])
def test_split_pos_neg_examples(v, pos, neg):
    assert split_pos_neg(v) == (pos, neg)


@given(st.lists(st.integers(-9, 9), max_size=6))
def test_split_pos_neg_recombines(v):
    pos, neg = split_pos_neg(v)
    assert all(p >= 0 and q >= 0 and p * q == 0 for p, q in zip(pos, neg))
    assert tuple(p - q for p, q in zip(pos, neg)) == tuple(v)


# --- rational solving


def test_solve_rational_examples():
    x, basis = solve_rational(LinSys.of([[1, 1]], [2]))
    assert x == (2, 0) and basis == [(-1, 1)]
    assert solve_rational(LinSys.of([[1], [1]], [1, 2]))[0] is None
    x, _ = solve_rational(LinSys.of([[2, 4]], [3]))
    assert 2 * x[0] + 4 * x[1] == 3


@settings(max_examples=150, deadline=None)
@given(small_systems())
def test_solve_rational_against_rank(data):
    a, b = data
    sys = LinSys.of(a, b)
    x, basis = solve_rational(sys)
    consistent = rank(a) == rank([row + [v] for row, v in zip(a, b)])
    assert (x is not None) == consistent
    if x is not None:
        assert sys.satisfied_by(x)
    assert len(basis) == len(a[0]) - rank(a)
    for v in basis:
        assert sys.homogeneous().satisfied_by(v)
    if basis:
        assert rank(basis) == len(basis)


def test_kernel_basis_of_zero_matrix():
    assert kernel_basis(((0, 0),)) == [(1, 0), (0, 1)]


# --- integer solving


def test_solve_integer_examples():
    assert solve_integer(LinSys.of([[2]], [4])) == (2,)
    assert solve_integer(LinSys.of([[2]], [3])) is None
    x = solve_integer(LinSys.of([[2, 3]], [1]))
    assert 2 * x[0] + 3 * x[1] == 1


def test_solve_integer_rejects_fractions():
    with pytest.raises(InputError):
        solve_integer(LinSys.of([[F(1, 2)]], [1]))


@settings(max_examples=150, deadline=None)
@given(small_systems(max_rows=2, max_cols=3))
def test_solve_integer_against_box_search(data):
    a, b = data
    sys = LinSys.of(a, b)
    x = solve_integer(sys)
    if x is not None:
        assert sys.satisfied_by(x) and all(v.denominator == 1 for v in x)
    brute = any(sys.satisfied_by(p) for p in itertools.product(range(-6, 7), repeat=len(a[0])))
    if brute:
        assert x is not None


# --- simplex and strict feasibility


def test_feasible_nonneg_strict_examples():
    x = feasible_nonneg_strict(LinSys.of([[1, 1]], [1]), {0, 1})
    assert x[0] > 0 and x[1] > 0 and x[0] + x[1] == 1
    assert feasible_nonneg_strict(LinSys.of([[1, 1]], [0]), {0}) is None
    x = feasible_nonneg_strict(LinSys.of([[1, -1]], [0]), {0, 1})
    assert x[0] == x[1] > 0


def _float_threshold(a, b, strict):
    # maximise t <= 1 with x_i >= t on the strict set
    m, n = len(a), len(a[0])
    c = np.zeros(n + 1)
    c[n] = -1
    a_eq = np.hstack([np.array(a, float), np.zeros((m, 1))])
    a_ub = np.zeros((len(strict), n + 1))
    for q, i in enumerate(strict):
        a_ub[q, i], a_ub[q, n] = -1, 1
    res = linprog(c, A_ub=a_ub if strict else None, b_ub=np.zeros(len(strict)) if strict else None,
                  A_eq=a_eq, b_eq=np.array(b, float), bounds=[(0, None)] * n + [(0, 1)], method="highs")
    return None if res.status != 0 else -res.fun


@settings(max_examples=150, deadline=None)
@given(small_systems(), st.sets(st.integers(0, 3)))
def test_strict_feasibility_against_float_lp(data, strict):
    a, b = data
    strict = {i for i in strict if i < len(a[0])}
    sys = LinSys.of(a, b)
    x = feasible_nonneg_strict(sys, strict)
    t = _float_threshold(a, b, sorted(strict))
    if x is not None:
        assert sys.satisfied_by(x) and all(v >= 0 for v in x)
        assert all(x[i] > 0 for i in strict)
        assert t is not None
    else:
        assert t is None or t < 1e-9


@settings(max_examples=100, deadline=None)
@given(small_systems(), st.lists(st.integers(-3, 3), min_size=4, max_size=4))
def test_simplex_value_matches_float_lp(data, cost):
    a, b = data
    n = len(a[0])
    cost = cost[:n]
    res = simplex(LinSys.of(a, b).matrix, b, cost, n)
    ref = linprog(cost, A_eq=np.array(a, float), b_eq=np.array(b, float), bounds=[(0, None)] * n,
                  method="highs")
    expected = {0: "optimal", 2: "infeasible", 3: "unbounded"}[ref.status]
    assert res.status == expected
    if expected == "optimal":
        assert abs(float(res.value) - ref.fun) < 1e-7
        assert LinSys.of(a, b).satisfied_by(res.x)


# --- support-maximal solutions


@settings(max_examples=100, deadline=None)
@given(small_systems(max_cols=5))
def test_max_support_is_maximal(data):
    a, b = data
    n = len(a[0])
    rows = [{j: v for j, v in enumerate(r) if v} for r in a]
    x, support = max_support_sparse(rows, b, n)
    sys = LinSys.of(a, b)
    if x is None:
        assert feasible_nonneg_strict(sys) is None
        return
    assert sys.satisfied_by(x) and all(v >= 0 for v in x)
    assert support == {i for i in range(n) if x[i] > 0}
    for i in set(range(n)) - support:
        assert feasible_nonneg_strict(sys, {i}) is None
    cx, csupport = certified_max_support(rows, b, n)
    assert csupport == support and sys.satisfied_by(cx)


def test_max_support_respects_allowed():
    rows = [{0: 1, 1: 1, 2: -1}]
    x, support = max_support(rows, [0], 3, allowed={0, 2})
    assert support == {0, 2} and x[1] == 0


# --- bounded enumeration


@pytest.mark.parametrize("a, b, bound, expected", [
    ([[1, 1]], [2], 2, {(0, 2), (1, 1), (2, 0)}),
    ([[1]], [0], 5, {(0,)}),
    ([[1, -1]], [0], 1, {(0, 0), (1, 1)}),
])
def test_enumerate_examples(a, b, bound, expected):
    res = enumerate_n_solutions_bounded(LinSys.of(a, b), bound)
    assert res.complete and res.solutions == expected


@settings(max_examples=100, deadline=None)
@given(small_systems(max_rows=2, max_cols=3), st.integers(0, 3))
def test_enumerate_matches_product(data, bound):
    a, b = data
    sys = LinSys.of(a, b)
    brute = {p for p in itertools.product(range(bound + 1), repeat=len(a[0])) if sys.satisfied_by(p)}
    res = enumerate_n_solutions_bounded(sys, bound)
    assert res.complete and res.solutions == brute


def test_hybrid_linear_set_membership():
    h = hybrid_linear_set(LinSys.of([[1, -1]], [1]), 4)
    assert h.base == {(1, 0)} and h.periods == {(1, 1)}
    assert h.contains((4, 3)) and not h.contains((1, 1))
