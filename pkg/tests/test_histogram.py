from fractions import Fraction as F

import pytest
from hypothesis import given, settings, strategies as st

from odlin.histogram import (
    RATIONAL,
    SimpleHistogram,
    StackLayout,
    add_matrices,
    decompose,
    is_histogram,
    is_histogram_via_profile,
    is_multihistogram,
    mul_simple,
    profile,
    recover_simple,
    smear,
)
from odlin.linalg import InputError

DEG2 = ((1, 1, 0, 0, 0), (0, 0, 2, 0, 0), (0, 0, 0, 1, 1))
EX_M = ((1, 2), (3, 0), (0, 2))
SMEAR_IN = ((3, 0, 0, 1, 0, 0, 0), (0, 1, 0, 0, 3, 0, 0), (0, 0, 0, 1, 0, 1, 2))
SMEAR_OUT = ((3, 0, 0, 1, 0, 0, 0, 0), (0, 1, 0, 0, 2, 1, 0, 0), (0, 0, 0, 1, 0, 0, 1, 2))


def dominance_by_definition(m) -> bool:
    """Row sums equal and sum(H[i, :j]) >= sum(H[i+1, :j+1]) for every j, straight from the sums."""
    if any(v < 0 for row in m for v in row):
        return False
    if len({sum(r) for r in m}) > 1:
        return False
    c = len(m[0]) if m else 0
    return all(sum(m[i][:j]) >= sum(m[i + 1][:j + 1]) for i in range(len(m) - 1) for j in range(c))


matrices = st.integers(1, 4).flatmap(lambda r: st.integers(1, 5).flatmap(
    lambda c: st.lists(st.lists(st.integers(0, 3), min_size=c, max_size=c), min_size=r, max_size=r)))


def simple_maps(r, c):
    return st.lists(st.integers(0, c - 1), min_size=r, max_size=r, unique=True).map(sorted).map(tuple)


histograms = st.integers(1, 4).flatmap(lambda r: st.integers(r, 6).flatmap(
    lambda c: st.lists(simple_maps(r, c), min_size=1, max_size=4).map(
        lambda fs: add_matrices([SimpleHistogram(f, c).matrix for f in fs], r, c))))


def test_is_histogram_examples():
    check = is_histogram(DEG2)
    assert check.ok and check.degree == 2
    bad = is_histogram(((1, 0), (1, 0)))
    assert not bad.ok and bad.where == (0, 0)
    assert is_histogram(((1, 0), (0, 1))).degree == 1


def test_is_histogram_modes():
    half = ((F(1, 2), F(1, 2), 0), (0, F(1, 2), F(1, 2)))
    assert not is_histogram(half)
    assert is_histogram(half, RATIONAL)


@settings(max_examples=300)
@given(matrices)
def test_histogram_tests_agree_with_definition(m):
    expected = dominance_by_definition(m)
    assert bool(is_histogram(m)) == expected
    assert is_histogram_via_profile(m) == expected


def test_profile_examples():
    assert profile(((1, 0), (0, 1))) == ((0, 0),)
    assert profile(((1, 2, 3),)) == ()
    prof = profile(DEG2)
    assert [row[-1] for row in prof] == [0, 0]
    assert all(v >= 0 for row in prof for v in row)


@given(histograms)
def test_histogram_profiles_end_in_zero(h):
    assert all(row[-1] == 0 and min(row) >= 0 for row in profile(h))


def test_decompose_example():
    parts = decompose(DEG2)
    assert [s.f for s in parts] == [(0, 2, 3), (1, 2, 4)]
    assert parts[0].matrix == ((1, 0, 0, 0, 0), (0, 0, 1, 0, 0), (0, 0, 0, 1, 0))
    assert parts[1].matrix == ((0, 1, 0, 0, 0), (0, 0, 1, 0, 0), (0, 0, 0, 0, 1))


def test_decompose_simple_and_multiples():
    s = SimpleHistogram((0, 2), 3)
    assert decompose(s.matrix) == [s]
    triple = tuple(tuple(3 * v for v in row) for row in s.matrix)
    assert decompose(triple) == [s, s, s]


@given(histograms)
def test_decompose_resums(h):
    parts = decompose(h)
    assert len(parts) == is_histogram(h).degree
    assert add_matrices([s.matrix for s in parts], len(h), len(h[0])) == h


def test_decompose_rejects_non_histograms():
    with pytest.raises(InputError):
        decompose(((1, 0), (1, 0)))


def test_mul_simple_examples():
    assert mul_simple(EX_M, SimpleHistogram((0, 2), 4)) == ((1, 0, 2, 0), (3, 0, 0, 0), (0, 0, 2, 0))
    assert mul_simple(EX_M, SimpleHistogram((0, 1), 2)) == EX_M
    assert mul_simple(((5,),), SimpleHistogram((1,), 2)) == ((0, 5),)


def test_recover_simple_examples():
    assert recover_simple(((1, 0, 2, 0), (3, 0, 0, 0), (0, 0, 2, 0)), EX_M).f == (0, 2)
    assert recover_simple(EX_M, EX_M).f == (0, 1)
    assert recover_simple(((0, 0),), ((1,),)) is None


@settings(max_examples=100)
@given(st.integers(1, 3).flatmap(lambda k: st.tuples(
    st.lists(st.lists(st.integers(-2, 2), min_size=k, max_size=k), min_size=2, max_size=2),
    st.integers(k, 6).flatmap(lambda c: simple_maps(k, c).map(lambda f: (f, c))))))
def test_recover_inverts_mul(data):
    m, (f, c) = data
    m = tuple(map(tuple, m))
    n = mul_simple(m, SimpleHistogram(f, c))
    s = recover_simple(n, m)
    assert s is not None and mul_simple(m, s) == n


def test_smear_example():
    assert smear(SMEAR_IN, 4, (0, 2, 0), (0, 1, 0)) == SMEAR_OUT


def test_smear_trivial_splits():
    h = ((1, 1), (0, 2))
    assert smear(h, 0, (1, 0), (0, 0)) == ((1, 0, 1), (0, 0, 2))
    assert smear(h, 0, (0, 0), (1, 0)) == ((0, 1, 1), (0, 0, 2))
    with pytest.raises(InputError):
        smear(h, 1, (1, 1), (1, 1))


@given(histograms, st.data())
def test_smear_preserves_histograms(h, data):
    j = data.draw(st.integers(0, len(h[0]) - 1))
    left = tuple(data.draw(st.integers(0, int(h[i][j]))) for i in range(len(h)))
    right = tuple(h[i][j] - left[i] for i in range(len(h)))
    assert is_histogram(smear(h, j, left, right))


def test_is_multihistogram_examples():
    zero_target = ((), ())
    assert is_multihistogram([((0, 0),)], zero_target, [((1,), (-1,))], ncol=2)
    d = ((1, 2), (3, 0))
    assert is_multihistogram([((1, 0), (0, 1))], d, [d])
    assert not is_multihistogram([((1, 0), (1, 0))], d, [d])


def test_stack_layout():
    lay = StackLayout((2, 3))
    assert lay.places == [(0, 0), (1, 0), (1, 1)]
    assert lay.consume_row == [1, 3, 4] and lay.produce_row == [0, 2, 3]
    assert lay.consume((0, 1, 2, 3, 4)) == (1, 3, 4)
