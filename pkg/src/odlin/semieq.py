"""Linear equations with implications ``x_i > 0 => x_j > 0`` over nonnegative rationals."""

from __future__ import annotations

import itertools
from dataclasses import dataclass
from fractions import Fraction
from typing import Iterable

from .linalg import InputError, LinSys, Vec, feasible_nonneg_strict


@dataclass(frozen=True)
class SemiEq:
    system: LinSys
    implications: frozenset = frozenset()

    def __post_init__(self):
        imps = frozenset((int(i), int(j)) for i, j in self.implications)
        n = self.system.nvars
        for i, j in imps:
            if not (0 <= i < n and 0 <= j < n):
                raise InputError(f"implication ({i}, {j}) outside 0..{n - 1}")
        object.__setattr__(self, "implications", imps)

    @property
    def nvars(self) -> int:
        return self.system.nvars

    def satisfied_by(self, x) -> bool:
        return (
            all(v >= 0 for v in x)
            and self.system.satisfied_by(x)
            and all(not x[i] > 0 or x[j] > 0 for i, j in self.implications)
        )


def _restricted(sys: LinSys, active: set) -> LinSys:
    n = sys.nvars
    rows = [tuple(Fraction(int(c == i)) for c in range(n)) for i in range(n) if i not in active]
    return sys.with_rows(rows, [0] * len(rows)) if rows else sys


def max_support_solution(sys: LinSys, active: set | None = None) -> tuple[Vec | None, set]:
    """A nonnegative solution of maximal support, restricted to ``active`` variables.

    Returns ``(x, support)``; x is None when the restricted system is infeasible.
    Each LP witness reveals a whole support class, so variables already seen
    positive are not tested again.
    """
    active = set(range(sys.nvars)) if active is None else set(active)
    rs = _restricted(sys, active)
    base = feasible_nonneg_strict(rs)
    if base is None:
        return None, set()
    witnesses = [base]
    positive = {i for i, v in enumerate(base) if v > 0}
    for i in sorted(active):
        if i in positive:
            continue
        w = feasible_nonneg_strict(rs, {i})
        if w is not None:
            witnesses.append(w)
            positive |= {q for q, v in enumerate(w) if v > 0}
    k = len(witnesses)
    avg = tuple(sum(col, Fraction(0)) / k for col in zip(*witnesses))
    return avg, positive


def solve_qplus(se: SemiEq) -> Vec | None:
    """Nonnegative rational solution of a semi-equation, or None.

    Saturation: keep an active variable set (initially all). Compute a
    support-maximal solution over it; every implication ``i => j`` whose
    ``j`` is zero on all such solutions forces ``x_i = 0``, so ``i`` leaves
    the active set. Stops when no implication is violated (accept) or the
    restricted system is infeasible (reject).
    """
    active = set(range(se.nvars))
    while True:
        x, support = max_support_solution(se.system, active)
        if x is None:
            return None
        dead = {i for i, j in se.implications if i in support and j not in support}
        if not dead:
            assert se.satisfied_by(x)
            return x
        active -= dead


class BudgetExceeded(RuntimeError):
    pass


def oracle_subset(se: SemiEq, max_vars: int = 16) -> Vec | None:
    """Reference oracle: try every implication-closed support set."""
    n = se.nvars
    if n > max_vars:
        raise BudgetExceeded(f"{n} variables exceeds the oracle limit of {max_vars}")
    for size in range(n + 1):
        for combo in itertools.combinations(range(n), size):
            s = set(combo)
            if any(i in s and j not in s for i, j in se.implications):
                continue
            x = feasible_nonneg_strict(_restricted(se.system, s), s)
            if x is not None:
                assert se.satisfied_by(x)
                return x
    return None


def semieq_from_lists(a, b, implications: Iterable = (), nvars: int = -1) -> SemiEq:
    return SemiEq(LinSys.of(a, b, nvars), frozenset(tuple(p) for p in implications))


class SemiEqBuilder:
    """Incrementally allocate variables and sparse equations, then freeze a SemiEq."""

    def __init__(self):
        self.nvars = 0
        self.rows: list[dict] = []
        self.rhs: list[Fraction] = []
        self.implications: set = set()

    def new_vars(self, k: int) -> list[int]:
        out = list(range(self.nvars, self.nvars + k))
        self.nvars += k
        return out

    def add_eq(self, coeffs: dict, rhs=0) -> None:
        row = {i: Fraction(c) for i, c in coeffs.items() if c}
        if row or rhs:
            self.rows.append(row)
            self.rhs.append(Fraction(rhs))

    def add_sum_eq(self, terms: Iterable[tuple], rhs=0) -> None:
        """Equation from ``(coefficient, variable)`` pairs; repeated variables add up."""
        acc: dict = {}
        for c, i in terms:
            acc[i] = acc.get(i, 0) + c
        self.add_eq(acc, rhs)

    def implies(self, i: int, j: int) -> None:
        self.implications.add((i, j))

    def build(self) -> SemiEq:
        n = self.nvars
        matrix = tuple(tuple(row.get(c, Fraction(0)) for c in range(n)) for row in self.rows)
        return SemiEq(LinSys(matrix, tuple(self.rhs), n), frozenset(self.implications))
