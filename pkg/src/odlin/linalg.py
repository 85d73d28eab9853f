"""Exact rational and integer linear algebra.

Everything here works on :class:`fractions.Fraction` values. Vectors are
tuples, matrices are tuples of row tuples. No floating point is used.
"""

from __future__ import annotations

import itertools
import math
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Iterable, Sequence

Vec = tuple
Mat = tuple


class InputError(ValueError):
    """Raised when an argument violates an operation's precondition."""


def frac(x) -> Fraction:
    if isinstance(x, Fraction):
        return x
    if isinstance(x, float):
        raise InputError("floating point values are not accepted; use int, str or Fraction")
    return Fraction(x)


def vec(values: Iterable) -> Vec:
    return tuple(frac(v) for v in values)


def mat(rows: Iterable[Iterable]) -> Mat:
    out = tuple(vec(r) for r in rows)
    if out and len({len(r) for r in out}) != 1:
        raise InputError("matrix rows have different lengths")
    return out


def ncols(m: Mat) -> int:
    return len(m[0]) if m else 0


def column(m: Mat, j: int) -> Vec:
    return tuple(row[j] for row in m)


def columns(m: Mat) -> list[Vec]:
    return [column(m, j) for j in range(ncols(m))]


def from_columns(cols: Sequence[Sequence], nrows: int) -> Mat:
    return tuple(tuple(frac(c[i]) for c in cols) for i in range(nrows))


def hstack(blocks: Sequence[Mat], nrows: int) -> Mat:
    return tuple(tuple(itertools.chain.from_iterable(b[i] for b in blocks)) for i in range(nrows))


def matmul(a: Mat, b: Mat, inner: int | None = None) -> Mat:
    bc = ncols(b)
    return tuple(
        tuple(sum((row[k] * b[k][j] for k in range(len(row)) if row[k]), Fraction(0)) for j in range(bc))
        for row in a
    )


def matvec(a: Mat, x: Sequence) -> Vec:
    return tuple(sum((c * v for c, v in zip(row, x) if c and v), Fraction(0)) for row in a)


def is_integral(values: Iterable) -> bool:
    return all(frac(v).denominator == 1 for v in values)


def split_pos_neg(v: Sequence) -> tuple[Vec, Vec]:
    """Split an integer vector into its positive and negative parts.

    Returns ``(pos, neg)`` with ``v == pos - neg`` and both nonnegative.
    """
    v = vec(v)
    if not is_integral(v):
        raise InputError(f"non-integral entry in {v}")
    pos = tuple(x if x > 0 else Fraction(0) for x in v)
    neg = tuple(-x if x < 0 else Fraction(0) for x in v)
    return pos, neg


@dataclass(frozen=True)
class LinSys:
    """The system ``matrix @ x == rhs`` over ``nvars`` unknowns."""

    matrix: Mat
    rhs: Vec
    nvars: int = field(default=-1)

    def __post_init__(self):
        m = mat(self.matrix)
        b = vec(self.rhs)
        n = self.nvars if self.nvars >= 0 else ncols(m)
        if len(b) != len(m):
            raise InputError(f"rhs length {len(b)} != row count {len(m)}")
        if m and ncols(m) != n:
            raise InputError(f"matrix has {ncols(m)} columns, expected {n}")
        object.__setattr__(self, "matrix", m)
        object.__setattr__(self, "rhs", b)
        object.__setattr__(self, "nvars", n)

    @classmethod
    def of(cls, a, b, nvars: int = -1) -> "LinSys":
        return cls(mat(a), vec(b), nvars)

    @property
    def nrows(self) -> int:
        return len(self.matrix)

    def homogeneous(self) -> "LinSys":
        return LinSys(self.matrix, (Fraction(0),) * self.nrows, self.nvars)

    def satisfied_by(self, x: Sequence) -> bool:
        return len(x) == self.nvars and matvec(self.matrix, x) == self.rhs

    def with_rows(self, rows: Sequence[Sequence], rhs: Sequence) -> "LinSys":
        return LinSys(self.matrix + mat(rows), self.rhs + vec(rhs), self.nvars)


# ---------------------------------------------------------------------------
# Rational solving


def rref(rows: list[list[Fraction]], ncol: int) -> tuple[list[list[Fraction]], list[int]]:
    """Reduced row echelon form of the first ``ncol`` columns (extra columns ride along)."""
    rows = [list(r) for r in rows]
    pivots: list[int] = []
    r = 0
    for c in range(ncol):
        p = next((i for i in range(r, len(rows)) if rows[i][c] != 0), None)
        if p is None:
            continue
        rows[r], rows[p] = rows[p], rows[r]
        piv = rows[r][c]
        rows[r] = [v / piv for v in rows[r]]
        for i in range(len(rows)):
            if i != r and rows[i][c] != 0:
                f = rows[i][c]
                rows[i] = [a - f * b for a, b in zip(rows[i], rows[r])]
        pivots.append(c)
        r += 1
        if r == len(rows):
            break
    return rows, pivots


def solve_rational(sys: LinSys) -> tuple[Vec | None, list[Vec]]:
    """Particular rational solution and a kernel basis; solution is None if inconsistent."""
    n = sys.nvars
    rows = [list(row) + [b] for row, b in zip(sys.matrix, sys.rhs)]
    red, pivots = rref(rows, n)
    for row in red[len(pivots):]:
        if row[n] != 0:
            return None, _kernel(red, pivots, n)
    x = [Fraction(0)] * n
    for i, c in enumerate(pivots):
        x[c] = red[i][n]
    return tuple(x), _kernel(red, pivots, n)


def _kernel(red, pivots, n) -> list[Vec]:
    pivset = set(pivots)
    basis = []
    for free in range(n):
        if free in pivset:
            continue
        v = [Fraction(0)] * n
        v[free] = Fraction(1)
        for i, c in enumerate(pivots):
            v[c] = -red[i][free]
        basis.append(tuple(v))
    return basis


def kernel_basis(a: Mat, nvars: int | None = None) -> list[Vec]:
    n = ncols(a) if nvars is None else nvars
    return solve_rational(LinSys(a, (0,) * len(a), n))[1]


# ---------------------------------------------------------------------------
# Integer solving


def _egcd(a: int, b: int) -> tuple[int, int, int]:
    x0, y0, x1, y1 = 1, 0, 0, 1
    while b:
        q, a, b = a // b, b, a % b
        x0, x1 = x1, x0 - q * x1
        y0, y1 = y1, y0 - q * y1
    return a, x0, y0


def solve_integer(sys: LinSys) -> Vec | None:
    """An integer solution of the system, or None if there is none.

    Column-style integer elimination: unimodular column operations bring the
    matrix to lower echelon form ``H = A @ U``; ``H @ y = b`` is solved by
    forward substitution and ``x = U @ y``.
    """
    if not (is_integral(itertools.chain.from_iterable(sys.matrix)) and is_integral(sys.rhs)):
        raise InputError("solve_integer needs integral coefficients and rhs")
    m, n = sys.nrows, sys.nvars
    # columns of A and of U, as mutable integer lists
    acols = [[int(sys.matrix[i][j]) for i in range(m)] for j in range(n)]
    ucols = [[int(i == j) for i in range(n)] for j in range(n)]
    b = [int(v) for v in sys.rhs]

    pivrows: list[int] = []
    p = 0
    for i in range(m):
        if p == n:
            break
        for j in range(p + 1, n):
            c = acols[j][i]
            if c == 0:
                continue
            a = acols[p][i]
            if a == 0:
                acols[p], acols[j] = acols[j], acols[p]
                ucols[p], ucols[j] = ucols[j], ucols[p]
                continue
            g, s, t = _egcd(a, c)
            ag, cg = a // g, c // g
            acols[p], acols[j] = (
                [s * x + t * y for x, y in zip(acols[p], acols[j])],
                [-cg * x + ag * y for x, y in zip(acols[p], acols[j])],
            )
            ucols[p], ucols[j] = (
                [s * x + t * y for x, y in zip(ucols[p], ucols[j])],
                [-cg * x + ag * y for x, y in zip(ucols[p], ucols[j])],
            )
        if acols[p][i] != 0:
            pivrows.append(i)
            p += 1

    y = [0] * n
    for k, i in enumerate(pivrows):
        r = b[i] - sum(acols[l][i] * y[l] for l in range(k))
        q, rem = divmod(r, acols[k][i])
        if rem:
            return None
        y[k] = q
    x = tuple(Fraction(sum(ucols[k][v] * y[k] for k in range(len(pivrows)))) for v in range(n))
    if matvec(sys.matrix, x) != sys.rhs:
        return None
    return x


# ---------------------------------------------------------------------------
# Exact simplex


class PivotLimitExceeded(AssertionError):
    pass


@dataclass
class LPResult:
    status: str  # "optimal" | "infeasible" | "unbounded"
    x: Vec | None = None
    value: Fraction | None = None
    pivots: int = 0


class _Tableau:
    """Sparse tableau: each row is a dict col -> coefficient, rhs kept apart."""

    def __init__(self, rows, rhs, ncol):
        self.rows = rows
        self.rhs = rhs
        self.ncol = ncol
        self.basis: list[int] = []
        self.obj: dict[int, Fraction] = {}
        self.objval = Fraction(0)  # negated objective value
        self.pivots = 0

    def set_objective(self, cost: dict[int, Fraction]):
        obj = dict(cost)
        val = Fraction(0)
        for r, bcol in enumerate(self.basis):
            cb = cost.get(bcol)
            if cb:
                for c, v in self.rows[r].items():
                    nv = obj.get(c, 0) - cb * v
                    if nv:
                        obj[c] = nv
                    else:
                        obj.pop(c, None)
                val -= cb * self.rhs[r]
        self.obj = obj
        self.objval = val

    def pivot(self, r: int, j: int):
        row = self.rows[r]
        piv = row[j]
        if piv != 1:
            row = {c: v / piv for c, v in row.items()}
            self.rows[r] = row
            self.rhs[r] /= piv
        rr = self.rhs[r]
        for i, other in enumerate(self.rows):
            if i == r:
                continue
            f = other.get(j)
            if f is None:
                continue
            for c, v in row.items():
                nv = other.get(c, 0) - f * v
                if nv:
                    other[c] = nv
                else:
                    other.pop(c, None)
            self.rhs[i] -= f * rr
        f = self.obj.get(j)
        if f is not None:
            for c, v in row.items():
                nv = self.obj.get(c, 0) - f * v
                if nv:
                    self.obj[c] = nv
                else:
                    self.obj.pop(c, None)
            self.objval -= f * rr
        self.basis[r] = j
        self.pivots += 1

    def minimize(self, allowed, limit: int) -> str:
        # Dantzig's rule while the objective strictly improves; after the
        # first degenerate pivot, Bland's least-index rule for good.
        bland = False
        while True:
            cands = [(v, c) for c, v in self.obj.items() if v < 0 and allowed(c)]
            if not cands:
                return "optimal"
            j = min(c for _, c in cands) if bland else min(cands)[1]
            best = None
            for i, row in enumerate(self.rows):
                a = row.get(j)
                if a is not None and a > 0:
                    key = (self.rhs[i] / a, self.basis[i])
                    if best is None or key < best[0]:
                        best = (key, i)
            if best is None:
                return "unbounded"
            if best[0][0] == 0:
                bland = True
            self.pivot(best[1], j)
            if self.pivots > limit:
                raise PivotLimitExceeded(f"simplex exceeded {limit} pivots")


def simplex(a: Mat, b: Sequence, cost: Sequence, nvars: int | None = None) -> LPResult:
    """Minimize ``cost @ x`` subject to ``a @ x == b`` and ``x >= 0``, exactly.

    Two-phase simplex on a sparse tableau with an anti-cycling pivot rule.
    """
    n = ncols(a) if nvars is None else nvars
    rows = [{j: frac(v) for j, v in enumerate(row) if v} for row in a]
    return simplex_sparse(rows, b, {j: frac(c) for j, c in enumerate(cost) if c}, n)


def simplex_sparse(rows: Sequence[dict], b: Sequence, cost: dict, n: int) -> LPResult:
    """:func:`simplex` for constraint rows given as ``{column: coefficient}`` dicts."""
    m = len(rows)
    trows, rhs = [], []
    for row, bi in zip(rows, b):
        bi = frac(bi)
        sign = -1 if bi < 0 else 1
        trows.append({j: sign * frac(v) for j, v in row.items() if v})
        rhs.append(sign * bi)
    # artificial variables n .. n+m-1
    for i in range(m):
        trows[i][n + i] = Fraction(1)
    t = _Tableau(trows, rhs, n + m)
    t.basis = list(range(n, n + m))
    limit = math.comb(n + m, m) if m else 0
    limit = max(limit, 1)

    t.set_objective({n + i: Fraction(1) for i in range(m)})
    t.minimize(lambda c: True, limit)
    if t.objval != 0:
        return LPResult("infeasible", pivots=t.pivots)

    # drive artificials out of the basis, dropping redundant rows
    r = 0
    while r < len(t.rows):
        if t.basis[r] >= n:
            j = next((c for c in sorted(t.rows[r]) if c < n), None)
            if j is None:
                del t.rows[r], t.rhs[r], t.basis[r]
                continue
            t.pivot(r, j)
        r += 1
    for row in t.rows:
        for c in [c for c in row if c >= n]:
            del row[c]

    t.set_objective({j: frac(c) for j, c in cost.items() if c})
    status = t.minimize(lambda c: c < n, limit)
    x = [Fraction(0)] * n
    for r, bcol in enumerate(t.basis):
        x[bcol] = t.rhs[r]
    if status == "unbounded":
        return LPResult("unbounded", tuple(x), None, t.pivots)
    return LPResult("optimal", tuple(x), -t.objval, t.pivots)


def feasible_nonneg_strict(sys: LinSys, strict: Iterable[int] = ()) -> Vec | None:
    """A solution ``x >= 0`` of the system with ``x[i] > 0`` for ``i in strict``.

    Maximizes a threshold ``t`` (capped at 1) with ``x[i] >= t`` on the strict
    set; the solution set is convex, so a positive optimum is equivalent to
    existence.
    """
    strict = sorted(set(strict))
    n = sys.nvars
    if any(i < 0 or i >= n for i in strict):
        raise InputError("strict index out of range")
    if not strict:
        res = simplex(sys.matrix, sys.rhs, (), n)
        return None if res.status == "infeasible" else res.x
    k = len(strict)
    # variables: x (n), t, s_1..s_k, u  with x_i - t - s_i = 0 and t + u = 1
    tcol, scol0, ucol = n, n + 1, n + 1 + k
    total = n + k + 2
    zeros = (Fraction(0),) * (total - n)
    rows = [row + zeros for row in sys.matrix]
    rhs = list(sys.rhs)
    for q, i in enumerate(strict):
        row = [Fraction(0)] * total
        row[i] = Fraction(1)
        row[tcol] = Fraction(-1)
        row[scol0 + q] = Fraction(-1)
        rows.append(tuple(row))
        rhs.append(Fraction(0))
    row = [Fraction(0)] * total
    row[tcol] = row[ucol] = Fraction(1)
    rows.append(tuple(row))
    rhs.append(Fraction(1))
    cost = [Fraction(0)] * total
    cost[tcol] = Fraction(-1)
    res = simplex(tuple(rows), rhs, cost, total)
    if res.status != "optimal" or res.value >= 0:
        return None
    return res.x[:n]


def max_support_sparse(rows: Sequence[dict], rhs: Sequence, n: int,
                       allowed: Iterable[int] | None = None) -> tuple[Vec | None, set]:
    """A solution of ``rows @ x == rhs, x >= 0`` with maximal support.

    Variables outside ``allowed`` are fixed to zero. Works on the cone
    ``rows @ x == s * rhs``: first any point with ``s > 0``, then repeatedly
    a point positive somewhere outside the support found so far, normalised
    by ``sum == 1`` over those variables. The sum of all points, divided by
    its ``s``, is the answer. Returns ``(None, set())`` when infeasible.
    """
    allowed = sorted(set(range(n)) if allowed is None else set(allowed))
    local = {v: q for q, v in enumerate(allowed)}
    k = len(allowed)
    s_col, norm_col = k, k + 1
    cone = []
    for row, b in zip(rows, rhs):
        r = {local[c]: frac(v) for c, v in row.items() if c in local and v}
        if b:
            r[s_col] = -frac(b)
        if r:
            cone.append(r)

    def lp(target: list[int]):
        norm = {q: Fraction(1) for q in target}
        norm[norm_col] = Fraction(1)
        res = simplex_sparse(cone + [norm], [0] * len(cone) + [1], {q: Fraction(-1) for q in target}, k + 2)
        if res.status != "optimal" or res.value == 0:
            return None
        return res.x

    first = lp([s_col])
    if first is None:
        return None, set()
    total = list(first[: k + 1])
    positive = {q for q in range(k) if total[q] > 0}
    while True:
        rest = [q for q in range(k) if q not in positive]
        if not rest:
            break
        more = lp(rest)
        if more is None:
            break
        for q in range(k + 1):
            total[q] += more[q]
        positive |= {q for q in rest if more[q] > 0}
    x = [Fraction(0)] * n
    for q, v in enumerate(allowed):
        x[v] = total[q] / total[s_col]
    return tuple(x), {allowed[q] for q in positive}


# ---------------------------------------------------------------------------
# Bounded nonnegative integer enumeration


@dataclass
class Enumeration:
    solutions: set
    complete: bool


def enumerate_n_solutions_bounded(sys: LinSys, entry_bound: int, budget: int = 1_000_000,
                                  limit: int | None = None, upper: Sequence[int] | None = None) -> Enumeration:
    """All solutions in ``{0..entry_bound}^n`` by depth-first search with interval pruning.

    ``upper`` optionally tightens the bound per variable. ``complete`` is
    False when the node budget ran out or the search stopped after ``limit``
    solutions; the returned set is then a subset of the true one.
    """
    if entry_bound < 0:
        raise InputError("entry_bound must be nonnegative")
    n, a, b = sys.nvars, sys.matrix, sys.rhs
    ub = [entry_bound] * n if upper is None else [min(entry_bound, int(u)) for u in upper]
    rows = [[int(v) if v.denominator == 1 else v for v in row] for row in a]
    # suffix interval of reachable contributions per row
    lo = [[0] * (n + 1) for _ in rows]
    hi = [[0] * (n + 1) for _ in rows]
    for r, row in enumerate(rows):
        for j in range(n - 1, -1, -1):
            c = row[j]
            lo[r][j] = lo[r][j + 1] + min(0, c * ub[j])
            hi[r][j] = hi[r][j + 1] + max(0, c * ub[j])
    out: set = set()
    nodes = 0
    partial = [0] * n
    residual = list(b)

    def dfs(j: int) -> bool:
        nonlocal nodes
        nodes += 1
        if nodes > budget:
            return False
        for r in range(len(rows)):
            if not lo[r][j] <= residual[r] <= hi[r][j]:
                return True
        if j == n:
            out.add(tuple(Fraction(v) for v in partial))
            return limit is None or len(out) < limit
        for v in range(ub[j] + 1):
            partial[j] = v
            for r, row in enumerate(rows):
                residual[r] -= row[j] * v
            ok = dfs(j + 1)
            for r, row in enumerate(rows):
                residual[r] += row[j] * v
            if not ok:
                partial[j] = 0
                return False
        partial[j] = 0
        return True

    complete = dfs(0)
    return Enumeration(out, complete)


def _minimal(vectors: Iterable[Vec]) -> set:
    vs = sorted(set(vectors), key=sum)
    keep: list[Vec] = []
    for v in vs:
        if not any(all(a <= c for a, c in zip(k, v)) for k in keep):
            keep.append(v)
    return set(keep)


@dataclass(frozen=True)
class HybridLinearSet:
    """``base + periods^⊕``: finite base and period sets; sums of periods are implicit."""

    base: frozenset
    periods: frozenset
    complete: bool = True

    def contains(self, x: Sequence, max_terms: int = 64) -> bool:
        """Membership by bounded search over period multiplicities."""
        x = vec(x)
        periods = sorted(self.periods)

        def reach(rest: Vec, start: int, depth: int) -> bool:
            if all(v == 0 for v in rest):
                return True
            if depth == 0:
                return False
            for q in range(start, len(periods)):
                p = periods[q]
                nxt = tuple(a - c for a, c in zip(rest, p))
                if all(v >= 0 for v in nxt) and reach(nxt, q, depth - 1):
                    return True
            return False

        for bvec in self.base:
            rest = tuple(a - c for a, c in zip(x, bvec))
            if all(v >= 0 for v in rest) and reach(rest, 0, max_terms):
                return True
        return False


def hybrid_linear_set(sys: LinSys, entry_bound: int, budget: int = 1_000_000) -> HybridLinearSet:
    """Minimal solutions and minimal nonzero homogeneous solutions within the box."""
    sols = enumerate_n_solutions_bounded(sys, entry_bound, budget)
    hom = enumerate_n_solutions_bounded(sys.homogeneous(), entry_bound, budget)
    periods = _minimal(v for v in hom.solutions if any(v))
    return HybridLinearSet(frozenset(_minimal(sols.solutions)), frozenset(periods), sols.complete and hom.complete)
