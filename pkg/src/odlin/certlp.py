"""Support-maximal nonnegative solutions, guessed in floating point and certified exactly.

The floating-point LP only proposes a support set ``S``. The answer is
accepted when two exact certificates check out:

* a rational point of the homogenised cone that is positive exactly on ``S``;
* a rational vector ``u`` with ``u @ A`` zero on ``S`` and positive on every
  other allowed column, which forces those columns to zero on the cone.

When either certificate fails the caller falls back to the exact simplex.
"""

from __future__ import annotations

import math
from fractions import Fraction
from typing import Iterable, Sequence

import flint
import numpy as np
from scipy.optimize import linprog
from scipy.sparse import coo_matrix, hstack as sp_hstack, identity

from .linalg import Vec, frac, max_support_sparse


class CertificateFailed(RuntimeError):
    pass


def _integer_rows(rows, rhs, cols):
    """Cone rows ``A x - b s`` over the local columns, scaled to integers."""
    local = {v: q for q, v in enumerate(cols)}
    s_col = len(cols)
    out = []
    for row, b in zip(rows, rhs):
        r = {local[c]: frac(v) for c, v in row.items() if c in local and v}
        if b:
            r[s_col] = -frac(b)
        if not r:
            continue
        scale = math.lcm(*(v.denominator for v in r.values()))
        out.append({c: int(v * scale) for c, v in r.items()})
    return out


def _sparse(rows, ncol):
    data, ri, ci = [], [], []
    for i, r in enumerate(rows):
        for c, v in r.items():
            ri.append(i)
            ci.append(c)
            data.append(float(v))
    return coo_matrix((data, (ri, ci)), shape=(len(rows), ncol)).tocsr()


def _guess_support(rows, k) -> set:
    # maximise sum(y) with y <= z, 0 <= y <= 1 over the cone rows @ z == 0
    a = _sparse(rows, k)
    m = a.shape[0]
    eye = identity(k, format="csr")
    a_eq = sp_hstack([a, coo_matrix((m, k))]).tocsr() if m else None
    a_ub = sp_hstack([-eye, eye]).tocsr()
    res = linprog(
        np.concatenate([np.zeros(k), -np.ones(k)]),
        A_ub=a_ub, b_ub=np.zeros(k),
        A_eq=a_eq, b_eq=np.zeros(m) if m else None,
        bounds=[(0, None)] * k + [(0, 1)] * k,
        method="highs",
    )
    if res.status != 0:
        raise CertificateFailed(f"floating-point LP status {res.status}")
    return {q for q in range(k) if res.x[k + q] > 0.5}, res.x[:k]


def _solve_near(rows: list, rhs: list, ncol: int, guess) -> list:
    """Exact solution of ``rows @ x == rhs`` whose free coordinates copy ``guess``.

    ``rows`` are integer ``{column: value}`` dicts. The fraction-free reduced
    form fixes the pivot coordinates from the free ones.
    """
    if not rows:
        return [Fraction(v).limit_denominator(1 << 20) for v in guess]
    dense = [[0] * (ncol + 1) for _ in rows]
    for i, (r, b) in enumerate(zip(rows, rhs)):
        for c, v in r.items():
            dense[i][c] = v
        dense[i][ncol] = b
    red, den, rank = flint.fmpz_mat(dense).rref()
    red = [[int(v) for v in row] for row in red.tolist()[:rank]]
    den = int(den)
    pivots = [next(j for j, v in enumerate(row) if v) for row in red]
    if pivots and pivots[-1] == ncol:
        raise CertificateFailed("active constraints are inconsistent")
    pivset = set(pivots)
    x = [Fraction(0)] * ncol
    free = [j for j in range(ncol) if j not in pivset]
    for j in free:
        x[j] = Fraction(float(guess[j])).limit_denominator(1 << 20)
    for row, p in zip(red, pivots):
        acc = sum((row[j] * x[j] for j in free if row[j]), Fraction(0))
        x[p] = (row[ncol] - acc) / den
    return x


def _positive_point(rows, support: list, guess) -> dict:
    """Exact point of the cone positive exactly on ``support``."""
    if not support:
        return {}
    local = {c: q for q, c in enumerate(support)}
    sub = [{local[c]: v for c, v in r.items() if c in local} for r in rows]
    sub = [r for r in sub if r]
    x = _solve_near(sub, [0] * len(sub), len(support), [max(guess[c], 1.0) for c in support])
    if any(v <= 0 for v in x):
        raise CertificateFailed("recovered point leaves the positive orthant")
    return dict(zip(support, x))


def _separator(rows, support: list, others: list) -> list:
    """Exact ``u`` with ``u @ A`` zero on ``support`` and positive on ``others``."""
    if not others:
        return []
    nrow = len(rows)
    if nrow == 0:
        raise CertificateFailed("no rows to separate with")
    # columns of A as rows over u
    cols: dict = {}
    for i, r in enumerate(rows):
        for c, v in r.items():
            cols.setdefault(c, {})[i] = v
    eq = [cols[c] for c in support if c in cols]
    ub = [cols.get(c, {}) for c in others]
    # minimise the total slack so the answer sits on a vertex
    cost = np.zeros(nrow)
    for r in ub:
        for i, v in r.items():
            cost[i] += v
    res = linprog(
        cost,
        A_ub=-_sparse(ub, nrow), b_ub=-np.ones(len(ub)),
        A_eq=_sparse(eq, nrow) if eq else None, b_eq=np.zeros(len(eq)) if eq else None,
        bounds=[(None, None)] * nrow,
        method="highs",
    )
    if res.status != 0:
        raise CertificateFailed(f"separator LP status {res.status}")
    u0 = res.x
    tight = [r for r in ub if abs(sum(v * u0[i] for i, v in r.items()) - 1) < 1e-7]
    u = _solve_near(eq + tight, [0] * len(eq) + [1] * len(tight), nrow, u0)
    if any(sum(v * u[i] for i, v in r.items()) <= 0 for r in ub):
        raise CertificateFailed("recovered separator fails")
    return u


def certified_max_support(rows: Sequence[dict], rhs: Sequence, n: int,
                          allowed: Iterable[int] | None = None) -> tuple[Vec | None, set]:
    """Same contract as :func:`odlin.linalg.max_support_sparse`."""
    cols = sorted(set(range(n)) if allowed is None else set(allowed))
    k = len(cols) + 1
    s_col = k - 1
    irows = _integer_rows(rows, rhs, cols)
    support, guess = _guess_support(irows, k)
    sup = sorted(support)
    others = [q for q in range(k) if q not in support]
    point = _positive_point(irows, sup, guess)
    _separator(irows, sup, others)
    if s_col not in support:
        return None, set()
    s = point[s_col]
    x = [Fraction(0)] * n
    for q, v in point.items():
        if q != s_col:
            x[cols[q]] = v / s
    return tuple(x), {cols[q] for q in sup if q != s_col}


def max_support(rows: Sequence[dict], rhs: Sequence, n: int,
                allowed: Iterable[int] | None = None) -> tuple[Vec | None, set]:
    """Certified floating-point guess, falling back to the exact simplex."""
    try:
        return certified_max_support(rows, rhs, n, allowed)
    except CertificateFailed:
        return max_support_sparse(rows, rhs, n, allowed)
