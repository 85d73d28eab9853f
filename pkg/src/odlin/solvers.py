"""Deciding whether a target data vector is an X-exchange-product of generators.

All solvers take a :class:`~odlin.datavec.MatrixInstance`. Witnesses are
lists of :class:`Term`: a coefficient, a generator index and a strictly
increasing placement of that generator's columns into ``slots`` shared
slots. The scaled, placed generators must sum to a 0-extension of the
target.
"""

from __future__ import annotations

import itertools
from collections import deque
from dataclasses import dataclass
from fractions import Fraction
from typing import Sequence

from .datavec import MatrixInstance, check_placement
from .histogram import (
    INTEGER,
    StackLayout,
    add_matrices,
    decompose,
    is_multihistogram,
    recover_simple,
)
from .linalg import (
    InputError,
    LinSys,
    Vec,
    column,
    columns,
    enumerate_n_solutions_bounded,
    feasible_nonneg_strict,
    from_columns,
    hstack,
    ncols,
    solve_integer,
    solve_rational,
)

SOLVABLE = "solvable"
UNSOLVABLE = "unsolvable"
UNKNOWN = "unknown"

DOMAINS = ("N", "Z", "Q", "Qplus")


@dataclass(frozen=True)
class Term:
    coeff: Fraction
    vector: int
    placement: tuple


@dataclass
class Verdict:
    status: str
    witness: list | None = None
    slots: int = 0
    domain: str = ""
    evidence: Vec | None = None
    note: str = ""

    @property
    def solvable(self) -> bool:
        return self.status == SOLVABLE


def in_domain(c: Fraction, domain: str) -> bool:
    if domain == "Q":
        return True
    if domain == "Qplus":
        return c >= 0
    if domain == "Z":
        return c.denominator == 1
    if domain == "N":
        return c.denominator == 1 and c >= 0
    raise InputError(f"unknown domain {domain!r}")


def placed_sum(inst: MatrixInstance, witness: Sequence[Term], slots: int) -> tuple:
    acc = [[Fraction(0)] * slots for _ in range(inst.dimension)]
    for t in witness:
        g = inst.generators[t.vector]
        if len(t.placement) != ncols(g):
            raise InputError(f"term {t} places {len(t.placement)} of {ncols(g)} columns")
        check_placement(t.placement, slots)
        for i, s in enumerate(t.placement):
            for row in range(inst.dimension):
                acc[row][s] += t.coeff * g[row][i]
    return tuple(tuple(r) for r in acc)


def verify_witness(inst: MatrixInstance, witness: Sequence[Term], slots: int, domain: str = "Q") -> tuple[bool, str]:
    """Check a witness by summation; returns ``(ok, report)``."""
    for t in witness:
        if not 0 <= t.vector < len(inst.generators):
            return False, f"generator index {t.vector} out of range"
        if not in_domain(Fraction(t.coeff), domain):
            return False, f"coefficient {t.coeff} outside {domain}"
    try:
        total = placed_sum(inst, witness, slots)
    except InputError as e:
        return False, str(e)
    if slots < inst.n:
        return False, "fewer slots than target columns"
    if recover_simple(total, inst.target, inst.dimension) is None:
        return False, "placed sum is not a 0-extension of the target"
    return True, "ok"


def _merge_terms(terms) -> list:
    acc: dict = {}
    for c, g, p in terms:
        acc[(g, p)] = acc.get((g, p), Fraction(0)) + c
    return [Term(c, g, p) for (g, p), c in sorted(acc.items()) if c != 0]


# ---------------------------------------------------------------------------
# Z and Q: total sums and per-datum components


def _undata_compon(inst: MatrixInstance):
    d = inst.dimension
    undata = [tuple(sum(row, Fraction(0)) for row in g) for g in inst.generators]
    comp: list = []
    owner: dict = {}
    for gi, g in enumerate(inst.generators):
        for i, col in enumerate(columns(g)):
            if col not in owner:
                owner[col] = (gi, i)
                comp.append(col)
    t_undata = tuple(sum(row, Fraction(0)) for row in inst.target) if d else ()
    return undata, comp, owner, t_undata


def _ring_solve(vectors: Sequence[Vec], target: Vec, d: int, ring: str) -> Vec | None:
    a = from_columns(vectors, d) if vectors else tuple(() for _ in range(d))
    sys = LinSys(a, target, len(vectors))
    if ring == "Z":
        return solve_integer(sys)
    return solve_rational(sys)[0]


def _solve_ring(inst: MatrixInstance, ring: str) -> Verdict:
    d = inst.dimension
    if inst.n == 0:
        return Verdict(SOLVABLE, [], 0, ring)
    undata, comp, owner, t_undata = _undata_compon(inst)
    z = _ring_solve(undata, t_undata, d, ring)
    if z is None:
        return Verdict(UNSOLVABLE, domain=ring, note="total sum is not a combination of generator totals")
    ys = []
    for col in columns(inst.target):
        y = _ring_solve(comp, col, d, ring)
        if y is None:
            return Verdict(UNSOLVABLE, domain=ring, note=f"target column {col} is not a combination of generator columns")
        ys.append(y)
    witness, slots = _synthesize(inst, z, comp, owner, ys)
    ok, report = verify_witness(inst, witness, slots, ring)
    assert ok, report
    return Verdict(SOLVABLE, witness, slots, ring)


def _synthesize(inst, z, comp, owner, ys):
    """Build placements: gather each generator's mass on a hub slot, then move it out.

    Slot layout: ``w`` left spares, ``w`` gather slots (hub first), one slot
    per target column, ``w`` right spares, where ``w`` is the widest
    generator. A move of column ``i`` of a generator from slot X to Y is the
    difference of two placements that agree except at column ``i``; the other
    columns sit on the spares and cancel.
    """
    sizes = inst.sizes
    w = max(sizes)
    left = list(range(0, w))
    gather = list(range(w, 2 * w))
    hub = gather[0]
    tslots = list(range(2 * w, 2 * w + inst.n))
    right = list(range(2 * w + inst.n, 3 * w + inst.n))
    slots = 3 * w + inst.n
    terms = []

    def move(coeff, gi, i, src, dst):
        r = sizes[gi]
        lpart = left[w - i:] if i else []
        rpart = right[: r - i - 1]
        terms.append((coeff, gi, tuple(lpart + [dst] + rpart)))
        terms.append((-coeff, gi, tuple(lpart + [src] + rpart)))

    for gi, zg in enumerate(z):
        if zg == 0 or sizes[gi] == 0:
            continue
        terms.append((zg, gi, tuple(gather[: sizes[gi]])))
        for i in range(1, sizes[gi]):
            move(zg, gi, i, gather[i], hub)
    for k, y in enumerate(ys):
        for b, yb in zip(comp, y):
            if yb:
                gi, i = owner[b]
                move(yb, gi, i, hub, tslots[k])
    return _merge_terms(terms), slots


def solve_q(inst: MatrixInstance) -> Verdict:
    return _solve_ring(inst, "Q")


def solve_z(inst: MatrixInstance) -> Verdict:
    return _solve_ring(inst, "Z")


# ---------------------------------------------------------------------------
# Reference oracle


def _items(inst: MatrixInstance, slots: int):
    for gi, g in enumerate(inst.generators):
        for p in itertools.combinations(range(slots), ncols(g)):
            yield gi, p


def oracle_pproduct(inst: MatrixInstance, domain: str, m_bound: int = 4, slot_bound: int = 6,
                    budget: int = 2_000_000) -> Verdict:
    """Search for a witness directly over placements into ``slot_bound`` slots.

    Every 0-extension of the target into ``slot_bound`` slots is tried. For
    Z, Q and Q+ all placed generators are offered at once and the coefficient
    system is decided exactly. For N at most ``m_bound`` terms with
    coefficient 1 are allowed. Never answers Unsolvable.
    """
    if domain not in DOMAINS:
        raise InputError(f"unknown domain {domain!r}")
    d, n = inst.dimension, inst.n
    if n == 0:
        return Verdict(SOLVABLE, [], 0, domain)
    if slot_bound < n:
        return Verdict(UNKNOWN, domain=domain, note="slot bound below target width")
    c = slot_bound
    items = [it for it in _items(inst, c)]
    # one system column per item, one equation per (row, slot)
    item_cols = []
    for gi, p in items:
        g = inst.generators[gi]
        col = [Fraction(0)] * (d * c)
        for i, s in enumerate(p):
            for row in range(d):
                col[row * c + s] = g[row][i]
        item_cols.append(col)
    a = tuple(tuple(col[e] for col in item_cols) for e in range(d * c))
    tcols = columns(inst.target)
    for tp in itertools.combinations(range(c), n):
        rhs = [Fraction(0)] * (d * c)
        for k, s in enumerate(tp):
            for row in range(d):
                rhs[row * c + s] = tcols[k][row]
        sys = LinSys(a, tuple(rhs), len(items))
        if domain == "Q":
            x = solve_rational(sys)[0]
        elif domain == "Z":
            x = solve_integer(sys)
        elif domain == "Qplus":
            x = feasible_nonneg_strict(sys)
        else:
            chosen = _n_terms(item_cols, sys.rhs, c, d, m_bound, budget)
            x = None
            if chosen is not None:
                x = [0] * len(items)
                for q in chosen:
                    x[q] += 1
        if x is None:
            continue
        witness = _merge_terms((xi, gi, p) for xi, (gi, p) in zip(x, items) if xi)
        ok, report = verify_witness(inst, witness, c, domain)
        assert ok, report
        return Verdict(SOLVABLE, witness, c, domain)
    return Verdict(UNKNOWN, domain=domain, note="no witness within bounds")


def _n_terms(item_cols: list, rhs: tuple, c: int, d: int, m_bound: int, budget: int) -> list | None:
    """At most ``m_bound`` items (repetition allowed) summing to ``rhs``, or None.

    Some chosen item must touch the leftmost slot where the residual is
    nonzero, so only those items are branched on. Failed residuals are
    memoised.
    """
    touching = [[q for q, col in enumerate(item_cols) if any(col[row * c + s] for row in range(d))]
                for s in range(c)]
    failed = set()
    nodes = 0

    def dfs(res: tuple, left: int):
        nonlocal nodes
        nodes += 1
        if nodes > budget:
            raise _Budget
        s = next((s for s in range(c) if any(res[row * c + s] for row in range(d))), None)
        if s is None:
            return []
        if left == 0 or (res, left) in failed:
            return None
        for q in touching[s]:
            col = item_cols[q]
            rest = dfs(tuple(a - b for a, b in zip(res, col)), left - 1)
            if rest is not None:
                return [q] + rest
        failed.add((res, left))
        return None

    # iterative deepening finds short witnesses before the budget goes to deep branches
    try:
        for limit in range(m_bound + 1):
            found = dfs(tuple(rhs), limit)
            if found is not None:
                return found
    except _Budget:
        pass
    return None


class _Budget(Exception):
    pass


# ---------------------------------------------------------------------------
# N: bounded multihistogram search


def stacked_matrix(inst: MatrixInstance):
    return hstack(inst.generators, inst.dimension)


def solve_n_bounded(inst: MatrixInstance, col_bound: int = 8, entry_bound: int = 8,
                    bounds_sufficient: bool = False, relaxations: bool = True,
                    budget: int = 200_000) -> Verdict:
    """Search for an integer multihistogram with few columns and small entries.

    Breadth-first search over states ``(in-flight mass per adjacent row
    pair, number of target columns read)``. From a state, the next column
    solves the generator system against zero or the next target column,
    with entries at most ``entry_bound`` and never consuming more of a pair
    than is in flight, so every accepted word is a multihistogram. A hit
    becomes placements by decomposing each histogram into simple ones.

    Unsolvable is reported when a Q, Z or Q+ relaxation already fails, or when
    the caller asserts the bounds suffice and the search was exhaustive.
    """
    d, n = inst.dimension, inst.n
    if col_bound < 0 or entry_bound < 0:
        raise InputError("bounds must be nonnegative")
    if n == 0:
        return Verdict(SOLVABLE, [], 0, "N")
    if relaxations:
        from .qplus import solve_qplus

        for relax in (solve_q, solve_z, solve_qplus):
            if relax(inst).status == UNSOLVABLE:
                return Verdict(UNSOLVABLE, domain="N", note=f"{relax.__name__} relaxation is unsolvable")
    layout = StackLayout(inst.sizes)
    big = stacked_matrix(inst)
    r = layout.nrows
    into = {q: p for p, q in enumerate(layout.consume_row)}
    tcols = [column(inst.target, k) for k in range(n)]
    complete = True
    cache: dict = {}

    def moves(g, rhs):
        nonlocal complete
        key = (g, rhs)
        if key not in cache:
            upper = [g[into[q]] if q in into else entry_bound for q in range(r)]
            res = enumerate_n_solutions_bounded(LinSys(big, rhs, r), entry_bound, budget, upper=upper)
            complete &= res.complete
            cache[key] = [(layout.consume(w), layout.produce(w), w) for w in sorted(res.solutions) if any(w)]
        return cache[key]

    zero = (0,) * d
    start = ((0,) * layout.nplaces, 0)
    goal = ((0,) * layout.nplaces, n)
    parent = {start: None}
    frontier = deque([(start, 0)])
    found = None
    while frontier and found is None:
        (g, k), depth = frontier.popleft()
        if depth == col_bound:
            complete = False
            continue
        options = [(m, 0) for m in moves(g, zero)]
        if k < n:
            options += [(m, 1) for m in moves(g, tcols[k])]
        for (cons, prod, w), step in options:
            state = (tuple(a - b + p for a, b, p in zip(g, cons, prod)), k + step)
            if state in parent:
                continue
            if len(parent) >= budget:
                complete = False
                frontier.clear()
                break
            parent[state] = ((g, k), w)
            if state == goal:
                found = state
                break
            frontier.append((state, depth + 1))
    if found is None:
        if bounds_sufficient and complete:
            return Verdict(UNSOLVABLE, domain="N", note="exhaustive within asserted bounds")
        return Verdict(UNKNOWN, domain="N", note="no multihistogram within bounds")
    word = []
    s = found
    while parent[s] is not None:
        s, w = parent[s]
        word.append(w)
    word.reverse()
    family = layout.split_word(word)
    assert is_multihistogram(family, inst.target, inst.generators, INTEGER, len(word))
    witness, slots = multihistogram_to_witness(inst, family, len(word))
    ok, report = verify_witness(inst, witness, slots, "N")
    assert ok, report
    return Verdict(SOLVABLE, witness, slots, "N")


def multihistogram_to_witness(inst: MatrixInstance, family, ncol: int):
    """One coefficient-1 term per simple histogram in each member's decomposition."""
    terms = []
    for gi, h in enumerate(family):
        if not h:
            continue
        for s in decompose(h):
            terms.append(Term(Fraction(1), gi, s.f))
    return terms, ncol


def witness_to_family(inst: MatrixInstance, witness: Sequence[Term], slots: int) -> list:
    """Inverse direction: sum placement matrices per generator into histograms."""
    fam = []
    for gi, g in enumerate(inst.generators):
        parts = []
        for t in witness:
            if t.vector == gi:
                parts.append(tuple(tuple(t.coeff * int(j == s) for j in range(slots)) for s in t.placement))
        fam.append(add_matrices(parts, ncols(g), slots))
    return fam


def solve(inst: MatrixInstance, domain: str, **kw) -> Verdict:
    if domain == "Q":
        return solve_q(inst)
    if domain == "Z":
        return solve_z(inst)
    if domain == "Qplus":
        from .qplus import solve_qplus

        return solve_qplus(inst, **kw)
    if domain == "N":
        return solve_n_bounded(inst, **kw)
    raise InputError(f"unknown domain {domain!r}")
