"""Translations between VAS reachability and exchange-product instances.

``vas_to_instance`` turns a VAS into generators that are data realizations
of its actions: the negative part spread over low data, the positive part
over strictly higher data. ``witness_to_run`` recovers a run from an N
witness. ``instance_to_vas`` goes the other way: a VAS that reads stacked
columns of a candidate multihistogram and checks the histogram conditions
with buffer and profile counters.
"""

from __future__ import annotations

import graphlib
import warnings
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Sequence

from .datavec import DataVector, MatrixInstance
from .histogram import StackLayout, profile
from .linalg import InputError, LinSys, Vec, enumerate_n_solutions_bounded, hstack, is_integral, split_pos_neg, vec
from .linpn import Vas, validate_run
from .solvers import Term, placed_sum


def vector_compositions(a: Sequence[int]) -> list[tuple]:
    """Every sequence of nonzero nonnegative integer vectors summing to ``a``."""
    a = tuple(int(v) for v in a)
    if not any(a):
        return [()]
    out = []

    def parts(i, rest, cur):
        if i == len(rest):
            yield tuple(cur)
            return
        for v in range(rest[i] + 1):
            cur.append(v)
            yield from parts(i + 1, rest, cur)
            cur.pop()

    for first in parts(0, a, []):
        if not any(first):
            continue
        rest = tuple(x - y for x, y in zip(a, first))
        for tail in vector_compositions(rest):
            out.append((first,) + tail)
    return out


@dataclass(frozen=True)
class DataRealization:
    base_action: Vec
    spread_neg: DataVector
    spread_pos: DataVector

    def __post_init__(self):
        pos, neg = split_pos_neg(self.base_action)
        for spread, part in ((self.spread_neg, neg), (self.spread_pos, pos)):
            if any(v < 0 for _, val in spread.points for v in val):
                raise InputError("spreads must be nonnegative")
            total = [Fraction(0)] * len(part)
            for _, val in spread.points:
                total = [x + y for x, y in zip(total, val)]
            if tuple(total) != part:
                raise InputError("spread does not sum to its part of the action")
        if self.spread_neg.points and self.spread_pos.points:
            if not self.spread_neg.support[-1] < self.spread_pos.support[0]:
                raise InputError("negative support must lie below positive support")

    @property
    def n_neg(self) -> int:
        return len(self.spread_neg.points)

    @property
    def matrix(self):
        """Columns: the negated low spread, then the high spread."""
        d = len(self.base_action)
        cols = [tuple(-v for v in val) for _, val in self.spread_neg.points]
        cols += [val for _, val in self.spread_pos.points]
        return tuple(tuple(c[i] for c in cols) for i in range(d))


def enumerate_realizations(a: Sequence, cap: int | None = 10_000) -> list[DataRealization]:
    """All data realizations of ``a`` up to order-isomorphism, on data 1, 2, ...

    The count grows exponentially with the entries of ``a``; a warning is
    issued and the list truncated when it exceeds ``cap``.
    """
    a = vec(a)
    if not is_integral(a):
        raise InputError("actions must be integral")
    d = len(a)
    pos, neg = split_pos_neg(a)
    out = []
    for lo in vector_compositions(neg):
        for hi in vector_compositions(pos):
            data_lo = range(1, len(lo) + 1)
            data_hi = range(len(lo) + 1, len(lo) + len(hi) + 1)
            out.append(DataRealization(a, DataVector(d, tuple(zip(data_lo, lo))),
                                       DataVector(d, tuple(zip(data_hi, hi)))))
            if cap is not None and len(out) >= cap:
                warnings.warn(f"realizations of {a} truncated at {cap}")
                return out
    return out


# ---------------------------------------------------------------------------
# VAS -> instance


@dataclass
class VasTranslation:
    """The instance plus what is needed to map witnesses back to runs."""

    instance: MatrixInstance
    source: Vas
    normalized: Vas
    realizations: list  # per generator: (action index in normalized VAS, DataRealization)
    finisher: int | None = None  # index of the action added by normalization


def normalize_final(vas: Vas) -> tuple[Vas, int | None]:
    """Equivalent VAS whose final configuration is zero.

    A fresh control counter starts at 1; the only action touching it
    subtracts ``final`` and the token, so it fires exactly once. Any run
    through it rearranges into a run of the source reaching ``final``
    followed by that action.
    """
    if not any(vas.final):
        return vas, None
    acts = tuple(a + (Fraction(0),) for a in vas.actions)
    finisher = tuple(-v for v in vas.final) + (Fraction(-1),)
    return Vas(vas.dimension + 1, acts + (finisher,), vas.init + (Fraction(1),),
               (Fraction(0),) * (vas.dimension + 1)), len(acts)


def vas_to_instance(vas: Vas, normalize: bool = True, cap: int | None = 10_000) -> VasTranslation:
    """Generators are realizations of every nonzero action; the target is minus ``init`` on one datum."""
    if any(vas.final) and not normalize:
        raise InputError("final configuration must be zero")
    norm, finisher = normalize_final(vas)
    d = norm.dimension
    gens, reals = [], []
    for ai, a in enumerate(norm.actions):
        if not any(a):
            continue  # zero actions never change reachability
        for rz in enumerate_realizations(a, cap):
            gens.append(rz.matrix)
            reals.append((ai, rz))
    if not gens:
        raise InputError("VAS has no nonzero action")
    target = tuple((-v,) for v in norm.init) if any(norm.init) else ((),) * d
    inst = MatrixInstance(d, target, tuple(gens))
    return VasTranslation(inst, vas, norm, reals, finisher)


def _expand(witness: Sequence[Term]) -> list:
    copies = []
    for t in witness:
        c = Fraction(t.coeff)
        if c.denominator != 1 or c < 0:
            raise InputError("witness coefficients must be natural numbers")
        copies += [t] * int(c)
    return copies


def producers_first(tr: VasTranslation, copies: Sequence[Term]) -> list[int]:
    """A linear order of the terms extending the immediate-consequence relation.

    Term ``j`` is an immediate consequence of term ``i`` when some slot is in
    the positive support of ``i`` and the negative support of ``j``.
    """
    neg_sets, pos_sets = [], []
    for t in copies:
        _, rz = tr.realizations[t.vector]
        neg_sets.append(set(t.placement[: rz.n_neg]))
        pos_sets.append(set(t.placement[rz.n_neg:]))
    order = graphlib.TopologicalSorter()
    for j in range(len(copies)):
        order.add(j)
        for i in range(len(copies)):
            if i != j and pos_sets[i] & neg_sets[j]:
                order.add(j, i)
    try:
        return list(order.static_order())
    except graphlib.CycleError as e:
        raise AssertionError(f"immediate-consequence relation has a cycle: {e}") from e


def witness_to_run(tr: VasTranslation, witness: Sequence[Term]) -> list:
    """Order the witness terms producers-first and read off their actions.

    Coefficients are expanded to repeated terms. The run is validated on the
    normalized VAS and returned for the source VAS, without the
    normalization action.
    """
    copies = _expand(witness)
    seq = producers_first(tr, copies)
    run = [tr.normalized.actions[tr.realizations[copies[j].vector][0]] for j in seq]
    assert validate_run(tr.normalized, run), "recovered run is not a run of the normalized VAS"
    if tr.finisher is None:
        return run
    fin = tr.normalized.actions[tr.finisher]
    run = [a[:-1] for a in run if a != fin]
    assert validate_run(tr.source, run), "recovered run is not a run of the source VAS"
    return run


def datum_sequences(tr: VasTranslation, witness: Sequence[Term], slots: int) -> list:
    """Per slot and coordinate, the values along the producers-first run of the data VAS.

    The run starts from the spread of ``init``, which is minus the placed
    sum of the witness.
    """
    copies = _expand(witness)
    d = tr.normalized.dimension
    total = placed_sum(tr.instance, copies, slots)
    state = [[-total[row][s] for row in range(d)] for s in range(slots)]
    history = [[list(v)] for v in state]
    for j in producers_first(tr, copies):
        t = copies[j]
        g = tr.instance.generators[t.vector]
        for i, s in enumerate(t.placement):
            for row in range(d):
                state[s][row] += g[row][i]
        for s in range(slots):
            history[s].append(list(state[s]))
    return [[tuple(step[row] for step in history[s]) for row in range(d)] for s in range(slots)]


# ---------------------------------------------------------------------------
# instance -> VAS


@dataclass
class HistogramVas:
    """A VAS reading stacked columns, with labels for every action.

    Counters: a buffer and a profile counter per adjacent row pair (place),
    then one control counter per number of target columns read. Labels are
    ``("read", column, k)`` with ``k`` the target index or None for a zero
    column, ``("move", place)`` and ``("accept",)``.
    """

    vas: Vas
    layout: StackLayout
    ncontrol: int
    labels: list = field(default_factory=list)

    def buffer(self, p: int) -> int:
        return p

    def prof(self, p: int) -> int:
        return self.layout.nplaces + p


def column_alphabet(inst: MatrixInstance, bound: int, budget: int = 1_000_000) -> list:
    """Nonzero stacked columns with entries at most ``bound`` solving against zero or a target column."""
    big = hstack(inst.generators, inst.dimension)
    r = sum(inst.sizes)
    rhss = [(0,) * inst.dimension] + [tuple(row[k] for row in inst.target) for k in range(inst.n)]
    out = set()
    for rhs in rhss:
        res = enumerate_n_solutions_bounded(LinSys(big, rhs, r), bound, budget)
        out |= {tuple(int(v) for v in w) for w in res.solutions if any(w)}
    return sorted(out)


def instance_to_vas(inst: MatrixInstance, alphabet: Sequence[Sequence[int]]) -> HistogramVas:
    """VAS reaching zero from the control token iff a multihistogram over ``alphabet`` exists.

    Reading column ``w`` adds the produced part (row ``i`` of each pair) to
    the buffers and subtracts the consumed part (row ``i + 1``) from the
    profile counters; a move shifts one unit from a buffer to its profile
    counter. Columns solving against the ``k``-th target column move the
    control token from ``k`` to ``k + 1``; zero-solving columns ignore it,
    since they are allowed between any two target columns. Accepting
    removes the token from ``n``.
    """
    layout = StackLayout(inst.sizes)
    big = hstack(inst.generators, inst.dimension)
    P, n = layout.nplaces, inst.n
    dim = 2 * P + n + 1
    acts, labels = [], []

    def unit(i, v=1):
        e = [0] * dim
        e[i] = v
        return e

    tcols = [tuple(Fraction(row[k]) for row in inst.target) for k in range(n)]
    for w in alphabet:
        w = tuple(int(v) for v in w)
        if len(w) != layout.nrows or any(v < 0 for v in w) or not any(w):
            raise InputError(f"bad alphabet column {w}")
        image = tuple(sum(Fraction(big[i][q]) * w[q] for q in range(len(w))) for i in range(inst.dimension))
        effect = [0] * dim
        for p, v in enumerate(layout.produce(w)):
            effect[p] += v
        for p, v in enumerate(layout.consume(w)):
            effect[P + p] -= v
        if not any(image):
            acts.append(tuple(effect))
            labels.append(("read", w, None))
        for k, t in enumerate(tcols):
            if image == t:
                e = list(effect)
                e[2 * P + k] -= 1
                e[2 * P + k + 1] += 1
                acts.append(tuple(e))
                labels.append(("read", w, k))
    for p in range(P):
        e = unit(p, -1)
        e[P + p] = 1
        acts.append(tuple(e))
        labels.append(("move", p))
    acts.append(tuple(unit(2 * P + n, -1)))
    labels.append(("accept",))
    init = tuple(unit(2 * P))
    vas = Vas(dim, tuple(acts), init, (0,) * dim)
    return HistogramVas(vas, layout, n + 1, labels)


def simulate_word(hv: HistogramVas, family: Sequence, target_steps: Sequence[int | None]) -> list:
    """Feed a multihistogram's columns through the VAS, moving buffers fully after each read.

    After ``j`` columns, buffer plus profile counter of each pair ``(i, i+1)``
    equals ``sum(H[i, :j]) - sum(H[i+1, :j])`` (the profile entry plus the
    next column's lower entry); this is asserted at every step. Returns the
    configurations visited. ``target_steps`` names the target column read at
    each position, or None.
    """
    layout = hv.layout
    P = layout.nplaces
    ncol = len(target_steps)
    word = [tuple(int(v) for h in family for v in (row[j] for row in h)) for j in range(ncol)]
    index = {}
    for ai, lab in enumerate(hv.labels):
        if lab[0] == "read":
            index[(lab[1], lab[2])] = ai
        elif lab[0] == "move":
            index[("move", lab[1])] = ai
        else:
            index["accept"] = ai
    c = list(hv.vas.init)
    configs = [tuple(c)]

    def fire(ai):
        nonlocal c
        c = [x + y for x, y in zip(c, hv.vas.actions[ai])]
        if any(x < 0 for x in c):
            raise AssertionError(f"counter went negative firing {hv.labels[ai]}")
        configs.append(tuple(c))

    for j, (w, k) in enumerate(zip(word, target_steps)):
        fire(index[(w, k)])
        for p in range(P):
            for _ in range(int(c[p])):
                fire(index[("move", p)])
        for p, (jj, i) in enumerate(layout.places):
            h = family[jj]
            expect = sum(h[i][:j + 1]) - sum(h[i + 1][:j + 1])
            assert c[p] + c[P + p] == expect, "buffer plus profile counter drifted"
            prof = profile(h, ncol)
            nxt = h[i + 1][j + 1] if j + 1 < ncol else 0
            assert expect == prof[i][j] + nxt
    fire(index["accept"])
    return configs
