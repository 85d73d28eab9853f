"""Deciding Q+-exchange-products through continuous reachability.

A rational multihistogram is read column by column. The state after a
prefix is the in-flight mass of every adjacent row pair of every generator
(see :class:`~odlin.histogram.StackLayout`). Columns solving the generator
system against zero form a cone and act like the transitions of a
continuous net; the ``n`` target columns are single nonhomogeneous steps.
The instance is Q+-solvable iff the zero state reaches the zero state along
``gap_0, step_0, gap_1, ..., step_{n-1}, gap_n``.

Two procedures decide this:

* ``fixpoint`` (default) writes one linear program for the whole run, with
  one aggregated cone vector per gap, and repeatedly shrinks the allowed
  support of each gap to the coordinates that can be fired forward from the
  gap's start and backward from its end.
* ``semieq`` assembles a semi-equation from reachability blocks of the
  homogeneous linear net, one per gap, and hands it to
  :func:`odlin.semieq.solve_qplus`. It is much larger and meant for
  cross-checking on small instances.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction

from .datavec import MatrixInstance
from .histogram import StackLayout
from .certlp import max_support
from .linalg import InputError, LinSys, Vec, column, hstack
from .linpn import HomLinearPn, add_reach_block
from .semieq import SemiEqBuilder
from .semieq import solve_qplus as solve_semieq
from .solvers import SOLVABLE, UNSOLVABLE, Verdict, solve_q


@dataclass
class RunProgram:
    """Sparse equality system describing a run, plus where every block lives."""

    layout: StackLayout
    rows: list
    rhs: list
    nvars: int
    gaps: list  # per gap, variable index of each stacked row
    steps: list  # per target column, variable index of each stacked row
    slack: list  # per target column, variable index of each place

    def start(self, z, g: int) -> tuple:
        if g == 0:
            return (Fraction(0),) * self.layout.nplaces
        prod = self.layout.produce([z[v] for v in self.steps[g - 1]])
        return tuple(z[s] + p for s, p in zip(self.slack[g - 1], prod))

    def end(self, z, g: int) -> tuple:
        if g == len(self.gaps) - 1:
            return (Fraction(0),) * self.layout.nplaces
        cons = self.layout.consume([z[v] for v in self.steps[g]])
        return tuple(z[s] + c for s, c in zip(self.slack[g], cons))


def build_run_program(inst: MatrixInstance) -> RunProgram:
    """Variables: a cone vector per gap, a column per target step, slack per step.

    With ``a_g``/``e_g`` the state at the start/end of gap ``g``, the
    equations say ``e_g = a_g + delta(X_g)``, ``e_g = slack_g + consume(W_g)``
    and ``a_{g+1} = slack_g + produce(W_g)``, with ``a_0 = e_n = 0``; the
    states themselves are eliminated.
    """
    layout = StackLayout(inst.sizes)
    big = hstack(inst.generators, inst.dimension)
    r, n, P = layout.nrows, inst.n, layout.nplaces
    counter = iter(range(10**9))
    gaps = [[next(counter) for _ in range(r)] for _ in range(n + 1)]
    steps = [[next(counter) for _ in range(r)] for _ in range(n)]
    slack = [[next(counter) for _ in range(P)] for _ in range(n)]
    nvars = next(counter)
    rows, rhs = [], []

    def system(vars_, target):
        for i in range(inst.dimension):
            rows.append({v: big[i][q] for q, v in enumerate(vars_) if big[i][q]})
            rhs.append(target[i])

    for g in gaps:
        system(g, (0,) * inst.dimension)
    for k, w in enumerate(steps):
        system(w, column(inst.target, k))

    for g in range(n + 1):
        for p in range(P):
            cq, pq = layout.consume_row[p], layout.produce_row[p]
            row: dict = {}

            def add(v, c):
                row[v] = row.get(v, 0) + c

            # e_g - a_g - delta(X_g) = 0
            add(gaps[g][pq], -1)
            add(gaps[g][cq], 1)
            if g < n:
                add(slack[g][p], 1)
                add(steps[g][cq], 1)
            if g > 0:
                add(slack[g - 1][p], -1)
                add(steps[g - 1][pq], -1)
            rows.append({v: Fraction(c) for v, c in row.items() if c})
            rhs.append(Fraction(0))
    return RunProgram(layout, rows, rhs, nvars, gaps, steps, slack)


def _cone_rows(inst: MatrixInstance) -> list:
    big = hstack(inst.generators, inst.dimension)
    return [{q: v for q, v in enumerate(row) if v} for row in big]


def fireable(inst: MatrixInstance, layout: StackLayout, marked: set, usable: set, backward: bool = False) -> set:
    """Stacked rows of a cone vector that can all be fired from the marked places.

    Starting from the marked places, repeatedly take a support-maximal cone
    vector using only ``usable`` rows whose input place is marked, and mark
    its output places. ``backward`` swaps inputs and outputs.
    """
    cone = _cone_rows(inst)
    zeros = [0] * len(cone)
    into, out = {}, {}
    for p, (cq, pq) in enumerate(zip(layout.consume_row, layout.produce_row)):
        into[cq], out[pq] = p, p
    if backward:
        into, out = out, into
    marked = set(marked)
    while True:
        enabled = {q for q in usable if into.get(q) is None or into[q] in marked}
        x, support = max_support(cone, zeros, layout.nrows, enabled)
        if x is None:
            return set()
        grown = marked | {out[q] for q in support if q in out}
        if grown == marked:
            return support
        marked = grown


def _support(v) -> set:
    return {i for i, x in enumerate(v) if x > 0}


def _fixpoint(inst: MatrixInstance):
    prog = build_run_program(inst)
    allowed = set(range(prog.nvars))
    while True:
        z, _ = max_support(prog.rows, prog.rhs, prog.nvars, allowed)
        if z is None:
            return prog, None
        shrunk = False
        for g, gvars in enumerate(prog.gaps):
            used = {q for q, v in enumerate(gvars) if z[v] > 0}
            if not used:
                continue
            fwd = fireable(inst, prog.layout, _support(prog.start(z, g)), used)
            bwd = fireable(inst, prog.layout, _support(prog.end(z, g)), used, backward=True)
            dead = used - (fwd & bwd)
            if dead:
                allowed -= {gvars[q] for q in dead}
                shrunk = True
        if not shrunk:
            return prog, z


def check_run_evidence(inst: MatrixInstance, z: Vec) -> bool:
    """Re-validate a fixpoint verdict: equations, signs, and fireability of every gap."""
    prog = build_run_program(inst)
    if len(z) != prog.nvars or any(v < 0 for v in z):
        return False
    for row, b in zip(prog.rows, prog.rhs):
        if sum(c * z[v] for v, c in row.items()) != b:
            return False
    for g, gvars in enumerate(prog.gaps):
        used = {q for q, v in enumerate(gvars) if z[v] > 0}
        if not used:
            continue
        if fireable(inst, prog.layout, _support(prog.start(z, g)), used) != used:
            return False
        if fireable(inst, prog.layout, _support(prog.end(z, g)), used, backward=True) != used:
            return False
    return True


# ---------------------------------------------------------------------------
# Semi-equation assembly


def merged_net(inst: MatrixInstance) -> HomLinearPn:
    """One rule over (consumed places, produced places, stacked column)."""
    layout = StackLayout(inst.sizes)
    big = hstack(inst.generators, inst.dimension)
    P, r = layout.nplaces, layout.nrows
    n = 2 * P + r
    rows = []
    for i in range(inst.dimension):
        rows.append(tuple([Fraction(0)] * (2 * P) + [Fraction(v) for v in big[i]]))
    for p in range(P):
        for off, q in ((0, layout.consume_row[p]), (P, layout.produce_row[p])):
            row = [Fraction(0)] * n
            row[off + p] = Fraction(1)
            row[2 * P + q] = Fraction(-1)
            rows.append(tuple(row))
    return HomLinearPn(P, (LinSys(tuple(rows), (0,) * len(rows), n),))


def build_semieq(inst: MatrixInstance, steps: int | None = None):
    """Semi-equation whose nonnegative solutions encode accepting runs."""
    pn = merged_net(inst)
    layout = StackLayout(inst.sizes)
    big = hstack(inst.generators, inst.dimension)
    P, r, n = layout.nplaces, layout.nrows, inst.n
    b = SemiEqBuilder()
    starts = [b.new_vars(P) for _ in range(n + 1)]
    ends = [b.new_vars(P) for _ in range(n + 1)]
    for v in starts[0] + ends[n]:
        b.add_eq({v: 1})
    for g in range(n + 1):
        add_reach_block(b, pn, starts[g], ends[g], steps)
    for k in range(n):
        w = b.new_vars(r)
        for i in range(inst.dimension):
            b.add_eq({w[q]: big[i][q] for q in range(r) if big[i][q]}, inst.target[i][k])
        slack = b.new_vars(P)
        for p in range(P):
            cq, pq = layout.consume_row[p], layout.produce_row[p]
            b.add_sum_eq([(1, ends[k][p]), (-1, w[cq]), (-1, slack[p])])
            b.add_sum_eq([(1, starts[k + 1][p]), (-1, slack[p]), (-1, w[pq])])
    return b.build()


def solve_qplus(inst: MatrixInstance, method: str = "fixpoint", prefilter: bool = True) -> Verdict:
    """Q+-solvability; the verdict carries a rational vector as evidence, not placements."""
    if inst.n == 0:
        return Verdict(SOLVABLE, [], 0, "Qplus")
    if prefilter and solve_q(inst).status == UNSOLVABLE:
        return Verdict(UNSOLVABLE, domain="Qplus", note="Q relaxation is unsolvable")
    if method == "fixpoint":
        _, z = _fixpoint(inst)
    elif method == "semieq":
        z = solve_semieq(build_semieq(inst))
    else:
        raise InputError(f"unknown method {method!r}")
    if z is None:
        return Verdict(UNSOLVABLE, domain="Qplus")
    return Verdict(SOLVABLE, None, 0, "Qplus", evidence=z)
