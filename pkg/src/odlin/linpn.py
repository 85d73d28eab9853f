"""Vector addition systems and homogeneous linear Petri nets."""

from __future__ import annotations

from collections import deque
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Sequence

from .linalg import InputError, LinSys, Vec, is_integral, split_pos_neg, vec
from .semieq import SemiEq, SemiEqBuilder

REACHABLE = "reachable"
UNREACHABLE = "unreachable"
UNKNOWN = "unknown"


@dataclass(frozen=True)
class Vas:
    dimension: int
    actions: tuple
    init: Vec
    final: Vec

    def __post_init__(self):
        acts = tuple(vec(a) for a in self.actions)
        init, final = vec(self.init), vec(self.final)
        for a in acts:
            if len(a) != self.dimension or not is_integral(a):
                raise InputError(f"bad action {a}")
        for c in (init, final):
            if len(c) != self.dimension or not is_integral(c) or any(v < 0 for v in c):
                raise InputError(f"bad configuration {c}")
        object.__setattr__(self, "actions", acts)
        object.__setattr__(self, "init", init)
        object.__setattr__(self, "final", final)

    @classmethod
    def of(cls, actions, init, final) -> "Vas":
        init = vec(init)
        return cls(len(init), tuple(actions), init, vec(final))


@dataclass
class ReachResult:
    status: str
    run: list | None = None
    states: int = 0


def validate_run(vas: Vas, run: Sequence[Sequence], start=None, end=None) -> bool:
    """Whether ``run`` fires actions of ``vas`` from init to final staying nonnegative."""
    c = vas.init if start is None else vec(start)
    acts = set(vas.actions)
    for a in run:
        a = vec(a)
        if a not in acts:
            return False
        c = tuple(x + y for x, y in zip(c, a))
        if any(x < 0 for x in c):
            return False
    return c == (vas.final if end is None else vec(end))


def vas_bounded_reach(vas: Vas, norm_bound: int, step_bound: int, budget: int = 200_000) -> ReachResult:
    """Breadth-first search inside the box ``max entry <= norm_bound``.

    ``Unreachable`` is claimed only when the explored set is closed: no
    enabled action leaves the box, the step bound never cut the search, and
    the state budget was not exhausted. Otherwise the answer is ``Unknown``.
    """
    if norm_bound < 0 or step_bound < 0:
        raise InputError("bounds must be nonnegative")
    start = tuple(int(v) for v in vas.init)
    goal = tuple(int(v) for v in vas.final)
    acts = [tuple(int(v) for v in a) for a in vas.actions]
    parent: dict = {start: None}
    if max(start, default=0) > norm_bound:
        return ReachResult(UNKNOWN, states=1)
    frontier = deque([(start, 0)])
    closed = True
    while frontier:
        c, depth = frontier.popleft()
        if c == goal:
            run = []
            while parent[c] is not None:
                prev, a = parent[c]
                run.append(vec(a))
                c = prev
            run.reverse()
            assert validate_run(vas, run)
            return ReachResult(REACHABLE, run, len(parent))
        for a in acts:
            nxt = tuple(x + y for x, y in zip(c, a))
            if min(nxt, default=0) < 0 or nxt in parent:
                continue
            if max(nxt, default=0) > norm_bound:
                closed = False
                continue
            if depth == step_bound or len(parent) >= budget:
                closed = False
                continue
            parent[nxt] = (c, a)
            frontier.append((nxt, depth + 1))
    return ReachResult(UNREACHABLE if closed else UNKNOWN, None, len(parent))


# ---------------------------------------------------------------------------
# Homogeneous linear Petri nets


@dataclass(frozen=True)
class HomLinearPn:
    """Transition rules are homogeneous systems over (consumed, produced, extra) variables.

    The first ``d`` variables of a rule are the consumed vector, the next
    ``d`` the produced vector; any further variables are existential.
    """

    dimension: int
    rules: tuple

    def __post_init__(self):
        rules = tuple(self.rules)
        for r in rules:
            if r.nvars < 2 * self.dimension:
                raise InputError(f"rule over {r.nvars} variables, expected at least {2 * self.dimension}")
            if any(r.rhs):
                raise InputError("transition rules must be homogeneous")
        object.__setattr__(self, "rules", rules)


def _is_rule_solution(rule: LinSys, v: Vec) -> bool:
    return all(x >= 0 for x in v) and rule.satisfied_by(v)


def pn_step(pn: HomLinearPn, c: Sequence, rule_index: int, v: Sequence) -> Vec | None:
    """Fire ``v`` (a nonnegative solution of the indexed rule) from ``c``; None if disabled."""
    d = pn.dimension
    c, v = vec(c), vec(v)
    if not _is_rule_solution(pn.rules[rule_index], v):
        raise InputError(f"{v} is not a nonnegative solution of rule {rule_index}")
    mid = tuple(a - b for a, b in zip(c, v[:d]))
    if any(x < 0 for x in mid):
        return None
    return tuple(a + b for a, b in zip(mid, v[d:2 * d]))


def serge12_check(pn: HomLinearPn, i: Sequence, f: Sequence, u: Sequence[Sequence]) -> bool:
    """Sufficient condition for reachability from aggregated per-rule solutions ``u``."""
    d = pn.dimension
    i, f = vec(i), vec(f)
    u = [vec(x) for x in u]
    if len(u) != len(pn.rules) or not all(_is_rule_solution(r, x) for r, x in zip(pn.rules, u)):
        raise InputError("u must hold one nonnegative solution per rule")
    delta = [Fraction(0)] * d
    for x in u:
        for j in range(d):
            delta[j] += x[d + j] - x[j]
    if tuple(delta) != tuple(b - a for a, b in zip(i, f)):
        return False
    for x in u:
        for j in range(d):
            if x[j] > 0 and not i[j] > 0:
                return False
            if x[d + j] > 0 and not f[j] > 0:
                return False
    return True


@dataclass
class ReachEncoding:
    semieq: SemiEq
    start: list
    end: list
    layout: dict = field(default_factory=dict)


def _rule_solution_vars(b: SemiEqBuilder, rule: LinSys) -> list[int]:
    v = b.new_vars(rule.nvars)
    for row in rule.matrix:
        b.add_eq({v[q]: c for q, c in enumerate(row) if c})
    return v


def _macro_step(b: SemiEqBuilder, pn: HomLinearPn, before: list[int], after: list[int]) -> list:
    """All rules fire at once; the configuration minus total consumption stays nonnegative."""
    d = pn.dimension
    fired = [_rule_solution_vars(b, r) for r in pn.rules]
    slack = b.new_vars(d)
    for j in range(d):
        b.add_sum_eq([(1, before[j]), (-1, slack[j])] + [(-1, v[j]) for v in fired])
        b.add_sum_eq([(1, after[j]), (-1, before[j])] + [(1, v[j]) for v in fired] + [(-1, v[d + j]) for v in fired])
    return fired


def add_reach_block(b: SemiEqBuilder, pn: HomLinearPn, start: list[int], end: list[int],
                    steps: int | None = None) -> dict:
    """Constrain ``end`` to be reachable from ``start`` inside an existing builder.

    Prefix of ``steps`` macro steps to ``i'``, suffix of ``steps`` macro steps
    from ``f'``, and between them per-rule aggregates satisfying the
    sufficient condition (balance equations plus positivity implications).
    """
    d = pn.dimension
    steps = d if steps is None else steps
    prefix = [start] + [b.new_vars(d) for _ in range(steps)]
    suffix = [b.new_vars(d) for _ in range(steps)] + [end]
    for before, after in zip(prefix, prefix[1:]):
        _macro_step(b, pn, before, after)
    for before, after in zip(suffix, suffix[1:]):
        _macro_step(b, pn, before, after)
    i1, f1 = prefix[-1], suffix[0]
    agg = [_rule_solution_vars(b, r) for r in pn.rules]
    for j in range(d):
        b.add_sum_eq([(1, f1[j]), (-1, i1[j])] + [(1, u[j]) for u in agg] + [(-1, u[d + j]) for u in agg])
    for u in agg:
        for j in range(d):
            b.implies(u[j], i1[j])
            b.implies(u[d + j], f1[j])
    return {"prefix": prefix, "suffix": suffix, "aggregate": agg}


def build_reach_semieq(pn: HomLinearPn, steps: int | None = None) -> ReachEncoding:
    """Semi-equation whose solutions projected to (start, end) are the reachable pairs."""
    b = SemiEqBuilder()
    start, end = b.new_vars(pn.dimension), b.new_vars(pn.dimension)
    layout = add_reach_block(b, pn, start, end, steps)
    return ReachEncoding(b.build(), start, end, layout)


def pin(enc: ReachEncoding, start: Sequence, end: Sequence) -> SemiEq:
    """The encoding with start and end configurations fixed."""
    se = enc.semieq
    n = se.nvars
    rows, rhs = [], []
    for var, val in list(zip(enc.start, vec(start))) + list(zip(enc.end, vec(end))):
        rows.append(tuple(Fraction(int(c == var)) for c in range(n)))
        rhs.append(val)
    return SemiEq(se.system.with_rows(rows, rhs), se.implications)


def vas_actions_split(vas: Vas) -> list[tuple[Vec, Vec]]:
    return [split_pos_neg(a) for a in vas.actions]
