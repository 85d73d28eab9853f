"""Random and hand-built instances shared by the solver and acceptance tests."""

import itertools
import math
import random
from fractions import Fraction

from hypothesis import strategies as st

from odlin.datavec import MatrixInstance
from odlin.linalg import columns, from_columns

UP = ((-1, 1),)
DOWN = ((1, -1),)
UP_DOWN = MatrixInstance.of(DOWN, [UP])


def random_matrix(rng: random.Random, d: int, ncol: int, lo: int, hi: int):
    cols = []
    while len(cols) < ncol:
        col = tuple(rng.randint(lo, hi) for _ in range(d))
        if any(col):
            cols.append(col)
    return from_columns(cols, d)


def random_instance(rng: random.Random, d=3, gens=3, support=3, width=3, lo=-3, hi=3) -> MatrixInstance:
    """Unconstrained instance; usually unsolvable over the smaller domains."""
    dd = rng.randint(1, d)
    generators = [random_matrix(rng, dd, rng.randint(1, support), lo, hi) for _ in range(rng.randint(1, gens))]
    target = random_matrix(rng, dd, rng.randint(1, width), lo, hi)
    return MatrixInstance.of(target, generators, dd)


def compact(m, d):
    """Drop zero columns: the result has ``m`` among its 0-extensions."""
    cols = [c for c in columns(m) if any(c)]
    return from_columns(cols, d) if cols else tuple(() for _ in range(d))


def planted_instance(rng: random.Random, d=3, gens=3, support=3, slots=4, terms=3, lo=-3, hi=3,
                     coeffs=(1,)) -> tuple[MatrixInstance, list]:
    """Target built as a sum of placed generators with coefficients drawn from ``coeffs``.

    Returns the instance and the planted ``(coeff, generator, placement)`` terms.
    """
    dd = rng.randint(1, d)
    generators = [random_matrix(rng, dd, rng.randint(1, min(support, slots)), lo, hi)
                  for _ in range(rng.randint(1, gens))]
    acc = [[Fraction(0)] * slots for _ in range(dd)]
    planted = []
    for _ in range(rng.randint(1, terms)):
        gi = rng.randrange(len(generators))
        g = generators[gi]
        p = tuple(sorted(rng.sample(range(slots), len(g[0]))))
        c = Fraction(rng.choice(coeffs))
        planted.append((c, gi, p))
        for i, s in enumerate(p):
            for row in range(dd):
                acc[row][s] += c * g[row][i]
    # clear denominators; scaling the coefficients keeps the plant valid
    scale = math.lcm(*(v.denominator for row in acc for v in row))
    planted = [(c * scale, gi, p) for c, gi, p in planted]
    target = compact(tuple(tuple(v * scale for v in row) for row in acc), dd)
    return MatrixInstance.of(target, generators, dd), planted


def rngs(seed_base: int, count: int):
    return (random.Random(seed_base * 100_003 + k) for k in range(count))


seeds = st.integers(0, 2**32 - 1).map(random.Random)


def all_placements(k, slots):
    return list(itertools.combinations(range(slots), k))
