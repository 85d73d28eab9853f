"""Data vectors over an ordered data domain and their matrix encodings."""

from __future__ import annotations

import itertools
from dataclasses import dataclass
from fractions import Fraction
from typing import Iterable, Sequence

from .linalg import InputError, Mat, Vec, columns, frac, from_columns, is_integral, ncols, vec


@dataclass(frozen=True)
class DataVector:
    """A finitely supported map from data (rationals, order only) to ``Q^dimension``.

    ``points`` lists ``(datum, value)`` pairs with strictly increasing data and
    no zero values.
    """

    dimension: int
    points: tuple = ()

    def __post_init__(self):
        if self.dimension < 1:
            raise InputError("dimension must be positive")
        pts = tuple((frac(a), vec(v)) for a, v in self.points)
        for (a, _), (b, _) in zip(pts, pts[1:]):
            if not a < b:
                raise InputError(f"data must be strictly increasing ({a} then {b})")
        for a, v in pts:
            if len(v) != self.dimension:
                raise InputError(f"value at datum {a} has length {len(v)}, expected {self.dimension}")
            if not any(v):
                raise InputError(f"zero value at datum {a}")
        object.__setattr__(self, "points", pts)

    @classmethod
    def from_values(cls, values: Sequence[Sequence], data: Sequence | None = None) -> "DataVector":
        """Place the given nonzero values on data 1, 2, ... (or on ``data``)."""
        values = [vec(v) for v in values]
        if not values:
            raise InputError("use DataVector(d) for the zero data vector")
        data = range(1, len(values) + 1) if data is None else data
        return cls(len(values[0]), tuple(zip(data, values)))

    @classmethod
    def from_matrix(cls, m: Mat, data: Sequence | None = None) -> "DataVector":
        cols = [c for c in columns(m) if any(c)]
        if len(cols) != ncols(m):
            raise InputError("matrix has a zero column")
        if not cols:
            return cls(len(m))
        return cls.from_values(cols, data)

    @property
    def support(self) -> tuple:
        return tuple(a for a, _ in self.points)

    def __call__(self, datum) -> Vec:
        datum = frac(datum)
        for a, v in self.points:
            if a == datum:
                return v
        return (Fraction(0),) * self.dimension

    def is_integer(self) -> bool:
        return all(is_integral(v) for _, v in self.points)

    def __add__(self, other: "DataVector") -> "DataVector":
        if other.dimension != self.dimension:
            raise InputError("dimension mismatch")
        acc: dict = {}
        for a, v in itertools.chain(self.points, other.points):
            old = acc.get(a)
            acc[a] = v if old is None else tuple(x + y for x, y in zip(old, v))
        return DataVector(self.dimension, tuple((a, v) for a, v in sorted(acc.items()) if any(v)))

    def scale(self, c) -> "DataVector":
        c = frac(c)
        if c == 0:
            return DataVector(self.dimension)
        return DataVector(self.dimension, tuple((a, tuple(c * x for x in v)) for a, v in self.points))


def to_matrix(v: DataVector) -> Mat:
    """``d × |supp v|`` matrix whose j-th column is the value at the j-th smallest datum."""
    return from_columns([val for _, val in v.points], v.dimension)


def undata(v: DataVector) -> Vec:
    total = [Fraction(0)] * v.dimension
    for _, val in v.points:
        for i, x in enumerate(val):
            total[i] += x
    return tuple(total)


def compon(v: DataVector) -> frozenset:
    return frozenset(val for _, val in v.points)


def zero_extensions_up_to(m: Mat, c_max: int, nrows: int | None = None) -> set:
    """All 0-extensions of ``m`` with at most ``c_max`` columns."""
    r = len(m) if nrows is None else nrows
    c = ncols(m)
    if c_max < c:
        raise InputError("c_max is smaller than the column count")
    cols = columns(m)
    zero = (Fraction(0),) * r
    out = set()
    for total in range(c, c_max + 1):
        for slots in itertools.combinations(range(total), c):
            placed = [zero] * total
            for col, s in zip(cols, slots):
                placed[s] = col
            out.add(from_columns(placed, r))
    return out


def shift_embed(v: DataVector, placement: Sequence[int], slot_count: int) -> Mat:
    """0-extension of ``to_matrix(v)`` with column j at slot ``placement[j]`` (0-based)."""
    placement = tuple(placement)
    if len(placement) != len(v.points):
        raise InputError(f"placement has {len(placement)} entries for support of size {len(v.points)}")
    check_placement(placement, slot_count)
    zero = (Fraction(0),) * v.dimension
    placed = [zero] * slot_count
    for (_, val), s in zip(v.points, placement):
        placed[s] = val
    return from_columns(placed, v.dimension)


def check_placement(placement: Sequence[int], slot_count: int) -> None:
    for s in placement:
        if not (isinstance(s, int) and 0 <= s < slot_count):
            raise InputError(f"placement slot {s!r} outside 0..{slot_count - 1}")
    if any(a >= b for a, b in zip(placement, placement[1:])):
        raise InputError(f"placement {list(placement)} is not strictly increasing")


@dataclass(frozen=True)
class Instance:
    """Target data vector plus generators, all integer and of one dimension."""

    dimension: int
    target: DataVector
    generators: tuple

    def __post_init__(self):
        gens = tuple(self.generators)
        if not gens:
            raise InputError("at least one generator is required")
        for w in (self.target, *gens):
            if w.dimension != self.dimension:
                raise InputError("dimension mismatch between data vectors")
            if not w.is_integer():
                raise InputError("only integer data vectors are accepted")
        object.__setattr__(self, "generators", gens)


@dataclass(frozen=True)
class MatrixInstance:
    """Target matrix and generator matrices sharing the row dimension."""

    dimension: int
    target: Mat
    generators: tuple

    def __post_init__(self):
        gens = tuple(self.generators)
        if not gens:
            raise InputError("at least one generator is required")
        for g in (self.target, *gens):
            if len(g) != self.dimension:
                raise InputError("row dimension mismatch")
            if not is_integral(itertools.chain.from_iterable(g)):
                raise InputError("matrices must be integral")
        for g in gens:
            if any(not any(c) for c in columns(g)):
                raise InputError("generator matrices may not have zero columns")
        if any(not any(c) for c in columns(self.target)):
            raise InputError("target matrix may not have zero columns")
        object.__setattr__(self, "generators", gens)

    @classmethod
    def of(cls, target, generators, dimension: int | None = None) -> "MatrixInstance":
        from .linalg import mat

        t = mat(target)
        gens = tuple(mat(g) for g in generators)
        d = dimension if dimension is not None else (len(t) if t else len(gens[0]))
        if not t:
            t = ((),) * d
        return cls(d, t, gens)

    @property
    def n(self) -> int:
        return ncols(self.target)

    @property
    def sizes(self) -> tuple:
        return tuple(ncols(g) for g in self.generators)

    def target_vector(self) -> DataVector:
        return DataVector.from_matrix(self.target)

    def generator_vectors(self) -> list:
        return [DataVector.from_matrix(g) for g in self.generators]


def instance_to_matrix_problem(inst: Instance) -> MatrixInstance:
    return MatrixInstance(inst.dimension, to_matrix(inst.target), tuple(to_matrix(g) for g in inst.generators))


def matrix_problem_to_instance(mi: MatrixInstance) -> Instance:
    return Instance(mi.dimension, mi.target_vector(), tuple(mi.generator_vectors()))


def undata_all(vs: Iterable[DataVector]) -> list:
    return [undata(v) for v in vs]
