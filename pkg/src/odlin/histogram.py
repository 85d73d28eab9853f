"""Histograms: validation, profiles, decomposition into simple histograms, smears.

Indices are 0-based throughout: rows ``0..r-1``, columns ``0..c-1``.
"""

from __future__ import annotations

import functools
from dataclasses import dataclass
from fractions import Fraction
from typing import Sequence

from .linalg import InputError, Mat, Vec, column, columns, frac, from_columns, hstack, mat, matvec, ncols, vec

INTEGER = "integer"
RATIONAL = "rational"


@dataclass(frozen=True)
class HistogramCheck:
    ok: bool
    degree: Fraction | None = None
    reason: str = ""
    where: tuple | None = None

    def __bool__(self):
        return self.ok


def is_histogram(m: Mat, mode: str = INTEGER, ncol: int | None = None) -> HistogramCheck:
    """Check nonnegativity, equal row sums and row-prefix dominance.

    Dominance is ``sum(H[i, :j]) >= sum(H[i+1, :j+1])`` for ``0 <= j < c``;
    ``where`` reports the first violated ``(i, j)``. All-zero matrices pass
    with degree 0.
    """
    m = mat(m)
    c = ncols(m) if ncol is None else ncol
    for i, row in enumerate(m):
        for j, v in enumerate(row):
            if v < 0:
                return HistogramCheck(False, reason="negative entry", where=(i, j))
            if mode == INTEGER and v.denominator != 1:
                return HistogramCheck(False, reason="non-integral entry", where=(i, j))
    sums = {sum(row, Fraction(0)) for row in m}
    if len(sums) > 1:
        return HistogramCheck(False, reason="row sums differ")
    degree = sums.pop() if sums else Fraction(0)
    for i in range(len(m) - 1):
        upper = Fraction(0)
        lower = m[i + 1][0] if c else Fraction(0)
        for j in range(c):
            if upper < lower:
                return HistogramCheck(False, degree, "prefix dominance fails", (i, j))
            upper += m[i][j]
            if j + 1 < c:
                lower += m[i + 1][j + 1]
    return HistogramCheck(True, degree)


def profile(h: Mat, ncol: int | None = None) -> Mat:
    """``prof[i][j] = sum(H0[i, :j+1]) - sum(H0[i+1, :j+2])`` over the zero-padded ``H0``.

    Columns are 0-based; consecutive columns obey
    ``prof[i][j] = prof[i][j-1] + H[i][j] - H0[i+1][j+1]`` starting from
    ``prof[i][-1] = -H[i+1][0]`` (zero whenever H is a histogram).
    """
    h = mat(h)
    c = ncols(h) if ncol is None else ncol
    out = []
    for i in range(len(h) - 1):
        row = []
        acc = -h[i + 1][0] if c else Fraction(0)
        for j in range(c):
            acc += h[i][j] - (h[i + 1][j + 1] if j + 1 < c else 0)
            row.append(acc)
        out.append(tuple(row))
    return tuple(out)


def is_histogram_via_profile(m: Mat) -> bool:
    """Histogram test through the profile matrix.

    Requires the profile nonnegative with a zero last column, and also the
    ``j = 0`` instance of the defining sum (``H[i+1][0] == 0``), which the
    profile columns do not cover.
    """
    m = mat(m)
    if any(v < 0 for row in m for v in row):
        return False
    if ncols(m) and any(row[0] != 0 for row in m[1:]):
        return False
    prof = profile(m)
    return all(v >= 0 for row in prof for v in row) and all(row[-1] == 0 for row in prof if row)


# ---------------------------------------------------------------------------
# Simple histograms


@dataclass(frozen=True)
class SimpleHistogram:
    """Degree-1 histogram given by a strictly increasing map rows -> columns."""

    f: tuple
    ncol: int

    def __post_init__(self):
        f = tuple(self.f)
        if any(not 0 <= x < self.ncol for x in f):
            raise InputError(f"map {f} leaves 0..{self.ncol - 1}")
        if any(a >= b for a, b in zip(f, f[1:])):
            raise InputError(f"map {f} is not strictly increasing")
        object.__setattr__(self, "f", f)

    @property
    def nrow(self) -> int:
        return len(self.f)

    @property
    def matrix(self) -> Mat:
        return tuple(tuple(Fraction(int(j == fi)) for j in range(self.ncol)) for fi in self.f)


def decompose(h: Mat) -> list[SimpleHistogram]:
    """Split an integer histogram of degree s into s simple histograms.

    Each round takes ``f(i) = min{j : H[i][j] > 0}`` and subtracts its simple
    histogram; the remainder is re-checked every round.
    """
    h = mat(h)
    check = is_histogram(h, INTEGER)
    if not check:
        raise InputError(f"not an integer histogram: {check.reason} at {check.where}")
    c = ncols(h)
    rest = [list(row) for row in h]
    out = []
    for _ in range(int(check.degree)):
        f = tuple(next(j for j, v in enumerate(row) if v > 0) for row in rest)
        for i, j in enumerate(f):
            rest[i][j] -= 1
        out.append(SimpleHistogram(f, c))
        assert is_histogram(rest, INTEGER, c), "remainder after extraction is not a histogram"
    return out


def add_matrices(ms: Sequence[Mat], nrow: int, ncol: int) -> Mat:
    acc = [[Fraction(0)] * ncol for _ in range(nrow)]
    for m in ms:
        for i, row in enumerate(m):
            for j, v in enumerate(row):
                acc[i][j] += v
    return tuple(tuple(r) for r in acc)


def mul_simple(m: Mat, s: SimpleHistogram, nrows: int | None = None) -> Mat:
    """``M @ S``: the 0-extension of M with column i moved to column ``f(i)``."""
    m = mat(m)
    r = len(m) if nrows is None else nrows
    if ncols(m) != s.nrow:
        raise InputError(f"M has {ncols(m)} columns, simple histogram has {s.nrow} rows")
    zero = (Fraction(0),) * r
    placed = [zero] * s.ncol
    for i, j in enumerate(s.f):
        placed[j] = column(m, i)
    return from_columns(placed, r)


def recover_simple(n: Mat, m: Mat, nrows: int | None = None) -> SimpleHistogram | None:
    """Lexicographically least S with ``N == M @ S``, or None."""
    n, m = mat(n), mat(m)
    r = len(n) if nrows is None else nrows
    if len(m) != len(n):
        raise InputError("row dimensions differ")
    ncn = ncols(n)
    ncols_m = columns(m)
    ncols_n = columns(n) if r else [()] * ncn
    zero = (Fraction(0),) * r

    @functools.lru_cache(maxsize=None)
    def place(i: int, start: int):
        # columns start.. of N must host M's columns i.. and zeros elsewhere
        if i == len(ncols_m):
            return () if all(ncols_n[j] == zero for j in range(start, ncn)) else None
        for j in range(start, ncn):
            if ncols_n[j] == ncols_m[i]:
                rest = place(i + 1, j + 1)
                if rest is not None:
                    return (j,) + rest
            if ncols_n[j] != zero:
                break
        return None

    f = place(0, 0)
    return None if f is None else SimpleHistogram(f, ncn)


def smear(h: Mat, j: int, left: Sequence, right: Sequence) -> Mat:
    """Replace column ``j`` by the two columns ``left``, ``right`` that sum to it."""
    h = mat(h)
    left, right = vec(left), vec(right)
    col = column(h, j)
    if len(left) != len(col) or len(right) != len(col):
        raise InputError("split has the wrong length")
    if any(v < 0 for v in left + right):
        raise InputError("split parts must be nonnegative")
    if tuple(a + b for a, b in zip(left, right)) != col:
        raise InputError("split does not sum to the column")
    cols = columns(h)
    out = from_columns(cols[:j] + [left, right] + cols[j + 1:], len(h))
    if is_histogram(h, RATIONAL):
        assert is_histogram(out, RATIONAL), "smear of a histogram is not a histogram"
    return out


# ---------------------------------------------------------------------------
# Multihistograms


def stacked_columns(family: Sequence[Mat], ncol: int) -> list[Vec]:
    """The word of a family: column j is the concatenation of every member's column j."""
    return [tuple(v for h in family for v in column(h, j)) for j in range(ncol)]


def is_multihistogram(family: Sequence[Mat], target: Mat, generators: Sequence[Mat], mode: str = INTEGER,
                      ncol: int | None = None) -> bool:
    """Whether the family is a (target, generators)-multihistogram.

    Every member must be a histogram, and the word must split as
    ``C0* C_{D1} C0* ... C_{Dn} C0*``: columns at the chosen positions solve
    the generator system against the matching target column, all others
    against zero.
    """
    family = [mat(h) for h in family]
    generators = [mat(g) for g in generators]
    if len(family) != len(generators):
        return False
    c = ncol if ncol is not None else next((ncols(h) for h in family if h), 0)
    for h, g in zip(family, generators):
        if len(h) != ncols(g) or (h and ncols(h) != c):
            return False
        if not is_histogram(h, mode, c):
            return False
    d = len(target)
    big = hstack(generators, d)
    word = stacked_columns(family, c)
    images = [matvec(big, w) if big and big[0] else (Fraction(0),) * d for w in word]
    tcols = columns(target)
    zero = (Fraction(0),) * d

    @functools.lru_cache(maxsize=None)
    def fits(k: int, p: int) -> bool:
        # target columns k.. must be matched at word positions p..
        if k == len(tcols):
            return all(images[q] == zero for q in range(p, c))
        for q in range(p, c - (len(tcols) - k) + 1):
            if images[q] == tcols[k] and fits(k + 1, q + 1):
                return True
            if images[q] != zero:
                return False
        return False

    return fits(0, 0)


class StackLayout:
    """Row bookkeeping for a family of histograms stacked on top of each other.

    Generator ``j`` owns stacked rows ``offset[j] .. offset[j] + sizes[j] - 1``.
    Each adjacent row pair ``(j, i), (j, i+1)`` is a *place*: the mass of
    placements whose column ``i`` is already placed but column ``i+1`` not yet.
    Reading a stacked column ``w`` consumes ``w[(j, i+1)]`` from place
    ``(j, i)`` and produces ``w[(j, i)]`` into it.
    """

    def __init__(self, sizes: Sequence[int]):
        self.sizes = tuple(sizes)
        self.offsets = []
        acc = 0
        for s in self.sizes:
            self.offsets.append(acc)
            acc += s
        self.nrows = acc
        self.places = [(j, i) for j, s in enumerate(self.sizes) for i in range(s - 1)]
        self.consume_row = [self.offsets[j] + i + 1 for j, i in self.places]
        self.produce_row = [self.offsets[j] + i for j, i in self.places]

    @property
    def nplaces(self) -> int:
        return len(self.places)

    def consume(self, w: Sequence) -> tuple:
        return tuple(w[q] for q in self.consume_row)

    def produce(self, w: Sequence) -> tuple:
        return tuple(w[q] for q in self.produce_row)

    def split_word(self, word: Sequence[Sequence]) -> list:
        """Cut a word of stacked columns back into one matrix per generator."""
        out = []
        for j, s in enumerate(self.sizes):
            off = self.offsets[j]
            out.append(tuple(tuple(frac(w[off + i]) for w in word) for i in range(s)))
        return out
