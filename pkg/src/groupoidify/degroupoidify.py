"""
Groupoids over X become rational vectors on the iso classes of X; spans
become rational matrices.

``matrix`` uses the closed formula: entry ([y], [x]) is the sum over apex
classes [s] with p(s) ≅ x and q(s) ≅ y of |Aut(x)| / |Aut(s)|.
``matrix_oracle`` instead applies the span to a point over each x and
reads off the resulting vector, which goes through a weak pullback.
"""

from __future__ import annotations

import csv
import io
import math
from dataclasses import dataclass
from fractions import Fraction

from .errors import BoundaryError, BoundError
from .groupoid import Groupoid, SkeletalGroupoid, cardinality
from .groups import SymmetricGroup
from .span import (
    GroupoidOver,
    Span,
    apply_span,
    inner_product_groupoid,
    point_over,
    same_groupoid,
)


def frac_str(q: Fraction) -> str:
    return f"{q.numerator}/{q.denominator}"


@dataclass
class RationalVector:
    labels: list[int]          # class representatives of the base, ascending
    entries: list[Fraction]

    def __post_init__(self):
        if len(self.labels) != len(self.entries):
            raise ValueError("one entry per class")

    def __getitem__(self, i: int) -> Fraction:
        return self.entries[i]

    def at(self, rep: int) -> Fraction:
        return self.entries[self.labels.index(rep)]

    def __eq__(self, other) -> bool:
        return (isinstance(other, RationalVector) and self.labels == other.labels
                and self.entries == other.entries)

    def __add__(self, other: "RationalVector") -> "RationalVector":
        _same_labels(self.labels, other.labels)
        return RationalVector(self.labels, [a + b for a, b in zip(self.entries, other.entries)])

    def scale(self, c) -> "RationalVector":
        c = Fraction(c)
        return RationalVector(self.labels, [c * a for a in self.entries])

    def to_json(self) -> dict:
        return {"classes": list(self.labels), "entries": [frac_str(a) for a in self.entries]}


@dataclass
class RationalMatrix:
    rows: list[int]            # class representatives of the codomain
    cols: list[int]            # class representatives of the domain
    grid: list[list[Fraction]]

    def __post_init__(self):
        if len(self.grid) != len(self.rows) or any(len(r) != len(self.cols) for r in self.grid):
            raise ValueError("grid does not match class counts")

    @classmethod
    def zeros(cls, rows: list[int], cols: list[int]) -> "RationalMatrix":
        return cls(list(rows), list(cols), [[Fraction(0)] * len(cols) for _ in rows])

    @classmethod
    def identity(cls, labels: list[int]) -> "RationalMatrix":
        m = cls.zeros(labels, labels)
        for i in range(len(labels)):
            m.grid[i][i] = Fraction(1)
        return m

    def __getitem__(self, ij: tuple[int, int]) -> Fraction:
        i, j = ij
        return self.grid[i][j]

    def __eq__(self, other) -> bool:
        return (isinstance(other, RationalMatrix) and self.rows == other.rows
                and self.cols == other.cols and self.grid == other.grid)

    def __add__(self, other: "RationalMatrix") -> "RationalMatrix":
        _same_labels(self.rows, other.rows)
        _same_labels(self.cols, other.cols)
        return RationalMatrix(self.rows, self.cols,
                              [[a + b for a, b in zip(r1, r2)]
                               for r1, r2 in zip(self.grid, other.grid)])

    def scale(self, c) -> "RationalMatrix":
        c = Fraction(c)
        return RationalMatrix(self.rows, self.cols, [[c * a for a in r] for r in self.grid])

    def __matmul__(self, other):
        if isinstance(other, RationalVector):
            _same_labels(self.cols, other.labels)
            return RationalVector(self.rows, [sum((a * b for a, b in zip(r, other.entries)),
                                                  Fraction(0)) for r in self.grid])
        _same_labels(self.cols, other.rows)
        cols = list(zip(*other.grid)) if other.rows else [()] * len(other.cols)
        return RationalMatrix(self.rows, other.cols,
                              [[sum((a * b for a, b in zip(r, c)), Fraction(0)) for c in cols]
                               for r in self.grid])

    def block(self, rows: list[int], cols: list[int]) -> list[list[Fraction]]:
        """Sub-grid on the given row/column positions."""
        return [[self.grid[i][j] for j in cols] for i in rows]

    def to_json(self) -> dict:
        return {"rows": list(self.rows), "cols": list(self.cols),
                "entries": [[frac_str(a) for a in r] for r in self.grid]}

    def to_csv(self) -> str:
        buf = io.StringIO()
        w = csv.writer(buf, lineterminator="\n")
        w.writerow([""] + self.cols)
        for rep, r in zip(self.rows, self.grid):
            w.writerow([rep] + [frac_str(a) for a in r])
        return buf.getvalue()


@dataclass
class CoefficientSeries:
    coefficients: list[Fraction]

    @property
    def max_degree(self) -> int:
        return len(self.coefficients) - 1

    def to_json(self) -> dict:
        return {"max_degree": self.max_degree,
                "coefficients": [frac_str(c) for c in self.coefficients]}


def _same_labels(a: list[int], b: list[int]) -> None:
    if a != b:
        raise BoundaryError("bases differ")


# ---------------------------------------------------------------------------
# finiteness predicates.  Everything here is finite, so these always hold;
# they still run so the conditions stay visible at the call sites.


def is_tame(G: Groupoid) -> bool:
    return G.num_objects < float("inf")


def is_square_integrable(v: GroupoidOver) -> bool:
    return is_tame(v.total)


def span_conditions(S: Span) -> tuple[bool, bool]:
    """The two tameness conditions on a span: finite joint fibers, and
    finitely many nonzero entries per column."""
    return is_tame(S.apex), is_tame(S.domain) and is_tame(S.codomain)


# ---------------------------------------------------------------------------
# degroupoidification


def vector(v: GroupoidOver) -> RationalVector:
    """Entry at [x] is the cardinality of the essential preimage of x."""
    bc = v.base.classes
    entries = [Fraction(0)] * len(bc)
    T = v.total
    for a in T.classes.reps:
        entries[bc.index(v.projection.ob(a))] += Fraction(1, T.aut_order(a))
    return RationalVector(list(bc.reps), entries)


def matrix(S: Span) -> RationalMatrix:
    ok_fibers, ok_columns = span_conditions(S)
    assert ok_fibers and ok_columns
    X, Y, A = S.domain, S.codomain, S.apex
    M = RationalMatrix.zeros(Y.classes.reps, X.classes.reps)
    xc, yc = X.classes, Y.classes
    p, q = S.right, S.left
    for s in A.classes.reps:
        x = p.ob(s)
        M.grid[yc.index(q.ob(s))][xc.index(x)] += Fraction(X.aut_order(x), A.aut_order(s))
    return M


def matrix_oracle(S: Span) -> RationalMatrix:
    """Column [x] is the vector of S applied to a point over x."""
    X, Y = S.domain, S.codomain
    M = RationalMatrix.zeros(Y.classes.reps, X.classes.reps)
    for j, x in enumerate(X.classes.reps):
        col = vector(apply_span(S, point_over(X, x)))
        for i, val in enumerate(col.entries):
            M.grid[i][j] = val
    return M


def inner_product(phi: GroupoidOver, psi: GroupoidOver) -> Fraction:
    """Cardinality of the weak pullback of the two projections."""
    return cardinality(inner_product_groupoid(phi, psi))


def inner_product_weighted(phi: GroupoidOver, psi: GroupoidOver) -> Fraction:
    """Σ over classes of |Aut(x)|·Φ([x])·Ψ([x])."""
    if not same_groupoid(phi.base, psi.base):
        raise BoundaryError("inner product: bases differ")
    a, b = vector(phi), vector(psi)
    X = phi.base
    return sum((X.aut_order(r) * u * w for r, u, w in zip(a.labels, a.entries, b.entries)),
               Fraction(0))


def is_finite_sets(X: Groupoid) -> bool:
    """True for a skeletal truncation of the groupoid of finite sets.

    Tables loaded from JSON qualify when object n is alone in its class and
    has n! automorphisms.
    """
    if isinstance(X, SkeletalGroupoid):
        return all(isinstance(g, SymmetricGroup) and g.n == n for n, g in enumerate(X.groups))
    c = X.classes
    return (len(c) == X.num_objects
            and all(X.aut_order(n) == math.factorial(n) for n in X.objects))


def generating_function(v: GroupoidOver, N: int) -> CoefficientSeries:
    """c_n = cardinality of the fiber over an n-element set, n ≤ N."""
    if not is_finite_sets(v.base):
        raise BoundaryError("generating functions need a base of finite sets")
    if not 0 <= N < v.base.num_objects:
        raise BoundError(f"degree {N} exceeds the truncation {v.base.num_objects - 1}")
    vec = vector(v)
    return CoefficientSeries(vec.entries[:N + 1])
