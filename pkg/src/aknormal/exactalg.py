"""Exact rational matrices and the elimination routines built on them.

Scalars are :class:`fractions.Fraction`. Elimination itself runs on integer
rows (denominators cleared row by row) through the kernel selected in
:mod:`aknormal._backend`, and only the final echelon form is turned back into
fractions.
"""
from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from math import gcd, lcm
from typing import Iterable, Sequence

from ._backend import rref_int

Rational = Fraction

__all__ = [
    "Rational",
    "QMatrix",
    "rref",
    "rank",
    "kernel_basis",
    "solve",
    "Solver",
    "column_space_basis",
    "primitive_integer_vector",
]


def _q(x) -> Fraction:
    return x if isinstance(x, Fraction) else Fraction(x)


@dataclass(frozen=True)
class QMatrix:
    """Dense row-major matrix of Fractions.

    Construct with :meth:`from_rows`, :meth:`zeros`, :meth:`identity` or
    :meth:`from_columns` rather than by hand.
    """

    rows: int
    cols: int
    entries: tuple

    def __post_init__(self):
        if self.rows < 0 or self.cols < 0:
            raise ValueError("matrix dimensions must be nonnegative")
        if len(self.entries) != self.rows * self.cols:
            raise ValueError(
                f"expected {self.rows * self.cols} entries, got {len(self.entries)}"
            )

    @classmethod
    def from_rows(cls, rows: Sequence[Sequence], cols: int | None = None) -> "QMatrix":
        rows = [list(r) for r in rows]
        if cols is None:
            cols = len(rows[0]) if rows else 0
        if any(len(r) != cols for r in rows):
            raise ValueError("ragged rows")
        return cls(len(rows), cols, tuple(_q(x) for r in rows for x in r))

    @classmethod
    def from_columns(cls, columns: Sequence[Sequence], rows: int) -> "QMatrix":
        cols = len(columns)
        if any(len(c) != rows for c in columns):
            raise ValueError("ragged columns")
        return cls(rows, cols, tuple(_q(columns[j][i]) for i in range(rows) for j in range(cols)))

    @classmethod
    def zeros(cls, rows: int, cols: int) -> "QMatrix":
        return cls(rows, cols, (Fraction(0),) * (rows * cols))

    @classmethod
    def identity(cls, n: int) -> "QMatrix":
        return cls(n, n, tuple(Fraction(int(i == j)) for i in range(n) for j in range(n)))

    @classmethod
    def diagonal(cls, diag: Sequence) -> "QMatrix":
        n = len(diag)
        zero = Fraction(0)
        return cls(n, n, tuple(_q(diag[i]) if i == j else zero for i in range(n) for j in range(n)))

    @property
    def shape(self) -> tuple[int, int]:
        return (self.rows, self.cols)

    def __getitem__(self, ij: tuple[int, int]) -> Fraction:
        i, j = ij
        if not (0 <= i < self.rows and 0 <= j < self.cols):
            raise IndexError(ij)
        return self.entries[i * self.cols + j]

    def row(self, i: int) -> list[Fraction]:
        return list(self.entries[i * self.cols:(i + 1) * self.cols])

    def column(self, j: int) -> list[Fraction]:
        return [self.entries[i * self.cols + j] for i in range(self.rows)]

    def to_rows(self) -> list[list[Fraction]]:
        return [self.row(i) for i in range(self.rows)]

    def transpose(self) -> "QMatrix":
        r, c, e = self.rows, self.cols, self.entries
        return QMatrix(c, r, tuple(e[i * c + j] for j in range(c) for i in range(r)))

    def is_zero(self) -> bool:
        return not any(self.entries)

    def __add__(self, other: "QMatrix") -> "QMatrix":
        if self.shape != other.shape:
            raise ValueError(f"shape mismatch {self.shape} vs {other.shape}")
        return QMatrix(self.rows, self.cols, tuple(a + b for a, b in zip(self.entries, other.entries)))

    def __sub__(self, other: "QMatrix") -> "QMatrix":
        if self.shape != other.shape:
            raise ValueError(f"shape mismatch {self.shape} vs {other.shape}")
        return QMatrix(self.rows, self.cols, tuple(a - b for a, b in zip(self.entries, other.entries)))

    def __neg__(self) -> "QMatrix":
        return QMatrix(self.rows, self.cols, tuple(-a for a in self.entries))

    def scale(self, c) -> "QMatrix":
        c = _q(c)
        return QMatrix(self.rows, self.cols, tuple(c * a for a in self.entries))

    def __matmul__(self, other: "QMatrix") -> "QMatrix":
        if self.cols != other.rows:
            raise ValueError(f"cannot multiply {self.shape} by {other.shape}")
        n, m, p = self.rows, self.cols, other.cols
        a, b = self.entries, other.entries
        # skip zeros: operator matrices here are very sparse
        brows = [[(j, b[t * p + j]) for j in range(p) if b[t * p + j]] for t in range(m)]
        out = []
        for i in range(n):
            acc = [Fraction(0)] * p
            for t in range(m):
                x = a[i * m + t]
                if x:
                    for j, y in brows[t]:
                        acc[j] += x * y
            out.extend(acc)
        return QMatrix(n, p, tuple(out))

    def apply(self, v: Sequence) -> list[Fraction]:
        """Matrix-vector product."""
        if len(v) != self.cols:
            raise ValueError(f"vector of length {len(v)} for matrix with {self.cols} columns")
        c = self.cols
        e = self.entries
        nz = [(j, _q(x)) for j, x in enumerate(v) if x]
        return [sum((e[i * c + j] * x for j, x in nz), Fraction(0)) for i in range(self.rows)]

    def select_columns(self, idx: Sequence[int]) -> "QMatrix":
        return QMatrix.from_columns([self.column(j) for j in idx], self.rows)

    def select_rows(self, idx: Sequence[int]) -> "QMatrix":
        return QMatrix(len(idx), self.cols, tuple(x for i in idx for x in self.row(i)))

    def hstack(self, other: "QMatrix") -> "QMatrix":
        if self.rows != other.rows:
            raise ValueError("row counts differ")
        return QMatrix.from_rows([self.row(i) + other.row(i) for i in range(self.rows)], self.cols + other.cols)

    def __str__(self) -> str:
        cells = [[str(x) for x in self.row(i)] for i in range(self.rows)]
        width = max((len(s) for r in cells for s in r), default=1)
        return "\n".join("[" + " ".join(s.rjust(width) for s in r) + "]" for r in cells)


def _integer_rows(M: QMatrix) -> list[list[int]]:
    out = []
    for i in range(M.rows):
        row = M.row(i)
        den = lcm(*(x.denominator for x in row)) if row else 1
        out.append([x.numerator * (den // x.denominator) for x in row])
    return out


def rref(M: QMatrix) -> tuple[QMatrix, list[int]]:
    """Reduced row-echelon form of ``M`` and its pivot columns (increasing)."""
    rows = _integer_rows(M)
    r, pivots = rref_int(rows, M.cols)
    out = []
    for i, col in enumerate(pivots):
        p = rows[i][col]
        out.append([Fraction(v, p) for v in rows[i]])
    zero = [Fraction(0)] * M.cols
    out.extend(list(zero) for _ in range(M.rows - r))
    return QMatrix.from_rows(out, M.cols), list(pivots)


def rank(M: QMatrix) -> int:
    if M.rows == 0 or M.cols == 0:
        return 0
    rows = _integer_rows(M)
    r, _ = rref_int(rows, M.cols)
    return r


def _kernel_from_rref(R: QMatrix, pivots: Sequence[int]) -> list[list[Fraction]]:
    n = R.cols
    pivset = set(pivots)
    basis = []
    for f in range(n):
        if f in pivset:
            continue
        v = [Fraction(0)] * n
        v[f] = Fraction(1)
        for i, p in enumerate(pivots):
            v[p] = -R[i, f]
        basis.append(v)
    return basis


def kernel_basis(M: QMatrix) -> list[list[Fraction]]:
    """Basis of the right null space, one vector per free column of the RREF."""
    if M.rows == 0:
        return [[Fraction(int(i == j)) for i in range(M.cols)] for j in range(M.cols)]
    R, pivots = rref(M)
    return _kernel_from_rref(R, pivots)


def column_space_basis(M: QMatrix) -> list[list[Fraction]]:
    """The pivot columns of ``M`` (a basis of its image)."""
    if M.rows == 0 or M.cols == 0:
        return []
    _, pivots = rref(M)
    return [M.column(j) for j in pivots]


class Solver:
    """Reusable exact solver for ``M x = b``.

    Eliminates ``[M | I]`` once; each :meth:`solve` is then a couple of
    matrix-vector products. Free variables are set to zero.
    """

    def __init__(self, M: QMatrix):
        self.matrix = M
        m, n = M.rows, M.cols
        aug = QMatrix.from_rows(
            [M.row(i) + [Fraction(int(i == j)) for j in range(m)] for i in range(m)], n + m
        )
        R, pivots = rref(aug)
        self.pivots = [p for p in pivots if p < n]
        self.rank = len(self.pivots)
        # rows of T with T·M = RREF(M); T·b gives the transformed right-hand side
        self._transform = [R.row(i)[n:] for i in range(m)]

    def solve(self, b: Sequence) -> list[Fraction] | None:
        """A solution with free variables zero, or ``None`` if inconsistent."""
        if len(b) != self.matrix.rows:
            raise ValueError(
                f"right-hand side has length {len(b)}, matrix has {self.matrix.rows} rows"
            )
        b = [_q(x) for x in b]
        nzb = [(j, x) for j, x in enumerate(b) if x]
        tb = [sum((t[j] * x for j, x in nzb), Fraction(0)) for t in self._transform]
        if any(tb[self.rank:]):
            return None
        x = [Fraction(0)] * self.matrix.cols
        for i, p in enumerate(self.pivots):
            x[p] = tb[i]
        return x


def solve(M: QMatrix, b: Sequence) -> list[Fraction] | None:
    """Solve ``M x = b`` exactly; ``None`` marks an inconsistent system."""
    if len(b) != M.rows:
        raise ValueError(f"right-hand side has length {len(b)}, matrix has {M.rows} rows")
    return Solver(M).solve(b)


def primitive_integer_vector(v: Iterable) -> list[int]:
    """Scale a rational vector to coprime integers, first nonzero entry positive."""
    v = [_q(x) for x in v]
    den = lcm(*(x.denominator for x in v)) if v else 1
    ints = [x.numerator * (den // x.denominator) for x in v]
    g = gcd(*ints) if ints else 0
    if g == 0:
        return ints
    ints = [x // g for x in ints]
    first = next((x for x in ints if x), 0)
    if first < 0:
        ints = [-x for x in ints]
    return ints
