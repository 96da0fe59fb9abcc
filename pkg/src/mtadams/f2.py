"""Exact linear algebra over GF(2).

Matrices are dense and bit-packed: each row is a single Python integer, with
bit ``j`` holding the entry in column ``j``.  Row elimination is then one XOR
per row, which is the hot loop of everything downstream.  All operations are
deterministic: pivots are always chosen in the lowest column first, so any
basis or solution produced here is reproducible run to run.

Vectors are plain integers with the same bit convention.  A matrix acts on a
vector of length ``cols`` and produces a vector of length ``rows``:
``(m @ v)_i = parity(row_i & v)``.
"""

from __future__ import annotations

from typing import Iterable, List, Optional, Tuple


def _parity(x: int) -> int:
    return x.bit_count() & 1


def _lowest_bit(x: int) -> int:
    """Index of the lowest set bit of a nonzero integer."""
    return (x & -x).bit_length() - 1


class F2Matrix:
    __slots__ = ("rows", "cols", "data")

    def __init__(self, rows: int, cols: int, data: Optional[List[int]] = None):
        if rows < 0 or cols < 0:
            raise ValueError("negative dimension")
        self.rows = rows
        self.cols = cols
        if data is None:
            data = [0] * rows
        if len(data) != rows:
            raise ValueError("row count mismatch")
        mask = (1 << cols) - 1
        # Invariant: no bits beyond ``cols`` are ever stored.
        self.data = [r & mask for r in data]

    @classmethod
    def from_rows(cls, rows: Iterable[int], cols: int) -> "F2Matrix":
        data = list(rows)
        return cls(len(data), cols, data)

    @classmethod
    def identity(cls, n: int) -> "F2Matrix":
        return cls(n, n, [1 << i for i in range(n)])

    @classmethod
    def zero(cls, rows: int, cols: int) -> "F2Matrix":
        return cls(rows, cols)

    def copy(self) -> "F2Matrix":
        return F2Matrix(self.rows, self.cols, list(self.data))

    def get(self, i: int, j: int) -> int:
        return (self.data[i] >> j) & 1

    def set(self, i: int, j: int, value: int) -> None:
        if value & 1:
            self.data[i] |= 1 << j
        else:
            self.data[i] &= ~(1 << j)

    def column(self, j: int) -> int:
        v = 0
        for i, row in enumerate(self.data):
            if (row >> j) & 1:
                v |= 1 << i
        return v

    def apply(self, v: int) -> int:
        """Matrix times column vector (vector of length ``cols``)."""
        out = 0
        for i, row in enumerate(self.data):
            if _parity(row & v):
                out |= 1 << i
        return out

    def mul(self, other: "F2Matrix") -> "F2Matrix":
        if self.cols != other.rows:
            raise ValueError("dimension mismatch")
        data = []
        for row in self.data:
            acc = 0
            r = row
            while r:
                k = _lowest_bit(r)
                r &= r - 1
                acc ^= other.data[k]
            data.append(acc)
        return F2Matrix(self.rows, other.cols, data)

    def transpose(self) -> "F2Matrix":
        data = [self.column(j) for j in range(self.cols)]
        return F2Matrix(self.cols, self.rows, data)

    def hstack(self, other: "F2Matrix") -> "F2Matrix":
        if self.rows != other.rows:
            raise ValueError("dimension mismatch")
        data = [a | (b << self.cols) for a, b in zip(self.data, other.data)]
        return F2Matrix(self.rows, self.cols + other.cols, data)

    def __eq__(self, other: object) -> bool:
        return (
            isinstance(other, F2Matrix)
            and self.rows == other.rows
            and self.cols == other.cols
            and self.data == other.data
        )

    def __hash__(self):
        return hash((self.rows, self.cols, tuple(self.data)))

    def __repr__(self) -> str:
        body = ",".join(format(r, f"0{max(self.cols, 1)}b")[::-1] for r in self.data)
        return f"F2Matrix({self.rows}x{self.cols}:[{body}])"


def rref(m: F2Matrix) -> Tuple[F2Matrix, List[int]]:
    """Reduced row echelon form and the (strictly increasing) pivot columns."""
    data = list(m.data)
    pivots: List[int] = []
    r = 0
    for col in range(m.cols):
        sel = None
        for i in range(r, m.rows):
            if (data[i] >> col) & 1:
                sel = i
                break
        if sel is None:
            continue
        data[r], data[sel] = data[sel], data[r]
        for i in range(m.rows):
            if i != r and (data[i] >> col) & 1:
                data[i] ^= data[r]
        pivots.append(col)
        r += 1
        if r == m.rows:
            break
    return F2Matrix(m.rows, m.cols, data), pivots


def rank(m: F2Matrix) -> int:
    return len(rref(m)[1])


def kernel_basis(m: F2Matrix) -> List[int]:
    """Basis of the null space, ordered by free-variable index."""
    red, pivots = rref(m)
    pivot_set = set(pivots)
    basis = []
    for free in range(m.cols):
        if free in pivot_set:
            continue
        v = 1 << free
        for i, p in enumerate(pivots):
            if (red.data[i] >> free) & 1:
                v |= 1 << p
        basis.append(v)
    return basis


def solve(m: F2Matrix, b: int) -> Optional[int]:
    """Some x with m·x = b, or None.  Free variables are set to zero."""
    if b >> m.rows:
        raise ValueError("b longer than row count")
    aug = F2Matrix(m.rows, m.cols + 1, [row | (((b >> i) & 1) << m.cols) for i, row in enumerate(m.data)])
    red, pivots = rref(aug)
    if pivots and pivots[-1] == m.cols:
        return None
    x = 0
    for i, p in enumerate(pivots):
        if (red.data[i] >> m.cols) & 1:
            x |= 1 << p
    return x


class RowSpan:
    """Incrementally maintained row space, for rank growth and membership.

    Keeps one vector per pivot column (pivot = lowest set bit), which is all
    the downstream span-saturation loops need.
    """

    __slots__ = ("pivots",)

    def __init__(self, vectors: Iterable[int] = ()):
        self.pivots: dict[int, int] = {}
        for v in vectors:
            self.add(v)

    def reduce(self, v: int) -> int:
        while v:
            p = _lowest_bit(v)
            row = self.pivots.get(p)
            if row is None:
                break
            v ^= row
        return v

    def add(self, v: int) -> bool:
        """Add a vector; True iff it enlarged the span."""
        v = self.reduce(v)
        if not v:
            return False
        self.pivots[_lowest_bit(v)] = v
        return True

    def contains(self, v: int) -> bool:
        return self.reduce(v) == 0

    @property
    def dim(self) -> int:
        return len(self.pivots)
