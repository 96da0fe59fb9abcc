"""Bit-packed GF(2) linear algebra: rank/kernel/solve against oracles."""

import random

from mtadams import f2
from mtadams.f2 import F2Matrix, RowSpan


def random_matrix(rng: random.Random, rows: int, cols: int) -> F2Matrix:
    return F2Matrix(rows, cols, [rng.getrandbits(cols) for _ in range(rows)])


def test_rank_nullity_random():
    rng = random.Random(20260823)
    for _ in range(1000):
        rows = rng.randrange(0, 9)
        cols = rng.randrange(1, 13)
        m = random_matrix(rng, rows, cols)
        assert f2.rank(m) + len(f2.kernel_basis(m)) == cols


def test_kernel_exhaustive_oracle():
    # spans of the returned kernel bases versus brute force over all 2^cols
    # vectors (cols <= 12, so at most 4096 candidates per matrix)
    rng = random.Random(7)
    for _ in range(30):
        rows = rng.randrange(1, 7)
        cols = rng.randrange(1, 13)
        m = random_matrix(rng, rows, cols)
        span = {0}
        for b in f2.kernel_basis(m):
            span |= {v ^ b for v in span}
        brute = {v for v in range(1 << cols) if m.apply(v) == 0}
        assert span == brute


def test_rref_shape():
    rng = random.Random(11)
    for _ in range(100):
        m = random_matrix(rng, rng.randrange(1, 8), rng.randrange(1, 12))
        red, pivots = f2.rref(m)
        assert pivots == sorted(pivots)
        assert len(pivots) == f2.rank(m)
        for i, j in enumerate(pivots):
            # pivot column is a standard basis vector
            assert red.column(j) == 1 << i


def test_solve_matches_membership():
    rng = random.Random(13)
    for _ in range(200):
        m = random_matrix(rng, rng.randrange(1, 8), rng.randrange(1, 10))
        b = rng.getrandbits(m.rows)
        x = f2.solve(m, b)
        aug = m.hstack(F2Matrix(m.rows, 1, [(b >> i) & 1 for i in range(m.rows)]))
        solvable = f2.rank(aug) == f2.rank(m)
        if x is None:
            assert not solvable
        else:
            assert solvable
            assert m.apply(x) == b


def test_matrix_identities():
    rng = random.Random(17)
    for _ in range(50):
        a = random_matrix(rng, 5, 7)
        b = random_matrix(rng, 7, 4)
        v = rng.getrandbits(4)
        assert a.mul(b).apply(v) == a.apply(b.apply(v))
        assert a.transpose().transpose() == a
        assert F2Matrix.identity(5).mul(a) == a


def test_rowspan():
    span = RowSpan()
    assert span.add(0b101)
    assert span.add(0b011)
    assert not span.add(0b110)  # dependent
    assert span.dim == 2
    assert span.contains(0b110)
    assert not span.contains(0b100)
    assert span.reduce(0b101) == 0
