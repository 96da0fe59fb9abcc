"""Admissible basis and Adem reduction of the mod-2 Steenrod algebra."""

import random

from mtadams import steenrod
from mtadams.steenrod import (
    UNIT,
    ZERO,
    add,
    adem_reduce,
    admissible_basis,
    degree,
    is_admissible,
    multiply,
)


def test_dimensions_low_degrees():
    # classical dimension count of the mod-2 Steenrod algebra
    dims = [len(admissible_basis(n)) for n in range(10)]
    assert dims == [1, 1, 1, 2, 2, 2, 3, 4, 4, 5]


def test_admissible_basis_is_admissible():
    for n in range(12):
        for mono in admissible_basis(n):
            assert is_admissible(mono)
            assert degree(mono) == n


def test_adem_reduce_lands_in_admissible_basis():
    rng = random.Random(101)
    for _ in range(300):
        word = tuple(rng.randrange(1, 10) for _ in range(rng.randrange(1, 5)))
        out = adem_reduce(word)
        for mono in out:
            assert is_admissible(mono)
            assert degree(mono) == degree(word)


def test_known_relations():
    assert adem_reduce((1, 1)) == ZERO
    assert adem_reduce((1, 2)) == frozenset({(3,)})
    assert adem_reduce((2, 2)) == frozenset({(3, 1)})
    assert adem_reduce((3, 2)) == ZERO
    assert adem_reduce((2, 3)) == frozenset({(5,), (4, 1)})


def test_multiply_associative_and_unital():
    rng = random.Random(103)
    for _ in range(60):
        a = adem_reduce(tuple(rng.randrange(1, 6)
                              for _ in range(rng.randrange(1, 3))))
        b = adem_reduce(tuple(rng.randrange(1, 6)
                              for _ in range(rng.randrange(1, 3))))
        c = adem_reduce(tuple(rng.randrange(1, 6)
                              for _ in range(rng.randrange(1, 3))))
        assert multiply(multiply(a, b), c) == multiply(a, multiply(b, c))
        assert multiply(UNIT, a) == a
        assert multiply(a, UNIT) == a


def test_add_is_gf2():
    x = frozenset({(3,), (2, 1)})
    assert add(x, x) == ZERO
    assert add(x, ZERO) == x


def test_algebra_index_roundtrip():
    alg = steenrod.SteenrodAlgebra(9)
    for n in range(10):
        for i, mono in enumerate(alg.basis(n)):
            assert alg.index(mono) == i
        assert alg.dim(n) == len(admissible_basis(n))
