"""The mod-2 Steenrod algebra in a degree range.

Elements are kept in the admissible basis: a monomial Sq^{i1}...Sq^{ik} is a
tuple ``(i1, ..., ik)`` of positive integers with ``i_j >= 2*i_{j+1}``; the
empty tuple is the unit.  An element is a frozenset of admissible monomials of
one degree (coefficients live in GF(2), so set symmetric difference is
addition).  Non-admissible words exist only transiently inside
:func:`adem_reduce`.
"""

from __future__ import annotations

from functools import lru_cache
from math import comb
from typing import FrozenSet, Iterable, List, Tuple

Monomial = Tuple[int, ...]
Element = FrozenSet[Monomial]

ZERO: Element = frozenset()
UNIT: Element = frozenset({()})


def degree(mono: Monomial) -> int:
    return sum(mono)


def is_admissible(word: Iterable[int]) -> bool:
    w = tuple(word)
    return all(w[j] >= 2 * w[j + 1] for j in range(len(w) - 1))


@lru_cache(maxsize=None)
def admissible_basis(n: int) -> Tuple[Monomial, ...]:
    """All admissible monomials of total degree n, lexicographically ordered."""
    if n < 0:
        raise ValueError("negative degree")
    if n == 0:
        return ((),)

    def build(total: int, cap: int) -> List[Monomial]:
        # admissible sequences summing to ``total`` with first entry <= cap
        out: List[Monomial] = []
        for first in range(1, min(total, cap) + 1):
            rest = total - first
            if rest == 0:
                out.append((first,))
            else:
                for tail in build(rest, first // 2):
                    out.append((first,) + tail)
        return out

    return tuple(sorted(build(n, n)))


@lru_cache(maxsize=None)
def adem_reduce(word: Monomial) -> Element:
    """Admissible-basis expansion of an arbitrary composition of squares.

    Sq^0 factors are dropped (they are the unit).  For an inadmissible
    adjacent pair a < 2b the Adem relation
    Sq^a Sq^b = sum_c binom(b-c-1, a-2c) Sq^{a+b-c} Sq^c (mod 2) is applied
    to the leftmost offending pair and the results reduced recursively.
    """
    word = tuple(i for i in word if i != 0)
    for j in range(len(word) - 1):
        a, b = word[j], word[j + 1]
        if a >= 2 * b:
            continue
        head, tail = word[:j], word[j + 2:]
        acc: set = set()
        for c in range(a // 2 + 1):
            if comb(b - c - 1, a - 2 * c) & 1:
                acc ^= {head + ((a + b - c, c) if c else (a + b - c,)) + tail}
        result: set = set()
        for w in acc:
            result ^= set(adem_reduce(w))
        return frozenset(result)
    return frozenset({word})


def add(x: Element, y: Element) -> Element:
    return x ^ y


def multiply(x: Element, y: Element) -> Element:
    """Product in the admissible basis."""
    acc: set = set()
    for m in x:
        for n in y:
            acc ^= set(adem_reduce(m + n))
    return frozenset(acc)


@lru_cache(maxsize=None)
def sq_times(k: int, mono: Monomial) -> Element:
    """Left multiplication Sq^k * (admissible monomial), reduced."""
    if k == 0:
        return frozenset({mono})
    return adem_reduce((k,) + mono)


class SteenrodAlgebra:
    """A_2 truncated at a top degree.

    Products whose degree would exceed the truncation are refused loudly
    (never silently wrong); callers stay inside the window by construction.
    """

    def __init__(self, t_max: int):
        if t_max < 0:
            raise ValueError("negative truncation degree")
        self.t_max = t_max
        self._index: dict = {}

    def basis(self, n: int) -> Tuple[Monomial, ...]:
        if not 0 <= n <= self.t_max:
            raise ValueError(f"degree {n} outside truncation 0..{self.t_max}")
        return admissible_basis(n)

    def dim(self, n: int) -> int:
        return len(self.basis(n))

    def index(self, mono: Monomial) -> int:
        """Position of an admissible monomial within its degree's basis."""
        d = degree(mono)
        table = self._index.get(d)
        if table is None:
            table = {m: i for i, m in enumerate(self.basis(d))}
            self._index[d] = table
        return table[mono]

    def multiply(self, x: Element, y: Element) -> Element:
        dx = degree(next(iter(x))) if x else 0
        dy = degree(next(iter(y))) if y else 0
        if dx + dy > self.t_max:
            raise ValueError(
                f"product degree {dx + dy} exceeds truncation {self.t_max}"
            )
        return multiply(x, y)
