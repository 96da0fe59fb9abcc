"""Characteristic-class rings with Steenrod action.

Mod 2: truncated polynomial rings on Stiefel-Whitney classes for the three
families (O: generators w_1..w_d, SO: w_2..w_d, Spin: the SO ring modulo the
ideal generated by iterated squares of w_2).  Rationally and mod 3:
Pontryagin-class rings used only for dimension counting plus the first
Steenrod power evaluation.

Monomials are tuples of (generator index, multiplicity) pairs sorted by
index; polynomials over GF(2) are frozensets of monomials of one degree.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from functools import lru_cache
from math import comb
from typing import Dict, FrozenSet, List, Optional, Tuple

from . import f2
from .f2 import F2Matrix

Mono = Tuple[Tuple[int, int], ...]
Poly = FrozenSet[Mono]

ONE: Mono = ()
ZERO: Poly = frozenset()

FAMILIES = ("O", "SO", "Spin")


class RangeError(ValueError):
    """A computation left the modeled degree range."""


def mono_degree(m: Mono) -> int:
    return sum(i * e for i, e in m)


def mono(*pairs: Tuple[int, int]) -> Mono:
    return normalize({}, pairs)


def normalize(base: Dict[int, int], extra=()) -> Mono:
    acc = dict(base)
    for i, e in extra:
        acc[i] = acc.get(i, 0) + e
    return tuple(sorted((i, e) for i, e in acc.items() if e))


def w(i: int) -> Mono:
    return ((i, 1),) if i else ONE


def mono_mul(a: Mono, b: Mono) -> Mono:
    return normalize(dict(a), b)


def mono_key(m: Mono) -> tuple:
    """Deterministic ordering: by exponent vector, largest parts first."""
    parts = []
    for i, e in m:
        parts.extend([i] * e)
    parts.sort(reverse=True)
    return tuple(parts)


def poly_mul(a: Poly, b: Poly) -> Poly:
    acc: set = set()
    for m in a:
        for n in b:
            acc ^= {mono_mul(m, n)}
    return frozenset(acc)


def binom2(n: int, j: int) -> int:
    """Generalized binomial coefficient mod 2 (top argument may be negative)."""
    if j < 0:
        return 0
    if n >= 0:
        return comb(n, j) & 1
    # binom(n, j) = (-1)^j binom(j - n - 1, j); the sign is invisible mod 2.
    return comb(j - n - 1, j) & 1


def min_index(family: str) -> int:
    if family not in FAMILIES:
        raise ValueError(f"unknown family {family!r}")
    return 1 if family == "O" else 2


def wu_square(k: int, i: int, family: str, d: int) -> Poly:
    """Sq^k(w_i) = sum_j binom(i-k+j-1, j) w_{i+j} w_{k-j}, with w_0 = 1,
    w_m = 0 for m > d, and w_1 = 0 in the oriented families."""
    if not 1 <= i <= d:
        raise ValueError("generator index out of range")
    lo = min_index(family)
    acc: set = set()
    for j in range(k + 1):
        if binom2(i - k + j - 1, j) == 0:
            continue
        a, b = i + j, k - j
        if a > d or b > d:
            continue
        if (0 < a < lo) or (0 < b < lo):
            continue
        term = mono_mul(w(a), w(b))
        acc ^= {term}
    return frozenset(acc)


@lru_cache(maxsize=None)
def _sq_series(i: int, family: str, d: int) -> Tuple[Poly, ...]:
    """Graded total square of the generator w_i: entry k is Sq^k(w_i).

    Instability gives Sq^k(w_i) = 0 for k > i, so the series is finite.
    """
    return tuple(wu_square(k, i, family, d) for k in range(i + 1))


def _series_mul(a: Tuple[Poly, ...], b: Tuple[Poly, ...], cap: int) -> Tuple[Poly, ...]:
    out: List[set] = [set() for _ in range(min(cap, len(a) + len(b) - 2) + 1)]
    for ka, pa in enumerate(a):
        if not pa:
            continue
        for kb, pb in enumerate(b):
            if ka + kb > cap:
                break
            if not pb:
                continue
            out[ka + kb] ^= set(poly_mul(pa, pb))
    return tuple(frozenset(x) for x in out)


@lru_cache(maxsize=None)
def total_square_mono(m: Mono, family: str, d: int) -> Tuple[Poly, ...]:
    """All Sq^k(m) for 0 <= k <= deg m, by the Cartan formula."""
    series: Tuple[Poly, ...] = (frozenset({ONE}),)
    cap = mono_degree(m)
    for i, e in m:
        gen = _sq_series(i, family, d)
        for _ in range(e):
            series = _series_mul(series, gen, cap)
    return series


def total_square(x: Poly, ring: "CharRing") -> List[Poly]:
    """Graded list [Sq^0(x), ..., Sq^{deg x}(x)] for a homogeneous element."""
    if not x:
        return [ZERO]
    degs = {mono_degree(m) for m in x}
    if len(degs) != 1:
        raise ValueError("element not homogeneous")
    deg = degs.pop()
    if 2 * deg > ring.t_max:
        raise RangeError(f"top square lands in degree {2*deg} > t_max {ring.t_max}")
    out: List[set] = [set() for _ in range(deg + 1)]
    for m in x:
        for k, p in enumerate(total_square_mono(m, ring.family, ring.d)):
            out[k] ^= set(ring.reduce(p) if ring.family == "Spin" else p)
    return [frozenset(p) for p in out]


@lru_cache(maxsize=None)
def dual_classes(family: str, d: int, n_max: int) -> Tuple[Poly, ...]:
    """Classes wbar_0..wbar_{n_max} with sum_j w_j wbar_{i-j} = 0 for i >= 1."""
    lo = min_index(family)
    out: List[Poly] = [frozenset({ONE})]
    for n in range(1, n_max + 1):
        acc: set = set()
        for j in range(lo, min(n, d) + 1):
            acc ^= set(poly_mul(frozenset({w(j)}), out[n - j]))
        out.append(frozenset(acc))
    return tuple(out)


@lru_cache(maxsize=None)
def monomial_basis(family: str, d: int, t: int) -> Tuple[Mono, ...]:
    """Monomials of degree t in the family's generators, in mono_key order.

    For Spin this is the basis of the *underlying* SO polynomial ring; the
    quotient basis lives on the CharRing.
    """
    lo = min_index(family)

    def build(total: int, max_part: int) -> List[Mono]:
        if total == 0:
            return [ONE]
        out: List[Mono] = []
        for part in range(min(total, max_part), lo - 1, -1):
            for rest in build(total - part, part):
                out.append(mono_mul(w(part), rest))
        return out

    if t < 0:
        return ()
    return tuple(sorted(build(t, d), key=mono_key))


@dataclass
class _SpinDegree:
    """Per-degree quotient data for the Spin ring: a row-reduced basis of the
    ideal J_d in SO-monomial coordinates, plus the surviving monomials."""

    so_basis: Tuple[Mono, ...]
    j_rows: List[int]          # reduced rows spanning J_d in this degree
    j_pivots: List[int]        # pivot columns (positions in so_basis)
    quotient: Tuple[Mono, ...]  # non-pivot monomials


class CharRing:
    """H* of the classifying space of one family, truncated at t_max, with
    Steenrod action matrices in range."""

    def __init__(self, family: str, d: int, t_max: int):
        if family not in FAMILIES:
            raise ValueError(f"unknown family {family!r}")
        if d < 1 or t_max < 0:
            raise ValueError("bad parameters")
        self.family = family
        self.d = d
        self.t_max = t_max
        self._sq_cache: Dict[Tuple[int, int], F2Matrix] = {}
        self._spin: Dict[int, _SpinDegree] = {}
        self._index_cache: Dict[int, Dict[Mono, int]] = {}
        if family == "Spin":
            from .tables import a_r  # degree bound for the missing v-class

            if t_max >= a_r(d):
                raise RangeError(
                    f"Spin ring valid only for t_max < a_d = {a_r(d)}; got {t_max}"
                )
            self._build_spin()

    # -- J_d, Quillen's ideal ------------------------------------------------

    def j_generators(self) -> List[Poly]:
        """w_2 and its iterated squares Sq^{2^{m-1}}...Sq^1(w_2), within range."""
        gens: List[Poly] = []
        g: Poly = frozenset({w(2)})
        deg = 2
        while deg <= self.t_max:
            gens.append(g)
            k = deg - 1  # Sq^{2^m} applied to the degree-(2^m + 1) generator
            nxt: set = set()
            for m in g:
                series = total_square_mono(m, "SO", self.d)
                if k < len(series):
                    nxt ^= set(series[k])
            g = frozenset(nxt)
            deg += k
            if not g:
                break
        return gens

    def _build_spin(self) -> None:
        gens = self.j_generators()
        for t in range(self.t_max + 1):
            so_basis = monomial_basis("SO", self.d, t)
            index = {m: i for i, m in enumerate(so_basis)}
            span = f2.RowSpan()
            for g in gens:
                gdeg = mono_degree(next(iter(g)))
                if gdeg > t:
                    continue
                for mult in monomial_basis("SO", self.d, t - gdeg):
                    vec = 0
                    for m in g:
                        vec ^= 1 << index[mono_mul(m, mult)]
                    span.add(vec)
            raw = [span.pivots[p] for p in sorted(span.pivots)]
            red = f2.rref(F2Matrix.from_rows(raw, len(so_basis)))[0]
            rows = [r for r in red.data if r]
            pivots = sorted(f2._lowest_bit(r) for r in rows)
            pivot_set = set(pivots)
            quotient = tuple(m for i, m in enumerate(so_basis) if i not in pivot_set)
            self._spin[t] = _SpinDegree(so_basis, rows, pivots, quotient)

    def reduce(self, p: Poly) -> Poly:
        """Reduce a polynomial modulo J_d (identity for O/SO)."""
        if self.family != "Spin" or not p:
            return p
        t = mono_degree(next(iter(p)))
        if t > self.t_max:
            raise RangeError(f"degree {t} > t_max {self.t_max}")
        sd = self._spin[t]
        index = {m: i for i, m in enumerate(sd.so_basis)}
        vec = 0
        for m in p:
            vec ^= 1 << index[m]
        for row in sd.j_rows:
            if (vec >> f2._lowest_bit(row)) & 1:
                vec ^= row
        return frozenset(m for i, m in enumerate(sd.so_basis) if (vec >> i) & 1)

    # -- basis and action ----------------------------------------------------

    def basis(self, t: int) -> Tuple[Mono, ...]:
        if not 0 <= t <= self.t_max:
            raise RangeError(f"degree {t} outside 0..{self.t_max}")
        if self.family == "Spin":
            return self._spin[t].quotient
        return monomial_basis(self.family, self.d, t)

    def dim(self, t: int) -> int:
        return len(self.basis(t))

    def index(self, t: int, m: Mono) -> int:
        table = self._index_cache.get(t)
        if table is None:
            table = {mm: i for i, mm in enumerate(self.basis(t))}
            self._index_cache[t] = table
        return table[m]

    def vector(self, p: Poly) -> Tuple[int, int]:
        """(degree, coordinate vector) of a homogeneous polynomial."""
        if not p:
            raise ValueError("zero polynomial has no unique degree")
        p = self.reduce(p)
        if not p:
            return (-1, 0)
        t = mono_degree(next(iter(p)))
        v = 0
        for m in p:
            v |= 1 << self.index(t, m)
        return t, v

    def sq_matrix(self, k: int, t: int) -> F2Matrix:
        """Matrix of Sq^k from degree t to degree t+k."""
        if k < 0 or t < 0 or t + k > self.t_max:
            raise RangeError(f"Sq^{k} on degree {t} leaves range 0..{self.t_max}")
        key = (k, t)
        got = self._sq_cache.get(key)
        if got is not None:
            return got
        src = self.basis(t)
        tgt = self.basis(t + k)
        tgt_index = {m: i for i, m in enumerate(tgt)}
        mat = F2Matrix.zero(len(tgt), len(src))
        for j, m in enumerate(src):
            series = total_square_mono(m, "SO" if self.family == "Spin" else self.family, self.d)
            if k >= len(series):
                continue
            img = self.reduce(series[k])
            for mm in img:
                mat.set(tgt_index[mm], j, 1)
        self._sq_cache[key] = mat
        return mat

    def describe(self) -> str:
        lines = [f"ring {self.family} d={self.d} t_max={self.t_max}"]
        top = min(self.t_max, 2 * self.d)
        for t in range(top + 1):
            names = " ".join(mono_str(m) for m in self.basis(t))
            lines.append(f"deg {t} dim {self.dim(t)} basis {names}".rstrip())
        return "\n".join(lines) + "\n"


def mono_str(m: Mono) -> str:
    if not m:
        return "1"
    return ".".join(f"w{i}" + (f"^{e}" if e > 1 else "") for i, e in m)


def build_ring(family: str, d: int, t_max: int) -> CharRing:
    return CharRing(family, d, t_max)


# -- Pontryagin rings (rational / mod 3 dimension counting) -----------------


@dataclass(frozen=True)
class PontryaginRing:
    """F[p_1..p_{[d/2]}] (+ e_d with e_d^2 = p_{d/2} for d even), F = Q or F3.

    Only dimension counting and the first-Steenrod-power evaluation live here.
    """

    coefficients: str  # "Q" | "F3"
    d: int
    t_max: int

    def __post_init__(self):
        if self.coefficients not in ("Q", "F3"):
            raise ValueError("coefficients must be Q or F3")

    def basis(self, t: int) -> List[Tuple[Mono, int]]:
        """Monomials (p-part, euler exponent in {0,1}) of degree t."""
        if not 0 <= t <= self.t_max:
            raise RangeError(f"degree {t} outside 0..{self.t_max}")
        n = self.d // 2
        out: List[Tuple[Mono, int]] = []
        euler_exps = (0, 1) if self.d % 2 == 0 else (0,)
        for eexp in euler_exps:
            rest = t - eexp * self.d
            if rest < 0 or rest % 4:
                continue
            for m in _p_monomials(rest // 4, n):
                out.append((m, eexp))
        return out

    def dim(self, t: int) -> int:
        return len(self.basis(t))


@lru_cache(maxsize=None)
def _p_monomials(weight: int, n: int) -> Tuple[Mono, ...]:
    """Monomials in p_1..p_n of total weight ``weight`` (p_i has weight i)."""

    def build(total: int, max_part: int) -> List[Mono]:
        if total == 0:
            return [ONE]
        out = []
        for part in range(min(total, max_part), 0, -1):
            for rest in build(total - part, part):
                out.append(mono_mul(((part, 1),), rest))
        return out

    return tuple(sorted(build(weight, n), key=mono_key))


def p1_power_action(ring: PontryaginRing, j: int) -> Dict[Mono, int]:
    """P^1(p_{j-1}) = 2 p_1 p_{j-1} - 2j p_j, reduced mod 3.

    Keys are Pontryagin monomials (index i = p_i), values in {1, 2}.
    """
    if ring.coefficients != "F3":
        raise ValueError("first Steenrod power needs F3 coefficients")
    n = ring.d // 2
    if j - 1 > n or j < 2:
        raise ValueError("index out of range")
    out: Dict[Mono, int] = {}
    c = 2 % 3
    m1 = mono_mul(((1, 1),), ((j - 1, 1),))
    out[m1] = (out.get(m1, 0) + c) % 3
    if j <= n:
        m2 = ((j, 1),)
        out[m2] = (out.get(m2, 0) - 2 * j) % 3
    return {m: v for m, v in out.items() if v}
