"""Truncated Steenrod modules for the Madsen-Tillmann-type spectra MT(d,r).

The cohomology of MT(d,r) in its validity window is the ideal of the
characteristic-class ring spanned by monomials with at least one factor w_k,
k >= d-r+1, carrying the Thom-twisted action

    Sq^k(phi(x)) = sum_j phi(Sq^j(x) * wbar_{k-j}).

From it we derive the quotient module V (one class in each degree
d-r+1..d, the suspended Stiefel variety) and the complementary submodule
C_theta (the decomposable part), plus rational/mod-3 dimension tables and
the d -> d+k periodicity isomorphism.

Every module is finite data: named basis per degree and one GF(2) matrix per
(Sq^k, degree).  Validity windows are enforced as hard preconditions; the
structure theory is simply false outside them, so leaving the window raises
:class:`WindowError` naming the violated bound.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Dict, List, Optional, Tuple

from . import charrings as cr
from . import f2
from .charrings import Mono, Poly, mono_str
from .f2 import F2Matrix
from .steenrod import adem_reduce
from .tables import a_r


class WindowError(cr.RangeError):
    """A request left the validity window of the structure theory."""


@dataclass
class TruncatedModule:
    """Graded GF(2) vector space with Sq^k action matrices in a window.

    ``basis[t]`` is the ordered tuple of basis-element names in degree t
    (absent degrees are zero).  ``sq[(k, t)]`` maps degree t to degree t+k;
    matrices are stored only when both ends are nonzero.
    """

    label: str
    t_min: int
    t_max: int
    basis: Dict[int, Tuple[str, ...]]
    sq: Dict[Tuple[int, int], F2Matrix]
    meta: dict = field(default_factory=dict)

    def dim(self, t: int) -> int:
        return len(self.basis.get(t, ()))

    def names(self, t: int) -> Tuple[str, ...]:
        return self.basis.get(t, ())

    def index(self, t: int, name: str) -> int:
        return self.basis[t].index(name)

    def sq_matrix(self, k: int, t: int) -> F2Matrix:
        if k < 0:
            raise ValueError("negative Sq exponent")
        if t + k > self.t_max:
            raise WindowError(
                f"{self.label}: Sq^{k} from degree {t} lands in {t + k} > "
                f"t_max {self.t_max}"
            )
        if k == 0:
            return F2Matrix.identity(self.dim(t))
        got = self.sq.get((k, t))
        if got is not None:
            return got
        return F2Matrix.zero(self.dim(t + k), self.dim(t))

    def apply(self, k: int, t: int, v: int) -> int:
        return self.sq_matrix(k, t).apply(v)

    def degrees(self) -> List[int]:
        return sorted(self.basis)

    def check_adem(self) -> None:
        """Assert every Adem relation holds as a matrix identity in range."""
        span = self.t_max - self.t_min
        for b in range(1, span + 1):
            for a in range(1, min(2 * b - 1, span - b) + 1):
                expansion = adem_reduce((a, b))
                for t in self.degrees():
                    if t + a + b > self.t_max or self.dim(t) == 0:
                        continue
                    lhs = self.sq_matrix(a, t + b).mul(self.sq_matrix(b, t))
                    rhs = F2Matrix.zero(self.dim(t + a + b), self.dim(t))
                    for word in expansion:
                        m = F2Matrix.identity(self.dim(t))
                        deg = t
                        for e in reversed(word):
                            m = self.sq_matrix(e, deg).mul(m)
                            deg += e
                        rhs.data = [x ^ y for x, y in zip(rhs.data, m.data)]
                    if lhs != rhs:
                        raise AssertionError(
                            f"{self.label}: Adem relation Sq^{a} Sq^{b} fails "
                            f"on degree {t}"
                        )

    def dump(self) -> str:
        lines = [f"module {self.label}", f"window {self.t_min} {self.t_max}"]
        for t in self.degrees():
            lines.append(f"deg {t} basis " + " ".join(self.basis[t]))
        for (k, t) in sorted(self.sq):
            m = self.sq[(k, t)]
            rows = " ".join(_bits(r, m.cols) for r in m.data) or "-"
            lines.append(f"sq {k} {t} rows {rows}")
        lines.append("end")
        return "\n".join(lines) + "\n"


def _bits(row: int, cols: int) -> str:
    return "".join("1" if (row >> j) & 1 else "0" for j in range(cols)) or "-"


@dataclass
class ModuleMap:
    """Degree-preserving linear map of truncated modules, one matrix per
    degree (absent degrees are zero maps)."""

    source: TruncatedModule
    target: TruncatedModule
    mats: Dict[int, F2Matrix]

    def matrix(self, t: int) -> F2Matrix:
        got = self.mats.get(t)
        if got is not None:
            return got
        return F2Matrix.zero(self.target.dim(t), self.source.dim(t))

    def verify(self) -> None:
        """Assert commutation with every Sq^k in the common window."""
        top = min(self.source.t_max, self.target.t_max)
        for t in self.source.degrees():
            for k in range(1, top - t + 1):
                lhs = self.target.sq_matrix(k, t).mul(self.matrix(t))
                rhs = self.matrix(t + k).mul(self.source.sq_matrix(k, t))
                if lhs != rhs:
                    raise AssertionError(
                        f"map {self.source.label} -> {self.target.label} does "
                        f"not commute with Sq^{k} on degree {t}"
                    )


def trivial_module(t_max: int, label: str = "S") -> TruncatedModule:
    """One class in degree zero (the sphere's cohomology)."""
    return TruncatedModule(label, 0, t_max, {0: ("i",)}, {})


# -- H*(MT(d,r)) -------------------------------------------------------------


def _check_mt_window(family: str, d: int, r: int, t_max: int) -> None:
    if family not in cr.FAMILIES:
        raise ValueError(f"unknown family {family!r}")
    if not 0 <= r <= d:
        raise ValueError("need 0 <= r <= d")
    if t_max > 2 * (d - r) + 1:
        raise WindowError(
            f"MT({family},{d},{r}): t_max {t_max} exceeds 2(d-r)+1 = "
            f"{2 * (d - r) + 1} (ideal-submodule structure window)"
        )
    if family == "Spin":
        if d - r < 9:
            raise WindowError(f"MTSpin({d},{r}): need d-r >= 9, got {d - r}")
        if 2 * r >= d:
            raise WindowError(f"MTSpin({d},{r}): need 2r < d")
        if t_max >= a_r(d - r):
            raise WindowError(
                f"MTSpin({d},{r}): t_max {t_max} not below a_(d-r) = "
                f"{a_r(d - r)}"
            )


def _is_ideal(m: Mono, lo: int) -> bool:
    return bool(m) and m[-1][0] >= lo


def _twisted_series(m: Mono, k: int, family: str, d: int,
                    wbar: Tuple[Poly, ...]) -> Poly:
    """Thom-twisted Sq^k of one ring monomial: sum_j Sq^j(m) wbar_{k-j}."""
    series = cr.total_square_mono(m, family, d)
    acc: set = set()
    for j in range(min(k, len(series) - 1) + 1):
        acc ^= set(cr.poly_mul(series[j], wbar[k - j]))
    return frozenset(acc)


class _IdealModel:
    """Scratch data for building H*(MT(d,r)): per-degree ideal monomials,
    and for Spin the subspace K = J_d intersect ideal to quotient out."""

    def __init__(self, family: str, d: int, r: int, t_max: int):
        self.family = family
        self.d = d
        self.r = r
        self.t_max = t_max
        self.lo = d - r + 1
        # Sq and wbar are computed in the polynomial ring; for Spin that is
        # the SO ring, with the quotient applied afterwards.
        self.poly_family = "SO" if family == "Spin" else family
        self.wbar = cr.dual_classes(self.poly_family, d, t_max - self.lo)
        self.ideal: Dict[int, Tuple[Mono, ...]] = {}
        for t in range(self.lo, t_max + 1):
            mons = [m for m in cr.monomial_basis(self.poly_family, d, t)
                    if _is_ideal(m, self.lo)]
            # decomposables first so that (Spin) quotient pivots prefer them
            # and the pure classes w_k survive as basis representatives
            mons.sort(key=lambda m: (len(m) == 1 and m[0][1] == 1, cr.mono_key(m)))
            self.ideal[t] = tuple(mons)
        self.k_rows: Dict[int, List[int]] = {}
        self.quotient: Dict[int, Tuple[Mono, ...]] = {}
        if family == "Spin":
            self._build_spin_quotient()
        else:
            self.quotient = dict(self.ideal)

    def _ideal_vector(self, p: Poly, t: int) -> int:
        index = {m: i for i, m in enumerate(self.ideal[t])}
        v = 0
        for m in p:
            if m not in index:
                raise AssertionError(
                    f"MT({self.family},{self.d},{self.r}): term {mono_str(m)} "
                    f"left the ideal (closure violated)"
                )
            v |= 1 << index[m]
        return v

    def _build_spin_quotient(self) -> None:
        ring = cr.CharRing("Spin", self.d, self.t_max)
        for t in range(self.lo, self.t_max + 1):
            ideal = self.ideal[t]
            full = ring._spin[t].so_basis
            # order the full basis with non-ideal monomials first: rref rows
            # whose pivot falls in the trailing ideal block then span J ∩ ideal
            non_ideal = [m for m in full if not _is_ideal(m, self.lo)]
            order = list(non_ideal) + list(ideal)
            pos = {m: i for i, m in enumerate(order)}
            reordered = []
            for row in ring._spin[t].j_rows:
                v = 0
                for i, m in enumerate(full):
                    if (row >> i) & 1:
                        v |= 1 << pos[m]
                reordered.append(v)
            red, _ = f2.rref(F2Matrix.from_rows(reordered, len(order)))
            cut = len(non_ideal)
            k_rows = [r >> cut for r in red.data
                      if r and f2._lowest_bit(r) >= cut]
            # re-reduce in ideal coordinates (decomposable-first order)
            span = f2.RowSpan(k_rows)
            rows = [span.pivots[p] for p in sorted(span.pivots)]
            self.k_rows[t] = rows
            pivots = {f2._lowest_bit(r) for r in rows}
            self.quotient[t] = tuple(
                m for i, m in enumerate(ideal) if i not in pivots
            )
            # pure classes must survive as representatives
            for k in range(self.lo, min(self.d, t) + 1):
                if t == k and cr.w(k) not in self.quotient[t]:
                    raise AssertionError(
                        f"MTSpin({self.d},{self.r}): pure class w_{k} "
                        f"eliminated by the quotient"
                    )

    def reduce_vector(self, p: Poly, t: int) -> int:
        """Coordinates of a homogeneous ideal polynomial in the (possibly
        quotiented) degree-t basis."""
        v = self._ideal_vector(p, t)
        for row in self.k_rows.get(t, ()):
            if (v >> f2._lowest_bit(row)) & 1:
                v ^= row
        if self.family == "Spin":
            index = {m: i for i, m in enumerate(self.ideal[t])}
            out = 0
            for j, m in enumerate(self.quotient[t]):
                if (v >> index[m]) & 1:
                    out |= 1 << j
            # all surviving coordinates must sit on quotient representatives
            check = 0
            for m in self.quotient[t]:
                if (v >> index[m]) & 1:
                    check |= 1 << index[m]
            rest = v ^ check
            if rest:
                raise AssertionError("quotient reduction left a pivot term")
            return out
        return v

    def assert_k_closed(self) -> None:
        """The quotiented subspace K must be stable under the twisted action."""
        for t, rows in self.k_rows.items():
            ideal = self.ideal[t]
            for row in rows:
                p = frozenset(m for i, m in enumerate(ideal) if (row >> i) & 1)
                for k in range(1, self.t_max - t + 1):
                    img: set = set()
                    for m in p:
                        img ^= set(
                            _twisted_series(m, k, self.poly_family, self.d,
                                            self.wbar)
                        )
                    v = self._ideal_vector(frozenset(img), t + k)
                    span = f2.RowSpan(self.k_rows.get(t + k, ()))
                    if not span.contains(v):
                        raise AssertionError(
                            f"MTSpin({self.d},{self.r}): quotient subspace not "
                            f"closed under twisted Sq^{k} at degree {t}"
                        )


def mt_module(family: str, d: int, r: int, t_max: int) -> TruncatedModule:
    """H*(MT(family; d, r)) as a truncated module with the twisted action."""
    _check_mt_window(family, d, r, t_max)
    label = f"MT{'' if family == 'O' else family}({d},{r})"
    if r == 0:
        return TruncatedModule(label, d + 1, t_max, {}, {},
                               meta={"family": family, "d": d, "r": r})
    model = _IdealModel(family, d, r, t_max)
    if family == "Spin":
        model.assert_k_closed()
    basis = {
        t: tuple(mono_str(m) for m in model.quotient[t])
        for t in range(model.lo, t_max + 1)
        if model.quotient[t]
    }
    sq: Dict[Tuple[int, int], F2Matrix] = {}
    for t in range(model.lo, t_max + 1):
        src = model.quotient[t]
        if not src:
            continue
        for k in range(1, t_max - t + 1):
            tgt = model.quotient.get(t + k, ())
            if not tgt:
                continue
            mat = F2Matrix.zero(len(tgt), len(src))
            for j, m in enumerate(src):
                img = _twisted_series(m, k, model.poly_family, d, model.wbar)
                col = model.reduce_vector(img, t + k)
                while col:
                    i = f2._lowest_bit(col)
                    col &= col - 1
                    mat.set(i, j, 1)
            if any(mat.data):
                sq[(k, t)] = mat
    mod = TruncatedModule(label, model.lo, t_max, basis, sq,
                          meta={"family": family, "d": d, "r": r,
                                "model": model})
    return mod


# -- quotient V and submodule C_theta ---------------------------------------


def v_module(family: str, d: int, r: int, t_max: int) -> TruncatedModule:
    """One class x_i per degree i = d-r+1..d, with Sq^k(x_i) =
    binom(i-1, k) x_{i+k} (suspended stunted projective space)."""
    if family not in cr.FAMILIES:
        raise ValueError(f"unknown family {family!r}")
    if not 1 <= r <= d:
        raise ValueError("need 1 <= r <= d")
    if t_max > 2 * (d - r):
        raise WindowError(
            f"V({d},{r}): t_max {t_max} exceeds 2(d-r) = {2 * (d - r)} "
            f"(connectivity of the stunted-projective-space model)"
        )
    lo = d - r + 1
    basis = {i: (f"x{i}",) for i in range(lo, min(d, t_max) + 1)}
    sq: Dict[Tuple[int, int], F2Matrix] = {}
    for i in basis:
        for k in range(1, t_max - i + 1):
            if i + k in basis and cr.binom2(i - 1, k):
                sq[(k, i)] = F2Matrix.from_rows([1], 1)
    return TruncatedModule(f"V({d},{r})", lo, t_max, basis, sq,
                           meta={"family": family, "d": d, "r": r})


def quotient_map(mt: TruncatedModule) -> Tuple[TruncatedModule, ModuleMap]:
    """The projection H*(MT(d,r)) -> H*(Sigma V_{d,r}) killing decomposables."""
    family, d, r = mt.meta["family"], mt.meta["d"], mt.meta["r"]
    t_top = min(mt.t_max, 2 * (d - r))
    v = v_module(family, d, r, t_top)
    mats: Dict[int, F2Matrix] = {}
    for t in v.degrees():
        mat = F2Matrix.zero(v.dim(t), mt.dim(t))
        pure = mono_str(cr.w(t))
        names = mt.names(t)
        if pure in names:
            mat.set(0, names.index(pure), 1)
        mats[t] = mat
    qmap = ModuleMap(mt, v, mats)
    qmap.verify()
    return v, qmap


def ctheta_module(family: str, d: int, r: int,
                  t_max: int) -> Tuple[TruncatedModule, ModuleMap]:
    """The decomposable submodule H*(C_theta) with its inclusion into mt."""
    if t_max > 2 * (d - r):
        raise WindowError(
            f"C_theta({family},{d},{r}): t_max {t_max} exceeds 2(d-r) = "
            f"{2 * (d - r)} (cofiber-sequence window)"
        )
    mt = mt_module(family, d, r, t_max)
    pure = {mono_str(cr.w(i)) for i in range(d - r + 1, d + 1)}
    basis: Dict[int, Tuple[str, ...]] = {}
    keep: Dict[int, List[int]] = {}
    for t in mt.degrees():
        cols = [j for j, name in enumerate(mt.names(t)) if name not in pure]
        if cols:
            basis[t] = tuple(mt.names(t)[j] for j in cols)
            keep[t] = cols
    sq: Dict[Tuple[int, int], F2Matrix] = {}
    for (k, t), mat in mt.sq.items():
        if t not in keep or t + k > t_max:
            continue
        tgt_keep = keep.get(t + k, [])
        tgt_names = mt.names(t + k)
        sub = F2Matrix.zero(len(tgt_keep), len(keep[t]))
        for jj, j in enumerate(keep[t]):
            col = mat.column(j)
            rest = col
            for ii, i in enumerate(tgt_keep):
                if (col >> i) & 1:
                    sub.set(ii, jj, 1)
                    rest &= ~(1 << i)
            if rest:
                hit = [tgt_names[i] for i in range(len(tgt_names))
                       if (rest >> i) & 1]
                raise AssertionError(
                    f"C_theta({family},{d},{r}): Sq^{k} of a decomposable "
                    f"class hits pure classes {hit} (closure violated)"
                )
        if any(sub.data):
            sq[(k, t)] = sub
    lo = min(basis) if basis else d - r + 3
    c = TruncatedModule(f"Ctheta({family},{d},{r})", lo, t_max, basis, sq,
                        meta={"family": family, "d": d, "r": r})
    mats = {}
    for t in c.degrees():
        mat = F2Matrix.zero(mt.dim(t), c.dim(t))
        for jj, j in enumerate(keep[t]):
            mat.set(j, jj, 1)
        mats[t] = mat
    inc = ModuleMap(c, mt, mats)
    inc.verify()
    return c, inc


# -- rational / mod-3 dimension tables --------------------------------------


@dataclass(frozen=True)
class DimensionTable:
    """Degreewise dimensions of H*(MTSO/MTSpin(d,r); F), F = Q or F3: the
    free module over the Pontryagin-class ring on at most two generators."""

    coefficients: str
    d: int
    r: int
    t_max: int
    generators: Tuple[Tuple[str, int], ...]

    def dim(self, q: int) -> int:
        if not 0 <= q <= self.t_max:
            raise WindowError(f"degree {q} outside 0..{self.t_max}")
        ring = cr.PontryaginRing("Q" if self.coefficients == "Q" else "F3",
                                 self.d, self.t_max)
        return sum(ring.dim(q - deg) for _, deg in self.generators
                   if q >= deg)


def rational_dimensions(d: int, r: int, t_max: int,
                        field: str = "Q") -> DimensionTable:
    """Free-module dimension table for the oriented families.

    Generators: the image of delta(e_{d-r}) in degree d-r+1 when d-r is
    even, and the relative Euler class in degree d when d is even.
    """
    if field not in ("Q", "F3"):
        raise ValueError("field must be Q or F3")
    if t_max > 2 * (d - r) + 1:
        raise WindowError(
            f"rational table ({d},{r}): t_max {t_max} exceeds 2(d-r)+1 = "
            f"{2 * (d - r) + 1}"
        )
    gens: List[Tuple[str, int]] = []
    if (d - r) % 2 == 0:
        gens.append((f"phi(delta(e_{d - r}))", d - r + 1))
    if d % 2 == 0:
        gens.append((f"phi(e'_{d})", d))
    return DimensionTable(field, d, r, t_max, tuple(gens))


# -- periodicity -------------------------------------------------------------


@dataclass
class PeriodicityReport:
    family: str
    d: int
    r: int
    k: int
    t_window: Tuple[int, int]   # degrees checked, in the smaller module
    ok: bool
    failure: Optional[str] = None

    def line(self) -> str:
        status = "isomorphism" if self.ok else f"FAILS: {self.failure}"
        lo, hi = self.t_window
        return (f"MT{self.family}({self.d + self.k},{self.r}) -> "
                f"MT{self.family}({self.d},{self.r}) shift {self.k}, "
                f"degrees {lo}..{hi}: {status}")


def periodicity_check(family: str, d: int, r: int, k: int) -> PeriodicityReport:
    """Verify mt_module(family, d+k, r) is mt_module(family, d, r) shifted
    by k, via w_i -> w_{i-k} on the unique large factor of each monomial."""
    if k % a_r(r):
        raise ValueError(
            f"period {k} is not a multiple of a_{r} = {a_r(r)}"
        )
    t1 = min(2 * (d - r) + 1, 2 * (d - r + 1))
    if family == "Spin":
        t1 = min(t1, a_r(d - r) - 1, a_r(d + k - r) - 1 - k)
    m1 = mt_module(family, d, r, t1)
    m2 = mt_module(family, d + k, r, t1 + k)
    if k == 0:
        return PeriodicityReport(family, d, r, 0, (m1.t_min, t1), True)
    model1: _IdealModel = m1.meta["model"]
    model2: _IdealModel = m2.meta["model"]
    lo2 = d + k - r + 1

    def shift(m: Mono) -> Mono:
        big = [(i, e) for i, e in m if i >= lo2]
        if len(big) != 1 or big[0][1] != 1:
            raise AssertionError(
                f"monomial {mono_str(m)} lacks a unique large factor"
            )
        i = big[0][0]
        return cr.mono_mul(
            tuple(p for p in m if p[0] != i), cr.w(i - k)
        )

    # the quotiented subspaces must correspond (vacuous outside Spin)
    for t, rows in model2.k_rows.items():
        if t - k > t1:
            continue
        span = f2.RowSpan(model1.k_rows.get(t - k, ()))
        for row in rows:
            p = frozenset(mm for i, mm in enumerate(model2.ideal[t])
                          if (row >> i) & 1)
            v = model1._ideal_vector(frozenset(map(shift, p)), t - k)
            if not span.contains(v):
                return PeriodicityReport(
                    family, d, r, k, (m1.t_min, t1), False,
                    f"quotient subspaces do not correspond at degree {t - k}",
                )

    mats: Dict[int, F2Matrix] = {}
    for t2 in m2.degrees():
        t = t2 - k
        mat = F2Matrix.zero(m1.dim(t), m2.dim(t2))
        for j, mm in enumerate(model2.quotient[t2]):
            col = model1.reduce_vector(frozenset({shift(mm)}), t)
            for i in range(m1.dim(t)):
                if (col >> i) & 1:
                    mat.set(i, j, 1)
        if m1.dim(t) != m2.dim(t2) or f2.rank(mat) != m1.dim(t):
            return PeriodicityReport(
                family, d, r, k, (m1.t_min, t1), False,
                f"not bijective at degree {t} "
                f"(dims {m2.dim(t2)} -> {m1.dim(t)}, rank {f2.rank(mat)})",
            )
        mats[t2] = mat

    for t2 in m2.degrees():
        t = t2 - k
        for q in range(1, t1 - t + 1):
            lhs = m1.sq_matrix(q, t).mul(mats[t2])
            rhs = mats.get(t2 + q,
                           F2Matrix.zero(m1.dim(t + q), m2.dim(t2 + q))
                           ).mul(m2.sq_matrix(q, t2))
            if lhs != rhs:
                return PeriodicityReport(
                    family, d, r, k, (m1.t_min, t1), False,
                    f"Sq^{q} does not commute at degree {t}",
                )
    return PeriodicityReport(family, d, r, k, (m1.t_min, t1), True)
