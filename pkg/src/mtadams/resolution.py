"""Minimal free resolutions over the mod-2 Steenrod algebra in a window.

A resolution ... -> F_1 -> F_0 -> M -> 0 is built stage by stage, degree by
degree: the new generators of F_s in degree t are a complement of
(augmentation ideal)·(kernel) inside the kernel of the previous differential.
Because kernels are computed exactly in every degree <= t_max, every Ext cell
with t <= t_max is correct; the resolution's ``complete_through`` watermark
equals t_max.

A free module is represented degreewise: the basis of F_s in degree t is all
pairs (generator, admissible monomial) with matching degrees, ordered by
generator then monomial.  Differentials and the A-action are GF(2) matrices
between these spaces.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Dict, List, Optional, Sequence, Tuple

from . import f2, steenrod
from .f2 import F2Matrix
from .mtmod import ModuleMap, TruncatedModule, WindowError
from .steenrod import Monomial, admissible_basis, sq_times

_PREFIXES = "xabcefghjklmnpq"


def _gen_name(s: int, i: int) -> str:
    if s < len(_PREFIXES):
        return f"{_PREFIXES[s]}{i}"
    return f"s{s}g{i}"


@dataclass
class FreeStage:
    """Generators of one homological degree: (name, internal degree)."""

    s: int
    generators: List[Tuple[str, int]] = field(default_factory=list)

    def degrees(self) -> List[int]:
        return [t for _, t in self.generators]


class _FreeModule:
    """Degreewise basis/action bookkeeping for one stage."""

    def __init__(self, s: int, t_max: int):
        self.s = s
        self.t_max = t_max
        self.gens: List[Tuple[str, int]] = []
        self._basis_cache: Dict[int, List[Tuple[int, Monomial]]] = {}
        self._index_cache: Dict[int, Dict[Tuple[int, Monomial], int]] = {}

    def add_gen(self, name: str, t: int) -> int:
        self.gens.append((name, t))
        self._basis_cache.clear()
        self._index_cache.clear()
        return len(self.gens) - 1

    def basis(self, t: int) -> List[Tuple[int, Monomial]]:
        got = self._basis_cache.get(t)
        if got is None:
            got = [
                (i, a)
                for i, (_, tg) in enumerate(self.gens)
                if 0 <= t - tg
                for a in admissible_basis(t - tg)
            ]
            self._basis_cache[t] = got
        return got

    def index(self, t: int) -> Dict[Tuple[int, Monomial], int]:
        got = self._index_cache.get(t)
        if got is None:
            got = {ba: i for i, ba in enumerate(self.basis(t))}
            self._index_cache[t] = got
        return got

    def dim(self, t: int) -> int:
        return len(self.basis(t))

    def sq_matrix(self, k: int, t: int) -> F2Matrix:
        """Left multiplication by Sq^k from degree t to t+k."""
        src = self.basis(t)
        tgt_index = self.index(t + k)
        mat = F2Matrix.zero(len(tgt_index), len(src))
        for j, (gi, a) in enumerate(src):
            for c in sq_times(k, a):
                mat.set(tgt_index[(gi, c)], j, 1)
        return mat


@dataclass
class MinimalResolution:
    """Stages, differentials, and the window they are exact in.

    ``d0[i]`` is the module vector (in the target's degree basis) that the
    i-th stage-0 generator maps to; ``diffs[s][i]`` (s >= 1) is the vector in
    F_{s-1} of the appropriate degree.
    """

    target: TruncatedModule
    s_max: int
    t_max: int
    stages: List[FreeStage]
    d0: List[int]
    diffs: List[List[int]]          # diffs[s] for s >= 1; diffs[0] unused
    _frees: List[_FreeModule] = field(repr=False, default_factory=list)
    _dm_cache: Dict[Tuple[int, int], F2Matrix] = field(
        repr=False, default_factory=dict)

    @property
    def complete_through(self) -> int:
        return self.t_max

    def dim(self, s: int, t: int) -> int:
        """Number of F_s generators of degree t (the Ext^{s,t} dimension)."""
        if not 0 <= s <= self.s_max:
            return 0
        return sum(1 for _, tg in self.stages[s].generators if tg == t)

    def generator_names(self, s: int, t: int) -> List[str]:
        return [n for n, tg in self.stages[s].generators if tg == t]

    def diff_matrix(self, s: int, t: int) -> F2Matrix:
        """The differential F_s -> F_{s-1} (or -> M for s=0) in degree t."""
        if t > self.t_max:
            raise WindowError(f"degree {t} beyond resolution window {self.t_max}")
        cached = self._dm_cache.get((s, t))
        if cached is not None:
            return cached
        free = self._frees[s]
        src = free.basis(t)
        if s == 0:
            rows = self.target.dim(t)
            mat = F2Matrix.zero(rows, len(src))
            for j, (gi, a) in enumerate(src):
                v = self._module_word(a, self.stages[0].generators[gi][1],
                                      self.d0[gi])
                for i in range(rows):
                    if (v >> i) & 1:
                        mat.set(i, j, 1)
            self._dm_cache[(s, t)] = mat
            return mat
        prev = self._frees[s - 1]
        mat = F2Matrix.zero(prev.dim(t), len(src))
        for j, (gi, a) in enumerate(src):
            v = self._free_word(s - 1, a, self.stages[s].generators[gi][1],
                                self.diffs[s][gi])
            for i in range(prev.dim(t)):
                if (v >> i) & 1:
                    mat.set(i, j, 1)
        self._dm_cache[(s, t)] = mat
        return mat

    def _module_word(self, word: Monomial, t: int, v: int) -> int:
        for k in word[::-1]:
            v = self.target.sq_matrix(k, t).apply(v)
            t += k
        return v

    def _free_word(self, s: int, word: Monomial, t: int, v: int) -> int:
        free = self._frees[s]
        for k in word[::-1]:
            v = free.sq_matrix(k, t).apply(v)
            t += k
        return v

    # -- verification --------------------------------------------------------

    def verify_exact(self) -> None:
        """Exactness as rank identities through the window, including
        surjectivity onto the module."""
        for t in range(self.t_max + 1):
            d0 = self.diff_matrix(0, t)
            if f2.rank(d0) != self.target.dim(t):
                raise AssertionError(
                    f"{self.target.label}: resolution misses the module in "
                    f"degree {t}"
                )
        for s in range(self.s_max):
            for t in range(self.t_max + 1):
                ds = self.diff_matrix(s, t)
                ds1 = self.diff_matrix(s + 1, t)
                if f2.rank(ds) + f2.rank(ds1) != self._frees[s].dim(t):
                    raise AssertionError(
                        f"{self.target.label}: not exact at F_{s} degree {t}"
                    )

    def verify_minimal(self) -> None:
        """No differential coefficient is a unit."""
        for s in range(1, self.s_max + 1):
            prev = self._frees[s - 1]
            for gi, v in enumerate(self.diffs[s]):
                t = self.stages[s].generators[gi][1]
                for (pg, a) in (prev.basis(t)[i]
                                for i in range(prev.dim(t)) if (v >> i) & 1):
                    if a == ():
                        raise AssertionError(
                            f"{self.target.label}: unit coefficient in the "
                            f"differential of {self.stages[s].generators[gi][0]}"
                        )

    def diff_terms(self, s: int, gi: int) -> List[Tuple[Monomial, str]]:
        """The differential of one generator as (monomial, name) pairs."""
        t = self.stages[s].generators[gi][1]
        prev = self._frees[s - 1]
        out = []
        v = self.diffs[s][gi]
        for i in range(prev.dim(t)):
            if (v >> i) & 1:
                pg, a = prev.basis(t)[i]
                out.append((a, self.stages[s - 1].generators[pg][0]))
        return out

    def dump(self) -> str:
        lines = [
            f"resolution {self.target.label} smax {self.s_max} "
            f"tmax {self.t_max}"
        ]
        for s, stage in enumerate(self.stages):
            lines.append(f"stage {s}")
            for gi, (name, t) in enumerate(stage.generators):
                lines.append(f"gen {name} {t}")
                if s == 0:
                    names = self.target.names(t)
                    terms = [names[i] for i in range(len(names))
                             if (self.d0[gi] >> i) & 1]
                    lines.append(f"aug {name} = " + " + ".join(terms))
                else:
                    terms = [
                        (f"Sq{','.join(map(str, a))}.{g}" if a else g)
                        for a, g in self.diff_terms(s, gi)
                    ]
                    lines.append(f"diff {name} = " + (" + ".join(terms) or "0"))
        lines.append("end")
        return "\n".join(lines) + "\n"


def minimal_resolve(module: TruncatedModule, s_max: int,
                    t_max: int) -> MinimalResolution:
    if t_max > module.t_max:
        raise WindowError(
            f"{module.label}: resolution t_max {t_max} exceeds module window "
            f"{module.t_max}"
        )
    stages = [FreeStage(s) for s in range(s_max + 1)]
    frees = [_FreeModule(s, t_max) for s in range(s_max + 1)]
    res = MinimalResolution(module, s_max, t_max, stages, [],
                            [[] for _ in range(s_max + 1)], frees)

    # Stage 0: minimal generators of the module itself.
    for t in range(module.t_min, t_max + 1):
        if module.dim(t) == 0:
            continue
        span = f2.RowSpan()
        for k in range(1, t - module.t_min + 1):
            m = module.sq_matrix(k, t - k)
            for j in range(module.dim(t - k)):
                span.add(m.column(j))
        for i in range(module.dim(t)):
            if span.add(1 << i):
                gi = frees[0].add_gen("", t)
                stages[0].generators.append(("", t))
                res.d0.append(1 << i)
    _name_stage(stages[0], frees[0], 0)

    # Higher stages: generators = kernel modulo (augmentation ideal)·kernel.
    for s in range(1, s_max + 1):
        kernels: Dict[int, List[int]] = {}
        for t in range(t_max + 1):
            kernels[t] = f2.kernel_basis(res.diff_matrix(s - 1, t))
        for t in range(t_max + 1):
            if not kernels[t]:
                continue
            span = f2.RowSpan()
            for k in range(1, t + 1):
                if not kernels.get(t - k):
                    continue
                m = frees[s - 1].sq_matrix(k, t - k)
                for v in kernels[t - k]:
                    span.add(m.apply(v))
            for v in kernels[t]:
                if span.add(v):
                    frees[s].add_gen("", t)
                    stages[s].generators.append(("", t))
                    res.diffs[s].append(v)
        _name_stage(stages[s], frees[s], s)
    return res


def _name_stage(stage: FreeStage, free: _FreeModule, s: int) -> None:
    stage.generators.sort(key=lambda g: g[1])
    named = [(_gen_name(s, i + 1), t)
             for i, (_, t) in enumerate(stage.generators)]
    stage.generators[:] = named
    free.gens[:] = named
    free._basis_cache.clear()
    free._index_cache.clear()


# NOTE: generators are created in ascending degree order already, so the sort
# in _name_stage is stable bookkeeping, and diffs[s] stays index-aligned.


@dataclass
class ExtTable:
    """Ext^{s,t} dimensions with the h_0/h_1 edge matrices read off the
    minimal resolution: entry (g, g') is the coefficient of Sq^{2^i}·g'
    in the differential of g."""

    resolution: MinimalResolution
    dims: Dict[Tuple[int, int], int]
    h0: Dict[Tuple[int, int], F2Matrix]   # cell (s,t) -> (s+1, t+1)
    h1: Dict[Tuple[int, int], F2Matrix]   # cell (s,t) -> (s+1, t+2)

    def dim(self, s: int, t: int) -> int:
        return self.dims.get((s, t), 0)

    def h_edge(self, i: int, s: int, t: int) -> F2Matrix:
        table = self.h0 if i == 0 else self.h1
        got = table.get((s, t))
        if got is not None:
            return got
        return F2Matrix.zero(self.dim(s + 1, t + 1 + i), self.dim(s, t))


def ext_table(res: MinimalResolution) -> ExtTable:
    dims: Dict[Tuple[int, int], int] = {}
    for s, stage in enumerate(res.stages):
        for _, t in stage.generators:
            dims[s, t] = dims.get((s, t), 0) + 1
    h0: Dict[Tuple[int, int], F2Matrix] = {}
    h1: Dict[Tuple[int, int], F2Matrix] = {}
    for s in range(1, res.s_max + 1):
        for (i, table) in ((0, h0), (1, h1)):
            sq = (2 ** i,)
            for t in sorted({tt for ss, tt in dims if ss == s - 1}):
                rows = res.generator_names(s, t + 1 + i)
                cols = res.generator_names(s - 1, t)
                if not rows or not cols:
                    continue
                mat = F2Matrix.zero(len(rows), len(cols))
                row_of = {n: i2 for i2, n in enumerate(rows)}
                col_of = {n: j for j, n in enumerate(cols)}
                for gi, (name, tg) in enumerate(res.stages[s].generators):
                    if tg != t + 1 + i or name not in row_of:
                        continue
                    for a, src in res.diff_terms(s, gi):
                        if a == sq and src in col_of:
                            mat.set(row_of[name], col_of[src], 1)
                if any(mat.data):
                    table[(s - 1, t)] = mat
    return ExtTable(res, dims, h0, h1)


@dataclass
class ChainMap:
    """A lift of a module map to the resolutions, with the induced map on
    Ext (contravariant: cells of the target module's table map to cells of
    the source module's table)."""

    phi: ModuleMap
    res_src: MinimalResolution
    res_tgt: MinimalResolution
    values: List[List[int]]    # per stage, per source generator: vector in F_s(tgt)
    ext_mats: Dict[Tuple[int, int], F2Matrix]

    def ext_matrix(self, s: int, t: int) -> F2Matrix:
        got = self.ext_mats.get((s, t))
        if got is not None:
            return got
        return F2Matrix.zero(self.res_src.dim(s, t), self.res_tgt.dim(s, t))


def lift_map(phi: ModuleMap, res_src: MinimalResolution,
             res_tgt: MinimalResolution) -> ChainMap:
    """Lift phi: A -> B to a chain map F(A) -> F(B); the squares are solved
    degreewise with f2.solve (always solvable when both inputs are exact)."""
    if phi.source is not res_src.target or phi.target is not res_tgt.target:
        raise ValueError("resolutions do not match the map's modules")
    s_top = min(res_src.s_max, res_tgt.s_max)
    t_top = min(res_src.t_max, res_tgt.t_max)
    values: List[List[int]] = []
    for s in range(s_top + 1):
        stage_vals: List[int] = []
        for gi, (name, t) in enumerate(res_src.stages[s].generators):
            if t > t_top:
                stage_vals.append(0)
                continue
            if s == 0:
                b = phi.matrix(t).apply(res_src.d0[gi])
            else:
                prev = values[s - 1]
                w = res_src.diffs[s][gi]
                b = 0
                basis = res_src._frees[s - 1].basis(t)
                for i in range(len(basis)):
                    if (w >> i) & 1:
                        pg, a = basis[i]
                        tp = res_src.stages[s - 1].generators[pg][1]
                        b ^= res_tgt._free_word(s - 1, a, tp, prev[pg])
            y = f2.solve(res_tgt.diff_matrix(s, t), b)
            if y is None:
                raise AssertionError(
                    f"chain lift unsolvable at stage {s}, generator {name} "
                    f"(inputs not exact?)"
                )
            stage_vals.append(y)
        values.append(stage_vals)

    ext_mats: Dict[Tuple[int, int], F2Matrix] = {}
    for s in range(s_top + 1):
        for t in sorted({tt for _, tt in res_src.stages[s].generators}):
            rows = res_src.generator_names(s, t)
            cols = res_tgt.generator_names(s, t)
            if not rows or not cols or t > t_top:
                continue
            mat = F2Matrix.zero(len(rows), len(cols))
            tgt_basis = res_tgt._frees[s].index(t)
            for ri, (name, tg) in enumerate(
                (g for g in res_src.stages[s].generators if g[1] == t)
            ):
                gi = res_src.stages[s].generators.index((name, tg))
                v = values[s][gi]
                for cj, cname in enumerate(cols):
                    cg = [i for i, (n, _) in
                          enumerate(res_tgt.stages[s].generators)
                          if n == cname][0]
                    idx = tgt_basis.get((cg, ()))
                    if idx is not None and (v >> idx) & 1:
                        mat.set(ri, cj, 1)
            if any(mat.data):
                ext_mats[(s, t)] = mat
    return ChainMap(phi, res_src, res_tgt, values, ext_mats)
