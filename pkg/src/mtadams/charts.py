"""Adams E2-charts: assembly from Ext tables, rendering, forced-zero
differential detection, and homotopy-group extraction from columns.

A chart is a finite window of cells (stem, s) with dot multiplicities and the
h_0 (vertical) and h_1 (diagonal) edge matrices between adjacent cells.
Charts never extend past the resolution's completeness watermark; requesting
a window beyond it is an error, not a silent truncation.
"""

from __future__ import annotations

import re
from dataclasses import dataclass, field
from typing import Callable, Dict, List, Optional, Sequence, Tuple

from . import f2
from .f2 import F2Matrix
from .resolution import ExtTable

Cell = Tuple[int, int]   # (stem, s)


class ChartError(ValueError):
    pass


@dataclass
class E2Chart:
    label: str
    stem_lo: int
    stem_hi: int
    s_max: int
    watermark: int
    dots: Dict[Cell, int] = field(default_factory=dict)
    h0: Dict[Cell, F2Matrix] = field(default_factory=dict)   # -> (stem, s+1)
    h1: Dict[Cell, F2Matrix] = field(default_factory=dict)   # -> (stem+1, s+1)

    def dot(self, stem: int, s: int) -> int:
        return self.dots.get((stem, s), 0)

    def h0_rank(self, stem: int, s: int) -> int:
        m = self.h0.get((stem, s))
        return f2.rank(m) if m is not None else 0

    def h1_rank(self, stem: int, s: int) -> int:
        m = self.h1.get((stem, s))
        return f2.rank(m) if m is not None else 0

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, E2Chart):
            return NotImplemented
        return (
            (self.label, self.stem_lo, self.stem_hi, self.s_max,
             self.watermark, self.dots) ==
            (other.label, other.stem_lo, other.stem_hi, other.s_max,
             other.watermark, other.dots)
            and self.h0 == other.h0
            and self.h1 == other.h1
        )


def build_chart(ext: ExtTable, stem_lo: int, stem_hi: int,
                s_max: int) -> E2Chart:
    res = ext.resolution
    if stem_hi + s_max > res.complete_through:
        raise ChartError(
            f"window (stems <= {stem_hi}, s <= {s_max}) needs t = "
            f"{stem_hi + s_max} beyond resolution watermark "
            f"{res.complete_through}"
        )
    if s_max > res.s_max:
        raise ChartError(
            f"window s_max {s_max} exceeds resolution s_max {res.s_max}"
        )
    chart = E2Chart(res.target.label, stem_lo, stem_hi, s_max,
                    res.complete_through)
    for stem in range(stem_lo, stem_hi + 1):
        for s in range(s_max + 1):
            t = stem + s
            n = ext.dim(s, t)
            if n:
                chart.dots[(stem, s)] = n
            if s < s_max:
                m = ext.h_edge(0, s, t)
                if any(m.data):
                    chart.h0[(stem, s)] = m
            if s < s_max and stem < stem_hi:
                m = ext.h_edge(1, s, t)
                if any(m.data):
                    chart.h1[(stem, s)] = m
    return chart


# -- rendering ---------------------------------------------------------------


def _bits(row: int, cols: int) -> str:
    return "".join("1" if (row >> j) & 1 else "0" for j in range(cols)) or "-"


def _unbits(text: str) -> int:
    if text == "-":
        return 0
    v = 0
    for j, ch in enumerate(text):
        if ch == "1":
            v |= 1 << j
    return v


def render_structured(chart: E2Chart) -> str:
    lines = [
        f"chart {chart.label}",
        f"window stems {chart.stem_lo} {chart.stem_hi} smax {chart.s_max}",
        f"watermark {chart.watermark}",
    ]
    for (stem, s) in sorted(chart.dots):
        lines.append(f"dot {stem} {s} {chart.dots[(stem, s)]}")
    for kind, table in (("h0", chart.h0), ("h1", chart.h1)):
        for (stem, s) in sorted(table):
            m = table[(stem, s)]
            rows = " ".join(_bits(r, m.cols) for r in m.data) or "-"
            lines.append(
                f"{kind} {stem} {s} shape {m.rows} {m.cols} rows {rows}"
            )
    lines.append("end")
    return "\n".join(lines) + "\n"


def parse_structured(text: str) -> E2Chart:
    chart: Optional[E2Chart] = None
    header: Dict[str, int] = {}
    label = None
    for lineno, raw in enumerate(text.splitlines(), 1):
        line = raw.strip()
        if not line:
            continue
        parts = line.split()
        key = parts[0]
        if key == "chart":
            label = line.split(None, 1)[1]
        elif key == "window":
            header["lo"], header["hi"] = int(parts[2]), int(parts[3])
            header["smax"] = int(parts[5])
        elif key == "watermark":
            chart = E2Chart(label, header["lo"], header["hi"],
                            header["smax"], int(parts[1]))
        elif key == "dot":
            chart.dots[(int(parts[1]), int(parts[2]))] = int(parts[3])
        elif key in ("h0", "h1"):
            stem, s = int(parts[1]), int(parts[2])
            rows, cols = int(parts[4]), int(parts[5])
            data = [] if parts[7:] == ["-"] and rows == 0 else [
                _unbits(b) for b in parts[7:]
            ]
            if parts[7:] == ["-"] and rows:
                data = [0] * rows
            m = F2Matrix(rows, cols, data)
            (chart.h0 if key == "h0" else chart.h1)[(stem, s)] = m
        elif key == "end":
            return chart
        else:
            raise ChartError(f"line {lineno}: unknown record {key!r}")
    raise ChartError("missing end record")


def render_ascii(chart: E2Chart) -> str:
    width = 4
    out = []
    for s in range(chart.s_max, -1, -1):
        edge = "      "
        row = f"s={s:<2} |"
        for stem in range(chart.stem_lo, chart.stem_hi + 1):
            n = chart.dot(stem, s)
            glyph = "." if n == 0 else ("•" if n == 1 else
                                        (str(n) if n < 10 else "*"))
            row += f" {glyph} ".ljust(width)
            up = "|" if chart.h0_rank(stem, s) else " "
            diag = "/" if stem > chart.stem_lo and chart.h1_rank(stem - 1, s) \
                else " "
            edge += f"{diag}{up} ".ljust(width)
        if s < chart.s_max:
            out.append(edge)
        out.append(row)
    footer = "      " + "".join(
        f"{stem:^4}"[:width]
        for stem in range(chart.stem_lo, chart.stem_hi + 1)
    )
    out.append("     +" + "-" * (width * (chart.stem_hi - chart.stem_lo + 1)))
    out.append(footer)
    return "\n".join(out) + "\n"


def render_svg(chart: E2Chart) -> str:
    cw, ch, rad, pad = 40, 30, 4, 30
    w = pad * 2 + cw * (chart.stem_hi - chart.stem_lo + 1)
    h = pad * 2 + ch * (chart.s_max + 1)

    def xy(stem: int, s: int, i: int, n: int) -> Tuple[float, float]:
        x = pad + cw * (stem - chart.stem_lo) + cw / 2
        x += (i - (n - 1) / 2) * (2.5 * rad)
        y = h - pad - ch * s - ch / 2
        return x, y

    parts = [
        f'<svg xmlns="http://www.w3.org/2000/svg" width="{w}" height="{h}">'
    ]
    for (stem, s), m in sorted(chart.h0.items()):
        n1, n2 = chart.dot(stem, s), chart.dot(stem, s + 1)
        for j in range(m.cols):
            col = m.column(j)
            for i in range(m.rows):
                if (col >> i) & 1:
                    x1, y1 = xy(stem, s, j, n1)
                    x2, y2 = xy(stem, s + 1, i, n2)
                    parts.append(
                        f'<line x1="{x1}" y1="{y1}" x2="{x2}" y2="{y2}" '
                        f'stroke="black"/>'
                    )
    for (stem, s), m in sorted(chart.h1.items()):
        n1, n2 = chart.dot(stem, s), chart.dot(stem + 1, s + 1)
        for j in range(m.cols):
            col = m.column(j)
            for i in range(m.rows):
                if (col >> i) & 1:
                    x1, y1 = xy(stem, s, j, n1)
                    x2, y2 = xy(stem + 1, s + 1, i, n2)
                    parts.append(
                        f'<line x1="{x1}" y1="{y1}" x2="{x2}" y2="{y2}" '
                        f'stroke="gray"/>'
                    )
    for (stem, s), n in sorted(chart.dots.items()):
        for i in range(n):
            x, y = xy(stem, s, i, n)
            parts.append(f'<circle cx="{x}" cy="{y}" r="{rad}"/>')
    parts.append("</svg>")
    return "\n".join(parts) + "\n"


def render(chart: E2Chart, fmt: str) -> str:
    if fmt == "ascii":
        return render_ascii(chart)
    if fmt == "svg":
        return render_svg(chart)
    if fmt == "structured":
        return render_structured(chart)
    raise ValueError(f"unknown format {fmt!r}")


# -- differentials -----------------------------------------------------------


@dataclass
class ForcedZeroReport:
    k_max: int
    unforced: List[Tuple[int, int, int]]   # (stem, s, k) not certified zero

    @property
    def all_zero(self) -> bool:
        return not self.unforced


def forced_zero_differentials(chart: E2Chart, k_max: int) -> ForcedZeroReport:
    """Certify d_k = 0 where degree reasons allow: the target cell
    (stem-1, s+k) is empty, or the source cell is entirely h_0-divisible
    from a cell whose differential is already certified zero
    (d_k h_0 = h_0 d_k)."""
    unforced: List[Tuple[int, int, int]] = []
    for k in range(2, k_max + 1):
        forced: Dict[Cell, bool] = {}
        for s in range(chart.s_max + 1):
            for stem in range(chart.stem_lo, chart.stem_hi + 1):
                if chart.dot(stem, s) == 0:
                    forced[(stem, s)] = True
                    continue
                tgt_s = s + k
                target_empty = (
                    stem - 1 < chart.stem_lo
                    or tgt_s > chart.s_max
                    or chart.dot(stem - 1, tgt_s) == 0
                )
                ok = target_empty
                if not ok and s > 0:
                    below = chart.h0.get((stem, s - 1))
                    if (below is not None
                            and f2.rank(below) == chart.dot(stem, s)
                            and forced.get((stem, s - 1), False)):
                        ok = True
                forced[(stem, s)] = ok
                if not ok:
                    unforced.append((stem, s, k))
    return ForcedZeroReport(k_max, unforced)


# -- group extraction --------------------------------------------------------


@dataclass
class GroupDescriptor:
    """2-primary candidate for one homotopy group read off a chart column."""

    stem: int
    free_rank: int
    orders: Tuple[int, ...]
    ambiguous: Tuple[str, ...] = ()

    def __str__(self) -> str:
        parts = ["Z"] * self.free_rank + [f"Z/{o}" for o in self.orders]
        body = " + ".join(parts) if parts else "0"
        if self.ambiguous:
            body += "  [ambiguous: " + "; ".join(self.ambiguous) + "]"
        return body


def _column_strings(chart: E2Chart, stem: int) -> List[Tuple[int, int, bool]]:
    """Decompose one column into h_0-strings: (s_start, s_end, open_at_top).

    The column with its h_0 maps is a graded module over a polynomial ring
    on one generator, hence a direct sum of interval strings; the counts are
    rank arithmetic on composites.
    """
    S = chart.s_max
    dims = [chart.dot(stem, s) for s in range(S + 1)]

    comp: Dict[Tuple[int, int], int] = {}
    for s in range(S + 1):
        m = F2Matrix.identity(dims[s])
        comp[(s, s)] = dims[s]
        cur = m
        for e in range(s, S):
            h = chart.h0.get((stem, e))
            if h is None:
                h = F2Matrix.zero(dims[e + 1], dims[e])
            cur = h.mul(cur)
            comp[(s, e + 1)] = f2.rank(cur)

    def A(s: int, e: int) -> int:
        if s < 0:
            return 0
        return comp[(s, e)]

    strings: List[Tuple[int, int, bool]] = []
    for s in range(S + 1):
        for e in range(s, S + 1):
            reach = A(s, e) - A(s - 1, e)
            ends_here = reach - (A(s, e + 1) - A(s - 1, e + 1)) \
                if e < S else reach
            for _ in range(ends_here):
                strings.append((s, e, e == S))
    return strings


def groups_from_columns(
    chart: E2Chart,
    rational_rank: Callable[[int], int],
    assume_no_differentials: bool = False,
    forced: Optional[ForcedZeroReport] = None,
) -> Dict[int, GroupDescriptor]:
    """Read candidate homotopy groups off the chart columns.

    Each closed h_0-string of length L contributes Z/2^L.  Strings open at
    the top of the s-window are matched against the rational rank: the
    longest open strings become Z summands, one per unit of rank; surplus
    open strings are reported with an ambiguity flag (the window cannot
    distinguish Z from a long cyclic group).  Possible hidden extensions
    between stacked strings are flagged, never guessed.
    """
    if not assume_no_differentials:
        if forced is None:
            raise ChartError(
                "need assume_no_differentials or a forced-zero report"
            )
        if not forced.all_zero:
            raise ChartError(
                f"differentials not certified zero at cells "
                f"{forced.unforced[:5]}"
            )
    out: Dict[int, GroupDescriptor] = {}
    for stem in range(chart.stem_lo, chart.stem_hi + 1):
        strings = _column_strings(chart, stem)
        rank = rational_rank(stem)
        opens = sorted([st for st in strings if st[2]], key=lambda st: st[0])
        closed = [st for st in strings if not st[2]]
        if rank > len(opens):
            raise ChartError(
                f"stem {stem}: rational rank {rank} exceeds the "
                f"{len(opens)} open h_0-strings"
            )
        flags: List[str] = []
        free = opens[:rank]
        orders: List[int] = []
        for (s, e, _) in closed:
            orders.append(2 ** (e - s + 1))
        for (s, e, _) in opens[rank:]:
            orders.append(2 ** (e - s + 1))
            flags.append(
                f"h_0-string from s={s} reaches the window top: order is a "
                f"lower bound 2^{e - s + 1}"
            )
        ends = {e for (s, e, _) in closed}
        starts = {s for (s, e, _) in strings if s > 0}
        for e in ends:
            if e + 1 in starts:
                flags.append(
                    f"strings stack at s={e}/{e + 1}: possible hidden "
                    f"extension"
                )
        if free or orders:
            out[stem] = GroupDescriptor(stem, len(free),
                                        tuple(sorted(orders, reverse=True)),
                                        tuple(flags))
        else:
            out[stem] = GroupDescriptor(stem, 0, ())
    return out


# -- fixtures ----------------------------------------------------------------


@dataclass(frozen=True)
class FixtureEdge:
    stem_offset: int
    s: int
    rank: int


@dataclass
class ChartFixture:
    """Hand-transcribed figure content with stems symbolic in d.

    Dot multiplicities and h_0 ranks are compared exactly; h_1 ranks are
    lower bounds (the figures may draw a selection of the nonzero
    products); a ``tower`` record asserts a one-dot-per-row h_0-string from
    the given s to the top of the computed window.
    """

    name: str
    family: str
    r: int
    modulus: int
    residue: int
    spectrum: str                 # mt | ctheta | summand-part tags
    stem_offsets: Tuple[int, int]
    s_top: int                    # rows the figure shows explicitly
    source: str
    dots: Dict[Tuple[int, int], int] = field(default_factory=dict)
    h0: Dict[Tuple[int, int], int] = field(default_factory=dict)
    h1: Dict[Tuple[int, int], int] = field(default_factory=dict)
    towers: List[Tuple[int, int]] = field(default_factory=list)

    def matches(self, family: str, r: int, d: int, spectrum: str) -> bool:
        return (self.family == family and self.r == r
                and self.spectrum == spectrum
                and d % self.modulus == self.residue)

    def compare(self, chart: E2Chart, d: int) -> List[str]:
        """Mismatch descriptions (empty = pass)."""
        errs: List[str] = []
        lo, hi = (d + o for o in self.stem_offsets)
        if chart.stem_lo > lo or chart.stem_hi < hi:
            return [f"chart window misses fixture stems {lo}..{hi}"]
        expected_dots = {
            (d + o, s): n for (o, s), n in self.dots.items()
        }
        tower_cells = set()
        for o, s0 in self.towers:
            for s in range(s0, chart.s_max + 1):
                tower_cells.add((d + o, s))
        for stem in range(lo, hi + 1):
            for s in range(chart.s_max + 1):
                want = expected_dots.get((stem, s), 0)
                if (stem, s) in tower_cells:
                    want += 1
                got = chart.dot(stem, s)
                if s <= self.s_top or (stem, s) in tower_cells:
                    if got != want:
                        errs.append(
                            f"dot ({stem},{s}): figure {want}, computed {got}"
                        )
        for (o, s), rank in self.h0.items():
            got = chart.h0_rank(d + o, s)
            if got != rank:
                errs.append(
                    f"h0 ({d + o},{s}): figure rank {rank}, computed {got}"
                )
        for o, s0 in self.towers:
            for s in range(s0, chart.s_max):
                if chart.h0_rank(d + o, s) < 1:
                    errs.append(f"tower ({d + o}): h0 missing at s={s}")
        for stem in range(lo, hi + 1):
            o = stem - d
            for s in range(self.s_top):
                # h0 is compared exactly: no edge recorded and no tower
                # through this cell means the computed rank must be zero
                if (o, s) not in self.h0 and (stem, s) not in tower_cells:
                    got = chart.h0_rank(stem, s)
                    if got:
                        errs.append(
                            f"h0 ({stem},{s}): figure none, computed rank {got}"
                        )
        for (o, s), rank in self.h1.items():
            got = chart.h1_rank(d + o, s)
            if got < rank:
                errs.append(
                    f"h1 ({d + o},{s}): figure rank {rank}, computed {got} "
                    f"(lower bound violated)"
                )
        return errs


def parse_chart_fixture(text: str, name: str = "<fixture>") -> ChartFixture:
    kv: Dict[str, str] = {}
    dots: Dict[Tuple[int, int], int] = {}
    h0: Dict[Tuple[int, int], int] = {}
    h1: Dict[Tuple[int, int], int] = {}
    towers: List[Tuple[int, int]] = []
    offset_re = re.compile(r"d(?:([+-])(\d+))?\Z")

    def off(tok: str) -> int:
        m = offset_re.fullmatch(tok)
        if not m:
            raise ChartError(f"{name}: bad stem expression {tok!r}")
        if m.group(1) is None:
            return 0
        k = int(m.group(2))
        return k if m.group(1) == "+" else -k

    for raw in text.splitlines():
        line = raw.split("#", 1)[0].strip()
        if not line or line == "end":
            continue
        parts = line.split(None, 1)
        key, rest = parts[0], (parts[1] if len(parts) > 1 else "")
        if key in ("fixture", "family", "d", "spectrum", "stems", "smax",
                   "source", "r"):
            kv[key] = rest.strip().strip('"')
        elif key == "dot":
            o, s, n = rest.split()
            dots[(off(o), int(s))] = int(n)
        elif key == "h0":
            o, s, n = rest.split()
            h0[(off(o), int(s))] = int(n)
        elif key == "h1":
            o, s, n = rest.split()
            h1[(off(o), int(s))] = int(n)
        elif key == "tower":
            o, s = rest.split()
            towers.append((off(o), int(s)))
        else:
            raise ChartError(f"{name}: unknown record {key!r}")
    dcond = kv.get("d", "any")
    if dcond == "any":
        modulus, residue = 1, 0
    else:
        m = re.fullmatch(r"(\d+)mod(\d+)", dcond)
        if not m:
            raise ChartError(f"{name}: bad d condition {dcond!r}")
        residue, modulus = int(m.group(1)), int(m.group(2))
    stems = kv["stems"].split()
    if "source" not in kv:
        raise ChartError(f"{name}: fixture without source citation")
    return ChartFixture(
        name=kv.get("fixture", name),
        family=kv["family"],
        r=int(kv["r"]),
        modulus=modulus,
        residue=residue,
        spectrum=kv.get("spectrum", "mt"),
        stem_offsets=(off(stems[0]), off(stems[1])),
        s_top=int(kv.get("smax", 3)),
        source=kv["source"],
        dots=dots,
        h0=h0,
        h1=h1,
        towers=towers,
    )
