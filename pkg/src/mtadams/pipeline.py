"""High-level cached builders tying modules, resolutions, and charts
together, plus the rational-rank inputs for group extraction.

``spectrum`` selects which cohomology module of the (d, r) pair is meant:

* ``mt`` — H*(MT(d,r)) itself;
* ``ctheta`` — the decomposable submodule (cofiber piece).  For r = 1 the
  spectrum splits off a sphere and ``ctheta`` is exactly the remaining
  B(d)-indexed wedge summand drawn separately in the published charts;
* ``v`` — the quotient (suspended Stiefel-variety cohomology);
* ``sphere`` — the trivial module (stable stems; stems are taken relative
  to d, matching the d-sphere summand of MT(d,1)).
"""

from __future__ import annotations

from functools import lru_cache
from typing import Dict

from . import charts as ch
from . import mtmod, resolution
from .charrings import PontryaginRing
from .mtmod import TruncatedModule, WindowError
from .resolution import ExtTable, MinimalResolution

SPECTRA = ("mt", "ctheta", "v", "sphere")

DEFAULT_S_MAX = 8


def window_cap(family: str, d: int, r: int, spectrum: str) -> int:
    """Largest internal degree the structure theory validates."""
    if spectrum == "sphere":
        return 10 ** 6
    cap = 2 * (d - r) + 1 if spectrum == "mt" else 2 * (d - r)
    if family == "Spin":
        from .tables import a_r

        cap = min(cap, a_r(d - r) - 1)
    return cap


@lru_cache(maxsize=None)
def build_module(family: str, d: int, r: int, spectrum: str,
                 t_max: int) -> TruncatedModule:
    if spectrum == "sphere":
        return mtmod.trivial_module(t_max)
    if spectrum == "mt":
        return mtmod.mt_module(family, d, r, t_max)
    if spectrum == "ctheta":
        return mtmod.ctheta_module(family, d, r, t_max)[0]
    if spectrum == "v":
        return mtmod.v_module(family, d, r, t_max)
    raise ValueError(f"unknown spectrum {spectrum!r}")


@lru_cache(maxsize=None)
def build_resolution(family: str, d: int, r: int, spectrum: str,
                     s_max: int, t_max: int) -> MinimalResolution:
    module = build_module(family, d, r, spectrum, t_max)
    return resolution.minimal_resolve(module, s_max, t_max)


@lru_cache(maxsize=None)
def build_ext(family: str, d: int, r: int, spectrum: str, s_max: int,
              t_max: int) -> ExtTable:
    return resolution.ext_table(
        build_resolution(family, d, r, spectrum, s_max, t_max)
    )


def build_chart(family: str, d: int, r: int, spectrum: str,
                stem_lo: int, stem_hi: int,
                s_max: int = DEFAULT_S_MAX) -> ch.E2Chart:
    if spectrum == "sphere":
        stem_lo, stem_hi = stem_lo - d, stem_hi - d
    t_max = stem_hi + s_max
    cap = window_cap(family, d, r, spectrum)
    if t_max > cap:
        raise WindowError(
            f"{spectrum} chart for ({family},{d},{r}): needs degrees through "
            f"{t_max}, structure valid only through {cap}"
        )
    ext = build_ext(family, d, r, spectrum, s_max, t_max)
    return ch.build_chart(ext, stem_lo, stem_hi, s_max)


# -- rational ranks ----------------------------------------------------------


def rational_rank(family: str, d: int, r: int, spectrum: str,
                  stem: int) -> int:
    """Free rank of the homotopy group in the given stem (the rational
    cohomology dimension of the spectrum there).

    Only the oriented families carry the free-module description; the
    unoriented charts in range happen to obey the same parity rule, but
    group extraction is never run for them here.
    """
    if spectrum == "sphere":
        return 1 if stem == d else 0
    if family == "O":
        raise ValueError(
            "rational ranks are only available for the oriented families"
        )
    table = mtmod.rational_dimensions(d, r, min(stem, 2 * (d - r) + 1),
                                      "Q") if stem <= 2 * (d - r) + 1 else None
    if table is None:
        raise WindowError(f"stem {stem} beyond rational-table window")
    if spectrum == "mt":
        return table.dim(stem)
    if spectrum == "v":
        return table.dim(stem) - rational_rank(family, d, r, "ctheta", stem)
    if spectrum == "ctheta":
        # decomposable part: generator multiples by positive-degree classes
        ring = PontryaginRing("Q", d, stem)
        total = 0
        for _, deg in table.generators:
            if stem > deg:
                total += ring.dim(stem - deg)
            # the unit multiple (stem == deg) lies outside C_theta
        return total
    raise ValueError(f"unknown spectrum {spectrum!r}")


def groups(family: str, d: int, r: int, spectrum: str, stem_lo: int,
           stem_hi: int, s_max: int = DEFAULT_S_MAX,
           assume_no_differentials: bool = True
           ) -> Dict[int, ch.GroupDescriptor]:
    # use the deepest s-window the structure theory validates
    cap = window_cap(family, d, r, spectrum)
    top = stem_hi - d if spectrum == "sphere" else stem_hi
    s_max = min(s_max, cap - top)
    if s_max < 2:
        raise WindowError(
            f"groups for ({family},{d},{r},{spectrum}): stems through "
            f"{stem_hi} leave no usable s-window below degree cap {cap}"
        )
    chart = build_chart(family, d, r, spectrum, stem_lo, stem_hi, s_max)
    forced = None
    if not assume_no_differentials:
        forced = ch.forced_zero_differentials(chart, s_max)

    def rank(stem: int) -> int:
        real_stem = stem + d if spectrum == "sphere" else stem
        return rational_rank(family, d, r, spectrum, real_stem)

    out = ch.groups_from_columns(chart, rank, assume_no_differentials,
                                 forced)
    if spectrum == "sphere":
        out = {stem + d: gd for stem, gd in out.items()}
    return out
