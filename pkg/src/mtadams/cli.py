"""Command-line interface.

Subcommands
-----------

* ``cohomology`` — print a module (basis and Sq matrices) or, with
  ``--prime 3`` / ``--rational``, the odd/rational dimension table.
* ``resolve`` — build a minimal free resolution and print its generators
  and differentials.
* ``chart`` — build an Adams E2-chart and render it (ascii, svg, or the
  lossless structured text format).
* ``verify`` — compare computed output against a fixture file: group
  tables (``*.fixtures``) or transcribed chart figures (``*.chart``).
* ``periodicity`` — check the degree-shift isomorphism
  MT(d+k, r) ~ shifted MT(d, r).
* ``sphere-selftest`` — recompute the first stable stems of the sphere
  and compare with the classical values.

All output is deterministic: the same invocation produces byte-identical
output.  Failures exit nonzero with a message naming the violated bound
or the failing comparison.
"""

from __future__ import annotations

import argparse
import sys
from pathlib import Path
from typing import List, Optional

from . import charts as ch
from . import mtmod, pipeline, tables
from .charrings import RangeError
from .mtmod import WindowError

SPHERE_TABLE = {
    0: "Z", 1: "Z/2", 2: "Z/2", 3: "Z/8",
    4: "0", 5: "0", 6: "Z/2", 7: "Z/16",
}


def _add_fdr(p: argparse.ArgumentParser, r_required: bool = True) -> None:
    p.add_argument("--family", choices=("O", "SO", "Spin"), default="SO")
    p.add_argument("--d", type=int, required=True)
    p.add_argument("--r", type=int, required=r_required)


def _default_stems(args) -> tuple:
    if args.stems:
        return tuple(args.stems)
    if args.spectrum == "sphere":
        return (args.d, args.d + 7)
    return (args.d - args.r + 1, args.d + 1)


def cmd_cohomology(args) -> int:
    if args.prime == 3 or args.rational:
        field = "Q" if args.rational else "F3"
        t_max = args.tmax if args.tmax is not None else 2 * (args.d - args.r)
        table = mtmod.rational_dimensions(args.d, args.r, t_max, field)
        print(f"dimension table MT{args.family}({args.d},{args.r}) "
              f"over {'Q' if field == 'Q' else 'F_3'}")
        for name, deg in table.generators:
            print(f"generator {name} degree {deg}")
        for q in range(t_max + 1):
            print(f"dim {q} {table.dim(q)}")
        return 0
    t_max = args.tmax
    if t_max is None:
        t_max = pipeline.window_cap(args.family, args.d, args.r, args.spectrum)
    module = pipeline.build_module(args.family, args.d, args.r, args.spectrum,
                                   t_max)
    sys.stdout.write(module.dump())
    return 0


def cmd_resolve(args) -> int:
    if args.sphere:
        family, d, r, spectrum = "SO", 0, 0, "sphere"
    else:
        if args.d is None or args.r is None:
            raise SystemExit("resolve: need --sphere or --d/--r")
        family, d, r, spectrum = args.family, args.d, args.r, args.spectrum
    t_max = args.tmax
    if t_max is None:
        t_max = pipeline.window_cap(family, d, r, spectrum)
    res = pipeline.build_resolution(family, d, r, spectrum, args.smax, t_max)
    sys.stdout.write(res.dump())
    return 0


def cmd_chart(args) -> int:
    lo, hi = _default_stems(args)
    chart = pipeline.build_chart(args.family, args.d, args.r, args.spectrum,
                                 lo, hi, args.smax)
    sys.stdout.write(ch.render(chart, args.format))
    if args.groups:
        for stem in range(lo, hi + 1):
            gd = pipeline.groups(args.family, args.d, args.r, args.spectrum,
                                 lo, hi, args.smax)[stem]
            print(f"stem {stem}: {gd}")
    return 0


def _resolve_fixture_path(token: str) -> Path:
    p = Path(token)
    if p.exists():
        return p
    base = tables.default_fixture_dir()
    for candidate in (base / token, base.parent / "charts" / token):
        if candidate.exists():
            return candidate
    raise SystemExit(f"verify: fixture {token!r} not found "
                     f"(searched {base} and its sibling charts dir)")


def _verify_groups(path: Path, family: str, r: Optional[int],
                   d: int) -> int:
    claims = tables.parse_fixture_file(path.read_text(), path.name)
    fixtures = tables.FixtureSet(claims)
    chosen = [c for c in claims
              if c.family == family
              and (r is None or c.r == r)
              and d % c.modulus == c.residue]
    if not chosen:
        print(f"FAIL: no claims in {path.name} match family={family} "
              f"r={r} d={d}")
        return 1
    failures = 0
    spans = {}
    for claim in chosen:
        key = (claim.r, claim.spectrum)
        stem = d + claim.stem_offset
        lo, hi = spans.get(key, (stem, stem))
        spans[key] = (min(lo, stem), max(hi, stem))
    computed = {}
    for (cr_, spectrum), (lo, hi) in spans.items():
        try:
            computed[(cr_, spectrum)] = pipeline.groups(
                family, d, cr_, spectrum, lo, hi)
        except (WindowError, RangeError, ch.ChartError) as exc:
            computed[(cr_, spectrum)] = exc
    for claim in sorted(chosen, key=lambda c: (c.r, c.spectrum,
                                               c.stem_offset)):
        stem = d + claim.stem_offset
        got = computed[(claim.r, claim.spectrum)]
        if isinstance(got, Exception):
            print(f"FAIL {claim.family} {claim.spectrum} r={claim.r} d={d} "
                  f"stem={stem}: {got}")
            failures += 1
            continue
        report = tables.verify_2primary(fixtures, claim.family, claim.r, d,
                                        stem, got[stem], claim.spectrum)
        print(report.line())
        if not report.ok:
            failures += 1
    return 1 if failures else 0


def _verify_chart(path: Path, family: str, r: Optional[int], d: int) -> int:
    fixture = ch.parse_chart_fixture(path.read_text(), path.name)
    if r is not None and fixture.r != r:
        print(f"FAIL: fixture {fixture.name} has r={fixture.r}, not {r}")
        return 1
    if not fixture.matches(family, fixture.r, d, fixture.spectrum):
        print(f"FAIL: fixture {fixture.name} does not apply to "
              f"family={family} d={d} (needs d = {fixture.residue} "
              f"mod {fixture.modulus})")
        return 1
    lo = d + fixture.stem_offsets[0]
    hi = d + fixture.stem_offsets[1]
    cap = pipeline.window_cap(family, d, fixture.r, fixture.spectrum)
    s_max = min(pipeline.DEFAULT_S_MAX, cap - hi)
    if s_max <= fixture.s_top:
        raise pipeline.WindowError(
            f"{fixture.spectrum} chart for ({family},{d},{fixture.r}): "
            f"figure rows reach s={fixture.s_top}, but degrees are valid "
            f"only through {cap}"
        )
    chart = pipeline.build_chart(family, d, fixture.r, fixture.spectrum,
                                 lo, hi, s_max)
    errs = fixture.compare(chart, d)
    if errs:
        for e in errs:
            print(f"FAIL {fixture.name} d={d}: {e}")
        return 1
    print(f"pass {fixture.name} d={d}: figure matches computed chart "
          f"(source: {fixture.source})")
    return 0


def cmd_verify(args) -> int:
    path = _resolve_fixture_path(args.fixture)
    if path.suffix == ".chart":
        return _verify_chart(path, args.family, args.r, args.d)
    return _verify_groups(path, args.family, args.r, args.d)


def cmd_periodicity(args) -> int:
    report = mtmod.periodicity_check(args.family, args.d, args.r, args.k)
    print(report.line())
    return 0 if report.ok else 1


def cmd_sphere_selftest(args) -> int:
    groups = pipeline.groups("SO", 0, 0, "sphere", 0, 7, s_max=9)
    failures = 0
    for stem in range(8):
        want = SPHERE_TABLE[stem]
        got = str(groups[stem])
        ok = got == want
        print(f"{'pass' if ok else 'FAIL'} stem {stem}: expected {want}, "
              f"computed {got}")
        if not ok:
            failures += 1
    return 1 if failures else 0


def build_parser() -> argparse.ArgumentParser:
    ap = argparse.ArgumentParser(
        prog="mtadams",
        description="Adams charts and homotopy groups of the spectra MT(d,r)",
    )
    sub = ap.add_subparsers(dest="command", required=True)

    p = sub.add_parser("cohomology", help="print a cohomology module")
    _add_fdr(p)
    p.add_argument("--spectrum", choices=pipeline.SPECTRA, default="mt")
    p.add_argument("--tmax", type=int)
    p.add_argument("--prime", type=int, choices=(2, 3), default=2)
    p.add_argument("--rational", action="store_true")
    p.set_defaults(func=cmd_cohomology)

    p = sub.add_parser("resolve", help="build a minimal free resolution")
    p.add_argument("--sphere", action="store_true")
    p.add_argument("--family", choices=("O", "SO", "Spin"), default="SO")
    p.add_argument("--d", type=int)
    p.add_argument("--r", type=int)
    p.add_argument("--spectrum", choices=pipeline.SPECTRA, default="mt")
    p.add_argument("--smax", type=int, default=pipeline.DEFAULT_S_MAX)
    p.add_argument("--tmax", type=int)
    p.set_defaults(func=cmd_resolve)

    p = sub.add_parser("chart", help="render an Adams E2-chart")
    _add_fdr(p)
    p.add_argument("--spectrum", choices=pipeline.SPECTRA, default="mt")
    p.add_argument("--stems", type=int, nargs=2, metavar=("LO", "HI"))
    p.add_argument("--smax", type=int, default=pipeline.DEFAULT_S_MAX)
    p.add_argument("--format", choices=("ascii", "svg", "structured"),
                   default="ascii")
    p.add_argument("--groups", action="store_true",
                   help="also print the candidate homotopy groups")
    p.set_defaults(func=cmd_chart)

    p = sub.add_parser("verify", help="check computed output against fixtures")
    p.add_argument("--fixture", required=True,
                   help="fixture file name (searched in the fixture dirs) "
                        "or path")
    _add_fdr(p, r_required=False)
    p.set_defaults(func=cmd_verify)

    p = sub.add_parser("periodicity", help="check the degree-shift "
                                           "isomorphism")
    _add_fdr(p)
    p.add_argument("--k", type=int, required=True)
    p.set_defaults(func=cmd_periodicity)

    p = sub.add_parser("sphere-selftest",
                       help="recompute the first stable stems")
    p.set_defaults(func=cmd_sphere_selftest)
    return ap


def main(argv: Optional[List[str]] = None) -> int:
    args = build_parser().parse_args(argv)
    try:
        return args.func(args)
    except (WindowError, RangeError, ch.ChartError, tables.FixtureError,
            ValueError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())
