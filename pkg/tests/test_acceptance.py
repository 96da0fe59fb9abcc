"""Acceptance gate: one test per criterion, one pass/fail line each.

Criteria cover the sphere oracle, the worked resolution example, every
packaged chart and group fixture, the action-table rows, spin relations,
periodicity, rational ranks, the mod-3 spot check, and the property suites.
"""

import random
import time
from math import comb

from mtadams import charrings, charts, cli, f2, mtmod, pipeline, resolution
from mtadams import tables
from mtadams.tables import default_fixture_dir

CHART_INSTANCES = [
    ("so_r1_summand.chart", "SO", [13, 14]),
    ("so_ctheta.chart", "SO", [15, 16]),
    ("so_r2_even.chart", "SO", [14, 16]),
    ("so_r2_odd.chart", "SO", [13, 15]),
    ("so_r3_0mod4.chart", "SO", [16]),
    ("so_r3_1mod4.chart", "SO", [13]),
    ("so_r3_2mod4.chart", "SO", [14]),
    ("so_r3_3mod4.chart", "SO", [15]),
    ("so_r4_0mod4.chart", "SO", [16]),
    ("so_r4_1mod4.chart", "SO", [13]),
    ("so_r4_2mod4.chart", "SO", [14]),
    ("so_r4_3mod4.chart", "SO", [15]),
    ("so_r5_0mod4.chart", "SO", [16]),
    ("so_r5_2mod4.chart", "SO", [18]),
    ("unor_r1_summand.chart", "O", [14]),
    ("unor_r2_even.chart", "O", [14]),
    ("unor_r2_odd.chart", "O", [13]),
    ("unor_r3_even.chart", "O", [14]),
    ("unor_r3_odd.chart", "O", [13]),
    ("unor_r4_even.chart", "O", [14]),
    ("unor_r4_odd.chart", "O", [13]),
    ("spin_r1_summand.chart", "Spin", [14]),
]

GROUP_INSTANCES = [
    ("homotopyr1.fixtures", "SO", [13, 14]),
    ("mtd2.fixtures", "SO", [13, 14]),
    ("mtd3.fixtures", "SO", [13, 14, 15, 16]),
    ("mtd4.fixtures", "SO", [13, 14, 15, 16]),
    ("cofiber.fixtures", "SO", [14, 15]),
    ("spin_r1.fixtures", "Spin", [14]),
    ("spin_ctheta.fixtures", "Spin", [20, 21]),
    ("spin_r56.fixtures", "Spin", [20, 21, 22, 23, 24]),
]


def groups_dir():
    return default_fixture_dir()


def charts_dir():
    return default_fixture_dir().parent / "charts"


def test_criterion_01_sphere_oracle():
    t0 = time.monotonic()
    out = pipeline.groups("SO", 0, 0, "sphere", 0, 7, s_max=9)
    want = ["Z", "Z/2", "Z/2", "Z/8", "0", "0", "Z/2", "Z/16"]
    assert [str(out[stem]) for stem in range(8)] == want
    assert time.monotonic() - t0 < 10


def test_criterion_02_worked_resolution():
    t0 = time.monotonic()
    res = resolution.minimal_resolve(mtmod.mt_module("SO", 15, 4, 17), 3, 17)
    assert [t for t in res.stages[0].degrees() if t <= 16] == [12, 14, 15, 16]
    assert [t for t in res.stages[1].degrees() if t <= 16] == [15]
    assert res.stages[2].degrees() == [17]
    assert res.diff_terms(1, 0) == [((2, 1), "x1")]
    assert res.diff_terms(2, 0) == [((2,), "a1")]
    assert time.monotonic() - t0 < 30


def test_criterion_03_chart_fixtures(capsys):
    for name, family, ds in CHART_INSTANCES:
        path = charts_dir() / name
        assert path.exists(), name
        for d in ds:
            t0 = time.monotonic()
            assert cli._verify_chart(path, family, None, d) == 0, \
                f"{name} at d={d}: {capsys.readouterr().out}"
            assert time.monotonic() - t0 < 120, f"{name} at d={d} too slow"


def test_criterion_04_group_tables(capsys):
    for name, family, ds in GROUP_INSTANCES:
        path = groups_dir() / name
        assert path.exists(), name
        for d in ds:
            assert cli._verify_groups(path, family, None, d) == 0, \
                f"{name} at d={d}: {capsys.readouterr().out}"


def test_criterion_05_action_table_rows():
    # all eight low-degree rows, all four residues of n = d - r
    for n in (8, 9, 10, 11):
        d, r = n + 4, 4
        m = mtmod.mt_module("SO", d, r, n + 5)

        def unit(t, name):
            return 1 << m.index(t, name)

        def vec(t, pairs):
            out = 0
            for c, name in pairs:
                if c % 2:
                    out ^= unit(t, name)
            return out

        bot = unit(n + 1, f"w{n+1}")
        rows = [
            (m.apply(1, n + 1, bot), n + 2, [(n, f"w{n+2}")]),
            (m.apply(2, n + 1, bot), n + 3, [(comb(n, 2), f"w{n+3}")]),
            (m.apply(1, n + 2, unit(n + 2, f"w{n+2}")), n + 3,
             [(n + 1, f"w{n+3}")]),
            (m.apply(1, n + 3, m.apply(2, n + 1, bot)), n + 4,
             [(n * comb(n, 2), f"w{n+4}")]),
            (m.apply(2, n + 2, m.apply(1, n + 1, bot)), n + 4,
             [(n * comb(n + 1, 2), f"w{n+4}")]),
            (m.apply(2, n + 2, unit(n + 2, f"w{n+2}")), n + 4,
             [(comb(n + 1, 2), f"w{n+4}")]),
            (m.apply(1, n + 3, unit(n + 3, f"w{n+3}")), n + 4,
             [(n, f"w{n+4}")]),
            (m.apply(1, n + 3, unit(n + 3, f"w2.w{n+1}")), n + 4,
             [(1, f"w3.w{n+1}"), (n, f"w2.w{n+2}")]),
        ]
        for got, t, pairs in rows:
            assert got == vec(t, pairs), f"n={n}, degree {t}"


def test_criterion_06_spin_relations():
    ring = charrings.build_ring("Spin", 20, 17)
    for i in (2, 3, 5, 9):
        assert ring.reduce(frozenset({charrings.w(i)})) == charrings.ZERO
    rel = frozenset({
        charrings.w(17),
        charrings.mono_mul(charrings.w(4), charrings.w(13)),
        charrings.mono_mul(charrings.w(6), charrings.w(11)),
        charrings.mono_mul(charrings.w(7), charrings.w(10)),
    })
    assert ring.reduce(rel) == charrings.ZERO


def test_criterion_07_periodicity():
    for family, d, r, k in (("SO", 11, 4, 4), ("O", 9, 2, 2),
                            ("Spin", 14, 4, 4)):
        report = mtmod.periodicity_check(family, d, r, k)
        assert report.ok, report.line()


def test_criterion_08_rational_ranks():
    checked = 0
    for name, family, ds in GROUP_INSTANCES:
        claims = tables.parse_fixture_file((groups_dir() / name).read_text(),
                                           name)
        for d in ds:
            for claim in claims:
                if claim.family != family or d % claim.modulus != claim.residue:
                    continue
                stem = d + claim.stem_offset
                got = pipeline.rational_rank(family, d, claim.r,
                                             claim.spectrum, stem)
                assert got == claim.group.canonical()[0], \
                    f"{name} {family} r={claim.r} d={d} stem={stem}"
                checked += 1
    assert checked > 60


def test_criterion_09_mod3_spot_check():
    ring = charrings.PontryaginRing("F3", 10, 16)
    action = charrings.p1_power_action(ring, 2)
    assert action  # 2 p_1^2 - 4 p_2 is nonzero mod 3
    p1sq = charrings.mono_mul(((1, 1),), ((1, 1),))
    assert action == {p1sq: 2, ((2, 1),): 2}


def test_criterion_10_property_suites():
    # Adem identities on modules of each family
    for family, d, r in (("SO", 13, 3), ("O", 11, 2), ("Spin", 14, 4)):
        mtmod.mt_module(family, d, r, d - r + 6).check_adem()
    # exactness and minimality of fresh resolutions
    for module in (mtmod.trivial_module(10),
                   mtmod.mt_module("SO", 14, 2, 16)):
        res = resolution.minimal_resolve(module, 3, module.t_max)
        res.verify_exact()
        res.verify_minimal()
    # rank-nullity on 1000 random GF(2) matrices
    rng = random.Random(20260823)
    for _ in range(1000):
        rows, cols = rng.randrange(0, 9), rng.randrange(1, 13)
        m = f2.F2Matrix(rows, cols, [rng.getrandbits(cols)
                                     for _ in range(rows)])
        assert f2.rank(m) + len(f2.kernel_basis(m)) == cols
    # exhaustive kernel oracle up to 2^12 vectors
    for _ in range(10):
        rows, cols = rng.randrange(1, 7), rng.randrange(1, 13)
        m = f2.F2Matrix(rows, cols, [rng.getrandbits(cols)
                                     for _ in range(rows)])
        span = {0}
        for b in f2.kernel_basis(m):
            span |= {v ^ b for v in span}
        assert span == {v for v in range(1 << cols) if m.apply(v) == 0}
    # structured chart round-trip
    chart = pipeline.build_chart("SO", 14, 2, "mt", 13, 16, 5)
    assert charts.parse_structured(charts.render_structured(chart)) == chart
