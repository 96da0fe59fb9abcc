"""Minimal free resolutions and Ext tables."""

import pytest

from mtadams import mtmod, resolution
from mtadams.resolution import ext_table, lift_map, minimal_resolve
from mtadams.mtmod import ctheta_module, mt_module, trivial_module


def test_sphere_resolution_generators():
    res = minimal_resolve(trivial_module(10), 4, 10)
    # first-syzygy generators are the squares Sq^(2^i)
    assert res.stages[1].degrees() == [1, 2, 4, 8]
    ext = ext_table(res)
    # the zero stem is an infinite tower
    for s in range(5):
        assert ext.dim(s, s) == 1
    # one-dot stems from the first Hopf classes
    assert ext.dim(1, 2) == 1   # stem 1
    assert ext.dim(2, 4) == 1   # stem 2
    assert ext.dim(1, 4) == 1   # stem 3 ...
    assert ext.dim(2, 5) == 1
    assert ext.dim(3, 6) == 1   # ... a string of length three
    assert ext.dim(1, 3) == 0
    assert ext.dim(2, 3) == 0


def test_sphere_resolution_verifies():
    res = minimal_resolve(trivial_module(10), 4, 10)
    res.verify_exact()
    res.verify_minimal()


def test_low_stage_generator_degrees():
    # resolution of the degree-(d-3) ideal module for odd d: generator
    # degrees through t = 17 at d = 15, frozen from the construction
    res = minimal_resolve(mt_module("SO", 15, 4, 17), 3, 17)
    stage0 = [t for t in res.stages[0].degrees() if t <= 16]
    assert stage0 == [12, 14, 15, 16]
    assert [t for t in res.stages[1].degrees() if t <= 16] == [15]
    assert res.stages[2].degrees() == [17]
    # differentials of the named syzygies
    assert res.diff_terms(1, 0) == [((2, 1), "x1")]
    assert res.diff_terms(2, 0) == [((2,), "a1")]
    res.verify_exact()
    res.verify_minimal()


def test_resolution_dump_mentions_generators():
    res = minimal_resolve(mt_module("SO", 15, 4, 17), 3, 17)
    text = res.dump()
    assert "gen x1 12" in text
    assert "diff a1 = Sq2,1.x1" in text
    assert "diff b1 = Sq2.a1" in text


def test_resolution_respects_s_max_and_t_max():
    from mtadams import charts

    res = minimal_resolve(trivial_module(8), 3, 8)
    assert len(res.stages) == 4
    assert res.complete_through == 8
    ext = ext_table(res)
    # chart windows beyond the resolved range are refused
    with pytest.raises(charts.ChartError):
        charts.build_chart(ext, 0, 0, 5)
    with pytest.raises(charts.ChartError):
        charts.build_chart(ext, 0, 7, 3)


def test_lift_of_cofiber_inclusion():
    family, d, r = "SO", 13, 3
    t_max = 2 * (d - r)
    c, inc = ctheta_module(family, d, r, t_max)
    mt = inc.target
    res_c = minimal_resolve(c, 3, t_max)
    res_mt = minimal_resolve(mt, 3, t_max)
    chain = lift_map(inc, res_c, res_mt)
    # the chain map commutes with the augmentations degreewise: spot-check
    # the induced Ext matrix shapes
    for s in range(3):
        for t in range(d - r + 1, t_max + 1 - s):
            mat = chain.ext_matrix(s, t)
            assert mat.rows == res_c.dim(s, t)
            assert mat.cols == res_mt.dim(s, t)
