"""End-to-end pipeline: windows, rational ranks, group extraction."""

import pytest

from mtadams import pipeline
from mtadams.mtmod import WindowError


def test_window_caps():
    assert pipeline.window_cap("SO", 14, 3, "mt") == 23
    assert pipeline.window_cap("SO", 14, 3, "ctheta") == 22
    assert pipeline.window_cap("SO", 14, 3, "v") == 22
    # spin additionally caps below the first exotic relation degree
    assert pipeline.window_cap("Spin", 14, 4, "mt") <= 2 * 10 + 1
    assert pipeline.window_cap("SO", 0, 0, "sphere") >= 10 ** 6


def test_chart_window_errors_name_the_bound():
    with pytest.raises(WindowError) as err:
        pipeline.build_chart("SO", 13, 3, "mt", 11, 16, 8)
    assert "21" in str(err.value)


def test_rational_rank_values():
    # d even, r = 2: generators in degrees d-1 and d
    assert pipeline.rational_rank("SO", 14, 2, "mt", 13) == 1
    assert pipeline.rational_rank("SO", 14, 2, "mt", 14) == 1
    assert pipeline.rational_rank("SO", 14, 2, "mt", 15) == 0
    # all-torsion case: d odd, d - r odd
    assert pipeline.rational_rank("SO", 15, 4, "mt", 15) == 0
    # sphere summand carries the fundamental class only
    assert pipeline.rational_rank("SO", 13, 1, "sphere", 13) == 1
    assert pipeline.rational_rank("SO", 13, 1, "sphere", 14) == 0


def test_rational_rank_rejects_unoriented():
    with pytest.raises(ValueError):
        pipeline.rational_rank("O", 14, 2, "mt", 14)


def test_cofiber_rational_rank_excludes_unit():
    # the degree-d generator contributes to stems above d only
    d, r = 21, 5
    assert pipeline.rational_rank("Spin", d, r, "ctheta", d - r + 1) == 0
    assert pipeline.rational_rank("Spin", d, r, "ctheta", d) == 1


def test_groups_s_window_clamps():
    # stems near the degree cap still extract with a shallower s-window
    out = pipeline.groups("Spin", 20, 5, "ctheta", 19, 23)
    assert str(out[20]) == "Z/2"
    with pytest.raises(WindowError):
        pipeline.groups("SO", 10, 3, "mt", 14, 15)


def test_sphere_groups_match_classical_table():
    out = pipeline.groups("SO", 0, 0, "sphere", 0, 7, s_max=9)
    want = ["Z", "Z/2", "Z/2", "Z/8", "0", "0", "Z/2", "Z/16"]
    assert [str(out[stem]) for stem in range(8)] == want
