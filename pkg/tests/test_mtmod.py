"""Thom-twisted module structure, cofiber pieces, periodicity."""

from math import comb

import pytest

from mtadams import mtmod
from mtadams.mtmod import (
    WindowError,
    ctheta_module,
    mt_module,
    periodicity_check,
    quotient_map,
    rational_dimensions,
    trivial_module,
    v_module,
)


def brute_dim(lo: int, d: int, big_lo: int, t: int) -> int:
    """Monomials in w_lo..w_d of degree t with at least one factor >= big_lo."""

    def build(total, max_part, has_big):
        if total == 0:
            return 1 if has_big else 0
        count = 0
        for p in range(min(total, max_part), lo - 1, -1):
            count += build(total - p, p, has_big or p >= big_lo)
        return count

    return build(t, d, False)


def test_mt_dimensions_against_monomial_count():
    for family, d, r in (("SO", 13, 3), ("O", 12, 2)):
        lo = 1 if family == "O" else 2
        m = mt_module(family, d, r, 2 * (d - r))
        for t in m.degrees():
            assert m.dim(t) == brute_dim(lo, d, d - r + 1, t)


def test_action_table_rows():
    # Twisted action on the four lowest degrees, all residues of n = d - r.
    # Coefficients follow from the Wu formula plus the Thom twist; the two
    # composite rows agree with composing the single-square rows.
    for n in (8, 9, 10, 11):
        d, r = n + 4, 4
        m = mt_module("SO", d, r, n + 5)

        def unit(t, name):
            return 1 << m.index(t, name)

        def coeff_vec(t, pairs):
            out = 0
            for c, name in pairs:
                if c % 2:
                    out ^= unit(t, name)
            return out

        bot = unit(n + 1, f"w{n+1}")
        # row 1: Sq^1 w_{n+1} = n w_{n+2}
        assert m.apply(1, n + 1, bot) == coeff_vec(
            n + 2, [(n, f"w{n+2}")])
        # row 2: Sq^2 w_{n+1} = C(n,2) w_{n+3}
        assert m.apply(2, n + 1, bot) == coeff_vec(
            n + 3, [(comb(n, 2), f"w{n+3}")])
        # row 3: Sq^1 w_{n+2} = (n+1) w_{n+3}
        assert m.apply(1, n + 2, unit(n + 2, f"w{n+2}")) == coeff_vec(
            n + 3, [(n + 1, f"w{n+3}")])
        # row 4: Sq^1 Sq^2 w_{n+1} = n C(n,2) w_{n+4}
        assert m.apply(1, n + 3, m.apply(2, n + 1, bot)) == coeff_vec(
            n + 4, [(n * comb(n, 2), f"w{n+4}")])
        # row 5: Sq^2 Sq^1 w_{n+1} = n C(n+1,2) w_{n+4}
        assert m.apply(2, n + 2, m.apply(1, n + 1, bot)) == coeff_vec(
            n + 4, [(n * comb(n + 1, 2), f"w{n+4}")])
        # row 6: Sq^2 w_{n+2} = C(n+1,2) w_{n+4}
        assert m.apply(2, n + 2, unit(n + 2, f"w{n+2}")) == coeff_vec(
            n + 4, [(comb(n + 1, 2), f"w{n+4}")])
        # row 7: Sq^1 w_{n+3} = n w_{n+4}
        assert m.apply(1, n + 3, unit(n + 3, f"w{n+3}")) == coeff_vec(
            n + 4, [(n, f"w{n+4}")])
        # row 8: Sq^1 (w_2 w_{n+1}) = w_3 w_{n+1} + n w_2 w_{n+2}
        assert m.apply(1, n + 3, unit(n + 3, f"w2.w{n+1}")) == coeff_vec(
            n + 4, [(1, f"w3.w{n+1}"), (n, f"w2.w{n+2}")])


def test_adem_identities_on_modules():
    for family, d, r in (("SO", 13, 3), ("O", 11, 2), ("Spin", 14, 4)):
        t_max = d - r + 6
        mt_module(family, d, r, t_max).check_adem()


def test_cofiber_splitting_dimensions():
    family, d, r = "SO", 14, 3
    t_max = 2 * (d - r)
    m = mt_module(family, d, r, t_max)
    c, inc = ctheta_module(family, d, r, t_max)
    v = v_module(family, d, r, t_max)
    for t in m.degrees():
        assert m.dim(t) == c.dim(t) + v.dim(t)
    # projection and inclusion are verified module maps on construction
    v2, qmap = quotient_map(m)
    assert v2.degrees() == v.degrees()


def test_v_module_has_one_class_per_degree():
    v = v_module("SO", 14, 3, 22)
    assert v.degrees() == list(range(12, 15))
    for t in v.degrees():
        assert v.dim(t) == 1


def test_window_errors_name_bounds():
    with pytest.raises(WindowError) as err:
        mt_module("SO", 10, 3, 20)
    assert "15" in str(err.value)
    with pytest.raises(WindowError) as err:
        ctheta_module("SO", 10, 3, 16)
    assert "14" in str(err.value)
    with pytest.raises(WindowError) as err:
        rational_dimensions(10, 3, 30)
    assert "15" in str(err.value)


def test_trivial_module():
    s = trivial_module(10)
    assert s.degrees() == [0]
    assert s.dim(0) == 1


def test_periodicity_isomorphisms():
    for family, d, r, k in (("SO", 11, 4, 4), ("O", 9, 2, 2),
                            ("Spin", 14, 4, 4)):
        report = periodicity_check(family, d, r, k)
        assert report.ok, report.line()
        assert f"shift {k}" in report.line()


def test_periodicity_edge_cases():
    assert periodicity_check("SO", 11, 4, 0).ok
    # the period must be a multiple of a_r
    with pytest.raises(ValueError):
        periodicity_check("SO", 11, 3, 2)


def test_rational_dimension_tables():
    # d - r odd and d odd: no generators, so the theory is all torsion
    table = rational_dimensions(15, 4, 23)
    assert all(table.dim(q) == 0 for q in range(24))
    # d even: generators in degrees d-r+1 (d-r even) and d
    table = rational_dimensions(14, 2, 24)
    assert [deg for _, deg in table.generators] == [13, 14]
    assert table.dim(13) == 1
    assert table.dim(14) == 1
    assert table.dim(17) == 1  # p_1 times the degree-13 generator
