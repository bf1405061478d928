import math

import mpmath as mp
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

import mp_oracle
from kthpowers.constants import (CATALOG, DEFAULTS, LOG_HR, BellottiTable, BellottiRow,
                                 DensityShape, bellotti_lookup, build_catalog, density_eval,
                                 ford_J, ford_Z, load_constants, zero_count_upper,
                                 zero_count_window, zero_free_width, zhat, zhat_envelope,
                                 zhat_upper)
from kthpowers.errors import DomainError, TableRangeError

LOG_FORD = math.log(5.45e8)


def test_shipped_profile():
    p = CATALOG.profile
    assert (p.z1, p.z2, p.z3) == (4.862, 19.62, 51.34)
    assert p.riemann_height == 3_000_175_332_800
    assert p.ford_validity_log_t == pytest.approx(math.log(5.45e8))
    zc = CATALOG.zero_count
    assert (zc.a1, zc.a2, zc.a3) == (0.10076, 0.24460, 8.08344)


def test_profile_rejects_bad_order():
    with pytest.raises(DomainError):
        build_catalog({"z1": "30"})
    with pytest.raises(KeyError):
        build_catalog({"nope": "1"})


def test_load_constants_file(tmp_path):
    f = tmp_path / "c.txt"
    f.write_text("# improved constant\nz2 = 19.0  # hypothetical\n\n")
    cat = load_constants(f)
    assert cat.profile.z2 == 19.0
    assert cat.raw["z1"] == DEFAULTS["z1"]
    bad = tmp_path / "bad.txt"
    bad.write_text("z2 19\n")
    with pytest.raises(ValueError):
        load_constants(bad)


@pytest.mark.parametrize("log_t", [80, 27.631, math.e, 29, 1e6])
def test_ford_J_matches_oracle(log_t):
    assert ford_J(log_t) == pytest.approx(float(mp_oracle.J(log_t)), rel=1e-13)


def test_ford_J_examples():
    assert ford_J(80) == pytest.approx(18.8139, abs=1e-4)
    assert ford_J(80) == pytest.approx(80 / 6 + math.log(80) + math.log(3))
    assert ford_J(27.631) == pytest.approx(8.7599, abs=1e-4)
    assert ford_J(27.631) == pytest.approx(27.631 / 4 + 1.8521)
    assert ford_J(math.e) == pytest.approx(2.5317, abs=5e-5)
    with pytest.raises(DomainError):
        ford_J(1.0)


def test_ford_Z_examples():
    assert ford_Z(80) == pytest.approx(5.186, abs=5e-4)
    assert ford_Z(29) == pytest.approx(7.451, abs=5e-4)
    assert ford_Z(80) < ford_Z(29)
    for lt in (29, 80, 1e3, 1e6):
        assert ford_Z(lt) == pytest.approx(float(mp_oracle.fordZ(lt)), rel=1e-12)


def test_zhat_examples():
    assert zhat(80) == 19.62
    assert zhat(29) == pytest.approx(4.862 * math.log(29), rel=1e-12)
    assert zhat(29) == pytest.approx(16.37, abs=5e-3)
    assert zhat(1e6) == pytest.approx(17.02, abs=5e-3)
    with pytest.raises(DomainError):
        zhat(LOG_FORD - 0.01)


@settings(max_examples=300, deadline=None)
@given(st.floats(min_value=LOG_FORD, max_value=1e12))
def test_zhat_matches_oracle(log_t):
    assert zhat(log_t) == pytest.approx(float(mp_oracle.zhat(log_t)), rel=1e-12)


def test_zhat_is_not_monotone_below_the_z2_knee():
    # the rising Z1 log log t branch makes zhat increase up to log t ~ 56.6
    assert zhat(29) < zhat(80)


def test_zero_free_width_non_increasing_on_grid():
    grid = [LOG_FORD + (1e6 - LOG_FORD) * (i / 9999) ** 3 for i in range(10_000)]
    widths = [zero_free_width(t) for t in grid]
    assert all(b <= a * (1 + 1e-12) for a, b in zip(widths, widths[1:]))


@settings(max_examples=200, deadline=None)
@given(st.floats(min_value=LOG_FORD, max_value=1e9), st.floats(min_value=0, max_value=1e3))
def test_envelope_bounds_later_heights(log_t, delta):
    env = zhat_envelope(log_t)
    for s in (log_t + delta, log_t * (1 + delta), log_t + delta ** 3):
        assert zhat(s) <= env * (1 + 1e-12)


@settings(max_examples=200, deadline=None)
@given(st.floats(min_value=LOG_FORD, max_value=1e6), st.floats(min_value=0, max_value=1e4))
def test_zhat_upper_bounds_window(lo, width):
    hi = lo + width
    up = zhat_upper(lo, hi)
    for i in range(21):
        assert zhat(lo + width * i / 20) <= up * (1 + 1e-12)


def test_zero_count_upper_examples():
    assert zero_count_upper(0) == 0
    assert zero_count_upper(10) == pytest.approx(math.exp(10) * 10 / (2 * math.pi), rel=1e-15)
    assert zero_count_upper(10) == pytest.approx(35056.21, abs=0.005)
    assert zero_count_upper(LOG_HR) == pytest.approx(1.372e13, rel=1e-3)
    with pytest.raises(DomainError):
        zero_count_upper(-1)


def test_zero_count_window_examples():
    lo, hi = zero_count_window(LOG_HR)
    assert (hi - lo) / 2 == pytest.approx(11.80, abs=5e-3)
    lo, hi = zero_count_window(30)
    assert (hi - lo) / 2 == pytest.approx(11.94, abs=5e-3)
    assert lo < hi
    with pytest.raises(DomainError):
        zero_count_window(LOG_HR - 1)


def test_zero_count_window_consistent_with_upper():
    for i in range(400):
        lt = LOG_HR + i * 0.5
        lo, _ = zero_count_window(lt)
        assert lo <= zero_count_upper(lt) * (1 + 1e-12)


def test_bellotti_lookup_examples():
    s = bellotti_lookup(95)
    assert (s.b1, s.f_power) == (425721.47, 4.831)
    s = bellotti_lookup(80)
    assert (s.b1, s.f_power) == (370655.73, 5.216)
    assert bellotti_lookup(90).b1 == 425721.47  # shared boundary goes to the later row
    assert bellotti_lookup(6.7e12).f_power == 1.448
    with pytest.raises(TableRangeError):
        bellotti_lookup(79.9)
    with pytest.raises(TableRangeError):
        bellotti_lookup(6.7e12 * 1.0001)


def test_bellotti_table_invariants():
    rows = CATALOG.bellotti.rows
    assert len(rows) == 17
    assert all(r.alpha0 == 0.985 for r in rows)
    assert all(a.c < b.c and a.b > b.b for a, b in zip(rows, rows[1:]))
    with pytest.raises(DomainError):
        BellottiTable((BellottiRow(80, 90, 0.985, 1, 1), BellottiRow(91, 100, 0.985, 1, 1)))


@settings(max_examples=500, deadline=None)
@given(st.floats(min_value=80, max_value=6.7e12))
def test_bellotti_lookup_total(log_t):
    table = CATALOG.bellotti
    i = table.index(log_t)
    row = table.rows[i]
    assert row.log_t0 <= log_t <= row.log_t1
    if log_t < row.log_t1:
        assert sum(r.log_t0 <= log_t < r.log_t1 for r in table.rows) == 1


def test_density_eval_examples():
    kln = CATALOG.kln
    with pytest.raises(DomainError):
        density_eval(kln, 0.9, 28)  # below the KLN window (log H_R)
    assert density_eval(kln, 0.9, 30) == pytest.approx(
        17.253 * 30 ** 3.2 * math.exp(8) + 5.663 * 900, rel=1e-12)
    wide = DensityShape(17.253, 3, 5.663, 2, 8 / 3, 2, 0.6, 1.0)
    assert density_eval(wide, 0.9, 30) == pytest.approx(2.7416e9, rel=1e-4)
    assert density_eval(wide, 0.9, 30) == pytest.approx(
        17.253 * 30 ** 3.2 * math.exp(8) + 5.663 * 900, rel=1e-12)
    b = bellotti_lookup(95)
    assert density_eval(b, 0.99, 95) == pytest.approx(425721.47 * math.exp(4.831 * 0.01 * 95),
                                                      rel=1e-12)
    assert density_eval(b, 0.99, 95) == pytest.approx(4.1908e7, rel=1e-4)
    near_one = density_eval(wide, 1 - 1e-12, 30)
    assert near_one == pytest.approx(17.253 * 30 ** 3 + 5.663 * 900, rel=1e-9)
    with pytest.raises(DomainError):
        density_eval(b, 0.98, 95)


@settings(max_examples=200, deadline=None)
@given(st.floats(min_value=0.61, max_value=0.99), st.floats(min_value=0.001, max_value=0.009),
       st.floats(min_value=LOG_HR, max_value=600))
def test_density_strictly_decreasing_in_sigma(s, ds, log_t):
    kln = CATALOG.kln
    assert density_eval(kln, s + ds, log_t) < density_eval(kln, s, log_t)


def test_density_overflow_is_a_domain_error():
    with pytest.raises(DomainError):
        density_eval(CATALOG.kln, 0.61, 1e5)
