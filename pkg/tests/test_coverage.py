import math
import random
from decimal import Decimal, getcontext

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from kthpowers import fixtures
from kthpowers.coverage import (DELTA_TABLE, LOG_CHAIN_FLOOR, LOG_REDUCTION_FLOOR, DeltaEntry,
                                TailSegment, chain_coverage, ceil_decimals,
                                log10_sequence_gap_N, rect_region, segment_certified,
                                segment_max, sequence_gap_N, tail_cover, theorem_conditional,
                                theorem_unconditional, verify_tail_cover)
from kthpowers.errors import DomainError
from kthpowers.oracle import prime_in_interval

FIRST_DELTA = 3.90970e7
LAST_DELTA = 2.51949e11


def test_delta_table_shape():
    assert len(DELTA_TABLE) == 14
    assert DELTA_TABLE[0].log_x0 == pytest.approx(LOG_CHAIN_FLOOR)
    for a, b in zip(DELTA_TABLE, DELTA_TABLE[1:]):
        assert a.log_x0 < b.log_x0 and a.delta < b.delta
    with pytest.raises(DomainError):
        DeltaEntry(100.0, 1.0)


def test_segment_max_examples():
    # 21 log(21 * 3.90970e7 * (1 - 1/3.90970e7)^2) evaluates to 431.048
    assert segment_max(21, FIRST_DELTA) == pytest.approx(431.048, abs=5e-4)
    assert segment_max(21, LAST_DELTA) == pytest.approx(615.2373, abs=5e-5)
    assert segment_max(86, LAST_DELTA) == pytest.approx(2640.79, abs=5e-3)
    with pytest.raises(DomainError):
        segment_max(21, 1.0)


@settings(max_examples=300)
@given(st.integers(21, 500), st.floats(2.0, 1e15), st.floats(1.0001, 10.0))
def test_segment_max_increasing(k, delta, factor):
    assert segment_max(k, delta * factor) > segment_max(k, delta)
    assert segment_max(k + 1, delta) > segment_max(k, delta)


def test_chain_examples():
    chain = chain_coverage(21)
    assert chain.max_log_x == pytest.approx(615.2373, abs=5e-5)
    assert len(chain.segments) == 14
    assert chain.floor_log_x == pytest.approx(math.log(4e18))
    assert chain_coverage(86).max_log_x == pytest.approx(2640.79, abs=5e-3)
    single = chain_coverage(21, DELTA_TABLE[:1])
    assert single.max_log_x == segment_max(21, FIRST_DELTA)
    assert chain_coverage(70).max_log_x == pytest.approx(2135.069, abs=1e-3)
    assert chain_coverage(85).max_log_x == pytest.approx(2609.087, abs=1e-3)
    with pytest.raises(DomainError):
        chain_coverage(21, [])


def test_chain_segments_contiguous():
    for k in (21, 65, 90):
        chain = chain_coverage(k)
        for (a, b, _), (c, _, _) in zip(chain.segments, chain.segments[1:]):
            assert c <= b
        assert chain.max_log_x == chain.segments[-1][1]


def test_chain_breaks_when_floor_unreachable():
    entries = [DeltaEntry(LOG_CHAIN_FLOOR, 1e3), DeltaEntry(10 ** 4, 1e12)]
    chain = chain_coverage(21, entries)
    assert chain.max_log_x == pytest.approx(segment_max(21, 1e3))


@settings(max_examples=50, deadline=None)
@given(st.integers(21, 120), st.randoms(use_true_random=False))
def test_chain_order_insensitive(k, rng):
    table = list(DELTA_TABLE)
    rng.shuffle(table)
    assert chain_coverage(k, table).max_log_x == chain_coverage(k).max_log_x


def test_single_entry_lower_bound():
    for k in range(65, 91):
        assert chain_coverage(k).max_log_x >= segment_max(k, FIRST_DELTA)


def test_reduction_floor_above_chain_floor():
    assert LOG_REDUCTION_FLOOR >= LOG_CHAIN_FLOOR


def test_base_case_prime_between_first_powers():
    for k in range(65, 91):
        assert prime_in_interval(1, 2 ** k).value == 2


def test_verdicts():
    v = theorem_unconditional(86)
    assert v.status == "HOLDS" and v.xhat == 2010
    assert 2010 <= v.chain_max
    for k in range(87, 91):
        assert theorem_unconditional(k).status == "HOLDS"
    v = theorem_unconditional(70)
    assert v.status == "GAP"
    assert (v.gap_lo, v.gap_hi) == (pytest.approx(2135.069, abs=1e-3), 15951)
    assert theorem_unconditional(85).status == "GAP"
    for k in range(65, 86):
        assert theorem_unconditional(k).status == "GAP"
    with pytest.raises(DomainError):
        theorem_unconditional(91)


def test_verdict_with_tabulated_threshold_and_no_tail():
    v = theorem_unconditional(86, xhat_value=2010, require_tail=False)
    assert v.status == "HOLDS" and v.tail == ()


@pytest.mark.parametrize("k", range(86, 91))
def test_tail_cover_verifies(k):
    tail = tail_cover(k)
    start = math.floor(chain_coverage(k).max_log_x)
    assert verify_tail_cover(k, start, tail)
    assert math.isinf(tail[-1].hi)


def test_tail_cover_rejects_gaps():
    tail = tail_cover(86)
    start = math.floor(chain_coverage(86).max_log_x)
    assert not verify_tail_cover(86, start, ())
    assert not verify_tail_cover(86, start - 10, tail)
    if len(tail) > 1:
        broken = (tail[0], TailSegment(tail[0].hi + 5, tail[1].hi, tail[1].c, tail[1].z))
        assert not verify_tail_cover(86, start, broken)


def test_segment_certified_rejects_uncertifiable():
    # the tabulated 86 row rises above 1 beyond its threshold
    assert segment_certified(86, 1.22924, 2010, math.inf) is None


def _decimal_gap(k, lo, hi):
    getcontext().prec = 40
    return (Decimal(hi) / k).exp() - (Decimal(lo) / k).exp()


@pytest.mark.parametrize("lo,hi,mantissa,exponent", [
    (2135, 15951, 9.189, 98),
    (2135, 580_009, 3.132, 3598),
])
def test_sequence_gap_examples(lo, hi, mantissa, exponent):
    n = sequence_gap_N(70, lo, hi)
    ref = _decimal_gap(70, lo, hi)
    assert float(n / 10 ** exponent) == pytest.approx(mantissa, abs=1e-3)
    assert abs(Decimal(str(n)) / ref - 1) < Decimal("1e-4")
    assert log10_sequence_gap_N(70, lo, hi) == pytest.approx(exponent + math.log10(mantissa),
                                                             abs=1e-3)


def test_sequence_gap_rejects_degenerate():
    with pytest.raises(DomainError):
        sequence_gap_N(70, 2135, 2135)
    with pytest.raises(DomainError):
        sequence_gap_N(70, 3000, 2135)


def test_rect_region_examples():
    assert rect_region(14.055, 264.334)[0] == pytest.approx(0.99168, abs=5e-6)
    assert rect_region(19.62, 500.0)[0] == pytest.approx(0.99404, abs=5e-6)
    assert rect_region(1e12, 100.0)[0] == pytest.approx(1.0, abs=1e-12)
    with pytest.raises(DomainError):
        rect_region(14.055, 20.0)


def test_ceil_decimals():
    assert ceil_decimals(264.33314) == 264.334
    assert ceil_decimals(75.85240) == 75.853
    assert ceil_decimals(2.5) == 2.5


@pytest.mark.parametrize("k,z,log_t", [(70, 14.055, 264.334), (85, 17.270, 75.853)])
def test_theorem_conditional_examples(k, z, log_t):
    r = theorem_conditional(k, c=float(fixtures.table4_row(k).c_z))
    assert (round(r.z, 3), r.log_t) == (z, log_t)
    assert r.side_condition and r.flags == ()


def test_theorem_conditional_flags_k80():
    r = theorem_conditional(80, c=float(fixtures.table4_row(80).c_z))
    assert round(r.z, 3) == 16.198
    assert len(r.flags) == 1 and "16.168" in r.flags[0]
