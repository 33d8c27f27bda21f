from fractions import Fraction

import pytest
from hypothesis import given
from hypothesis import strategies as st

from wsnbundle.errors import DegenerateInterval, UnsatisfiableAccuracy
from wsnbundle.sync import (
    AHTS_TABLE, EE_ASCFR_ROWS, EE_ASCFR_TABLE, AccuracyRow, AccuracyTable, ClockState,
    SkewEstimate, SyncSample, accuracy_to_si, load_accuracy_csv, local_time, quantize,
    sync_error, translate_timestamp, true_time_of, update_skew,
)

from .helpers import S

US = Fraction(1, 10**6)


def test_ahts_rows_match_published_values():
    # values as printed in the source table (seconds)
    got = [(r.si, r.mae) for r in AHTS_TABLE.rows]
    assert got == [(S, Fraction("1.8166e-6")), (10 * S, Fraction("2.3385e-6")), (100 * S, Fraction("8.4225e-6"))]


@pytest.mark.parametrize("sa, si", [(5 * US, 10 * S), (Fraction("8.4225e-6"), 100 * S),
                                    (Fraction("1.8166e-6"), S), (1, 100 * S)])
def test_accuracy_to_si(sa, si):
    assert accuracy_to_si(sa) == si


def test_accuracy_below_table():
    with pytest.raises(UnsatisfiableAccuracy):
        accuracy_to_si(US)


@given(st.fractions(min_value=Fraction("1.8166e-6"), max_value=Fraction(1, 1000)),
       st.fractions(min_value=Fraction("1.8166e-6"), max_value=Fraction(1, 1000)))
def test_accuracy_to_si_monotone(a, b):
    lo, hi = sorted((a, b))
    assert accuracy_to_si(lo) <= accuracy_to_si(hi)


def test_table_roundtrip():
    for table in (AHTS_TABLE, EE_ASCFR_TABLE):
        for row in table.rows:
            assert accuracy_to_si(row.mae, table) >= row.si


def test_ee_envelope_is_monotone_and_dominates_raw_rows():
    for raw, env in zip(EE_ASCFR_ROWS, EE_ASCFR_TABLE.rows):
        assert env.si == raw.si and env.mae >= raw.mae


def test_table_rejects_non_monotone():
    with pytest.raises(ValueError):
        AccuracyTable((AccuracyRow(1, Fraction(2)), AccuracyRow(2, Fraction(1))))
    with pytest.raises(ValueError):
        AccuracyTable(())


def test_load_csv(tmp_path):
    p = tmp_path / "t.csv"
    p.write_text("si_seconds,mae_seconds\n1,0.000002\n10,0.000003\n")
    t = load_accuracy_csv(p)
    assert accuracy_to_si(Fraction(25, 10**7), t) == S
    p.write_text("si,mae\n1,2\n")
    with pytest.raises(ValueError):
        load_accuracy_csv(p)


def test_local_time_examples():
    assert local_time(ClockState(), 123) == 123
    assert local_time(ClockState(40, 0), 10 * S) == 10 * S + 400
    assert local_time(ClockState(-40, S), 0) == S
    with pytest.raises(ValueError):
        ClockState(201)


@given(st.fractions(-200, 200), st.integers(0, 10**9), st.integers(0, 10**10))
def test_true_time_inverts_local(drift, offset, t):
    c = ClockState(drift, offset)
    assert true_time_of(c, local_time(c, t)) == t


def _sample(clock, t):
    n = local_time(clock, t)
    return SyncSample(t, n, n)


def test_update_skew_examples():
    perfect = ClockState()
    s0, s1 = _sample(perfect, 0), _sample(perfect, 10 * S)
    assert update_skew(update_skew(None, s0), s1, s0).ratio == 1
    c = ClockState(40, 12345)
    s0, s1 = _sample(c, 5 * S), _sample(c, 15 * S)
    est = update_skew(update_skew(None, s0), s1, s0)
    assert abs(est.ratio - Fraction(100004, 100000)) < Fraction(1, 10**9)
    assert est.converged
    with pytest.raises(DegenerateInterval):
        update_skew(est, s1, s1)


def test_first_sample_prior():
    est = update_skew(None, SyncSample(100, 500, 600))
    assert est.ratio == 1 and est.anchor_head == 100 and est.anchor_node == 500
    assert not est.converged


@given(st.fractions(-200, 200), st.integers(0, 10**7), st.integers(1, 10**8))
def test_noiseless_ratio_recovery(drift, t0, dt):
    c = ClockState(drift, 777)
    s0, s1 = _sample(c, t0), _sample(c, t0 + dt)
    est = update_skew(None, s1, s0)
    assert abs(est.ratio / c.rate - 1) <= Fraction(1, 10**9)


def test_translate_examples():
    ident = SkewEstimate(Fraction(1), Fraction(0), Fraction(0))
    assert translate_timestamp(ident, 42) == 42
    est = SkewEstimate(Fraction(100004, 100000), Fraction(1000), Fraction(50))
    assert abs(translate_timestamp(est, 1000 + 10 * S) - (50 + Fraction("9.9996") * S)) <= 1
    assert translate_timestamp(est, 1000) == 50


def test_sync_error_examples():
    c = ClockState(40, 1000)
    exact = SkewEstimate(c.rate, Fraction(1000), Fraction(0))
    assert sync_error(exact, c, 10 * S) == 0
    stale = SkewEstimate(c.rate + Fraction(1, 10**6), Fraction(1000), Fraction(0))
    assert abs(sync_error(stale, c, 10 * S) - 10) < Fraction(1, 100)


def test_quantize():
    assert quantize(Fraction(199, 2)) == 99
    assert quantize(105, 10) == 100
