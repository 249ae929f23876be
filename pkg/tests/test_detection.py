"""Unit tests for the detection operations against frozen and oracle values."""

import random
from datetime import date

import pytest
from hypothesis import given
from hypothesis import strategies as st

from dddm import (
    NO,
    YES,
    DddmParams,
    InvalidParameterError,
    SpanExceedsLimitError,
    VisitRecord,
    aggregate_windows,
    mh_status,
    mhsu_status_basic,
    mhsu_status_broad,
    plan_windows,
    qualifying_window_exists,
    su_status,
)
from dddm.errors import DddmError

from .oracles import brute_broad, brute_qualifying, random_dataset, random_params

MH = frozenset({"F060", "F063", "F064", "F067"})
SU = frozenset({"F100", "T4041", "F120", "F140"})


def visit(client, day, hospital=(), physician=(), base=date(2024, 1, 1)):
    from datetime import timedelta

    return VisitRecord(
        client_id=client,
        visit_date=base + timedelta(days=day),
        hospital_codes=frozenset(hospital),
        physician_codes=frozenset(physician),
    )


class TestQualifyingWindow:
    def test_single_visit_spans_zero_days(self):
        assert qualifying_window_exists([17], 1, 0) is True

    def test_too_few_visits(self):
        assert qualifying_window_exists([], 2, 365) is False

    def test_minimal_span_of_pairs(self):
        # brute enumeration of 2-subsets of {0,10,20}: minimal span is 10
        assert qualifying_window_exists([0, 10, 20], 2, 7) is False
        assert qualifying_window_exists([0, 10, 20], 2, 10) is True

    def test_same_day_duplicates_count_separately(self):
        assert qualifying_window_exists([5, 5], 2, 0) is True

    def test_rejects_bad_parameters(self):
        with pytest.raises(InvalidParameterError):
            qualifying_window_exists([1], 0, 10)
        with pytest.raises(InvalidParameterError):
            qualifying_window_exists([1], 1, -1)

    @given(
        dates=st.lists(st.integers(0, 60), min_size=0, max_size=10),
        n=st.integers(1, 6),
        t=st.integers(0, 60),
    )
    def test_matches_subset_enumeration(self, dates, n, t):
        dates = sorted(dates)
        assert qualifying_window_exists(dates, n, t) == brute_qualifying(dates, n, t)


class TestMhStatus:
    def test_client_without_matching_codes_is_no_with_absent_dates(self):
        rows = mh_status([visit("a", 0, hospital={"I10"})], 1, 1, 60, MH)
        assert rows == [
            mh_row("a", None, None, NO)
        ]

    def test_physician_visits_qualify_within_span(self):
        records = [visit("a", d, physician={"F063"}) for d in (0, 10, 40)]
        rows = mh_status(records, 2, 2, 10, MH)
        assert rows[0].mh_status == YES
        rows = mh_status(records, 2, 2, 9, MH)
        assert rows[0].mh_status == NO
        # dates reported even when the status is NO
        assert rows[0].mh_earliest == date(2024, 1, 1)
        assert rows[0].mh_latest == date(2024, 2, 10)

    def test_streams_never_pool_toward_one_threshold(self):
        records = [
            visit("a", 0, hospital={"F060"}),
            visit("a", 1, physician={"F060"}),
        ]
        rows = mh_status(records, 2, 2, 30, MH)
        assert rows[0].mh_status == NO

    def test_output_sorted_by_client(self):
        records = [visit("b", 0, hospital={"F060"}), visit("a", 1, physician={"F060"})]
        assert [r.client_id for r in mh_status(records, 1, 1, 0, MH)] == ["a", "b"]

    def test_invalid_code_rejected(self):
        with pytest.raises(InvalidParameterError):
            mh_status([], 1, 1, 60, {"F0.60"})
        with pytest.raises(InvalidParameterError):
            mh_status([], 1, 1, 60, set())


class TestParams:
    def test_overlapping_code_sets_permitted_with_warning(self):
        params = DddmParams(icd_mh={"F060", "F100"}, icd_su={"F100"})
        assert "F100" in params.overlap_warning()
        assert DddmParams().overlap_warning() is None

    def test_codes_normalized_on_construction(self):
        params = DddmParams(icd_mh={" f060 "}, icd_su={"t4041"})
        assert params.icd_mh == {"F060"}
        assert params.icd_su == {"T4041"}

    def test_invariants_enforced(self):
        with pytest.raises(InvalidParameterError):
            DddmParams(n_sup=0)
        with pytest.raises(InvalidParameterError):
            DddmParams(t_mh=-1)
        with pytest.raises(InvalidParameterError):
            DddmParams(t_mhsu=0)
        with pytest.raises(InvalidParameterError):
            DddmParams(icd_su=set())


class TestSuStatus:
    def test_empty_records_empty_output(self):
        assert su_status([], 1, 1, 60, SU) == []

    def test_hospital_then_physician_stream_qualification(self):
        records = [visit("a", d, hospital={"F100"}) for d in (0, 40)]
        rows = su_status(records, 2, 2, 30, SU)
        assert rows[0].su_status == NO
        records += [visit("a", d, physician={"F100"}) for d in (5, 10)]
        rows = su_status(records, 2, 2, 30, SU)
        assert rows[0].su_status == YES


class TestBasic:
    def params(self, **kw):
        defaults = dict(
            n_mhh=1, n_mhp=1, n_suh=1, n_sup=1, t_mh=60, t_su=60, t_mhsu=365,
            icd_mh=MH, icd_su=SU,
        )
        defaults.update(kw)
        return DddmParams(**defaults)

    def test_conjunction(self):
        records = [visit("a", 0, hospital={"F060"}), visit("b", 0, hospital={"F060"}),
                   visit("b", 1, physician={"F100"})]
        rows = mhsu_status_basic(records, self.params())
        by_id = {r.client_id: r for r in rows}
        assert by_id["a"].mh_status == YES and by_id["a"].su_status == NO
        assert by_id["a"].mhsu_status == NO
        assert by_id["b"].mhsu_status == YES

    def test_span_beyond_limit_rejected_unless_forced(self):
        records = [visit("a", 0, hospital={"F060"}), visit("a", 400, physician={"F100"})]
        with pytest.raises(SpanExceedsLimitError) as err:
            mhsu_status_basic(records, self.params())
        assert "broad" in str(err.value)
        rows = mhsu_status_basic(records, self.params(), force=True)
        assert rows[0].mhsu_status == YES

    def test_empty_input_gives_empty_output(self):
        assert mhsu_status_basic([], self.params()) == []


class TestPlanWindows:
    def test_published_window_count(self):
        # span 363 days, window 360 -> 363 - 360 + 1 = 4 windows
        plan = plan_windows(date(2024, 1, 1), date(2024, 12, 28), 360)
        assert plan.window_count == 4
        assert plan.windows[0][0] == date(2024, 1, 1)
        assert plan.windows[-1][1] == date(2024, 12, 28)

    def test_span_equal_to_window_is_single(self):
        plan = plan_windows(date(2024, 1, 1), date(2024, 1, 10), 10)
        assert plan.window_count == 1
        assert plan.windows == ((date(2024, 1, 1), date(2024, 1, 10)),)

    def test_three_windows_over_ten_days(self):
        plan = plan_windows(date(2024, 1, 1), date(2024, 1, 10), 8)
        assert plan.window_count == 3
        assert plan.windows == (
            (date(2024, 1, 1), date(2024, 1, 8)),
            (date(2024, 1, 2), date(2024, 1, 9)),
            (date(2024, 1, 3), date(2024, 1, 10)),
        )

    def test_window_length_is_exact_even_when_clamped(self):
        plan = plan_windows(date(2024, 1, 1), date(2024, 1, 3), 10)
        assert plan.window_count == 1
        assert plan.windows[0] == (date(2024, 1, 1), date(2024, 1, 10))


class TestBroad:
    def params(self, **kw):
        defaults = dict(icd_mh=MH, icd_su=SU)
        defaults.update(kw)
        return DddmParams(**defaults)

    def test_rejects_empty_input(self):
        with pytest.raises(DddmError):
            mhsu_status_broad([], self.params())

    def test_row_count_is_windows_times_clients(self):
        records = [
            visit("a", 0, hospital={"F060"}),
            visit("b", 9, physician={"F100"}),
        ]
        rows = mhsu_status_broad(records, self.params(t_mhsu=8))
        assert len(rows) == 3 * 2
        assert [r.window_index for r in rows] == [1, 1, 2, 2, 3, 3]
        assert [r.client_id for r in rows[:2]] == ["a", "b"]

    def test_client_absent_from_window_gets_no_with_absent_dates(self):
        records = [
            visit("a", 0, hospital={"F060"}),
            visit("b", 9, physician={"F100"}),
        ]
        rows = mhsu_status_broad(records, self.params(t_mhsu=8))
        last_window_a = [r for r in rows if r.window_index == 3 and r.client_id == "a"][0]
        assert last_window_a.mh_status == NO
        assert last_window_a.mh_earliest is None and last_window_a.su_earliest is None

    def test_degenerate_window_equals_basic(self):
        rng = random.Random(7)
        records = random_dataset(rng, span_days=30)
        while not records:
            records = random_dataset(rng, span_days=30)
        params = self.params(t_mhsu=400, t_mh=10, t_su=10, n_mhh=2, n_sup=2)
        broad = mhsu_status_broad(records, params)
        basic = mhsu_status_basic(records, params)
        assert len(broad) == len(basic)
        for b_row, row in zip(broad, basic):
            assert b_row.window_index == 1
            assert strip_window(b_row) == row

    def test_two_client_fixture_matches_per_window_enumeration(self):
        records = [
            visit("a", 0, hospital={"F060"}),
            visit("a", 2, hospital={"F060"}),
            visit("a", 3, physician={"F100"}),
            visit("b", 1, physician={"F063", "F100"}),
            visit("b", 9, hospital={"T4041"}),
        ]
        params = self.params(n_mhh=2, n_mhp=1, n_suh=1, n_sup=1, t_mh=5, t_su=3, t_mhsu=8)
        rows = mhsu_status_broad(records, params)
        expected = brute_broad(records, params)
        assert len(rows) == len(expected)
        for row, exp in zip(rows, expected):
            assert row_as_dict(row) == exp


class TestAggregateWindows:
    def test_yes_in_any_window_aggregates_to_yes(self):
        records = [
            visit("a", 0, hospital={"I10"}),
            visit("a", 9, hospital={"F060"}),
            visit("a", 9, physician={"F100"}),
        ]
        params = DddmParams(t_mhsu=8, icd_mh=MH, icd_su=SU)
        rows = mhsu_status_broad(records, params)
        # qualifies only in the later windows containing day 9
        assert any(r.mhsu_status == YES for r in rows)
        assert any(r.mhsu_status == NO for r in rows)
        agg = aggregate_windows(rows)
        assert len(agg) == 1
        assert agg[0].mhsu_status == YES
        assert agg[0].window_index is None

    def test_single_window_aggregation_is_identity(self):
        records = [visit("a", 0, hospital={"F060"}), visit("b", 3, physician={"F100"})]
        rows = mhsu_status_broad(records, DddmParams(icd_mh=MH, icd_su=SU))
        agg = aggregate_windows(rows)
        assert [strip_window(r) for r in rows] == agg

    def test_matches_or_recomputation_on_random_fixture(self):
        rng = random.Random(21)
        for _ in range(10):
            records = random_dataset(rng, max_clients=5, span_days=20)
            if not records:
                continue
            params = random_params(rng, span_days=12)
            rows = mhsu_status_broad(records, params)
            agg = {r.client_id: r for r in aggregate_windows(rows)}
            for client in {r.client_id for r in rows}:
                windows = [r for r in rows if r.client_id == client]
                for fam in ("mh_status", "su_status", "mhsu_status"):
                    expected = YES if any(getattr(w, fam) == YES for w in windows) else NO
                    assert getattr(agg[client], fam) == expected


def mh_row(client, earliest, latest, status):
    from dddm.models import StatusRecord

    return StatusRecord(
        client_id=client, mh_earliest=earliest, mh_latest=latest, mh_status=status
    )


def strip_window(row):
    from dataclasses import replace

    return replace(row, window_index=None)


def row_as_dict(row):
    return {
        "client_id": row.client_id,
        "mh_earliest": row.mh_earliest,
        "mh_latest": row.mh_latest,
        "mh_status": row.mh_status,
        "su_earliest": row.su_earliest,
        "su_latest": row.su_latest,
        "su_status": row.su_status,
        "mhsu_status": row.mhsu_status,
        "window_index": row.window_index,
    }
