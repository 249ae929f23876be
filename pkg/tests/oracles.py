"""Independent brute-force reference implementations for the test suite.

Everything here re-derives statuses from first principles: subset
enumeration instead of sorted-scan shortcuts, explicit per-window
recomputation instead of shared indexing. Deliberately slow and
deliberately independent of the library's code paths.
"""

from __future__ import annotations

import random
from datetime import date, timedelta
from itertools import combinations

from dddm.models import NO, YES, DddmParams, VisitRecord


def brute_qualifying(dates: list[int], n: int, t: int) -> bool:
    """Any n-element subset whose max-min span is within t days."""
    return any(max(sub) - min(sub) <= t for sub in combinations(dates, n))


def _matching_dates(records, client_id: str, codes: frozenset, stream: str) -> list[int]:
    field = "hospital_codes" if stream == "hospital" else "physician_codes"
    return [
        rec.visit_date.toordinal()
        for rec in records
        if rec.client_id == client_id and getattr(rec, field) & codes
    ]


def brute_family(records, client_id, codes, n_h, n_p, t):
    """(earliest, latest, status) for one code family of one client."""
    hospital = _matching_dates(records, client_id, codes, "hospital")
    physician = _matching_dates(records, client_id, codes, "physician")
    both = hospital + physician
    earliest = date.fromordinal(min(both)) if both else None
    latest = date.fromordinal(max(both)) if both else None
    qualified = brute_qualifying(hospital, n_h, t) or brute_qualifying(physician, n_p, t)
    return earliest, latest, (YES if qualified else NO)


def brute_basic(records, params: DddmParams) -> list[dict]:
    """Single-span concurrent detection by direct per-client enumeration."""
    rows = []
    for client_id in sorted({rec.client_id for rec in records}):
        mh_e, mh_l, mh = brute_family(
            records, client_id, params.icd_mh, params.n_mhh, params.n_mhp, params.t_mh
        )
        su_e, su_l, su = brute_family(
            records, client_id, params.icd_su, params.n_suh, params.n_sup, params.t_su
        )
        rows.append(
            {
                "client_id": client_id,
                "mh_earliest": mh_e,
                "mh_latest": mh_l,
                "mh_status": mh,
                "su_earliest": su_e,
                "su_latest": su_l,
                "su_status": su,
                "mhsu_status": YES if (mh == YES and su == YES) else NO,
            }
        )
    return rows


def brute_broad(records, params: DddmParams) -> list[dict]:
    """Windowed detection: re-filter and re-enumerate per window."""
    dates = [rec.visit_date for rec in records]
    lo, hi = min(dates), max(dates)
    span = (hi - lo).days + 1
    k = max(1, span - params.t_mhsu + 1)
    roster = sorted({rec.client_id for rec in records})
    rows = []
    for w in range(1, k + 1):
        win_start = lo + timedelta(days=w - 1)
        win_end = win_start + timedelta(days=params.t_mhsu - 1)
        subset = [rec for rec in records if win_start <= rec.visit_date <= win_end]
        for client_id in roster:
            mh_e, mh_l, mh = brute_family(
                subset, client_id, params.icd_mh, params.n_mhh, params.n_mhp, params.t_mh
            )
            su_e, su_l, su = brute_family(
                subset, client_id, params.icd_su, params.n_suh, params.n_sup, params.t_su
            )
            rows.append(
                {
                    "client_id": client_id,
                    "mh_earliest": mh_e,
                    "mh_latest": mh_l,
                    "mh_status": mh,
                    "su_earliest": su_e,
                    "su_latest": su_l,
                    "su_status": su,
                    "mhsu_status": YES if (mh == YES and su == YES) else NO,
                    "window_index": w,
                }
            )
    return rows


# Randomized fixture generation ----------------------------------------------

MH_POOL = ("F060", "F063", "F064", "F067")
SU_POOL = ("F100", "T4041", "F120", "F140")
NOISE_POOL = ("I10", "J10", "Z000")


def random_dataset(
    rng: random.Random,
    max_clients: int = 8,
    max_visits: int = 12,
    span_days: int = 60,
) -> list[VisitRecord]:
    """Small random dataset mixing matching and non-matching codes."""
    base = date(2024, 1, 1)
    records = []
    for c in range(rng.randint(1, max_clients)):
        client_id = f"c{c:02d}"
        for _ in range(rng.randint(0, max_visits)):
            pools = []
            if rng.random() < 0.55:
                pools.append(rng.choice(MH_POOL))
            if rng.random() < 0.55:
                pools.append(rng.choice(SU_POOL))
            if rng.random() < 0.3:
                pools.append(rng.choice(NOISE_POOL))
            codes = frozenset(pools)
            hospital = codes if rng.random() < 0.5 else frozenset()
            physician = codes if not hospital or rng.random() < 0.3 else frozenset()
            records.append(
                VisitRecord(
                    client_id=client_id,
                    visit_date=base + timedelta(days=rng.randint(0, span_days - 1)),
                    hospital_codes=hospital,
                    physician_codes=physician,
                )
            )
    return records


def random_params(rng: random.Random, span_days: int = 60) -> DddmParams:
    return DddmParams(
        n_mhh=rng.randint(1, 4),
        n_mhp=rng.randint(1, 4),
        n_suh=rng.randint(1, 4),
        n_sup=rng.randint(1, 4),
        t_mh=rng.randint(0, span_days),
        t_su=rng.randint(0, span_days),
        t_mhsu=rng.randint(1, span_days + 10),
        icd_mh=frozenset(rng.sample(MH_POOL, rng.randint(1, len(MH_POOL)))),
        icd_su=frozenset(rng.sample(SU_POOL, rng.randint(1, len(SU_POOL)))),
    )


def basic_safe_instances(seed_base: int, runs: int, span_days: int = 40):
    """Yield (seed, records, params) with non-empty records and the
    single-span precondition pre-satisfied (t_mhsu >= data span)."""
    from dataclasses import replace

    from dddm.detection import data_span_days

    produced = 0
    seed = seed_base
    while produced < runs:
        seed += 1
        rng = random.Random(seed)
        records = random_dataset(rng, max_clients=6, max_visits=10, span_days=span_days)
        if not records:
            continue
        params = random_params(rng, span_days=span_days)
        params = replace(params, t_mhsu=max(params.t_mhsu, data_span_days(records)))
        produced += 1
        yield seed, records, params
