"""
Formula-vs-oracle runs: grids, samples, mismatch reports and reproducibility.
"""

from concurrent.futures import ThreadPoolExecutor

import pytest

from src.models import ElementSet, Family, MeetMode
from src.services.check_service import (
    CheckError,
    ProfileCache,
    check_cases,
    check_request,
    grid_cases,
    run_check,
    sample_cases,
)
from src.services.evaluation_service import build_request


def test_interval_grid_passes():
    report = run_check(Family.PHI, max_m=10, max_n=15)
    assert report.ok
    assert report.cases == 55 * 15
    assert report.grid == "1<=l<=m<=10, n<=15"


@pytest.mark.parametrize("family", list(Family))
def test_every_family_agrees_with_oracle_on_small_bounds(family):
    report = run_check(family, max_m=6, max_n=8, samples=40, seed=3)
    assert report.ok, report.mismatches
    assert report.cases > 0


def test_meet_families_default_to_inclusion_exclusion():
    assert run_check(Family.MEET_F, max_m=5, samples=5).mode is MeetMode.INCLUSION_EXCLUSION
    assert run_check(Family.F, max_m=3).mode is None


def test_literal_meet_sum_is_caught():
    report = run_check(Family.MEET_PHI, mode=MeetMode.PAPER_LITERAL, max_m=10, samples=100, seed=7)
    assert not report.ok
    assert all(mismatch.formula > mismatch.oracle for mismatch in report.mismatches)
    assert any(mismatch.note and "counted" in mismatch.note for mismatch in report.mismatches)


def test_corrected_meet_sum_passes_same_sample():
    report = run_check(Family.MEET_PHI, mode=MeetMode.INCLUSION_EXCLUSION, max_m=10, samples=100, seed=7)
    assert report.ok


def test_explicit_overcount_case_names_the_witness():
    report = check_cases(
        Family.MEET_F,
        [{"meet": ElementSet.of([1, 2]), "l": 1, "m": 2}],
        mode=MeetMode.PAPER_LITERAL,
    )
    (mismatch,) = report.mismatches
    assert (mismatch.formula, mismatch.oracle) == (4, 2)
    assert mismatch.parameters == {"meet": [1, 2], "l": 1, "m": 2}
    assert mismatch.witnesses == [[1], [1, 2]]
    assert mismatch.note == "[1, 2] meets [1, 2] in 2 elements and is counted 2^2-1 = 3 times"


def test_reports_are_reproducible():
    first = run_check(Family.SUPERSET_PHI_K, max_m=9, max_n=12, samples=60, seed=42)
    second = run_check(Family.SUPERSET_PHI_K, max_m=9, max_n=12, samples=60, seed=42)
    assert first.model_dump_json() == second.model_dump_json()
    assert "elapsed" not in first.model_dump()


def test_worker_count_does_not_change_the_report():
    single = run_check(Family.MEET_PHI, mode=MeetMode.PAPER_LITERAL, max_m=8, samples=50, seed=1, workers=1)
    threaded = run_check(Family.MEET_PHI, mode=MeetMode.PAPER_LITERAL, max_m=8, samples=50, seed=1, workers=4)
    assert single.model_dump_json() == threaded.model_dump_json()


def test_grid_enumeration():
    assert grid_cases(Family.PHI_K, max_m=2, max_n=1) == [
        {"l": 1, "m": 1, "n": 1, "k": 1},
        {"l": 1, "m": 2, "n": 1, "k": 1},
        {"l": 1, "m": 2, "n": 1, "k": 2},
        {"l": 2, "m": 2, "n": 1, "k": 1},
    ]
    assert len(grid_cases(Family.EPS, max_m=1, max_n=4)) == 10
    assert all(case["m"] < case["n"] for case in grid_cases(Family.EPS_K, max_m=1, max_n=6))
    assert grid_cases(Family.PSI, max_m=3, max_n=1) == [
        {"m1": 1, "l2": 2, "m2": 2, "n": 1},
        {"m1": 1, "l2": 2, "m2": 3, "n": 1},
        {"m1": 1, "l2": 3, "m2": 3, "n": 1},
        {"m1": 2, "l2": 3, "m2": 3, "n": 1},
    ]


def test_samples_respect_family_windows():
    for case in sample_cases(Family.SUPERSET_F_K, samples=200, seed=9, max_m=10, max_n=5):
        base, l, m, k = case["base"], case["l"], case["m"], case["k"]
        assert all(l <= x <= m for x in base.elements)
        assert max(1, len(base)) <= k <= m - l + 1
        assert "n" not in case
    assert sample_cases(Family.MEET_PHI, 30, 4, 10, 5) == sample_cases(Family.MEET_PHI, 30, 4, 10, 5)


@pytest.mark.parametrize("kwargs", [
    {"max_m": 30},
    {"max_m": 0},
    {"samples": 0},
])
def test_invalid_bounds(kwargs):
    with pytest.raises(CheckError):
        run_check(Family.SUPERSET_F, **kwargs)


def test_avoidance_bound_is_on_n():
    with pytest.raises(CheckError):
        run_check(Family.EPS, max_n=30)
    with pytest.raises(CheckError):
        run_check(Family.PHI, max_m=10, cap=8)


def test_mode_only_for_meet_families():
    with pytest.raises(CheckError):
        check_cases(Family.PHI, [{"l": 1, "m": 2, "n": 3}], mode=MeetMode.PAPER_LITERAL)


def test_serialized_reports_carry_success_flag():
    passing = run_check(Family.F, max_m=4).model_dump(mode="json")
    failing = check_cases(
        Family.MEET_F,
        [{"meet": ElementSet.of([1, 2]), "l": 1, "m": 2}],
        mode=MeetMode.PAPER_LITERAL,
    ).model_dump(mode="json")
    assert passing["ok"] is True
    assert failing["ok"] is False


def test_profile_cache_enumerates_each_universe_once_across_workers():
    cache = ProfileCache(cap=24)
    requests = [build_request(Family.PHI_K, {"l": 1, "m": 14, "k": k, "n": 30}) for k in range(1, 15)] * 3
    with ThreadPoolExecutor(max_workers=8) as executor:
        results = list(executor.map(lambda request: check_request(request, profiles=cache), requests))
    assert results == [None] * len(requests)
    assert cache.enumerations == 1
