"""
Closed form vs oracle timings.
"""

import pytest

from src.models import ElementSet, Family
from src.services.bench_service import run_bench
from src.services.evaluation_service import build_request
from src.services.numtheory import DomainError


def test_feasible_bench_runs_both_legs():
    report = run_bench(build_request(Family.PHI, {"l": 1, "m": 20, "n": 12}), repetitions=2)
    assert report.universe_size == 20
    assert report.counts_agree
    assert report.count == report.oracle_count
    assert report.oracle_seconds is not None and report.closed_form_seconds > 0
    assert report.note is None


def test_union_bench_uses_union_size():
    report = run_bench(build_request(Family.PSI, {"m1": 5, "l2": 8, "m2": 20, "n": 9}), repetitions=1)
    assert report.universe_size == 18
    assert report.counts_agree
    assert report.parameters == {"m1": 5, "l2": 8, "m2": 20, "n": 9}


def test_set_parameters_are_reported_as_lists():
    request = build_request(Family.SUPERSET_F, {"base": ElementSet.of([4, 6]), "l": 4, "m": 6})
    report = run_bench(request, repetitions=1)
    assert report.parameters == {"base": [4, 6], "l": 4, "m": 6}
    assert report.count == "1"


def test_oversize_universe_skips_the_oracle():
    report = run_bench(build_request(Family.PHI, {"l": 1, "m": 40, "n": 6}), repetitions=1)
    assert report.oracle_count is None and report.counts_agree is None and report.speedup is None
    assert "infeasible" in report.note
    # inclusion-exclusion over the divisors 1, 2, 3, 6 of 6
    assert report.count == str(2**40 - 2**20 - 2**13 + 2**6)


def test_repetitions_must_be_positive():
    with pytest.raises(DomainError):
        run_bench(build_request(Family.F, {"l": 1, "m": 5}), repetitions=0)


@pytest.mark.slow
def test_full_cap_bench_shows_speedup():
    report = run_bench(build_request(Family.PHI, {"l": 1, "m": 24, "n": 6}), repetitions=1)
    assert report.counts_agree
    assert report.speedup > 100
