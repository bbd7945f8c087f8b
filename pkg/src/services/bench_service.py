"""
Closed form vs exhaustive enumeration timings.
"""

from typing import Callable, Optional, Tuple
import time

from ..config import settings
from ..models import BenchReport, EvalRequest
from ..utils.logger_config import get_logger
from .evaluation_service import decimal_string, evaluate, oracle_query, plain_parameters, universe_size
from .numtheory import DomainError
from .oracle_service import enumerate_count

logger = get_logger('bench')


def _timed(call: Callable[[], int], repetitions: int) -> Tuple[int, float]:
    """Result of the last call and mean wall time per call in seconds"""
    result = 0
    start_time = time.perf_counter()
    for _ in range(repetitions):
        result = call()
    return result, (time.perf_counter() - start_time) / repetitions


def run_bench(request: EvalRequest, repetitions: Optional[int] = None, cap: Optional[int] = None) -> BenchReport:
    """
    Time the closed form and, when the universe fits under the cap, the oracle.

    Raises:
        DomainError: if repetitions is not positive or the request is outside
            its family's domain
    """
    repetitions = settings.BENCH_REPETITIONS if repetitions is None else repetitions
    cap = settings.ORACLE_CAP if cap is None else cap
    if repetitions < 1:
        raise DomainError(f"repetitions must be positive, got {repetitions}", constraint="reps >= 1")

    count, closed_form_seconds = _timed(lambda: evaluate(request).count, repetitions)
    size = universe_size(request)
    report = dict(
        family=request.family,
        parameters=plain_parameters(request),
        repetitions=repetitions,
        count=decimal_string(count),
        closed_form_seconds=closed_form_seconds,
        universe_size=size,
    )

    if size > cap:
        logger.info(f"Oracle leg skipped for {request.family.value}: {size} elements > cap {cap}")
        return BenchReport(
            **report,
            note=f"oracle infeasible: universe has {size} elements, above the enumeration cap {cap}",
        )

    universe, predicate = oracle_query(request)
    oracle_count, oracle_seconds = _timed(lambda: enumerate_count(universe, predicate, cap), repetitions)
    speedup = oracle_seconds / closed_form_seconds if closed_form_seconds > 0 else None
    logger.info(
        f"Bench {request.family.value}: closed form {closed_form_seconds * 1000:.3f}ms, "
        f"oracle {oracle_seconds * 1000:.3f}ms",
        extra={'action': 'bench', 'family': request.family.value, 'duration': closed_form_seconds * 1000},
    )
    return BenchReport(
        **report,
        oracle_seconds=oracle_seconds,
        oracle_count=decimal_string(oracle_count),
        counts_agree=oracle_count == count,
        speedup=speedup,
    )
