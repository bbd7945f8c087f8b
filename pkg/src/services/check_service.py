"""
Formula-vs-oracle verification.

Interval, union and avoidance families are checked on exhaustive grids;
superset and meet families on seeded random samples. Every case compares the
closed form with ``enumerate_count`` over the family's defining predicate and
records a ``Mismatch`` (with witnesses) on disagreement. Reports depend only
on the family, the bounds, the seed and the sample count.
"""

from concurrent.futures import ThreadPoolExecutor
from typing import Dict, Iterable, Iterator, List, Optional, Tuple
import random
import threading
import time

from ..config import settings
from ..models import (
    FAMILY_PARAMETERS,
    CheckReport,
    ElementSet,
    EvalRequest,
    Family,
    MeetMode,
    Mismatch,
    PredicateSpec,
    UniverseSpec,
)
from ..utils.logger_config import get_logger, log_verification
from .evaluation_service import build_request, evaluate, oracle_query, plain_parameters
from .numtheory import DomainError
from .oracle_service import enumerate_profile, enumerate_witnesses

logger = get_logger('check')

INTERVAL_FAMILIES = (Family.PHI, Family.PHI_K, Family.F, Family.F_K)
UNION_FAMILIES = (Family.PSI, Family.PSI_K, Family.PHI_UNION, Family.PHI_K_UNION)
AVOIDANCE_FAMILIES = (Family.EPS, Family.EPS_K)
SAMPLED_FAMILIES = (
    Family.SUPERSET_PHI, Family.SUPERSET_PHI_K, Family.SUPERSET_F, Family.SUPERSET_F_K,
    Family.MEET_PHI, Family.MEET_PHI_K, Family.MEET_F, Family.MEET_F_K,
)

# largest base/meet set drawn by the sampler
SAMPLE_SET_SIZE = 4

ProfileKey = Tuple[UniverseSpec, PredicateSpec]


class CheckError(DomainError):
    """Invalid grid bounds or sample parameters"""


class ProfileCache:
    """
    Cardinality profiles keyed by universe and predicate (cardinality dropped),
    shared by every k of a universe and safe to share between workers.

    Each profile is enumerated once; workers asking for the same key wait for it.
    """

    def __init__(self, cap: int):
        self.cap = cap
        self.enumerations = 0
        self._profiles: Dict[ProfileKey, Dict[int, int]] = {}
        self._key_locks: Dict[ProfileKey, threading.Lock] = {}
        self._lock = threading.Lock()

    def profile(self, universe: UniverseSpec, predicate: PredicateSpec) -> Dict[int, int]:
        key = (universe, predicate.model_copy(update={"cardinality": None}))
        with self._lock:
            key_lock = self._key_locks.setdefault(key, threading.Lock())
        with key_lock:
            with self._lock:
                profile = self._profiles.get(key)
            if profile is None:
                profile = enumerate_profile(universe, key[1], self.cap)
                with self._lock:
                    self._profiles[key] = profile
                    self.enumerations += 1
        return profile


def _structures(family: Family, max_m: int, max_n: int) -> Iterator[Tuple[Dict[str, int], int]]:
    """Parameter shapes of a grid family with the size of the counted universe"""
    if family in INTERVAL_FAMILIES:
        for m in range(1, max_m + 1):
            for l in range(1, m + 1):
                yield {"l": l, "m": m}, m - l + 1
    elif family in UNION_FAMILIES:
        for m2 in range(2, max_m + 1):
            for l2 in range(2, m2 + 1):
                for m1 in range(1, l2):
                    yield {"m1": m1, "l2": l2, "m2": m2}, m1 + m2 - l2 + 1
    else:
        for n in range(2, max_n + 1):
            for m in range(1, n):
                for l in range(1, m + 1):
                    yield {"l": l, "m": m, "n": n}, n - (m - l + 1)


def grid_cases(family: Family, max_m: int, max_n: int) -> List[Dict[str, int]]:
    """Every parameter tuple of a grid family within the bounds, in generation order"""
    names = FAMILY_PARAMETERS[family]
    cases = []
    for structure, size in _structures(family, max_m, max_n):
        moduli = [None] if "n" not in names or "n" in structure else range(1, max_n + 1)
        cardinalities = range(1, size + 1) if "k" in names else [None]
        for n in moduli:
            for k in cardinalities:
                case = dict(structure)
                if n is not None:
                    case["n"] = n
                if k is not None:
                    case["k"] = k
                cases.append(case)
    return cases


def sample_cases(family: Family, samples: int, seed: int, max_m: int, max_n: int) -> List[Dict[str, object]]:
    """Seeded random parameter tuples for a superset or meet family"""
    names = FAMILY_PARAMETERS[family]
    set_name = "meet" if family.is_meet else "base"
    rng = random.Random(seed)
    cases = []
    for _ in range(samples):
        m = rng.randint(1, max_m)
        l = rng.randint(1, m)
        size = m - l + 1
        chosen = rng.sample(range(l, m + 1), rng.randint(0, min(size, SAMPLE_SET_SIZE)))
        case: Dict[str, object] = {set_name: ElementSet.of(chosen), "l": l, "m": m}
        if "k" in names:
            low = 1 if family.is_meet else max(1, len(chosen))
            case["k"] = rng.randint(low, size)
        if "n" in names:
            case["n"] = rng.randint(1, max_n)
        cases.append(case)
    return cases


def _validate_bounds(family: Family, max_m: int, max_n: int, samples: int, cap: int) -> None:
    if max_m < 1 or max_n < 1:
        raise CheckError(f"grid bounds must be positive, got max_m={max_m}, max_n={max_n}",
                         constraint="max_m >= 1, max_n >= 1")
    if samples < 1:
        raise CheckError(f"sample count must be positive, got {samples}", constraint="samples >= 1")
    if family in AVOIDANCE_FAMILIES:
        if max_n > cap:
            raise CheckError(f"max_n={max_n} exceeds the oracle cap {cap}", constraint=f"max_n <= {cap}")
    elif max_m > cap:
        raise CheckError(f"max_m={max_m} exceeds the oracle cap {cap}", constraint=f"max_m <= {cap}")


def describe_grid(family: Family, max_m: int, max_n: int, samples: int, seed: int) -> str:
    if family in SAMPLED_FAMILIES:
        bound = f", n<={max_n}" if "n" in FAMILY_PARAMETERS[family] else ""
        return f"{samples} samples, seed {seed}, m<={max_m}{bound}"
    if family in AVOIDANCE_FAMILIES:
        return f"1<=l<=m<n<={max_n}"
    bound = f", n<={max_n}" if "n" in FAMILY_PARAMETERS[family] else ""
    if family in UNION_FAMILIES:
        return f"1<=m1<l2<=m2<={max_m}{bound}"
    return f"1<=l<=m<={max_m}{bound}"


def _oracle_count(request: EvalRequest, profiles: ProfileCache) -> int:
    universe, predicate = oracle_query(request)
    profile = profiles.profile(universe, predicate)
    if predicate.cardinality is None:
        return sum(profile.values())
    return profile.get(predicate.cardinality, 0)


def _overcount_note(request: EvalRequest, cap: int) -> Optional[str]:
    """For the printed meet sum: a qualifying set meeting the meet set in j >= 2 elements"""
    universe, predicate = oracle_query(request)
    meet = request.parameters["meet"]
    for witness in enumerate_witnesses(universe, predicate, 1 << universe.size, cap):
        j = sum(1 for element in witness.elements if element in meet)
        if j >= 2:
            return (
                f"{list(witness.elements)} meets {list(meet.elements)} in {j} elements "
                f"and is counted 2^{j}-1 = {(1 << j) - 1} times"
            )
    return None


def check_request(request: EvalRequest, cap: Optional[int] = None,
                  profiles: Optional[ProfileCache] = None) -> Optional[Mismatch]:
    """Compare one closed-form evaluation with the oracle; None when they agree"""
    cap = settings.ORACLE_CAP if cap is None else cap
    profiles = ProfileCache(cap) if profiles is None else profiles
    formula = evaluate(request).count
    oracle = _oracle_count(request, profiles)
    if formula == oracle:
        return None

    universe, predicate = oracle_query(request)
    witnesses = []
    if oracle:
        witnesses = [list(w.elements) for w in enumerate_witnesses(universe, predicate, settings.WITNESS_LIMIT, cap)]
    note = None
    if request.mode is MeetMode.PAPER_LITERAL:
        note = _overcount_note(request, cap)
    logger.debug(f"Mismatch for {request.family.value} {plain_parameters(request)}: {formula} != {oracle}")
    return Mismatch(
        parameters=plain_parameters(request),
        formula=formula,
        oracle=oracle,
        witnesses=witnesses,
        note=note,
    )


def check_cases(
    family: Family,
    cases: Iterable[Dict[str, object]],
    mode: Optional[MeetMode] = None,
    grid: str = "explicit cases",
    cap: Optional[int] = None,
    workers: Optional[int] = None,
) -> CheckReport:
    """
    Check explicit parameter tuples of one family.

    Results are collected in case order whatever the worker count.

    Raises:
        pydantic.ValidationError / DomainError: if a case is not a valid request
    """
    workers = settings.CHECK_WORKERS if workers is None else workers
    if mode is not None and not family.is_meet:
        raise CheckError(f"{family.value} takes no mode", constraint="mode only for meet families")
    requests = [build_request(family, case, mode) for case in cases]
    profiles = ProfileCache(settings.ORACLE_CAP if cap is None else cap)

    start_time = time.perf_counter()
    if workers > 1:
        with ThreadPoolExecutor(max_workers=workers) as executor:
            results = list(executor.map(lambda request: check_request(request, cap, profiles), requests))
    else:
        results = [check_request(request, cap, profiles) for request in requests]
    elapsed = time.perf_counter() - start_time

    mismatches = [result for result in results if result is not None]
    report = CheckReport(
        family=family,
        mode=mode,
        grid=grid,
        cases=len(requests),
        mismatches=mismatches,
        elapsed=elapsed,
    )
    log_verification(
        family.value,
        report.ok,
        cases=report.cases,
        mismatches=len(mismatches),
        duration=elapsed * 1000,
    )
    return report


def run_check(
    family: Family,
    mode: Optional[MeetMode] = None,
    max_m: Optional[int] = None,
    max_n: Optional[int] = None,
    samples: Optional[int] = None,
    seed: Optional[int] = None,
    cap: Optional[int] = None,
    workers: Optional[int] = None,
) -> CheckReport:
    """
    Run the grid or sampled check for one family.

    Args:
        family: Counting family to verify
        mode: Meet-sum reading; meet families fall back to the configured default
        max_m: Largest universe endpoint
        max_n: Largest modulus (or largest n for the avoidance counts)
        samples: Number of random tuples for superset/meet families
        seed: Sampler seed
        cap: Oracle enumeration cap

    Raises:
        CheckError: on bounds the oracle cannot honor
    """
    max_m = settings.CHECK_MAX_M if max_m is None else max_m
    max_n = settings.CHECK_MAX_N if max_n is None else max_n
    samples = settings.CHECK_SAMPLES if samples is None else samples
    seed = settings.DEFAULT_SEED if seed is None else seed
    cap = settings.ORACLE_CAP if cap is None else cap
    if family.is_meet and mode is None:
        mode = MeetMode(settings.DEFAULT_MEET_MODE)
    _validate_bounds(family, max_m, max_n, samples, cap)

    if family in SAMPLED_FAMILIES:
        cases = sample_cases(family, samples, seed, max_m, max_n)
    else:
        cases = grid_cases(family, max_m, max_n)
    logger.info(f"Checking {family.value} on {len(cases)} cases")
    return check_cases(
        family,
        cases,
        mode=mode,
        grid=describe_grid(family, max_m, max_n, samples, seed),
        cap=cap,
        workers=workers,
    )
