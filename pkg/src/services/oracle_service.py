"""
Brute-force ground truth for the counting formulas.

Subsets of an explicit universe are indexed by a binary counter over the
sorted elements (bit i <-> i-th smallest element). Counting builds gcd and
size tables for the low bits by doubling (the table for the first i + 1
elements is the table for the first i elements followed by the same table
with element i folded in) and walks the high bits block by block, so memory
stays bounded by ``settings.ORACLE_PARTITION_BITS``. Witness listing is a
plain loop over the counter applying ``satisfies`` to each subset, which is
the defining predicate written out directly.
"""

from functools import reduce
from typing import Dict, List, Optional, Sequence, Tuple
import math
import time

import numpy as np

from ..config import settings
from ..models import ElementSet, PredicateFamily, PredicateSpec, UniverseSpec
from ..utils.logger_config import get_logger
from .numtheory import DomainError, gcd_fold

logger = get_logger('oracle')

_INT64_LIMIT = 2**63


class OracleError(DomainError):
    """Universe or predicate the oracle refuses to enumerate"""


def _check_universe(universe: UniverseSpec, cap: Optional[int]) -> Tuple[int, ...]:
    cap = settings.ORACLE_CAP if cap is None else cap
    if universe.size > cap:
        raise OracleError(
            f"universe has {universe.size} elements, above the enumeration cap {cap}",
            constraint=f"#universe <= {cap}",
        )
    elements = universe.elements.elements
    if elements and elements[-1] >= _INT64_LIMIT:
        raise OracleError("universe elements must stay below 2^63", constraint="element < 2^63")
    return elements


def _check_predicate(predicate: PredicateSpec) -> None:
    for name in ("n", "target_gcd"):
        value = getattr(predicate, name)
        if value is not None and value >= _INT64_LIMIT:
            raise OracleError(f"predicate {name}={value} must stay below 2^63", constraint=f"{name} < 2^63")


def _bits(values: Optional[ElementSet], elements: Sequence[int]) -> int:
    if values is None:
        return 0
    return sum(1 << i for i, element in enumerate(elements) if element in values)


def satisfies(subset: Sequence[int], predicate: PredicateSpec) -> bool:
    """The defining predicate, evaluated on one explicit subset"""
    if not subset:
        return False
    if predicate.cardinality is not None and len(subset) != predicate.cardinality:
        return False
    if gcd_fold(subset, predicate.n or 0) != predicate.target_gcd:
        return False
    members = set(subset)
    if predicate.family is PredicateFamily.CONTAINS_REQUIRED:
        return set(predicate.required.elements) <= members
    if predicate.family is PredicateFamily.AVOIDS_FORBIDDEN:
        return members.isdisjoint(predicate.forbidden.elements)
    if predicate.family is PredicateFamily.MEETS_REQUIRED:
        return not members.isdisjoint(predicate.required.elements)
    return True


def _subset_tables(elements: Sequence[int], seed: int) -> Tuple[np.ndarray, np.ndarray]:
    """gcd (folded with seed) and cardinality of every subset, indexed by mask"""
    gcds = np.empty(1 << len(elements), dtype=np.int64)
    sizes = np.zeros(1 << len(elements), dtype=np.int64)
    gcds[0] = seed
    for i, element in enumerate(elements):
        half = 1 << i
        gcds[half:2 * half] = np.gcd(gcds[:half], element)
        sizes[half:2 * half] = sizes[:half] + 1
    return gcds, sizes


def enumerate_profile(
    universe: UniverseSpec,
    predicate: PredicateSpec,
    cap: Optional[int] = None,
) -> Dict[int, int]:
    """
    Count qualifying nonempty subsets by cardinality.

    Returns:
        Mapping #X -> number of qualifying X, zero entries omitted
    """
    elements = _check_universe(universe, cap)
    _check_predicate(predicate)
    start_time = time.perf_counter()
    family = predicate.family

    if family is PredicateFamily.CONTAINS_REQUIRED and \
            not set(predicate.required.elements) <= set(elements):
        return {}

    low_bits = min(len(elements), settings.ORACLE_PARTITION_BITS)
    low, high = elements[:low_bits], elements[low_bits:]
    low_gcd, low_size = _subset_tables(low, predicate.n or 0)
    low_masks = np.arange(1 << low_bits, dtype=np.int64)
    low_limit = (1 << low_bits) - 1

    required = _bits(predicate.required, elements)
    forbidden = _bits(predicate.forbidden, elements)
    required_low, required_high = required & low_limit, required >> low_bits
    forbidden_low, forbidden_high = forbidden & low_limit, forbidden >> low_bits

    # structural masks over the low block do not depend on the high block
    if family is PredicateFamily.CONTAINS_REQUIRED:
        low_structure = (low_masks & required_low) == required_low
    elif family is PredicateFamily.AVOIDS_FORBIDDEN:
        low_structure = (low_masks & forbidden_low) == 0
    elif family is PredicateFamily.MEETS_REQUIRED:
        low_structure = (low_masks & required_low) != 0
    else:
        low_structure = np.ones(1 << low_bits, dtype=bool)

    counts = np.zeros(len(elements) + 1, dtype=np.int64)
    for high_mask in range(1 << len(high)):
        if family is PredicateFamily.CONTAINS_REQUIRED and high_mask & required_high != required_high:
            continue
        if family is PredicateFamily.AVOIDS_FORBIDDEN and high_mask & forbidden_high:
            continue

        members = [element for i, element in enumerate(high) if high_mask >> i & 1]
        ok = np.gcd(low_gcd, reduce(math.gcd, members, 0)) == predicate.target_gcd
        if family is PredicateFamily.MEETS_REQUIRED:
            if not high_mask & required_high:
                ok &= low_structure
        else:
            ok &= low_structure

        sizes = low_size + len(members)
        if predicate.cardinality is not None:
            ok &= sizes == predicate.cardinality
        if high_mask == 0:
            ok[0] = False
        counts += np.bincount(sizes[ok], minlength=len(elements) + 1)

    duration = (time.perf_counter() - start_time) * 1000
    logger.debug(f"Enumerated 2^{len(elements)} subsets for {family.value} in {duration:.2f}ms")
    return {size: int(count) for size, count in enumerate(counts.tolist()) if count}


def enumerate_count(
    universe: UniverseSpec,
    predicate: PredicateSpec,
    cap: Optional[int] = None,
) -> int:
    """Exact number of nonempty subsets of the universe satisfying the predicate"""
    return sum(enumerate_profile(universe, predicate, cap).values())


def enumerate_witnesses(
    universe: UniverseSpec,
    predicate: PredicateSpec,
    limit: int,
    cap: Optional[int] = None,
) -> List[ElementSet]:
    """
    Up to ``limit`` qualifying subsets in binary-counter order.

    Raises:
        OracleError: if limit is not positive or the universe is oversize
    """
    if limit < 1:
        raise OracleError(f"witness limit must be positive, got {limit}", constraint="limit >= 1")
    elements = _check_universe(universe, cap)

    witnesses: List[ElementSet] = []
    for mask in range(1, 1 << len(elements)):
        subset = tuple(element for i, element in enumerate(elements) if mask >> i & 1)
        if satisfies(subset, predicate):
            witnesses.append(ElementSet(elements=subset))
            if len(witnesses) == limit:
                break
    return witnesses
