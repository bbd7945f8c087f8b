"""
Brute-force oracle: reference counts, witness order and consistency with
a direct subset loop.
"""

from concurrent.futures import ThreadPoolExecutor
from itertools import combinations

import pytest
from hypothesis import given, strategies as st

from src.config import settings
from src.models import ElementSet, PredicateFamily, PredicateSpec, UniverseSpec
from src.services.oracle_service import (
    OracleError,
    enumerate_count,
    enumerate_profile,
    enumerate_witnesses,
    satisfies,
)

COPRIME = PredicateFamily.SUBSET_COPRIME_TO_N
GCD_ONE = PredicateFamily.SUBSET_GCD_ONE


def universe(*elements):
    return UniverseSpec.of(elements)


def es(*elements):
    return ElementSet.of(elements)


def brute_force(elements, predicate):
    """Count by listing every nonempty subset"""
    return sum(
        1
        for size in range(1, len(elements) + 1)
        for subset in combinations(elements, size)
        if satisfies(subset, predicate)
    )


predicates = st.one_of(
    st.builds(PredicateSpec, family=st.just(COPRIME), n=st.integers(1, 60)),
    st.builds(PredicateSpec, family=st.just(GCD_ONE)),
    st.builds(
        PredicateSpec,
        family=st.sampled_from([PredicateFamily.CONTAINS_REQUIRED, PredicateFamily.MEETS_REQUIRED]),
        n=st.none() | st.integers(1, 30),
        required=st.sets(st.integers(1, 30), max_size=3).map(ElementSet.of),
        cardinality=st.none() | st.integers(1, 6),
    ),
    st.builds(
        PredicateSpec,
        family=st.just(PredicateFamily.AVOIDS_FORBIDDEN),
        n=st.none() | st.integers(1, 30),
        forbidden=st.sets(st.integers(1, 30), max_size=4).map(ElementSet.of),
        cardinality=st.none() | st.integers(1, 6),
    ),
)
universes = st.sets(st.integers(1, 30), max_size=10).map(UniverseSpec.of)


def test_enumerate_count_examples():
    assert enumerate_count(universe(1, 2, 3), PredicateSpec(family=COPRIME, n=3)) == 6
    assert enumerate_count(universe(2, 4, 6), PredicateSpec(family=GCD_ONE)) == 0
    assert enumerate_count(universe(1), PredicateSpec(family=GCD_ONE)) == 1


def test_witness_examples():
    assert enumerate_witnesses(universe(2, 3, 4), PredicateSpec(family=COPRIME, n=2), 2) == [es(3), es(2, 3)]
    assert enumerate_witnesses(universe(2), PredicateSpec(family=GCD_ONE), 10) == []
    meets_one = PredicateSpec(family=PredicateFamily.MEETS_REQUIRED, required=es(1))
    assert enumerate_witnesses(universe(1, 2), meets_one, 10) == [es(1), es(1, 2)]


def test_empty_universe_counts_nothing():
    assert enumerate_count(UniverseSpec(), PredicateSpec(family=COPRIME, n=1)) == 0


def test_unit_modulus_excludes_the_empty_set():
    assert enumerate_count(universe(4, 6), PredicateSpec(family=COPRIME, n=1)) == 3


def test_missing_required_element_means_no_superset():
    predicate = PredicateSpec(family=PredicateFamily.CONTAINS_REQUIRED, required=es(9))
    assert enumerate_count(universe(1, 2, 3), predicate) == 0
    assert enumerate_witnesses(universe(1, 2, 3), predicate, 5) == []


def test_profile_keys_are_cardinalities():
    profile = enumerate_profile(universe(1, 2, 3, 4), PredicateSpec(family=COPRIME, n=2))
    # X must contain 1 or 3
    assert profile == {1: 2, 2: 5, 3: 4, 4: 1}


@given(universes, predicates)
def test_count_matches_direct_subset_loop(universe_spec, predicate):
    assert enumerate_count(universe_spec, predicate) == brute_force(universe_spec.elements.elements, predicate)


@given(universes, predicates)
def test_count_equals_number_of_witnesses(universe_spec, predicate):
    everything = enumerate_witnesses(universe_spec, predicate, 1 << universe_spec.size)
    assert enumerate_count(universe_spec, predicate) == len(everything)
    assert all(satisfies(w.elements, predicate) for w in everything)


def test_witnesses_follow_binary_counter_order():
    elements = (2, 3, 5, 7)
    witnesses = enumerate_witnesses(universe(*elements), PredicateSpec(family=GCD_ONE), 100)
    masks = [sum(1 << elements.index(x) for x in w.elements) for w in witnesses]
    assert masks == sorted(masks)


def test_partitioned_enumeration_matches_single_block(monkeypatch):
    universe_spec = universe(*range(2, 16))
    predicate = PredicateSpec(family=PredicateFamily.MEETS_REQUIRED, n=30, required=es(3, 10, 14))
    whole = enumerate_profile(universe_spec, predicate)
    monkeypatch.setattr(settings, "ORACLE_PARTITION_BITS", 4)
    assert enumerate_profile(universe_spec, predicate) == whole


@pytest.mark.parametrize("c", [2, 3])
@given(st.sets(st.integers(1, 25), min_size=1, max_size=10), st.integers(1, 30))
def test_scaling_bijection(c, elements, n):
    # X <-> X / c between subsets of c*U with gcd(X, c*n) = c and subsets of U coprime to n
    scaled = UniverseSpec.of(c * x for x in elements)
    scaled_predicate = PredicateSpec(family=COPRIME, n=c * n, target_gcd=c)
    assert enumerate_count(scaled, scaled_predicate) == \
        enumerate_count(UniverseSpec.of(elements), PredicateSpec(family=COPRIME, n=n))


def test_oracle_is_deterministic_across_threads():
    universe_spec = universe(*range(1, 15))
    predicate = PredicateSpec(family=COPRIME, n=30)
    with ThreadPoolExecutor(max_workers=4) as executor:
        counts = list(executor.map(lambda _: enumerate_count(universe_spec, predicate), range(8)))
    assert len(set(counts)) == 1
    assert enumerate_witnesses(universe_spec, predicate, 7) == enumerate_witnesses(universe_spec, predicate, 7)


def test_oversize_universe_is_rejected():
    with pytest.raises(OracleError):
        enumerate_count(universe(*range(1, 26)), PredicateSpec(family=GCD_ONE))
    with pytest.raises(OracleError):
        enumerate_count(universe(*range(1, 6)), PredicateSpec(family=GCD_ONE), cap=4)


def test_witness_limit_must_be_positive():
    with pytest.raises(OracleError):
        enumerate_witnesses(universe(1, 2), PredicateSpec(family=GCD_ONE), 0)


def test_malformed_predicates_are_rejected():
    with pytest.raises(ValueError):
        PredicateSpec(family=COPRIME)
    with pytest.raises(ValueError):
        PredicateSpec(family=GCD_ONE, n=4)
    with pytest.raises(ValueError):
        PredicateSpec(family=PredicateFamily.CONTAINS_REQUIRED)
    with pytest.raises(ValueError):
        PredicateSpec(family=PredicateFamily.AVOIDS_FORBIDDEN, n=3)


def test_full_cap_universe_is_enumerated():
    count = enumerate_count(universe(*range(1, 25)), PredicateSpec(family=COPRIME, n=2))
    # some odd element among the twelve, any choice of the even ones
    assert count == (2**12 - 1) * 2**12


def test_oversize_modulus_is_rejected():
    with pytest.raises(OracleError):
        enumerate_count(universe(1, 2, 3), PredicateSpec(family=COPRIME, n=2**64))
    with pytest.raises(OracleError):
        enumerate_profile(universe(2, 4), PredicateSpec(family=GCD_ONE, target_gcd=2**63))
