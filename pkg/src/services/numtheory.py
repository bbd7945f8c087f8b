"""
Exact integer primitives.

Factorization is deterministic trial division, which is all the divisor sums
need: every formula in the counting service is indexed by the divisors of a
modulus, and moduli are capped at ``settings.MAX_MODULUS``.
"""

from dataclasses import dataclass
from functools import lru_cache, reduce
from typing import Dict, Iterable, Iterator, Optional, Tuple
import logging
import math

import numpy as np

from ..config import settings

logger = logging.getLogger(__name__)


class DomainError(ValueError):
    """Invalid argument to an arithmetic primitive"""
    def __init__(self, message: str, constraint: Optional[str] = None):
        self.message = message
        self.constraint = constraint
        super().__init__(self.message)


@dataclass(frozen=True)
class DivisorList:
    """Sorted positive divisors of ``modulus``"""
    modulus: int
    divisors: Tuple[int, ...]

    def __iter__(self) -> Iterator[int]:
        return iter(self.divisors)

    def __len__(self) -> int:
        return len(self.divisors)

    def __contains__(self, value: object) -> bool:
        return value in self.divisors


def _require_positive(n: int, name: str = "n") -> None:
    if n < 1:
        raise DomainError(f"{name} must be a positive integer, got {n}", constraint=f"{name} >= 1")


def factorize(n: int) -> Dict[int, int]:
    """
    Prime factorization by trial division.

    Returns:
        Mapping prime -> exponent in increasing prime order; empty for n = 1
    """
    return dict(_prime_powers(n))


@lru_cache(maxsize=4096)
def _prime_powers(n: int) -> Tuple[Tuple[int, int], ...]:
    _require_positive(n)
    if n > settings.MAX_MODULUS:
        raise DomainError(
            f"modulus {n} exceeds the supported maximum {settings.MAX_MODULUS}",
            constraint=f"n <= {settings.MAX_MODULUS}",
        )

    factors: Dict[int, int] = {}
    remaining = n
    for prime in (2, 3):
        while remaining % prime == 0:
            factors[prime] = factors.get(prime, 0) + 1
            remaining //= prime

    # candidates 6k - 1 and 6k + 1
    candidate = 5
    while candidate * candidate <= remaining:
        for prime in (candidate, candidate + 2):
            while remaining % prime == 0:
                factors[prime] = factors.get(prime, 0) + 1
                remaining //= prime
        candidate += 6
    if remaining > 1:
        factors[remaining] = factors.get(remaining, 0) + 1
    return tuple(factors.items())


def mobius(n: int) -> int:
    """Möbius function: 0 on non-squarefree n, else (-1)^(number of prime factors)"""
    factors = factorize(n)
    if any(exponent > 1 for exponent in factors.values()):
        return 0
    return -1 if len(factors) % 2 else 1


def radical(n: int) -> int:
    """Product of the distinct primes dividing n"""
    return math.prod(factorize(n))


@lru_cache(maxsize=8)
def mobius_sieve(limit: int) -> Tuple[int, ...]:
    """
    Möbius values for 1..limit in one pass.

    Args:
        limit: Largest argument to tabulate

    Returns:
        Immutable tuple; position i - 1 holds mobius(i)
    """
    _require_positive(limit, "limit")
    if limit > settings.SIEVE_LIMIT_CAP:
        raise DomainError(
            f"sieve limit {limit} exceeds the configured cap {settings.SIEVE_LIMIT_CAP}",
            constraint=f"limit <= {settings.SIEVE_LIMIT_CAP}",
        )

    is_prime = np.ones(limit + 1, dtype=bool)
    is_prime[:2] = False
    for i in range(2, math.isqrt(limit) + 1):
        if is_prime[i]:
            is_prime[i * i::i] = False

    mu = np.ones(limit + 1, dtype=np.int8)
    for prime in np.nonzero(is_prime)[0].tolist():
        mu[prime::prime] *= -1
        square = prime * prime
        if square <= limit:
            mu[square::square] = 0

    logger.debug(f"Möbius sieve built up to {limit}")
    return tuple(mu[1:].tolist())


@lru_cache(maxsize=4096)
def divisors(n: int) -> DivisorList:
    """All positive divisors of n in increasing order"""
    result = [1]
    for prime, exponent in factorize(n).items():
        powers = [prime ** i for i in range(1, exponent + 1)]
        result += [divisor * power for divisor in result for power in powers]
    return DivisorList(modulus=n, divisors=tuple(sorted(result)))


@lru_cache(maxsize=4096)
def squarefree_divisors(n: int) -> DivisorList:
    """Divisors d of n with mobius(d) != 0, i.e. the divisors of radical(n)"""
    result = [1]
    for prime in factorize(n):
        result += [divisor * prime for divisor in result]
    return DivisorList(modulus=n, divisors=tuple(sorted(result)))


def gcd_fold(values: Iterable[int], seed: int = 0) -> int:
    """
    gcd of ``values`` together with ``seed``; a zero seed contributes nothing.

    Raises:
        DomainError: if the result would be the undefined gcd of nothing
    """
    if seed < 0:
        raise DomainError(f"seed must be nonnegative, got {seed}", constraint="seed >= 0")
    result = reduce(math.gcd, values, seed)
    if result == 0:
        raise DomainError("gcd of an empty set is undefined", constraint="values nonempty or seed > 0")
    return result


def floor_div(a: int, d: int) -> int:
    """Exact floor of a / d"""
    if d < 1:
        raise DomainError(f"divisor must be positive, got {d}", constraint="d >= 1")
    if a < 0:
        raise DomainError(f"dividend must be nonnegative, got {a}", constraint="a >= 0")
    return a // d


def binomial(n: int, k: int) -> int:
    """Binomial coefficient, zero outside 0 <= k <= n"""
    if n < 0:
        raise DomainError(f"binomial top must be nonnegative, got {n}", constraint="n >= 0")
    if k < 0 or k > n:
        return 0
    return math.comb(n, k)


def binomial_range_sum(L: int, M: int, N: int) -> int:
    """
    Sum of binomial(j, L) for M <= j <= N, by the hockey-stick closed form
    binomial(N + 1, L + 1) - binomial(M, L + 1).
    """
    if not 0 <= L <= M <= N:
        raise DomainError(
            f"binomial range sum needs 0 <= L <= M <= N, got L={L}, M={M}, N={N}",
            constraint="0 <= L <= M <= N",
        )
    return binomial(N + 1, L + 1) - binomial(M, L + 1)
