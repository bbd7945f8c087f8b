"""
Closed-form counts of relatively prime subsets and supersets.

Every family is a Möbius-weighted divisor sum. Each operation ``name(...)``
returns the count; its companion ``name_detail(...)`` returns an
``Evaluation`` with the divisor-by-divisor terms, the raw sum and the
empty-set correction that turns the raw sum into the count.

Conventions shared by all families:

* n = 1 correction: for the unconstrained Phi counts the divisor sum also
  counts the empty set (gcd({1}) = 1), so one is subtracted exactly when
  n = 1. Families whose sets contain a fixed element need no correction.
* binomial(a, b) is zero when b > a, which makes the fixed-cardinality sums
  uniform across divisors.
"""

from dataclasses import dataclass, field
from itertools import combinations
from typing import Callable, List, Optional, Sequence, Tuple, Union
import math

from ..config import settings
from ..models import ElementSet, Interval, MeetMode, SplitUnion
from ..utils.logger_config import get_logger
from .numtheory import (
    DomainError,
    binomial,
    divisors,
    gcd_fold,
    mobius,
    mobius_sieve,
    squarefree_divisors,
)

logger = get_logger('counting')


class PreconditionError(DomainError):
    """A counting formula was called outside its stated domain"""


class FormulaInvariantError(RuntimeError):
    """Internal invariant of a divisor sum was violated"""
    def __init__(self, message: str, d: Optional[int] = None):
        self.message = message
        self.d = d
        super().__init__(self.message)


@dataclass(frozen=True)
class Term:
    """One summand mu(d) * 2^exponent or mu(d) * binomial(top, bottom)"""
    d: int
    mu: int
    value: int
    exponent: Optional[int] = None
    top: Optional[int] = None
    bottom: Optional[int] = None
    subset: Optional[Tuple[int, ...]] = None
    sign: int = 1


@dataclass(frozen=True)
class Evaluation:
    """Result of a closed form with its divisor-sum breakdown"""
    count: int
    raw_sum: int
    correction: int = 0
    terms: List[Term] = field(default_factory=list)


def _require_modulus(n: int) -> None:
    if n < 1:
        raise PreconditionError(f"modulus must be a positive integer, got {n}", constraint="n >= 1")


def _require_cardinality(k: int) -> None:
    if k < 1:
        raise PreconditionError(f"cardinality must be a positive integer, got {k}", constraint="k >= 1")


def _summation_index(g: int) -> Sequence[int]:
    """Divisors of g that a Möbius-weighted sum visits"""
    if settings.FULL_DIVISOR_SUMS:
        return divisors(g).divisors
    return squarefree_divisors(g).divisors


def _checked_exponent(exponent: int, d: int) -> int:
    if exponent < 0:
        raise FormulaInvariantError(f"negative exponent {exponent} for divisor {d}", d=d)
    return exponent


def _power_term(d: int, exponent: int) -> Term:
    mu = mobius(d)
    exponent = _checked_exponent(exponent, d)
    if mu == 0:
        return Term(d=d, mu=0, value=0, exponent=exponent)
    return Term(d=d, mu=mu, value=mu * (1 << exponent), exponent=exponent)


def _binomial_term(d: int, top: int, bottom: int) -> Term:
    mu = mobius(d)
    top = _checked_exponent(top, d)
    if mu == 0:
        return Term(d=d, mu=0, value=0, top=top, bottom=bottom)
    return Term(d=d, mu=mu, value=mu * binomial(top, bottom), top=top, bottom=bottom)


def _settle(terms: List[Term], correction: int = 0) -> Evaluation:
    # terms arrive with d increasing, i.e. magnitudes decreasing; adding the
    # small ones first keeps the running total short
    raw_sum = sum(term.value for term in reversed(terms))
    count = raw_sum - correction
    if count < 0:
        raise FormulaInvariantError(f"divisor sum produced a negative count {count}")
    return Evaluation(count=count, raw_sum=raw_sum, correction=correction, terms=terms)


def _empty_set_correction(n: int) -> int:
    return 1 if n == 1 else 0


def _require_subset(base: ElementSet, interval: Interval, name: str = "base") -> None:
    if not base.within(interval):
        raise PreconditionError(
            f"{name} {list(base.elements)} is not contained in [{interval.l},{interval.m}]",
            constraint=f"{name} subset of [l,m]",
        )


def phi_interval_detail(interval: Interval, n: int) -> Evaluation:
    """Nonempty X in [l, m] with gcd(X, n) = 1"""
    _require_modulus(n)
    terms = [_power_term(d, interval.multiples(d)) for d in _summation_index(n)]
    return _settle(terms, correction=_empty_set_correction(n))


def phi_interval(interval: Interval, n: int) -> int:
    return phi_interval_detail(interval, n).count


def phi_k_interval_detail(interval: Interval, k: int, n: int) -> Evaluation:
    """k-element X in [l, m] with gcd(X, n) = 1"""
    _require_modulus(n)
    _require_cardinality(k)
    terms = [_binomial_term(d, interval.multiples(d), k) for d in _summation_index(n)]
    return _settle(terms)


def phi_k_interval(interval: Interval, k: int, n: int) -> int:
    return phi_k_interval_detail(interval, k, n).count


def _mobius_up_to(m: int) -> Callable[[int], int]:
    table = mobius_sieve(m)
    return lambda d: table[d - 1]


def f_interval_detail(interval: Interval) -> Evaluation:
    """
    Nonempty X in [l, m] with gcd(X) = 1.

    gcd(X) is unconstrained, so the sum runs over every d <= m with mu(d)
    from the sieve; each d contributes mu(d) * (2^N_d - 1) where N_d counts
    the multiples of d in the interval.
    """
    mu_of = _mobius_up_to(interval.m)
    terms = []
    for d in range(1, interval.m + 1):
        mu = mu_of(d)
        if mu == 0 and not settings.FULL_DIVISOR_SUMS:
            continue
        exponent = interval.multiples(d)
        if exponent == 0:
            continue
        power = (1 << exponent) - 1
        terms.append(Term(d=d, mu=mu, value=mu * power, exponent=exponent))
    return _settle(terms)


def f_interval(interval: Interval) -> int:
    return f_interval_detail(interval).count


def f_k_interval_detail(interval: Interval, k: int) -> Evaluation:
    """k-element X in [l, m] with gcd(X) = 1"""
    _require_cardinality(k)
    mu_of = _mobius_up_to(interval.m)
    terms = []
    for d in range(1, interval.m + 1):
        mu = mu_of(d)
        if mu == 0 and not settings.FULL_DIVISOR_SUMS:
            continue
        top = interval.multiples(d)
        if top < k:
            continue
        terms.append(Term(d=d, mu=mu, value=mu * binomial(top, k), top=top, bottom=k))
    return _settle(terms)


def f_k_interval(interval: Interval, k: int) -> int:
    return f_k_interval_detail(interval, k).count


def _anchored_size(union: SplitUnion, d: int) -> int:
    # multiples of d in the union other than the anchor l2 (d divides l2)
    return union.m1 // d + union.m2 // d - union.l2 // d


def _union_multiples(union: SplitUnion, d: int) -> int:
    return union.m1 // d + union.m2 // d - (union.l2 - 1) // d


def psi_detail(union: SplitUnion, n: int) -> Evaluation:
    """X in the union containing l2 with gcd(X, n) = 1"""
    _require_modulus(n)
    terms = [
        _power_term(d, _anchored_size(union, d))
        for d in _summation_index(math.gcd(union.l2, n))
    ]
    return _settle(terms)


def psi(union: SplitUnion, n: int) -> int:
    return psi_detail(union, n).count


def psi_k_detail(union: SplitUnion, k: int, n: int) -> Evaluation:
    """k-element X in the union containing l2 with gcd(X, n) = 1"""
    _require_modulus(n)
    _require_cardinality(k)
    terms = [
        _binomial_term(d, _anchored_size(union, d), k - 1)
        for d in _summation_index(math.gcd(union.l2, n))
    ]
    return _settle(terms)


def psi_k(union: SplitUnion, k: int, n: int) -> int:
    return psi_k_detail(union, k, n).count


def phi_union_detail(union: SplitUnion, n: int) -> Evaluation:
    """Nonempty X in the union with gcd(X, n) = 1"""
    _require_modulus(n)
    terms = [_power_term(d, _union_multiples(union, d)) for d in _summation_index(n)]
    return _settle(terms, correction=_empty_set_correction(n))


def phi_union(union: SplitUnion, n: int) -> int:
    return phi_union_detail(union, n).count


def phi_k_union_detail(union: SplitUnion, k: int, n: int) -> Evaluation:
    """k-element X in the union with gcd(X, n) = 1"""
    _require_modulus(n)
    _require_cardinality(k)
    terms = [_binomial_term(d, _union_multiples(union, d), k) for d in _summation_index(n)]
    return _settle(terms)


def phi_k_union(union: SplitUnion, k: int, n: int) -> int:
    return phi_k_union_detail(union, k, n).count


def _complement_of_block(avoid: Interval, n: int) -> Union[Interval, SplitUnion]:
    """[1, n] minus [l, m] as a suffix interval or a split union"""
    _require_modulus(n)
    if avoid.m >= n:
        raise PreconditionError(
            f"avoided block [{avoid.l},{avoid.m}] must end below n={n}",
            constraint="l <= m < n",
        )
    if avoid.l == 1:
        return Interval(l=avoid.m + 1, m=n)
    return SplitUnion(m1=avoid.l - 1, l2=avoid.m + 1, m2=n)


def epsilon_interval_detail(avoid: Interval, n: int) -> Evaluation:
    """Nonempty X in [1, n] missing [l, m] with gcd(X, n) = 1"""
    rest = _complement_of_block(avoid, n)
    if isinstance(rest, Interval):
        return phi_interval_detail(rest, n)
    return phi_union_detail(rest, n)


def epsilon_interval(avoid: Interval, n: int) -> int:
    return epsilon_interval_detail(avoid, n).count


def epsilon_k_interval_detail(avoid: Interval, k: int, n: int) -> Evaluation:
    """k-element X in [1, n] missing [l, m] with gcd(X, n) = 1"""
    rest = _complement_of_block(avoid, n)
    if isinstance(rest, Interval):
        return phi_k_interval_detail(rest, k, n)
    return phi_k_union_detail(rest, k, n)


def epsilon_k_interval(avoid: Interval, k: int, n: int) -> int:
    return epsilon_k_interval_detail(avoid, k, n).count


def _superset_terms(base: ElementSet, interval: Interval, g: int, k: Optional[int] = None) -> List[Term]:
    """
    Terms over d | g where g is gcd(base) or gcd(base, n); base is nonempty.

    Every element of base is a multiple of d inside [l, m], hence the free
    part N_d - #base is never negative.
    """
    size = len(base)
    if k is None:
        return [_power_term(d, interval.multiples(d) - size) for d in _summation_index(g)]
    return [
        _binomial_term(d, interval.multiples(d) - size, k - size)
        for d in _summation_index(g)
    ]


def _require_window(base: ElementSet, interval: Interval, k: int) -> None:
    _require_cardinality(k)
    if not len(base) <= k <= interval.size:
        raise PreconditionError(
            f"k={k} outside [#base, m-l+1] = [{len(base)}, {interval.size}]",
            constraint="#base <= k <= m-l+1",
        )


def superset_phi_detail(base: ElementSet, interval: Interval, n: int) -> Evaluation:
    """Nonempty X with base in X in [l, m] and gcd(X, n) = 1"""
    _require_modulus(n)
    _require_subset(base, interval)
    if not len(base):
        return phi_interval_detail(interval, n)
    return _settle(_superset_terms(base, interval, gcd_fold(base.elements, n)))


def superset_phi(base: ElementSet, interval: Interval, n: int) -> int:
    return superset_phi_detail(base, interval, n).count


def superset_phi_k_detail(base: ElementSet, interval: Interval, k: int, n: int) -> Evaluation:
    """k-element X with base in X in [l, m] and gcd(X, n) = 1"""
    _require_modulus(n)
    _require_subset(base, interval)
    _require_window(base, interval, k)
    if not len(base):
        return phi_k_interval_detail(interval, k, n)
    return _settle(_superset_terms(base, interval, gcd_fold(base.elements, n), k))


def superset_phi_k(base: ElementSet, interval: Interval, k: int, n: int) -> int:
    return superset_phi_k_detail(base, interval, k, n).count


def superset_f_detail(base: ElementSet, interval: Interval) -> Evaluation:
    """Nonempty X with base in X in [l, m] and gcd(X) = 1"""
    _require_subset(base, interval)
    if not len(base):
        return f_interval_detail(interval)
    return _settle(_superset_terms(base, interval, gcd_fold(base.elements)))


def superset_f(base: ElementSet, interval: Interval) -> int:
    return superset_f_detail(base, interval).count


def superset_f_k_detail(base: ElementSet, interval: Interval, k: int) -> Evaluation:
    """k-element X with base in X in [l, m] and gcd(X) = 1"""
    _require_subset(base, interval)
    _require_window(base, interval, k)
    if not len(base):
        return f_k_interval_detail(interval, k)
    return _settle(_superset_terms(base, interval, gcd_fold(base.elements), k))


def superset_f_k(base: ElementSet, interval: Interval, k: int) -> int:
    return superset_f_k_detail(base, interval, k).count


def _resolve_mode(mode: Optional[MeetMode]) -> MeetMode:
    return MeetMode(mode or settings.DEFAULT_MEET_MODE)


def _meet_detail(
    meet: ElementSet,
    interval: Interval,
    mode: Optional[MeetMode],
    n: Optional[int] = None,
    k: Optional[int] = None,
) -> Evaluation:
    """
    Sum over nonempty X in meet of the superset counts for X.

    The printed sum adds every superset count once; inclusion-exclusion
    weights the count for X by (-1)^(#X+1), which is what counts each set
    meeting A exactly once. With k given only #X <= k contributes.
    """
    mode = _resolve_mode(mode)
    if n is not None:
        _require_modulus(n)
    if k is not None:
        _require_cardinality(k)
    _require_subset(meet, interval, name="meet")
    if len(meet) > settings.MEET_CAP:
        raise PreconditionError(
            f"meet set has {len(meet)} elements, above the cap {settings.MEET_CAP}",
            constraint=f"#meet <= {settings.MEET_CAP}",
        )
    if not len(meet):
        return Evaluation(count=0, raw_sum=0)

    largest = len(meet) if k is None else min(len(meet), k)
    logger.debug(f"Meet sum over subsets of {list(meet.elements)} up to size {largest}, mode={mode.value}")
    terms: List[Term] = []
    raw_sum = 0
    for size in range(1, largest + 1):
        sign = 1 if mode is MeetMode.PAPER_LITERAL or size % 2 else -1
        for subset in combinations(meet.elements, size):
            g = gcd_fold(subset, n or 0)
            part = _superset_terms(ElementSet(elements=subset), interval, g, k)
            raw_sum += sign * sum(term.value for term in part)
            terms.extend(
                Term(
                    d=term.d, mu=term.mu, value=sign * term.value,
                    exponent=term.exponent, top=term.top, bottom=term.bottom,
                    subset=subset, sign=sign,
                )
                for term in part
            )
    if raw_sum < 0:
        raise FormulaInvariantError(f"meet sum produced a negative count {raw_sum}")
    return Evaluation(count=raw_sum, raw_sum=raw_sum, terms=terms)


def meet_phi_detail(meet: ElementSet, interval: Interval, n: int, mode: Optional[MeetMode] = None) -> Evaluation:
    """X in [l, m] meeting A with gcd(X, n) = 1"""
    return _meet_detail(meet, interval, mode, n=n)


def meet_phi(meet: ElementSet, interval: Interval, n: int, mode: Optional[MeetMode] = None) -> int:
    return meet_phi_detail(meet, interval, n, mode).count


def meet_phi_k_detail(
    meet: ElementSet, interval: Interval, k: int, n: int, mode: Optional[MeetMode] = None
) -> Evaluation:
    """k-element X in [l, m] meeting A with gcd(X, n) = 1"""
    return _meet_detail(meet, interval, mode, n=n, k=k)


def meet_phi_k(meet: ElementSet, interval: Interval, k: int, n: int, mode: Optional[MeetMode] = None) -> int:
    return meet_phi_k_detail(meet, interval, k, n, mode).count


def meet_f_detail(meet: ElementSet, interval: Interval, mode: Optional[MeetMode] = None) -> Evaluation:
    """X in [l, m] meeting A with gcd(X) = 1"""
    return _meet_detail(meet, interval, mode)


def meet_f(meet: ElementSet, interval: Interval, mode: Optional[MeetMode] = None) -> int:
    return meet_f_detail(meet, interval, mode).count


def meet_f_k_detail(meet: ElementSet, interval: Interval, k: int, mode: Optional[MeetMode] = None) -> Evaluation:
    """k-element X in [l, m] meeting A with gcd(X) = 1"""
    return _meet_detail(meet, interval, mode, k=k)


def meet_f_k(meet: ElementSet, interval: Interval, k: int, mode: Optional[MeetMode] = None) -> int:
    return meet_f_k_detail(meet, interval, k, mode).count
