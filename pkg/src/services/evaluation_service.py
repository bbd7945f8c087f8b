"""
Family registry shared by the eval, table, check and bench commands.

Maps each counting family to its closed form and to the oracle query that
states the same count by definition.
"""

from typing import Any, Callable, Dict, Mapping, Optional, Tuple
import time

from ..models import (
    FAMILY_PARAMETERS,
    ElementSet,
    EvalRequest,
    Family,
    Interval,
    MeetMode,
    PredicateFamily,
    PredicateSpec,
    SplitUnion,
    UniverseSpec,
)
from ..utils.logger_config import log_formula_call
from . import counting_service as counting
from .counting_service import Evaluation

Parameters = Mapping[str, Any]


def _interval(p: Parameters) -> Interval:
    return Interval(l=p["l"], m=p["m"])


def _union(p: Parameters) -> SplitUnion:
    return SplitUnion(m1=p["m1"], l2=p["l2"], m2=p["m2"])


_EVALUATORS: Dict[Family, Callable[[Parameters, Optional[MeetMode]], Evaluation]] = {
    Family.PHI: lambda p, mode: counting.phi_interval_detail(_interval(p), p["n"]),
    Family.PHI_K: lambda p, mode: counting.phi_k_interval_detail(_interval(p), p["k"], p["n"]),
    Family.F: lambda p, mode: counting.f_interval_detail(_interval(p)),
    Family.F_K: lambda p, mode: counting.f_k_interval_detail(_interval(p), p["k"]),
    Family.PSI: lambda p, mode: counting.psi_detail(_union(p), p["n"]),
    Family.PSI_K: lambda p, mode: counting.psi_k_detail(_union(p), p["k"], p["n"]),
    Family.PHI_UNION: lambda p, mode: counting.phi_union_detail(_union(p), p["n"]),
    Family.PHI_K_UNION: lambda p, mode: counting.phi_k_union_detail(_union(p), p["k"], p["n"]),
    Family.EPS: lambda p, mode: counting.epsilon_interval_detail(_interval(p), p["n"]),
    Family.EPS_K: lambda p, mode: counting.epsilon_k_interval_detail(_interval(p), p["k"], p["n"]),
    Family.SUPERSET_PHI: lambda p, mode: counting.superset_phi_detail(p["base"], _interval(p), p["n"]),
    Family.SUPERSET_PHI_K: lambda p, mode: counting.superset_phi_k_detail(p["base"], _interval(p), p["k"], p["n"]),
    Family.SUPERSET_F: lambda p, mode: counting.superset_f_detail(p["base"], _interval(p)),
    Family.SUPERSET_F_K: lambda p, mode: counting.superset_f_k_detail(p["base"], _interval(p), p["k"]),
    Family.MEET_PHI: lambda p, mode: counting.meet_phi_detail(p["meet"], _interval(p), p["n"], mode),
    Family.MEET_PHI_K: lambda p, mode: counting.meet_phi_k_detail(p["meet"], _interval(p), p["k"], p["n"], mode),
    Family.MEET_F: lambda p, mode: counting.meet_f_detail(p["meet"], _interval(p), mode),
    Family.MEET_F_K: lambda p, mode: counting.meet_f_k_detail(p["meet"], _interval(p), p["k"], mode),
}


def build_request(family: Family, parameters: Parameters, mode: Optional[MeetMode] = None) -> EvalRequest:
    """Validated request; raises pydantic.ValidationError naming the problem"""
    return EvalRequest(family=family, parameters=dict(parameters), mode=mode)


def evaluate(request: EvalRequest) -> Evaluation:
    """Closed-form evaluation of a request"""
    start_time = time.perf_counter()
    evaluation = _EVALUATORS[request.family](request.parameters, request.mode)
    duration = (time.perf_counter() - start_time) * 1000
    log_formula_call('counting', request.family.value, duration)
    return evaluation


def oracle_query(request: EvalRequest) -> Tuple[UniverseSpec, PredicateSpec]:
    """The universe and defining predicate whose enumeration equals the request's count"""
    family, p = request.family, request.parameters
    k = p.get("k")
    n = p.get("n")

    if family in (Family.PHI, Family.PHI_K):
        return UniverseSpec.from_interval(_interval(p)), PredicateSpec(
            family=PredicateFamily.SUBSET_COPRIME_TO_N, n=n, cardinality=k)
    if family in (Family.F, Family.F_K):
        return UniverseSpec.from_interval(_interval(p)), PredicateSpec(
            family=PredicateFamily.SUBSET_GCD_ONE, cardinality=k)
    if family in (Family.PSI, Family.PSI_K):
        return UniverseSpec.from_union(_union(p)), PredicateSpec(
            family=PredicateFamily.CONTAINS_REQUIRED, n=n,
            required=ElementSet(elements=(p["l2"],)), cardinality=k)
    if family in (Family.PHI_UNION, Family.PHI_K_UNION):
        return UniverseSpec.from_union(_union(p)), PredicateSpec(
            family=PredicateFamily.SUBSET_COPRIME_TO_N, n=n, cardinality=k)
    if family in (Family.EPS, Family.EPS_K):
        return UniverseSpec.from_interval(Interval(l=1, m=n)), PredicateSpec(
            family=PredicateFamily.AVOIDS_FORBIDDEN, n=n,
            forbidden=ElementSet(elements=_interval(p).elements()), cardinality=k)
    if family in (Family.SUPERSET_PHI, Family.SUPERSET_PHI_K, Family.SUPERSET_F, Family.SUPERSET_F_K):
        return UniverseSpec.from_interval(_interval(p)), PredicateSpec(
            family=PredicateFamily.CONTAINS_REQUIRED, n=n, required=p["base"], cardinality=k)
    return UniverseSpec.from_interval(_interval(p)), PredicateSpec(
        family=PredicateFamily.MEETS_REQUIRED, n=n, required=p["meet"], cardinality=k)


def universe_size(request: EvalRequest) -> int:
    """Number of elements the oracle would enumerate, without materializing them"""
    family, p = request.family, request.parameters
    if family in (Family.PSI, Family.PSI_K, Family.PHI_UNION, Family.PHI_K_UNION):
        return _union(p).size
    if family in (Family.EPS, Family.EPS_K):
        return p["n"]
    return _interval(p).size


def parameter_names(family: Family) -> Tuple[str, ...]:
    return FAMILY_PARAMETERS[family]


def plain_parameters(request: EvalRequest) -> Dict[str, Any]:
    """Parameters in column order with element sets as lists of ints"""
    return {
        name: list(value.elements) if isinstance(value, ElementSet) else value
        for name, value in ((name, request.parameters[name]) for name in parameter_names(request.family))
    }


def decimal_string(count: int) -> str:
    """Exact decimal rendering of a count"""
    return str(count)
