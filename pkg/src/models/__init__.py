from pydantic import BaseModel, ConfigDict, Field, PositiveInt, computed_field, field_validator, model_validator
from typing import Any, Dict, Iterable, List, Optional, Tuple, Union
from enum import Enum


class MeetMode(str, Enum):
    """Readings of the meet-count sums over nonempty subsets of the meet set"""
    PAPER_LITERAL = "paper-literal"
    INCLUSION_EXCLUSION = "inclusion-exclusion"


class Family(str, Enum):
    """Counting families exposed on the command line"""
    PHI = "phi"
    PHI_K = "phi-k"
    F = "f"
    F_K = "f-k"
    PSI = "psi"
    PSI_K = "psi-k"
    PHI_UNION = "phi-union"
    PHI_K_UNION = "phi-k-union"
    EPS = "eps"
    EPS_K = "eps-k"
    SUPERSET_PHI = "superset-phi"
    SUPERSET_PHI_K = "superset-phi-k"
    SUPERSET_F = "superset-f"
    SUPERSET_F_K = "superset-f-k"
    MEET_PHI = "meet-phi"
    MEET_PHI_K = "meet-phi-k"
    MEET_F = "meet-f"
    MEET_F_K = "meet-f-k"

    @property
    def is_meet(self) -> bool:
        return self.value.startswith("meet-")


# Parameter names per family, in table/column order
FAMILY_PARAMETERS: Dict[Family, Tuple[str, ...]] = {
    Family.PHI: ("l", "m", "n"),
    Family.PHI_K: ("l", "m", "k", "n"),
    Family.F: ("l", "m"),
    Family.F_K: ("l", "m", "k"),
    Family.PSI: ("m1", "l2", "m2", "n"),
    Family.PSI_K: ("m1", "l2", "m2", "k", "n"),
    Family.PHI_UNION: ("m1", "l2", "m2", "n"),
    Family.PHI_K_UNION: ("m1", "l2", "m2", "k", "n"),
    Family.EPS: ("l", "m", "n"),
    Family.EPS_K: ("l", "m", "k", "n"),
    Family.SUPERSET_PHI: ("base", "l", "m", "n"),
    Family.SUPERSET_PHI_K: ("base", "l", "m", "k", "n"),
    Family.SUPERSET_F: ("base", "l", "m"),
    Family.SUPERSET_F_K: ("base", "l", "m", "k"),
    Family.MEET_PHI: ("meet", "l", "m", "n"),
    Family.MEET_PHI_K: ("meet", "l", "m", "k", "n"),
    Family.MEET_F: ("meet", "l", "m"),
    Family.MEET_F_K: ("meet", "l", "m", "k"),
}

SET_PARAMETERS = ("base", "meet")


class PredicateFamily(str, Enum):
    """Defining predicates the oracle can evaluate"""
    SUBSET_COPRIME_TO_N = "subset-coprime-to-n"
    SUBSET_GCD_ONE = "subset-gcd-one"
    CONTAINS_REQUIRED = "contains-required"
    AVOIDS_FORBIDDEN = "avoids-forbidden"
    MEETS_REQUIRED = "meets-required"


class OutputFormat(str, Enum):
    PLAIN = "plain"
    CSV = "csv"
    JSON = "json"


class Interval(BaseModel):
    """The integer range [l, m]"""
    model_config = ConfigDict(frozen=True)

    l: PositiveInt = Field(..., description="Smallest element")
    m: PositiveInt = Field(..., description="Largest element")

    @model_validator(mode="after")
    def validate_order(self):
        if self.l > self.m:
            raise ValueError(f"interval needs l <= m, got l={self.l}, m={self.m}")
        return self

    @property
    def size(self) -> int:
        return self.m - self.l + 1

    def multiples(self, d: int) -> int:
        """Number of multiples of d inside the interval"""
        return self.m // d - (self.l - 1) // d

    def elements(self) -> Tuple[int, ...]:
        return tuple(range(self.l, self.m + 1))

    def __contains__(self, value: object) -> bool:
        return isinstance(value, int) and self.l <= value <= self.m


class SplitUnion(BaseModel):
    """The two-piece universe [1, m1] u [l2, m2] with a gap between the pieces"""
    model_config = ConfigDict(frozen=True)

    m1: PositiveInt = Field(..., description="End of the leading piece [1, m1]")
    l2: PositiveInt = Field(..., description="Start of the trailing piece")
    m2: PositiveInt = Field(..., description="End of the trailing piece")

    @model_validator(mode="after")
    def validate_pieces(self):
        if not self.m1 < self.l2 <= self.m2:
            raise ValueError(
                f"split union needs 1 <= m1 < l2 <= m2, got m1={self.m1}, l2={self.l2}, m2={self.m2}"
            )
        return self

    @property
    def size(self) -> int:
        return self.m1 + self.m2 - self.l2 + 1

    def elements(self) -> Tuple[int, ...]:
        return tuple(range(1, self.m1 + 1)) + tuple(range(self.l2, self.m2 + 1))


class ElementSet(BaseModel):
    """A finite set of positive integers, stored strictly increasing"""
    model_config = ConfigDict(frozen=True)

    elements: Tuple[PositiveInt, ...] = Field(default=(), description="Strictly increasing elements")

    @field_validator('elements')
    @classmethod
    def validate_increasing(cls, v):
        if any(a >= b for a, b in zip(v, v[1:])):
            raise ValueError('elements must be strictly increasing and duplicate-free')
        return v

    @classmethod
    def of(cls, values: Iterable[int]) -> "ElementSet":
        """Build from any iterable, sorting and dropping duplicates"""
        return cls(elements=tuple(sorted(set(values))))

    def __len__(self) -> int:
        return len(self.elements)

    def __contains__(self, value: object) -> bool:
        return value in self.elements

    def within(self, interval: Interval) -> bool:
        return all(element in interval for element in self.elements)


class UniverseSpec(BaseModel):
    """An explicit universe for the oracle"""
    model_config = ConfigDict(frozen=True)

    elements: ElementSet = Field(default_factory=ElementSet)

    @classmethod
    def from_interval(cls, interval: Interval) -> "UniverseSpec":
        return cls(elements=ElementSet(elements=interval.elements()))

    @classmethod
    def from_union(cls, union: SplitUnion) -> "UniverseSpec":
        return cls(elements=ElementSet(elements=union.elements()))

    @classmethod
    def of(cls, values: Iterable[int]) -> "UniverseSpec":
        return cls(elements=ElementSet.of(values))

    @property
    def size(self) -> int:
        return len(self.elements)


class PredicateSpec(BaseModel):
    """
    Defining predicate of a counting family.

    The gcd condition is gcd(X, n) == target_gcd when ``n`` is given and
    gcd(X) == target_gcd otherwise; the family adds the structural condition.
    """
    model_config = ConfigDict(frozen=True)

    family: PredicateFamily = Field(..., description="Structural condition")
    n: Optional[PositiveInt] = Field(None, description="Modulus for coprimality to n")
    required: Optional[ElementSet] = Field(None, description="Set X must contain or meet")
    forbidden: Optional[ElementSet] = Field(None, description="Set X must avoid")
    cardinality: Optional[PositiveInt] = Field(None, description="Fixed #X")
    target_gcd: PositiveInt = Field(default=1, description="Required gcd value")

    @model_validator(mode="after")
    def validate_family_fields(self):
        if self.family is PredicateFamily.SUBSET_COPRIME_TO_N and self.n is None:
            raise ValueError("subset-coprime-to-n needs n")
        if self.family is PredicateFamily.SUBSET_GCD_ONE and self.n is not None:
            raise ValueError("subset-gcd-one takes no n")
        if self.family in (PredicateFamily.CONTAINS_REQUIRED, PredicateFamily.MEETS_REQUIRED) \
                and self.required is None:
            raise ValueError(f"{self.family.value} needs a required set")
        if self.family is PredicateFamily.AVOIDS_FORBIDDEN and self.forbidden is None:
            raise ValueError("avoids-forbidden needs a forbidden set")
        return self


ParameterValue = Union[int, ElementSet]


class EvalRequest(BaseModel):
    """One evaluation of a counting family"""
    model_config = ConfigDict(frozen=True)

    family: Family = Field(..., description="Counting family")
    parameters: Dict[str, ParameterValue] = Field(default_factory=dict, description="Named parameters")
    mode: Optional[MeetMode] = Field(None, description="Reading of the meet sums")

    @model_validator(mode="after")
    def validate_parameters(self):
        expected = FAMILY_PARAMETERS[self.family]
        missing = [name for name in expected if name not in self.parameters]
        if missing:
            raise ValueError(f"{self.family.value} needs parameters: {', '.join(missing)}")
        unexpected = sorted(set(self.parameters) - set(expected))
        if unexpected:
            raise ValueError(f"{self.family.value} does not take: {', '.join(unexpected)}")
        for name in expected:
            value = self.parameters[name]
            is_set = name in SET_PARAMETERS
            if is_set != isinstance(value, ElementSet):
                kind = "an element set" if is_set else "an integer"
                raise ValueError(f"parameter {name} must be {kind}")
        if self.mode is not None and not self.family.is_meet:
            raise ValueError(f"{self.family.value} takes no mode")
        return self


class Mismatch(BaseModel):
    """A parameter tuple on which the formula and the oracle disagree"""
    parameters: Dict[str, Any] = Field(..., description="Parameters of the case")
    formula: int = Field(..., description="Closed-form value")
    oracle: int = Field(..., description="Enumerated value")
    witnesses: List[List[int]] = Field(default=[], description="Qualifying sets from the oracle")
    note: Optional[str] = Field(None, description="Explanation of the discrepancy")


class CheckReport(BaseModel):
    """Outcome of a formula-vs-oracle run"""
    family: Family = Field(..., description="Checked family")
    mode: Optional[MeetMode] = Field(None, description="Reading of the meet sums")
    grid: str = Field(..., description="Description of the grid or sample")
    cases: int = Field(..., description="Number of cases run")
    mismatches: List[Mismatch] = Field(default=[], description="Disagreements")
    elapsed: float = Field(default=0.0, exclude=True, description="Wall time in seconds")

    @computed_field
    @property
    def ok(self) -> bool:
        return not self.mismatches


class BenchReport(BaseModel):
    """Closed form vs enumeration timings for one parameter point"""
    family: Family = Field(..., description="Benchmarked family")
    parameters: Dict[str, Any] = Field(..., description="Parameter point")
    repetitions: int = Field(..., description="Timed repetitions per leg")
    count: str = Field(..., description="Closed-form count as a decimal string")
    closed_form_seconds: float = Field(..., description="Mean closed-form wall time")
    universe_size: int = Field(..., description="Elements the oracle would enumerate")
    oracle_seconds: Optional[float] = Field(None, description="Mean oracle wall time")
    oracle_count: Optional[str] = Field(None, description="Oracle count as a decimal string")
    counts_agree: Optional[bool] = Field(None, description="Closed form equals oracle")
    speedup: Optional[float] = Field(None, description="oracle_seconds / closed_form_seconds")
    note: Optional[str] = Field(None, description="Why the oracle leg was skipped")
