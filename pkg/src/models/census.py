"""
Census Models for ECFCensus
Validated queries and result rows of the counting experiments
"""
from fractions import Fraction
from typing import Any, Dict, Literal, Optional

from pydantic import BaseModel, ConfigDict, Field, field_validator, model_validator

from core.errors import InvalidQuery
from utils.parsing import format_rational, parse_optional_rational, parse_rational
from utils.modular import floor_frac


class CensusQuery(BaseModel):
    """
    Counting query for reduced quadratic irrationals of one kind

    beta1 = None means an infinite bound (only conj(omega) < 0 for E);
    B-kind queries use beta1 as their single beta.
    """

    model_config = ConfigDict(arbitrary_types_allowed=True, frozen=True)

    kind: Literal["E", "B"]
    alpha: Fraction
    beta1: Optional[Fraction] = Fraction(1)
    beta2: Fraction = Fraction(1)
    radius_bound: Fraction

    @field_validator("alpha", "beta2", "radius_bound", mode="before")
    @classmethod
    def _parse_exact(cls, value):
        return parse_rational(value)

    @field_validator("beta1", mode="before")
    @classmethod
    def _parse_beta1(cls, value):
        return parse_optional_rational(value)

    @model_validator(mode="after")
    def _check_hypotheses(self):
        if self.alpha < 1 or self.beta2 < 1 or (self.beta1 is not None and self.beta1 < 1):
            raise InvalidQuery("alpha, beta1 and beta2 must be >= 1")
        if self.radius_bound <= 1:
            raise InvalidQuery(f"radius bound must exceed 1, got {self.radius_bound}")
        if self.kind == "B" and self.beta1 is None:
            raise InvalidQuery("B-kind queries need a finite beta")
        if self.beta1 is not None and self.alpha * self.beta1 <= 1:
            raise InvalidQuery(f"(alpha, beta) = ({self.alpha}, {self.beta1}) is excluded: alpha*beta must exceed 1")
        return self

    @property
    def beta(self) -> Optional[Fraction]:
        return self.beta1

    @property
    def N(self) -> int:
        """Trace bound matching the radius bound"""
        return floor_frac(self.radius_bound)

    def describe(self) -> Dict[str, str]:
        return {
            "kind": self.kind,
            "alpha": format_rational(self.alpha),
            "beta1": format_rational(self.beta1),
            "beta2": format_rational(self.beta2) if self.kind == "E" else "",
            "radius_bound": format_rational(self.radius_bound),
        }


class CensusResult(BaseModel):
    """Exact count with its asymptotic main term"""

    kind: str
    alpha: str
    beta1: str = ""
    beta2: str = ""
    N: int
    method: Literal["congruence", "word_dfs", "reduced_dfs", "bruteforce"]
    exact_count: int = Field(ge=0)
    main_term: float
    relative_deviation: float
    tolerance: Optional[float] = None
    passed: Optional[bool] = None
    elapsed_ms: float = 0.0
    extra: Dict[str, Any] = Field(default_factory=dict)


class ExperimentConfig(BaseModel):
    """Validated command-line experiment description"""

    command: Literal["expand", "classify", "census", "verify", "totient", "kloosterman", "pell"]
    parameters: Dict[str, Any] = Field(default_factory=dict)
    output_path: Optional[str] = None
    format: Literal["csv", "json"] = "csv"
    threads: int = Field(default=1, ge=1)
    tolerance_override: Optional[float] = Field(default=None, gt=0)
    check: bool = False
