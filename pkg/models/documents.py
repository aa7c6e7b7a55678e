"""
JSON 문서 스키마 (pydantic)
"""

from fractions import Fraction
from typing import Dict, List, Union

from pydantic import BaseModel, ConfigDict, Field, StrictInt, field_validator

RationalValue = Union[StrictInt, str]


def parse_rational(value: RationalValue) -> Fraction:
    """정수 또는 "p/q" 문자열을 정확한 유리수로 변환"""
    if isinstance(value, bool):
        raise ValueError("booleans are not utilities")
    try:
        return Fraction(value)
    except (ValueError, ZeroDivisionError) as e:
        raise ValueError(f"not an exact rational: {value!r}") from e


class CategoryDocument(BaseModel):
    """카테고리 문서"""

    model_config = ConfigDict(extra="forbid")

    id: str
    capacity: StrictInt
    items: List[str]
    dummy: List[bool] = Field(default_factory=list)


class InstanceDocument(BaseModel):
    """인스턴스 문서"""

    model_config = ConfigDict(extra="forbid")

    agents: List[str]
    categories: List[CategoryDocument]
    utilities: Dict[str, Dict[str, RationalValue]]

    @field_validator("utilities")
    @classmethod
    def _check_rationals(cls, utilities):
        for agent, row in utilities.items():
            for item, value in row.items():
                try:
                    parse_rational(value)
                except ValueError as e:
                    raise ValueError(f"utilities[{agent}][{item}]: {e}") from None
        return utilities


class AllocationDocument(BaseModel):
    """할당 문서"""

    model_config = ConfigDict(extra="forbid")

    bundles: Dict[str, List[str]]

    @field_validator("bundles")
    @classmethod
    def _no_repeats(cls, bundles):
        for agent, items in bundles.items():
            if len(set(items)) != len(items):
                raise ValueError(f"bundle of {agent!r} lists an item twice")
        return bundles
