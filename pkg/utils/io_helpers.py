"""
JSON 입출력과 문서 <-> 도메인 모델 변환
"""

import json
from fractions import Fraction
from pathlib import Path
from typing import Any, Dict, Optional, Union

from pydantic import ValidationError

from models.documents import AllocationDocument, InstanceDocument, parse_rational
from models.errors import DocumentError
from models.instance_models import Allocation, Category, Instance
from models.solver_models import DifferenceRatio, ExchangeablePair, SolveTrace, WeightVector

PathLike = Union[str, Path]


def format_fraction(value: Fraction) -> Union[int, str]:
    """정수면 int, 아니면 "p/q" 문자열"""
    value = Fraction(value)
    if value.denominator == 1:
        return value.numerator
    return f"{value.numerator}/{value.denominator}"


def format_ratio(ratio: DifferenceRatio) -> Union[int, str]:
    if not ratio.is_finite:
        return str(ratio)
    return format_fraction(ratio.value)


def load_json(path: PathLike) -> Any:
    """JSON 파일 읽기 (파일 없음/문법 오류는 DocumentError)"""
    try:
        with open(path, "r", encoding="utf-8") as f:
            return json.load(f)
    except FileNotFoundError:
        raise DocumentError(f"file not found: {path}") from None
    except json.JSONDecodeError as e:
        raise DocumentError(f"{path}: invalid JSON ({e.msg} at line {e.lineno})") from None


def dump_json(data: Any, path: Optional[PathLike] = None) -> str:
    """JSON 직렬화, path 가 있으면 파일에도 기록"""
    text = json.dumps(data, ensure_ascii=False, indent=2)
    if path is not None:
        Path(path).write_text(text + "\n", encoding="utf-8")
    return text


def _schema_error(kind: str, error: ValidationError) -> DocumentError:
    details = [
        f"{'.'.join(str(part) for part in item['loc'])}: {item['msg']}"
        for item in error.errors()
    ]
    return DocumentError(f"{kind} document does not match the schema", details)


# ----------------------------------------------------------------------
# 인스턴스
# ----------------------------------------------------------------------


def parse_instance(data: Dict[str, Any]) -> Instance:
    """인스턴스 문서 -> Instance (검증은 호출 측에서)"""
    try:
        document = InstanceDocument.model_validate(data)
    except ValidationError as e:
        raise _schema_error("instance", e) from None

    categories = []
    for category in document.categories:
        if category.dummy and len(category.dummy) != len(category.items):
            raise DocumentError(
                "instance document does not match the schema",
                [f"categories.{category.id}.dummy: expected {len(category.items)} flags"],
            )
        categories.append(
            Category(
                id=category.id,
                capacity=category.capacity,
                items=tuple(category.items),
                dummy_flags=tuple(category.dummy),
            )
        )
    utilities = {
        agent: {item: parse_rational(value) for item, value in row.items()}
        for agent, row in document.utilities.items()
    }
    return Instance(agents=tuple(document.agents), categories=tuple(categories), utilities=utilities)


def instance_to_document(instance: Instance) -> Dict[str, Any]:
    categories = []
    for category in instance.categories:
        entry: Dict[str, Any] = {
            "id": category.id,
            "capacity": category.capacity,
            "items": list(category.items),
        }
        if any(category.dummy_flags):
            entry["dummy"] = list(category.dummy_flags)
        categories.append(entry)
    return {
        "agents": list(instance.agents),
        "categories": categories,
        "utilities": {
            agent: {item: format_fraction(value) for item, value in instance.utilities[agent].items()}
            for agent in instance.agents
        },
    }


def load_instance(path: PathLike) -> Instance:
    return parse_instance(load_json(path))


# ----------------------------------------------------------------------
# 할당
# ----------------------------------------------------------------------


def parse_allocation(data: Dict[str, Any]) -> Allocation:
    try:
        document = AllocationDocument.model_validate(data)
    except ValidationError as e:
        raise _schema_error("allocation", e) from None
    return Allocation({agent: frozenset(items) for agent, items in document.bundles.items()})


def allocation_to_document(
    allocation: Allocation, instance: Optional[Instance] = None
) -> Dict[str, Any]:
    """묶음을 인스턴스 순서(없으면 문자열 순서)로 정렬해 기록"""
    agents = instance.agents if instance is not None else allocation.agents

    def order(items):
        return instance.sort_items(items) if instance is not None else sorted(items)

    return {"bundles": {agent: order(allocation.bundle(agent)) for agent in agents}}


def load_allocation(path: PathLike) -> Allocation:
    return parse_allocation(load_json(path))


# ----------------------------------------------------------------------
# 트레이스
# ----------------------------------------------------------------------


def weights_to_document(weights: Optional[WeightVector]) -> Optional[Dict[str, Any]]:
    if weights is None:
        return None
    return {agent: format_fraction(value) for agent, value in weights.weights.items()}


def pair_to_document(pair: Optional[ExchangeablePair]) -> Optional[Dict[str, Any]]:
    if pair is None:
        return None
    return {
        "item_in_a1": pair.item_in_a1,
        "item_in_a2": pair.item_in_a2,
        "category": pair.category,
        "ratio": format_ratio(pair.ratio),
        "preferred": pair.preferred,
    }


def trace_to_document(trace: SolveTrace, instance: Optional[Instance] = None) -> Dict[str, Any]:
    """솔버 트레이스 직렬화 (스냅샷은 더미 포함)"""
    return {
        "agents": list(trace.agents),
        "first_agent": trace.first_agent,
        "second_agent": trace.second_agent,
        "agent_permutation": dict(trace.agent_permutation),
        "initial_weights": weights_to_document(trace.initial_weights),
        "exchanges": len(trace.exchanges),
        "ratios": [format_ratio(ratio) for ratio in trace.ratios],
        "steps": [
            {
                "index": step.index,
                "allocation": allocation_to_document(step.allocation, instance)["bundles"],
                "pair": pair_to_document(step.pair),
                "weights": weights_to_document(step.weights),
                "ef11": step.ef11,
                "envious": list(step.envious),
                "remaining_candidates": step.remaining_candidates,
            }
            for step in trace.steps
        ],
        "final": allocation_to_document(trace.final, instance)["bundles"] if trace.final else None,
    }
