"""
내장 예제 인스턴스와 할당 스냅샷 (JSON 문서 형태 그대로)
"""

import copy
from typing import Any, Dict, List

from models.errors import UnknownFixtureError


def _row(items: List[str], values: List[int]) -> Dict[str, int]:
    return dict(zip(items, values))


_TWO_CATEGORY_ITEMS = ["o1", "o2", "o3", "o4", "o5", "o6"]
_REPEATED_MATCHING_ITEMS = ["o1_1", "o1_2", "o2_1", "o2_2"]
_OVERFLOW_ITEMS = ["o1_1", "o1_2", "o1_3", "o1_4", "o2_1", "o2_2"]
_ENVY_CYCLE_ITEMS = ["o1", "o2", "o3", "o4"]
_IMPROVEMENT_ITEMS = ["o1", "o2", "o3", "o4", "o5", "o6", "o7", "o8"]

FIXTURES: Dict[str, Dict[str, Any]] = {
    "intro": {
        "description": "한 카테고리, 재화 하나와 집안일 하나 (EF1 할당 없음)",
        "instance": {
            "agents": ["1", "2"],
            "categories": [{"id": "C1", "capacity": 1, "items": ["o1", "o2"]}],
            "utilities": {
                "1": {"o1": 1, "o2": -1},
                "2": {"o1": 1, "o2": -1},
            },
        },
        "snapshots": {
            "split": {"bundles": {"1": ["o1"], "2": ["o2"]}},
        },
    },
    "table2": {
        "description": "두 카테고리 혼합 예제 (가중치 스윕)",
        "instance": {
            "agents": ["1", "2"],
            "categories": [
                {"id": "C1", "capacity": 2, "items": ["o1", "o2", "o3", "o4"]},
                {"id": "C2", "capacity": 1, "items": ["o5", "o6"]},
            ],
            "utilities": {
                "1": _row(_TWO_CATEGORY_ITEMS, [0, -1, -4, -5, 0, 2]),
                "2": _row(_TWO_CATEGORY_ITEMS, [0, -1, -2, -1, -1, 0]),
            },
        },
        "snapshots": {
            "initial": {"bundles": {"1": ["o1", "o2", "o6"], "2": ["o3", "o4", "o5"]}},
            "alternate_final": {"bundles": {"1": ["o1", "o2", "o5"], "2": ["o3", "o4", "o6"]}},
            "solver_final": {"bundles": {"1": ["o2", "o3", "o6"], "2": ["o1", "o4", "o5"]}},
        },
    },
    "table3": {
        "description": "반복 매칭 반례",
        "instance": {
            "agents": ["1", "2"],
            "categories": [
                {"id": "C1", "capacity": 1, "items": ["o1_1", "o1_2"]},
                {"id": "C2", "capacity": 1, "items": ["o2_1", "o2_2"]},
            ],
            "utilities": {
                "1": _row(_REPEATED_MATCHING_ITEMS, [0, -2, -2, -1]),
                "2": _row(_REPEATED_MATCHING_ITEMS, [0, -4, -4, 0]),
            },
        },
        "snapshots": {
            "round1": {"bundles": {"1": ["o1_2"], "2": ["o1_1"]}},
            "round2": {"bundles": {"1": ["o1_2", "o2_1"], "2": ["o1_1", "o2_2"]}},
        },
    },
    "table4": {
        "description": "top-trading 반례 (용량 초과)",
        "instance": {
            "agents": ["1", "2"],
            "categories": [
                {"id": "C1", "capacity": 2, "items": ["o1_1", "o1_2", "o1_3", "o1_4"]},
                {"id": "C2", "capacity": 1, "items": ["o2_1", "o2_2"]},
            ],
            "utilities": {
                "1": _row(_OVERFLOW_ITEMS, [-1, 0, 0, 0, -2, -4]),
                "2": _row(_OVERFLOW_ITEMS, [-1, 0, 0, 0, -1, -3]),
            },
        },
        "snapshots": {
            "midrun": {"bundles": {"1": ["o1_1"], "2": ["o1_2", "o1_3"]}},
            "overflow": {"bundles": {"1": ["o1_1"], "2": ["o1_2", "o1_3", "o1_4"]}},
        },
    },
    "table5": {
        "description": "사이클 제거 반례 (에이전트 4명)",
        "instance": {
            "agents": ["1", "2", "3", "4"],
            "categories": [{"id": "C1", "capacity": 1, "items": ["o1", "o2", "o3", "o4"]}],
            "utilities": {
                "1": _row(_ENVY_CYCLE_ITEMS, [-5, -3, -7, -7]),
                "2": _row(_ENVY_CYCLE_ITEMS, [-5, -2, -1, -4]),
                "3": _row(_ENVY_CYCLE_ITEMS, [-4, -7, -6, -1]),
                "4": _row(_ENVY_CYCLE_ITEMS, [-3, -3, -2, -1]),
            },
        },
        "snapshots": {
            "identity": {"bundles": {"1": ["o1"], "2": ["o2"], "3": ["o3"], "4": ["o4"]}},
        },
    },
    "table6": {
        "description": "EF1 할당의 파레토 개선이 EF1 이 아닌 예",
        "instance": {
            "agents": ["1", "2"],
            "categories": [{"id": "C1", "capacity": 8, "items": list(_IMPROVEMENT_ITEMS)}],
            "utilities": {
                "1": _row(_IMPROVEMENT_ITEMS, [-5, -2, -1, -2, -2, -2, -1, -2]),
                "2": _row(_IMPROVEMENT_ITEMS, [-1, -1, -2, -1, -1, 0, 0, 0]),
            },
        },
        "snapshots": {
            "ef1": {"bundles": {"1": ["o1", "o5", "o6", "o7"], "2": ["o2", "o3", "o4", "o8"]}},
            "improved": {"bundles": {"1": ["o2", "o3", "o4", "o5", "o6", "o7"], "2": ["o1", "o8"]}},
        },
    },
}


# 설명형 별칭 -> 정식 id
FIXTURE_ALIASES: Dict[str, str] = {
    "good_and_chore": "intro",
    "two_categories": "table2",
    "repeated_matching": "table3",
    "top_trading_overflow": "table4",
    "envy_cycle": "table5",
    "ef1_improvement": "table6",
}


def fixture_names() -> List[str]:
    return list(FIXTURES)


def fixture_choices() -> List[str]:
    """CLI 에서 받는 이름 (정식 id + 별칭)"""
    return fixture_names() + list(FIXTURE_ALIASES)


def canonical_name(name: str) -> str:
    return FIXTURE_ALIASES.get(name, name)


def get_fixture(name: str) -> Dict[str, Any]:
    """예제 이름(또는 별칭)으로 사본 조회"""
    try:
        return copy.deepcopy(FIXTURES[canonical_name(name)])
    except KeyError:
        raise UnknownFixtureError(
            f"unknown fixture {name!r}, choose from {', '.join(fixture_choices())}"
        ) from None


def get_snapshot(name: str, snapshot: str) -> Dict[str, Any]:
    fixture = get_fixture(name)
    try:
        return fixture["snapshots"][snapshot]
    except KeyError:
        raise UnknownFixtureError(
            f"fixture {name!r} has no snapshot {snapshot!r}, choose from {', '.join(fixture['snapshots'])}"
        ) from None
