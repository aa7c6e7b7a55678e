"""
분할 문제 전용 예외 정의
"""

from typing import Any, Optional


class FairDivisionError(Exception):
    """모든 도메인 예외의 기반 클래스"""


class InvalidInstanceError(FairDivisionError):
    """인스턴스가 유효하지 않음 (검증 리포트 포함)"""

    def __init__(self, report: Any):
        self.report = report
        super().__init__(f"invalid instance: {report.summary()}")


class UnknownItemError(FairDivisionError, KeyError):
    """인스턴스에 없는 아이템 참조"""

    def __init__(self, item: str):
        self.item = item
        super().__init__(f"unknown item id: {item!r}")

    def __str__(self) -> str:
        return self.args[0]


class InfeasibleAllocationError(FairDivisionError):
    """할당이 분할/용량 조건을 위반"""


class InvalidWeightsError(FairDivisionError, ValueError):
    """가중치가 (0,1) 범위를 벗어나거나 합이 1이 아님"""


class UnpaddedInstanceError(FairDivisionError):
    """더미 패딩이 적용되지 않은 인스턴스"""


class NoPerfectMatchingError(FairDivisionError):
    """완전 매칭이 존재하지 않음 (패딩 버그 신호)"""


class UnsupportedAgentCountError(FairDivisionError):
    """두 에이전트 전용 루틴에 n != 2 입력"""

    def __init__(self, count: int):
        self.count = count
        super().__init__(f"two agents required, got {count}")


class StalePairError(FairDivisionError):
    """교환 쌍의 아이템이 명시된 묶음에 없음"""


class EmptyCandidateListError(FairDivisionError):
    """후보 교환 쌍이 비어 있음"""


class SolverInvariantError(FairDivisionError):
    """솔버 내부 불변식 위반 (부분 트레이스 포함)"""

    def __init__(self, message: str, trace: Optional[Any] = None):
        self.trace = trace
        super().__init__(message)


class EnumerationBudgetError(FairDivisionError):
    """오라클 열거 예산 초과"""

    def __init__(self, required: int, budget: int):
        self.required = required
        self.budget = budget
        super().__init__(
            f"enumeration needs {required} allocations, budget is {budget}"
        )


class AllocationMismatchError(FairDivisionError):
    """두 할당의 아이템 집합 또는 카테고리별 개수가 다름"""


class DocumentError(FairDivisionError):
    """JSON 문서 스키마 오류"""

    def __init__(self, message: str, details: Optional[list] = None):
        self.details = details or []
        super().__init__(message)


class GenerationError(FairDivisionError, ValueError):
    """랜덤 인스턴스 생성 파라미터 오류"""


class UnknownFixtureError(FairDivisionError, KeyError):
    """알 수 없는 예제 이름"""

    def __str__(self) -> str:
        return self.args[0]
