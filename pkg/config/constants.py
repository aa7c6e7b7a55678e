"""
분할 솔버 상수 정의
"""

# 애플리케이션 설정
APP_NAME = "fairdiv"
APP_DESCRIPTION = "두 에이전트 EF[1,1] + PO 할당 솔버 (카테고리 용량 제약)"

# 더미 아이템 예약 네임스페이스
DUMMY_PREFIX = "__dummy_"

# 오라클 기본 열거 예산
DEFAULT_ENUMERATION_BUDGET = 1_000_000

# 종료 코드 (안정 계약)
EXIT_CODES = {
    "ok": 0,
    "property_fails": 1,
    "schema_error": 2,
    "agent_count": 3,
    "invariant": 4,
    "budget": 5,
}

# 검증 위반 코드
VIOLATION_CODES = {
    "no_agents": "에이전트가 없습니다.",
    "duplicate_agent": "에이전트 id가 중복되었습니다.",
    "duplicate_category": "카테고리 id가 중복되었습니다.",
    "duplicate_item": "아이템이 여러 카테고리에 속해 있습니다.",
    "empty_category": "카테고리에 아이템이 없습니다.",
    "capacity_below_lower_bound": "capacity below ⌈|C|/n⌉",
    "capacity_above_category_size": "capacity above |C|",
    "missing_utility": "효용 값이 누락되었습니다.",
    "unknown_utility_item": "효용 표에 알 수 없는 아이템이 있습니다.",
    "unknown_utility_agent": "효용 표에 알 수 없는 에이전트가 있습니다.",
    "dummy_nonzero_utility": "더미 아이템의 효용이 0이 아닙니다.",
    "reserved_item_id": "실제 아이템 id가 더미 예약 접두사로 시작합니다.",
}

ERROR_MESSAGES = {
    "schema": "❌ 입력 문서 스키마 오류",
    "agent_count": "⚠️ 이 솔버는 정확히 두 에이전트만 지원합니다.",
    "invariant": "❌ 내부 불변식 위반이 감지되었습니다.",
    "budget": "⚠️ 열거 예산을 초과했습니다. --budget 값을 늘려주세요.",
    "infeasible": "❌ 할당이 실현 가능하지 않습니다.",
}

# 공정성 속성 CLI 이름
PROPERTY_NAMES = ["ef", "ef1", "ef11", "ef11u"]
CHECK_EXTRA_PROPERTIES = ["po", "envy-graph", "top-trading"]

# 랜덤 생성기 기본값
GENERATOR_DEFAULTS = {
    "seed": 0,
    "agents": 2,
    "category_sizes": [4, 2],
    "capacity_policy": "min",
    "utility_low": -9,
    "utility_high": 9,
}
CAPACITY_POLICIES = ["min", "max", "random"]
