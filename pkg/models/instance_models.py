import math
from dataclasses import dataclass, field
from fractions import Fraction
from functools import cached_property
from typing import Any, Dict, FrozenSet, Iterable, List, Mapping, Optional, Tuple

from config.constants import DUMMY_PREFIX, VIOLATION_CODES
from models.errors import (
    InfeasibleAllocationError,
    InvalidInstanceError,
    StalePairError,
    UnknownItemError,
)


@dataclass(frozen=True)
class Violation:
    """검증 위반 항목"""

    code: str
    message: str
    location: Optional[str] = None

    def to_dict(self) -> Dict[str, Any]:
        return {"code": self.code, "message": self.message, "location": self.location}


@dataclass(frozen=True)
class ValidationReport:
    """인스턴스 검증 결과 (위반 목록이 비어 있으면 유효)"""

    violations: Tuple[Violation, ...] = ()

    @property
    def is_valid(self) -> bool:
        return not self.violations

    def codes(self) -> List[str]:
        return [violation.code for violation in self.violations]

    def summary(self) -> str:
        if self.is_valid:
            return "ok"
        return "; ".join(
            f"{v.code}@{v.location}" if v.location else v.code for v in self.violations
        )

    def to_dict(self) -> Dict[str, Any]:
        return {
            "valid": self.is_valid,
            "violations": [violation.to_dict() for violation in self.violations],
        }


@dataclass(frozen=True)
class Category:
    """아이템 카테고리와 용량 제약 s_c"""

    id: str
    capacity: int
    items: Tuple[str, ...]
    dummy_flags: Tuple[bool, ...] = ()

    def __post_init__(self):
        object.__setattr__(self, "items", tuple(self.items))
        flags = tuple(self.dummy_flags) if self.dummy_flags else ()
        if not flags:
            flags = tuple(False for _ in self.items)
        if len(flags) != len(self.items):
            raise ValueError(
                f"category {self.id!r}: dummy_flags length does not match items"
            )
        object.__setattr__(self, "dummy_flags", flags)

    @property
    def size(self) -> int:
        return len(self.items)

    @property
    def real_items(self) -> Tuple[str, ...]:
        return tuple(o for o, dummy in zip(self.items, self.dummy_flags) if not dummy)

    @property
    def dummy_items(self) -> Tuple[str, ...]:
        return tuple(o for o, dummy in zip(self.items, self.dummy_flags) if dummy)


@dataclass(frozen=True)
class Allocation:
    """에이전트별 묶음 (A_1, ..., A_n)"""

    bundles: Dict[str, FrozenSet[str]] = field(default_factory=dict)

    def __post_init__(self):
        object.__setattr__(
            self,
            "bundles",
            {agent: frozenset(items) for agent, items in self.bundles.items()},
        )

    def __hash__(self) -> int:
        return hash(frozenset(self.bundles.items()))

    @property
    def agents(self) -> Tuple[str, ...]:
        return tuple(self.bundles)

    def bundle(self, agent: str) -> FrozenSet[str]:
        return self.bundles.get(agent, frozenset())

    def items(self) -> FrozenSet[str]:
        return frozenset().union(*self.bundles.values()) if self.bundles else frozenset()

    def holder(self, item: str) -> Optional[str]:
        for agent, bundle in self.bundles.items():
            if item in bundle:
                return agent
        return None

    def swap(self, item_a: str, item_b: str) -> "Allocation":
        """두 아이템을 보유자 사이에서 맞교환"""
        holder_a = self.holder(item_a)
        holder_b = self.holder(item_b)
        if holder_a is None or holder_b is None or holder_a == holder_b:
            raise StalePairError(
                f"cannot swap {item_a!r} and {item_b!r}: holders {holder_a!r}, {holder_b!r}"
            )
        bundles = dict(self.bundles)
        bundles[holder_a] = (bundles[holder_a] - {item_a}) | {item_b}
        bundles[holder_b] = (bundles[holder_b] - {item_b}) | {item_a}
        return Allocation(bundles)

    def without(self, items: Iterable[str]) -> "Allocation":
        removed = frozenset(items)
        return Allocation(
            {agent: bundle - removed for agent, bundle in self.bundles.items()}
        )


@dataclass(frozen=True)
class Instance:
    """문제 인스턴스 I = (N, M, C, S, U)"""

    agents: Tuple[str, ...]
    categories: Tuple[Category, ...]
    utilities: Dict[str, Dict[str, Fraction]]

    def __post_init__(self):
        object.__setattr__(self, "agents", tuple(self.agents))
        object.__setattr__(self, "categories", tuple(self.categories))
        object.__setattr__(
            self,
            "utilities",
            {
                agent: {item: Fraction(value) for item, value in row.items()}
                for agent, row in self.utilities.items()
            },
        )

    # ------------------------------------------------------------------
    # 조회
    # ------------------------------------------------------------------

    @cached_property
    def items(self) -> Tuple[str, ...]:
        return tuple(item for category in self.categories for item in category.items)

    @cached_property
    def item_index(self) -> Dict[str, int]:
        return {item: index for index, item in enumerate(self.items)}

    @cached_property
    def category_index(self) -> Dict[str, int]:
        return {category.id: index for index, category in enumerate(self.categories)}

    @cached_property
    def _category_by_item(self) -> Dict[str, Category]:
        return {item: category for category in self.categories for item in category.items}

    @cached_property
    def dummy_items(self) -> FrozenSet[str]:
        return frozenset(o for category in self.categories for o in category.dummy_items)

    @property
    def n(self) -> int:
        return len(self.agents)

    @property
    def m(self) -> int:
        return len(self.items)

    def category_of(self, item: str) -> Category:
        try:
            return self._category_by_item[item]
        except KeyError:
            raise UnknownItemError(item) from None

    def u(self, agent: str, item: str) -> Fraction:
        """u_i(o)"""
        if item not in self._category_by_item:
            raise UnknownItemError(item)
        try:
            return self.utilities[agent][item]
        except KeyError:
            raise KeyError(f"no utility for agent {agent!r} on item {item!r}") from None

    def bundle_utility(self, agent: str, bundle: Iterable[str]) -> Fraction:
        """u_i(X) = Σ_{o∈X} u_i(o)"""
        return sum((self.u(agent, item) for item in bundle), Fraction(0))

    def weighted_welfare(self, allocation: Allocation, weights: Mapping[str, Fraction]) -> Fraction:
        """Σ w_i u_i(A_i)"""
        return sum(
            (
                Fraction(weights[agent]) * self.bundle_utility(agent, allocation.bundle(agent))
                for agent in self.agents
            ),
            Fraction(0),
        )

    def is_dummy(self, item: str) -> bool:
        return item in self.dummy_items

    def sort_items(self, items: Iterable[str]) -> List[str]:
        """인스턴스 순서(카테고리, 카테고리 내 순서)로 정렬"""
        return sorted(items, key=lambda item: (self.item_index.get(item, len(self.item_index)), item))

    # ------------------------------------------------------------------
    # 검증
    # ------------------------------------------------------------------

    def validate(self) -> ValidationReport:
        """모든 불변식 위반을 수집 (예외 없음)"""
        violations: List[Violation] = []

        def add(code: str, location: Optional[str] = None):
            violations.append(Violation(code, VIOLATION_CODES[code], location))

        n = len(self.agents)
        if n == 0:
            add("no_agents")
        if len(set(self.agents)) != n:
            add("duplicate_agent")

        seen_categories = set()
        seen_items = set()
        for category in self.categories:
            if category.id in seen_categories:
                add("duplicate_category", category.id)
            seen_categories.add(category.id)

            for item, dummy in zip(category.items, category.dummy_flags):
                if item in seen_items:
                    add("duplicate_item", item)
                seen_items.add(item)
                if not dummy and item.startswith(DUMMY_PREFIX):
                    add("reserved_item_id", item)

            if category.size == 0:
                add("empty_category", category.id)
                continue
            if n > 0 and category.capacity < math.ceil(category.size / n):
                add("capacity_below_lower_bound", category.id)
            if category.capacity > category.size:
                add("capacity_above_category_size", category.id)

        for agent in self.utilities:
            if agent not in self.agents:
                add("unknown_utility_agent", agent)

        for agent in self.agents:
            row = self.utilities.get(agent, {})
            for item in row:
                if item not in seen_items:
                    add("unknown_utility_item", f"{agent}:{item}")
            for category in self.categories:
                for item, dummy in zip(category.items, category.dummy_flags):
                    if item not in row:
                        add("missing_utility", f"{agent}:{item}")
                    elif dummy and row[item] != 0:
                        add("dummy_nonzero_utility", f"{agent}:{item}")

        return ValidationReport(tuple(violations))

    @property
    def is_valid(self) -> bool:
        return self.validate().is_valid

    def require_valid(self) -> "Instance":
        report = self.validate()
        if not report.is_valid:
            raise InvalidInstanceError(report)
        return self

    # ------------------------------------------------------------------
    # 전처리 / 성질
    # ------------------------------------------------------------------

    @property
    def is_padded(self) -> bool:
        return all(category.size == self.n * category.capacity for category in self.categories)

    def pad_with_dummies(self) -> "Instance":
        """각 카테고리를 n·s_c 개가 되도록 효용 0 더미로 채움"""
        self.require_valid()
        if self.is_padded:
            return self

        categories = []
        dummies: List[str] = []
        taken = set(self.items)
        for category in self.categories:
            missing = self.n * category.capacity - category.size
            new_items = []
            k = 0
            while len(new_items) < missing:
                k += 1
                candidate = f"{DUMMY_PREFIX}{category.id}_{k}"
                if candidate not in taken:
                    taken.add(candidate)
                    new_items.append(candidate)
            new_items = tuple(new_items)
            dummies.extend(new_items)
            categories.append(
                Category(
                    id=category.id,
                    capacity=category.capacity,
                    items=category.items + new_items,
                    dummy_flags=category.dummy_flags + tuple(True for _ in new_items),
                )
            )

        utilities = {agent: dict(self.utilities[agent]) for agent in self.agents}
        for agent in self.agents:
            for dummy in dummies:
                utilities[agent][dummy] = Fraction(0)

        return Instance(agents=self.agents, categories=tuple(categories), utilities=utilities)

    def feasible_allocation_count(self) -> int:
        """패딩 후 실현 가능 할당 수: 카테고리별 다항계수의 곱"""
        total = 1
        for category in self.categories:
            slots = self.n * category.capacity
            remaining = slots
            for _ in range(self.n):
                total *= math.comb(remaining, category.capacity)
                remaining -= category.capacity
        return total

    def exchange_bound(self) -> int:
        """두 묶음 사이 같은 카테고리 쌍의 수 Σ s_c², 교환 횟수의 상한"""
        return sum(category.capacity ** 2 for category in self.categories)

    def is_same_sign(self) -> bool:
        """모든 (에이전트, 카테고리)가 전부 재화이거나 전부 집안일인지"""
        for agent in self.agents:
            for category in self.categories:
                values = [self.u(agent, item) for item in category.items]
                if not (all(v >= 0 for v in values) or all(v <= 0 for v in values)):
                    return False
        return True

    def is_partial_feasible(self, allocation: Allocation) -> bool:
        """묶음 서로소 + 용량 조건 (전체 커버는 요구하지 않음)"""
        if not set(allocation.agents) <= set(self.agents):
            return False
        seen = set()
        for bundle in allocation.bundles.values():
            if bundle & seen:
                return False
            seen |= bundle
            counts: Dict[str, int] = {}
            for item in bundle:
                category = self._category_by_item.get(item)
                if category is None:
                    return False
                counts[category.id] = counts.get(category.id, 0) + 1
                if counts[category.id] > category.capacity:
                    return False
        return True

    def is_feasible(self, allocation: Allocation) -> bool:
        """분할 + 용량 조건"""
        if set(allocation.agents) != set(self.agents):
            return False
        if not self.is_partial_feasible(allocation):
            return False
        return allocation.items() == frozenset(self.items)

    @classmethod
    def from_uncategorized(
        cls,
        agents: Iterable[str],
        utilities: Mapping[str, Mapping[str, Any]],
        items: Optional[Iterable[str]] = None,
    ) -> "Instance":
        """카테고리 없는 설정의 환원: 아이템마다 용량 1인 단일 카테고리"""
        agents = tuple(agents)
        if items is None:
            items = list(utilities[agents[0]]) if agents else []
        categories = tuple(Category(id=f"C_{item}", capacity=1, items=(item,)) for item in items)
        return cls(
            agents=agents,
            categories=categories,
            utilities={agent: dict(utilities[agent]) for agent in agents},
        )


def pad_allocation(padded: Instance, allocation: Allocation) -> Allocation:
    """더미가 빠진 할당에 각 에이전트의 부족분 더미를 채워 넣음"""
    bundles = {agent: set(allocation.bundle(agent)) for agent in padded.agents}
    for category in padded.categories:
        free = [o for o in category.dummy_items if allocation.holder(o) is None]
        for agent in padded.agents:
            held = sum(1 for item in bundles[agent] if padded.category_of(item).id == category.id)
            missing = category.capacity - held
            if missing < 0:
                raise InfeasibleAllocationError(
                    f"agent {agent!r} holds {held} items of {category.id!r}, capacity {category.capacity}"
                )
            for _ in range(missing):
                if not free:
                    raise InfeasibleAllocationError(
                        f"category {category.id!r} cannot be completed with dummies"
                    )
                bundles[agent].add(free.pop(0))

    padded_allocation = Allocation(bundles)
    if not padded.is_feasible(padded_allocation):
        raise InfeasibleAllocationError("allocation does not cover the padded item set")
    return padded_allocation


def strip_dummies(instance: Instance, allocation: Allocation) -> Allocation:
    """예약 네임스페이스의 더미 아이템 제거"""
    dummies = {item for item in allocation.items() if item.startswith(DUMMY_PREFIX)}
    return allocation.without(dummies | set(instance.dummy_items))
