import itertools
import logging
from fractions import Fraction
from typing import Iterable, Iterator, List, Optional, Sequence, Set, Tuple, Union

from config.settings import load_settings
from models.errors import AllocationMismatchError, EnumerationBudgetError
from models.fairness_models import FairnessProperty
from models.instance_models import Allocation, Instance, pad_allocation, strip_dummies
from models.solver_models import ExchangeCycle, WeightVector

logger = logging.getLogger(__name__)

PropertyName = Union[FairnessProperty, str]


def _colex_subsets(size: int, count: int) -> List[Tuple[int, ...]]:
    return sorted(itertools.combinations(range(size), count), key=lambda subset: subset[::-1])


def _category_splits(items: Sequence[str], capacity: int, n: int) -> Iterator[Tuple[Tuple[str, ...], ...]]:
    """카테고리 아이템을 n 명에게 capacity 개씩 나누는 모든 방법"""
    if n == 1:
        yield (tuple(items),)
        return
    for chosen in _colex_subsets(len(items), capacity):
        picked = set(chosen)
        rest = [item for index, item in enumerate(items) if index not in picked]
        for tail in _category_splits(rest, capacity, n - 1):
            yield (tuple(items[index] for index in chosen),) + tail


class Oracle:
    """지수 시간 전수 열거 기반 정답 검증기"""

    def __init__(self, budget: Optional[int] = None):
        self.budget = budget if budget is not None else load_settings().enumeration_budget
        self._fairness_checker = None

    @property
    def fairness_checker(self):
        if self._fairness_checker is None:
            from engines.fairness import FairnessChecker

            self._fairness_checker = FairnessChecker()
        return self._fairness_checker

    # ------------------------------------------------------------------
    # 열거
    # ------------------------------------------------------------------

    def count_feasible(self, instance: Instance) -> int:
        return instance.pad_with_dummies().feasible_allocation_count()

    def enumerate_feasible(self, instance: Instance) -> Iterator[Allocation]:
        """카테고리 우선, colex 부분집합 순서로 모든 실현 가능 할당 생성

        패딩되지 않은 인스턴스는 패딩 후 열거하고 더미를 제거한 할당을 한 번씩만 낸다.
        """
        padded = instance.pad_with_dummies()
        required = padded.feasible_allocation_count()
        if required > self.budget:
            raise EnumerationBudgetError(required, self.budget)
        logger.debug("enumerating %d allocations", required)

        per_category = [
            list(_category_splits(category.items, category.capacity, padded.n))
            for category in padded.categories
        ]
        strip = padded is not instance
        seen: Set[Allocation] = set()
        for choice in itertools.product(*per_category):
            bundles = {
                agent: [item for split in choice for item in split[position]]
                for position, agent in enumerate(padded.agents)
            }
            allocation = Allocation(bundles)
            if strip:
                allocation = strip_dummies(instance, allocation)
                if allocation in seen:
                    continue
                seen.add(allocation)
            yield allocation

    def _profile(self, instance: Instance, allocation: Allocation) -> Tuple[Fraction, ...]:
        return tuple(instance.bundle_utility(agent, allocation.bundle(agent)) for agent in instance.agents)

    @staticmethod
    def _dominates(candidate: Tuple[Fraction, ...], target: Tuple[Fraction, ...]) -> bool:
        return all(c >= t for c, t in zip(candidate, target)) and any(c > t for c, t in zip(candidate, target))

    # ------------------------------------------------------------------
    # 판정
    # ------------------------------------------------------------------

    def is_pareto_optimal(self, instance: Instance, allocation: Allocation) -> bool:
        """어떤 실현 가능 할당도 파레토 개선이 아니면 True"""
        target = self._profile(instance, allocation)
        return not any(
            self._dominates(self._profile(instance, other), target)
            for other in self.enumerate_feasible(instance)
        )

    def find_allocation(
        self, instance: Instance, properties: Iterable[PropertyName]
    ) -> Optional[Allocation]:
        """요청한 속성(ef, ef1, ef11, ef11u, po)을 모두 만족하는 첫 할당"""
        wanted, want_po = self._split_properties(properties)
        allocations = list(self.enumerate_feasible(instance))
        profiles = [self._profile(instance, allocation) for allocation in allocations]

        for allocation, profile in zip(allocations, profiles):
            if not all(
                self.fairness_checker.check(instance, allocation, prop).holds for prop in wanted
            ):
                continue
            if want_po and any(self._dominates(other, profile) for other in profiles):
                continue
            return allocation
        return None

    @staticmethod
    def _split_properties(properties: Iterable[PropertyName]) -> Tuple[List[FairnessProperty], bool]:
        wanted: List[FairnessProperty] = []
        want_po = False
        for prop in properties:
            if isinstance(prop, FairnessProperty):
                wanted.append(prop)
            elif prop.lower() == "po":
                want_po = True
            else:
                wanted.append(FairnessProperty(prop.lower()))
        return wanted, want_po

    def brute_force_w_maximal(
        self, instance: Instance, weights: WeightVector
    ) -> Tuple[Fraction, List[Allocation]]:
        """최대 가중 합과 이를 달성하는 모든 할당"""
        best: Optional[Fraction] = None
        winners: List[Allocation] = []
        for allocation in self.enumerate_feasible(instance):
            value = instance.weighted_welfare(allocation, weights.weights)
            if best is None or value > best:
                best, winners = value, [allocation]
            elif value == best:
                winners.append(allocation)
        return (best if best is not None else Fraction(0)), winners

    # ------------------------------------------------------------------
    # 교환 사이클 분해
    # ------------------------------------------------------------------

    def exchange_cycle_decomposition(
        self, instance: Instance, source: Allocation, target: Allocation
    ) -> List[ExchangeCycle]:
        """source 를 target 으로 바꾸는 아이템 서로소 교환 사이클 목록"""
        if source.items() != target.items() or set(source.agents) != set(target.agents):
            raise AllocationMismatchError("allocations cover different items or agents")

        padded = instance.pad_with_dummies()
        if padded is not instance:
            source = pad_allocation(padded, source)
            target = pad_allocation(padded, target)
        self._check_counts(padded, source, target)

        order = {agent: index for index, agent in enumerate(padded.agents)}
        destination = {item: target.holder(item) for item in target.items()}
        current = source
        cycles: List[ExchangeCycle] = []
        while True:
            moving = [
                item
                for item in padded.sort_items(current.items())
                if current.holder(item) != destination[item]
            ]
            if not moving:
                break

            start = moving[0]
            category = padded.category_of(start)
            agents = [current.holder(start)]
            items = [start]
            while True:
                receiver = destination[items[-1]]
                if receiver in agents:
                    position = agents.index(receiver)
                    agents, items = agents[position:], items[position:]
                    break
                outgoing = next(
                    item
                    for item in category.items
                    if item in current.bundle(receiver) and destination[item] != receiver
                )
                agents.append(receiver)
                items.append(outgoing)

            # 가장 앞선 에이전트가 처음에 오도록 회전
            lead = min(range(len(agents)), key=lambda k: order[agents[k]])
            cycle = ExchangeCycle(
                agents=tuple(agents[lead:] + agents[:lead]),
                items=tuple(items[lead:] + items[:lead]),
                category=category.id,
            )
            current = cycle.apply(current)
            cycles.append(cycle)
            logger.debug("cycle %s over %s", cycle.agents, cycle.items)
        return cycles

    @staticmethod
    def _check_counts(instance: Instance, source: Allocation, target: Allocation):
        for agent in instance.agents:
            for category in instance.categories:
                before = sum(1 for item in source.bundle(agent) if item in category.items)
                after = sum(1 for item in target.bundle(agent) if item in category.items)
                if before != after:
                    raise AllocationMismatchError(
                        f"agent {agent!r} holds {before} vs {after} items of {category.id!r}"
                    )

    @staticmethod
    def apply_cycles(allocation: Allocation, cycles: Iterable[ExchangeCycle]) -> Allocation:
        for cycle in cycles:
            allocation = cycle.apply(allocation)
        return allocation
