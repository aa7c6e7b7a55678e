import itertools
import logging
import math
from fractions import Fraction
from typing import Dict, List, Optional

from models.errors import (
    InvalidWeightsError,
    NoPerfectMatchingError,
    UnpaddedInstanceError,
)
from models.instance_models import Allocation, Instance, pad_allocation, strip_dummies
from models.solver_models import (
    AssignmentGraph,
    DifferenceRatio,
    ExchangeCycle,
    Matching,
    Slot,
    WeightVector,
)

logger = logging.getLogger(__name__)


class MatchingEngine:
    """가중 이분 그래프 G_w 기반 w-maximal 할당 엔진"""

    def build_assignment_graph(
        self, instance: Instance, weights: WeightVector
    ) -> AssignmentGraph:
        """G_w 구성: 카테고리마다 에이전트별 s_c 개 사본을 그 카테고리 아이템 전부와 연결"""
        if not instance.is_padded:
            raise UnpaddedInstanceError(
                "assignment graph needs a padded instance (n·s_c items per category)"
            )
        self._check_weights(instance, weights)

        slots: List[Slot] = []
        edges: Dict = {}
        for category in instance.categories:
            item_indices = [instance.item_index[item] for item in category.items]
            for agent in instance.agents:
                for copy in range(category.capacity):
                    slot_index = len(slots)
                    slots.append(Slot(agent=agent, category=category.id, copy=copy))
                    for item_index in item_indices:
                        item = instance.items[item_index]
                        edges[(slot_index, item_index)] = weights[agent] * instance.u(agent, item)

        logger.debug(
            "assignment graph: %d slots, %d items, %d edges",
            len(slots),
            instance.m,
            len(edges),
        )
        return AssignmentGraph(slots=tuple(slots), items=instance.items, edges=edges)

    def max_weight_perfect_matching(self, graph: AssignmentGraph) -> Matching:
        """최대 가중 완전 매칭 (헝가리안, 정확 산술)

        간선 가중치를 공통 분모로 정수화한 뒤 최소 비용 배정으로 푼다.
        간선이 없는 칸은 무한대 비용으로 취급한다.
        """
        size = graph.size
        if len(graph.slots) != size:
            raise NoPerfectMatchingError(
                f"{len(graph.slots)} slots for {size} items, no perfect matching"
            )
        if size == 0:
            return Matching(pairs=(), weight=Fraction(0))

        scale = math.lcm(*(weight.denominator for weight in graph.edges.values())) if graph.edges else 1
        cost: List[List[Optional[int]]] = [[None] * (size + 1) for _ in range(size + 1)]
        for (row, column), weight in graph.edges.items():
            cost[row + 1][column + 1] = -int(weight * scale)

        # 1-indexed 포텐셜, 0번 열은 보조 열
        row_potential = [0] * (size + 1)
        column_potential = [0] * (size + 1)
        owner = [0] * (size + 1)
        way = [0] * (size + 1)

        for row in range(1, size + 1):
            owner[0] = row
            current_column = 0
            min_slack: List[Optional[int]] = [None] * (size + 1)
            used = [False] * (size + 1)
            while True:
                used[current_column] = True
                current_row = owner[current_column]
                delta: Optional[int] = None
                next_column = -1
                for column in range(1, size + 1):
                    if used[column]:
                        continue
                    edge_cost = cost[current_row][column]
                    if edge_cost is not None:
                        reduced = edge_cost - row_potential[current_row] - column_potential[column]
                        if min_slack[column] is None or reduced < min_slack[column]:
                            min_slack[column] = reduced
                            way[column] = current_column
                    if min_slack[column] is not None and (delta is None or min_slack[column] < delta):
                        delta = min_slack[column]
                        next_column = column
                if delta is None:
                    raise NoPerfectMatchingError(
                        f"slot {graph.slots[row - 1]} cannot be matched (padding bug?)"
                    )
                for column in range(size + 1):
                    if used[column]:
                        row_potential[owner[column]] += delta
                        column_potential[column] -= delta
                    elif min_slack[column] is not None:
                        min_slack[column] -= delta
                current_column = next_column
                if owner[current_column] == 0:
                    break
            # 증가 경로 반영
            while current_column:
                previous = way[current_column]
                owner[current_column] = owner[previous]
                current_column = previous

        pairs = sorted((owner[column] - 1, column - 1) for column in range(1, size + 1))
        weight = sum((graph.edges[pair] for pair in pairs), Fraction(0))
        return Matching(pairs=tuple(pairs), weight=weight)

    def w_maximal_allocation(self, instance: Instance, weights: WeightVector) -> Allocation:
        """Σ w_i u_i(A_i) 를 최대화하는 실현 가능 할당"""
        instance.require_valid()
        self._check_weights(instance, weights)
        padded = instance.pad_with_dummies()

        graph = self.build_assignment_graph(padded, weights)
        matching = self.max_weight_perfect_matching(graph)

        bundles: Dict[str, set] = {agent: set() for agent in padded.agents}
        for slot_index, item_index in matching.pairs:
            bundles[graph.slots[slot_index].agent].add(graph.items[item_index])
        allocation = Allocation(bundles)
        logger.debug("w-maximal allocation at %s has weight %s", weights.weights, matching.weight)

        if padded is instance:
            return allocation
        return strip_dummies(instance, allocation)

    def is_w_maximal(
        self, instance: Instance, allocation: Allocation, weights: WeightVector
    ) -> bool:
        """w-maximal 여부: 두 에이전트는 교환 쌍 조건, 일반 n 은 교환 사이클 조건"""
        self._check_weights(instance, weights)
        padded = instance.pad_with_dummies()
        full = pad_allocation(padded, allocation)

        if padded.n == 2:
            return self._pairs_condition_holds(padded, full, weights)
        return self.find_improving_cycle(padded, full, weights) is None

    def _pairs_condition_holds(
        self, instance: Instance, allocation: Allocation, weights: WeightVector
    ) -> bool:
        first, second = instance.agents
        weight_ratio = DifferenceRatio.finite(weights.ratio(first, second))
        for category in instance.categories:
            own = [o for o in category.items if o in allocation.bundle(first)]
            other = [o for o in category.items if o in allocation.bundle(second)]
            for o1, o2 in itertools.product(own, other):
                first_gain = instance.u(first, o1) - instance.u(first, o2)
                second_gain = instance.u(second, o1) - instance.u(second, o2)
                if first_gain > 0:
                    if weight_ratio < DifferenceRatio.of(second_gain, first_gain):
                        return False
                elif first_gain == 0:
                    if second_gain > 0:
                        return False
                elif weight_ratio > DifferenceRatio.of(second_gain, first_gain):
                    return False
        return True

    def find_improving_cycle(
        self, instance: Instance, allocation: Allocation, weights: WeightVector
    ) -> Optional[ExchangeCycle]:
        """가중 합을 늘리는 교환 사이클 탐색 (길이 2..n, 카테고리별)"""
        for category in instance.categories:
            held = {
                agent: [o for o in category.items if o in allocation.bundle(agent)]
                for agent in instance.agents
            }
            for length in range(2, instance.n + 1):
                for agents in itertools.permutations(instance.agents, length):
                    # 회전 중복 제거: 첫 에이전트가 가장 앞선 순서
                    if instance.agents.index(agents[0]) != min(instance.agents.index(a) for a in agents):
                        continue
                    for items in itertools.product(*(held[agent] for agent in agents)):
                        cycle = ExchangeCycle(agents=agents, items=items, category=category.id)
                        if cycle.weight_change(instance.utilities, weights) > 0:
                            return cycle
        return None

    def _check_weights(self, instance: Instance, weights: WeightVector):
        if set(weights.agents) != set(instance.agents):
            raise InvalidWeightsError(
                f"weights cover {sorted(weights.agents)}, instance agents are {list(instance.agents)}"
            )
