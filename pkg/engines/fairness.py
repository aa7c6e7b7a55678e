import logging
from fractions import Fraction
from typing import Iterable, List, Optional

from models.fairness_models import EnvyGraph, FairnessProperty, FairnessVerdict, PairWitness
from models.instance_models import Allocation, Instance

logger = logging.getLogger(__name__)


class FairnessChecker:
    """EF / EF1 / EF[1,1] / EF[1,1,U] 판정과 에이전트 그래프"""

    def envy_graph(self, instance: Instance, allocation: Allocation) -> EnvyGraph:
        """i 가 j 를 질투하면 간선 i → j"""
        edges = [
            (agent, other)
            for agent in instance.agents
            for other in instance.agents
            if agent != other and self._value(instance, agent, allocation, other) > self._value(instance, agent, allocation, agent)
        ]
        return EnvyGraph.from_edges(instance.agents, edges)

    def top_trading_graph(self, instance: Instance, allocation: Allocation) -> EnvyGraph:
        """가장 선호하는 묶음(자기 것보다 엄격히 나은)의 보유자로 향하는 간선"""
        edges = []
        for agent in instance.agents:
            values = {other: self._value(instance, agent, allocation, other) for other in instance.agents}
            best = max(values.values())
            if best <= values[agent]:
                continue
            edges.extend((agent, other) for other in instance.agents if other != agent and values[other] == best)
        return EnvyGraph.from_edges(instance.agents, edges)

    def sinks(self, graph: EnvyGraph) -> List[str]:
        return graph.sinks()

    def envious_agents(self, instance: Instance, allocation: Allocation) -> List[str]:
        graph = self.envy_graph(instance, allocation)
        return [agent for agent in instance.agents if graph.graph.out_degree(agent) > 0]

    def is_ef_for(self, instance: Instance, allocation: Allocation, agent: str) -> bool:
        """agent 가 아무도 질투하지 않는지"""
        own = self._value(instance, agent, allocation, agent)
        return all(
            own >= self._value(instance, agent, allocation, other)
            for other in instance.agents
            if other != agent
        )

    def holds_for(
        self,
        instance: Instance,
        allocation: Allocation,
        agent: str,
        prop: FairnessProperty,
    ) -> bool:
        """agent 기준으로 모든 상대에 대해 조건이 성립하는지"""
        return all(
            self.pair_witness(instance, allocation, agent, other, prop).holds
            for other in instance.agents
            if other != agent
        )

    def check(
        self, instance: Instance, allocation: Allocation, prop: FairnessProperty
    ) -> FairnessVerdict:
        """모든 순서쌍에 대해 증인 탐색"""
        witnesses = tuple(
            self.pair_witness(instance, allocation, agent, other, prop)
            for agent in instance.agents
            for other in instance.agents
            if agent != other
        )
        verdict = FairnessVerdict(
            property=prop,
            holds=all(witness.holds for witness in witnesses),
            witnesses=witnesses,
        )
        logger.debug("%s holds=%s", prop.value, verdict.holds)
        return verdict

    def pair_witness(
        self,
        instance: Instance,
        allocation: Allocation,
        agent: str,
        other: str,
        prop: FairnessProperty,
    ) -> PairWitness:
        own_items = instance.sort_items(allocation.bundle(agent))
        other_items = instance.sort_items(allocation.bundle(other))
        own_value = instance.bundle_utility(agent, own_items)
        other_value = instance.bundle_utility(agent, other_items)

        def found(remove_own: Optional[str] = None, remove_other: Optional[str] = None) -> PairWitness:
            return PairWitness(agent, other, True, remove_own, remove_other)

        if own_value >= other_value:
            return found()
        if prop == FairnessProperty.EF:
            return PairWitness(agent, other, False)

        for candidate in self._single_removals(instance, agent, own_items, other_items, own_value, other_value):
            return found(*candidate)
        if prop == FairnessProperty.EF1:
            return PairWitness(agent, other, False)

        same_category = prop == FairnessProperty.EF11
        for item_own in own_items:
            for item_other in other_items:
                if same_category and instance.category_of(item_own).id != instance.category_of(item_other).id:
                    continue
                if own_value - instance.u(agent, item_own) >= other_value - instance.u(agent, item_other):
                    return found(item_own, item_other)
        return PairWitness(agent, other, False)

    def _single_removals(
        self,
        instance: Instance,
        agent: str,
        own_items: Iterable[str],
        other_items: Iterable[str],
        own_value: Fraction,
        other_value: Fraction,
    ):
        for item in own_items:
            if own_value - instance.u(agent, item) >= other_value:
                yield (item, None)
        for item in other_items:
            if own_value >= other_value - instance.u(agent, item):
                yield (None, item)

    def is_pareto_improvement(
        self, instance: Instance, before: Allocation, after: Allocation
    ) -> bool:
        """모두 약하게 개선, 누군가는 엄격히 개선"""
        gains = [
            instance.bundle_utility(agent, after.bundle(agent))
            - instance.bundle_utility(agent, before.bundle(agent))
            for agent in instance.agents
        ]
        return all(gain >= 0 for gain in gains) and any(gain > 0 for gain in gains)

    @staticmethod
    def _value(instance: Instance, agent: str, allocation: Allocation, holder: str) -> Fraction:
        return instance.bundle_utility(agent, allocation.bundle(holder))
