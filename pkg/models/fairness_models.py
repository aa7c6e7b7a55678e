from dataclasses import dataclass, field
from enum import Enum
from typing import Any, Dict, List, Optional, Tuple

import networkx as nx


class FairnessProperty(Enum):
    """공정성 속성"""

    EF = "ef"
    EF1 = "ef1"
    EF11 = "ef11"
    EF11U = "ef11u"


@dataclass(frozen=True)
class PairWitness:
    """순서쌍 (agent, other) 에 대한 증인

    remove_own 은 T ⊆ A_agent, remove_other 는 G ⊆ A_other (없으면 None).
    """

    agent: str
    other: str
    holds: bool
    remove_own: Optional[str] = None
    remove_other: Optional[str] = None

    def to_dict(self) -> Dict[str, Any]:
        return {
            "agent": self.agent,
            "other": self.other,
            "holds": self.holds,
            "remove_own": [self.remove_own] if self.remove_own else [],
            "remove_other": [self.remove_other] if self.remove_other else [],
        }


@dataclass(frozen=True)
class FairnessVerdict:
    """공정성 판정 결과"""

    property: FairnessProperty
    holds: bool
    witnesses: Tuple[PairWitness, ...] = ()

    def violations(self) -> List[PairWitness]:
        return [witness for witness in self.witnesses if not witness.holds]

    def witness_for(self, agent: str, other: str) -> Optional[PairWitness]:
        for witness in self.witnesses:
            if witness.agent == agent and witness.other == other:
                return witness
        return None

    def to_dict(self) -> Dict[str, Any]:
        return {
            "property": self.property.value,
            "holds": self.holds,
            "witnesses": [witness.to_dict() for witness in self.witnesses],
            "violations": [[w.agent, w.other] for w in self.violations()],
        }


@dataclass
class EnvyGraph:
    """에이전트 간 방향 그래프 (envy / top-trading)"""

    graph: nx.DiGraph = field(default_factory=nx.DiGraph)

    @classmethod
    def from_edges(cls, agents, edges) -> "EnvyGraph":
        graph = nx.DiGraph()
        graph.add_nodes_from(agents)
        graph.add_edges_from(edges)
        return cls(graph)

    @property
    def nodes(self) -> List[str]:
        return list(self.graph.nodes)

    @property
    def edges(self) -> List[Tuple[str, str]]:
        return list(self.graph.edges)

    def edge_set(self) -> set:
        return set(self.graph.edges)

    def has_cycle(self) -> bool:
        return not nx.is_directed_acyclic_graph(self.graph)

    def sinks(self) -> List[str]:
        """나가는 간선이 없는 에이전트"""
        return [node for node in self.graph.nodes if self.graph.out_degree(node) == 0]

    def to_dict(self) -> Dict[str, Any]:
        return {
            "nodes": self.nodes,
            "edges": [[source, target] for source, target in self.edges],
            "acyclic": not self.has_cycle(),
            "sinks": self.sinks(),
        }
