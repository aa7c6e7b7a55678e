from dataclasses import dataclass, field
from fractions import Fraction
from functools import total_ordering
from typing import Dict, Iterable, List, Mapping, Optional, Tuple

from models.errors import InvalidWeightsError, StalePairError
from models.instance_models import Allocation


@dataclass(frozen=True)
class WeightVector:
    """에이전트 가중치 w (각각 (0,1), 합 1)"""

    weights: Dict[str, Fraction]

    def __post_init__(self):
        weights = {agent: Fraction(value) for agent, value in dict(self.weights).items()}
        if not weights:
            raise InvalidWeightsError("empty weight vector")
        for agent, value in weights.items():
            if not 0 < value < 1:
                raise InvalidWeightsError(f"weight of {agent!r} is {value}, must lie in (0,1)")
        if sum(weights.values()) != 1:
            raise InvalidWeightsError(f"weights sum to {sum(weights.values())}, must sum to 1")
        object.__setattr__(self, "weights", weights)

    def __hash__(self) -> int:
        return hash(frozenset(self.weights.items()))

    def __getitem__(self, agent: str) -> Fraction:
        return self.weights[agent]

    @property
    def agents(self) -> Tuple[str, ...]:
        return tuple(self.weights)

    @classmethod
    def equal(cls, agents: Iterable[str]) -> "WeightVector":
        agents = list(agents)
        return cls({agent: Fraction(1, len(agents)) for agent in agents})

    @classmethod
    def from_ratio(cls, first: str, second: str, ratio: Fraction) -> "WeightVector":
        """w_first / w_second = ratio 인 두 에이전트 가중치"""
        ratio = Fraction(ratio)
        if ratio <= 0:
            raise InvalidWeightsError(f"weight ratio must be positive, got {ratio}")
        return cls({first: ratio / (1 + ratio), second: 1 / (1 + ratio)})

    def ratio(self, first: str, second: str) -> Fraction:
        return self.weights[first] / self.weights[second]


@dataclass(frozen=True)
class Slot:
    """G_w 의 왼쪽 정점: 에이전트 사본"""

    agent: str
    category: str
    copy: int


@dataclass(frozen=True)
class AssignmentGraph:
    """이분 그래프 G_w"""

    slots: Tuple[Slot, ...]
    items: Tuple[str, ...]
    edges: Dict[Tuple[int, int], Fraction]

    @property
    def size(self) -> int:
        return len(self.items)

    @property
    def edge_count(self) -> int:
        return len(self.edges)

    def weight(self, slot_index: int, item_index: int) -> Optional[Fraction]:
        return self.edges.get((slot_index, item_index))


@dataclass(frozen=True)
class Matching:
    """완전 매칭 (slot index, item index) 목록과 총 가중치"""

    pairs: Tuple[Tuple[int, int], ...]
    weight: Fraction


@total_ordering
@dataclass(frozen=True, eq=False)
class DifferenceRatio:
    """차이 비율 r_{j/i}: 정확한 유리수 또는 ±∞"""

    value: Optional[Fraction] = None
    infinity: int = 0

    @classmethod
    def finite(cls, value) -> "DifferenceRatio":
        return cls(Fraction(value), 0)

    @classmethod
    def positive_infinity(cls) -> "DifferenceRatio":
        return cls(None, 1)

    @classmethod
    def negative_infinity(cls) -> "DifferenceRatio":
        return cls(None, -1)

    @classmethod
    def of(cls, numerator: Fraction, denominator: Fraction) -> "DifferenceRatio":
        # 분자 0 이 우선
        if numerator == 0:
            return cls.finite(0)
        if denominator == 0:
            return cls.positive_infinity() if numerator > 0 else cls.negative_infinity()
        return cls.finite(Fraction(numerator) / Fraction(denominator))

    @property
    def is_finite(self) -> bool:
        return self.infinity == 0

    def _key(self) -> Tuple[int, Fraction]:
        return (self.infinity, self.value if self.is_finite else Fraction(0))

    @staticmethod
    def _coerce(other) -> Optional["DifferenceRatio"]:
        if isinstance(other, DifferenceRatio):
            return other
        if isinstance(other, (int, Fraction)) and not isinstance(other, bool):
            return DifferenceRatio.finite(other)
        return None

    def __eq__(self, other) -> bool:
        other = self._coerce(other)
        if other is None:
            return NotImplemented
        return self._key() == other._key()

    def __lt__(self, other) -> bool:
        other = self._coerce(other)
        if other is None:
            return NotImplemented
        return self._key() < other._key()

    def __hash__(self) -> int:
        return hash(self.value) if self.is_finite else hash(self._key())

    def __str__(self) -> str:
        if self.infinity > 0:
            return "inf"
        if self.infinity < 0:
            return "-inf"
        return str(self.value)


@dataclass(frozen=True)
class ExchangeablePair:
    """같은 카테고리의 교환 가능 쌍 (o1 ∈ A1, o2 ∈ A2)"""

    item_in_a1: str
    item_in_a2: str
    category: str
    ratio: DifferenceRatio
    preferred: Optional[str] = None

    @property
    def items(self) -> Tuple[str, str]:
        return (self.item_in_a1, self.item_in_a2)

    def touches(self, item: str) -> bool:
        return item == self.item_in_a1 or item == self.item_in_a2


@dataclass(frozen=True)
class ItemLine:
    """f_o(w1) = (u1(o) + u2(o)) w1 - u2(o)"""

    item: str
    slope: Fraction
    intercept: Fraction

    def evaluate(self, w1: Fraction) -> Fraction:
        return self.slope * Fraction(w1) + self.intercept

    def is_coincident(self, other: "ItemLine") -> bool:
        return self.slope == other.slope and self.intercept == other.intercept

    def intersection(self, other: "ItemLine") -> Optional[Fraction]:
        """교차점의 w1 (평행/일치하면 None)"""
        if self.slope == other.slope:
            return None
        return (other.intercept - self.intercept) / (self.slope - other.slope)


@dataclass(frozen=True)
class SolveStep:
    """트레이스 한 단계 (step 0 은 초기 할당)"""

    index: int
    allocation: Allocation
    pair: Optional[ExchangeablePair] = None
    weights: Optional[WeightVector] = None
    ef11: bool = False
    envious: Tuple[str, ...] = ()
    remaining_candidates: int = 0

    @property
    def ratio(self) -> Optional[DifferenceRatio]:
        return self.pair.ratio if self.pair else None


@dataclass
class SolveTrace:
    """재현 가능한 솔버 인증서"""

    agents: Tuple[str, ...]
    first_agent: str
    second_agent: str
    initial_weights: WeightVector
    agent_permutation: Dict[str, str] = field(default_factory=dict)
    steps: List[SolveStep] = field(default_factory=list)
    final: Optional[Allocation] = None

    @property
    def exchanges(self) -> List[ExchangeablePair]:
        return [step.pair for step in self.steps if step.pair is not None]

    @property
    def ratios(self) -> List[DifferenceRatio]:
        return [pair.ratio for pair in self.exchanges]

    def replay(self) -> Allocation:
        """초기 할당에 교환을 순서대로 적용"""
        if not self.steps:
            raise StalePairError("trace has no initial allocation")
        allocation = self.steps[0].allocation
        for pair in self.exchanges:
            allocation = allocation.swap(pair.item_in_a1, pair.item_in_a2)
        return allocation


@dataclass(frozen=True)
class ExchangeCycle:
    """교환 사이클: item j 는 agents[j] 에서 agents[j+1] 로 이동"""

    agents: Tuple[str, ...]
    items: Tuple[str, ...]
    category: str

    def __len__(self) -> int:
        return len(self.agents)

    def moves(self) -> List[Tuple[str, str, str]]:
        """(item, from agent, to agent) 목록"""
        size = len(self.agents)
        return [
            (self.items[k], self.agents[k], self.agents[(k + 1) % size]) for k in range(size)
        ]

    def apply(self, allocation: Allocation) -> Allocation:
        bundles = {agent: set(bundle) for agent, bundle in allocation.bundles.items()}
        for item, source, target in self.moves():
            if item not in bundles.get(source, set()):
                raise StalePairError(f"item {item!r} is not held by {source!r}")
            bundles[source].discard(item)
        for item, _, target in self.moves():
            bundles.setdefault(target, set()).add(item)
        return Allocation(bundles)

    def weight_change(self, utilities: Mapping[str, Mapping[str, Fraction]], weights: Mapping[str, Fraction]) -> Fraction:
        """사이클 적용 시 가중 합 변화량"""
        return sum(
            (
                Fraction(weights[target]) * utilities[target][item]
                - Fraction(weights[source]) * utilities[source][item]
                for item, source, target in self.moves()
            ),
            Fraction(0),
        )
