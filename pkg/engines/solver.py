import logging
from typing import Dict, Iterable, List, Optional, Tuple

from config.settings import Settings, load_settings
from models.errors import (
    EmptyCandidateListError,
    SolverInvariantError,
    StalePairError,
    UnsupportedAgentCountError,
)
from models.fairness_models import FairnessProperty
from models.instance_models import Allocation, Instance, strip_dummies
from models.solver_models import (
    DifferenceRatio,
    ExchangeablePair,
    ItemLine,
    SolveStep,
    SolveTrace,
    WeightVector,
)

logger = logging.getLogger(__name__)


def _require_two_agents(instance: Instance):
    if instance.n != 2:
        raise UnsupportedAgentCountError(instance.n)


def difference_ratio(
    instance: Instance, j: str, i: str, o_i: str, o_j: str
) -> DifferenceRatio:
    """r_{j/i}(o_i, o_j) = (u_j(o_i) - u_j(o_j)) / (u_i(o_i) - u_i(o_j))"""
    return DifferenceRatio.of(
        instance.u(j, o_i) - instance.u(j, o_j),
        instance.u(i, o_i) - instance.u(i, o_j),
    )


def preferred_item(
    instance: Instance, o_i: str, o_j: str, i: str, j: str
) -> Optional[str]:
    """두 에이전트 모두 엄격히 선호하는 아이템 (없으면 None)"""
    if instance.u(i, o_i) > instance.u(i, o_j) and instance.u(j, o_i) > instance.u(j, o_j):
        return o_i
    if instance.u(i, o_j) > instance.u(i, o_i) and instance.u(j, o_j) > instance.u(j, o_i):
        return o_j
    return None


def exchangeable_pairs(
    instance: Instance, allocation: Allocation, i: str, j: str
) -> List[Tuple[str, str]]:
    """같은 카테고리의 (o_i ∈ A_i, o_j ∈ A_j) 쌍, 인스턴스 순서"""
    pairs = []
    for category in instance.categories:
        own = [o for o in category.items if o in allocation.bundle(i)]
        other = [o for o in category.items if o in allocation.bundle(j)]
        pairs.extend((o_i, o_j) for o_i in own for o_j in other)
    return pairs


def _make_pair(
    instance: Instance, o1: str, o2: str, first: str, second: str
) -> ExchangeablePair:
    return ExchangeablePair(
        item_in_a1=o1,
        item_in_a2=o2,
        category=instance.category_of(o1).id,
        ratio=difference_ratio(instance, second, first, o1, o2),
        preferred=preferred_item(instance, o1, o2, first, second),
    )


def _pair_key(instance: Instance, pair: ExchangeablePair) -> Tuple[int, int, int]:
    return (
        instance.category_index[pair.category],
        instance.item_index[pair.item_in_a1],
        instance.item_index[pair.item_in_a2],
    )


def candidate_pairs(
    instance: Instance,
    allocation: Allocation,
    first: Optional[str] = None,
    second: Optional[str] = None,
) -> List[ExchangeablePair]:
    """u_2(o1) > u_2(o2) 인 교환 가능 쌍 (second 가 질투하는 에이전트)"""
    _require_two_agents(instance)
    first = first or instance.agents[0]
    second = second or instance.agents[1]
    return [
        _make_pair(instance, o1, o2, first, second)
        for o1, o2 in exchangeable_pairs(instance, allocation, first, second)
        if instance.u(second, o1) > instance.u(second, o2)
    ]


def select_current_pair(
    pairs: Iterable[ExchangeablePair], instance: Optional[Instance] = None
) -> ExchangeablePair:
    """최대 비율 쌍, 동률이면 (카테고리, A1 아이템, A2 아이템) 순"""
    pairs = list(pairs)
    if not pairs:
        raise EmptyCandidateListError("no exchangeable pair left to select")
    best = max(pair.ratio for pair in pairs)
    tied = [pair for pair in pairs if pair.ratio == best]
    if instance is None:
        return min(tied, key=lambda pair: (pair.category, pair.item_in_a1, pair.item_in_a2))
    return min(tied, key=lambda pair: _pair_key(instance, pair))


def apply_exchange(
    allocation: Allocation,
    pair: ExchangeablePair,
    first: Optional[str] = None,
    second: Optional[str] = None,
) -> Allocation:
    """교환 쌍을 두 묶음 사이에서 맞바꿈"""
    first = first or allocation.agents[0]
    second = second or allocation.agents[1]
    if pair.item_in_a1 not in allocation.bundle(first) or pair.item_in_a2 not in allocation.bundle(second):
        raise StalePairError(
            f"pair ({pair.item_in_a1}, {pair.item_in_a2}) is not held by ({first}, {second})"
        )
    return allocation.swap(pair.item_in_a1, pair.item_in_a2)


def item_line(instance: Instance, item: str) -> ItemLine:
    """f_o(w1) = (u1(o) + u2(o)) w1 - u2(o)"""
    _require_two_agents(instance)
    first, second = instance.agents
    return ItemLine(
        item=item,
        slope=instance.u(first, item) + instance.u(second, item),
        intercept=-instance.u(second, item),
    )


class Solver:
    """두 에이전트 EF[1,1] + PO 솔버"""

    def __init__(self, settings: Optional[Settings] = None, certify_steps: Optional[bool] = None):
        self.settings = settings or load_settings()
        self.certify_steps = (
            self.settings.certify_steps if certify_steps is None else certify_steps
        )

        # 하위 엔진 (lazy loading)
        self._matching_engine = None
        self._fairness_checker = None

    @property
    def matching_engine(self):
        if self._matching_engine is None:
            from engines.matching_engine import MatchingEngine

            self._matching_engine = MatchingEngine()
        return self._matching_engine

    @property
    def fairness_checker(self):
        if self._fairness_checker is None:
            from engines.fairness import FairnessChecker

            self._fairness_checker = FairnessChecker()
        return self._fairness_checker

    def solve(self, instance: Instance) -> Tuple[Allocation, SolveTrace]:
        """w = (1/2, 1/2) 최대 할당에서 시작해 EF[1,1] 이 될 때까지 교환"""
        _require_two_agents(instance)
        instance.require_valid()
        padded = instance.pad_with_dummies()
        weights = WeightVector.equal(padded.agents)
        logger.info("solve: %d items in %d categories", padded.m, len(padded.categories))

        allocation = self.matching_engine.w_maximal_allocation(padded, weights)
        first, second = padded.agents
        trace = SolveTrace(
            agents=padded.agents,
            first_agent=first,
            second_agent=second,
            initial_weights=weights,
            agent_permutation={first: first, second: second},
        )

        ef11 = self._is_ef11(padded, allocation)
        envious = self.fairness_checker.envious_agents(padded, allocation)
        if len(envious) > 1:
            raise SolverInvariantError("initial allocation has mutual envy", trace)

        if not ef11 and not self.fairness_checker.is_ef_for(padded, allocation, first):
            # 질투하는 쪽을 agent 2 로
            first, second = second, first
            trace.first_agent, trace.second_agent = first, second
            trace.agent_permutation = {second: first, first: second}
            logger.info("orientation: %s is the envious agent", second)

        candidates = [] if ef11 else candidate_pairs(padded, allocation, first, second)
        self._check_candidates(padded, candidates, first, trace)
        trace.steps.append(
            SolveStep(
                index=0,
                allocation=allocation,
                weights=weights,
                ef11=ef11,
                envious=tuple(envious),
                remaining_candidates=len(candidates),
            )
        )

        guard = padded.exchange_bound()
        previous: Optional[DifferenceRatio] = None
        while not ef11:
            if len(trace.exchanges) >= guard:
                raise SolverInvariantError(
                    f"exchange loop exceeded {guard} exchanges", trace
                )
            try:
                pair = select_current_pair(candidates, padded)
            except EmptyCandidateListError as e:
                raise SolverInvariantError(
                    "candidate pairs exhausted before reaching EF[1,1]", trace
                ) from e

            if previous is not None and previous < pair.ratio:
                raise SolverInvariantError(
                    f"selected ratio {pair.ratio} exceeds previous {previous}", trace
                )
            previous = pair.ratio

            allocation = apply_exchange(allocation, pair, first, second)
            candidates = self._refresh_candidates(padded, allocation, candidates, pair, first, second)
            self._check_candidates(padded, candidates, first, trace)

            shifted = WeightVector.from_ratio(first, second, pair.ratio.value)
            if self.certify_steps and not self.matching_engine.is_w_maximal(padded, allocation, shifted):
                raise SolverInvariantError(
                    f"allocation after exchanging {pair.items} is not w-maximal at ratio {pair.ratio}",
                    trace,
                )

            ef11 = self._is_ef11(padded, allocation)
            envious = self.fairness_checker.envious_agents(padded, allocation)
            trace.steps.append(
                SolveStep(
                    index=len(trace.steps),
                    allocation=allocation,
                    pair=pair,
                    weights=shifted,
                    ef11=ef11,
                    envious=tuple(envious),
                    remaining_candidates=len(candidates),
                )
            )
            logger.info(
                "exchange %d: %s <-> %s (ratio %s)",
                len(trace.steps) - 1,
                pair.item_in_a1,
                pair.item_in_a2,
                pair.ratio,
            )
            if len(envious) > 1:
                raise SolverInvariantError("both agents envy each other after an exchange", trace)

        trace.final = allocation
        logger.info("solve finished after %d exchanges", len(trace.exchanges))
        return strip_dummies(instance, allocation), trace

    def _is_ef11(self, instance: Instance, allocation: Allocation) -> bool:
        return self.fairness_checker.check(instance, allocation, FairnessProperty.EF11).holds

    def _refresh_candidates(
        self,
        instance: Instance,
        allocation: Allocation,
        candidates: List[ExchangeablePair],
        exchanged: ExchangeablePair,
        first: str,
        second: str,
    ) -> List[ExchangeablePair]:
        """교환된 두 아이템이 걸린 쌍만 다시 계산"""
        o1, o2 = exchanged.items
        kept = [pair for pair in candidates if not (pair.touches(o1) or pair.touches(o2))]

        category = instance.category_of(o1)
        own = [o for o in category.items if o in allocation.bundle(first)]
        other = [o for o in category.items if o in allocation.bundle(second)]
        fresh: Dict[Tuple[str, str], ExchangeablePair] = {}
        for x in own:
            for y in other:
                if (x in (o1, o2) or y in (o1, o2)) and instance.u(second, x) > instance.u(second, y):
                    fresh[(x, y)] = _make_pair(instance, x, y, first, second)

        logger.debug("candidates: %d kept, %d recomputed", len(kept), len(fresh))
        return sorted(kept + list(fresh.values()), key=lambda pair: _pair_key(instance, pair))

    @staticmethod
    def _check_candidates(
        instance: Instance, candidates: List[ExchangeablePair], first: str, trace: SolveTrace
    ):
        # w-maximal 할당에서는 u2(o1) > u2(o2) 이면 u1(o1) > u1(o2)
        for pair in candidates:
            if instance.u(first, pair.item_in_a1) <= instance.u(first, pair.item_in_a2):
                raise SolverInvariantError(
                    f"candidate {pair.items} is not preferred by both agents", trace
                )
