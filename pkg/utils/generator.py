import logging
import math
import random
from fractions import Fraction
from typing import Dict, List, Optional, Sequence

from config.constants import CAPACITY_POLICIES, GENERATOR_DEFAULTS
from models.errors import GenerationError
from models.instance_models import Category, Instance

logger = logging.getLogger(__name__)


def _capacity(rng: random.Random, size: int, agents: int, policy: str) -> int:
    lower = math.ceil(size / agents)
    if policy == "min":
        return lower
    if policy == "max":
        return size
    return rng.randint(lower, size)


def _utility(rng: random.Random, low: int, high: int, sign: int) -> int:
    if sign > 0:
        return rng.randint(max(low, 0), high)
    if sign < 0:
        return rng.randint(low, min(high, 0))
    return rng.randint(low, high)


def generate_instance(
    seed: int = GENERATOR_DEFAULTS["seed"],
    agents: int = GENERATOR_DEFAULTS["agents"],
    category_sizes: Sequence[int] = tuple(GENERATOR_DEFAULTS["category_sizes"]),
    capacity_policy: str = GENERATOR_DEFAULTS["capacity_policy"],
    capacities: Optional[Sequence[int]] = None,
    utility_low: int = GENERATOR_DEFAULTS["utility_low"],
    utility_high: int = GENERATOR_DEFAULTS["utility_high"],
    same_sign: bool = False,
) -> Instance:
    """시드 고정 랜덤 인스턴스 생성

    capacities 를 주면 capacity_policy 대신 그대로 쓴다 (범위 밖이면 GenerationError).
    same_sign 이면 (에이전트, 카테고리)마다 부호를 하나로 고정한다.
    """
    if agents < 1:
        raise GenerationError(f"need at least one agent, got {agents}")
    if not category_sizes or any(size < 1 for size in category_sizes):
        raise GenerationError(f"category sizes must be positive, got {list(category_sizes)}")
    if utility_low > utility_high:
        raise GenerationError(f"utility range [{utility_low}, {utility_high}] is empty")
    if capacity_policy not in CAPACITY_POLICIES:
        raise GenerationError(
            f"unknown capacity policy {capacity_policy!r}, choose from {', '.join(CAPACITY_POLICIES)}"
        )
    if capacities is not None:
        if len(capacities) != len(category_sizes):
            raise GenerationError(
                f"{len(capacities)} capacities for {len(category_sizes)} categories"
            )
        for size, capacity in zip(category_sizes, capacities):
            if not math.ceil(size / agents) <= capacity <= size:
                raise GenerationError(
                    f"capacity {capacity} outside [{math.ceil(size / agents)}, {size}] for a category of {size} items"
                )

    rng = random.Random(seed)
    agent_ids = [str(k) for k in range(1, agents + 1)]
    categories: List[Category] = []
    for c, size in enumerate(category_sizes, start=1):
        capacity = capacities[c - 1] if capacities is not None else _capacity(rng, size, agents, capacity_policy)
        items = tuple(f"o{c}_{k}" for k in range(1, size + 1))
        categories.append(Category(id=f"C{c}", capacity=capacity, items=items))

    signs = [sign for sign, usable in ((1, utility_high >= 0), (-1, utility_low <= 0)) if usable]
    utilities: Dict[str, Dict[str, Fraction]] = {agent: {} for agent in agent_ids}
    for agent in agent_ids:
        for category in categories:
            sign = rng.choice(signs) if same_sign else 0
            for item in category.items:
                utilities[agent][item] = Fraction(_utility(rng, utility_low, utility_high, sign))

    instance = Instance(agents=tuple(agent_ids), categories=tuple(categories), utilities=utilities)
    logger.debug("generated instance seed=%s m=%d", seed, instance.m)
    return instance
