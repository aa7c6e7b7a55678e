import random
from fractions import Fraction

import pytest

from engines.oracle import Oracle, _colex_subsets
from models.errors import AllocationMismatchError, EnumerationBudgetError
from models.fairness_models import FairnessProperty
from models.instance_models import Allocation, Category, Instance
from models.solver_models import WeightVector
from utils.generator import generate_instance


def test_colex_order():
    assert _colex_subsets(4, 2) == [(0, 1), (0, 2), (1, 2), (0, 3), (1, 3), (2, 3)]


def test_count_and_enumerate(oracle, good_and_chore, two_categories, envy_cycle):
    assert oracle.count_feasible(good_and_chore) == 2
    assert oracle.count_feasible(envy_cycle) == 24

    allocations = list(oracle.enumerate_feasible(two_categories))
    assert len(allocations) == 12
    assert len(set(allocations)) == 12
    assert all(two_categories.is_feasible(allocation) for allocation in allocations)


def test_enumerate_unpadded_instance_strips_dummies(oracle):
    instance = generate_instance(seed=2, category_sizes=[3], capacity_policy="min")
    allocations = list(oracle.enumerate_feasible(instance))
    assert len(allocations) == 6
    assert len(set(allocations)) == 6
    assert all(instance.is_feasible(allocation) for allocation in allocations)
    assert not any(item.startswith("__dummy_") for a in allocations for item in a.items())


def test_budget_is_enforced(two_categories):
    with pytest.raises(EnumerationBudgetError) as excinfo:
        list(Oracle(budget=5).enumerate_feasible(two_categories))
    assert (excinfo.value.required, excinfo.value.budget) == (12, 5)


def test_pareto_optimality(oracle, good_and_chore, two_categories, ef1_improvement, snapshot):
    assert oracle.is_pareto_optimal(two_categories, snapshot("two_categories", "initial"))
    assert oracle.is_pareto_optimal(two_categories, snapshot("two_categories", "alternate_final"))
    assert oracle.is_pareto_optimal(two_categories, snapshot("two_categories", "solver_final"))
    assert not oracle.is_pareto_optimal(ef1_improvement, snapshot("ef1_improvement", "ef1"))
    for allocation in oracle.enumerate_feasible(good_and_chore):
        assert oracle.is_pareto_optimal(good_and_chore, allocation)


def test_single_agent_allocation_is_pareto_optimal(oracle):
    instance = Instance(
        agents=("1",),
        categories=(Category("C1", 2, ("a", "b")),),
        utilities={"1": {"a": 1, "b": -1}},
    )
    allocations = list(oracle.enumerate_feasible(instance))
    assert allocations == [Allocation({"1": {"a", "b"}})]
    assert oracle.is_pareto_optimal(instance, allocations[0])


def test_find_allocation(oracle, checker, good_and_chore, two_categories):
    assert oracle.find_allocation(good_and_chore, [FairnessProperty.EF1]) is None
    found = oracle.find_allocation(good_and_chore, ["ef11", "po"])
    assert found is not None
    assert checker.check(good_and_chore, found, FairnessProperty.EF11).holds

    found = oracle.find_allocation(two_categories, ["EF", "po"])
    assert checker.check(two_categories, found, FairnessProperty.EF).holds
    assert oracle.is_pareto_optimal(two_categories, found)


def test_find_allocation_rejects_unknown_property(oracle, good_and_chore):
    with pytest.raises(ValueError):
        oracle.find_allocation(good_and_chore, ["ef2"])


def test_brute_force_w_maximal(oracle, two_categories, snapshot):
    best, winners = oracle.brute_force_w_maximal(two_categories, WeightVector.equal(two_categories.agents))
    assert best == Fraction(-3, 2)
    assert winners == [snapshot("two_categories", "initial")]

    _, winners = oracle.brute_force_w_maximal(two_categories, WeightVector.from_ratio("1", "2", Fraction(1, 2)))
    assert len(winners) == 4
    for name in ["initial", "alternate_final", "solver_final"]:
        assert snapshot("two_categories", name) in winners


def test_good_and_chore_has_two_w_maximal_allocations(oracle, good_and_chore):
    best, winners = oracle.brute_force_w_maximal(good_and_chore, WeightVector.equal(good_and_chore.agents))
    assert best == 0
    assert len(winners) == 2


# ----------------------------------------------------------------------
# 교환 사이클 분해
# ----------------------------------------------------------------------


def test_decomposition_two_categories(oracle, two_categories, snapshot):
    initial = snapshot("two_categories", "initial")
    cycles = oracle.exchange_cycle_decomposition(two_categories, initial, snapshot("two_categories", "alternate_final"))
    assert [(c.agents, c.items, c.category) for c in cycles] == [(("1", "2"), ("o6", "o5"), "C2")]

    cycles = oracle.exchange_cycle_decomposition(two_categories, initial, snapshot("two_categories", "solver_final"))
    assert [(c.agents, c.items, c.category) for c in cycles] == [(("1", "2"), ("o1", "o3"), "C1")]
    assert oracle.exchange_cycle_decomposition(two_categories, initial, initial) == []


def test_decomposition_three_agent_rotation(oracle):
    instance = Instance(
        agents=("1", "2", "3"),
        categories=(Category("C1", 1, ("a", "b", "c")),),
        utilities={agent: {"a": 0, "b": 0, "c": 0} for agent in ("1", "2", "3")},
    )
    source = Allocation({"1": {"a"}, "2": {"b"}, "3": {"c"}})
    target = Allocation({"1": {"c"}, "2": {"a"}, "3": {"b"}})
    cycles = oracle.exchange_cycle_decomposition(instance, source, target)
    assert len(cycles) == 1
    assert (cycles[0].agents, cycles[0].items) == (("1", "2", "3"), ("a", "b", "c"))
    assert cycles[0].moves() == [("a", "1", "2"), ("b", "2", "3"), ("c", "3", "1")]


def test_decomposition_rejects_mismatched_allocations(oracle, two_categories, snapshot):
    initial = snapshot("two_categories", "initial")
    with pytest.raises(AllocationMismatchError):
        oracle.exchange_cycle_decomposition(two_categories, initial, Allocation({"1": {"o1"}, "2": {"o2"}}))
    with pytest.raises(AllocationMismatchError):
        oracle.exchange_cycle_decomposition(
            two_categories, initial, Allocation({"1": {"o1", "o2", "o3"}, "2": {"o4", "o5", "o6"}})
        )


def random_deal(instance, rng):
    bundles = {agent: set() for agent in instance.agents}
    for category in instance.categories:
        items = list(category.items)
        rng.shuffle(items)
        for position, agent in enumerate(instance.agents):
            bundles[agent].update(items[position * category.capacity:(position + 1) * category.capacity])
    return Allocation(bundles)


def test_random_decompositions(oracle):
    rng = random.Random(99)
    for seed in range(200):
        agents = rng.randint(2, 4)
        sizes = [rng.randint(1, 5) for _ in range(rng.randint(1, 3))]
        instance = generate_instance(
            seed=seed, agents=agents, category_sizes=sizes, capacity_policy="random"
        ).pad_with_dummies()
        source, target = random_deal(instance, rng), random_deal(instance, rng)
        cycles = oracle.exchange_cycle_decomposition(instance, source, target)

        assert oracle.apply_cycles(source, cycles) == target, seed
        moved = [item for cycle in cycles for item in cycle.items]
        assert len(moved) == len(set(moved)), seed
        for cycle in cycles:
            assert len(cycle) >= 2, seed
            assert len(set(cycle.agents)) == len(cycle), seed
            assert {instance.category_of(item).id for item in cycle.items} == {cycle.category}, seed
            assert cycle.agents[0] == min(cycle.agents, key=instance.agents.index), seed


def test_ef11_and_po_allocation_always_exists(oracle, checker):
    rng = random.Random(17)
    for seed in range(150):
        sizes = [rng.randint(1, 3) for _ in range(rng.randint(1, 2))]
        instance = generate_instance(
            seed=seed, category_sizes=sizes, capacity_policy=rng.choice(["min", "max", "random"])
        )
        allocation = oracle.find_allocation(instance, ["ef11", "po"])
        assert allocation is not None, seed
        assert instance.is_feasible(allocation), seed
        assert checker.check(instance, allocation, FairnessProperty.EF11).holds, seed
        assert oracle.is_pareto_optimal(instance, allocation), seed
