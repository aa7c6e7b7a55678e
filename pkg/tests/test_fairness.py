import random
from fractions import Fraction

import pytest

from engines.oracle import Oracle
from engines.solver import preferred_item
from models.fairness_models import FairnessProperty
from models.instance_models import Allocation, Category, Instance, strip_dummies
from models.solver_models import WeightVector
from utils.generator import generate_instance

EF, EF1, EF11, EF11U = FairnessProperty.EF, FairnessProperty.EF1, FairnessProperty.EF11, FairnessProperty.EF11U


def test_envy_graph_with_cycle(checker, envy_cycle, snapshot):
    graph = checker.envy_graph(envy_cycle, snapshot("envy_cycle", "identity"))
    assert graph.edge_set() == {("1", "2"), ("2", "3"), ("3", "1"), ("3", "4")}
    assert graph.has_cycle()
    assert checker.sinks(graph) == ["4"]


def test_top_trading_graph_is_acyclic(checker, envy_cycle, snapshot):
    graph = checker.top_trading_graph(envy_cycle, snapshot("envy_cycle", "identity"))
    assert graph.edge_set() == {("1", "2"), ("2", "3"), ("3", "4")}
    assert not graph.has_cycle()


def test_envy_graph_of_initial_allocation(checker, two_categories, snapshot):
    graph = checker.envy_graph(two_categories, snapshot("two_categories", "initial"))
    assert graph.edge_set() == {("2", "1")}
    assert checker.envious_agents(two_categories, snapshot("two_categories", "initial")) == ["2"]


def test_graphs_of_envy_free_allocation_are_empty(checker, two_categories, snapshot):
    allocation = snapshot("two_categories", "solver_final")
    assert checker.envy_graph(two_categories, allocation).edges == []
    assert checker.top_trading_graph(two_categories, allocation).edges == []


def test_top_trading_single_edge(checker, good_and_chore):
    allocation = Allocation({"1": {"o2"}, "2": {"o1"}})
    assert checker.top_trading_graph(good_and_chore, allocation).edge_set() == {("1", "2")}


def test_top_trading_two_cycle(checker):
    # 둘 다 상대 묶음을 더 원함
    instance = Instance(
        agents=("1", "2"),
        categories=(Category("C1", 1, ("a", "b")),),
        utilities={"1": {"a": 1, "b": 0}, "2": {"a": 0, "b": 1}},
    )
    graph = checker.top_trading_graph(instance, Allocation({"1": {"b"}, "2": {"a"}}))
    assert graph.edge_set() == {("1", "2"), ("2", "1")}
    assert graph.has_cycle()


def test_good_and_chore_split_is_ef11_but_not_ef1(checker, good_and_chore, snapshot):
    allocation = snapshot("good_and_chore", "split")
    assert not checker.check(good_and_chore, allocation, EF1).holds
    verdict = checker.check(good_and_chore, allocation, EF11)
    assert verdict.holds
    witness = verdict.witness_for("2", "1")
    assert (witness.remove_own, witness.remove_other) == ("o2", "o1")
    assert checker.check(good_and_chore, allocation, EF11U).holds
    assert not checker.check(good_and_chore, allocation, EF).holds


def test_ef1_witnesses(checker, ef1_improvement, snapshot):
    verdict = checker.check(ef1_improvement, snapshot("ef1_improvement", "ef1"), EF1)
    assert verdict.holds
    assert verdict.witness_for("1", "2").remove_own == "o1"
    assert verdict.witness_for("2", "1").remove_own == "o3"
    assert verdict.to_dict()["violations"] == []


def test_pareto_improvement_breaks_ef1(checker, ef1_improvement, snapshot):
    before = snapshot("ef1_improvement", "ef1")
    after = snapshot("ef1_improvement", "improved")
    assert checker.is_pareto_improvement(ef1_improvement, before, after)
    verdict = checker.check(ef1_improvement, after, EF1)
    assert not verdict.holds
    assert [(w.agent, w.other) for w in verdict.violations()] == [("1", "2")]
    assert ef1_improvement.bundle_utility("1", after.bundle("1")) == -10
    assert ef1_improvement.bundle_utility("1", after.bundle("2")) == -7


def test_pareto_improvement_edge_cases(checker, two_categories, snapshot):
    initial = snapshot("two_categories", "initial")
    assert not checker.is_pareto_improvement(two_categories, initial, initial)
    assert not checker.is_pareto_improvement(two_categories, initial, snapshot("two_categories", "alternate_final"))


def test_repeated_matching_rounds(checker, repeated_matching, snapshot):
    assert checker.check(repeated_matching, snapshot("repeated_matching", "round1"), EF1).holds
    round2 = snapshot("repeated_matching", "round2")
    assert repeated_matching.bundle_utility("1", round2.bundle("1")) == -4
    assert repeated_matching.bundle_utility("1", round2.bundle("2")) == -1
    assert not checker.holds_for(repeated_matching, round2, "1", EF1)
    assert checker.holds_for(repeated_matching, round2, "2", EF1)


def test_top_trading_midrun_sink(checker, top_trading_overflow, snapshot):
    midrun = snapshot("top_trading_overflow", "midrun")
    assert checker.sinks(checker.envy_graph(top_trading_overflow, midrun)) == ["2"]
    assert not checker.is_ef_for(top_trading_overflow, midrun, "1")
    assert checker.is_ef_for(top_trading_overflow, midrun, "2")


def _random_allocations(seed, same_sign):
    rng = random.Random(seed)
    sizes = [rng.randint(1, 4) for _ in range(rng.randint(1, 2))]
    instance = generate_instance(seed=seed, category_sizes=sizes, capacity_policy="random", same_sign=same_sign)
    return instance, list(Oracle(budget=10_000).enumerate_feasible(instance))


def test_implications_and_witness_soundness(checker):
    for seed in range(30):
        instance, allocations = _random_allocations(seed, same_sign=False)
        for allocation in allocations:
            verdicts = {prop: checker.check(instance, allocation, prop) for prop in FairnessProperty}
            if verdicts[EF].holds:
                assert verdicts[EF1].holds and verdicts[EF11].holds
            if verdicts[EF1].holds or verdicts[EF11].holds:
                assert verdicts[EF11U].holds
            for verdict in verdicts.values():
                for w in verdict.witnesses:
                    if not w.holds:
                        continue
                    own = allocation.bundle(w.agent) - {w.remove_own}
                    other = allocation.bundle(w.other) - {w.remove_other}
                    assert instance.bundle_utility(w.agent, own) >= instance.bundle_utility(w.agent, other)
                    if verdict.property == EF11 and w.remove_own and w.remove_other:
                        assert instance.category_of(w.remove_own) == instance.category_of(w.remove_other)


def test_same_sign_ef1_equals_ef11(checker):
    for seed in range(30):
        instance, allocations = _random_allocations(seed, same_sign=True)
        assert instance.is_same_sign()
        for allocation in allocations:
            assert checker.check(instance, allocation, EF1).holds == checker.check(instance, allocation, EF11).holds


def test_uncategorized_reduction_ef11_is_ef1(checker):
    rng = random.Random(5)
    for _ in range(20):
        items = ["x", "y", "z"]
        utilities = {agent: {item: rng.randint(-5, 5) for item in items} for agent in ["1", "2"]}
        instance = Instance.from_uncategorized(["1", "2"], utilities, items)
        for allocation in Oracle().enumerate_feasible(instance):
            assert checker.check(instance, allocation, EF1).holds == checker.check(instance, allocation, EF11).holds


def _w_maximal_samples(seed):
    """(패딩된 인스턴스, w-최대 할당 목록) 랜덤 표본"""
    rng = random.Random(seed)
    agents = 3 if seed % 4 == 0 else 2
    sizes = [rng.randint(1, 3) for _ in range(1 if agents == 3 else rng.randint(1, 2))]
    instance = generate_instance(seed=seed, agents=agents, category_sizes=sizes, capacity_policy="random")
    padded = instance.pad_with_dummies()
    cuts = sorted(rng.sample(range(1, 12), agents - 1))
    parts = [b - a for a, b in zip([0] + cuts, cuts + [12])]
    weights = WeightVector({agent: Fraction(part, 12) for agent, part in zip(padded.agents, parts)})
    _, winners = Oracle(budget=100_000).brute_force_w_maximal(padded, weights)
    return padded, winners


def _exchangeable(instance, allocation, i, j):
    for o_i in allocation.bundle(i):
        for o_j in allocation.bundle(j):
            if instance.category_of(o_i).id == instance.category_of(o_j).id:
                yield o_i, o_j


@pytest.mark.slow
def test_w_maximal_pairs_follow_preference_cases():
    for seed in range(200):
        instance, winners = _w_maximal_samples(seed)
        for allocation in winners:
            for i in instance.agents:
                for j in instance.agents:
                    if i == j:
                        continue
                    for o_i, o_j in _exchangeable(instance, allocation, i, j):
                        if instance.u(j, o_i) >= instance.u(j, o_j):
                            assert instance.u(i, o_i) >= instance.u(i, o_j), seed
                        if instance.u(j, o_i) > instance.u(j, o_j):
                            assert instance.u(i, o_i) > instance.u(i, o_j), seed


@pytest.mark.slow
def test_envy_in_w_maximal_allocation_has_preferred_pair(checker):
    for seed in range(200):
        instance, winners = _w_maximal_samples(seed)
        for allocation in winners:
            for j, i in checker.envy_graph(instance, allocation).edges:
                assert any(
                    preferred_item(instance, o_i, o_j, i, j) == o_i
                    for o_i, o_j in _exchangeable(instance, allocation, i, j)
                ), seed


def test_stripping_dummies_keeps_verdicts(checker):
    oracle = Oracle(budget=10_000)
    for seed in range(40):
        rng = random.Random(seed)
        sizes = [rng.randint(1, 2) for _ in range(rng.randint(1, 2))]
        instance = generate_instance(seed=seed, category_sizes=sizes, capacity_policy="max")
        padded = instance.pad_with_dummies()
        assert padded.dummy_items
        for allocation in oracle.enumerate_feasible(padded):
            stripped = strip_dummies(instance, allocation)
            assert instance.is_feasible(stripped), seed
            for prop in (EF, EF1, EF11, EF11U):
                assert (
                    checker.check(padded, allocation, prop).holds
                    == checker.check(instance, stripped, prop).holds
                ), (seed, prop)
            assert oracle.is_pareto_optimal(padded, allocation) == oracle.is_pareto_optimal(instance, stripped), seed
