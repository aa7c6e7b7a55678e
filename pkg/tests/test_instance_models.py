from fractions import Fraction

import pytest

from models.errors import InvalidInstanceError, StalePairError, UnknownItemError
from models.instance_models import (
    Allocation,
    Category,
    Instance,
    pad_allocation,
    strip_dummies,
)


def make_instance(categories, utilities, agents=("1", "2")):
    return Instance(agents=agents, categories=tuple(categories), utilities=utilities)


def test_bundled_fixtures_are_valid(fixture_instance):
    for name in ["good_and_chore", "two_categories", "repeated_matching", "top_trading_overflow", "envy_cycle", "ef1_improvement"]:
        report = fixture_instance(name).validate()
        assert report.is_valid, report.summary()


def test_validate_collects_every_violation():
    instance = make_instance(
        [
            Category("C1", 1, ("a", "b", "c")),
            Category("C2", 3, ("d", "e")),
        ],
        {"1": {"a": 1, "b": 0, "c": 0, "d": 0, "e": 0, "zz": 1}, "2": {"a": 1, "b": 0, "c": 0, "d": 0}},
    )
    codes = instance.validate().codes()
    assert "capacity_below_lower_bound" in codes
    assert "capacity_above_category_size" in codes
    assert "unknown_utility_item" in codes
    assert "missing_utility" in codes


def test_validate_structural_violations():
    instance = make_instance(
        [Category("C1", 1, ("a", "b")), Category("C1", 1, ("a", "c")), Category("C3", 1, ())],
        {"1": {"a": 0, "b": 0, "c": 0}, "2": {"a": 0, "b": 0, "c": 0}, "3": {}},
    )
    codes = instance.validate().codes()
    assert "duplicate_category" in codes
    assert "duplicate_item" in codes
    assert "empty_category" in codes
    assert "unknown_utility_agent" in codes


def test_dummy_items_must_have_zero_utility():
    instance = make_instance(
        [Category("C1", 1, ("a", "d"), (False, True))],
        {"1": {"a": 1, "d": 2}, "2": {"a": 1, "d": 0}},
    )
    assert instance.validate().codes() == ["dummy_nonzero_utility"]


def test_real_items_cannot_use_reserved_prefix():
    instance = make_instance(
        [Category("C1", 2, ("a", "__dummy_C1_1"))],
        {"1": {"a": 1, "__dummy_C1_1": 0}, "2": {"a": 1, "__dummy_C1_1": 0}},
    )
    assert instance.validate().codes() == ["reserved_item_id"]
    with pytest.raises(InvalidInstanceError):
        instance.pad_with_dummies()


def test_padding_skips_existing_dummy_ids():
    instance = make_instance(
        [Category("C1", 2, ("a", "__dummy_C1_1"), (False, True))],
        {"1": {"a": 1, "__dummy_C1_1": 0}, "2": {"a": -1, "__dummy_C1_1": 0}},
    )
    assert instance.is_valid
    padded = instance.pad_with_dummies()
    assert padded.categories[0].items == ("a", "__dummy_C1_1", "__dummy_C1_2", "__dummy_C1_3")
    assert padded.categories[0].dummy_items == ("__dummy_C1_1", "__dummy_C1_2", "__dummy_C1_3")
    assert padded.is_valid
    allocation = Allocation({"1": {"a", "__dummy_C1_2"}, "2": {"__dummy_C1_1", "__dummy_C1_3"}})
    assert strip_dummies(instance, allocation) == Allocation({"1": {"a"}, "2": set()})


def test_require_valid_raises_with_report():
    instance = make_instance([Category("C1", 1, ("a", "b", "c"))], {"1": {}, "2": {}})
    with pytest.raises(InvalidInstanceError) as excinfo:
        instance.require_valid()
    assert "capacity_below_lower_bound" in excinfo.value.report.codes()


def test_unknown_item_is_a_key_error(two_categories):
    with pytest.raises(UnknownItemError):
        two_categories.u("1", "o99")
    with pytest.raises(KeyError):
        two_categories.category_of("o99")


def test_bundle_utilities_of_ef1_allocation(ef1_improvement, snapshot):
    allocation = snapshot("ef1_improvement", "ef1")
    assert ef1_improvement.bundle_utility("1", allocation.bundle("1")) == -10
    assert ef1_improvement.bundle_utility("1", allocation.bundle("2")) == -7
    assert ef1_improvement.bundle_utility("2", allocation.bundle("1")) == -2
    assert ef1_improvement.bundle_utility("2", allocation.bundle("2")) == -4


def test_weighted_welfare_of_initial_allocation(two_categories, snapshot):
    allocation = snapshot("two_categories", "initial")
    weights = {"1": Fraction(1, 2), "2": Fraction(1, 2)}
    assert two_categories.weighted_welfare(allocation, weights) == Fraction(-3, 2)


def test_feasibility_of_snapshots(two_categories, top_trading_overflow, snapshot):
    assert two_categories.is_feasible(snapshot("two_categories", "initial"))
    midrun = snapshot("top_trading_overflow", "midrun")
    assert not top_trading_overflow.is_feasible(midrun)
    assert top_trading_overflow.is_partial_feasible(midrun)

    overflow = snapshot("top_trading_overflow", "overflow")
    assert not top_trading_overflow.is_feasible(overflow)
    assert not top_trading_overflow.is_partial_feasible(overflow)


def test_infeasible_when_item_given_twice(two_categories):
    allocation = Allocation({"1": {"o1", "o2", "o6"}, "2": {"o1", "o3", "o4", "o5"}})
    assert not two_categories.is_feasible(allocation)


def test_pad_with_dummies_fills_categories():
    instance = make_instance(
        [Category("C1", 2, ("a", "b", "c")), Category("C2", 1, ("d", "e"))],
        {"1": {"a": 1, "b": -1, "c": 2, "d": 0, "e": 3}, "2": {"a": 0, "b": 0, "c": 1, "d": -1, "e": 0}},
    )
    assert not instance.is_padded
    padded = instance.pad_with_dummies()
    assert padded.is_padded
    assert padded.categories[0].items == ("a", "b", "c", "__dummy_C1_1")
    assert padded.categories[0].dummy_items == ("__dummy_C1_1",)
    assert padded.categories[1].dummy_items == ()
    assert padded.u("1", "__dummy_C1_1") == 0
    assert padded.u("2", "__dummy_C1_1") == 0
    assert padded.is_valid


def test_pad_with_dummies_is_identity_on_padded_instance(two_categories):
    assert two_categories.pad_with_dummies() is two_categories


def test_pad_with_dummies_rejects_invalid_instance():
    instance = make_instance([Category("C1", 1, ("a", "b", "c"))], {"1": {}, "2": {}})
    with pytest.raises(InvalidInstanceError):
        instance.pad_with_dummies()


def test_pad_and_strip_allocation():
    instance = make_instance(
        [Category("C1", 2, ("a", "b", "c"))],
        {"1": {"a": 1, "b": 1, "c": 1}, "2": {"a": 1, "b": 1, "c": 1}},
    )
    padded = instance.pad_with_dummies()
    allocation = Allocation({"1": {"a", "b"}, "2": {"c"}})
    full = pad_allocation(padded, allocation)
    assert full.bundle("2") == frozenset({"c", "__dummy_C1_1"})
    assert padded.is_feasible(full)
    assert strip_dummies(instance, full) == allocation


def test_same_sign(good_and_chore, two_categories, top_trading_overflow):
    assert two_categories.is_same_sign()
    assert top_trading_overflow.is_same_sign()
    assert not good_and_chore.is_same_sign()


def test_swap_and_stale_swap(two_categories, snapshot):
    initial = snapshot("two_categories", "initial")
    swapped = initial.swap("o6", "o5")
    assert swapped == snapshot("two_categories", "alternate_final")
    assert swapped.swap("o6", "o5") == initial
    with pytest.raises(StalePairError):
        initial.swap("o1", "o2")


def test_feasible_allocation_count(good_and_chore, two_categories, envy_cycle):
    assert good_and_chore.feasible_allocation_count() == 2
    assert two_categories.feasible_allocation_count() == 12
    assert envy_cycle.feasible_allocation_count() == 24


def test_exchange_bound(good_and_chore, two_categories, ef1_improvement):
    assert good_and_chore.exchange_bound() == 1
    assert two_categories.exchange_bound() == 5
    assert ef1_improvement.exchange_bound() == 64


def test_from_uncategorized():
    instance = Instance.from_uncategorized(
        ["1", "2"], {"1": {"x": 1, "y": -2, "z": 0}, "2": {"x": -1, "y": 3, "z": 2}}
    )
    assert [category.id for category in instance.categories] == ["C_x", "C_y", "C_z"]
    assert all(category.capacity == 1 for category in instance.categories)
    assert instance.is_valid
    assert instance.pad_with_dummies().m == 6


def test_sort_items_uses_instance_order(two_categories):
    assert two_categories.sort_items({"o6", "o1", "o4"}) == ["o1", "o4", "o6"]
