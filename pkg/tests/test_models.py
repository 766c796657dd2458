from fractions import Fraction

import pytest

from budgeted_chores.errors import InvalidAllocation
from budgeted_chores.models import (
    Allocation,
    FractionalAllocation,
    aggregate,
    as_rational,
    density,
    density_order,
    format_rational,
    is_feasible,
)
from budgeted_chores.validation import build_instance


def test_as_rational_accepts_exact_forms():
    assert as_rational("3/4") == Fraction(3, 4)
    assert as_rational("0.5") == Fraction(1, 2)
    assert as_rational(7) == Fraction(7)
    assert as_rational(0.1) == Fraction(1, 10)
    with pytest.raises(TypeError):
        as_rational(True)
    with pytest.raises(ValueError):
        as_rational("")


def test_format_rational_uses_lowest_terms():
    assert format_rational(Fraction(2, 4)) == "1/2"
    assert format_rational(Fraction(8, 2)) == "4"


def test_aggregate_and_density():
    instance = build_instance([(3, 6), (2, 2), ("1/2", "1/3"), (4, 0), (2, 5)], budgets=[5])
    assert aggregate([], instance) == (0, 0)
    assert aggregate([0, 1], instance) == (5, 8)
    assert aggregate([2], instance) == (Fraction(1, 2), Fraction(1, 3))
    assert density(instance.chores[0]) == 2
    assert density(instance.chores[3]) == 0
    assert density(instance.chores[4]) == Fraction(5, 2)


def test_aggregate_is_additive_on_disjoint_bundles():
    instance = build_instance([(3, 6), (2, 2), (4, 4), (1, 9)], budgets=[5])
    left, right = aggregate([0, 3], instance), aggregate([1, 2], instance)
    assert aggregate([0, 1, 2, 3], instance) == (left[0] + right[0], left[1] + right[1])


def test_density_order_breaks_ties_by_id():
    instance = build_instance([(2, 2), (4, 4), (1, 3)], budgets=[5])
    assert density_order([0, 1, 2], instance) == [2, 0, 1]


def test_is_feasible_boundaries():
    instance = build_instance([(3, 1), (2, 1), (3, 1)], budgets=[5])
    assert is_feasible(Allocation.empty(instance), instance)
    assert is_feasible(Allocation.from_agent_bundles([[0, 1]], instance), instance)
    assert not is_feasible(Allocation.from_agent_bundles([[0, 2]], instance), instance)
    # the housekeeper has no budget
    assert is_feasible(Allocation.from_agent_bundles([[]], instance), instance)


def test_feasibility_is_monotone_under_removal():
    instance = build_instance([(3, 1), (2, 1)], budgets=[5])
    full = Allocation.from_agent_bundles([[0, 1]], instance)
    assert is_feasible(full, instance)
    assert is_feasible(Allocation.from_agent_bundles([[0]], instance), instance)


def test_allocation_rejects_overlapping_bundles():
    instance = build_instance([(1, 1), (1, 1)], budgets=[5, 5])
    with pytest.raises(InvalidAllocation):
        Allocation.from_agent_bundles([[0], [0, 1]], instance)


def test_allocation_round_trips_owner_vectors():
    allocation = Allocation.from_assignment([2, 0, 1, 2], n=2)
    assert allocation.bundles == (frozenset({1}), frozenset({2}), frozenset({0, 3}))
    assert allocation.owners(4) == [2, 0, 1, 2]
    assert allocation.housekeeper == frozenset({0, 3})


def test_fractional_allocation_housekeeper_row_and_validation():
    instance = build_instance([(10, 5), (2, 3)], budgets=[4])
    allocation = FractionalAllocation.from_agent_rows([[Fraction(2, 5), Fraction(0)]], m=2)
    assert allocation.row(1) == (Fraction(3, 5), Fraction(1))
    assert allocation.size(0, instance) == 4
    assert allocation.disutility(0, instance) == 2
    allocation.validate(instance)

    too_big = FractionalAllocation.from_agent_rows([[Fraction(1, 2), Fraction(0)]], m=2)
    with pytest.raises(InvalidAllocation):
        too_big.validate(instance)
