import pytest

from budgeted_chores.app import DD_LABEL, Algorithm, ChoreAllocationApp
from budgeted_chores.errors import WrongAgentCount
from budgeted_chores.fairness import EF1
from budgeted_chores.validation import build_instance


def test_solve_densest_first(trace_instance):
    outcome = ChoreAllocationApp().solve(trace_instance, Algorithm.DENSEST_FIRST)
    assert outcome.iterations == 4
    assert outcome.guaranteed == "EF2"
    assert outcome.guarantee_met
    assert outcome.report_for("EF1").satisfied
    assert [r.criterion for r in outcome.reports] == ["EF", "EFX", "EF1", "EF2"]
    assert not outcome.report_for("EF").satisfied
    assert outcome.special_cases == ["identical-budgets", "two-agents"]
    assert not outcome.divisible


def test_solve_efx_and_two_agent(trace_instance):
    app = ChoreAllocationApp()
    efx = app.solve(trace_instance, "efx")
    assert efx.guaranteed == "EFX"
    assert efx.guarantee_met
    assert efx.iterations == 2
    two = app.solve(trace_instance, "two-agent")
    assert two.guaranteed is None
    assert two.guarantee_met


def test_set_aside_zero_is_passed_to_the_greedy():
    instance = build_instance([(1, 0), (1, 2), (2, 2)], budgets=[3, 4, 5])
    plain = ChoreAllocationApp().solve(instance, "densest-first")
    aside = ChoreAllocationApp(set_aside_zero=True).solve(instance, "densest-first")
    assert plain.guaranteed == "EF2"
    assert aside.guaranteed == "EF1"
    assert 0 in aside.allocation.housekeeper
    assert aside.set_aside_zero


def test_solve_divisible_certifies_density_domination():
    instance = build_instance([(2, 3)], budgets=[4])
    outcome = ChoreAllocationApp().solve(instance, Algorithm.DIVISIBLE)
    assert outcome.divisible
    assert outcome.guaranteed == DD_LABEL
    assert outcome.guarantee_met
    assert outcome.certificate.tau == (2,)
    assert outcome.iterations == 1


def test_check_and_unknown_algorithm(trace_instance):
    app = ChoreAllocationApp()
    outcome = app.solve(trace_instance, "densest-first")
    assert app.check(outcome.allocation, EF1, trace_instance).satisfied
    with pytest.raises(ValueError):
        app.solve(trace_instance, "simplex")
    with pytest.raises(WrongAgentCount):
        app.solve(build_instance([(1, 1)], budgets=[1, 1, 1]), "two-agent")
