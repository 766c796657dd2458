from budgeted_chores.app import ChoreAllocationApp
from budgeted_chores.bench import run_bench, summarize
from budgeted_chores.errors import CounterSearchExhausted, InternalInvariantViolation
from budgeted_chores.files import BenchConfig
from budgeted_chores.harness import GeneratorConfig


def test_run_bench_columns_and_bounds():
    config = BenchConfig(
        generator=GeneratorConfig(seed=10, agents_max=3, chores_max=6),
        count=6,
        algorithms=["densest-first", "two-agent", "divisible"],
    )
    results = run_bench(config)
    assert len(results) == 18
    assert {"algorithm", "seed", "status", "iterations", "within_bound", "guarantee_met", "failed"} <= set(
        results.columns
    )
    solved = results[results["status"] == "solved"]
    assert solved["within_bound"].astype(bool).all()
    assert not results["failed"].astype(bool).any()
    assert set(results["status"]) <= {"solved", "exhausted"}
    assert (results[results["algorithm"] != "divisible"]["status"] == "solved").all()
    assert (results[results["algorithm"] == "two-agent"]["agents"] == 2).all()
    assert list(results[results["algorithm"] == "densest-first"]["seed"]) == list(range(10, 16))


class _ExhaustedApp(ChoreAllocationApp):
    def solve(self, instance, algorithm):
        raise CounterSearchExhausted([2] * instance.n)


class _BrokenApp(ChoreAllocationApp):
    def solve(self, instance, algorithm):
        raise InternalInvariantViolation("certificate rejected")


def test_exhausted_runs_are_recorded():
    config = BenchConfig(generator=GeneratorConfig(seed=4, chores_max=4), count=3, algorithms=["divisible"])
    results = run_bench(config, app=_ExhaustedApp())
    assert len(results) == 3
    assert (results["status"] == "exhausted").all()
    assert not results["failed"].astype(bool).any()
    assert results["error"].str.startswith("no counter can be raised").all()
    summary = summarize(results)
    assert summary.loc["divisible", "unsolved"] == 3
    assert summary.loc["divisible", "failures"] == 0


def test_summarize_groups_by_algorithm():
    config = BenchConfig(generator=GeneratorConfig(seed=1, chores_max=4), count=3, algorithms=["efx", "densest-first"])
    summary = summarize(run_bench(config))
    assert list(summary.index) == ["densest-first", "efx"]
    assert (summary["runs"] == 3).all()
    assert (summary["unsolved"] == 0).all()
    assert (summary["failures"] == 0).all()


def test_summarize_empty_frame():
    config = BenchConfig(count=1, algorithms=[])
    assert summarize(run_bench(config)).empty


def test_unexpected_errors_count_as_failures():
    config = BenchConfig(generator=GeneratorConfig(seed=4, chores_max=4), count=2, algorithms=["efx"])
    results = run_bench(config, app=_BrokenApp())
    assert list(results["status"]) == ["error", "error"]
    assert results["failed"].astype(bool).all()
    assert summarize(results).loc["efx", "failures"] == 2
