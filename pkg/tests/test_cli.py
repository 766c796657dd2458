import json
from pathlib import Path

import pandas as pd

from budgeted_chores import cli

TRACE = {
    "version": 1,
    "agents": [{"name": "Ann", "budget": "5"}, {"name": "Bo", "budget": "5"}],
    "chores": [
        {"name": "dishes", "size": "3", "disutility": "6"},
        {"name": "laundry", "size": "2", "disutility": "2"},
        {"name": "lawn", "size": "4", "disutility": "4"},
    ],
}

LONE_CHORE = {
    "version": 1,
    "agents": [{"budget": 5}, {"budget": 5}],
    "chores": [{"size": 2, "disutility": 3}],
}


def test_solve_then_verify(write_json, tmp_path: Path, capsys):
    instance = write_json("instance.json", TRACE)
    result = tmp_path / "result.json"

    assert cli.main(["solve", "--algorithm", "densest-first", "--in", str(instance), "--out", str(result)]) == 0
    printed = capsys.readouterr().out
    assert "Guaranteed: EF2" in printed
    assert "[SATISFIED] EF1" in printed

    document = json.loads(result.read_text())
    assert [b["chores"] for b in document["allocation"]["bundles"]] == [[1], [2]]
    assert document["allocation"]["housekeeper"] == [3]
    assert document["metadata"]["iterations"] == 4
    assert "identical-budgets" in document["metadata"]["special_cases"]

    assert cli.main(["verify", "--criterion", "ef1", "--in", str(instance), "--allocation", str(result)]) == 0
    assert cli.main(["verify", "--criterion", "ef", "--in", str(instance), "--allocation", str(result)]) == 1
    assert "[VIOLATED] EF: Ann envies Bo -> {dishes}" in capsys.readouterr().out


def test_efx_result_round_trips(write_json, tmp_path: Path):
    instance = write_json("instance.json", TRACE)
    result = tmp_path / "efx.json"
    assert cli.main(["solve", "--algorithm", "efx", "--in", str(instance), "--out", str(result)]) == 0
    assert cli.main(["verify", "--criterion", "efx", "--in", str(instance), "--allocation", str(result)]) == 0
    assert cli.main(["verify", "--criterion", "efk:3", "--in", str(instance), "--allocation", str(result)]) == 0


def test_divisible_instance_defaults_to_the_lp_solver(write_json, tmp_path: Path):
    instance = write_json(
        "divisible.json",
        {"version": 1, "divisible": True, "agents": [{"budget": 4}], "chores": [{"size": 10, "disutility": 5}]},
    )
    result = tmp_path / "result.json"
    assert cli.main(["solve", "--in", str(instance), "--out", str(result)]) == 0

    document = json.loads(result.read_text())
    assert document["allocation"]["fractions"] == [["2/5"], ["3/5"]]
    assert document["metadata"]["tau"] == [1]
    assert {c["criterion"] for c in document["certificates"]} == {"EF", "DD"}

    assert cli.main(["verify", "--criterion", "ef", "--in", str(instance), "--allocation", str(result)]) == 0
    assert cli.main(["verify", "--criterion", "efx", "--in", str(instance), "--allocation", str(result)]) == 2

    assert document["allocation"]["fictional"] == ["0"]
    assert cli.main(["verify", "--criterion", "dd", "--in", str(instance), "--allocation", str(result)]) == 0
    document["allocation"]["fractions"] = [["1/5"], ["4/5"]]
    tampered = write_json("tampered.json", document)
    assert cli.main(["verify", "--criterion", "dd", "--in", str(instance), "--allocation", str(tampered)]) == 1


def test_dd_needs_a_fractional_result(write_json, tmp_path: Path):
    instance = write_json("instance.json", TRACE)
    result = tmp_path / "result.json"
    assert cli.main(["solve", "--in", str(instance), "--out", str(result)]) == 0
    assert cli.main(["verify", "--criterion", "dd", "--in", str(instance), "--allocation", str(result)]) == 2


def test_gen_is_reproducible(tmp_path: Path):
    first, second = tmp_path / "a.json", tmp_path / "b.json"
    assert cli.main(["gen", "--seed", "11", "--out", str(first)]) == 0
    assert cli.main(["gen", "--seed", "11", "--out", str(second)]) == 0
    assert first.read_bytes() == second.read_bytes()
    assert json.loads(first.read_text())["version"] == 1


def test_gen_with_config(write_json, tmp_path: Path):
    config = write_json("gen.json", {"agents_min": 3, "agents_max": 3, "chores_min": 4, "chores_max": 4})
    out = tmp_path / "instance.json"
    assert cli.main(["gen", "--seed", "2", "--config", str(config), "--out", str(out), "--divisible"]) == 0
    document = json.loads(out.read_text())
    assert len(document["agents"]) == 3
    assert len(document["chores"]) == 4
    assert document["divisible"] is True


def test_oracle_reports_existence(write_json, tmp_path: Path, capsys):
    instance = write_json("lone.json", LONE_CHORE)
    assert cli.main(["oracle", "--criterion", "ef", "--in", str(instance)]) == 1
    assert "No feasible EF allocation exists." in capsys.readouterr().out

    found = tmp_path / "found.json"
    assert cli.main(["oracle", "--criterion", "efx", "--in", str(instance), "--out", str(found)]) == 0
    assert json.loads(found.read_text())["allocation"]["bundles"][0]["chores"] == [1]


def test_bench_writes_csv(write_json, tmp_path: Path, capsys):
    config = write_json(
        "bench.json",
        {
            "generator": {"seed": 3, "agents_max": 3, "chores_max": 5},
            "count": 4,
            "algorithms": ["efx", "densest-first", "two-agent", "divisible"],
        },
    )
    csv_path = tmp_path / "bench.csv"
    assert cli.main(["bench", "--config", str(config), "--out", str(csv_path)]) == 0
    assert "mean_iterations" in capsys.readouterr().out
    frame = pd.read_csv(csv_path)
    assert len(frame) == 16
    assert not frame["failed"].any()


def test_invalid_input_exits_with_usage_error(write_json, tmp_path: Path):
    broken = dict(TRACE, chores=[{"size": "0", "disutility": "1"}])
    instance = write_json("broken.json", broken)
    assert cli.main(["solve", "--in", str(instance)]) == 2

    garbled = write_json("garbled.json", {"version": 1, "agents": [{"budget": "x/y"}]})
    assert cli.main(["solve", "--in", str(garbled)]) == 2
    assert cli.main(["solve", "--in", str(tmp_path / "missing.json")]) == 2


def test_bad_criterion_is_a_usage_error(write_json, tmp_path: Path):
    instance = write_json("instance.json", TRACE)
    assert cli.main(["verify", "--criterion", "efq", "--in", str(instance), "--allocation", str(instance)]) == 2


def test_two_agent_solver_rejects_three_agents(write_json):
    three = dict(TRACE, agents=[{"budget": 5}, {"budget": 5}, {"budget": 5}])
    instance = write_json("three.json", three)
    assert cli.main(["solve", "--algorithm", "two-agent", "--in", str(instance)]) == 2


def test_search_limits_exit_with_intractable(write_json, monkeypatch):
    monkeypatch.setenv("BUDGETED_CHORES_ENUMERATION_LIMIT", "0")
    monkeypatch.setenv("BUDGETED_CHORES_DP_CELL_CAP", "1")
    monkeypatch.setenv("BUDGETED_CHORES_ORACLE_CAP", "1")
    instance = write_json("instance.json", TRACE)
    assert cli.main(["solve", "--algorithm", "efx", "--in", str(instance)]) == 3
    assert cli.main(["oracle", "--criterion", "ef1", "--in", str(instance)]) == 3


def test_exhausted_counter_search_has_its_own_exit_code(write_json, capsys):
    instance = write_json(
        "stuck.json",
        {
            "version": 1,
            "divisible": True,
            "agents": [{"budget": 10}, {"budget": 9}, {"budget": 1}],
            "chores": [{"size": 4, "disutility": 13}],
        },
    )
    assert cli.main(["solve", "--in", str(instance)]) == cli.EXIT_UNSOLVED
    assert "no counter can be raised from tau=(2, 1, 2)" in capsys.readouterr().err
