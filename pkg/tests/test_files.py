import json
from fractions import Fraction

import pytest
from pydantic import ValidationError

from budgeted_chores.divisible import augment_instance, solve_divisible, verify_dd
from budgeted_chores.errors import InvalidAllocation
from budgeted_chores.fairness import EnvyReport, EnvyWitness
from budgeted_chores.files import (
    AllocationRecord,
    BenchConfig,
    CertificateRecord,
    InstanceFile,
    ResultFile,
    dump_model,
    read_model,
    write_model,
)
from budgeted_chores.models import Allocation, FractionalAllocation
from budgeted_chores.validation import build_instance


def test_instance_file_accepts_mixed_number_forms():
    document = InstanceFile.model_validate(
        {
            "agents": [{"name": "Ann", "budget": 5}, {"name": "Bo", "budget": "9/2"}],
            "chores": [{"size": "0.5", "disutility": 2}, {"name": "lawn", "size": 3, "disutility": "1/3"}],
        }
    )
    instance = document.to_instance()
    assert instance.budgets == (Fraction(5), Fraction(9, 2))
    assert instance.chores[0].size == Fraction(1, 2)
    assert instance.chores[1].label() == "lawn"
    assert instance.agent_label(1) == "Bo"


def test_instance_file_writes_rationals_as_strings():
    instance = build_instance([("1/2", 3)], budgets=["7/3"])
    payload = json.loads(dump_model(InstanceFile.from_instance(instance)))
    assert payload["agents"] == [{"budget": "7/3"}]
    assert payload["chores"] == [{"size": "1/2", "disutility": "3"}]
    assert payload["version"] == 1


def test_instance_file_round_trip(tmp_path):
    instance = build_instance([(3, 6), ("5/2", 0)], budgets=[5, 4], disutility_matrix=[[1, 2], ["1/2", 0]])
    path = tmp_path / "instance.json"
    write_model(path, InstanceFile.from_instance(instance, divisible=True))
    document = read_model(path, InstanceFile)
    assert document.divisible
    assert document.to_instance() == instance


@pytest.mark.parametrize(
    "payload",
    [
        {"version": 2, "agents": [{"budget": 1}]},
        {"agents": [{"budget": "one"}]},
        {"agents": [{"budget": 1}], "extra": True},
        {"agents": [{"budget": 1}], "chores": [{"size": 1}]},
    ],
)
def test_instance_file_rejects_bad_documents(payload):
    with pytest.raises(ValidationError):
        InstanceFile.model_validate(payload)


def test_allocation_record_uses_one_based_ids(trace_instance):
    allocation = Allocation.from_agent_bundles([[0], [1]], trace_instance)
    record = AllocationRecord.from_allocation(allocation, trace_instance)
    assert [b.chores for b in record.bundles] == [[1], [2]]
    assert record.housekeeper == [3]
    assert not record.divisible
    assert record.to_allocation(trace_instance) == allocation


def test_allocation_record_rejects_inconsistent_bundles(trace_instance):
    unknown = AllocationRecord.model_validate({"bundles": [{"agent": 1, "chores": [4]}]})
    with pytest.raises(InvalidAllocation):
        unknown.to_allocation(trace_instance)
    stray = AllocationRecord.model_validate({"bundles": [{"agent": 3, "chores": [1]}]})
    with pytest.raises(InvalidAllocation):
        stray.to_allocation(trace_instance)
    mismatch = AllocationRecord.model_validate(
        {"bundles": [{"agent": 1, "chores": [1]}], "housekeeper": [2]}
    )
    with pytest.raises(InvalidAllocation):
        mismatch.to_allocation(trace_instance)


def test_fractional_record_round_trip():
    instance = build_instance([(10, 5)], budgets=[4])
    fractional = FractionalAllocation.from_agent_rows([[Fraction(2, 5)]], 1)
    record = AllocationRecord.from_fractional(fractional, instance)
    assert record.divisible
    assert record.bundles[0].chores == [1]
    payload = json.loads(dump_model(ResultFile(allocation=record)))
    assert payload["allocation"]["fractions"] == [["2/5"], ["3/5"]]
    restored = ResultFile.model_validate(payload).allocation.to_fractional(instance)
    assert restored == fractional


def test_certificate_record_carries_witness(trace_instance):
    report = EnvyReport(False, "EF", EnvyWitness(2, 0, frozenset({2}), ((2, Fraction(1, 2)),)))
    record = CertificateRecord.from_report(report, trace_instance)
    assert record.witness.envier == 3
    assert record.witness.envier_name == "housekeeper"
    assert record.witness.chores == [3]
    assert json.loads(record.model_dump_json())["witness"]["shares"] == [{"chore": 3, "fraction": "1/2"}]


def test_bench_config_defaults():
    config = BenchConfig.model_validate({"generator": {"seed": 4}})
    assert config.count == 100
    assert config.algorithms == ["efx", "densest-first"]
    assert config.generator.seed == 4
    with pytest.raises(ValidationError):
        BenchConfig.model_validate({"count": 0})


def test_fractional_record_rebuilds_the_dd_certificate():
    instance = build_instance([(2, 3)], budgets=[4])
    fractional, certificate = solve_divisible(instance)
    record = AllocationRecord.from_fractional(fractional, instance, certificate)
    assert record.fictional == [Fraction(1, 4)]

    restored = ResultFile.model_validate_json(dump_model(ResultFile(allocation=record))).allocation
    rebuilt = restored.to_certificate(instance, certificate.tau)
    assert rebuilt == certificate
    assert verify_dd(rebuilt, augment_instance(instance))

    with pytest.raises(InvalidAllocation):
        AllocationRecord.from_fractional(fractional, instance).to_certificate(instance, (2,))
