"""On-disk documents: instance files, result files and bench configurations.

Numbers are read from integers, decimal strings or ``"p/q"`` strings and
written back as ``"p/q"`` (plain integers when the denominator is 1). Chore
and agent ids are 1-based in every document.
"""
from __future__ import annotations

import json
from fractions import Fraction
from pathlib import Path
from typing import Annotated, Any, List, Literal, Optional, Sequence, Type, TypeVar

from pydantic import BaseModel, ConfigDict, Field, PlainSerializer, PlainValidator

from .divisible import DDCertificate, augment_instance
from .errors import InvalidAllocation
from .fairness import EnvyReport, EnvyWitness
from .harness import GeneratorConfig
from .models import Allocation, FractionalAllocation, Instance, as_rational, format_rational
from .validation import validate_instance

FORMAT_VERSION = 1


def _parse_rational(value: Any) -> Fraction:
    try:
        return as_rational(value)
    except (TypeError, ZeroDivisionError) as exc:
        raise ValueError(f"{value!r} is not a rational number") from exc


Rational = Annotated[
    Fraction,
    PlainValidator(_parse_rational),
    PlainSerializer(format_rational, return_type=str),
]


class _Document(BaseModel):
    model_config = ConfigDict(arbitrary_types_allowed=True, extra="forbid")


class AgentRecord(_Document):
    name: Optional[str] = None
    budget: Rational


class ChoreRecord(_Document):
    name: Optional[str] = None
    size: Rational
    disutility: Rational


class InstanceFile(_Document):
    version: Literal[1] = FORMAT_VERSION
    divisible: bool = False
    agents: List[AgentRecord]
    chores: List[ChoreRecord] = Field(default_factory=list)
    disutility_matrix: Optional[List[List[Rational]]] = None

    def to_instance(self) -> Instance:
        names = [agent.name for agent in self.agents]
        return validate_instance(
            {
                "chores": [chore.model_dump(mode="python") for chore in self.chores],
                "budgets": [agent.budget for agent in self.agents],
                "disutility_matrix": self.disutility_matrix,
                "agent_names": names if all(names) else None,
            }
        )

    @classmethod
    def from_instance(cls, instance: Instance, divisible: bool = False) -> "InstanceFile":
        return cls(
            divisible=divisible,
            agents=[
                AgentRecord(
                    name=instance.agent_names[i] if instance.agent_names else None,
                    budget=budget,
                )
                for i, budget in enumerate(instance.budgets)
            ],
            chores=[
                ChoreRecord(name=c.name, size=c.size, disutility=c.disutility)
                for c in instance.chores
            ],
            disutility_matrix=(
                [list(row) for row in instance.disutility_matrix]
                if instance.disutility_matrix is not None
                else None
            ),
        )


class BundleRecord(_Document):
    agent: int
    name: Optional[str] = None
    chores: List[int] = Field(default_factory=list)


class AllocationRecord(_Document):
    bundles: List[BundleRecord] = Field(default_factory=list)
    housekeeper: List[int] = Field(default_factory=list)
    fractions: Optional[List[List[Rational]]] = None
    fictional: Optional[List[Rational]] = None

    @property
    def divisible(self) -> bool:
        return self.fractions is not None

    @classmethod
    def from_allocation(cls, allocation: Allocation, instance: Instance) -> "AllocationRecord":
        return cls(
            bundles=[
                BundleRecord(
                    agent=i + 1,
                    name=instance.agent_label(i),
                    chores=sorted(c + 1 for c in bundle),
                )
                for i, bundle in enumerate(allocation.agent_bundles)
            ],
            housekeeper=sorted(c + 1 for c in allocation.housekeeper),
        )

    @classmethod
    def from_fractional(
        cls,
        allocation: FractionalAllocation,
        instance: Instance,
        certificate: Optional[DDCertificate] = None,
    ) -> "AllocationRecord":
        fictional = None
        if certificate is not None:
            fictional = [certificate.allocation.row(i)[instance.m] for i in range(instance.n)]
        return cls(
            bundles=[
                BundleRecord(
                    agent=i + 1,
                    name=instance.agent_label(i),
                    chores=sorted(c + 1 for c in allocation.support(i)),
                )
                for i in range(allocation.n)
            ],
            housekeeper=sorted(c + 1 for c in allocation.support(allocation.n)),
            fractions=[list(row) for row in allocation.fractions],
            fictional=fictional,
        )

    def to_allocation(self, instance: Instance) -> Allocation:
        agent_bundles: List[List[int]] = [[] for _ in range(instance.n)]
        for record in self.bundles:
            if not 1 <= record.agent <= instance.n:
                raise InvalidAllocation(f"bundle for unknown agent {record.agent}")
            agent_bundles[record.agent - 1].extend(_chore_ids(record.chores, instance))
        allocation = Allocation.from_agent_bundles(agent_bundles, instance)
        listed = set(_chore_ids(self.housekeeper, instance))
        if self.housekeeper and listed != set(allocation.housekeeper):
            raise InvalidAllocation("housekeeper bundle does not match the unassigned chores")
        return allocation

    def to_fractional(self, instance: Instance) -> FractionalAllocation:
        if self.fractions is None:
            raise InvalidAllocation("allocation has no fraction matrix")
        allocation = FractionalAllocation(tuple(tuple(row) for row in self.fractions))
        allocation.validate(instance)
        return allocation

    def to_certificate(self, instance: Instance, tau: Sequence[int]) -> DDCertificate:
        """Rebuild the augmented allocation from the agents' shares of the fictional chore."""

        fractional = self.to_fractional(instance)
        if self.fictional is None or len(self.fictional) != instance.n:
            raise InvalidAllocation("allocation carries no shares of the fictional chore")
        rows = [list(fractional.row(i)) + [self.fictional[i]] for i in range(instance.n)]
        augmented = augment_instance(instance)
        allocation = FractionalAllocation.from_agent_rows(rows, augmented.m)
        allocation.validate(augmented)
        return DDCertificate(tuple(tau), allocation)


def _chore_ids(ids: Sequence[int], instance: Instance) -> List[int]:
    converted = []
    for chore in ids:
        if not 1 <= chore <= instance.m:
            raise InvalidAllocation(f"unknown chore {chore}")
        converted.append(chore - 1)
    return converted


class ShareRecord(_Document):
    chore: int
    fraction: Rational


class WitnessRecord(_Document):
    envier: int
    envied: int
    envier_name: str
    envied_name: str
    chores: List[int]
    shares: Optional[List[ShareRecord]] = None

    @classmethod
    def from_witness(cls, witness: EnvyWitness, instance: Instance) -> "WitnessRecord":
        return cls(
            envier=witness.envier + 1,
            envied=witness.envied + 1,
            envier_name=instance.agent_label(witness.envier),
            envied_name=instance.agent_label(witness.envied),
            chores=sorted(c + 1 for c in witness.subset),
            shares=(
                [ShareRecord(chore=c + 1, fraction=x) for c, x in witness.fractions]
                if witness.fractions is not None
                else None
            ),
        )


class CertificateRecord(_Document):
    criterion: str
    satisfied: bool
    witness: Optional[WitnessRecord] = None

    @classmethod
    def from_report(cls, report: EnvyReport, instance: Instance) -> "CertificateRecord":
        return cls(
            criterion=report.criterion,
            satisfied=report.satisfied,
            witness=(
                WitnessRecord.from_witness(report.witness, instance)
                if report.witness is not None
                else None
            ),
        )


class SolverMetadata(_Document):
    algorithm: str
    iterations: int = 0
    elapsed_seconds: float = 0.0
    special_cases: List[str] = Field(default_factory=list)
    guaranteed: Optional[str] = None
    set_aside_zero: bool = False
    tau: Optional[List[int]] = None


class ResultFile(_Document):
    version: Literal[1] = FORMAT_VERSION
    allocation: AllocationRecord
    certificates: List[CertificateRecord] = Field(default_factory=list)
    metadata: Optional[SolverMetadata] = None


class BenchConfig(_Document):
    generator: GeneratorConfig = Field(default_factory=GeneratorConfig)
    count: int = Field(100, ge=1)
    algorithms: List[str] = Field(default_factory=lambda: ["efx", "densest-first"])


ModelT = TypeVar("ModelT", bound=BaseModel)


def read_model(path: Path, model: Type[ModelT]) -> ModelT:
    return model.model_validate_json(Path(path).read_text(encoding="utf-8"))


def dump_model(document: BaseModel) -> str:
    payload = document.model_dump(mode="json", exclude_none=True)
    return json.dumps(payload, indent=2, ensure_ascii=False) + "\n"


def write_model(path: Path, document: BaseModel) -> None:
    Path(path).write_text(dump_model(document), encoding="utf-8")


__all__ = [
    "AgentRecord",
    "AllocationRecord",
    "BenchConfig",
    "BundleRecord",
    "CertificateRecord",
    "ChoreRecord",
    "FORMAT_VERSION",
    "InstanceFile",
    "ResultFile",
    "ShareRecord",
    "SolverMetadata",
    "WitnessRecord",
    "dump_model",
    "read_model",
    "write_model",
]
