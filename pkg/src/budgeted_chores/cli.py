"""Command line interface for solving and checking chore allocations."""
from __future__ import annotations

import argparse
import logging
import sys
from pathlib import Path
from typing import List

from pydantic import ValidationError

from .app import DD_LABEL, Algorithm, ChoreAllocationApp, SolveOutcome
from .bench import run_bench, summarize
from .config import get_settings
from .errors import ChoreDivisionError, IntractableError, InstanceValidationError, InvalidAllocation
from .fairness import EnvyCriterion, EnvyKind
from .files import (
    AllocationRecord,
    BenchConfig,
    CertificateRecord,
    InstanceFile,
    ResultFile,
    SolverMetadata,
    read_model,
    write_model,
)
from .harness import GeneratorConfig, generate, oracle_allocations
from .models import Instance, is_feasible
from .report import render_report

logger = logging.getLogger(__name__)

EXIT_OK = 0
EXIT_VIOLATED = 1
EXIT_USAGE = 2
EXIT_INTRACTABLE = 3
EXIT_UNSOLVED = 4


def _criterion(text: str) -> EnvyCriterion:
    try:
        return EnvyCriterion.parse(text)
    except ValueError as exc:
        raise argparse.ArgumentTypeError(str(exc)) from exc


def _verify_criterion(text: str) -> EnvyCriterion | str:
    if text.strip().upper() == DD_LABEL:
        return DD_LABEL
    return _criterion(text)


def _load_instance(path: Path) -> tuple[InstanceFile, Instance]:
    document = read_model(path, InstanceFile)
    return document, document.to_instance()


def _build_result(outcome: SolveOutcome) -> ResultFile:
    instance = outcome.instance
    if outcome.fractional is not None:
        allocation = AllocationRecord.from_fractional(outcome.fractional, instance, outcome.certificate)
    else:
        assert outcome.allocation is not None
        allocation = AllocationRecord.from_allocation(outcome.allocation, instance)
    return ResultFile(
        allocation=allocation,
        certificates=[CertificateRecord.from_report(r, instance) for r in outcome.reports],
        metadata=SolverMetadata(
            algorithm=outcome.algorithm.value,
            iterations=outcome.iterations,
            elapsed_seconds=round(outcome.elapsed_seconds, 6),
            special_cases=outcome.special_cases,
            guaranteed=outcome.guaranteed,
            set_aside_zero=outcome.set_aside_zero,
            tau=list(outcome.certificate.tau) if outcome.certificate is not None else None,
        ),
    )


def _cmd_solve(args: argparse.Namespace) -> int:
    document, instance = _load_instance(args.input)
    algorithm = args.algorithm
    if algorithm is None:
        algorithm = Algorithm.DIVISIBLE if document.divisible else Algorithm.DENSEST_FIRST
    app = ChoreAllocationApp(set_aside_zero=args.set_aside_zero)
    outcome = app.solve(instance, algorithm)
    print(render_report(outcome.reports, instance, outcome=outcome))
    if args.output:
        write_model(args.output, _build_result(outcome))
    return EXIT_OK if outcome.guarantee_met else EXIT_VIOLATED


def _cmd_verify(args: argparse.Namespace) -> int:
    _, instance = _load_instance(args.input)
    result = read_model(args.allocation, ResultFile)
    app = ChoreAllocationApp()
    criterion: EnvyCriterion | str = args.criterion
    if result.allocation.divisible:
        fractional = result.allocation.to_fractional(instance)
        if criterion == DD_LABEL:
            tau = result.metadata.tau if result.metadata is not None else None
            if tau is None:
                raise InvalidAllocation("result file carries no counters to check DD against")
            certificate = result.allocation.to_certificate(instance, tau)
            report = app.certify_divisible(fractional, certificate, instance)[1]
        elif criterion.kind is EnvyKind.EF:
            report = app.certify_divisible(fractional, None, instance)[0]
        else:
            raise InvalidAllocation("fractional allocations can only be checked for EF or DD")
    else:
        if criterion == DD_LABEL:
            raise InvalidAllocation("DD applies to fractional allocations only")
        allocation = result.allocation.to_allocation(instance)
        if not is_feasible(allocation, instance):
            raise InvalidAllocation("allocation exceeds an agent budget")
        report = app.check(allocation, criterion, instance)
    print(render_report([report], instance))
    return EXIT_OK if report.satisfied else EXIT_VIOLATED


def _cmd_gen(args: argparse.Namespace) -> int:
    config = read_model(args.config, GeneratorConfig) if args.config else GeneratorConfig()
    config = config.with_seed(args.seed)
    instance = generate(config)
    divisible = args.divisible or config.subjective
    write_model(args.output, InstanceFile.from_instance(instance, divisible=divisible))
    logger.info("wrote instance with %d agents and %d chores to %s", instance.n, instance.m, args.output)
    return EXIT_OK


def _cmd_oracle(args: argparse.Namespace) -> int:
    _, instance = _load_instance(args.input)
    criterion: EnvyCriterion = args.criterion
    found = next(oracle_allocations(instance, criterion), None)
    if found is None:
        print(f"No feasible {criterion.label} allocation exists.")
        return EXIT_VIOLATED
    print(f"A feasible {criterion.label} allocation exists.")
    for index, bundle in enumerate(found.bundles):
        chores = ", ".join(instance.chores[c].label() for c in sorted(bundle)) or "-"
        print(f"  {instance.agent_label(index)}: {{{chores}}}")
    if args.output:
        app = ChoreAllocationApp()
        write_model(
            args.output,
            ResultFile(
                allocation=AllocationRecord.from_allocation(found, instance),
                certificates=[
                    CertificateRecord.from_report(r, instance) for r in app.certify(found, instance)
                ],
            ),
        )
    return EXIT_OK


def _cmd_bench(args: argparse.Namespace) -> int:
    config = read_model(args.config, BenchConfig)
    results = run_bench(config)
    summary = summarize(results)
    print(summary.to_string())
    if args.output:
        results.to_csv(args.output, index=False)
    failures = int(results["failed"].sum()) if not results.empty else 0
    if failures:
        print(f"{failures} run(s) failed or missed their guarantee")
        return EXIT_VIOLATED
    return EXIT_OK


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="budgeted-chores",
        description="Fair allocation of chores to agents with budget constraints",
    )
    parser.add_argument(
        "--log-level",
        default=None,
        help="Logging level (defaults to BUDGETED_CHORES_LOG_LEVEL or WARNING)",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    solve = sub.add_parser("solve", help="Compute an allocation and its fairness certificates")
    solve.add_argument(
        "--algorithm",
        choices=[algorithm.value for algorithm in Algorithm],
        default=None,
        help="Solver to run (densest-first, or divisible for divisible instance files)",
    )
    solve.add_argument("--in", dest="input", type=Path, required=True, help="Instance JSON file")
    solve.add_argument("--out", dest="output", type=Path, help="Write the result JSON here")
    solve.add_argument(
        "--set-aside-zero",
        action="store_true",
        help="Leave zero-disutility chores with the housekeeper",
    )
    solve.set_defaults(handler=_cmd_solve)

    check = sub.add_parser("verify", help="Check an allocation against an envy criterion")
    check.add_argument(
        "--criterion",
        type=_verify_criterion,
        required=True,
        help="ef, ef1, ef2, efk:K or efx; dd for divisible results",
    )
    check.add_argument("--in", dest="input", type=Path, required=True, help="Instance JSON file")
    check.add_argument("--allocation", type=Path, required=True, help="Result JSON file")
    check.set_defaults(handler=_cmd_verify)

    gen = sub.add_parser("gen", help="Generate a random instance")
    gen.add_argument("--seed", type=int, required=True)
    gen.add_argument("--config", type=Path, help="Generator configuration JSON")
    gen.add_argument("--out", dest="output", type=Path, required=True)
    gen.add_argument("--divisible", action="store_true", help="Mark the instance as divisible")
    gen.set_defaults(handler=_cmd_gen)

    oracle = sub.add_parser("oracle", help="Search all allocations for one meeting a criterion")
    oracle.add_argument("--criterion", type=_criterion, required=True)
    oracle.add_argument("--in", dest="input", type=Path, required=True)
    oracle.add_argument("--out", dest="output", type=Path, help="Write the allocation found here")
    oracle.set_defaults(handler=_cmd_oracle)

    bench = sub.add_parser("bench", help="Run solvers over generated instances")
    bench.add_argument("--config", type=Path, required=True, help="Bench configuration JSON")
    bench.add_argument("--out", dest="output", type=Path, help="Write per-run results as CSV")
    bench.set_defaults(handler=_cmd_bench)
    return parser


def main(argv: List[str] | None = None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return int(exc.code or 0)

    level = (args.log_level or get_settings().log_level).upper()
    logging.basicConfig(level=getattr(logging, level, logging.WARNING))

    try:
        return args.handler(args)
    except IntractableError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_INTRACTABLE
    except (InstanceValidationError, ValidationError, OSError, ValueError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except ChoreDivisionError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_UNSOLVED


if __name__ == "__main__":  # pragma: no cover - manual invocation helper
    raise SystemExit(main())
