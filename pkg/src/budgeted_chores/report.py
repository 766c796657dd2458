"""Allocation reporting utilities."""
from __future__ import annotations

from typing import List, Optional

from .app import SolveOutcome
from .fairness import EnvyReport
from .models import Instance, bundle_disutility, bundle_size, format_rational


def describe_report(report: EnvyReport, instance: Instance) -> str:
    if report.satisfied:
        return f"[SATISFIED] {report.criterion}"
    line = f"[VIOLATED] {report.criterion}"
    witness = report.witness
    if witness is not None:
        chores = ", ".join(instance.chores[c].label() for c in sorted(witness.subset))
        line += (
            f": {instance.agent_label(witness.envier)} envies "
            f"{instance.agent_label(witness.envied)} -> {{{chores}}}"
        )
        if witness.fractions:
            shares = ", ".join(
                f"{format_rational(x)} of {instance.chores[c].label()}" for c, x in witness.fractions
            )
            line += f" ({shares})"
    return line


def render_report(
    reports: List[EnvyReport],
    instance: Instance,
    outcome: Optional[SolveOutcome] = None,
) -> str:
    """Return a human-readable summary of an allocation and its certificates."""

    header_lines = ["Chore Allocation Report"]
    header_lines.append(f"Agents: {instance.n}")
    header_lines.append(f"Chores: {instance.m}")
    if outcome:
        header_lines.append(f"Algorithm: {outcome.algorithm.value}")
        header_lines.append(f"Iterations: {outcome.iterations}")
        if outcome.special_cases:
            header_lines.append(f"Special cases: {', '.join(outcome.special_cases)}")
        header_lines.append(f"Guaranteed: {outcome.guaranteed or 'none'}")
        header_lines.extend(_bundle_lines(outcome, instance))

    if not reports:
        header_lines.append("No certificates computed.")
        return "\n".join(header_lines)

    lines = header_lines + ["Certificates:"]
    lines.extend(describe_report(report, instance) for report in reports)
    return "\n".join(lines)


def _bundle_lines(outcome: SolveOutcome, instance: Instance) -> List[str]:
    lines = ["Bundles:"]
    if outcome.allocation is not None:
        for index, bundle in enumerate(outcome.allocation.bundles):
            chores = ", ".join(instance.chores[c].label() for c in sorted(bundle)) or "-"
            lines.append(
                f"  {instance.agent_label(index)}: {{{chores}}} "
                f"size={format_rational(bundle_size(bundle, instance))} "
                f"disutility={format_rational(bundle_disutility(bundle, instance))}"
            )
    elif outcome.fractional is not None:
        for index in range(outcome.fractional.n + 1):
            row = outcome.fractional.row(index)
            shares = ", ".join(
                f"{format_rational(x)} {instance.chores[j].label()}" for j, x in enumerate(row) if x > 0
            ) or "-"
            lines.append(f"  {instance.agent_label(index)}: {shares}")
    return lines


__all__ = ["describe_report", "render_report"]
