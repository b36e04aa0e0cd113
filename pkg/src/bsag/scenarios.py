"""Scenario execution, reference verification, and risk ranking."""

from __future__ import annotations

from dataclasses import dataclass

from .errors import AspectSetMismatch, MissingImpact
from .graph import aspect_sort_key
from .inference import (
    ENUMERATION_CAP,
    CompiledNetwork,
    MarginalReport,
    ancestral_subnetwork,
    enumerate_oracle,
    query_marginals,
)
from .model import Model, Scenario
from .render import format_probability

DEFAULT_TOLERANCE = 0.002


def run_scenario(model: Model, name: str, include_origin: bool = False) -> MarginalReport:
    """Compile the model and query marginals under the scenario's evidence."""
    scenario = model.scenario(name)
    net = model.compile()
    return query_marginals(net, scenario.evidence, include_origin=include_origin)


@dataclass(frozen=True)
class VerificationRow:
    aspect: str
    computed: float
    reference: float
    delta: float
    passed: bool
    oracle: float | None = None


@dataclass(frozen=True)
class VerificationReport:
    scenario: str
    tolerance: float
    rows: tuple[VerificationRow, ...]

    @property
    def passed(self) -> bool:
        return all(row.passed for row in self.rows)

    def failures(self) -> list[VerificationRow]:
        return [row for row in self.rows if not row.passed]

    def to_csv(self, precision: int = 3) -> str:
        lines = ["aspect,computed,reference,delta,pass"]
        for row in self.rows:
            lines.append(",".join([
                row.aspect,
                format_probability(row.computed, precision),
                format_probability(row.reference, precision),
                format_probability(row.delta, precision),
                "true" if row.passed else "false",
            ]))
        return "\n".join(lines) + "\n"


def verify_against_reference(report: MarginalReport, scenario: Scenario,
                             tolerance: float = DEFAULT_TOLERANCE,
                             network: CompiledNetwork | None = None) -> VerificationReport:
    """Compare computed marginals against the scenario's reference column.

    An out-of-tolerance aspect additionally gets recomputed by the
    enumeration oracle on its ancestral subnetwork when that fits under
    the enumeration cap, so a genuine engine bug is distinguishable from
    a stale reference value.
    """
    if scenario.reference is None:
        raise ValueError(f"scenario {scenario.name!r} carries no reference values")
    rows = []
    for aspect in sorted(scenario.reference, key=aspect_sort_key):
        reference = scenario.reference[aspect]
        computed = report.probabilities[aspect]
        delta = computed - reference
        passed = abs(delta) <= tolerance
        oracle = None
        if not passed and network is not None:
            sub = ancestral_subnetwork(network, [aspect] + list(report.evidence))
            if len(sub) <= ENUMERATION_CAP:
                oracle_report = enumerate_oracle(sub, report.evidence,
                                                 include_origin=True)
                oracle = oracle_report.probabilities[aspect]
        rows.append(VerificationRow(aspect=aspect, computed=computed,
                                    reference=reference, delta=delta,
                                    passed=passed, oracle=oracle))
    return VerificationReport(scenario=scenario.name, tolerance=tolerance,
                              rows=tuple(rows))


@dataclass(frozen=True)
class ScenarioDelta:
    aspect: str
    a: float
    b: float
    delta: float


def compare_scenarios(a: MarginalReport, b: MarginalReport) -> list[ScenarioDelta]:
    """Per-aspect (a, b, b-a), largest absolute change first."""
    if set(a.probabilities) != set(b.probabilities):
        raise AspectSetMismatch(set(a.probabilities) - set(b.probabilities),
                                set(b.probabilities) - set(a.probabilities))
    deltas = [
        ScenarioDelta(aspect=aspect, a=a.probabilities[aspect],
                      b=b.probabilities[aspect],
                      delta=b.probabilities[aspect] - a.probabilities[aspect])
        for aspect in a.probabilities
    ]
    deltas.sort(key=lambda d: (-abs(d.delta), aspect_sort_key(d.aspect)))
    return deltas


@dataclass(frozen=True)
class RiskEntry:
    aspect: str
    probability: float
    impact: float
    risk: float


def risk_ranking(report: MarginalReport, impacts=None, top_k: int | None = None) -> list[RiskEntry]:
    """Probability times impact, ranked descending (ties by id).

    With no impact table every aspect weighs 1.0; an explicit table must
    cover every reported aspect.
    """
    entries = []
    for aspect in report.probabilities:
        if impacts is None:
            impact = 1.0
        elif aspect in impacts:
            impact = float(impacts[aspect])
        else:
            raise MissingImpact(aspect)
        probability = report.probabilities[aspect]
        entries.append(RiskEntry(aspect=aspect, probability=probability,
                                 impact=impact, risk=probability * impact))
    entries.sort(key=lambda e: (-e.risk, aspect_sort_key(e.aspect)))
    if top_k is not None:
        entries = entries[:top_k]
    return entries


def cvss_impact_table(model: Model) -> dict[str, float]:
    """Impact preset: the CVSS impact subscore / 10 where a vector exists,
    1.0 elsewhere."""
    from .cvss import impact_subscore

    table = {}
    for aspect in model.graph.aspects:
        entry = model.scores.get(aspect.id)
        if entry is not None and entry.vector is not None:
            table[aspect.id] = max(impact_subscore(entry.vector), 0.0) / 10.0
        else:
            table[aspect.id] = 1.0
    return table
