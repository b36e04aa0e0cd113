"""Model documents: the JSON interchange format for graphs, scores,
origin configuration, and scenarios.

Documents are strict: unknown fields anywhere are rejected by name, CVE
score entries must agree with the score recomputed from their vector, and
the aspect/edge sections go through the full graph validator.
"""

from __future__ import annotations

import json
from dataclasses import dataclass
from enum import Enum
from pathlib import Path

from . import cvss
from .errors import ModelFormatError, UnknownField, UnknownScenario
from .graph import (
    Aspect,
    AspectGraph,
    AspectKind,
    Category,
    DependencyEdge,
    EdgeKind,
    aspect_sort_key,
    validate_graph,
)
from .inference import CompiledNetwork, compile_network


class ScoreSource(Enum):
    CVE = "cve"
    EXPERT = "expert"
    DETERMINISTIC = "deterministic"


@dataclass(frozen=True)
class ScoreEntry:
    aspect: str
    score: float
    source: ScoreSource
    cve_id: str | None = None
    vector: cvss.CvssVector | None = None


@dataclass(frozen=True)
class Scenario:
    name: str
    evidence: dict[str, bool]
    reference: dict[str, float] | None = None


@dataclass(frozen=True)
class Model:
    graph: AspectGraph
    scores: dict[str, ScoreEntry]
    origin_prior: float | None
    scenarios: tuple[Scenario, ...]

    def score_table(self) -> dict[str, float]:
        return {aspect: entry.score for aspect, entry in self.scores.items()}

    def scenario(self, name: str) -> Scenario:
        for scenario in self.scenarios:
            if scenario.name == name:
                return scenario
        raise UnknownScenario(name)

    def compile(self) -> CompiledNetwork:
        return compile_network(self.graph, self.score_table(),
                               origin_prior=self.origin_prior)


def _require(obj: dict, key: str, where: str):
    if key not in obj:
        raise ModelFormatError(f"missing field {key!r} in {where}")
    return obj[key]


def _reject_unknown(obj: dict, allowed, where: str):
    for key in obj:
        if key not in allowed:
            raise UnknownField(key, where)


def _enum(cls, raw, where: str):
    try:
        return cls(raw)
    except ValueError:
        values = ", ".join(member.value for member in cls)
        raise ModelFormatError(
            f"{where}: {raw!r} is not one of {values}") from None


def _probability(raw, where: str) -> float:
    if not isinstance(raw, (int, float)) or isinstance(raw, bool):
        raise ModelFormatError(f"{where}: expected a number, got {raw!r}")
    value = float(raw)
    if not 0.0 <= value <= 1.0:
        raise ModelFormatError(f"{where}: {value} outside [0, 1]")
    return value


def _parse_aspect(raw: dict) -> Aspect:
    where = f"aspect {raw.get('id', '?')}"
    _reject_unknown(raw, {"id", "name", "kind", "category", "description"}, where)
    return Aspect(
        id=_require(raw, "id", where),
        name=_require(raw, "name", where),
        kind=_enum(AspectKind, _require(raw, "kind", where), where),
        category=_enum(Category, _require(raw, "category", where), where),
        description=raw.get("description"),
    )


def _parse_edge(raw: dict) -> DependencyEdge:
    where = f"edge {raw.get('source', '?')}->{raw.get('target', '?')}"
    _reject_unknown(raw, {"source", "target", "kind", "rule", "probability"}, where)
    probability = raw.get("probability")
    if probability is not None:
        probability = _probability(probability, where)
    return DependencyEdge(
        source=_require(raw, "source", where),
        target=_require(raw, "target", where),
        kind=_enum(EdgeKind, _require(raw, "kind", where), where),
        rule_id=raw.get("rule"),
        probability=probability,
    )


def _parse_score(aspect_id: str, raw) -> ScoreEntry:
    where = f"score for {aspect_id}"
    if isinstance(raw, (int, float)) and not isinstance(raw, bool):
        return ScoreEntry(aspect=aspect_id, score=_probability(raw, where),
                          source=ScoreSource.EXPERT)
    if not isinstance(raw, dict):
        raise ModelFormatError(f"{where}: expected a number or object")
    _reject_unknown(raw, {"score", "cve", "vector"}, where)
    vector_text = raw.get("vector")
    if vector_text is None:
        return ScoreEntry(aspect=aspect_id,
                          score=_probability(_require(raw, "score", where), where),
                          source=ScoreSource.EXPERT)
    vector = cvss.parse_vector(vector_text)
    score = cvss.exploit_probability(cvss.base_score(vector))
    if "score" in raw:
        declared = _probability(raw["score"], where)
        if abs(declared - score) > 1e-9:
            raise ModelFormatError(
                f"{where}: declared score {declared} disagrees with "
                f"recomputed {score}")
    return ScoreEntry(aspect=aspect_id, score=score, source=ScoreSource.CVE,
                      cve_id=raw.get("cve"), vector=vector)


def _parse_scenario(raw: dict, graph: AspectGraph) -> Scenario:
    where = f"scenario {raw.get('name', '?')}"
    _reject_unknown(raw, {"name", "evidence", "reference"}, where)
    name = _require(raw, "name", where)
    evidence = {}
    for aspect_id, value in _require(raw, "evidence", where).items():
        graph.aspect(aspect_id)
        if not isinstance(value, bool):
            raise ModelFormatError(f"{where}: evidence for {aspect_id} must be a boolean")
        evidence[aspect_id] = value
    reference = raw.get("reference")
    if reference is not None:
        reference = {aspect_id: _probability(value, f"{where} reference {aspect_id}")
                     for aspect_id, value in reference.items()}
        for aspect_id in reference:
            graph.aspect(aspect_id)
    return Scenario(name=name, evidence=evidence, reference=reference)


def model_from_dict(document: dict) -> Model:
    _reject_unknown(document, {"aspects", "edges", "scores", "origin", "scenarios"},
                    "model document")
    aspects = [_parse_aspect(raw) for raw in _require(document, "aspects", "model document")]
    edges = [_parse_edge(raw) for raw in _require(document, "edges", "model document")]
    graph = validate_graph(aspects, edges)

    scores = {}
    for aspect_id, raw in document.get("scores", {}).items():
        graph.aspect(aspect_id)
        scores[aspect_id] = _parse_score(aspect_id, raw)

    origin_prior = None
    origin = document.get("origin")
    if origin is not None:
        _reject_unknown(origin, {"id", "prior"}, "origin")
        if origin.get("id", "H0") != "H0":
            raise ModelFormatError("origin id must be H0")
        origin_prior = _probability(_require(origin, "prior", "origin"), "origin prior")

    scenarios = []
    seen = set()
    for raw in document.get("scenarios", []):
        scenario = _parse_scenario(raw, graph)
        if scenario.name in seen:
            raise ModelFormatError(f"duplicate scenario name {scenario.name!r}")
        seen.add(scenario.name)
        scenarios.append(scenario)
    return Model(graph=graph, scores=scores, origin_prior=origin_prior,
                 scenarios=tuple(scenarios))


def model_to_dict(model: Model) -> dict:
    document: dict = {
        "aspects": [
            {k: v for k, v in (
                ("id", aspect.id), ("name", aspect.name),
                ("kind", aspect.kind.value), ("category", aspect.category.value),
                ("description", aspect.description)) if v is not None}
            for aspect in model.graph.aspects
        ],
        "edges": [
            {k: v for k, v in (
                ("source", edge.source), ("target", edge.target),
                ("kind", edge.kind.value), ("rule", edge.rule_id),
                ("probability", edge.probability)) if v is not None}
            for edge in model.graph.edges
        ],
    }
    if model.scores:
        scores = {}
        for aspect_id in sorted(model.scores, key=aspect_sort_key):
            entry = model.scores[aspect_id]
            if entry.vector is not None:
                raw = {"cve": entry.cve_id, "vector": entry.vector.to_string(),
                       "score": entry.score}
                if entry.cve_id is None:
                    del raw["cve"]
                scores[aspect_id] = raw
            else:
                scores[aspect_id] = entry.score
        document["scores"] = scores
    if model.origin_prior is not None:
        document["origin"] = {"prior": model.origin_prior}
    if model.scenarios:
        document["scenarios"] = [
            {k: v for k, v in (
                ("name", s.name), ("evidence", s.evidence),
                ("reference", s.reference)) if v is not None}
            for s in model.scenarios
        ]
    return document


def load_model(path) -> Model:
    text = Path(path).read_text(encoding="utf-8")
    try:
        document = json.loads(text)
    except json.JSONDecodeError as exc:
        raise ModelFormatError(f"not valid JSON: {exc}") from None
    if not isinstance(document, dict):
        raise ModelFormatError("model document must be a JSON object")
    return model_from_dict(document)


def save_model(model: Model, path) -> None:
    Path(path).write_text(dumps_model(model), encoding="utf-8")


def dumps_model(model: Model) -> str:
    return json.dumps(model_to_dict(model), indent=2) + "\n"
