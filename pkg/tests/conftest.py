from __future__ import annotations

import pytest

from bsag.builtin import builtin_model
from bsag.graph import Aspect, AspectKind, Category, DependencyEdge, EdgeKind, validate_graph


@pytest.fixture(scope="session")
def model():
    return builtin_model()


@pytest.fixture(scope="session")
def graph(model):
    return model.graph


@pytest.fixture(scope="session")
def net(model):
    return model.compile()


def vuln(aspect_id, name=None, category=Category.NETWORK):
    return Aspect(id=aspect_id, name=name or f"vuln {aspect_id}",
                  kind=AspectKind.VULNERABILITY, category=category)


def state(aspect_id, name=None, category=Category.LOSS):
    return Aspect(id=aspect_id, name=name or f"state {aspect_id}",
                  kind=AspectKind.STATE, category=category)


def lead(source, target, rule=None, probability=None):
    return DependencyEdge(source=source, target=target, kind=EdgeKind.LEAD,
                          rule_id=rule, probability=probability)


def result(source, target, rule=None, probability=None):
    return DependencyEdge(source=source, target=target, kind=EdgeKind.RESULT,
                          rule_id=rule, probability=probability)


def chain_graph(*ids):
    """A straight lead-chain of vulnerabilities."""
    aspects = [vuln(i) for i in ids]
    edges = [lead(a, b) for a, b in zip(ids, ids[1:])]
    return validate_graph(aspects, edges)
