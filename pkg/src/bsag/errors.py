"""Exception types shared across the engine.

Every domain failure raises a subclass of :class:`BsagError` so callers
(CLI, HTTP service) can map engine errors to exit codes / status codes
without string matching.
"""

from __future__ import annotations


class BsagError(Exception):
    """Base class for all engine errors."""

    code = "error"


# --- graph validation -------------------------------------------------------

class GraphValidationError(BsagError):
    """Raised by validate_graph with the complete list of violations."""

    code = "invalid_graph"

    def __init__(self, violations):
        self.violations = list(violations)
        lines = "; ".join(str(v) for v in self.violations)
        super().__init__(f"graph validation failed: {lines}")


class CycleDetected(BsagError):
    code = "cycle"

    def __init__(self, path):
        self.path = list(path)
        super().__init__("cycle: " + " -> ".join(self.path))


class DanglingEndpoint(BsagError):
    code = "dangling_endpoint"

    def __init__(self, edge):
        self.edge = edge
        super().__init__(f"edge {edge.source}->{edge.target} references an undeclared aspect")


class KindMismatch(BsagError):
    code = "kind_mismatch"

    def __init__(self, edge, detail=""):
        self.edge = edge
        msg = f"edge {edge.source}->{edge.target} violates the {edge.kind.value} endpoint rule"
        if detail:
            msg += f" ({detail})"
        super().__init__(msg)


class DuplicateId(BsagError):
    code = "duplicate_id"

    def __init__(self, aspect_id):
        self.aspect_id = aspect_id
        super().__init__(f"duplicate aspect id {aspect_id}")


class DuplicateEdge(BsagError):
    code = "duplicate_edge"

    def __init__(self, source, target):
        self.source = source
        self.target = target
        super().__init__(f"duplicate edge {source}->{target}")


class ReservedId(BsagError):
    code = "reserved_id"

    def __init__(self, aspect_id):
        self.aspect_id = aspect_id
        super().__init__(f"aspect id {aspect_id} is reserved for the threat origin")


class BadAspectId(BsagError):
    code = "bad_aspect_id"

    def __init__(self, aspect_id):
        self.aspect_id = aspect_id
        super().__init__(f"aspect id {aspect_id!r} does not match A<number>")


class UnknownAspect(BsagError):
    code = "unknown_aspect"

    def __init__(self, aspect_id):
        self.aspect_id = aspect_id
        super().__init__(f"unknown aspect {aspect_id}")


# --- CVSS --------------------------------------------------------------------

class CvssError(BsagError):
    code = "cvss_error"


class MissingMetric(CvssError):
    code = "missing_metric"

    def __init__(self, name):
        self.metric = name
        super().__init__(f"missing CVSS metric {name}")


class UnknownToken(CvssError):
    code = "unknown_token"

    def __init__(self, token):
        self.token = token
        super().__init__(f"unknown CVSS token {token!r}")


class DuplicateMetric(CvssError):
    code = "duplicate_metric"

    def __init__(self, name):
        self.metric = name
        super().__init__(f"duplicate CVSS metric {name}")


# --- vulnerability-database fetch ---------------------------------------------

class NotFound(BsagError):
    code = "not_found"

    def __init__(self, cve_id):
        self.cve_id = cve_id
        super().__init__(f"{cve_id} not found")


class ProviderUnavailable(BsagError):
    code = "provider_unavailable"

    def __init__(self, detail=""):
        super().__init__(f"vulnerability database unavailable: {detail}" if detail
                         else "vulnerability database unavailable")


class MalformedResponse(BsagError):
    code = "malformed_response"

    def __init__(self, detail=""):
        super().__init__(f"malformed provider response: {detail}" if detail
                         else "malformed provider response")


# --- network compilation / inference ------------------------------------------

class MissingScore(BsagError):
    code = "missing_score"

    def __init__(self, aspect_id):
        self.aspect_id = aspect_id
        super().__init__(f"no exploit score for {aspect_id}")


class OriginCollision(BsagError):
    code = "origin_collision"

    def __init__(self):
        super().__init__("graph already declares the reserved origin id H0")


class AssignmentMismatch(BsagError):
    code = "assignment_mismatch"

    def __init__(self, node_id, expected, got):
        self.node_id = node_id
        super().__init__(
            f"CPT lookup for {node_id} expects parents {sorted(expected)}, got {sorted(got)}"
        )


class ImpossibleEvidence(BsagError):
    code = "impossible_evidence"

    def __init__(self, evidence):
        self.evidence = dict(evidence)
        shown = ", ".join(f"{k}={str(v).lower()}" for k, v in sorted(self.evidence.items()))
        super().__init__(f"evidence has zero probability: {shown}")


class TooLarge(BsagError):
    code = "too_large"

    def __init__(self, n, cap):
        self.n = n
        self.cap = cap
        super().__init__(f"enumeration over {n} nodes exceeds the {cap}-node cap")


# --- model documents / scenarios -----------------------------------------------

class ModelFormatError(BsagError):
    code = "model_format"


class UnknownField(ModelFormatError):
    code = "unknown_field"

    def __init__(self, field, where=""):
        self.field = field
        loc = f" in {where}" if where else ""
        super().__init__(f"unknown field {field!r}{loc}")


class UnknownScenario(BsagError):
    code = "unknown_scenario"

    def __init__(self, name):
        self.name = name
        super().__init__(f"unknown scenario {name!r}")


class AspectSetMismatch(BsagError):
    code = "aspect_set_mismatch"

    def __init__(self, only_a, only_b):
        self.only_a = sorted(only_a)
        self.only_b = sorted(only_b)
        super().__init__(
            f"reports cover different aspects (only left: {self.only_a}, only right: {self.only_b})"
        )


class MissingImpact(BsagError):
    code = "missing_impact"

    def __init__(self, aspect_id):
        self.aspect_id = aspect_id
        super().__init__(f"impact table omits {aspect_id}")
