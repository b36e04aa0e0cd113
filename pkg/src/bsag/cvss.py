"""CVSS v3.0 base-metric vectors, base scores, and exploit probabilities.

Scoring follows the v3.0 base-score equations. The final round-up happens
on an integer-tenths scale with a small guard so that raw values a few
ulps above an exact tenth (e.g. 5.0000000001) do not get bumped a tenth
higher than the analytic result.
"""

from __future__ import annotations

import itertools
import math
from dataclasses import dataclass

from .errors import DuplicateMetric, MissingMetric, UnknownToken

# Weight tables keyed by metric letter code.
_AV = {"N": 0.85, "A": 0.62, "L": 0.55, "P": 0.2}
_AC = {"L": 0.77, "H": 0.44}
_PR_UNCHANGED = {"N": 0.85, "L": 0.62, "H": 0.27}
_PR_CHANGED = {"N": 0.85, "L": 0.68, "H": 0.5}
_UI = {"N": 0.85, "R": 0.62}
_SCOPE = ("U", "C")
_CIA = {"N": 0.0, "L": 0.22, "H": 0.56}

_METRIC_VALUES = {
    "AV": tuple(_AV),
    "AC": tuple(_AC),
    "PR": tuple(_PR_UNCHANGED),
    "UI": tuple(_UI),
    "S": _SCOPE,
    "C": tuple(_CIA),
    "I": tuple(_CIA),
    "A": tuple(_CIA),
}
_METRIC_ORDER = ("AV", "AC", "PR", "UI", "S", "C", "I", "A")

_PREFIXES = ("CVSS:3.0", "CVSS:3.1")


@dataclass(frozen=True)
class CvssVector:
    """The eight CVSS v3.0 base metrics, stored as letter codes."""

    av: str
    ac: str
    pr: str
    ui: str
    scope: str
    c: str
    i: str
    a: str

    def __post_init__(self):
        for field, metric in zip(("av", "ac", "pr", "ui", "scope", "c", "i", "a"),
                                 _METRIC_ORDER):
            value = getattr(self, field)
            if value not in _METRIC_VALUES[metric]:
                raise UnknownToken(f"{metric}:{value}")

    def to_string(self, prefix: bool = True) -> str:
        """Canonical slash notation, metrics in specification order."""
        body = "/".join(
            f"{metric}:{value}"
            for metric, value in zip(_METRIC_ORDER, (self.av, self.ac, self.pr,
                                                     self.ui, self.scope,
                                                     self.c, self.i, self.a))
        )
        return f"CVSS:3.0/{body}" if prefix else body


def parse_vector(text: str) -> CvssVector:
    """Parse slash-separated metric notation, order-insensitive.

    An optional ``CVSS:3.0/`` (or ``3.1``) prefix is accepted; all eight
    base metrics must appear exactly once.
    """
    raw = text.strip()
    for prefix in _PREFIXES:
        if raw.upper().startswith(prefix + "/"):
            raw = raw[len(prefix) + 1:]
            break
    seen: dict[str, str] = {}
    for token in raw.split("/"):
        if not token:
            continue
        key, sep, value = token.partition(":")
        key = key.strip().upper()
        value = value.strip().upper()
        if not sep or key not in _METRIC_VALUES:
            raise UnknownToken(token)
        if value not in _METRIC_VALUES[key]:
            raise UnknownToken(token)
        if key in seen:
            raise DuplicateMetric(key)
        seen[key] = value
    for metric in _METRIC_ORDER:
        if metric not in seen:
            raise MissingMetric(metric)
    return CvssVector(av=seen["AV"], ac=seen["AC"], pr=seen["PR"], ui=seen["UI"],
                      scope=seen["S"], c=seen["C"], i=seen["I"], a=seen["A"])


def _round_up_tenth(raw: float) -> float:
    # Ceiling on the tenths scale; the 1e-9 guard absorbs float noise just
    # above an exact tenth so 5.0000000001 stays 5.0.
    return math.ceil((raw - 1e-9) * 10.0) / 10.0


def impact_subscore(v: CvssVector) -> float:
    """Unrounded impact term of the base equation (0 when no impact)."""
    iss = 1.0 - (1.0 - _CIA[v.c]) * (1.0 - _CIA[v.i]) * (1.0 - _CIA[v.a])
    if v.scope == "U":
        return 6.42 * iss
    return 7.52 * (iss - 0.029) - 3.25 * (iss - 0.02) ** 15


def exploitability_subscore(v: CvssVector) -> float:
    """Unrounded exploitability term of the base equation."""
    pr = _PR_CHANGED[v.pr] if v.scope == "C" else _PR_UNCHANGED[v.pr]
    return 8.22 * _AV[v.av] * _AC[v.ac] * pr * _UI[v.ui]


def base_score(v: CvssVector) -> float:
    """CVSS v3.0 base score in [0, 10], quantized up to one decimal."""
    impact = impact_subscore(v)
    if impact <= 0.0:
        return 0.0
    raw = impact + exploitability_subscore(v)
    if v.scope == "C":
        raw *= 1.08
    return _round_up_tenth(min(raw, 10.0))


def exploit_probability(score: float) -> float:
    """Normalize a base score to [0, 1] for use as an exploit probability.

    Scores quantized to one decimal divide exactly (9.8 -> 0.98, not
    0.98000...01); anything else falls back to plain division.
    """
    tenths = score * 10.0
    nearest = round(tenths)
    if abs(tenths - nearest) < 1e-9:
        return nearest / 100.0
    return score / 10.0


def all_vectors():
    """Iterate the full base-metric space (3888 vectors) in a fixed order."""
    for av, ac, pr, ui, s, c, i, a in itertools.product(
            _METRIC_VALUES["AV"], _METRIC_VALUES["AC"], _METRIC_VALUES["PR"],
            _METRIC_VALUES["UI"], _SCOPE, _METRIC_VALUES["C"],
            _METRIC_VALUES["I"], _METRIC_VALUES["A"]):
        yield CvssVector(av=av, ac=ac, pr=pr, ui=ui, scope=s, c=c, i=i, a=a)
