"""Deterministic text rendering shared by the CLI and the HTTP service.

Probabilities print as decimal numerals with a fixed number of fractional
digits, rounded half-up, so repeated runs and both front doors emit
byte-identical payloads.
"""

from __future__ import annotations

from decimal import ROUND_HALF_UP, Decimal

from .graph import aspect_sort_key

DEFAULT_PRECISION = 3


def format_probability(value: float, precision: int = DEFAULT_PRECISION) -> str:
    """Fixed-point decimal with half-up rounding, e.g. 0.6804999 -> '0.680'."""
    quantum = Decimal(1).scaleb(-precision)
    result = Decimal(repr(float(value))).quantize(quantum, rounding=ROUND_HALF_UP)
    if result == 0:
        result = abs(result)
    return f"{result:.{precision}f}"


def _sorted_items(mapping):
    return sorted(mapping.items(), key=lambda kv: aspect_sort_key(kv[0]))


def probabilities_json(probabilities, precision: int = DEFAULT_PRECISION) -> str:
    """A JSON object literal with formatted values and id-sorted keys."""
    parts = (f'"{key}": {format_probability(value, precision)}'
             for key, value in _sorted_items(probabilities))
    return "{" + ", ".join(parts) + "}"


def evidence_json(evidence) -> str:
    parts = (f'"{key}": {"true" if value else "false"}'
             for key, value in _sorted_items(evidence))
    return "{" + ", ".join(parts) + "}"


def query_payload_json(report, precision: int = DEFAULT_PRECISION) -> str:
    """The query-response envelope used verbatim by CLI json output and HTTP."""
    return ('{"probabilities": ' + probabilities_json(report.probabilities, precision)
            + ', "evidence": ' + evidence_json(report.evidence) + "}")


def probabilities_csv(probabilities, precision: int = DEFAULT_PRECISION) -> str:
    lines = ["aspect,probability"]
    lines += [f"{key},{format_probability(value, precision)}"
              for key, value in _sorted_items(probabilities)]
    return "\n".join(lines) + "\n"


def probabilities_table(probabilities, precision: int = DEFAULT_PRECISION,
                        names=None) -> str:
    lines = []
    for key, value in _sorted_items(probabilities):
        label = f"  {names[key]}" if names and key in names else ""
        lines.append(f"{key:<4} {format_probability(value, precision)}{label}")
    return "\n".join(lines) + "\n"
