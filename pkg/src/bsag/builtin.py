"""The bundled IoT security-aspect model.

Thirty aspects in five categories, 36 dependency edges tagged with their
source rules, exploit scores (21 CVE-backed vectors recomputed locally
plus six expert-assigned values), a threat-origin prior of 0.7, and three
scenarios carrying the published reference marginals used by the
verification suite.
"""

from __future__ import annotations

from .model import Model, model_from_dict

# (id, name, kind, category, description)
_ASPECTS = [
    ("A1", "QoS violation", "state", "network",
     "Service quality degrades below what users were promised."),
    ("A2", "Data confidentiality, integrity, and/or availability breach", "vulnerability", "data",
     "One or more legs of the CIA triad fail for managed data."),
    ("A3", "Data alteration, inconsistency, and/or loss", "vulnerability", "data",
     "Stored or in-flight data gets modified, desynchronized, or destroyed."),
    ("A4", "Data privacy violation", "vulnerability", "data",
     "Personal or sensitive data is exposed beyond its intended audience."),
    ("A5", "Data leakage", "vulnerability", "data",
     "Data escapes the network to parties that should never see it."),
    ("A6", "Identity theft or forging legitimate user credentials", "vulnerability", "access_control",
     "An attacker impersonates a legitimate user or fabricates credentials."),
    ("A7", "Plain text traffic", "vulnerability", "data",
     "Traffic travels unencrypted and can be read on the wire."),
    ("A8", "Financial loss", "state", "loss",
     "Direct monetary damage to operators or users."),
    ("A9", "Blackmail or fraud", "state", "loss",
     "Stolen data or access is leveraged for extortion or fraud."),
    ("A10", "Privacy and trust violation", "vulnerability", "standard",
     "User privacy expectations and device trust relationships break down."),
    ("A11", "Public data misuse", "vulnerability", "data",
     "Openly published data is repurposed in harmful ways."),
    ("A12", "Authentication and access control flaw", "vulnerability", "access_control",
     "Broken authentication or missing access checks."),
    ("A13", "Insufficient authorization", "vulnerability", "access_control",
     "Authenticated parties can reach resources beyond their privilege level."),
    ("A14", "Malicious nodes", "vulnerability", "access_control",
     "Devices inside the network act on an attacker's behalf."),
    ("A15", "Health and/or life(s) at risk", "state", "loss",
     "Physical harm to people becomes possible."),
    ("A16", "Service disrupt", "vulnerability", "network",
     "Essential services stop responding or misbehave."),
    ("A17", "Credential disclosure", "vulnerability", "access_control",
     "Keys, passwords, or tokens are revealed."),
    ("A18", "Node hijacking", "vulnerability", "access_control",
     "An attacker takes control of a device."),
    ("A19", "Hardware and/or software compromise", "vulnerability", "access_control",
     "Device firmware, software, or hardware is subverted."),
    ("A20", "Insecure network", "vulnerability", "network",
     "The communication fabric lacks basic protections."),
    ("A21", "Security misconfiguration", "vulnerability", "network",
     "Any layer of the stack ships or runs with unsafe settings."),
    ("A22", "Compliance issues", "vulnerability", "standard",
     "Deployment drifts from the regulations and standards that apply to it."),
    ("A23", "Lack of regular firmware updates or patch installations", "vulnerability", "standard",
     "Known fixes never reach the devices."),
    ("A24", "Lack of security standards and policies", "vulnerability", "standard",
     "No governing policy defines how the network must be secured."),
    ("A25", "Insecure interfaces", "vulnerability", "network",
     "Web, API, or device interfaces expose weak entry points."),
    ("A26", "Track Nodes", "vulnerability", "data",
     "Devices or their owners can be located and followed."),
    ("A27", "Lack of account lockout", "vulnerability", "access_control",
     "Unlimited sign-in attempts invite brute force."),
    ("A28", "Weak credentials", "vulnerability", "access_control",
     "Default or easily guessed passwords guard the door."),
    ("A29", "Lack of prohibition laws and regulations", "vulnerability", "standard",
     "No legal framework deters or punishes abuse."),
    ("A30", "Application and networking protocols deviation", "vulnerability", "network",
     "Implementations stray from the protocols they claim to speak."),
]

# (rule id, sources, targets); multi-item sides expand to one edge per pair.
_RULES = [
    ("R1", ["A2"], ["A1"]),
    ("R2", ["A3"], ["A2"]),
    ("R3", ["A4"], ["A3"]),
    ("R4", ["A5"], ["A4"]),
    ("R5", ["A6"], ["A5"]),
    ("R6", ["A7"], ["A5"]),
    ("R7", ["A6"], ["A8", "A9"]),
    ("R8", ["A10"], ["A6"]),
    ("R9", ["A11"], ["A10"]),
    ("R10", ["A12"], ["A10"]),
    ("R11", ["A13"], ["A10"]),
    ("R12", ["A14"], ["A10"]),
    ("R13", ["A16"], ["A15"]),
    ("R14", ["A14"], ["A16"]),
    ("R15", ["A17"], ["A12"]),
    ("R16", ["A18"], ["A14", "A17"]),
    ("R17", ["A19"], ["A18"]),
    ("R18", ["A20"], ["A19"]),
    ("R19", ["A21"], ["A20"]),
    ("R20", ["A22"], ["A18"]),
    ("R21", ["A23"], ["A20"]),
    ("R22", ["A24"], ["A22"]),
    ("R23", ["A24"], ["A20", "A19", "A12"]),
    ("R24", ["A26"], ["A10"]),
    ("R25", ["A25"], ["A26"]),
    ("R26", ["A25"], ["A12", "A18"]),
    ("R27", ["A27", "A28"], ["A25"]),
    ("R28", ["A29"], ["A10"]),
    ("R29", ["A30"], ["A20", "A10"]),
]

# The published marginals are only reproducible when the standards->auth
# dependency contributes no probability mass: the edge stays in the graph
# for cause/consequence queries but is inert in the compiled network.
_INERT_EDGES = {("A24", "A12"): 0.0}

_CVE_VECTORS = {
    "A1": ("CVE-2021-41039", "AV:N/AC:L/PR:N/UI:N/S:U/C:N/I:N/A:H"),
    "A2": ("CVE-2023-46837", "AV:L/AC:L/PR:L/UI:N/S:U/C:L/I:N/A:N"),
    "A3": ("CVE-2018-18759", "AV:N/AC:L/PR:N/UI:N/S:U/C:N/I:N/A:H"),
    "A4": ("CVE-2021-3223", "AV:N/AC:L/PR:N/UI:N/S:U/C:H/I:N/A:N"),
    "A5": ("CVE-2017-5927", "AV:N/AC:L/PR:N/UI:N/S:U/C:H/I:N/A:N"),
    "A6": ("CVE-2019-10756", "AV:N/AC:L/PR:L/UI:N/S:U/C:H/I:H/A:H"),
    "A7": ("CVE-2019-6549", "AV:N/AC:L/PR:H/UI:N/S:U/C:H/I:H/A:H"),
    "A10": ("CVE-2022-23960", "AV:L/AC:H/PR:L/UI:N/S:C/C:H/I:N/A:N"),
    "A12": ("CVE-2021-34387", "AV:L/AC:L/PR:H/UI:N/S:U/C:H/I:H/A:H"),
    "A13": ("CVE-2021-34431", "AV:N/AC:L/PR:L/UI:N/S:U/C:N/I:N/A:H"),
    "A14": ("CVE-2022-3783", "AV:N/AC:L/PR:N/UI:R/S:C/C:L/I:L/A:N"),
    "A16": ("CVE-2021-34173", "AV:N/AC:L/PR:N/UI:N/S:U/C:N/I:N/A:H"),
    "A17": ("CVE-2019-6531", "AV:N/AC:H/PR:N/UI:N/S:U/C:H/I:H/A:H"),
    "A18": ("CVE-2019-6527", "AV:N/AC:L/PR:N/UI:N/S:U/C:H/I:H/A:H"),
    "A19": ("CVE-2023-41325", "AV:L/AC:L/PR:H/UI:N/S:U/C:H/I:H/A:H"),
    "A20": ("CVE-2021-38545", "AV:N/AC:H/PR:N/UI:N/S:U/C:H/I:N/A:N"),
    "A21": ("CVE-2020-24572", "AV:N/AC:L/PR:L/UI:N/S:U/C:H/I:H/A:H"),
    "A23": ("CVE-2019-5432", "AV:N/AC:L/PR:N/UI:N/S:U/C:N/I:N/A:H"),
    "A24": ("CVE-2021-41104", "AV:N/AC:L/PR:N/UI:N/S:U/C:N/I:H/A:N"),
    "A25": ("CVE-2020-11015", "AV:N/AC:L/PR:N/UI:N/S:U/C:H/I:H/A:N"),
    "A30": ("CVE-2021-41583", "AV:N/AC:L/PR:L/UI:N/S:U/C:H/I:N/A:N"),
}

_EXPERT_SCORES = {
    "A11": 0.51,
    "A22": 0.60,
    "A26": 0.51,
    "A27": 0.60,
    "A28": 0.70,
    "A29": 0.70,
}

ORIGIN_PRIOR = 0.7

# Reference marginals (3 decimals) per scenario, used by `scenario run --verify`.
_REFERENCE = {
    "scenario1": {
        "A1": 0.081, "A2": 0.108, "A3": 0.326, "A4": 0.435, "A5": 0.580,
        "A6": 0.585, "A7": 0.504, "A8": 0.585, "A9": 0.585, "A10": 0.664,
        "A11": 0.357, "A12": 0.549, "A13": 0.455, "A14": 0.415, "A15": 0.311,
        "A16": 0.311, "A17": 0.551, "A18": 0.680, "A19": 0.558, "A20": 0.635,
        "A21": 0.616, "A22": 0.315, "A23": 0.525, "A24": 0.525, "A25": 0.585,
        "A26": 0.298, "A27": 0.420, "A28": 0.490, "A29": 0.490, "A30": 0.455,
    },
    "scenario2": {
        "A1": 0.116, "A2": 0.154, "A3": 0.467, "A4": 0.623, "A5": 0.830,
        "A6": 0.843, "A7": 0.720, "A8": 0.843, "A9": 0.843, "A10": 0.958,
        "A11": 0.510, "A12": 0.849, "A13": 0.650, "A14": 0.608, "A15": 0.456,
        "A16": 0.456, "A17": 0.807, "A18": 0.997, "A19": 0.797, "A20": 0.908,
        "A21": 0.880, "A22": 0.450, "A23": 0.750, "A24": 0.750, "A25": 1.000,
        "A26": 0.510, "A27": 0.695, "A28": 0.804, "A29": 0.700, "A30": 0.650,
    },
    "scenario3": {
        "A1": 0.042, "A2": 0.057, "A3": 0.172, "A4": 0.229, "A5": 0.305,
        "A6": 0.308, "A7": 0.265, "A8": 0.308, "A9": 0.308, "A10": 0.350,
        "A11": 0.188, "A12": 0.288, "A13": 0.239, "A14": 0.217, "A15": 0.163,
        "A16": 0.163, "A17": 0.289, "A18": 0.356, "A19": 0.282, "A20": 0.308,
        "A21": 0.324, "A22": 0.166, "A23": 0.000, "A24": 0.276, "A25": 0.308,
        "A26": 0.157, "A27": 0.221, "A28": 0.258, "A29": 0.258, "A30": 0.239,
    },
}

_SCENARIOS = [
    ("scenario1", {}),
    ("scenario2", {"A25": True}),
    ("scenario3", {"A23": False}),
]


def builtin_document() -> dict:
    """The bundled model as a plain model document (JSON-compatible dict)."""
    kinds = {aspect_id: kind for aspect_id, _, kind, _, _ in _ASPECTS}
    aspects = [
        {"id": aspect_id, "name": name, "kind": kind, "category": category,
         "description": description}
        for aspect_id, name, kind, category, description in _ASPECTS
    ]
    edges = []
    for rule_id, sources, targets in _RULES:
        for source in sources:
            for target in targets:
                if kinds[source] == "state":
                    kind = "imply"
                elif kinds[target] == "state":
                    kind = "result"
                else:
                    kind = "lead"
                edge = {"source": source, "target": target, "kind": kind,
                        "rule": rule_id}
                if (source, target) in _INERT_EDGES:
                    edge["probability"] = _INERT_EDGES[(source, target)]
                edges.append(edge)

    scores: dict = {}
    for aspect_id, (cve_id, vector) in _CVE_VECTORS.items():
        scores[aspect_id] = {"cve": cve_id, "vector": vector}
    scores.update(_EXPERT_SCORES)

    scenarios = [
        {"name": name, "evidence": evidence, "reference": _REFERENCE[name]}
        for name, evidence in _SCENARIOS
    ]
    return {
        "aspects": aspects,
        "edges": edges,
        "scores": scores,
        "origin": {"prior": ORIGIN_PRIOR},
        "scenarios": scenarios,
    }


_CACHE: Model | None = None


def builtin_model() -> Model:
    """Parse (once) and return the bundled model."""
    global _CACHE
    if _CACHE is None:
        _CACHE = model_from_dict(builtin_document())
    return _CACHE
