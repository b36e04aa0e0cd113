"""
From CVSS vectors to exploit probabilities
==========================================

Every vulnerability in the bundled model carries a CVSS v3.0 base vector.
The base score, divided by ten, becomes the exploit probability the
Bayesian network runs on.
"""

from pathlib import Path

from bsag import base_score, exploit_probability, parse_vector
from bsag.cvss import all_vectors
from bsag.nvd import FixtureProvider, fetch_cvss

# Score one vector by hand: the node-hijacking CVE from the bundled model.
vector = parse_vector("CVSS:3.0/AV:N/AC:L/PR:N/UI:N/S:U/C:H/I:H/A:H")
score = base_score(vector)
print(f"{vector.to_string()} -> score {score} -> probability {exploit_probability(score)}")

# Order does not matter, prefixes are optional.
assert parse_vector("A:H/I:H/C:H/S:U/UI:N/PR:N/AC:L/AV:N") == vector

# A scope-changed example with a harder attack path scores much lower.
spectre = parse_vector("AV:L/AC:H/PR:L/UI:N/S:C/C:H/I:N/A:N")
print(f"scope-changed local/high-complexity vector -> {base_score(spectre)}")

# The full base-metric space is small enough to sweep outright.
scores = [base_score(v) for v in all_vectors()]
print(f"swept {len(scores)} vectors; scores span {min(scores)} .. {max(scores)}")

# Recorded lookups: the test fixtures double as an offline CVE database.
fixtures = Path(__file__).parent.parent / "tests" / "fixtures" / "nvd"
record = fetch_cvss("CVE-2019-6527", FixtureProvider(fixtures))
print(f"{record.cve_id}: published {record.published_score}, "
      f"recomputed {record.score}, warnings: {list(record.warnings) or 'none'}")
