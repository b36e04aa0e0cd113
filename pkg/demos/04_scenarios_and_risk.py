"""
Scenarios, verification, and risk ranking
=========================================

Three scenarios ship with the model: the idle network, a confirmed
compromise of the insecure interfaces (A25), and a verified-secure
patching process (A23). Each carries reference marginals the engine must
reproduce, and the posteriors feed a probability-times-impact ranking.
"""

from bsag import builtin_model
from bsag.scenarios import compare_scenarios, risk_ranking, run_scenario, verify_against_reference

model = builtin_model()
net = model.compile()

# Run and verify every bundled scenario against its reference column.
reports = {}
for scenario in model.scenarios:
    report = run_scenario(model, scenario.name)
    reports[scenario.name] = report
    verification = verify_against_reference(report, scenario, network=net)
    worst = max(abs(row.delta) for row in verification.rows)
    print(f"{scenario.name}: {'PASS' if verification.passed else 'FAIL'} "
          f"(worst delta {worst:.4f} over {len(verification.rows)} aspects)")

# Which aspects move the most when A25 falls?
print("\nbiggest shifts once A25 is compromised:")
for delta in compare_scenarios(reports["scenario1"], reports["scenario2"])[:5]:
    print(f"  {delta.aspect}: {delta.a:.3f} -> {delta.b:.3f}  ({delta.delta:+.3f})")

# Rank mitigation targets. With unit impacts the ranking is pure probability...
print("\ntop risks, unit impacts:")
for entry in risk_ranking(reports["scenario1"], top_k=3):
    print(f"  {entry.aspect}: risk {entry.risk:.3f}")

# ...but weighting life-safety tenfold reorders the queue.
impacts = {aspect: 1.0 for aspect in reports["scenario1"].probabilities}
impacts["A15"] = 10.0
print("\ntop risks, life-safety weighted 10x:")
for entry in risk_ranking(reports["scenario1"], impacts, top_k=3):
    print(f"  {entry.aspect}: probability {entry.probability:.3f} "
          f"x impact {entry.impact:.0f} = {entry.risk:.2f}")
