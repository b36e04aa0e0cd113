"""Command-line front end.

Exit codes: 0 success, 1 domain error (validation failure, impossible
evidence, unknown ids, ...), 2 usage error.
"""

from __future__ import annotations

import argparse
import json
import os
import sys
from pathlib import Path

from . import dot, errors, nvd, render
from .builtin import builtin_model
from .cvss import base_score, exploit_probability, parse_vector
from .graph import ORIGIN_ID, ancestors, aspect_sort_key, category_stats, descendants, entry_points, topological_sort
from .inference import query_marginals
from .model import dumps_model, load_model
from .scenarios import (
    DEFAULT_TOLERANCE,
    compare_scenarios,
    cvss_impact_table,
    risk_ranking,
    run_scenario,
    verify_against_reference,
)

ENV_NVD_BASE_URL = "BSAG_NVD_BASE_URL"


def _load(model_arg: str):
    if model_arg == "builtin":
        return builtin_model()
    return load_model(model_arg)


def _parse_evidence(text: str, model) -> dict[str, bool]:
    evidence: dict[str, bool] = {}
    for token in text.split(","):
        token = token.strip()
        if not token:
            continue
        aspect_id, sep, value = token.partition("=")
        if not sep or value not in ("true", "false"):
            raise errors.BsagError(
                f"bad evidence token {token!r} (expected <id>=<true|false>)")
        if aspect_id != ORIGIN_ID and aspect_id not in model.graph:
            raise errors.UnknownAspect(aspect_id)
        if aspect_id in evidence:
            raise errors.BsagError(f"duplicate evidence for {aspect_id}")
        evidence[aspect_id] = value == "true"
    return evidence


def _names(model) -> dict[str, str]:
    return {a.id: a.name for a in model.graph.aspects}


def _emit_report(report, fmt: str, precision: int, model, out=None):
    out = out or sys.stdout
    if fmt == "json":
        out.write(render.query_payload_json(report, precision) + "\n")
    elif fmt == "csv":
        out.write(render.probabilities_csv(report.probabilities, precision))
    else:
        out.write(render.probabilities_table(report.probabilities, precision,
                                             names=_names(model)))


def _cmd_validate(args) -> int:
    model = _load(args.model)
    sys.stdout.write(
        f"ok: {len(model.graph.aspects)} aspects, {len(model.graph.edges)} edges\n")
    return 0


def _cmd_topo(args) -> int:
    model = _load(args.model)
    for aspect_id in topological_sort(model.graph):
        sys.stdout.write(aspect_id + "\n")
    return 0


def _cmd_causes(args) -> int:
    model = _load(args.model)
    for aspect_id in sorted(ancestors(model.graph, args.id), key=aspect_sort_key):
        sys.stdout.write(aspect_id + "\n")
    return 0


def _cmd_consequences(args) -> int:
    model = _load(args.model)
    for aspect_id in sorted(descendants(model.graph, args.id), key=aspect_sort_key):
        sys.stdout.write(aspect_id + "\n")
    return 0


def _cmd_entry_points(args) -> int:
    model = _load(args.model)
    for aspect_id in sorted(entry_points(model.graph), key=aspect_sort_key):
        sys.stdout.write(aspect_id + "\n")
    return 0


def _cmd_stats(args) -> int:
    model = _load(args.model)
    stats = category_stats(model.graph)
    rows = sorted(stats.items(), key=lambda kv: (-kv[1]["count"], kv[0].value))
    sys.stdout.write("category,count,percentage\n")
    for category, row in rows:
        sys.stdout.write(f"{category.value},{row['count']},{row['percentage']:.2f}\n")
    return 0


def _cmd_cvss_score(args) -> int:
    vector = parse_vector(args.vector)
    score = base_score(vector)
    sys.stdout.write(f"vector: {vector.to_string()}\n")
    sys.stdout.write(f"score: {score:.1f}\n")
    sys.stdout.write(f"probability: {exploit_probability(score)}\n")
    return 0


def _cmd_cvss_fetch(args) -> int:
    if args.offline_fixtures:
        provider = nvd.FixtureProvider(args.offline_fixtures)
    else:
        base_url = os.environ.get(ENV_NVD_BASE_URL, nvd.DEFAULT_BASE_URL)
        provider = nvd.NvdProvider(base_url=base_url)
    record = nvd.fetch_cvss(args.cve, provider)
    sys.stdout.write(f"cve: {record.cve_id}\n")
    sys.stdout.write(f"vector: {record.vector.to_string()}\n")
    sys.stdout.write(f"score: {record.score:.1f}\n")
    if record.published_score is not None:
        sys.stdout.write(f"published: {record.published_score:.1f}\n")
    sys.stdout.write(f"probability: {exploit_probability(record.score)}\n")
    for warning in record.warnings:
        sys.stdout.write(f"warning: {warning}\n")
    return 0


def _cmd_infer(args) -> int:
    model = _load(args.model)
    evidence = _parse_evidence(args.evidence or "", model)
    report = query_marginals(model.compile(), evidence,
                             include_origin=args.show_origin)
    _emit_report(report, args.format, args.precision, model)
    return 0


def _cmd_scenario_run(args) -> int:
    model = _load(args.model)
    report = run_scenario(model, args.name)
    if args.verify:
        scenario = model.scenario(args.name)
        if scenario.reference is None:
            raise errors.BsagError(f"scenario {args.name!r} has no reference values")
        verification = verify_against_reference(report, scenario,
                                                tolerance=args.tolerance,
                                                network=model.compile())
        sys.stdout.write(verification.to_csv())
        if not verification.passed:
            failures = ", ".join(row.aspect for row in verification.failures())
            sys.stderr.write(f"error: verification failed for {failures}\n")
            return 1
        return 0
    _emit_report(report, args.format, args.precision, model)
    return 0


def _cmd_scenario_diff(args) -> int:
    model = _load(args.model)
    report_a = run_scenario(model, args.a)
    report_b = run_scenario(model, args.b)
    sys.stdout.write(f"aspect,{args.a},{args.b},delta\n")
    for row in compare_scenarios(report_a, report_b):
        sys.stdout.write(",".join([
            row.aspect,
            render.format_probability(row.a, args.precision),
            render.format_probability(row.b, args.precision),
            render.format_probability(row.delta, args.precision),
        ]) + "\n")
    return 0


def _cmd_risk(args) -> int:
    model = _load(args.model)
    evidence = _parse_evidence(args.evidence or "", model)
    report = query_marginals(model.compile(), evidence)
    if args.impacts is None:
        impacts = None
    elif args.impacts == "cvss":
        impacts = cvss_impact_table(model)
    else:
        impacts = json.loads(Path(args.impacts).read_text(encoding="utf-8"))
    ranking = risk_ranking(report, impacts=impacts, top_k=args.top)
    sys.stdout.write("aspect,probability,impact,risk\n")
    for entry in ranking:
        sys.stdout.write(",".join([
            entry.aspect,
            render.format_probability(entry.probability, args.precision),
            render.format_probability(entry.impact, args.precision),
            render.format_probability(entry.risk, args.precision),
        ]) + "\n")
    return 0


def _cmd_export(args) -> int:
    model = _load(args.model)
    if args.dot is not None:
        text = dot.export_dot(model.graph, show_origin=args.show_origin)
        destination = args.dot
    else:
        text = dumps_model(model)
        destination = args.json
    if destination == "-":
        sys.stdout.write(text)
    else:
        Path(destination).write_text(text, encoding="utf-8")
    return 0


def _cmd_serve(args) -> int:
    from .server import create_server

    model = _load(args.model)
    server = create_server(model, host=args.host, port=args.port,
                           frontend_dir=args.frontend)
    host, port = server.server_address[:2]
    sys.stderr.write(f"serving on http://{host}:{port}\n")
    try:
        server.serve_forever()
    except KeyboardInterrupt:
        pass
    finally:
        server.server_close()
    return 0


def _add_model(parser):
    parser.add_argument("model", help="model document path, or 'builtin'")


def _add_precision(parser):
    parser.add_argument("--precision", type=int, default=render.DEFAULT_PRECISION,
                        help="fractional digits for probabilities (default 3)")


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="bsag",
        description="Bayesian security aspect graph engine")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("validate", help="validate a model document")
    _add_model(p)
    p.set_defaults(func=_cmd_validate)

    p = sub.add_parser("topo", help="topological order of the aspects")
    _add_model(p)
    p.set_defaults(func=_cmd_topo)

    p = sub.add_parser("causes", help="transitive causes of an aspect")
    _add_model(p)
    p.add_argument("id")
    p.set_defaults(func=_cmd_causes)

    p = sub.add_parser("consequences", help="transitive consequences of an aspect")
    _add_model(p)
    p.add_argument("id")
    p.set_defaults(func=_cmd_consequences)

    p = sub.add_parser("entry-points", help="aspects with no incoming edges")
    _add_model(p)
    p.set_defaults(func=_cmd_entry_points)

    p = sub.add_parser("stats", help="per-category counts and percentages")
    _add_model(p)
    p.set_defaults(func=_cmd_stats)

    p = sub.add_parser("cvss", help="CVSS scoring and lookups")
    cvss_sub = p.add_subparsers(dest="cvss_command", required=True)
    ps = cvss_sub.add_parser("score", help="score a metric vector")
    ps.add_argument("--vector", required=True)
    ps.set_defaults(func=_cmd_cvss_score)
    pf = cvss_sub.add_parser("fetch", help="fetch metrics for a CVE id")
    pf.add_argument("cve")
    pf.add_argument("--offline-fixtures", metavar="DIR",
                    help="read recorded responses from DIR instead of the network")
    pf.set_defaults(func=_cmd_cvss_fetch)

    p = sub.add_parser("infer", help="posterior marginals under evidence")
    _add_model(p)
    p.add_argument("--evidence", help="comma-separated <id>=<true|false>")
    p.add_argument("--show-origin", action="store_true",
                   help="include the synthetic threat origin in the report")
    p.add_argument("--format", choices=("table", "json", "csv"), default="table")
    _add_precision(p)
    p.set_defaults(func=_cmd_infer)

    p = sub.add_parser("scenario", help="run or compare bundled scenarios")
    scenario_sub = p.add_subparsers(dest="scenario_command", required=True)
    pr = scenario_sub.add_parser("run", help="run one scenario")
    _add_model(pr)
    pr.add_argument("name")
    pr.add_argument("--verify", action="store_true",
                    help="check the result against the scenario's reference values")
    pr.add_argument("--tolerance", type=float, default=DEFAULT_TOLERANCE)
    pr.add_argument("--format", choices=("table", "json", "csv"), default="table")
    _add_precision(pr)
    pr.set_defaults(func=_cmd_scenario_run)
    pd = scenario_sub.add_parser("diff", help="compare two scenarios")
    _add_model(pd)
    pd.add_argument("a")
    pd.add_argument("b")
    _add_precision(pd)
    pd.set_defaults(func=_cmd_scenario_diff)

    p = sub.add_parser("risk", help="risk ranking (probability x impact)")
    _add_model(p)
    p.add_argument("--evidence", help="comma-separated <id>=<true|false>")
    p.add_argument("--impacts",
                   help="JSON impact table path, or 'cvss' for the impact-subscore preset")
    p.add_argument("--top", type=int, metavar="N")
    _add_precision(p)
    p.set_defaults(func=_cmd_risk)

    p = sub.add_parser("export", help="write the model as DOT or JSON")
    _add_model(p)
    group = p.add_mutually_exclusive_group(required=True)
    group.add_argument("--dot", metavar="OUT", help="DOT output path ('-' for stdout)")
    group.add_argument("--json", metavar="OUT", help="JSON output path ('-' for stdout)")
    p.add_argument("--show-origin", action="store_true",
                   help="include the synthetic threat origin in the DOT output")
    p.set_defaults(func=_cmd_export)

    p = sub.add_parser("serve", help="run the HTTP query service")
    _add_model(p)
    p.add_argument("--port", type=int, default=8080)
    p.add_argument("--host", default="127.0.0.1")
    p.add_argument("--frontend", metavar="DIR",
                   help="also serve the what-if console from DIR")
    p.set_defaults(func=_cmd_serve)
    return parser


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args)
    except errors.BsagError as exc:
        sys.stderr.write(f"error: {exc}\n")
        return 1
    except (FileNotFoundError, json.JSONDecodeError, OSError) as exc:
        sys.stderr.write(f"error: {exc}\n")
        return 1


if __name__ == "__main__":
    sys.exit(main())
