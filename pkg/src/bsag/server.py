"""Stateless HTTP query service.

Every request carries its own evidence; the compiled network is immutable
and shared by all worker threads, so concurrent queries need no
coordination. Errors travel as {"code", "message", "details"?} envelopes
with 400 for client mistakes, 404 for unknown ids or routes, 500
otherwise. When a frontend directory is configured the service also
serves the what-if console's static files.
"""

from __future__ import annotations

import json
from http.server import BaseHTTPRequestHandler, ThreadingHTTPServer
from pathlib import Path

from . import render
from .errors import BsagError, NotFound, UnknownAspect, UnknownScenario
from .graph import ORIGIN_ID, ancestors, aspect_sort_key, category_stats, descendants, entry_points, topological_sort
from .inference import query_marginals
from .model import Model
from .scenarios import risk_ranking

_CONTENT_TYPES = {
    ".html": "text/html; charset=utf-8",
    ".js": "text/javascript; charset=utf-8",
    ".mjs": "text/javascript; charset=utf-8",
    ".css": "text/css; charset=utf-8",
    ".json": "application/json",
    ".svg": "image/svg+xml",
    ".map": "application/json",
    ".ico": "image/x-icon",
    ".png": "image/png",
}


class _BadRequest(BsagError):
    code = "bad_request"


class BsagServer(ThreadingHTTPServer):
    daemon_threads = True

    def __init__(self, address, model: Model, frontend_dir=None,
                 precision: int = render.DEFAULT_PRECISION):
        super().__init__(address, _Handler)
        self.model = model
        self.net = model.compile()
        self.precision = precision
        self.frontend_dir = Path(frontend_dir).resolve() if frontend_dir else None
        self.model_payload = _model_payload(model)


def create_server(model: Model, host: str = "127.0.0.1", port: int = 8080,
                  frontend_dir=None) -> BsagServer:
    return BsagServer((host, port), model, frontend_dir=frontend_dir)


def _model_payload(model: Model) -> dict:
    graph = model.graph
    stats = category_stats(graph)
    return {
        "aspects": [
            {"id": a.id, "name": a.name, "kind": a.kind.value,
             "category": a.category.value, "description": a.description}
            for a in graph.aspects
        ],
        "edges": [
            {"source": e.source, "target": e.target, "kind": e.kind.value,
             "rule": e.rule_id}
            for e in graph.edges
        ],
        "scores": {aspect_id: model.scores[aspect_id].score
                   for aspect_id in sorted(model.scores, key=aspect_sort_key)},
        "origin": ({"id": ORIGIN_ID, "prior": model.origin_prior}
                   if model.origin_prior is not None else None),
        "categories": {category.value: row for category, row in stats.items()},
        "entry_points": sorted(entry_points(graph), key=aspect_sort_key),
    }


class _Handler(BaseHTTPRequestHandler):
    server_version = "bsag"
    protocol_version = "HTTP/1.1"

    # Keep the access log quiet; the service is often run under tests.
    def log_message(self, fmt, *args):
        pass

    # --- plumbing ---------------------------------------------------------

    def _send(self, status: int, body: bytes, content_type: str):
        self.send_response(status)
        self.send_header("Content-Type", content_type)
        self.send_header("Content-Length", str(len(body)))
        self.end_headers()
        self.wfile.write(body)

    def _send_json_text(self, text: str, status: int = 200):
        self._send(status, text.encode("utf-8"), "application/json")

    def _send_json(self, payload, status: int = 200):
        self._send_json_text(json.dumps(payload), status)

    def _send_error_payload(self, exc: BsagError):
        if isinstance(exc, (UnknownAspect, UnknownScenario, NotFound)):
            status = 404
        else:
            status = 400
        self._send_json({"code": exc.code, "message": str(exc)}, status)

    def _read_body(self) -> dict:
        length = int(self.headers.get("Content-Length") or 0)
        raw = self.rfile.read(length) if length else b""
        if not raw:
            return {}
        try:
            body = json.loads(raw.decode("utf-8"))
        except (UnicodeDecodeError, json.JSONDecodeError) as exc:
            raise _BadRequest(f"request body is not valid JSON: {exc}") from None
        if not isinstance(body, dict):
            raise _BadRequest("request body must be a JSON object")
        return body

    def _evidence_from(self, body: dict) -> dict[str, bool]:
        evidence = body.get("evidence") or {}
        if not isinstance(evidence, dict):
            raise _BadRequest("evidence must be an object of <id>: <bool>")
        checked = {}
        for aspect_id, value in evidence.items():
            if aspect_id != ORIGIN_ID and aspect_id not in self.server.model.graph:
                raise UnknownAspect(aspect_id)
            if not isinstance(value, bool):
                raise _BadRequest(f"evidence for {aspect_id} must be true or false")
            checked[aspect_id] = value
        return checked

    # --- routing ----------------------------------------------------------

    def do_GET(self):
        try:
            self._route_get()
        except BsagError as exc:
            self._send_error_payload(exc)
        except Exception as exc:  # pragma: no cover - defensive
            self._send_json({"code": "internal_error", "message": str(exc)}, 500)

    def do_POST(self):
        try:
            self._route_post()
        except BsagError as exc:
            self._send_error_payload(exc)
        except Exception as exc:  # pragma: no cover - defensive
            self._send_json({"code": "internal_error", "message": str(exc)}, 500)

    def _route_get(self):
        server: BsagServer = self.server
        path = self.path.split("?", 1)[0]
        if path == "/api/health":
            self._send_json({"status": "ok"})
        elif path == "/api/model":
            self._send_json(server.model_payload)
        elif path == "/api/topo":
            self._send_json({"order": topological_sort(server.model.graph)})
        elif path == "/api/scenarios":
            self._send_json({"scenarios": [
                {"name": s.name, "evidence": s.evidence,
                 "has_reference": s.reference is not None}
                for s in server.model.scenarios
            ]})
        elif path.startswith("/api/aspects/"):
            parts = path.split("/")
            if len(parts) == 5 and parts[4] in ("causes", "consequences"):
                aspect_id = parts[3]
                query = ancestors if parts[4] == "causes" else descendants
                found = sorted(query(server.model.graph, aspect_id), key=aspect_sort_key)
                self._send_json({"aspect": aspect_id, parts[4]: found})
            else:
                self._send_json({"code": "not_found", "message": "no such route"}, 404)
        elif server.frontend_dir is not None:
            self._serve_static(path)
        else:
            self._send_json({"code": "not_found", "message": "no such route"}, 404)

    def _route_post(self):
        server: BsagServer = self.server
        path = self.path.split("?", 1)[0]
        if path == "/api/query":
            body = self._read_body()
            for key in body:
                if key != "evidence":
                    raise _BadRequest(f"unknown field {key!r} in request body")
            evidence = self._evidence_from(body)
            report = query_marginals(server.net, evidence)
            self._send_json_text(render.query_payload_json(report, server.precision))
        elif path.startswith("/api/scenarios/") and path.endswith("/run"):
            name = path[len("/api/scenarios/"):-len("/run")]
            scenario = server.model.scenario(name)
            self._read_body()
            report = query_marginals(server.net, scenario.evidence)
            self._send_json_text(render.query_payload_json(report, server.precision))
        elif path == "/api/risk":
            body = self._read_body()
            for key in body:
                if key not in ("evidence", "impacts"):
                    raise _BadRequest(f"unknown field {key!r} in request body")
            evidence = self._evidence_from(body)
            impacts = body.get("impacts")
            if impacts is not None:
                if not isinstance(impacts, dict):
                    raise _BadRequest("impacts must be an object of <id>: <number>")
                for aspect_id, value in impacts.items():
                    if not isinstance(value, (int, float)) or isinstance(value, bool):
                        raise _BadRequest(f"impact for {aspect_id} must be a number")
                    if value < 0:
                        raise _BadRequest(f"impact for {aspect_id} must be >= 0")
            report = query_marginals(server.net, evidence)
            ranking = risk_ranking(report, impacts=impacts)
            rows = ", ".join(
                '{"aspect": "%s", "probability": %s, "impact": %s, "risk": %s}' % (
                    entry.aspect,
                    render.format_probability(entry.probability, server.precision),
                    render.format_probability(entry.impact, server.precision),
                    render.format_probability(entry.risk, server.precision))
                for entry in ranking)
            self._send_json_text('{"ranking": [' + rows + "]}")
        else:
            self._send_json({"code": "not_found", "message": "no such route"}, 404)

    # --- static frontend ----------------------------------------------------

    def _serve_static(self, path: str):
        server: BsagServer = self.server
        relative = path.lstrip("/") or "index.html"
        target = (server.frontend_dir / relative).resolve()
        if not str(target).startswith(str(server.frontend_dir)) or not target.is_file():
            self._send_json({"code": "not_found", "message": "no such route"}, 404)
            return
        content_type = _CONTENT_TYPES.get(target.suffix, "application/octet-stream")
        self._send(200, target.read_bytes(), content_type)
