"""Fetch CVSS base metrics for a CVE id.

Two providers share one interface: the live NVD 2.0 REST endpoint and a
directory of recorded response bodies (one verbatim JSON file per CVE
id). Tests and default builds only ever touch fixtures; live access is
an explicitly requested capability.
"""

from __future__ import annotations

import json
import threading
import time
from dataclasses import dataclass
from pathlib import Path
from urllib.error import HTTPError, URLError
from urllib.parse import quote
from urllib.request import Request, urlopen

from . import cvss
from .errors import MalformedResponse, NotFound, ProviderUnavailable

DEFAULT_BASE_URL = "https://services.nvd.nist.gov"
_CVSS_METRIC_KEYS = ("cvssMetricV30", "cvssMetricV31")


@dataclass(frozen=True)
class ScoreMismatch:
    published: float
    recomputed: float

    def __str__(self):
        return (f"published score {self.published} disagrees with "
                f"recomputed {self.recomputed}")


@dataclass(frozen=True)
class CvssRecord:
    cve_id: str
    vector: cvss.CvssVector
    score: float
    published_score: float | None
    warnings: tuple[ScoreMismatch, ...] = ()


class FixtureProvider:
    """Recorded response bodies: <root>/<CVE-ID>.json, verbatim."""

    def __init__(self, root):
        self.root = Path(root)

    def fetch(self, cve_id: str) -> str:
        path = self.root / f"{cve_id}.json"
        if not path.is_file():
            raise NotFound(cve_id)
        return path.read_text(encoding="utf-8")


class NvdProvider:
    """Live client for GET {base_url}/rest/json/cves/2.0?cveId=<id>.

    Requests are spaced at least min_interval seconds apart across
    threads, and responses are cached per CVE id.
    """

    def __init__(self, base_url: str = DEFAULT_BASE_URL, api_key: str | None = None,
                 timeout: float = 20.0, min_interval: float = 0.6):
        self.base_url = base_url.rstrip("/")
        self.api_key = api_key
        self.timeout = timeout
        self.min_interval = min_interval
        self._lock = threading.Lock()
        self._last_request = 0.0
        self._cache: dict[str, str] = {}

    def fetch(self, cve_id: str) -> str:
        with self._lock:
            if cve_id in self._cache:
                return self._cache[cve_id]
        self._throttle()
        url = f"{self.base_url}/rest/json/cves/2.0?cveId={quote(cve_id)}"
        headers = {"User-Agent": "bsag/0.1"}
        if self.api_key:
            headers["apiKey"] = self.api_key
        try:
            with urlopen(Request(url, headers=headers), timeout=self.timeout) as response:
                body = response.read().decode("utf-8")
        except HTTPError as exc:
            if exc.code == 404:
                raise NotFound(cve_id) from None
            raise ProviderUnavailable(f"HTTP {exc.code}") from None
        except URLError as exc:
            raise ProviderUnavailable(str(exc.reason)) from None
        with self._lock:
            self._cache[cve_id] = body
        return body

    def _throttle(self):
        with self._lock:
            wait = self._last_request + self.min_interval - time.monotonic()
            if wait > 0:
                time.sleep(wait)
            self._last_request = time.monotonic()


def fetch_cvss(cve_id: str, provider) -> CvssRecord:
    """Resolve a CVE id to its base vector and locally recomputed score.

    The published score rides along; if it disagrees with the local
    recomputation the record carries a ScoreMismatch warning rather than
    failing, since either side may be stale.
    """
    body = provider.fetch(cve_id)
    try:
        document = json.loads(body)
    except json.JSONDecodeError as exc:
        raise MalformedResponse(str(exc)) from None
    if not isinstance(document, dict):
        raise MalformedResponse("response is not a JSON object")

    vulnerabilities = document.get("vulnerabilities")
    if not vulnerabilities:
        raise NotFound(cve_id)
    try:
        metrics = vulnerabilities[0]["cve"]["metrics"]
    except (KeyError, IndexError, TypeError):
        raise MalformedResponse("no cve.metrics section") from None

    entry = None
    for key in _CVSS_METRIC_KEYS:
        candidates = metrics.get(key) or []
        primaries = [c for c in candidates if c.get("type") == "Primary"]
        if primaries or candidates:
            entry = (primaries or candidates)[0]
            break
    if entry is None:
        raise MalformedResponse("no v3.0/v3.1 base metrics published")
    data = entry.get("cvssData") or {}
    vector_text = data.get("vectorString")
    if not vector_text:
        raise MalformedResponse("metric entry lacks vectorString")
    vector = cvss.parse_vector(vector_text)
    score = cvss.base_score(vector)

    published = data.get("baseScore")
    warnings = ()
    if published is not None:
        published = float(published)
        if abs(published - score) > 1e-9:
            warnings = (ScoreMismatch(published=published, recomputed=score),)
    return CvssRecord(cve_id=cve_id, vector=vector, score=score,
                      published_score=published, warnings=warnings)
