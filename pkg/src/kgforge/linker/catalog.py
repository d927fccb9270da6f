"""External catalog clients used by the linker.

Two interchangeable implementations exist: :class:`FixtureCatalog`, backed
by a local JSON file, and :class:`SparqlCatalog`, which speaks the SPARQL
protocol to remote endpoints. Both apply the same matching semantics on the
client side so the linker sees identical behaviour.

Fixture file schema::

    {
      "authors":     [{"id": IRI, "name": str, "works": [work IRI, ...]}],
      "works":       [{"id": IRI, "title": str, "authors": [author IRI, ...]}],
      "conferences": [{"id": IRI, "name": str, "acronym": str}],
      "datasets":    [{"id": IRI, "label": str}]
    }
"""

from __future__ import annotations

import json
import logging
import threading
import time
import unicodedata
from collections import defaultdict
from dataclasses import dataclass
from pathlib import Path
from typing import Protocol

import requests

from ..errors import CatalogUnavailable
from ..rdf.terms import IRI
from ..textnorm import normalize

log = logging.getLogger(__name__)


@dataclass(frozen=True)
class CatalogCandidate:
    iri: str
    name: str
    work_titles: tuple[str, ...] = ()

    def __post_init__(self):
        IRI(self.iri)


@dataclass(frozen=True)
class CatalogWork:
    iri: str
    title: str
    authors: tuple[CatalogCandidate, ...] = ()


class CatalogClient(Protocol):
    def candidates_by_name(self, name: str) -> list[CatalogCandidate]: ...

    def works_by_title_variant(self, variant: str) -> list[CatalogWork]: ...

    def conference_lookup(self, name: str, acronym: str | None) -> list[str]: ...

    def dataset_lookup(self, label: str) -> list[str]: ...


def name_key(name: str) -> str:
    return unicodedata.normalize("NFC", name).strip().casefold()


def _match_conferences(entries, name: str, acronym: str | None) -> list[str]:
    """Exact normalized name matches, falling back to acronym matches."""
    wanted = normalize(name).value
    by_name = sorted({iri for iri, n, _ in entries if normalize(n).value == wanted})
    if by_name or not acronym:
        return by_name
    key = normalize(acronym).value
    return sorted({iri for iri, _, a in entries if a and normalize(a).value == key})


class FixtureCatalog:
    """Offline catalog loaded from a JSON document (see module docstring)."""

    def __init__(self, data: dict):
        self.data = data
        works = {w["id"]: w for w in data.get("works", [])}
        authors = {a["id"]: a for a in data.get("authors", [])}
        self._by_name: dict[str, list[CatalogCandidate]] = defaultdict(list)
        for a in authors.values():
            titles = tuple(works[w]["title"] for w in a.get("works", []) if w in works)
            self._by_name[name_key(a["name"])].append(CatalogCandidate(a["id"], a["name"], titles))
        self._by_title: dict[str, list[CatalogWork]] = defaultdict(list)
        for w in works.values():
            people = tuple(
                CatalogCandidate(authors[i]["id"], authors[i]["name"]) for i in w.get("authors", []) if i in authors
            )
            self._by_title[normalize(w["title"]).value].append(CatalogWork(w["id"], w["title"], people))
        self._conferences = [(c["id"], c.get("name", ""), c.get("acronym")) for c in data.get("conferences", [])]
        self._datasets: dict[str, list[str]] = defaultdict(list)
        for d in data.get("datasets", []):
            self._datasets[normalize(d["label"]).value].append(d["id"])

    @classmethod
    def from_file(cls, path: str | Path) -> "FixtureCatalog":
        with open(path, encoding="utf-8") as fh:
            return cls(json.load(fh))

    def candidates_by_name(self, name: str) -> list[CatalogCandidate]:
        return list(self._by_name.get(name_key(name), ()))

    def works_by_title_variant(self, variant: str) -> list[CatalogWork]:
        return list(self._by_title.get(variant, ()))

    def conference_lookup(self, name: str, acronym: str | None) -> list[str]:
        return _match_conferences(self._conferences, name, acronym)

    def dataset_lookup(self, label: str) -> list[str]:
        return sorted(set(self._datasets.get(normalize(label).value, ())))


# -- remote ----------------------------------------------------------------

SEMOPENALEX = "https://semopenalex.org/sparql"
DBLP = "https://sparql.dblp.org/sparql"
WIKIDATA = "https://query.wikidata.org/sparql"

_PREFIXES = """PREFIX foaf: <http://xmlns.com/foaf/0.1/>
PREFIX dcterms: <http://purl.org/dc/terms/>
PREFIX rdfs: <http://www.w3.org/2000/01/rdf-schema#>
PREFIX soa: <https://semopenalex.org/ontology/>
"""

AUTHOR_QUERY = _PREFIXES + """SELECT ?author ?name ?title WHERE {
  ?author a soa:Author ; foaf:name ?name .
  FILTER(LCASE(STR(?name)) = %(name)s)
  OPTIONAL { ?work dcterms:creator ?author ; dcterms:title ?title . }
}"""

WORK_QUERY = _PREFIXES + """SELECT ?work ?title ?author ?name WHERE {
  ?work a soa:Work ; dcterms:title ?title .
  FILTER(LCASE(STR(?title)) = %(variant)s)
  OPTIONAL { ?work dcterms:creator ?author . ?author foaf:name ?name . }
}"""

CONFERENCE_QUERY = """PREFIX dblp: <https://dblp.org/rdf/schema#>
PREFIX rdfs: <http://www.w3.org/2000/01/rdf-schema#>
SELECT ?conf ?name ?acronym WHERE {
  ?conf a dblp:Stream ; rdfs:label ?name .
  OPTIONAL { ?conf dblp:streamTitle ?acronym . }
  FILTER(CONTAINS(LCASE(STR(?name)), %(acronym)s))
}"""

DATASET_QUERY = """PREFIX wdt: <http://www.wikidata.org/prop/direct/>
PREFIX wd: <http://www.wikidata.org/entity/>
PREFIX rdfs: <http://www.w3.org/2000/01/rdf-schema#>
SELECT ?item ?label WHERE {
  ?item wdt:P31/wdt:P279* wd:Q1172284 ; rdfs:label ?label .
  FILTER(LANG(?label) = "en" && LCASE(STR(?label)) = %(label)s)
}"""


def sparql_string(value: str) -> str:
    escaped = (value.replace("\\", "\\\\").replace('"', '\\"')
               .replace("\n", "\\n").replace("\r", "\\r").replace("\t", "\\t"))
    return f'"{escaped}"'


class SparqlCatalog:
    """Catalog client over the SPARQL protocol with retries and a persistent cache.

    At most ``max_in_flight`` requests run at once. A failed request is retried
    after each delay in ``backoff``; when all attempts fail the call raises
    :class:`CatalogUnavailable`. Responses are cached by (endpoint, query)
    and appended to ``cache_path`` so a re-run can be served offline.
    """

    def __init__(
        self,
        semopenalex: str = SEMOPENALEX,
        dblp: str = DBLP,
        wikidata: str = WIKIDATA,
        *,
        max_in_flight: int = 4,
        backoff: tuple[float, ...] = (1.0, 2.0, 4.0),
        timeout: float = 30.0,
        cache_path: str | Path | None = None,
        session: requests.Session | None = None,
        sleep=None,
    ):
        self.endpoints = {"semopenalex": semopenalex, "dblp": dblp, "wikidata": wikidata}
        self.backoff = tuple(backoff)
        self.timeout = timeout
        self.session = session or requests.Session()
        self.sleep = sleep or time.sleep
        self._slots = threading.BoundedSemaphore(max_in_flight)
        self._lock = threading.Lock()
        self._cache: dict[tuple[str, str], list[dict]] = {}
        self.cache_path = Path(cache_path) if cache_path else None
        self.requests_made = 0
        if self.cache_path and self.cache_path.exists():
            with open(self.cache_path, encoding="utf-8") as fh:
                for line in fh:
                    if line.strip():
                        entry = json.loads(line)
                        self._cache[(entry["endpoint"], entry["query"])] = entry["bindings"]

    def _request(self, endpoint: str, query: str) -> requests.Response:
        headers = {"Accept": "application/sparql-results+json"}
        if len(query) <= 2000:
            return self.session.get(endpoint, params={"query": query}, headers=headers, timeout=self.timeout)
        return self.session.post(endpoint, data={"query": query}, headers=headers, timeout=self.timeout)

    def select(self, endpoint: str, query: str) -> list[dict[str, str]]:
        """Run a SELECT query and return bindings as plain ``{var: value}`` dicts."""
        key = (endpoint, query)
        with self._lock:
            if key in self._cache:
                return self._cache[key]
        last_error: Exception | None = None
        for attempt, delay in enumerate((0.0,) + self.backoff):
            if delay:
                self.sleep(delay)
            try:
                with self._slots:
                    self.requests_made += 1
                    response = self._request(endpoint, query)
                if response.status_code == 429 or response.status_code >= 500:
                    last_error = CatalogUnavailable(f"HTTP {response.status_code} from {endpoint}")
                    continue
                response.raise_for_status()
                rows = response.json()["results"]["bindings"]
            except (requests.RequestException, ValueError, KeyError) as exc:
                last_error = exc
                log.debug("attempt %d against %s failed: %s", attempt + 1, endpoint, exc)
                continue
            bindings = [{var: cell["value"] for var, cell in row.items()} for row in rows]
            self._store(key, bindings)
            return bindings
        raise CatalogUnavailable(f"{endpoint}: {last_error}")

    def _store(self, key: tuple[str, str], bindings: list[dict]) -> None:
        with self._lock:
            self._cache[key] = bindings
            if self.cache_path:
                self.cache_path.parent.mkdir(parents=True, exist_ok=True)
                with open(self.cache_path, "a", encoding="utf-8") as fh:
                    entry = {"endpoint": key[0], "query": key[1], "bindings": bindings}
                    fh.write(json.dumps(entry, sort_keys=True, ensure_ascii=False) + "\n")

    def candidates_by_name(self, name: str) -> list[CatalogCandidate]:
        rows = self.select(self.endpoints["semopenalex"],
                           AUTHOR_QUERY % {"name": sparql_string(name_key(name))})
        grouped: dict[str, tuple[str, list[str]]] = {}
        for row in rows:
            if name_key(row.get("name", "")) != name_key(name):
                continue
            entry = grouped.setdefault(row["author"], (row["name"], []))
            if row.get("title"):
                entry[1].append(row["title"])
        return [CatalogCandidate(iri, n, tuple(t)) for iri, (n, t) in sorted(grouped.items())]

    def works_by_title_variant(self, variant: str) -> list[CatalogWork]:
        rows = self.select(self.endpoints["semopenalex"], WORK_QUERY % {"variant": sparql_string(variant)})
        grouped: dict[str, tuple[str, dict[str, str]]] = {}
        for row in rows:
            if normalize(row.get("title", "")).value != variant:
                continue
            entry = grouped.setdefault(row["work"], (row["title"], {}))
            if row.get("author"):
                entry[1][row["author"]] = row.get("name", "")
        return [
            CatalogWork(iri, title, tuple(CatalogCandidate(a, n) for a, n in sorted(people.items())))
            for iri, (title, people) in sorted(grouped.items())
        ]

    def conference_lookup(self, name: str, acronym: str | None) -> list[str]:
        probe = normalize(acronym or name).value
        rows = self.select(self.endpoints["dblp"], CONFERENCE_QUERY % {"acronym": sparql_string(probe)})
        entries = [(r["conf"], r.get("name", ""), r.get("acronym")) for r in rows]
        return _match_conferences(entries, name, acronym)

    def dataset_lookup(self, label: str) -> list[str]:
        rows = self.select(self.endpoints["wikidata"], DATASET_QUERY % {"label": sparql_string(label.lower())})
        wanted = normalize(label).value
        return sorted({r["item"] for r in rows if normalize(r.get("label", "")).value == wanted})
