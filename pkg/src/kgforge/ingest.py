"""Streaming readers for the Papers With Code JSON dump files.

Each dump file is a top-level JSON array. Elements are decoded one at a
time, mapped to :class:`EntityRecord` objects through a declarative table
per file kind, validated against the ontology registry, and yielded in
file order. Bad records are skipped and counted rather than aborting the
run; unknown keys are reported once per file.
"""

from __future__ import annotations

import codecs
import copy
import enum
import gzip
import io
import json
import re
from dataclasses import dataclass, field
from datetime import date
from pathlib import Path
from typing import Any, BinaryIO, Callable, Iterable, Iterator
from urllib.parse import urlparse

from .errors import CycleDetected, MalformedJson, UnknownDumpFile, WrongShape
from .ontology import DATATYPE, OBJECT, REGISTRY, Registry, source_key
from .schema import LABELS
from .namespaces import XSD


class DumpFileKind(enum.Enum):
    PAPERS = "papers-with-abstracts.json"
    CODE_LINKS = "links-between-papers-and-code.json"
    EVALUATION_TABLES = "evaluation-tables.json"
    METHODS = "methods.json"
    DATASETS = "datasets.json"

    @classmethod
    def from_filename(cls, name: str) -> "DumpFileKind":
        base = Path(name).name.lower()
        if base.endswith(".gz"):
            base = base[:-3]
        for kind in cls:
            if kind.value == base:
                return kind
        raise UnknownDumpFile(name)


def find_dump_files(directory: str | Path) -> dict[DumpFileKind, Path]:
    """Locate dump files in a directory (names case-insensitive, ``.gz`` optional)."""
    found: dict[DumpFileKind, Path] = {}
    for path in sorted(Path(directory).iterdir()):
        if not path.is_file():
            continue
        try:
            kind = DumpFileKind.from_filename(path.name)
        except UnknownDumpFile:
            continue
        found.setdefault(kind, path)
    return found


# -- records ---------------------------------------------------------------


@dataclass(frozen=True)
class Ref:
    """Reference to another entity by class and slug source; ``label`` is the display name."""

    kind: str
    slug: str
    label: str | None = field(default=None, compare=False)


@dataclass
class EntityRecord:
    kind: str
    slug: str
    scalars: dict[str, Any] = field(default_factory=dict)
    links: dict[str, list[Ref]] = field(default_factory=dict)
    authors: list[str] = field(default_factory=list)
    meta: dict[str, Any] = field(default_factory=dict)

    def add_link(self, prop: str, ref: Ref) -> None:
        self.links.setdefault(prop, []).append(ref)

    def problems(self, registry: Registry = REGISTRY) -> list[str]:
        """Invariant violations; an empty list means the record is valid."""
        out = []
        if self.kind not in registry.classes:
            out.append(f"unregistered class {self.kind!r}")
        if not self.slug or not str(self.slug).strip():
            out.append("empty slug")
        for name in self.scalars:
            p = registry.properties.get(name)
            if p is None or p.kind != DATATYPE:
                out.append(f"unknown datatype property {name!r}")
            elif p.domain_class.local_name != self.kind:
                out.append(f"property {name!r} not applicable to {self.kind}")
        for name, refs in self.links.items():
            p = registry.properties.get(name)
            if p is None or p.kind != OBJECT:
                out.append(f"unknown object property {name!r}")
                continue
            if p.domain_class.local_name != self.kind:
                out.append(f"property {name!r} not applicable to {self.kind}")
            for ref in refs:
                if ref.kind != p.range.local_name:
                    out.append(f"{name} expects {p.range.local_name}, got {ref.kind}")
        if self.authors and self.kind != "Paper":
            out.append("author names on a non-paper record")
        return out


@dataclass
class IngestReport:
    """Per-file warnings. Serialized as JSON lines into ``ingest-report.jsonl``."""

    file: str
    records: int = 0
    skipped: int = 0
    warnings: list[dict] = field(default_factory=list)
    _unknown: dict[str, dict] = field(default_factory=dict, repr=False)

    def warn(self, kind: str, **detail) -> None:
        self.warnings.append({"file": self.file, "warning": kind, **detail})

    def skip(self, index: int | None, reason: str) -> None:
        self.skipped += 1
        self.warn("skipped-record", index=index, reason=reason)

    def unknown_key(self, key: str, index: int) -> None:
        entry = self._unknown.get(key)
        if entry is None:
            entry = {"file": self.file, "warning": "unknown-key", "key": key, "first_index": index, "count": 0}
            self._unknown[key] = entry
            self.warnings.append(entry)
        entry["count"] += 1

    def jsonl(self) -> str:
        summary = {"file": self.file, "summary": True, "records": self.records, "skipped": self.skipped}
        lines = [json.dumps(w, sort_keys=True, ensure_ascii=False) for w in self.warnings]
        lines.append(json.dumps(summary, sort_keys=True))
        return "\n".join(lines) + "\n"


# -- streaming JSON ---------------------------------------------------------

_WS = " \t\n\r"
_GZIP_MAGIC = b"\x1f\x8b"


def _maybe_gunzip(stream: BinaryIO) -> BinaryIO:
    buffered = stream if hasattr(stream, "peek") else io.BufferedReader(stream)
    if buffered.peek(2)[:2] == _GZIP_MAGIC:
        return gzip.GzipFile(fileobj=buffered, mode="rb")
    return buffered


def _maybe_truncated(exc: json.JSONDecodeError, buffered: int) -> bool:
    """Could more input fix this error? Only near the buffer end or inside an open string."""
    return exc.pos >= buffered - 6 or exc.msg.startswith("Unterminated string")


_NUMBER_CHARS = frozenset("0123456789+-.eE")


def _open_number(buf: str, end: int) -> bool:
    """Could the value ending at ``end`` continue past the buffer edge?

    True when it ends exactly at the edge, or when it is a number followed by
    a run of number characters that reaches the edge (``1.`` of ``1.5``).
    """
    if end == len(buf):
        return True
    if end == 0 or buf[end - 1] not in _NUMBER_CHARS:
        return False
    i = end
    while i < len(buf) and buf[i] in _NUMBER_CHARS:
        i += 1
    return i == len(buf) and i > end


def iter_json_array(stream: BinaryIO, chunk_size: int = 1 << 16) -> Iterator[Any]:
    """Yield the elements of a top-level JSON array without loading the whole file.

    Memory use is bounded by the largest element plus one chunk.
    """
    stream = _maybe_gunzip(stream)
    decoder = json.JSONDecoder()
    utf8 = codecs.getincrementaldecoder("utf-8-sig")()
    buf = ""
    pos = 0
    base = 0  # bytes consumed before buf[0]
    eof = False

    def offset(at: int) -> int:
        return base + len(buf[:at].encode("utf-8"))

    def fill() -> bool:
        nonlocal buf, pos, base, eof
        if eof:
            return False
        if pos:
            base += len(buf[:pos].encode("utf-8"))
            buf = buf[pos:]
            pos = 0
        chunk = stream.read(chunk_size)
        try:
            if not chunk:
                eof = True
                buf += utf8.decode(b"", final=True)
                return False
            buf += utf8.decode(chunk)
        except UnicodeDecodeError as exc:
            raise MalformedJson(f"invalid UTF-8: {exc.reason}", offset(len(buf))) from None
        return True

    def skip_ws() -> bool:
        nonlocal pos
        while True:
            while pos < len(buf) and buf[pos] in _WS:
                pos += 1
            if pos < len(buf):
                return True
            if not fill():
                return False

    if not skip_ws():
        raise MalformedJson("empty document", offset(pos))
    if buf[pos] != "[":
        raise WrongShape(f"top-level value starts with {buf[pos]!r}, expected an array")
    pos += 1
    first = True
    while True:
        if not skip_ws():
            raise MalformedJson("unterminated array", offset(pos))
        ch = buf[pos]
        if ch == "]":
            pos += 1
            break
        if not first:
            if ch != ",":
                raise MalformedJson(f"expected ',' or ']', got {ch!r}", offset(pos))
            pos += 1
            if not skip_ws():
                raise MalformedJson("unterminated array", offset(pos))
        while True:
            try:
                value, end = decoder.raw_decode(buf, pos)
            except json.JSONDecodeError as exc:
                at = offset(exc.pos)  # before fill() rebases the buffer
                if _maybe_truncated(exc, len(buf)) and fill():
                    continue
                raise MalformedJson(exc.msg, at) from None
            # A number is only complete once a non-number character follows it.
            if not eof and _open_number(buf, end) and fill():
                continue
            break
        pos = end
        first = False
        yield value
    if skip_ws():
        raise MalformedJson("trailing data after array", offset(pos))


# -- field mapping -----------------------------------------------------------

_DATE = re.compile(r"^(\d{4}-\d{2}-\d{2})")
_YEAR = re.compile(r"^\d{4}$")
_CONFERENCE = re.compile(r"^(?P<name>.*?\b(?P<year>(?:19|20)\d{2}))\b")


def _convert(value: Any, datatype: str) -> Any:
    """Coerce a raw JSON value to the Python type for an XSD range; ValueError if impossible."""
    local = datatype[len(XSD):]
    if local == "date":
        if isinstance(value, str):
            m = _DATE.match(value.strip())
            if m:
                return date.fromisoformat(m.group(1))
        raise ValueError(f"not a date: {value!r}")
    if local == "gYear":
        text = str(value).strip()
        if _YEAR.match(text):
            return int(text)
        raise ValueError(f"not a year: {value!r}")
    if local == "boolean":
        if isinstance(value, bool):
            return value
        raise ValueError(f"not a boolean: {value!r}")
    if isinstance(value, (dict, list)):
        raise ValueError(f"expected a scalar, got {type(value).__name__}")
    return str(value)


def slug_from_url(url: Any) -> str:
    """Last path segment of a Papers With Code URL (``.../paper/<slug>``)."""
    if not isinstance(url, str):
        return ""
    return urlparse(url.strip()).path.rstrip("/").rsplit("/", 1)[-1]


def repo_key(url: Any) -> str:
    """Host and path of a repository URL, scheme and trailing slash removed."""
    if not isinstance(url, str) or not url.strip():
        return ""
    parsed = urlparse(url.strip())
    return (parsed.netloc + parsed.path).rstrip("/")


def parse_proceeding(text: str) -> tuple[str, str] | None:
    """Split a proceeding string such as ``"ACL 2020 7"`` into (edition name, acronym)."""
    text = " ".join(str(text).split())
    if not text:
        return None
    m = _CONFERENCE.match(text)
    name = m.group("name") if m else text
    acronym = name[: m.start("year")].strip() if m else name
    return name, acronym or name


def _names(value: Any, *keys: str) -> list[str]:
    """Display names from a list of strings or objects carrying one of ``keys``."""
    out = []
    for item in value or ():
        if isinstance(item, dict):
            item = next((item[k] for k in keys if isinstance(item.get(k), str)), None)
        if isinstance(item, str) and item.strip():
            out.append(item.strip())
    return out


def _paper_ref(value: Any) -> Ref | None:
    if isinstance(value, dict):
        slug = slug_from_url(value.get("url")) or (value.get("title") or "")
        if slug.strip():
            return Ref("Paper", slug, value.get("title"))
    return None


@dataclass(frozen=True)
class _Map:
    """How one upstream key is handled: a scalar property, links, or a custom action."""

    action: str  # scalar | refs | paper | conference | authors | ignore
    prop: str | None = None
    kind: str | None = None
    markdown: bool = False


PAPERS_MAP = {
    "paper_url": _Map("scalar", "paperUrl"),
    "arxiv_id": _Map("scalar", "arxivId"),
    "title": _Map("scalar", "title"),
    "abstract": _Map("scalar", "abstract"),
    "url_abs": _Map("ignore"),
    "url_pdf": _Map("scalar", "pdfUrl"),
    "proceeding": _Map("conference", "publishedIn"),
    "authors": _Map("authors"),
    "tasks": _Map("refs", "hasTask", "Task"),
    "date": _Map("scalar", "date"),
    "methods": _Map("refs", "hasMethod", "Method"),
}

CODE_LINKS_MAP = {
    "repo_url": _Map("scalar", "repoUrl"),
    "is_official": _Map("scalar", "isOfficial"),
    "framework": _Map("scalar", "framework"),
    "paper_url": _Map("ignore"),
    "paper_title": _Map("ignore"),
    "paper_arxiv_id": _Map("ignore"),
    "paper_url_abs": _Map("ignore"),
    "paper_url_pdf": _Map("ignore"),
    "mentioned_in_paper": _Map("ignore"),
    "mentioned_in_github": _Map("ignore"),
}

METHODS_MAP = {
    "name": _Map("scalar", "methodName"),
    "full_name": _Map("scalar", "methodFullName"),
    "description": _Map("scalar", "methodDescription"),
    "introduced_year": _Map("scalar", "introducedYear"),
    "paper": _Map("paper", "methodIntroducedIn"),
    "url": _Map("ignore"),
    "source_url": _Map("ignore"),
    "source_title": _Map("ignore"),
    "code_snippet_url": _Map("ignore"),
    "main_collection": _Map("ignore"),
    "collections": _Map("ignore"),
}

DATASETS_MAP = {
    "name": _Map("scalar", "datasetName"),
    "full_name": _Map("scalar", "datasetFullName"),
    "homepage": _Map("scalar", "datasetUrl"),
    "description": _Map("scalar", "datasetDescription"),
    "paper": _Map("paper", "introducedIn"),
    "introduced_date": _Map("scalar", "introducedDate"),
    "url": _Map("ignore"),
    "warning": _Map("ignore"),
    "modalities": _Map("ignore"),
    "tasks": _Map("ignore"),
    "languages": _Map("ignore"),
    "variants": _Map("ignore"),
    "num_papers": _Map("ignore"),
    "data_loaders": _Map("ignore"),
}

TASK_MAP = {
    "task": _Map("scalar", "taskName"),
    "description": _Map("scalar", "taskDescription"),
    "categories": _Map("refs", "inArea", "Area"),
    "subtasks": _Map("ignore"),
    "datasets": _Map("ignore"),
    "source_link": _Map("ignore"),
    "synonyms": _Map("ignore"),
}

# (record class, mapping, primary-key extractor) per flat dump kind.
FLAT_KINDS: dict[DumpFileKind, tuple[str, dict[str, _Map], Callable[[dict], str]]] = {
    DumpFileKind.PAPERS: ("Paper", PAPERS_MAP, lambda o: slug_from_url(o.get("paper_url"))),
    DumpFileKind.CODE_LINKS: ("Repository", CODE_LINKS_MAP, lambda o: repo_key(o.get("repo_url"))),
    DumpFileKind.METHODS: ("Method", METHODS_MAP, lambda o: str(o.get("name") or "").strip()),
    DumpFileKind.DATASETS: ("Dataset", DATASETS_MAP, lambda o: str(o.get("name") or "").strip()),
}


def _map_object(obj: dict, record: EntityRecord, mapping: dict[str, _Map], report: IngestReport,
                index: int, registry: Registry) -> None:
    for key, value in obj.items():
        spec = mapping.get(key)
        if spec is None:
            report.unknown_key(key, index)
            continue
        if spec.action == "ignore" or value is None or value == "" or value == []:
            continue
        if spec.action == "scalar":
            try:
                record.scalars[spec.prop] = _convert(value, registry.prop(spec.prop).range_uri)
            except ValueError as exc:
                report.warn("bad-value", index=index, key=key, reason=str(exc))
        elif spec.action == "refs":
            for name in _names(value, "name", "task", "title"):
                record.add_link(spec.prop, Ref(spec.kind, name, name))
        elif spec.action == "paper":
            ref = _paper_ref(value)
            if ref is not None:
                record.add_link(spec.prop, ref)
        elif spec.action == "conference":
            parsed = parse_proceeding(value)
            if parsed is not None:
                record.add_link(spec.prop, Ref("Conference", parsed[0], parsed[0]))
                record.meta.setdefault("conferences", {})[parsed[0]] = parsed[1]
        elif spec.action == "authors":
            record.authors.extend(_names(value, "name", "full_name"))


# -- evaluation tables --------------------------------------------------------


@dataclass
class EvaluationRow:
    model: str
    metrics: dict[str, str]
    paper: Ref | None = None

    def __post_init__(self):
        if any(not str(name).strip() for name in self.metrics):
            raise ValueError("empty metric name")


@dataclass
class EvaluationTableNode:
    table_id: str
    task: Ref
    dataset: Ref | None = None
    rows: list[EvaluationRow] = field(default_factory=list)
    children: list["EvaluationTableNode"] = field(default_factory=list)

    def __post_init__(self):
        if not str(self.table_id).strip():
            raise ValueError("empty table id")


def _row(raw: dict, report: IngestReport, index: int) -> EvaluationRow | None:
    model = str(raw.get("model_name") or "").strip()
    metrics = {}
    for name, value in (raw.get("metrics") or {}).items():
        if not str(name).strip():
            report.warn("empty-metric-name", index=index, model=model)
            continue
        if value is None or value == "":
            continue
        metrics[str(name).strip()] = str(value)
    if not model:
        report.warn("row-without-model", index=index)
        return None
    paper = None
    slug = slug_from_url(raw.get("paper_url")) or str(raw.get("paper_title") or "").strip()
    if slug:
        paper = Ref("Paper", slug, raw.get("paper_title") or None)
    return EvaluationRow(model, metrics, paper)


def _table_node(task: Ref, entry: dict, report: IngestReport, index: int,
                parent: EvaluationTableNode | None = None) -> EvaluationTableNode | None:
    name = str(entry.get("dataset") or "").strip()
    if not name:
        report.warn("table-without-dataset", index=index, task=task.label)
        return None
    if parent is None:
        table_id = f"{task.slug} on {name}"
        dataset = Ref("Dataset", name, name)
    else:
        table_id = f"{parent.table_id} / {name}"
        dataset = Ref("DatasetVariant", f"{parent.dataset.slug} {name}", name)
    rows = []
    for raw in (entry.get("sota") or {}).get("rows") or ():
        row = _row(raw, report, index)
        if row is not None:
            rows.append(row)
    node = EvaluationTableNode(table_id, task, dataset, rows)
    for sub in entry.get("subdatasets") or ():
        child = _table_node(task, sub, report, index, node)
        if child is not None:
            node.children.append(child)
    return node


def task_records(obj: dict, report: IngestReport, index: int,
                 registry: Registry = REGISTRY) -> tuple[list[EntityRecord], list[EvaluationTableNode]]:
    """Task records and evaluation trees for one task object, subtasks included."""
    name = str(obj.get("task") or "").strip()
    if not name:
        report.skip(index, "task without name")
        return [], []
    record = EntityRecord("Task", name)
    _map_object(obj, record, TASK_MAP, report, index, registry)
    task = Ref("Task", name, name)
    records = [record]
    trees = []
    for entry in obj.get("datasets") or ():
        node = _table_node(task, entry, report, index)
        if node is not None:
            trees.append(node)
    for sub in obj.get("subtasks") or ():
        sub_name = str(sub.get("task") or "").strip() if isinstance(sub, dict) else ""
        if sub_name:
            record.add_link("hasSubtask", Ref("Task", sub_name, sub_name))
        sub_records, sub_trees = task_records(sub, report, index, registry)
        records.extend(sub_records)
        trees.extend(sub_trees)
    return records, trees


def flatten_evaluation_tree(root: EvaluationTableNode, seen: set[str] | None = None) -> list[EntityRecord]:
    """Depth-first flattening into EvaluationTable and EvaluationResult records.

    Each node yields one table record (linked to its parent) and each row one
    result record. Subtrees whose table id was already emitted (tracked in
    ``seen``, which may be shared across trees) are skipped. A table id that
    repeats on its own root path raises :class:`CycleDetected`.
    """
    seen = set() if seen is None else seen
    out: list[EntityRecord] = []
    stack: list[tuple[EvaluationTableNode, str | None, int, frozenset]] = [(root, None, 1, frozenset())]
    while stack:
        node, parent_id, depth, path = stack.pop()
        if node.table_id in path:
            raise CycleDetected(node.table_id)
        if node.table_id in seen:
            continue
        seen.add(node.table_id)
        table = EntityRecord("EvaluationTable", node.table_id, meta={"depth": depth})
        table.add_link("forTask", node.task)
        if node.dataset is not None:
            prop = "onDataset" if node.dataset.kind == "Dataset" else "onDatasetVariant"
            table.add_link(prop, node.dataset)
        if parent_id is not None:
            table.add_link("parentTable", Ref("EvaluationTable", parent_id))
        out.append(table)
        table_ref = Ref("EvaluationTable", node.table_id)
        for i, row in enumerate(node.rows, 1):
            result = EntityRecord("EvaluationResult", f"{node.table_id} {i}", meta={"depth": depth})
            result.add_link("inTable", table_ref)
            result.add_link("evaluatesModel", Ref("Model", row.model, row.model))
            for metric, value in row.metrics.items():
                result.add_link("hasMetric", Ref("Metric", metric, metric))
                result.scalars.setdefault("metricValue", []).append(f"{metric}: {value}")
            if row.paper is not None:
                result.add_link("reportedIn", row.paper)
            out.append(result)
        child_path = path | {node.table_id}
        for child in reversed(node.children):
            stack.append((child, node.table_id, depth + 1, child_path))
    return out


# -- readers ---------------------------------------------------------------


def _emit_checked(record: EntityRecord, report: IngestReport, index: int, registry: Registry):
    problems = record.problems(registry)
    if problems:
        report.skip(index, "; ".join(problems))
        return None
    report.records += 1
    return record


def read_dump(
    kind: DumpFileKind,
    stream: BinaryIO,
    report: IngestReport | None = None,
    registry: Registry = REGISTRY,
) -> Iterator[EntityRecord]:
    """Yield validated records from one dump stream (UTF-8 JSON, optionally gzip).

    For evaluation tables the yielded records are Task records followed by the
    flattened tables and results of each task; shared subtrees are emitted
    once per file.
    """
    report = report if report is not None else IngestReport(kind.value)
    seen_tables: set[str] = set()
    for index, obj in enumerate(iter_json_array(stream)):
        if not isinstance(obj, dict):
            report.skip(index, f"element is {type(obj).__name__}, not an object")
            continue
        if kind is DumpFileKind.EVALUATION_TABLES:
            records, trees = task_records(obj, report, index, registry)
            for node in trees:
                try:
                    records.extend(flatten_evaluation_tree(node, seen_tables))
                except CycleDetected as exc:
                    report.skip(index, f"cycle in evaluation table {exc}")
            for record in records:
                checked = _emit_checked(record, report, index, registry)
                if checked is not None:
                    yield checked
            continue
        cls, mapping, key = FLAT_KINDS[kind]
        slug = key(obj)
        if not slug:
            for k in obj:
                if k not in mapping:
                    report.unknown_key(k, index)
            report.skip(index, "missing primary key")
            continue
        record = EntityRecord(cls, slug)
        _map_object(obj, record, mapping, report, index, registry)
        if kind is DumpFileKind.CODE_LINKS:
            record.meta["paper_slug"] = slug_from_url(obj.get("paper_url"))
            record.meta["is_official"] = obj.get("is_official") is True
        checked = _emit_checked(record, report, index, registry)
        if checked is not None:
            yield checked


def read_dump_file(path: str | Path, report: IngestReport | None = None) -> list[EntityRecord]:
    path = Path(path)
    kind = DumpFileKind.from_filename(path.name)
    with open(path, "rb") as fh:
        return list(read_dump(kind, fh, report))


# -- joins -----------------------------------------------------------------


def join_code_links(
    papers: Iterable[EntityRecord],
    links: Iterable[EntityRecord],
    report: IngestReport | None = None,
) -> list[EntityRecord]:
    """Attach repository links to papers; links to unknown papers are reported as dangling.

    Input records are not modified. Link order follows the links file.
    """
    enriched = [copy.deepcopy(p) for p in papers]
    index = {p.slug: p for p in enriched}
    for i, link in enumerate(links):
        paper = index.get(link.meta.get("paper_slug", ""))
        if paper is None:
            if report is not None:
                report.warn("dangling-code-link", index=i, paper=link.meta.get("paper_slug"), repo=link.slug)
            continue
        ref = Ref("Repository", link.slug, link.scalars.get("repoUrl"))
        paper.add_link("hasRepository", ref)
        if link.meta.get("is_official"):
            paper.add_link("hasOfficialRepository", ref)
    return enriched


def merge_repositories(links: Iterable[EntityRecord]) -> list[EntityRecord]:
    """One Repository record per repository; ``isOfficial`` is true if any link says so."""
    merged: dict[str, EntityRecord] = {}
    for link in links:
        existing = merged.get(link.slug)
        if existing is None:
            record = EntityRecord("Repository", link.slug, dict(link.scalars))
            merged[link.slug] = record
            continue
        if link.scalars.get("isOfficial"):
            existing.scalars["isOfficial"] = True
        for k, v in link.scalars.items():
            existing.scalars.setdefault(k, v)
    return list(merged.values())


def referenced_stubs(records: Iterable[EntityRecord]) -> list[EntityRecord]:
    """Minimal typed records for every referenced entity that has no record of its own.

    Stubs carry only the class label property, taken from the reference label.
    Conference stubs also get their acronym.
    """
    records = list(records)
    present = {(r.kind, source_key(r.slug)) for r in records}
    acronyms: dict[str, str] = {}
    for r in records:
        acronyms.update(r.meta.get("conferences", {}))
    stubs: dict[tuple[str, str], EntityRecord] = {}
    for r in records:
        for refs in r.links.values():
            for ref in refs:
                key = (ref.kind, source_key(ref.slug))
                if key in present or key in stubs:
                    continue
                stub = EntityRecord(ref.kind, ref.slug)
                label_prop = LABELS.get(ref.kind)
                if label_prop and ref.label:
                    stub.scalars[label_prop] = ref.label
                if ref.kind == "Conference" and ref.slug in acronyms:
                    stub.scalars["acronym"] = acronyms[ref.slug]
                stubs[key] = stub
    return [stubs[k] for k in sorted(stubs)]
