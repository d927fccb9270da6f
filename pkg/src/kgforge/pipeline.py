"""Build and link steps shared by the CLI and the demos."""

from __future__ import annotations

import logging
from dataclasses import dataclass, field
from datetime import date
from pathlib import Path

from .errors import EmptySlug, UriCollision
from .ingest import (
    DumpFileKind,
    EntityRecord,
    IngestReport,
    Ref,
    find_dump_files,
    join_code_links,
    merge_repositories,
    read_dump,
    referenced_stubs,
)
from .linker import (
    CatalogClient,
    LinkerConfig,
    apply_link_decisions,
    disambiguate_all,
    link_sameas,
    link_summary,
    mentions_from_graph,
    records_from_graph,
)
from .ontology import DEFAULT_POLICY, REGISTRY, Registry, UriPolicy, UriRegistry, emit_void, source_key
from .rdf import GraphBuffer
from .rdf.emit import emit_entity
from .stats import count_entities

log = logging.getLogger(__name__)


@dataclass
class BuildResult:
    graph: GraphBuffer
    reports: list[IngestReport] = field(default_factory=list)
    collisions: IngestReport = field(default_factory=lambda: IngestReport("uri-registry"))

    def report_jsonl(self) -> str:
        parts = [r.jsonl() for r in self.reports]
        if self.collisions.warnings:
            parts.append(self.collisions.jsonl())
        return "".join(parts)


def _read(files: dict[DumpFileKind, Path], kind: DumpFileKind, reports: list[IngestReport],
          registry: Registry) -> list[EntityRecord]:
    path = files.get(kind)
    if path is None:
        return []
    report = IngestReport(path.name)
    reports.append(report)
    with open(path, "rb") as fh:
        records = list(read_dump(kind, fh, report, registry))
    log.info("read %s: %d records, %d skipped", path.name, report.records, report.skipped)
    return records


def _dedupe(values: list) -> list:
    seen = []
    for v in values:
        if v not in seen:
            seen.append(v)
    return seen


def merge_records(records: list[EntityRecord]) -> list[EntityRecord]:
    """Fold records that describe the same entity; the first value of a scalar wins.

    Output is sorted by class and slug key so IRI registration order is fixed.
    """
    merged: dict[tuple[str, str], EntityRecord] = {}
    for r in records:
        key = (r.kind, source_key(r.slug))
        into = merged.get(key)
        if into is None:
            merged[key] = EntityRecord(r.kind, r.slug, dict(r.scalars),
                                       {k: list(v) for k, v in r.links.items()}, list(r.authors), dict(r.meta))
            continue
        for k, v in r.scalars.items():
            into.scalars.setdefault(k, v)
        for k, refs in r.links.items():
            into.links[k] = _dedupe(into.links.get(k, []) + refs)
        into.authors = _dedupe(into.authors + r.authors)
    return [merged[k] for k in sorted(merged)]


def collect_records(input_dir: str | Path, registry: Registry = REGISTRY) -> tuple[list[EntityRecord], list[IngestReport]]:
    files = find_dump_files(input_dir)
    reports: list[IngestReport] = []
    papers = _read(files, DumpFileKind.PAPERS, reports, registry)
    links = _read(files, DumpFileKind.CODE_LINKS, reports, registry)
    if links:
        papers = join_code_links(papers, links, reports[-1])
    records = papers + merge_repositories(links)
    for kind in (DumpFileKind.METHODS, DumpFileKind.DATASETS, DumpFileKind.EVALUATION_TABLES):
        records += _read(files, kind, reports, registry)
    records = merge_records(records)
    return merge_records(records + referenced_stubs(records)), reports


def _drop_colliding_refs(record: EntityRecord, uris: UriRegistry, report: IngestReport) -> None:
    for prop, refs in record.links.items():
        kept: list[Ref] = []
        for ref in refs:
            try:
                uris.mint(ref.kind, ref.slug)
            except (UriCollision, EmptySlug) as exc:
                report.warn("dropped-link", subject=record.slug, property=prop, reason=str(exc))
                continue
            kept.append(ref)
        record.links[prop] = kept


def build_graph(
    input_dir: str | Path,
    policy: UriPolicy = DEFAULT_POLICY,
    registry: Registry = REGISTRY,
) -> BuildResult:
    """Ingest every dump file in ``input_dir`` and emit the data graph.

    Records are registered in sorted order; a record whose IRI is already
    owned by a different source string is dropped, as are links to it.
    """
    records, reports = collect_records(input_dir, registry)
    result = BuildResult(GraphBuffer(), reports)
    uris = UriRegistry(policy)
    accepted = []
    for record in records:
        try:
            uris.mint(record.kind, record.slug)
        except (UriCollision, EmptySlug) as exc:
            result.collisions.skip(None, f"{record.kind} {record.slug!r}: {exc}")
            continue
        accepted.append(record)
    for record in accepted:
        _drop_colliding_refs(record, uris, result.collisions)
        result.graph.update(emit_entity(record, policy, registry, uris))
    log.info("built graph: %d triples from %d records", len(result.graph), len(accepted))
    return result


def void_for(graph: GraphBuffer, dump_date: date | None = None, policy: UriPolicy = DEFAULT_POLICY,
             registry: Registry = REGISTRY) -> GraphBuffer:
    return GraphBuffer(emit_void(count_entities(graph, registry), dump_date, policy, registry))


def link_graph(
    graph: GraphBuffer,
    catalog: CatalogClient,
    cfg: LinkerConfig | None = None,
    policy: UriPolicy = DEFAULT_POLICY,
    registry: Registry = REGISTRY,
) -> tuple[dict, list]:
    """Disambiguate authors, add owl:sameAs links and update ``graph`` in place.

    Returns the link report and the author decisions.
    """
    cfg = cfg or LinkerConfig()
    sameas_records = {kind: records_from_graph(graph, kind, registry) for kind in ("paper", "conference", "dataset")}
    decisions = disambiguate_all(mentions_from_graph(graph, registry), catalog, cfg)
    applied = apply_link_decisions(decisions, graph, cfg, policy, registry)
    report = {"authors": {**link_summary(decisions), **applied}, "sameAs": {}}
    for kind, records in sameas_records.items():
        triples, rep = link_sameas(kind, records, catalog, policy)
        graph.update(triples)
        report["sameAs"][kind] = rep.to_dict()
    return report, decisions
