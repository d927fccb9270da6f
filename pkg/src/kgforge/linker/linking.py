"""Author disambiguation, owl:sameAs creation and graph updates from link decisions."""

from __future__ import annotations

import hashlib
import unicodedata
from collections import Counter, defaultdict
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field
from typing import Iterable

from ..errors import CatalogUnavailable, EmptySlug, EmptyTitle, UnknownPaper
from ..ingest import EntityRecord
from ..namespaces import OWL_SAMEAS, RDF_TYPE
from ..ontology import DEFAULT_POLICY, REGISTRY, Registry, UriPolicy, mint_uri
from ..rdf import IRI, GraphBuffer, Literal, Triple
from ..textnorm import fuzzy_similarity, normalize, title_variants
from .catalog import CatalogClient


@dataclass
class LinkerConfig:
    min_sim: float = 0.90
    case_sensitive: bool = False
    fold_diacritics: bool = False
    local_authors: bool = False
    workers: int = 4


@dataclass(frozen=True)
class AuthorMention:
    """An author name together with the LPWC papers (IRIs and titles) that list it."""

    name: str
    titles: tuple[str, ...]
    papers: tuple[str, ...] = ()

    def __post_init__(self):
        if not self.name.strip():
            raise ValueError("empty author name")
        if not self.titles:
            raise ValueError(f"mention {self.name!r} has no paper titles")

    @property
    def mention_id(self) -> str:
        return hashlib.sha1(self.name.encode("utf-8")).hexdigest()[:16]


@dataclass(frozen=True)
class LinkDecision:
    mention_id: str
    name: str
    linked: bool
    iri: str | None = None
    step: int | None = None
    score: float | None = None
    reason: str | None = None
    papers: tuple[str, ...] = ()

    def __post_init__(self):
        if self.linked:
            if self.iri is None or self.step not in (1, 2) or not 0.0 <= self.score <= 1.0:
                raise ValueError("linked decision needs an IRI, step 1 or 2 and a score in [0, 1]")
            if self.step == 1 and self.score != 1.0:
                raise ValueError("step-1 links have score 1.0")

    @property
    def errored(self) -> bool:
        return not self.linked and self.reason == "catalog-error"

    def to_dict(self) -> dict:
        return {k: v for k, v in self.__dict__.items() if v is not None and k != "papers"}


def _names_equal(a: str, b: str, case_sensitive: bool) -> bool:
    a = unicodedata.normalize("NFC", a).strip()
    b = unicodedata.normalize("NFC", b).strip()
    return a == b if case_sensitive else a.casefold() == b.casefold()


def _substring_match(x: str, y: str) -> bool:
    return bool(x) and bool(y) and (x in y or y in x)


def _step_one(mention: AuthorMention, catalog: CatalogClient, cfg: LinkerConfig) -> tuple[str, int] | None:
    own_titles = [normalize(t).value for t in mention.titles]
    best = None
    for cand in catalog.candidates_by_name(mention.name):
        if not _names_equal(cand.name, mention.name, cfg.case_sensitive):
            continue
        theirs = [normalize(t).value for t in cand.work_titles]
        hits = sum(any(_substring_match(mine, other) for other in theirs) for mine in own_titles)
        if hits == 0:
            continue
        key = (-hits, cand.iri)
        if best is None or key < best:
            best = key
    return None if best is None else (best[1], -best[0])


def _step_two(mention: AuthorMention, catalog: CatalogClient, cfg: LinkerConfig) -> tuple[str, float] | None:
    own = normalize(mention.name, fold_diacritics=cfg.fold_diacritics).value
    scores: dict[str, float] = {}
    works: dict[str, set[str]] = defaultdict(set)
    for title in mention.titles:
        try:
            variants = title_variants(title)
        except EmptyTitle:
            continue
        for variant in variants:
            for work in catalog.works_by_title_variant(variant):
                for author in work.authors:
                    other = normalize(author.name, fold_diacritics=cfg.fold_diacritics).value
                    sim = fuzzy_similarity(own, other)
                    scores[author.iri] = max(scores.get(author.iri, 0.0), sim)
                    works[author.iri].add(work.iri)
    ranked = sorted(scores, key=lambda iri: (-scores[iri], -len(works[iri]), iri))
    if ranked and scores[ranked[0]] >= cfg.min_sim:
        return ranked[0], scores[ranked[0]]
    return None


def disambiguate_author(
    mention: AuthorMention, catalog: CatalogClient, cfg: LinkerConfig | None = None
) -> LinkDecision:
    """Two-step linking of one author mention.

    Step 1 takes catalog authors with exactly the same name and keeps those
    with a work whose normalized title contains, or is contained in, one of
    the mention's normalized paper titles. Ties go to the candidate matching
    the most titles, then to the smallest IRI.

    Step 2 runs only when step 1 finds nothing: works are fetched for every
    title variant and their authors are scored by fuzzy name similarity. The
    best author at or above ``cfg.min_sim`` wins (ties: most matched works,
    then smallest IRI).
    """
    cfg = cfg or LinkerConfig()
    base = dict(mention_id=mention.mention_id, name=mention.name, papers=mention.papers)
    try:
        first = _step_one(mention, catalog, cfg)
        if first is not None:
            return LinkDecision(linked=True, iri=first[0], step=1, score=1.0, **base)
        second = _step_two(mention, catalog, cfg)
    except CatalogUnavailable:
        return LinkDecision(linked=False, reason="catalog-error", **base)
    if second is not None:
        return LinkDecision(linked=True, iri=second[0], step=2, score=second[1], **base)
    return LinkDecision(linked=False, reason="no-match", **base)


def disambiguate_all(
    mentions: Iterable[AuthorMention], catalog: CatalogClient, cfg: LinkerConfig | None = None
) -> list[LinkDecision]:
    """Disambiguate mentions on a worker pool; the result is sorted by mention id."""
    cfg = cfg or LinkerConfig()
    mentions = list(mentions)
    if cfg.workers > 1:
        with ThreadPoolExecutor(max_workers=cfg.workers) as pool:
            decisions = list(pool.map(lambda m: disambiguate_author(m, catalog, cfg), mentions))
    else:
        decisions = [disambiguate_author(m, catalog, cfg) for m in mentions]
    return sorted(decisions, key=lambda d: (d.mention_id, d.name))


def mentions_from_graph(graph: GraphBuffer, registry: Registry = REGISTRY) -> list[AuthorMention]:
    """Group ``authorName`` literals by name, collecting the titles of the papers that carry them."""
    author_name = IRI(registry.prop("authorName").uri)
    title = IRI(registry.prop("title").uri)
    titles: dict[IRI, list[str]] = defaultdict(list)
    papers_by_name: dict[str, set[str]] = defaultdict(set)
    for t in graph:
        if t.predicate == author_name and isinstance(t.object, Literal):
            papers_by_name[t.object.lexical].add(t.subject.value)
        elif t.predicate == title and isinstance(t.object, Literal):
            titles[t.subject].append(t.object.lexical)
    mentions = []
    for name in sorted(papers_by_name):
        papers = tuple(sorted(papers_by_name[name]))
        paper_titles = tuple(sorted({x for p in papers for x in titles.get(IRI(p), ())}))
        if name.strip() and paper_titles:
            mentions.append(AuthorMention(name, paper_titles, papers))
    return mentions


def link_summary(decisions: Iterable[LinkDecision]) -> dict:
    decisions = list(decisions)
    linked = sum(d.linked for d in decisions)
    errored = sum(d.errored for d in decisions)
    return {
        "total": len(decisions),
        "linked": linked,
        "linked_step1": sum(d.linked and d.step == 1 for d in decisions),
        "linked_step2": sum(d.linked and d.step == 2 for d in decisions),
        "unlinked": len(decisions) - linked - errored,
        "errored": errored,
    }


def apply_link_decisions(
    decisions: Iterable[LinkDecision],
    graph: GraphBuffer,
    cfg: LinkerConfig | None = None,
    policy: UriPolicy = DEFAULT_POLICY,
    registry: Registry = REGISTRY,
) -> dict:
    """Write decisions into the graph.

    A linked mention replaces the paper's ``authorName`` literal with a
    ``hasAuthor`` link, either straight to the external author or, with
    ``cfg.local_authors``, to a minted local author that is ``owl:sameAs`` the
    external one. Unlinked mentions keep (or gain) the ``authorName`` literal.
    All referenced papers are checked before anything is modified.
    """
    cfg = cfg or LinkerConfig()
    decisions = list(decisions)
    papers = graph.subjects_of_class(registry.cls("Paper").uri)
    for d in decisions:
        for paper in d.papers:
            if IRI(paper) not in papers:
                raise UnknownPaper(paper)
    author_name = IRI(registry.prop("authorName").uri)
    has_author = IRI(registry.prop("hasAuthor").uri)
    summary = Counter(linked=0, unlinked=0, link_triples=0, author_name_triples=0)
    for d in decisions:
        summary["linked" if d.linked else "unlinked"] += 1
        for paper in map(IRI, d.papers):
            name = Literal(d.name)
            if not d.linked:
                graph.add(Triple(paper, author_name, name))
                summary["author_name_triples"] += 1
                continue
            graph.discard(Triple(paper, author_name, name))
            external = IRI(d.iri)
            if cfg.local_authors:
                local = IRI(mint_uri("Author", d.name, policy))
                graph.add(Triple(local, IRI(RDF_TYPE), IRI(registry.cls("Author").uri)))
                graph.add(Triple(local, IRI(registry.prop("fullName").uri), name))
                graph.add(Triple(local, IRI(OWL_SAMEAS), external))
                graph.add(Triple(paper, has_author, local))
            else:
                graph.add(Triple(paper, has_author, external))
            summary["link_triples"] += 1
    return dict(summary)


# -- owl:sameAs ----------------------------------------------------------------


@dataclass
class LinkReport:
    kind: str
    total: int = 0
    linked: int = 0
    unlinked: Counter = field(default_factory=Counter)
    errored: int = 0

    @property
    def ratio(self) -> float:
        return self.linked / self.total if self.total else 0.0

    def to_dict(self) -> dict:
        return {
            "kind": self.kind,
            "total": self.total,
            "linked": self.linked,
            "unlinked": dict(sorted(self.unlinked.items())),
            "errored": self.errored,
            "ratio": round(self.ratio, 6),
        }


def _first(value):
    if isinstance(value, list):
        return value[0] if value else None
    return value


def _lookup_paper(record: EntityRecord, catalog: CatalogClient) -> tuple[str | None, str]:
    title = _first(record.scalars.get("title"))
    if not title:
        return None, "no-title"
    try:
        variants = title_variants(title)
    except EmptyTitle:
        return None, "no-title"
    ambiguous = False
    for variant in variants:
        hits = {w.iri for w in catalog.works_by_title_variant(variant)}
        if len(hits) == 1:
            return hits.pop(), ""
        ambiguous = ambiguous or len(hits) > 1
    return None, "ambiguous" if ambiguous else "no-match"


def _lookup_unique(hits: list[str]) -> tuple[str | None, str]:
    hits = sorted(set(hits))
    if len(hits) == 1:
        return hits[0], ""
    return None, "ambiguous" if hits else "no-match"


def link_sameas(
    kind: str,
    records: Iterable[EntityRecord],
    catalog: CatalogClient,
    policy: UriPolicy = DEFAULT_POLICY,
) -> tuple[set[Triple], LinkReport]:
    """owl:sameAs links for papers, conferences or datasets.

    Papers use the first title variant that hits exactly one work;
    conferences use a name/acronym lookup; datasets an exact normalized
    label lookup. Ambiguous hits stay unlinked.
    """
    kinds = {"paper": "Paper", "conference": "Conference", "dataset": "Dataset"}
    cls = kinds[kind.lower()]
    report = LinkReport(kind.lower())
    triples: set[Triple] = set()
    same_as = IRI(OWL_SAMEAS)
    for record in records:
        if record.kind != cls:
            raise ValueError(f"expected {cls} records, got {record.kind}")
        report.total += 1
        try:
            if cls == "Paper":
                target, reason = _lookup_paper(record, catalog)
            elif cls == "Conference":
                name = _first(record.scalars.get("conferenceName")) or record.slug
                target, reason = _lookup_unique(catalog.conference_lookup(name, _first(record.scalars.get("acronym"))))
            else:
                label = _first(record.scalars.get("datasetName")) or record.slug
                target, reason = _lookup_unique(catalog.dataset_lookup(label))
        except CatalogUnavailable:
            report.errored += 1
            continue
        if target is None:
            report.unlinked[reason] += 1
            continue
        try:
            subject = IRI(record.meta.get("iri") or mint_uri(cls, record.slug, policy))
        except EmptySlug:
            report.unlinked["bad-slug"] += 1
            continue
        triples.add(Triple(subject, same_as, IRI(target)))
        report.linked += 1
    return triples, report


def records_from_graph(graph: GraphBuffer, kind: str, registry: Registry = REGISTRY) -> list[EntityRecord]:
    """Rebuild minimal records (label properties only) for sameAs linking from a built graph.

    The subject IRI is kept in ``meta["iri"]``; when a label property has
    several values the smallest one is used.
    """
    cls = {"paper": "Paper", "conference": "Conference", "dataset": "Dataset"}[kind.lower()]
    wanted = {
        "Paper": ("title",),
        "Conference": ("conferenceName", "acronym"),
        "Dataset": ("datasetName",),
    }[cls]
    props = {IRI(registry.prop(p).uri): p for p in wanted}
    subjects = graph.subjects_of_class(registry.cls(cls).uri)
    records = {s: EntityRecord(cls, s.value.rsplit("/", 1)[-1], meta={"iri": s.value}) for s in subjects}
    for t in graph:
        if t.subject in records and t.predicate in props and isinstance(t.object, Literal):
            scalars = records[t.subject].scalars
            name = props[t.predicate]
            scalars[name] = min(scalars.get(name, t.object.lexical), t.object.lexical)
    return [records[s] for s in sorted(records, key=lambda i: i.value)]
