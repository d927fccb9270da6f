"""Entity counts and per-conference metric histograms computed by scanning a graph."""

from __future__ import annotations

import csv
import io
import json
from collections import Counter, defaultdict
from dataclasses import dataclass, field

from .namespaces import LINK_TARGETS, OWL_SAMEAS
from .ontology import REGISTRY, Registry
from .rdf import IRI, GraphBuffer, Literal
from .textnorm import normalize


@dataclass
class GraphStats:
    triple_count: int = 0
    class_counts: dict[str, int] = field(default_factory=dict)
    papers_with_evaluations: int = 0
    linkset_counts: dict[str, int] = field(default_factory=dict)

    def to_dict(self) -> dict:
        return {
            "triples": self.triple_count,
            "classes": dict(sorted(self.class_counts.items())),
            "papers_with_evaluations": self.papers_with_evaluations,
            "linksets": dict(sorted(self.linkset_counts.items())),
        }


@dataclass
class MetricHistogram:
    conference: str
    bins: dict[str, int] = field(default_factory=dict)
    unknown: bool = False

    @property
    def total(self) -> int:
        return sum(self.bins.values())


def _link_target(iri: str) -> str | None:
    for name, ns in LINK_TARGETS.items():
        if iri.startswith(ns):
            return name
    return None


def count_entities(graph: GraphBuffer, registry: Registry = REGISTRY) -> GraphStats:
    """Per-class distinct typed subjects, papers with evaluation results and external link counts.

    Link counts cover ``owl:sameAs`` and ``hasAuthor`` triples whose object
    lies in one of the external target namespaces.
    """
    counts = {name: len(graph.subjects_of_class(c.uri)) for name, c in registry.classes.items()}
    papers = graph.subjects_of_class(registry.cls("Paper").uri)
    results = graph.subjects_of_class(registry.cls("EvaluationResult").uri)
    reported_in = IRI(registry.prop("reportedIn").uri)
    link_preds = {IRI(OWL_SAMEAS), IRI(registry.prop("hasAuthor").uri)}
    evaluated: set[IRI] = set()
    links = Counter({name: 0 for name in LINK_TARGETS})
    for t in graph:
        if t.predicate == reported_in and t.subject in results and t.object in papers:
            evaluated.add(t.object)
        elif t.predicate in link_preds and isinstance(t.object, IRI):
            target = _link_target(t.object.value)
            if target is not None:
                links[target] += 1
    return GraphStats(len(graph), counts, len(evaluated), dict(links))


def metric_distribution(
    graph: GraphBuffer,
    conferences: list[str],
    registry: Registry = REGISTRY,
) -> list[MetricHistogram]:
    """Count (paper, metric) incidences over evaluation results of papers at each conference.

    A requested name matches every Conference entity whose name or acronym
    normalizes to the same string, so ``"acl"`` covers all ACL editions.
    Unknown names come back flagged with an empty histogram.
    """
    p = {name: IRI(registry.prop(name).uri) for name in
         ("conferenceName", "acronym", "publishedIn", "reportedIn", "hasMetric", "metricName")}
    conference_class = IRI(registry.cls("Conference").uri)
    conf_names: dict[IRI, set[str]] = defaultdict(set)
    published: dict[IRI, set[IRI]] = defaultdict(set)  # conference -> papers
    reported: dict[IRI, set[IRI]] = defaultdict(set)  # result -> papers
    metrics_of: dict[IRI, set[IRI]] = defaultdict(set)  # result -> metrics
    metric_label: dict[IRI, str] = {}
    conf_entities = graph.subjects_of_class(conference_class)
    for t in graph:
        if t.predicate in (p["conferenceName"], p["acronym"]) and isinstance(t.object, Literal):
            conf_names[t.subject].add(normalize(t.object.lexical).value)
        elif t.predicate == p["publishedIn"]:
            published[t.object].add(t.subject)
        elif t.predicate == p["reportedIn"]:
            reported[t.subject].add(t.object)
        elif t.predicate == p["hasMetric"]:
            metrics_of[t.subject].add(t.object)
        elif t.predicate == p["metricName"] and isinstance(t.object, Literal):
            metric_label[t.subject] = t.object.lexical

    def label(metric: IRI) -> str:
        return metric_label.get(metric) or metric.value.rsplit("/", 1)[-1]

    out = []
    for name in conferences:
        key = normalize(name).value
        matched = {c for c in conf_entities if key in conf_names.get(c, ())}
        if not matched:
            out.append(MetricHistogram(name, {}, unknown=True))
            continue
        conf_papers = set().union(*(published.get(c, set()) for c in matched))
        pairs = set()
        for result, papers in reported.items():
            for paper in papers & conf_papers:
                for metric in metrics_of.get(result, ()):
                    pairs.add((paper, label(metric)))
        counts = Counter(metric for _, metric in pairs)
        bins = dict(sorted(counts.items(), key=lambda kv: (-kv[1], kv[0])))
        out.append(MetricHistogram(name, bins))
    return out


# -- output ----------------------------------------------------------------


def entities_csv(stats: GraphStats) -> str:
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(["entity_type", "instances"])
    for name, count in sorted(stats.class_counts.items()):
        w.writerow([name, count])
    w.writerow(["PaperWithEvaluations", stats.papers_with_evaluations])
    w.writerow(["Triples", stats.triple_count])
    for target, count in sorted(stats.linkset_counts.items()):
        w.writerow([f"Links:{target}", count])
    return buf.getvalue()


def metrics_csv(histograms: list[MetricHistogram]) -> str:
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(["conference", "metric", "count"])
    for h in histograms:
        if h.unknown:
            w.writerow([h.conference, "", "UnknownConference"])
        for metric, count in h.bins.items():
            w.writerow([h.conference, metric, count])
    return buf.getvalue()


def stats_json(stats: GraphStats, histograms: list[MetricHistogram] = ()) -> str:
    doc = stats.to_dict()
    doc["metrics"] = [
        {"conference": h.conference, "unknown": h.unknown, "bins": h.bins} for h in histograms
    ]
    return json.dumps(doc, indent=2, ensure_ascii=False) + "\n"
