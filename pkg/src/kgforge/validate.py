"""Ontology conformance checks over a built graph."""

from __future__ import annotations

from collections import defaultdict

from .namespaces import OWL_SAMEAS, RDF_TYPE, XSD_STRING
from .ontology import DATATYPE, DEFAULT_POLICY, REGISTRY, Registry, UriPolicy
from .rdf import IRI, GraphBuffer, Literal


def check_graph(graph: GraphBuffer, registry: Registry = REGISTRY, policy: UriPolicy = DEFAULT_POLICY,
                limit: int | None = 1000) -> list[str]:
    """Return violations, at most ``limit`` of them (``None`` for all).

    Checked: every predicate is ``rdf:type``, ``owl:sameAs`` or a registered
    property; every local subject has exactly one registered class; property
    domains match that class; datatype properties carry literals of their
    range; object properties pointing into the local namespace hit an entity
    of the range class. External objects are accepted unchecked.
    """
    rdf_type = IRI(RDF_TYPE)
    same_as = IRI(OWL_SAMEAS)
    base = policy.base_namespace
    types: dict[IRI, set[str]] = defaultdict(set)
    for t in graph.triples(p=rdf_type):
        cls = registry.class_by_uri(t.object.value) if isinstance(t.object, IRI) else None
        if cls is None:
            types[t.subject].add("?" + str(t.object.n3()))
        else:
            types[t.subject].add(cls.local_name)

    problems: list[str] = []

    def bad(message: str) -> bool:
        problems.append(message)
        return limit is not None and len(problems) >= limit

    for subject, classes in sorted(types.items(), key=lambda kv: kv[0].value):
        unknown = sorted(c for c in classes if c.startswith("?"))
        if unknown and bad(f"{subject.n3()} typed with unregistered class {unknown[0][1:]}"):
            return problems
        if len(classes) > 1 and bad(f"{subject.n3()} has {len(classes)} types: {sorted(classes)}"):
            return problems

    def class_of(iri: IRI) -> str | None:
        found = types.get(iri)
        return next(iter(found)) if found and len(found) == 1 else None

    for t in graph.sorted():
        if t.predicate in (rdf_type, same_as):
            if t.predicate == same_as and not isinstance(t.object, IRI):
                if bad(f"owl:sameAs with literal object on {t.subject.n3()}"):
                    return problems
            continue
        prop = registry.property_by_uri(t.predicate.value)
        if prop is None:
            if bad(f"unregistered property {t.predicate.n3()}"):
                return problems
            continue
        subject_cls = class_of(t.subject)
        if t.subject.value.startswith(base) and subject_cls is None:
            if bad(f"{t.subject.n3()} uses {prop.local_name} but has no single type"):
                return problems
            continue
        if subject_cls is not None and subject_cls != prop.domain_class.local_name:
            if bad(f"{prop.local_name} on {subject_cls} {t.subject.n3()}; domain is {prop.domain_class.local_name}"):
                return problems
        if prop.kind == DATATYPE:
            if not isinstance(t.object, Literal):
                if bad(f"{prop.local_name} on {t.subject.n3()} has an IRI object"):
                    return problems
            elif t.object.datatype != prop.range_uri and not (t.object.lang and prop.range_uri == XSD_STRING):
                if bad(f"{prop.local_name} on {t.subject.n3()} has datatype {t.object.datatype}"):
                    return problems
            continue
        if not isinstance(t.object, IRI):
            if bad(f"{prop.local_name} on {t.subject.n3()} has a literal object"):
                return problems
            continue
        if t.object.value.startswith(base):
            target = class_of(t.object)
            if target != prop.range.local_name:
                if bad(f"{prop.local_name} on {t.subject.n3()} points to {t.object.n3()} of type {target}"):
                    return problems
    return problems
