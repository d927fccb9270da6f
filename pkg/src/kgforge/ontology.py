"""Ontology registry, URI minting and ontology/VoID triple emission."""

from __future__ import annotations

import re
import threading
import unicodedata
import urllib.parse
from dataclasses import dataclass, field
from datetime import date
from typing import TYPE_CHECKING, Iterable

from . import schema
from .errors import EmptySlug, RegistryError, UriCollision
from .namespaces import (
    DCTERMS,
    DEFAULT_BASE,
    DEFAULT_ONTOLOGY,
    LINK_TARGETS,
    OWL,
    RDF_TYPE,
    RDFS,
    VOID,
    XSD,
)
from .rdf.terms import IRI, Literal, Triple

if TYPE_CHECKING:
    from .stats import GraphStats

OBJECT = "object"
DATATYPE = "datatype"

LICENSE = "https://creativecommons.org/licenses/by-sa/4.0/"


@dataclass(frozen=True)
class ClassDescriptor:
    local_name: str
    uri: str
    description: str = ""


@dataclass(frozen=True)
class PropertyDescriptor:
    local_name: str
    uri: str
    kind: str
    domain_class: ClassDescriptor
    range: ClassDescriptor | str | None
    markdown: bool = False

    @property
    def range_uri(self) -> str:
        return self.range.uri if isinstance(self.range, ClassDescriptor) else self.range


class Registry:
    """Immutable set of classes and properties, validated on construction."""

    def __init__(self, namespace: str, classes: Iterable[ClassDescriptor], properties: Iterable[PropertyDescriptor]):
        self.namespace = namespace
        self.classes: dict[str, ClassDescriptor] = {}
        self.properties: dict[str, PropertyDescriptor] = {}
        for c in classes:
            if c.local_name in self.classes:
                raise RegistryError(f"duplicate class {c.local_name}")
            if not c.uri.startswith(namespace):
                raise RegistryError(f"class {c.local_name} outside namespace {namespace}")
            self.classes[c.local_name] = c
        for p in properties:
            if p.local_name in self.properties:
                raise RegistryError(f"duplicate property {p.local_name}")
            if p.kind not in (OBJECT, DATATYPE):
                raise RegistryError(f"property {p.local_name} has unknown kind {p.kind!r}")
            if p.domain_class.local_name not in self.classes:
                raise RegistryError(f"property {p.local_name} has unregistered domain")
            if p.range is None:
                raise RegistryError(f"property {p.local_name} has no range")
            if p.kind == OBJECT and not (
                isinstance(p.range, ClassDescriptor) and p.range.local_name in self.classes
            ):
                raise RegistryError(f"object property {p.local_name} needs a registered class range")
            if p.kind == DATATYPE and not (isinstance(p.range, str) and p.range.startswith(XSD)):
                raise RegistryError(f"datatype property {p.local_name} needs a datatype range")
            self.properties[p.local_name] = p
        self._by_uri = {p.uri: p for p in self.properties.values()}
        self._class_by_uri = {c.uri: c for c in self.classes.values()}

    def cls(self, name: str) -> ClassDescriptor:
        return self.classes[name]

    def prop(self, name: str) -> PropertyDescriptor:
        return self.properties[name]

    def property_by_uri(self, uri: str) -> PropertyDescriptor | None:
        return self._by_uri.get(uri)

    def class_by_uri(self, uri: str) -> ClassDescriptor | None:
        return self._class_by_uri.get(uri)


def build_registry(namespace: str = DEFAULT_ONTOLOGY) -> Registry:
    """The LPWC registry: 13 classes and 47 properties from :mod:`kgforge.schema`."""
    classes = {name: ClassDescriptor(name, namespace + name, desc) for name, desc in schema.CLASSES}
    props = []
    for name, kind, domain, rng, markdown in schema.PROPERTIES:
        target = classes[rng] if kind == OBJECT else XSD + rng
        props.append(PropertyDescriptor(name, namespace + name, kind, classes[domain], target, markdown))
    return Registry(namespace, classes.values(), props)


REGISTRY = build_registry()


# -- URI minting -----------------------------------------------------------

_NON_ALNUM = re.compile(r"[^\w]+|_+")
_SEGMENT = re.compile(r"^[a-z0-9\-]+$")


def slugify(text: str) -> str:
    """NFC, lowercase, runs of non-alphanumerics to ``-``, trimmed, percent-encoded.

    >>> slugify("Image Classification")
    'image-classification'
    """
    text = unicodedata.normalize("NFC", text).lower()
    text = _NON_ALNUM.sub("-", text).strip("-")
    return urllib.parse.quote(text, safe="-")


@dataclass(frozen=True)
class UriPolicy:
    base_namespace: str = DEFAULT_BASE
    segments: dict[str, str] = field(default_factory=lambda: dict(schema.SEGMENTS))

    def __post_init__(self):
        if not self.base_namespace.endswith("/"):
            raise ValueError("base namespace must end with '/'")
        for name, seg in self.segments.items():
            if not _SEGMENT.match(seg):
                raise ValueError(f"invalid path segment {seg!r} for {name}")

    def with_overrides(self, base: str | None = None, segments: dict[str, str] | None = None) -> "UriPolicy":
        merged = dict(self.segments)
        merged.update(segments or {})
        return UriPolicy(base or self.base_namespace, merged)


DEFAULT_POLICY = UriPolicy()


def mint_uri(kind: ClassDescriptor | str, slug: str, policy: UriPolicy = DEFAULT_POLICY) -> str:
    """Return ``base + segment + "/" + slugify(slug)`` for an entity of class ``kind``."""
    name = kind.local_name if isinstance(kind, ClassDescriptor) else kind
    cleaned = slugify(slug)
    if not cleaned:
        raise EmptySlug(f"{name}: {slug!r}")
    return f"{policy.base_namespace}{policy.segments[name]}/{cleaned}"


def source_key(slug: str) -> str:
    """Identity key of a slug source: NFC, case-folded, whitespace-collapsed."""
    return " ".join(unicodedata.normalize("NFC", slug).casefold().split())


class UriRegistry:
    """Tracks minted IRIs within one build and rejects collisions.

    Two sources collide when they differ beyond case and whitespace but slugify
    to the same IRI, e.g. ``"C++"`` and ``"C"`` for a method.
    """

    def __init__(self, policy: UriPolicy = DEFAULT_POLICY):
        self.policy = policy
        self._owners: dict[str, str] = {}
        self._lock = threading.Lock()

    def mint(self, kind: ClassDescriptor | str, slug: str) -> str:
        iri = mint_uri(kind, slug, self.policy)
        key = source_key(slug)
        with self._lock:
            owner = self._owners.setdefault(iri, key)
        if owner != key:
            raise UriCollision(f"{slug!r} and {owner!r} both mint {iri}")
        return iri

    def __len__(self) -> int:
        return len(self._owners)


# -- emission --------------------------------------------------------------


def emit_ontology_triples(registry: Registry = REGISTRY) -> set[Triple]:
    """Class declarations plus type, domain and range for each property."""
    out: set[Triple] = set()
    owl_class = IRI(OWL + "Class")
    kinds = {OBJECT: IRI(OWL + "ObjectProperty"), DATATYPE: IRI(OWL + "DatatypeProperty")}
    rdf_type = IRI(RDF_TYPE)
    for c in registry.classes.values():
        out.add(Triple(IRI(c.uri), rdf_type, owl_class))
    for p in registry.properties.values():
        s = IRI(p.uri)
        out.add(Triple(s, rdf_type, kinds[p.kind]))
        out.add(Triple(s, IRI(RDFS + "domain"), IRI(p.domain_class.uri)))
        out.add(Triple(s, IRI(RDFS + "range"), IRI(p.range_uri)))
    return out


def emit_ontology_annotations(registry: Registry = REGISTRY) -> set[Triple]:
    """rdfs:comment triples for class descriptions (written alongside the declarations)."""
    comment = IRI(RDFS + "comment")
    return {
        Triple(IRI(c.uri), comment, Literal(c.description, lang="en"))
        for c in registry.classes.values()
        if c.description
    }


def _int(n: int) -> Literal:
    return Literal(str(int(n)), XSD + "integer")


def emit_void(
    stats: "GraphStats",
    dump_date: date | None = None,
    policy: UriPolicy = DEFAULT_POLICY,
    registry: Registry = REGISTRY,
) -> set[Triple]:
    """VoID description of the dataset: size, license, class partitions and linksets.

    Class partitions and linksets are only declared for non-zero counts.
    """
    root = policy.base_namespace + "void/"
    dataset = IRI(root + "lpwc")
    rdf_type = IRI(RDF_TYPE)
    out = {
        Triple(dataset, rdf_type, IRI(VOID + "Dataset")),
        Triple(dataset, IRI(VOID + "triples"), _int(stats.triple_count)),
        Triple(dataset, IRI(DCTERMS + "license"), IRI(LICENSE)),
        Triple(dataset, IRI(VOID + "uriSpace"), Literal(policy.base_namespace)),
    }
    if dump_date is not None:
        out.add(Triple(dataset, IRI(DCTERMS + "modified"), Literal(dump_date.isoformat(), XSD + "date")))
    for name, count in sorted(stats.class_counts.items()):
        if count <= 0:
            continue
        part = IRI(f"{root}lpwc/class/{name}")
        out.add(Triple(dataset, IRI(VOID + "classPartition"), part))
        out.add(Triple(part, IRI(VOID + "class"), IRI(registry.cls(name).uri)))
        out.add(Triple(part, IRI(VOID + "entities"), _int(count)))
    for target, count in sorted(stats.linkset_counts.items()):
        if count <= 0:
            continue
        linkset = IRI(f"{root}lpwc/linkset/{target}")
        other = IRI(f"{root}{target}")
        out.add(Triple(linkset, rdf_type, IRI(VOID + "Linkset")))
        out.add(Triple(linkset, IRI(VOID + "subjectsTarget"), dataset))
        out.add(Triple(linkset, IRI(VOID + "objectsTarget"), other))
        out.add(Triple(linkset, IRI(VOID + "triples"), _int(count)))
        out.add(Triple(dataset, IRI(VOID + "subset"), linkset))
        out.add(Triple(other, rdf_type, IRI(VOID + "Dataset")))
        out.add(Triple(other, IRI(VOID + "uriSpace"), Literal(LINK_TARGETS[target])))
    return out
