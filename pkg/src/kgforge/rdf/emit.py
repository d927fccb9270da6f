"""Turn validated entity records into triples."""

from __future__ import annotations

from datetime import date
from typing import TYPE_CHECKING, Any

from ..namespaces import RDF_TYPE, XSD
from ..ontology import DEFAULT_POLICY, REGISTRY, Registry, UriPolicy, UriRegistry, mint_uri
from ..textnorm import strip_markdown
from .terms import IRI, Literal, Triple

if TYPE_CHECKING:
    from ..ingest import EntityRecord


def literal_for(value: Any, datatype: str, markdown: bool = False) -> Literal:
    """Lexical form of a Python value for an XSD range."""
    if isinstance(value, bool):
        lexical = "true" if value else "false"
    elif isinstance(value, date):
        lexical = value.isoformat()
    elif isinstance(value, int) and datatype == XSD + "gYear":
        lexical = f"{value:04d}"
    else:
        lexical = str(value)
    if markdown:
        lexical = strip_markdown(lexical)
    return Literal(lexical, datatype)


def emit_entity(
    record: "EntityRecord",
    policy: UriPolicy = DEFAULT_POLICY,
    registry: Registry = REGISTRY,
    uris: UriRegistry | None = None,
) -> set[Triple]:
    """One rdf:type triple, one triple per scalar value, one per link, one per raw author name.

    When ``uris`` is given every minted IRI is checked against it for collisions.
    """
    mint = uris.mint if uris is not None else (lambda kind, slug: mint_uri(kind, slug, policy))
    subject = IRI(mint(record.kind, record.slug))
    out = {Triple(subject, IRI(RDF_TYPE), IRI(registry.cls(record.kind).uri))}
    for name, value in record.scalars.items():
        prop = registry.prop(name)
        values = value if isinstance(value, list) else [value]
        for v in values:
            out.add(Triple(subject, IRI(prop.uri), literal_for(v, prop.range_uri, prop.markdown)))
    for name, refs in record.links.items():
        prop = IRI(registry.prop(name).uri)
        for ref in refs:
            out.add(Triple(subject, prop, IRI(mint(ref.kind, ref.slug))))
    if record.authors:
        author_name = IRI(registry.prop("authorName").uri)
        for name in record.authors:
            out.add(Triple(subject, author_name, Literal(name)))
    return out
