"""Linking LPWC entities to external scholarly catalogs."""

from .catalog import (
    CatalogCandidate,
    CatalogClient,
    CatalogWork,
    FixtureCatalog,
    SparqlCatalog,
)
from .linking import (
    AuthorMention,
    LinkDecision,
    LinkerConfig,
    LinkReport,
    apply_link_decisions,
    disambiguate_all,
    disambiguate_author,
    link_sameas,
    link_summary,
    mentions_from_graph,
    records_from_graph,
)

__all__ = [
    "AuthorMention",
    "CatalogCandidate",
    "CatalogClient",
    "CatalogWork",
    "FixtureCatalog",
    "LinkDecision",
    "LinkReport",
    "LinkerConfig",
    "SparqlCatalog",
    "apply_link_decisions",
    "disambiguate_all",
    "disambiguate_author",
    "link_sameas",
    "link_summary",
    "mentions_from_graph",
    "records_from_graph",
]
