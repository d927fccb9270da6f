"""Triple model, graph buffer and N-Triples/Turtle serialization."""

from .graph import GraphBuffer, GraphFrozen
from .serialize import (
    FORMATS,
    open_sink,
    open_source,
    parse,
    parse_ntriples,
    parse_turtle,
    read_graph,
    serialize,
    serialize_to_string,
    write_graph,
)
from .terms import IRI, Literal, Term, Triple, escape_ntriples_literal, triple

__all__ = [
    "FORMATS",
    "GraphBuffer",
    "GraphFrozen",
    "IRI",
    "Literal",
    "Term",
    "Triple",
    "escape_ntriples_literal",
    "open_sink",
    "open_source",
    "parse",
    "parse_ntriples",
    "parse_turtle",
    "read_graph",
    "serialize",
    "serialize_to_string",
    "triple",
    "write_graph",
]
