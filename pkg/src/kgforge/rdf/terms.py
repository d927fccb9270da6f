"""RDF terms: IRIs, literals and triples. Blank nodes are deliberately absent."""

from __future__ import annotations

import re
from dataclasses import dataclass
from typing import NamedTuple, Union

from ..errors import InvalidTerm
from ..namespaces import RDF_LANGSTRING, XSD_STRING

_SCHEME = re.compile(r"^[A-Za-z][A-Za-z0-9+.\-]*:")
_IRI_FORBIDDEN = re.compile(r'[\x00-\x20<>"{}|^`\\]')
_LANG = re.compile(r"^[A-Za-z]+(-[A-Za-z0-9]+)*$")

_ESCAPES = str.maketrans({"\\": "\\\\", '"': '\\"', "\n": "\\n", "\r": "\\r", "\t": "\\t"})


def escape_ntriples_literal(s: str) -> str:
    """Escape backslash, double quote, LF, CR and TAB; everything else stays UTF-8."""
    return s.translate(_ESCAPES)


@dataclass(frozen=True, slots=True)
class IRI:
    value: str

    def __post_init__(self):
        if not _SCHEME.match(self.value) or _IRI_FORBIDDEN.search(self.value):
            raise InvalidTerm(f"not an absolute IRI: {self.value!r}")

    def n3(self) -> str:
        return f"<{self.value}>"

    def __str__(self) -> str:
        return self.value


@dataclass(frozen=True, slots=True)
class Literal:
    lexical: str
    datatype: str = XSD_STRING
    lang: str | None = None

    def __post_init__(self):
        if self.lang is not None:
            if self.datatype == XSD_STRING:
                object.__setattr__(self, "datatype", RDF_LANGSTRING)
            if self.datatype != RDF_LANGSTRING or not _LANG.match(self.lang):
                raise InvalidTerm(f"bad language-tagged literal: {self.lang!r}/{self.datatype}")
        elif self.datatype == RDF_LANGSTRING:
            raise InvalidTerm("rdf:langString literal without a language tag")
        if not _SCHEME.match(self.datatype) or _IRI_FORBIDDEN.search(self.datatype):
            raise InvalidTerm(f"bad datatype IRI: {self.datatype!r}")

    def n3(self) -> str:
        quoted = '"' + escape_ntriples_literal(self.lexical) + '"'
        if self.lang is not None:
            return f"{quoted}@{self.lang}"
        if self.datatype == XSD_STRING:
            return quoted
        return f"{quoted}^^<{self.datatype}>"

    def __str__(self) -> str:
        return self.lexical


Term = Union[IRI, Literal]


class Triple(NamedTuple):
    subject: IRI
    predicate: IRI
    object: Term

    def n3(self) -> str:
        return f"{self.subject.n3()} {self.predicate.n3()} {self.object.n3()} ."

    def sort_key(self) -> tuple[str, str, str]:
        return (self.subject.n3(), self.predicate.n3(), self.object.n3())


def triple(s: str | IRI, p: str | IRI, o: str | Term) -> Triple:
    """Build a triple, promoting plain strings in subject/predicate/object position to IRIs."""
    s = s if isinstance(s, IRI) else IRI(s)
    p = p if isinstance(p, IRI) else IRI(p)
    o = o if isinstance(o, (IRI, Literal)) else IRI(o)
    return Triple(s, p, o)
