from __future__ import annotations

import threading
from collections import defaultdict
from typing import Iterable, Iterator

from ..errors import KgforgeError
from ..namespaces import RDF_TYPE
from .terms import IRI, Triple


class GraphFrozen(KgforgeError):
    """Mutation attempted on a frozen graph."""


class GraphBuffer:
    """A deduplicating triple set with a per-class subject index.

    Inserts are guarded by a lock so several producers can share one
    buffer. After :meth:`freeze` the buffer is read-only.
    """

    def __init__(self, triples: Iterable[Triple] = ()):
        self._triples: set[Triple] = set()
        self._by_class: dict[IRI, set[IRI]] = defaultdict(set)
        self._lock = threading.Lock()
        self._frozen = False
        self.update(triples)

    def add(self, t: Triple) -> bool:
        """Insert one triple; returns False if it was already present."""
        with self._lock:
            if self._frozen:
                raise GraphFrozen("graph is frozen")
            if t in self._triples:
                return False
            self._triples.add(t)
            if t.predicate.value == RDF_TYPE and isinstance(t.object, IRI):
                self._by_class[t.object].add(t.subject)
            return True

    def update(self, triples: Iterable[Triple]) -> int:
        return sum(self.add(t) for t in triples)

    def discard(self, t: Triple) -> bool:
        with self._lock:
            if self._frozen:
                raise GraphFrozen("graph is frozen")
            if t not in self._triples:
                return False
            self._triples.remove(t)
            if t.predicate.value == RDF_TYPE and isinstance(t.object, IRI):
                self._by_class[t.object].discard(t.subject)
            return True

    def freeze(self) -> "GraphBuffer":
        self._frozen = True
        return self

    @property
    def frozen(self) -> bool:
        return self._frozen

    def subjects_of_class(self, cls: IRI | str) -> set[IRI]:
        cls = cls if isinstance(cls, IRI) else IRI(cls)
        return set(self._by_class.get(cls, ()))

    def triples(self, s=None, p=None, o=None) -> Iterator[Triple]:
        """Iterate triples matching a pattern; ``None`` is a wildcard. Strings are read as IRIs."""
        s = IRI(s) if isinstance(s, str) else s
        p = IRI(p) if isinstance(p, str) else p
        o = IRI(o) if isinstance(o, str) else o
        for t in self._triples:
            if s is not None and t.subject != s:
                continue
            if p is not None and t.predicate != p:
                continue
            if o is not None and t.object != o:
                continue
            yield t

    def sorted(self) -> list[Triple]:
        return sorted(self._triples, key=Triple.sort_key)

    def __contains__(self, t: Triple) -> bool:
        return t in self._triples

    def __len__(self) -> int:
        return len(self._triples)

    def __iter__(self) -> Iterator[Triple]:
        return iter(self._triples)
