"""Exception hierarchy shared across kgforge modules."""

from __future__ import annotations


class KgforgeError(Exception):
    """Base class for all kgforge errors."""


class RegistryError(KgforgeError):
    """An ontology registry failed validation at construction time."""


class EmptySlug(KgforgeError):
    """A slug normalized to the empty string."""


class UriCollision(KgforgeError):
    """Two distinct source keys minted the same IRI."""


class InvalidTerm(KgforgeError):
    """An IRI or literal violates the RDF term invariants."""


class ParseError(KgforgeError):
    def __init__(self, message: str, line: int | None = None):
        if line is not None:
            message = f"line {line}: {message}"
        super().__init__(message)
        self.line = line


class SinkWrite(KgforgeError):
    """Writing serialized output failed."""


class MalformedJson(KgforgeError):
    def __init__(self, message: str, offset: int):
        super().__init__(f"{message} (byte offset {offset})")
        self.offset = offset


class WrongShape(KgforgeError):
    """The top-level JSON value of a dump file is not an array."""


class UnknownDumpFile(KgforgeError):
    """A file name does not correspond to any known dump kind."""


class CycleDetected(KgforgeError):
    """An evaluation table id repeats along one root-to-node path."""


class EmptyTitle(KgforgeError):
    """A title is empty and has no variants."""


class CatalogUnavailable(KgforgeError):
    """The external catalog could not be reached after retries."""


class UnknownPaper(KgforgeError):
    """A link decision references a paper that is not in the graph."""


class TooSmall(KgforgeError):
    """Too few triples to build a train/valid/test split."""


class Diverged(KgforgeError):
    def __init__(self, epoch: int):
        super().__init__(f"parameters became non-finite at epoch {epoch}")
        self.epoch = epoch
