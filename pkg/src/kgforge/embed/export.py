"""TSV export of trained embedding tables."""

from __future__ import annotations

from pathlib import Path

from ..errors import SinkWrite
from .data import KgIndex
from .models import DISPLAY_NAMES, EmbeddingModel


def _rows(labels, table):
    for label, vec in zip(labels, table):
        yield label + "\t" + "\t".join(repr(float(x)) for x in vec) + "\n"


def export_embeddings(model: EmbeddingModel, index: KgIndex, entities_path: str | Path,
                      relations_path: str | Path, seed: int) -> int:
    """Write one TSV per table and return the total number of data rows.

    Each file starts with a ``#``-prefixed header carrying technique,
    dimension and seed. Complex-valued techniques write the real plane
    followed by the imaginary plane.
    """
    header = f"#technique={DISPLAY_NAMES[model.technique]}\tdim={model.dim}\tseed={seed}\n"
    count = 0
    for path, labels, table in ((entities_path, index.entities, model.entities),
                                (relations_path, index.relations, model.relations)):
        try:
            with open(path, "w", encoding="utf-8", newline="\n") as fh:
                fh.write(header)
                for row in _rows(labels, table):
                    fh.write(row)
                    count += 1
        except OSError as exc:
            raise SinkWrite(f"cannot write {path}: {exc}") from exc
    return count
