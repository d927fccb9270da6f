"""Turn Papers-With-Code style JSON dumps into a linked RDF knowledge graph.

Subpackages: :mod:`kgforge.rdf` (triples and serialization),
:mod:`kgforge.linker` (catalog linking) and :mod:`kgforge.embed`
(graph embeddings). The ``kgforge`` console script drives the pipeline.
"""

__version__ = "0.1.0"
