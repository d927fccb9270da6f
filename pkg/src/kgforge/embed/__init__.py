"""Knowledge-graph embeddings over the entity-to-entity links of a built graph."""

from .data import KgIndex, KnownTriples, Split, build_split, corrupt_batch, index_graph, index_triples, negative_sample
from .evaluation import EvalReport, evaluate, rank_triples
from .export import export_embeddings
from .models import TECHNIQUES, EmbeddingModel, canonical_technique
from .training import TrainConfig, TrainResult, batch_loss, loss_and_grads, train, train_report

__all__ = [
    "TECHNIQUES", "EmbeddingModel", "EvalReport", "KgIndex", "KnownTriples", "Split", "TrainConfig",
    "TrainResult", "batch_loss", "build_split", "canonical_technique", "corrupt_batch", "evaluate",
    "export_embeddings", "index_graph", "index_triples", "loss_and_grads", "negative_sample",
    "rank_triples", "train", "train_report",
]
