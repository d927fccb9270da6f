"""Link-prediction ranking metrics in the raw and filtered settings."""

from __future__ import annotations

from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field

import numpy as np

from .data import KnownTriples
from .models import EmbeddingModel

HITS_AT = (1, 3, 10)


@dataclass
class EvalReport:
    mean_rank_raw: float
    mean_rank_filtered: float
    mrr_raw: float
    mrr_filtered: float
    hits_raw: dict[int, float]
    hits_filtered: dict[int, float]
    n_rankings: int
    history: list[dict] = field(default_factory=list)

    @property
    def mrr(self) -> float:
        return self.mrr_filtered

    @property
    def hits(self) -> dict[int, float]:
        return self.hits_filtered

    def to_dict(self) -> dict:
        return {
            "mean_rank_raw": self.mean_rank_raw,
            "mean_rank_filtered": self.mean_rank_filtered,
            "mrr_raw": self.mrr_raw,
            "mrr_filtered": self.mrr_filtered,
            "hits_raw": {str(k): v for k, v in self.hits_raw.items()},
            "hits_filtered": {str(k): v for k, v in self.hits_filtered.items()},
            "n_rankings": self.n_rankings,
            "history": self.history,
        }


def _pessimistic_rank(scores: np.ndarray, target: int, others: np.ndarray) -> tuple[int, int]:
    """Raw and filtered rank of ``target``; equal scores count against it."""
    s = scores[target]
    raw = int(np.count_nonzero(scores >= s))
    others = others[others != target]
    filtered = raw - int(np.count_nonzero(scores[others] >= s))
    return raw, filtered


_EMPTY = np.zeros(0, dtype=np.int64)


def rank_triples(model: EmbeddingModel, triples: np.ndarray, known: KnownTriples) -> np.ndarray:
    """Array ``(2n, 2)`` of (raw, filtered) ranks: tail prediction then head prediction per triple."""
    out = np.empty((2 * len(triples), 2), dtype=np.int64)
    for i, (h, r, t) in enumerate(np.asarray(triples).tolist()):
        out[2 * i] = _pessimistic_rank(model.score_tails(h, r), t, known.tails.get((h, r), _EMPTY))
        out[2 * i + 1] = _pessimistic_rank(model.score_heads(r, t), h, known.heads.get((r, t), _EMPTY))
    return out


def summarize(ranks: np.ndarray) -> EvalReport:
    if len(ranks) == 0:
        nan = float("nan")
        return EvalReport(nan, nan, nan, nan, {k: nan for k in HITS_AT}, {k: nan for k in HITS_AT}, 0)
    raw, filt = ranks[:, 0].astype(float), ranks[:, 1].astype(float)
    return EvalReport(
        mean_rank_raw=float(raw.mean()),
        mean_rank_filtered=float(filt.mean()),
        mrr_raw=float((1.0 / raw).mean()),
        mrr_filtered=float((1.0 / filt).mean()),
        hits_raw={k: float((raw <= k).mean()) for k in HITS_AT},
        hits_filtered={k: float((filt <= k).mean()) for k in HITS_AT},
        n_rankings=len(ranks),
    )


def evaluate(model: EmbeddingModel, triples: np.ndarray, known: KnownTriples, *, workers: int = 1) -> EvalReport:
    """Rank every evaluation triple in both directions against all entities.

    ``known`` holds every true triple; in the filtered setting the other
    known answers are dropped from the candidate list.
    """
    triples = np.asarray(triples, dtype=np.int64).reshape(-1, 3)
    if workers <= 1 or len(triples) < 2 * workers:
        return summarize(rank_triples(model, triples, known))
    chunks = np.array_split(triples, workers)
    with ThreadPoolExecutor(max_workers=workers) as pool:
        parts = list(pool.map(lambda c: rank_triples(model, c, known), chunks))
    return summarize(np.concatenate(parts))
