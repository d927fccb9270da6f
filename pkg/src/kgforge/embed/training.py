"""Minibatch SGD training with mean-rank early stopping."""

from __future__ import annotations

import logging
from concurrent.futures import ThreadPoolExecutor
from dataclasses import asdict, dataclass, field
from typing import Callable

import numpy as np

from ..errors import Diverged
from .data import KnownTriples, Split, corrupt_batch
from .evaluation import EvalReport, evaluate
from .models import MARGIN_BASED, EmbeddingModel, canonical_technique

log = logging.getLogger(__name__)


@dataclass(frozen=True)
class TrainConfig:
    technique: str = "transe"
    max_epochs: int = 900
    eval_interval: int = 300
    dim: int = 100
    margin: float = 1.0
    lr: float = 0.01
    negatives: int = 8
    batch_size: int = 1024
    seed: int = 42
    ratios: tuple[float, float, float] = (0.9, 0.05, 0.05)
    patience: int = 1
    deterministic: bool = True
    workers: int = 1

    def __post_init__(self):
        object.__setattr__(self, "technique", canonical_technique(self.technique))
        object.__setattr__(self, "ratios", tuple(float(r) for r in self.ratios))
        if self.max_epochs < 1 or self.eval_interval < 1:
            raise ValueError("max_epochs and eval_interval must be positive")
        if self.max_epochs % self.eval_interval:
            raise ValueError(f"eval_interval {self.eval_interval} does not divide max_epochs {self.max_epochs}")
        if len(self.ratios) != 3 or any(r < 0 for r in self.ratios) or abs(sum(self.ratios) - 1.0) > 1e-9:
            raise ValueError(f"split ratios must be three non-negative numbers summing to 1, got {self.ratios}")
        for name in ("dim", "negatives", "batch_size", "patience", "workers"):
            if getattr(self, name) < 1:
                raise ValueError(f"{name} must be at least 1")
        if self.lr <= 0:
            raise ValueError("lr must be positive")

    def to_dict(self) -> dict:
        d = asdict(self)
        d["ratios"] = list(self.ratios)
        return d


# -- loss ----------------------------------------------------------------------


def _softplus(x: np.ndarray) -> np.ndarray:
    return np.logaddexp(0.0, x)


def _sigmoid(x: np.ndarray) -> np.ndarray:
    return 0.5 * (1.0 + np.tanh(0.5 * x))


@dataclass
class Gradients:
    """Sparse gradient: rows of the entity and relation tables with repeated indices allowed."""

    ent_idx: np.ndarray
    ent_rows: np.ndarray
    rel_idx: np.ndarray
    rel_rows: np.ndarray

    def dense(self, model: EmbeddingModel) -> tuple[np.ndarray, np.ndarray]:
        ge = np.zeros_like(model.entities)
        gr = np.zeros_like(model.relations)
        np.add.at(ge, self.ent_idx, self.ent_rows)
        np.add.at(gr, self.rel_idx, self.rel_rows)
        return ge, gr


def batch_loss(model: EmbeddingModel, pos: np.ndarray, neg: np.ndarray, margin: float) -> float:
    """Loss of positives ``(B, 3)`` against their negatives ``(B, k, 3)``.

    Margin techniques average ``max(0, margin - s(pos) + s(neg))`` over all
    pairs; the others average ``softplus(-s(pos)) + mean_k softplus(s(neg))``
    over positives.
    """
    sp = model.score(pos[:, 0], pos[:, 1], pos[:, 2])
    sn = model.score(neg[..., 0], neg[..., 1], neg[..., 2])
    if model.technique in MARGIN_BASED:
        return float(np.maximum(0.0, margin - sp[:, None] + sn).mean())
    return float((_softplus(-sp) + _softplus(sn).mean(axis=1)).mean())


def loss_and_grads(model: EmbeddingModel, pos: np.ndarray, neg: np.ndarray,
                   margin: float) -> tuple[float, Gradients]:
    B, k = neg.shape[:2]
    sp, dph, dpr, dpt = model.score_grad(pos[:, 0], pos[:, 1], pos[:, 2])
    flat = neg.reshape(-1, 3)
    sn, dnh, dnr, dnt = model.score_grad(flat[:, 0], flat[:, 1], flat[:, 2])
    sn = sn.reshape(B, k)
    if model.technique in MARGIN_BASED:
        hinge = margin - sp[:, None] + sn
        active = (hinge > 0).astype(float)
        loss = float(np.maximum(0.0, hinge).mean())
        g_neg = active / (B * k)
        g_pos = -g_neg.sum(axis=1)
    else:
        loss = float((_softplus(-sp) + _softplus(sn).mean(axis=1)).mean())
        g_pos = -_sigmoid(-sp) / B
        g_neg = _sigmoid(sn) / (B * k)
    g_neg = g_neg.reshape(-1, 1)
    g_pos = g_pos[:, None]
    grads = Gradients(
        ent_idx=np.concatenate([pos[:, 0], pos[:, 2], flat[:, 0], flat[:, 2]]),
        ent_rows=np.concatenate([g_pos * dph, g_pos * dpt, g_neg * dnh, g_neg * dnt]),
        rel_idx=np.concatenate([pos[:, 1], flat[:, 1]]),
        rel_rows=np.concatenate([g_pos * dpr, g_neg * dnr]),
    )
    return loss, grads


def sgd_step(model: EmbeddingModel, grads: Gradients, lr: float) -> None:
    np.add.at(model.entities, grads.ent_idx, -lr * grads.ent_rows)
    np.add.at(model.relations, grads.rel_idx, -lr * grads.rel_rows)
    model.project_relations(np.unique(grads.rel_idx))


# -- training loop ------------------------------------------------------------


@dataclass
class TrainResult:
    model: EmbeddingModel
    history: list[dict] = field(default_factory=list)
    losses: list[float] = field(default_factory=list)
    best_epoch: int = 0
    stopped_epoch: int = 0
    early_stopped: bool = False
    deterministic: bool = True


Evaluator = Callable[[EmbeddingModel], float]


def _run_epoch(model, train, cfg, rng, known) -> float:
    order = rng.permutation(len(train))
    batches = [train[order[i:i + cfg.batch_size]] for i in range(0, len(train), cfg.batch_size)]
    negs = [corrupt_batch(b, cfg.negatives, model.n_entities, rng, known) for b in batches]

    def step(pair) -> tuple[float, int]:
        pos, neg = pair
        loss, grads = loss_and_grads(model, pos, neg, cfg.margin)
        sgd_step(model, grads, cfg.lr)
        return loss, len(pos)

    if cfg.deterministic or cfg.workers == 1:
        results = [step(p) for p in zip(batches, negs)]
    else:
        # Unsynchronized concurrent updates; ordering of writes is not reproducible.
        with ThreadPoolExecutor(max_workers=cfg.workers) as pool:
            results = list(pool.map(step, zip(batches, negs)))
    total = sum(n for _, n in results)
    return sum(loss * n for loss, n in results) / max(total, 1)


def train(split: Split, n_entities: int, n_relations: int, cfg: TrainConfig, *,
          known: KnownTriples | None = None, evaluator: Evaluator | None = None) -> TrainResult:
    """Train a model on ``split.train``.

    Every ``cfg.eval_interval`` epochs the evaluator (by default the filtered
    mean rank on ``split.valid``) is called. A checkpoint whose mean rank is
    worse than the last retained one counts as a strike; after
    ``cfg.patience`` strikes training stops and the retained model is
    returned. Raises :class:`Diverged` as soon as a parameter is non-finite.
    """
    rng = np.random.default_rng(cfg.seed)
    model = EmbeddingModel.init(cfg.technique, n_entities, n_relations, cfg.dim, rng)
    if known is None:
        known = KnownTriples(np.concatenate([split.train, split.valid, split.test]), n_entities, n_relations)
    if evaluator is None:
        if len(split.valid):
            def evaluator(m: EmbeddingModel) -> float:
                return evaluate(m, split.valid, known, workers=cfg.workers).mean_rank_filtered
    result = TrainResult(model, deterministic=cfg.deterministic or cfg.workers == 1)
    kept: EmbeddingModel | None = None
    kept_rank = float("inf")
    kept_epoch = 0
    strikes = 0
    train_triples = np.asarray(split.train, dtype=np.int64).reshape(-1, 3)
    with np.errstate(over="ignore", invalid="ignore"):
        for epoch in range(1, cfg.max_epochs + 1):
            loss = _run_epoch(model, train_triples, cfg, rng, known)
            model.normalize_entities()
            if not (np.isfinite(loss) and model.is_finite()):
                raise Diverged(epoch)
            result.losses.append(loss)
            result.stopped_epoch = epoch
            if epoch % cfg.eval_interval or evaluator is None:
                continue
            rank = float(evaluator(model))
            result.history.append({"epoch": epoch, "loss": loss, "valid_mean_rank_filtered": rank})
            log.info("checkpoint epoch=%d loss=%.6f valid_mr=%.3f", epoch, loss, rank)
            if kept is not None and rank > kept_rank:
                strikes += 1
                if strikes >= cfg.patience:
                    result.model = kept
                    result.best_epoch = kept_epoch
                    result.early_stopped = True
                    return result
            else:
                kept, kept_rank, kept_epoch, strikes = model.copy(), rank, epoch, 0
    result.model = model
    result.best_epoch = kept_epoch if kept is not None else result.stopped_epoch
    if kept is not None and strikes:
        # Ran out of epochs while still on a strike: keep the better checkpoint.
        result.model = kept
    return result


def train_report(result: TrainResult, test_report: EvalReport, cfg: TrainConfig) -> dict:
    doc = {
        "config": cfg.to_dict(),
        "deterministic": result.deterministic,
        "best_epoch": result.best_epoch,
        "stopped_epoch": result.stopped_epoch,
        "early_stopped": result.early_stopped,
        "test": test_report.to_dict(),
        "history": result.history,
    }
    return doc
