"""Train the four embedding techniques on the mini graph and on a toy ring.

The mini graph is far too small for meaningful link prediction, so the
second part uses a 20-entity ring whose test triples are seen in training:
every technique should memorize it.

    python3 demos/04_embeddings.py
"""

import numpy as np
from _common import MINI, banner

from kgforge.embed import TECHNIQUES, KnownTriples, Split, TrainConfig, build_split, evaluate, index_graph, train
from kgforge.pipeline import build_graph

banner("mini graph")
index = index_graph(build_graph(MINI).graph)
print(f"{index.n_entities} entities, {index.n_relations} relations, {len(index.triples)} links")
split = build_split(index.triples, (0.8, 0.1, 0.1), seed=42)
known = KnownTriples(index.triples, index.n_entities, index.n_relations)
cfg = TrainConfig(technique="transe", dim=16, max_epochs=60, eval_interval=20, batch_size=64, lr=0.05)
result = train(split, index.n_entities, index.n_relations, cfg, known=known)
for h in result.history:
    print(f"  epoch {h['epoch']:3}  loss {h['loss']:.4f}  valid filtered MR {h['valid_mean_rank_filtered']:.1f}")
print(f"  kept epoch {result.best_epoch}{' (early stop)' if result.early_stopped else ''}")

banner("toy ring, memorization")
ring = np.array([(i, 0, (i + 1) % 20) for i in range(20)] + [(i, 1, (i + 3) % 20) for i in range(20)])
toy = Split(ring, ring[::4], ring[1::2])
toy_known = KnownTriples(ring, 20, 2)
for technique in TECHNIQUES:
    cfg = TrainConfig(technique=technique, dim=32, lr=0.1, batch_size=8, seed=42)
    result = train(toy, 20, 2, cfg, known=toy_known)
    report = evaluate(result.model, toy.test, toy_known)
    print(f"  {technique:9} stopped {result.stopped_epoch:3}  MRR {report.mrr:.3f}  hits@10 {report.hits[10]:.2f}")
