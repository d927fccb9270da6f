"""Index dictionaries, train/valid/test splits and negative sampling."""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from ..errors import TooSmall
from ..ontology import REGISTRY, Registry
from ..rdf import IRI, GraphBuffer

MIN_TRIPLES = 10
RESAMPLE_ATTEMPTS = 100


@dataclass
class KgIndex:
    """Entity and relation dictionaries plus the integer triple array ``(n, 3)``."""

    entities: list[str]
    relations: list[str]
    triples: np.ndarray

    @property
    def n_entities(self) -> int:
        return len(self.entities)

    @property
    def n_relations(self) -> int:
        return len(self.relations)


def index_triples(triples) -> KgIndex:
    """Index ``(head, relation, tail)`` string triples with sorted dictionaries."""
    triples = sorted(set(triples))
    entities = sorted({h for h, _, _ in triples} | {t for _, _, t in triples})
    relations = sorted({r for _, r, _ in triples})
    e_id = {e: i for i, e in enumerate(entities)}
    r_id = {r: i for i, r in enumerate(relations)}
    arr = np.array([(e_id[h], r_id[r], e_id[t]) for h, r, t in triples], dtype=np.int64).reshape(-1, 3)
    return KgIndex(entities, relations, arr)


def index_graph(graph: GraphBuffer, registry: Registry = REGISTRY) -> KgIndex:
    """Entity-to-entity links of ``graph``: object-property triples whose object is an IRI."""
    object_props = {p.uri for p in registry.properties.values() if p.kind == "object"}
    edges = [
        (t.subject.value, t.predicate.value, t.object.value)
        for t in graph
        if t.predicate.value in object_props and isinstance(t.object, IRI)
    ]
    return index_triples(edges)


class KnownTriples:
    """Membership and neighbourhood lookups over a fixed set of true triples."""

    def __init__(self, triples: np.ndarray, n_entities: int, n_relations: int):
        self.n_entities = n_entities
        self.n_relations = n_relations
        triples = np.asarray(triples, dtype=np.int64).reshape(-1, 3)
        self.keys = np.unique(self._key(triples[:, 0], triples[:, 1], triples[:, 2]))
        tails: dict[tuple[int, int], set[int]] = {}
        heads: dict[tuple[int, int], set[int]] = {}
        for h, r, t in triples.tolist():
            tails.setdefault((h, r), set()).add(t)
            heads.setdefault((r, t), set()).add(h)
        self.tails = {k: np.array(sorted(v), dtype=np.int64) for k, v in tails.items()}
        self.heads = {k: np.array(sorted(v), dtype=np.int64) for k, v in heads.items()}

    def _key(self, h, r, t):
        return (np.asarray(h, dtype=np.int64) * self.n_relations + r) * self.n_entities + t

    def contains(self, h, r, t) -> np.ndarray:
        key = self._key(h, r, t)
        if len(self.keys) == 0:
            return np.zeros(np.shape(key), dtype=bool)
        pos = np.minimum(np.searchsorted(self.keys, key), len(self.keys) - 1)
        return self.keys[pos] == key


@dataclass
class Split:
    train: np.ndarray
    valid: np.ndarray
    test: np.ndarray


def build_split(triples: np.ndarray, ratios: tuple[float, float, float], seed: int) -> Split:
    """Seeded shuffle split; valid/test triples mentioning an entity or relation
    absent from train are moved back into train."""
    triples = np.asarray(triples, dtype=np.int64).reshape(-1, 3)
    n = len(triples)
    if n < MIN_TRIPLES:
        raise TooSmall(f"need at least {MIN_TRIPLES} triples to split, got {n}")
    order = np.random.default_rng(seed).permutation(n)
    n_train = int(round(ratios[0] * n))
    n_valid = int(round(ratios[1] * n))
    train_idx = list(order[:n_train])
    held = [order[n_train:n_train + n_valid], order[n_train + n_valid:]]

    seen_e = set(triples[train_idx, 0].tolist()) | set(triples[train_idx, 2].tolist())
    seen_r = set(triples[train_idx, 1].tolist())
    # Reassignment can make later triples admissible, so iterate to a fixed point.
    changed = True
    pending = [list(h) for h in held]
    while changed:
        changed = False
        for part in (0, 1):
            rest = []
            for i in pending[part]:
                h, r, t = triples[i].tolist()
                if h in seen_e and t in seen_e and r in seen_r:
                    rest.append(i)
                else:
                    train_idx.append(i)
                    seen_e.update((h, t))
                    seen_r.add(r)
                    changed = True
            pending[part] = rest
    kept = pending
    return Split(triples[np.array(train_idx, dtype=np.int64)].reshape(-1, 3),
                 triples[np.array(kept[0], dtype=np.int64)].reshape(-1, 3),
                 triples[np.array(kept[1], dtype=np.int64)].reshape(-1, 3))


def negative_sample(triple, n: int, n_entities: int, rng: np.random.Generator,
                    known: KnownTriples | None = None) -> np.ndarray:
    """``n`` corruptions of one triple; see :func:`corrupt_batch`."""
    if n < 1:
        raise ValueError("n must be at least 1")
    return corrupt_batch(np.asarray(triple, dtype=np.int64).reshape(1, 3), n, n_entities, rng, known)[0]


def corrupt_batch(batch: np.ndarray, n: int, n_entities: int, rng: np.random.Generator,
                  known: KnownTriples | None = None) -> np.ndarray:
    """Negatives of shape ``(B, n, 3)``.

    A fair coin picks head or tail; the replacement entity is drawn uniformly
    from the entities other than the one being replaced. Negatives that are
    known positives are redrawn up to ``RESAMPLE_ATTEMPTS`` times and then kept
    as they are (unfiltered fallback).
    """
    batch = np.asarray(batch, dtype=np.int64)
    neg = np.repeat(batch[:, None, :], n, axis=1)
    if n_entities < 2:
        return neg
    B = len(batch)
    side = np.where(rng.random((B, n)) < 0.5, 0, 2)
    original = np.take_along_axis(neg, side[..., None], axis=2)[..., 0]

    def draw(orig):
        # Uniform over the other n_entities - 1 entities.
        pick = rng.integers(0, n_entities - 1, size=orig.shape)
        return pick + (pick >= orig)

    repl = draw(original)
    np.put_along_axis(neg, side[..., None], repl[..., None], axis=2)
    if known is None:
        return neg
    for _ in range(RESAMPLE_ATTEMPTS):
        bad = known.contains(neg[..., 0], neg[..., 1], neg[..., 2])
        if not bad.any():
            break
        fresh = draw(original[bad])
        rows, cols = np.nonzero(bad)
        neg[rows, cols, side[bad]] = fresh
    return neg
