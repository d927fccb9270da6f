"""Scoring functions of the four embedding techniques and their gradients.

Complex-valued techniques store each table as ``[real plane | imaginary
plane]`` along the last axis, so a ``d``-dimensional ComplEx or RotatE
table has ``2 * d`` columns. Higher scores mean more plausible triples for
every technique.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

TECHNIQUES = ("transe", "distmult", "complex", "rotate")
COMPLEX_VALUED = frozenset({"complex", "rotate"})
MARGIN_BASED = frozenset({"transe", "rotate"})

DISPLAY_NAMES = {"transe": "TransE", "distmult": "DistMult", "complex": "ComplEx", "rotate": "RotatE"}


def canonical_technique(name: str) -> str:
    key = name.lower()
    if key not in TECHNIQUES:
        raise ValueError(f"unknown technique {name!r}; expected one of {', '.join(TECHNIQUES)}")
    return key


def _split(x: np.ndarray) -> tuple[np.ndarray, np.ndarray]:
    d = x.shape[-1] // 2
    return x[..., :d], x[..., d:]


# -- per-technique score and gradient on row vectors (..., width) ------------


def transe_score(h, r, t):
    return -np.linalg.norm(h + r - t, axis=-1)


def transe_grad(h, r, t):
    x = h + r - t
    norm = np.linalg.norm(x, axis=-1, keepdims=True)
    g = -np.divide(x, norm, out=np.zeros_like(x), where=norm > 0)
    return -norm[..., 0], g, g, -g


def distmult_score(h, r, t):
    # h * t first: IEEE multiplication commutes, so swapping h and t is bit-exact.
    return np.sum((h * t) * r, axis=-1)


def distmult_grad(h, r, t):
    return distmult_score(h, r, t), r * t, h * t, h * r


def complex_score(h, r, t):
    hr, hi = _split(h)
    rr, ri = _split(r)
    tr, ti = _split(t)
    return np.sum(hr * rr * tr + hi * rr * ti + hr * ri * ti - hi * ri * tr, axis=-1)


def complex_grad(h, r, t):
    hr, hi = _split(h)
    rr, ri = _split(r)
    tr, ti = _split(t)
    dh = np.concatenate([rr * tr + ri * ti, rr * ti - ri * tr], axis=-1)
    dr = np.concatenate([hr * tr + hi * ti, hr * ti - hi * tr], axis=-1)
    dt = np.concatenate([hr * rr - hi * ri, hi * rr + hr * ri], axis=-1)
    return complex_score(h, r, t), dh, dr, dt


def _rotate_residual(h, r, t):
    hr, hi = _split(h)
    rr, ri = _split(r)
    tr, ti = _split(t)
    return hr * rr - hi * ri - tr, hr * ri + hi * rr - ti


def rotate_score(h, r, t):
    xr, xi = _rotate_residual(h, r, t)
    return -np.sqrt(np.sum(xr * xr + xi * xi, axis=-1))


def rotate_grad(h, r, t):
    hr, hi = _split(h)
    rr, ri = _split(r)
    xr, xi = _rotate_residual(h, r, t)
    norm = np.sqrt(np.sum(xr * xr + xi * xi, axis=-1, keepdims=True))
    safe = np.where(norm > 0, norm, 1.0)
    gr = np.where(norm > 0, -xr / safe, 0.0)
    gi = np.where(norm > 0, -xi / safe, 0.0)
    dh = np.concatenate([gr * rr + gi * ri, gi * rr - gr * ri], axis=-1)
    dr = np.concatenate([gr * hr + gi * hi, gi * hr - gr * hi], axis=-1)
    dt = np.concatenate([-gr, -gi], axis=-1)
    return -norm[..., 0], dh, dr, dt


SCORE = {"transe": transe_score, "distmult": distmult_score, "complex": complex_score, "rotate": rotate_score}
GRAD = {"transe": transe_grad, "distmult": distmult_grad, "complex": complex_grad, "rotate": rotate_grad}


# -- model ---------------------------------------------------------------------


@dataclass
class EmbeddingModel:
    technique: str
    dim: int
    entities: np.ndarray
    relations: np.ndarray

    @property
    def width(self) -> int:
        return 2 * self.dim if self.technique in COMPLEX_VALUED else self.dim

    @property
    def n_entities(self) -> int:
        return self.entities.shape[0]

    @property
    def n_relations(self) -> int:
        return self.relations.shape[0]

    @classmethod
    def init(cls, technique: str, n_entities: int, n_relations: int, dim: int,
             rng: np.random.Generator) -> "EmbeddingModel":
        technique = canonical_technique(technique)
        width = 2 * dim if technique in COMPLEX_VALUED else dim
        bound = 6.0 / np.sqrt(dim)
        if technique == "transe":
            ent = rng.uniform(-bound, bound, (n_entities, width))
            rel = rng.uniform(-bound, bound, (n_relations, width))
            rel /= np.linalg.norm(rel, axis=1, keepdims=True)
        elif technique == "rotate":
            ent = rng.uniform(-bound, bound, (n_entities, width)) / np.sqrt(2)
            phase = rng.uniform(-np.pi, np.pi, (n_relations, dim))
            rel = np.concatenate([np.cos(phase), np.sin(phase)], axis=1)
        else:
            scale = 1.0 / np.sqrt(dim)
            ent = rng.normal(0.0, scale, (n_entities, width))
            rel = rng.normal(0.0, scale, (n_relations, width))
        model = cls(technique, dim, ent, rel)
        model.normalize_entities()
        return model

    def copy(self) -> "EmbeddingModel":
        return EmbeddingModel(self.technique, self.dim, self.entities.copy(), self.relations.copy())

    def is_finite(self) -> bool:
        return bool(np.isfinite(self.entities).all() and np.isfinite(self.relations).all())

    # Constraint projections ------------------------------------------------

    def normalize_entities(self) -> None:
        """TransE keeps entity vectors on the unit sphere."""
        if self.technique == "transe":
            norm = np.linalg.norm(self.entities, axis=1, keepdims=True)
            np.divide(self.entities, norm, out=self.entities, where=norm > 0)

    def project_relations(self, rows: np.ndarray | None = None) -> None:
        """RotatE relations are unit-modulus rotations."""
        if self.technique != "rotate":
            return
        rel = self.relations if rows is None else self.relations[rows]
        re, im = _split(rel)
        mod = np.sqrt(re * re + im * im)
        mod = np.where(mod > 0, mod, 1.0)
        fixed = np.concatenate([np.where(mod > 0, re / mod, 1.0), im / mod], axis=1)
        if rows is None:
            self.relations[:] = fixed
        else:
            self.relations[rows] = fixed

    def relation_modulus(self) -> np.ndarray:
        re, im = _split(self.relations)
        return np.sqrt(re * re + im * im)

    # Scoring -----------------------------------------------------------------

    def score(self, h, r, t) -> np.ndarray | float:
        """Score of triples given as entity/relation indices (scalars or arrays)."""
        return SCORE[self.technique](self.entities[h], self.relations[r], self.entities[t])

    def score_grad(self, h, r, t):
        """Scores plus their gradients with respect to the h, r and t rows."""
        return GRAD[self.technique](self.entities[h], self.relations[r], self.entities[t])

    def score_tails(self, h: int, r: int) -> np.ndarray:
        """Scores of ``(h, r, e)`` for every entity ``e``."""
        E = self.entities
        hv, rv = E[h], self.relations[r]
        if self.technique == "transe":
            return -np.linalg.norm((hv + rv)[None, :] - E, axis=1)
        if self.technique == "distmult":
            return E @ (hv * rv)
        hr, hi = _split(hv)
        rr, ri = _split(rv)
        er, ei = _split(E)
        if self.technique == "complex":
            return er @ (hr * rr - hi * ri) + ei @ (hi * rr + hr * ri)
        ar, ai = hr * rr - hi * ri, hr * ri + hi * rr
        return -np.sqrt(((ar[None, :] - er) ** 2 + (ai[None, :] - ei) ** 2).sum(axis=1))

    def score_heads(self, r: int, t: int) -> np.ndarray:
        """Scores of ``(e, r, t)`` for every entity ``e``."""
        E = self.entities
        rv, tv = self.relations[r], E[t]
        if self.technique == "transe":
            return -np.linalg.norm(E + (rv - tv)[None, :], axis=1)
        if self.technique == "distmult":
            return E @ (rv * tv)
        rr, ri = _split(rv)
        tr, ti = _split(tv)
        er, ei = _split(E)
        if self.technique == "complex":
            return er @ (rr * tr + ri * ti) + ei @ (rr * ti - ri * tr)
        xr = er * rr[None, :] - ei * ri[None, :] - tr[None, :]
        xi = er * ri[None, :] + ei * rr[None, :] - ti[None, :]
        return -np.sqrt((xr * xr + xi * xi).sum(axis=1))
