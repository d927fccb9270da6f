"""Run configuration: a TOML file, environment variables, then command-line flags.

Recognized tables and keys::

    [uri]      base = "https://..."   ; [uri.segments] Paper = "paper", ...
    [prefixes] lpwc = "https://...", ...
    [build]    dump_date = "2023-06-30"
    [linker]   min_sim, case_sensitive, fold_diacritics, local_authors, workers
    [catalog]  fixture = "path.json" | url = "https://...", dblp_url, wikidata_url, cache_dir
    [embed]    any TrainConfig field
    [log]      level = "INFO"

``KGFORGE_CATALOG_URL`` and ``KGFORGE_CACHE_DIR`` override the matching
catalog keys; flags override everything.
"""

from __future__ import annotations

import os
from dataclasses import dataclass, field, fields
from datetime import date
from pathlib import Path
from typing import Any

try:
    import tomllib
except ImportError:  # Python < 3.11
    import tomli as tomllib

from .embed import TrainConfig
from .linker import LinkerConfig
from .namespaces import DEFAULT_PREFIXES
from .ontology import DEFAULT_POLICY, UriPolicy

ENV_CATALOG_URL = "KGFORGE_CATALOG_URL"
ENV_CACHE_DIR = "KGFORGE_CACHE_DIR"


class ConfigError(ValueError):
    """Bad configuration; reported as a usage error."""


@dataclass
class CatalogMode:
    fixture: Path | None = None
    url: str | None = None
    dblp_url: str | None = None
    wikidata_url: str | None = None
    cache_dir: Path | None = None

    @property
    def specified(self) -> bool:
        return self.fixture is not None or self.url is not None

    def to_dict(self) -> dict:
        return {k: (str(v) if v is not None else None) for k, v in self.__dict__.items()}


@dataclass
class RunConfig:
    policy: UriPolicy = DEFAULT_POLICY
    prefixes: dict[str, str] = field(default_factory=lambda: dict(DEFAULT_PREFIXES))
    dump_date: date | None = None
    linker: LinkerConfig = field(default_factory=LinkerConfig)
    catalog: CatalogMode = field(default_factory=CatalogMode)
    train: dict[str, Any] = field(default_factory=dict)
    log_level: str = "INFO"

    def train_config(self, **overrides) -> TrainConfig:
        merged = {**self.train, **{k: v for k, v in overrides.items() if v is not None}}
        try:
            return TrainConfig(**merged)
        except (TypeError, ValueError) as exc:
            raise ConfigError(f"embed configuration: {exc}") from exc

    def to_dict(self) -> dict:
        return {
            "uri": {"base": self.policy.base_namespace, "segments": dict(sorted(self.policy.segments.items()))},
            "prefixes": dict(sorted(self.prefixes.items())),
            "dump_date": self.dump_date.isoformat() if self.dump_date else None,
            "linker": dict(self.linker.__dict__),
            "catalog": self.catalog.to_dict(),
            "embed": dict(sorted(self.train.items())),
            "log_level": self.log_level,
        }


def _table(doc: dict, name: str) -> dict:
    value = doc.get(name, {})
    if not isinstance(value, dict):
        raise ConfigError(f"[{name}] must be a table")
    return value


def load_config(path: str | Path | None = None, env: dict[str, str] | None = None) -> RunConfig:
    env = os.environ if env is None else env
    doc: dict = {}
    if path is not None:
        try:
            with open(path, "rb") as fh:
                doc = tomllib.load(fh)
        except tomllib.TOMLDecodeError as exc:
            raise ConfigError(f"{path}: {exc}") from exc
    cfg = RunConfig()
    uri = _table(doc, "uri")
    try:
        cfg.policy = DEFAULT_POLICY.with_overrides(uri.get("base"), uri.get("segments"))
    except ValueError as exc:
        raise ConfigError(f"[uri]: {exc}") from exc
    cfg.prefixes.update(_table(doc, "prefixes"))
    build = _table(doc, "build")
    if build.get("dump_date"):
        raw = build["dump_date"]
        cfg.dump_date = raw if isinstance(raw, date) else date.fromisoformat(str(raw))
    linker = _table(doc, "linker")
    known = {f.name for f in fields(LinkerConfig)}
    unknown = set(linker) - known
    if unknown:
        raise ConfigError(f"[linker]: unknown keys {sorted(unknown)}")
    cfg.linker = LinkerConfig(**linker)
    catalog = _table(doc, "catalog")
    cache_dir = env.get(ENV_CACHE_DIR) or catalog.get("cache_dir")
    cfg.catalog = CatalogMode(
        fixture=Path(catalog["fixture"]) if catalog.get("fixture") else None,
        url=env.get(ENV_CATALOG_URL) or catalog.get("url"),
        dblp_url=catalog.get("dblp_url"),
        wikidata_url=catalog.get("wikidata_url"),
        cache_dir=Path(cache_dir) if cache_dir else None,
    )
    train_keys = {f.name for f in fields(TrainConfig)}
    embed = _table(doc, "embed")
    unknown = set(embed) - train_keys
    if unknown:
        raise ConfigError(f"[embed]: unknown keys {sorted(unknown)}")
    cfg.train = dict(embed)
    cfg.log_level = str(_table(doc, "log").get("level", "INFO")).upper()
    return cfg
