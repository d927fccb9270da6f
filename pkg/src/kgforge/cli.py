"""``kgforge`` command line: build, link, stats, embed and validate.

Exit codes: 0 success, 1 validation failure, 2 usage error, 3 I/O or
catalog failure. Logs go to stderr as JSON lines; a short human summary
goes to stdout. Every run writes ``manifest.json`` into its output
directory.
"""

from __future__ import annotations

import argparse
import csv
import hashlib
import json
import logging
import platform
import sys
import time
from pathlib import Path

import numpy as np

from . import __version__
from .config import ConfigError, RunConfig, load_config
from .errors import CatalogUnavailable, KgforgeError, MalformedJson, ParseError, SinkWrite, TooSmall, WrongShape
from .ontology import REGISTRY, emit_ontology_annotations, emit_ontology_triples

EXIT_OK, EXIT_INVALID, EXIT_USAGE, EXIT_IO = 0, 1, 2, 3

log = logging.getLogger("kgforge")


class UsageError(Exception):
    pass


class JsonLineFormatter(logging.Formatter):
    def format(self, record: logging.LogRecord) -> str:
        doc = {"level": record.levelname, "logger": record.name, "msg": record.getMessage()}
        if record.exc_info:
            doc["exc"] = self.formatException(record.exc_info)
        return json.dumps(doc, ensure_ascii=False)


def _setup_logging(level: str) -> None:
    root = logging.getLogger()
    for h in list(root.handlers):
        if getattr(h, "_kgforge", False):
            root.removeHandler(h)
    handler = logging.StreamHandler(sys.stderr)
    handler.setFormatter(JsonLineFormatter())
    handler._kgforge = True
    root.addHandler(handler)
    root.setLevel(getattr(logging, level.upper(), logging.INFO))


# -- manifest -------------------------------------------------------------------


def sha256_file(path: Path) -> str:
    h = hashlib.sha256()
    with open(path, "rb") as fh:
        for block in iter(lambda: fh.read(1 << 20), b""):
            h.update(block)
    return h.hexdigest()


def _digests(paths: list[Path], root: Path | None = None) -> dict[str, str]:
    out = {}
    for p in sorted(paths):
        key = str(p.relative_to(root)) if root is not None and p.is_relative_to(root) else str(p)
        out[key] = sha256_file(p)
    return out


def write_manifest(out_dir: Path, command: str, cfg: RunConfig, args: dict, inputs: list[Path],
                   outputs: list[Path]) -> Path:
    """Versions, config echo and digests. Only ``created`` varies between identical runs."""
    doc = {
        "tool": "kgforge",
        "version": __version__,
        "python": platform.python_version(),
        "numpy": np.__version__,
        "command": command,
        "arguments": args,
        "config": cfg.to_dict(),
        "inputs": _digests(inputs),
        "outputs": _digests(outputs, out_dir),
        "created": time.strftime("%Y-%m-%dT%H:%M:%SZ", time.gmtime()),
    }
    path = out_dir / "manifest.json"
    path.write_text(json.dumps(doc, indent=2, sort_keys=True, default=str) + "\n", encoding="utf-8")
    return path


def _write_text(path: Path, text: str) -> Path:
    try:
        path.write_text(text, encoding="utf-8", newline="\n")
    except OSError as exc:
        raise SinkWrite(f"cannot write {path}: {exc}") from exc
    return path


def _out_dir(path: str) -> Path:
    out = Path(path)
    try:
        out.mkdir(parents=True, exist_ok=True)
    except OSError as exc:
        raise SinkWrite(f"cannot create {out}: {exc}") from exc
    return out


# -- subcommands -------------------------------------------------------------------


def cmd_build(args, cfg: RunConfig) -> int:
    from .pipeline import build_graph, void_for
    from .rdf import GraphBuffer, write_graph

    src = Path(args.input)
    if not src.is_dir():
        raise UsageError(f"input directory {src} does not exist")
    out = _out_dir(args.out)
    result = build_graph(src, cfg.policy)
    graph_path = out / ("lpwc.nt.gz" if args.gzip else "lpwc.nt")
    count = write_graph(result.graph, graph_path, "ntriples")
    ontology = GraphBuffer(emit_ontology_triples(REGISTRY) | emit_ontology_annotations(REGISTRY))
    outputs = [graph_path,
               _write_ttl(ontology, out / "lpwc-ontology.ttl", cfg),
               _write_ttl(void_for(result.graph, cfg.dump_date, cfg.policy), out / "void.ttl", cfg),
               _write_text(out / "ingest-report.jsonl", result.report_jsonl())]
    inputs = sorted(p for p in src.iterdir() if p.is_file())
    write_manifest(out, "build", cfg, {"in": str(src), "out": str(out), "gzip": args.gzip}, inputs, outputs)
    skipped = sum(r.skipped for r in result.reports) + result.collisions.skipped
    print(f"build: {count} triples written to {graph_path} ({skipped} records skipped)")
    return EXIT_OK


def _write_ttl(graph, path: Path, cfg: RunConfig) -> Path:
    from .rdf import write_graph

    write_graph(graph, path, "turtle", prefixes=cfg.prefixes)
    return path


def _catalog(args, cfg: RunConfig):
    from .linker import FixtureCatalog, SparqlCatalog

    fixture = Path(args.catalog_fixture) if args.catalog_fixture else cfg.catalog.fixture
    url = args.catalog_url or cfg.catalog.url
    if fixture is not None:
        try:
            return FixtureCatalog.from_file(fixture), {"mode": "fixture", "path": str(fixture)}
        except (OSError, ValueError) as exc:
            raise CatalogUnavailable(f"cannot load catalog fixture {fixture}: {exc}") from exc
    if url is None:
        raise UsageError("no catalog: pass --catalog-fixture or --catalog-url (or set KGFORGE_CATALOG_URL)")
    kwargs = {"semopenalex": url}
    if cfg.catalog.dblp_url:
        kwargs["dblp"] = cfg.catalog.dblp_url
    if cfg.catalog.wikidata_url:
        kwargs["wikidata"] = cfg.catalog.wikidata_url
    # Cached responses make a re-run reproducible offline; default next to the outputs.
    cache_dir = Path(args.cache_dir) if args.cache_dir else cfg.catalog.cache_dir or Path(args.out)
    cache = cache_dir / "catalog-cache.jsonl"
    return SparqlCatalog(**kwargs, cache_path=cache), {"mode": "remote", "url": url, "cache": str(cache)}


def cmd_link(args, cfg: RunConfig) -> int:
    from dataclasses import replace

    from .pipeline import link_graph, void_for
    from .rdf import read_graph, write_graph

    catalog, mode = _catalog(args, cfg)
    linker = cfg.linker
    if args.min_sim is not None:
        linker = replace(linker, min_sim=args.min_sim)
    if args.local_authors:
        linker = replace(linker, local_authors=True)
    graph_in = Path(args.graph)
    out = _out_dir(args.out)
    graph = read_graph(graph_in)
    report, decisions = link_graph(graph, catalog, linker, cfg.policy)
    report["catalog"] = mode
    graph_path = out / graph_in.name
    write_graph(graph, graph_path, "ntriples")
    decisions_text = "".join(json.dumps(d.to_dict(), sort_keys=True, ensure_ascii=False) + "\n" for d in decisions)
    outputs = [graph_path,
               _write_ttl(void_for(graph, cfg.dump_date, cfg.policy), out / "void.ttl", cfg),
               _write_text(out / "link-report.json", json.dumps(report, indent=2, sort_keys=True) + "\n"),
               _write_text(out / "link-decisions.jsonl", decisions_text)]
    inputs = [graph_in] + ([Path(mode["path"])] if mode["mode"] == "fixture" else [])
    write_manifest(out, "link", cfg, {"graph": str(graph_in), "out": str(out), "catalog": mode}, inputs, outputs)
    a = report["authors"]
    print(f"link: {a['linked']}/{a['total']} authors linked; sameAs "
          + ", ".join(f"{k} {v['linked']}/{v['total']}" for k, v in report["sameAs"].items()))
    return EXIT_OK


def cmd_stats(args, cfg: RunConfig) -> int:
    from .rdf import read_graph
    from .stats import count_entities, entities_csv, metric_distribution, metrics_csv, stats_json

    graph_in = Path(args.graph)
    out = _out_dir(args.out)
    graph = read_graph(graph_in)
    stats = count_entities(graph)
    hist = metric_distribution(graph, args.conference or [])
    outputs = [_write_text(out / "entities.csv", entities_csv(stats)),
               _write_text(out / "metrics.csv", metrics_csv(hist)),
               _write_text(out / "stats.json", stats_json(stats, hist))]
    write_manifest(out, "stats", cfg, {"graph": str(graph_in), "conference": args.conference or []},
                   [graph_in], outputs)
    print(entities_csv(stats), end="")
    return EXIT_OK


def cmd_embed(args, cfg: RunConfig) -> int:
    from .embed import KnownTriples, build_split, evaluate, export_embeddings, index_graph, train, train_report
    from .rdf import read_graph

    tc = cfg.train_config(technique=args.technique, dim=args.dim, seed=args.seed, max_epochs=args.max_epochs,
                          eval_interval=args.eval_interval, lr=args.lr, margin=args.margin,
                          negatives=args.negatives, batch_size=args.batch_size,
                          deterministic=False if args.fast else None, workers=args.workers)
    graph_in = Path(args.graph)
    out = _out_dir(args.out)
    index = index_graph(read_graph(graph_in))
    split = build_split(index.triples, tc.ratios, tc.seed)
    known = KnownTriples(index.triples, index.n_entities, index.n_relations)
    result = train(split, index.n_entities, index.n_relations, tc, known=known)
    test = evaluate(result.model, split.test, known, workers=tc.workers)
    report = train_report(result, test, tc)
    report["graph"] = {"entities": index.n_entities, "relations": index.n_relations, "triples": len(index.triples),
                       "train": len(split.train), "valid": len(split.valid), "test": len(split.test)}
    export_embeddings(result.model, index, out / "entities.tsv", out / "relations.tsv", tc.seed)
    checkpoints = {h["epoch"]: h["valid_mean_rank_filtered"] for h in result.history}
    rows = [["epoch", "loss", "valid_mean_rank_filtered"]]
    rows += [[e, repr(loss), repr(checkpoints[e]) if e in checkpoints else ""]
             for e, loss in enumerate(result.losses, 1)]
    log_path = out / "train-log.csv"
    with open(log_path, "w", encoding="utf-8", newline="") as fh:
        csv.writer(fh, lineterminator="\n").writerows(rows)
    outputs = [out / "entities.tsv", out / "relations.tsv", log_path,
               _write_text(out / "eval-report.json", json.dumps(report, indent=2, sort_keys=True) + "\n")]
    write_manifest(out, "embed", cfg, {"graph": str(graph_in), "train": tc.to_dict()}, [graph_in], outputs)
    print(f"embed: {tc.technique} d={tc.dim} stopped at epoch {result.stopped_epoch} "
          f"(kept {result.best_epoch}); test filtered MR {test.mean_rank_filtered:.2f}, "
          f"MRR {test.mrr_filtered:.4f}, hits@10 {test.hits_filtered[10]:.4f}")
    return EXIT_OK


def cmd_validate(args, cfg: RunConfig) -> int:
    from .rdf import read_graph
    from .validate import check_graph

    graph_in = Path(args.graph)
    try:
        graph = read_graph(graph_in)
    except ParseError as exc:
        problems = [f"parse error: {exc}"]
    else:
        problems = check_graph(graph, policy=cfg.policy)
    out = _out_dir(args.out) if args.out else graph_in.parent
    report = _write_text(out / "validation.json",
                         json.dumps({"graph": graph_in.name, "valid": not problems, "problems": problems},
                                    indent=2) + "\n")
    write_manifest(out, "validate", cfg, {"graph": str(graph_in)}, [graph_in], [report])
    for p in problems:
        log.error("violation: %s", p)
    print(f"validate: {'ok' if not problems else f'{len(problems)} violation(s)'} ({graph_in})")
    return EXIT_OK if not problems else EXIT_INVALID


# -- parser ------------------------------------------------------------------------


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        self.print_usage(sys.stderr)
        raise UsageError(message)


def build_parser() -> argparse.ArgumentParser:
    p = _Parser(prog="kgforge", description="Build, link, describe and embed a scholarly knowledge graph.")
    p.add_argument("--version", action="version", version=f"kgforge {__version__}")
    p.add_argument("--config", help="TOML configuration file")
    p.add_argument("--log-level", help="DEBUG, INFO, WARNING or ERROR")
    sub = p.add_subparsers(dest="command", required=True, parser_class=_Parser)

    b = sub.add_parser("build", help="ingest dump files and write the graph, ontology and VoID")
    b.add_argument("--in", dest="input", required=True, help="directory with dump files")
    b.add_argument("--out", required=True)
    b.add_argument("--gzip", action="store_true", help="write lpwc.nt.gz")
    b.set_defaults(func=cmd_build)

    ln = sub.add_parser("link", help="link authors and add owl:sameAs triples")
    ln.add_argument("--graph", required=True)
    ln.add_argument("--out", required=True)
    ln.add_argument("--catalog-fixture", help="offline catalog JSON")
    ln.add_argument("--catalog-url", help="SPARQL endpoint for the scholarly catalog")
    ln.add_argument("--cache-dir")
    ln.add_argument("--min-sim", type=float)
    ln.add_argument("--local-authors", action="store_true")
    ln.set_defaults(func=cmd_link)

    s = sub.add_parser("stats", help="entity counts and per-conference metric histograms")
    s.add_argument("--graph", required=True)
    s.add_argument("--out", required=True)
    s.add_argument("--conference", action="append", help="repeatable")
    s.set_defaults(func=cmd_stats)

    e = sub.add_parser("embed", help="train and evaluate entity/relation embeddings")
    e.add_argument("--graph", required=True)
    e.add_argument("--out", required=True)
    e.add_argument("--technique", choices=["transe", "distmult", "complex", "rotate"], type=str.lower)
    e.add_argument("--dim", type=int)
    e.add_argument("--seed", type=int)
    e.add_argument("--max-epochs", type=int)
    e.add_argument("--eval-interval", type=int)
    e.add_argument("--lr", type=float)
    e.add_argument("--margin", type=float)
    e.add_argument("--negatives", type=int)
    e.add_argument("--batch-size", type=int)
    e.add_argument("--workers", type=int)
    e.add_argument("--fast", action="store_true", help="parallel unsynchronized updates (not reproducible)")
    e.set_defaults(func=cmd_embed)

    v = sub.add_parser("validate", help="check a graph against the ontology")
    v.add_argument("--graph", required=True)
    v.add_argument("--out", help="directory for validation.json (default: next to the graph)")
    v.set_defaults(func=cmd_validate)
    return p


def run(argv: list[str] | None = None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
        cfg = load_config(args.config)
        if args.log_level:
            cfg.log_level = args.log_level.upper()
        _setup_logging(cfg.log_level)
        return args.func(args, cfg)
    except (UsageError, ConfigError) as exc:
        print(f"kgforge: error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except TooSmall as exc:
        log.error("TooSmall: %s", exc)
        return EXIT_INVALID
    except SystemExit as exc:  # --help / --version
        return int(exc.code or 0)
    except (OSError, SinkWrite, CatalogUnavailable, MalformedJson, WrongShape, ParseError) as exc:
        log.error("%s: %s", type(exc).__name__, exc)
        return EXIT_IO
    except KgforgeError as exc:
        log.error("%s: %s", type(exc).__name__, exc)
        return EXIT_IO


def main() -> None:
    sys.exit(run())


if __name__ == "__main__":
    main()
