"""Regenerate the static fixture files in this directory.

Run ``python tests/fixtures/make_fixtures.py``. The outputs are checked in;
tests never call this script. After changing it, refreeze the golden
graph with ``python tests/fixtures/make_fixtures.py --golden``.
"""

from __future__ import annotations

import json
import sys
from pathlib import Path

HERE = Path(__file__).parent
MINI = HERE / "pwc-mini"
PWC = "https://paperswithcode.com/paper/"


def paper(slug, title, authors, proceeding, tasks, date, abstract, methods=(), arxiv=None):
    return {
        "paper_url": PWC + slug,
        "arxiv_id": arxiv,
        "title": title,
        "abstract": abstract,
        "url_abs": f"https://arxiv.org/abs/{arxiv}" if arxiv else None,
        "url_pdf": f"https://arxiv.org/pdf/{arxiv}.pdf" if arxiv else None,
        "proceeding": proceeding,
        "authors": authors,
        "tasks": tasks,
        "date": date,
        "methods": [{"name": m, "full_name": m, "description": ""} for m in methods],
    }


QA = "Question Answering"
NER = "Named Entity Recognition"

PAPERS = [
    paper("span-pointer-networks-for-reading", "Span Pointer Networks for Reading Comprehension",
          ["Alice Moreau", "Bo Chen"], "ACL 2020 7", [QA], "2020-07-05",
          "We propose **span pointers** for [extractive QA](https://example.org/qa).",
          ["Attention"], "2004.00001"),
    paper("contextual-tagging-with-gated-units", "Contextual Tagging with Gated Units",
          ["Carla Rossi", "Dmitri Volkov"], "ACL 2020 7", [NER], "2020-07-06",
          "Gated units for sequence tagging.\n\n- fast\n- accurate", ["GRU"], "2004.00002"),
    paper("multi-hop-retrieval-revisited", "Multi-Hop Retrieval Revisited: A Simple Baseline",
          ["Alice Moreau", "Eun-ji Park"], "ACL 2020 7", [QA], "2020-07-07",
          "A `simple` baseline for multi-hop retrieval.", ["Attention"], "2004.00003"),
    paper("robust-ner-under-noise", "Robust NER under Label Noise (Extended)",
          ["Jürgen Müller", "Carla Rossi"], "ACL 2020 7", [NER], "2020-07-08",
          "Noise-robust training for NER.", [], "2004.00004"),
    paper("answer-verification-with-entailment", "Answer Verification with Entailment",
          ["Farid Haddad"], "ACL 2020 7", [QA], "2020-07-09",
          "# Overview\nEntailment-based answer checks.", [], None),
    paper("lexicon-features-for-tagging", "Lexicon Features for Tagging",
          ["Dmitri Volkov", "Grace O'Neil"], "ACL 2020 7", [NER], "2020-07-10",
          "Lexicons help \"rare\" entities.", ["GRU"], "2004.00006"),
    paper("scaling-readers-with-sparse-attention", "Scaling Readers with Sparse Attention",
          ["Bo Chen", "Hiro Tanaka"], "NeurIPS 2019 12", [QA], "2019-12-08",
          "Sparse attention scales *readers* to long inputs.", ["Sparse Attention", "Attention"], "1912.00007"),
    paper("tagging-as-span-selection", "Tagging as Span Selection",
          ["Eun-ji Park", "Ivan Petrov"], "NeurIPS 2019 12", [NER, QA], "2019-12-09",
          "Casts tagging as span selection.", [], "1912.00008"),
    paper("calibrated-question-answering", "Calibrated Question Answering",
          ["Hiro Tanaka"], "NeurIPS 2019 12", [QA], "2019-12-10",
          "Calibration for QA models.", [], "1912.00009"),
    paper("cross-lingual-entity-tagging", "Cross-lingual Entity Tagging",
          ["Ivan Petrov", "Jürgen Müller"], "NeurIPS 2019 12", [NER], "2019-12-11",
          "Zero-shot transfer of taggers.", [], "1912.00010"),
    paper("a-survey-of-reading-benchmarks", "A Survey of Reading Benchmarks",
          ["Grace O'Neil"], None, [QA], "2021-03-01",
          "Survey.\nWith a line break and a tab\tinside.", [], "2103.00011"),
    paper("entity-typing-in-the-wild", "Entity Typing in the Wild",
          ["Farid Haddad", "Lena Kowalski"], None, [NER], "2021-04-02",
          "Entity typing datasets ~~were~~ are noisy.", [], "2104.00012"),
]

# One malformed element (no paper_url) and one unknown key exercise the report.
PAPERS_EXTRA = [{"title": "Orphan Without URL", "authors": ["Nobody"]}]
PAPERS[0]["upstream_extra_field"] = "ignored"

CODE_LINKS = [
    ("span-pointer-networks-for-reading", "https://github.com/amoreau/span-pointer", True, "pytorch"),
    ("contextual-tagging-with-gated-units", "https://github.com/crossi/gated-tagger", True, "tf"),
    ("multi-hop-retrieval-revisited", "https://github.com/amoreau/span-pointer", False, "pytorch"),
    ("robust-ner-under-noise", "https://github.com/jmueller/robust-ner/", True, "pytorch"),
    ("scaling-readers-with-sparse-attention", "https://github.com/bchen/sparse-reader", True, "jax"),
    ("tagging-as-span-selection", "https://github.com/epark/span-tagging", False, "none"),
    ("calibrated-question-answering", "https://github.com/htanaka/calibrated-qa", True, "pytorch"),
    ("cross-lingual-entity-tagging", "https://github.com/ipetrov/xl-tagger", True, "pytorch"),
    ("paper-not-in-this-dump", "https://github.com/someone/dangling", True, "pytorch"),
]


def code_link(slug, repo, official, framework):
    return {
        "paper_url": PWC + slug,
        "paper_title": slug.replace("-", " ").title(),
        "paper_arxiv_id": None,
        "paper_url_abs": None,
        "paper_url_pdf": None,
        "repo_url": repo,
        "is_official": official,
        "mentioned_in_paper": official,
        "mentioned_in_github": False,
        "framework": framework,
    }


DATASETS = [
    {"url": "https://paperswithcode.com/dataset/qa-bench", "name": "QA-Bench", "full_name": "Question Answering Benchmark",
     "homepage": "https://example.org/qa-bench", "description": "A **reading** benchmark with [splits](https://example.org).",
     "paper": {"title": "Span Pointer Networks for Reading Comprehension", "url": PWC + "span-pointer-networks-for-reading"},
     "introduced_date": "2020-07-05", "modalities": ["Texts"], "tasks": [{"task": QA}], "languages": ["English"],
     "variants": ["QA-Bench"], "num_papers": 4, "data_loaders": []},
    {"url": "https://paperswithcode.com/dataset/tagset-10", "name": "TagSet-10", "full_name": "Tagging Set with 10 Types",
     "homepage": None, "description": "Ten entity types.", "paper": None, "introduced_date": None,
     "modalities": ["Texts"], "tasks": [{"task": NER}], "languages": [], "variants": [], "num_papers": 3, "data_loaders": []},
    {"url": "https://paperswithcode.com/dataset/wikiread", "name": "WikiRead", "full_name": "",
     "homepage": "https://example.org/wikiread", "description": "", "paper": None, "introduced_date": "2019-01-15",
     "modalities": [], "tasks": [], "languages": [], "variants": [], "num_papers": 1, "data_loaders": []},
]

METHODS = [
    {"url": "https://paperswithcode.com/method/attention", "name": "Attention", "full_name": "Attention Mechanism",
     "description": "Weights inputs by `softmax` relevance.", "paper": None, "introduced_year": 2014,
     "source_url": None, "source_title": None, "code_snippet_url": None, "main_collection": None, "collections": []},
    {"url": "https://paperswithcode.com/method/gru", "name": "GRU", "full_name": "Gated Recurrent Unit",
     "description": "A gated recurrent cell.", "paper": None, "introduced_year": 2014,
     "source_url": None, "source_title": None, "code_snippet_url": None, "main_collection": None, "collections": []},
    {"url": "https://paperswithcode.com/method/sparse-attention", "name": "Sparse Attention", "full_name": "Sparse Attention",
     "description": "Attention restricted to a *sparse* pattern.",
     "paper": {"title": "Scaling Readers with Sparse Attention", "url": PWC + "scaling-readers-with-sparse-attention"},
     "introduced_year": "2019", "source_url": None, "source_title": None, "code_snippet_url": None,
     "main_collection": None, "collections": []},
]

QA_PAPERS = ["span-pointer-networks-for-reading", "multi-hop-retrieval-revisited", "answer-verification-with-entailment",
             "scaling-readers-with-sparse-attention", "tagging-as-span-selection", "calibrated-question-answering"]
QA_METRICS = ["EM", "F1"]


def nested_table(depth: int, level: int = 1) -> dict:
    """A dataset entry whose subdatasets nest ``depth`` levels in total, one row per level."""
    slug = QA_PAPERS[(level - 1) % len(QA_PAPERS)]
    row = {
        "model_name": f"Reader-{level}",
        "metrics": {QA_METRICS[level % 2]: f"{60 + level}.{level % 10}", "Params": None},
        "paper_title": None,
        "paper_url": PWC + slug,
        "paper_date": None,
        "code_links": [],
        "model_links": [],
    }
    entry = {
        "dataset": "QA-Bench" if level == 1 else f"Split {level}",
        "description": "",
        "sota": {"metrics": QA_METRICS, "rows": [row]},
        "subdatasets": [nested_table(depth, level + 1)] if level < depth else [],
    }
    return entry


EVALUATION_TABLES = [
    {"task": QA, "description": "Answer questions about a passage.", "categories": ["Natural Language Processing"],
     "datasets": [nested_table(19)], "subtasks": [], "synonyms": [], "source_link": None},
    {"task": NER, "description": "Locate and classify *named entities*.", "categories": ["Natural Language Processing"],
     "datasets": [{
         "dataset": "TagSet-10", "description": "",
         "sota": {"metrics": ["F1", "Precision"], "rows": [
             {"model_name": "GatedTagger", "metrics": {"F1": "91.2", "Precision": "90.8"},
              "paper_title": "Contextual Tagging with Gated Units", "paper_url": PWC + "contextual-tagging-with-gated-units",
              "paper_date": "2020-07-06", "code_links": [], "model_links": []},
             {"model_name": "RobustNER", "metrics": {"F1": "92.0"},
              "paper_title": "Robust NER under Label Noise (Extended)", "paper_url": PWC + "robust-ner-under-noise",
              "paper_date": "2020-07-08", "code_links": [], "model_links": []},
             {"model_name": "XLTagger", "metrics": {"Accuracy": "88.5", "F1": "87.9"},
              "paper_title": "Cross-lingual Entity Tagging", "paper_url": PWC + "cross-lingual-entity-tagging",
              "paper_date": "2019-12-11", "code_links": [], "model_links": []},
         ]},
         "subdatasets": []}],
     "subtasks": [], "synonyms": ["NER"], "source_link": None},
]

# Offline catalog for the mini dump: some authors resolve in step 1, one only
# through a misspelled catalog name (step 2), the rest stay unlinked.
CATALOG = {
    "authors": [
        {"id": "https://semopenalex.org/author/A1", "name": "Alice Moreau", "works": ["https://semopenalex.org/work/W1"]},
        {"id": "https://semopenalex.org/author/A2", "name": "Bo Chen", "works": ["https://semopenalex.org/work/W7"]},
        {"id": "https://semopenalex.org/author/A3", "name": "Carla Rossi", "works": ["https://semopenalex.org/work/W2"]},
        {"id": "https://semopenalex.org/author/A4", "name": "Jürgen Muller", "works": ["https://semopenalex.org/work/W4"]},
        {"id": "https://semopenalex.org/author/A5", "name": "Hiro Tanaka", "works": ["https://semopenalex.org/work/W9"]},
        {"id": "https://semopenalex.org/author/A6", "name": "Bo Chen", "works": []},
    ],
    "works": [
        {"id": "https://semopenalex.org/work/W1", "title": "Span Pointer Networks for Reading Comprehension",
         "authors": ["https://semopenalex.org/author/A1"]},
        {"id": "https://semopenalex.org/work/W2", "title": "Contextual Tagging with Gated Units",
         "authors": ["https://semopenalex.org/author/A3"]},
        {"id": "https://semopenalex.org/work/W4", "title": "Robust NER under Label Noise",
         "authors": ["https://semopenalex.org/author/A4", "https://semopenalex.org/author/A3"]},
        {"id": "https://semopenalex.org/work/W7", "title": "Scaling Readers with Sparse Attention",
         "authors": ["https://semopenalex.org/author/A2", "https://semopenalex.org/author/A5"]},
        {"id": "https://semopenalex.org/work/W9", "title": "Calibrated Question Answering",
         "authors": ["https://semopenalex.org/author/A5"]},
    ],
    "conferences": [
        {"id": "https://dblp.org/streams/conf/acl", "name": "Annual Meeting of the Association for Computational Linguistics",
         "acronym": "ACL"},
        {"id": "https://dblp.org/streams/conf/nips", "name": "Neural Information Processing Systems", "acronym": "NeurIPS"},
    ],
    "datasets": [
        {"id": "http://www.wikidata.org/entity/Q90000001", "label": "QA-Bench"},
    ],
}


def dump(path: Path, obj) -> None:
    path.write_text(json.dumps(obj, indent=1, ensure_ascii=False) + "\n", encoding="utf-8")


def main() -> None:
    MINI.mkdir(exist_ok=True)
    dump(MINI / "papers-with-abstracts.json", PAPERS + PAPERS_EXTRA)
    dump(MINI / "links-between-papers-and-code.json", [code_link(*c) for c in CODE_LINKS])
    dump(MINI / "datasets.json", DATASETS)
    dump(MINI / "methods.json", METHODS)
    dump(MINI / "evaluation-tables.json", EVALUATION_TABLES)
    dump(HERE / "catalog-mini.json", CATALOG)
    if "--golden" in sys.argv:
        from kgforge.pipeline import build_graph
        from kgforge.rdf import write_graph

        write_graph(build_graph(MINI).graph, HERE / "golden" / "lpwc.nt", "ntriples")


if __name__ == "__main__":
    main()
