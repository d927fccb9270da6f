"""Which evaluation metrics do papers at a venue report?

    python3 demos/03_conference_metrics.py [conference ...]
"""

import sys

from _common import MINI, banner

from kgforge.pipeline import build_graph
from kgforge.stats import count_entities, metric_distribution

graph = build_graph(MINI).graph
stats = count_entities(graph)

banner("entities")
for name, n in sorted(stats.class_counts.items()):
    if n:
        print(f"  {name:18} {n:5}")
print(f"  papers with evaluation results: {stats.papers_with_evaluations}")

venues = sys.argv[1:] or ["ACL", "NeurIPS", "ICML"]
for hist in metric_distribution(graph, venues):
    banner(f"metrics at {hist.conference}")
    if hist.unknown:
        print("  no such conference in the graph")
        continue
    width = max(hist.bins.values())
    for metric, count in hist.bins.items():
        print(f"  {metric:10} {'#' * round(20 * count / width)} {count}")
