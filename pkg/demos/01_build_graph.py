"""Turn the bundled mini dump into RDF and look at what came out.

    python3 demos/01_build_graph.py
"""

from collections import Counter

from _common import MINI, banner

from kgforge.namespaces import RDF_TYPE
from kgforge.ontology import DEFAULT_POLICY, REGISTRY
from kgforge.pipeline import build_graph
from kgforge.rdf import GraphBuffer, IRI, serialize_to_string
from kgforge.validate import check_graph

result = build_graph(MINI)
graph = result.graph

banner("ingest")
for report in result.reports:
    print(f"{report.file:40} {report.records:4} records, {report.skipped} skipped")
    for w in report.warnings:
        print("   warning:", {k: v for k, v in w.items() if k != "file"})

banner("graph")
print(f"{len(graph)} triples")
kinds = Counter(REGISTRY.class_by_uri(t.object.value).local_name for t in graph.triples(p=IRI(RDF_TYPE)))
for name, n in sorted(kinds.items()):
    print(f"  {name:20} {n}")

# One paper, in Turtle, so the shape of an entity is visible.
banner("one paper")
paper = IRI(DEFAULT_POLICY.base_namespace + "paper/span-pointer-networks-for-reading")
print(serialize_to_string(GraphBuffer(graph.triples(s=paper)), "turtle"))

# The evaluation tree in the dump nests 19 levels deep; every level becomes
# a table linked to its parent.
banner("deepest evaluation table")
depth = Counter()
parent = IRI(REGISTRY.prop("parentTable").uri)
links = {t.subject: t.object for t in graph.triples(p=parent)}
for table in links:
    d, node = 1, table
    while node in links:
        node, d = links[node], d + 1
    depth[table] = d
deepest = max(depth, key=depth.get)
print(f"{deepest.value} sits at depth {depth[deepest]}")

banner("validation")
problems = check_graph(graph)
print("ok" if not problems else "\n".join(problems))
