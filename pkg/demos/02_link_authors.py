"""Link author names and papers to an external catalog, offline.

The catalog here is a small JSON file standing in for the scholarly SPARQL
endpoints; ``kgforge.linker.SparqlCatalog`` is the drop-in remote variant.

    python3 demos/02_link_authors.py
"""

from _common import CATALOG, MINI, banner

from kgforge.linker import FixtureCatalog, LinkerConfig, disambiguate_all, mentions_from_graph
from kgforge.pipeline import build_graph, link_graph
from kgforge.validate import check_graph

graph = build_graph(MINI).graph
catalog = FixtureCatalog.from_file(CATALOG)

# Look at individual decisions before touching the graph.
banner("author decisions")
for d in disambiguate_all(mentions_from_graph(graph), catalog):
    if d.linked:
        how = "exact name + shared title" if d.step == 1 else f"fuzzy name via title, similarity {d.score:.3f}"
        print(f"  {d.name:16} -> {d.iri.rsplit('/', 1)[-1]:4} ({how})")
    else:
        print(f"  {d.name:16}    unlinked: {d.reason}")

# Raising the threshold drops the fuzzy match.
strict = disambiguate_all(mentions_from_graph(graph), catalog, LinkerConfig(min_sim=0.95))
print(f"\nwith min_sim=0.95: {sum(d.linked for d in strict)} linked")

banner("apply to the graph")
before = len(graph)
report, _ = link_graph(graph, catalog, LinkerConfig())
print(f"triples: {before} -> {len(graph)}")
print("authors:", report["authors"])
for kind, r in report["sameAs"].items():
    print(f"sameAs {kind:10} {r['linked']}/{r['total']}  ratio {r['ratio']:.2f}  unlinked {r['unlinked']}")
print("validation:", "ok" if not check_graph(graph) else "violations")
