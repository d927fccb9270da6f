"""Well-known vocabulary namespaces."""

RDF = "http://www.w3.org/1999/02/22-rdf-syntax-ns#"
RDFS = "http://www.w3.org/2000/01/rdf-schema#"
OWL = "http://www.w3.org/2002/07/owl#"
XSD = "http://www.w3.org/2001/XMLSchema#"
VOID = "http://rdfs.org/ns/void#"
DCTERMS = "http://purl.org/dc/terms/"

RDF_TYPE = RDF + "type"
RDF_LANGSTRING = RDF + "langString"
XSD_STRING = XSD + "string"
OWL_SAMEAS = OWL + "sameAs"

DEFAULT_BASE = "https://linkedpaperswithcode.com/"
DEFAULT_ONTOLOGY = DEFAULT_BASE + "ontology/"

# External link targets, keyed by the name used in link reports and VoID.
LINK_TARGETS = {
    "semopenalex": "https://semopenalex.org/",
    "wikidata": "http://www.wikidata.org/entity/",
    "dblp": "https://dblp.org/",
}

DEFAULT_PREFIXES = {
    "rdf": RDF,
    "rdfs": RDFS,
    "owl": OWL,
    "xsd": XSD,
    "void": VOID,
    "dcterms": DCTERMS,
    "lpwc": DEFAULT_ONTOLOGY,
}
