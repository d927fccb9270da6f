import gzip
import io

import pytest
from hypothesis import given, settings

from kgforge.errors import InvalidTerm, ParseError, SinkWrite
from kgforge.ingest import EntityRecord, Ref
from kgforge.namespaces import RDF_TYPE, XSD
from kgforge.rdf import (
    IRI,
    GraphBuffer,
    GraphFrozen,
    Literal,
    Triple,
    parse,
    read_graph,
    serialize_to_string,
    write_graph,
)
from kgforge.rdf.emit import emit_entity

from strategies import graphs

EX = "http://example.org/"


def t(s, p, o):
    return Triple(IRI(EX + s), IRI(EX + p), o if not isinstance(o, str) else IRI(EX + o))


def test_literal_escaping():
    lit = Literal('say "hi"\nand \\ leave\ttab\r')
    assert lit.n3() == r'"say \"hi\"\nand \\ leave\ttab\r"'
    assert Literal("x", lang="en").n3() == '"x"@en'
    assert Literal("2020-01-01", XSD + "date").n3() == '"2020-01-01"^^<http://www.w3.org/2001/XMLSchema#date>'
    assert Literal("😀").n3() == '"😀"'


@pytest.mark.parametrize("bad", ["relative/path", "http://x.org/a b", "http://x.org/<a>", ""])
def test_invalid_iris(bad):
    with pytest.raises(InvalidTerm):
        IRI(bad)


def test_invalid_literals():
    with pytest.raises(InvalidTerm):
        Literal("x", lang="not a tag")
    with pytest.raises(InvalidTerm):
        Literal("x", datatype="no-scheme")


def test_graph_buffer_dedup_index_and_freeze():
    g = GraphBuffer()
    a = t("a", "p", "b")
    assert g.add(a) and not g.add(a)
    g.add(Triple(IRI(EX + "a"), IRI(RDF_TYPE), IRI(EX + "C")))
    assert g.subjects_of_class(EX + "C") == {IRI(EX + "a")}
    assert list(g.triples(p=IRI(EX + "p"))) == [a]
    g.discard(Triple(IRI(EX + "a"), IRI(RDF_TYPE), IRI(EX + "C")))
    assert not g.subjects_of_class(EX + "C")
    g.freeze()
    with pytest.raises(GraphFrozen):
        g.add(t("x", "p", "y"))


def test_ntriples_is_sorted_and_insertion_order_free():
    a, b, c = t("b", "p", "c"), t("a", "q", Literal("z")), t("a", "p", "c")
    one = serialize_to_string(GraphBuffer([a, b, c]))
    two = serialize_to_string(GraphBuffer([c, b, a]))
    assert one == two
    assert one.splitlines() == sorted(one.splitlines())
    assert one.endswith(" .\n") and "\r" not in one


def test_turtle_abbreviations():
    g = GraphBuffer([
        Triple(IRI(EX + "s"), IRI(RDF_TYPE), IRI(EX + "C")),
        t("s", "p", "o1"), t("s", "p", "o2"), t("s", "q", Literal("v", lang="en")),
    ])
    text = serialize_to_string(g, "turtle", {"ex": EX})
    assert text == (
        "@prefix ex: <http://example.org/> .\n\n"
        "ex:s ex:p ex:o1 ,\n        ex:o2 ;\n    ex:q \"v\"@en ;\n    a ex:C .\n"
    )
    assert set(parse(text, "turtle")) == set(g)


@given(graphs)
@settings(max_examples=200)
def test_round_trip_both_formats(triples):
    g = GraphBuffer(triples)
    for fmt in ("ntriples", "turtle"):
        text = serialize_to_string(g, fmt)
        back = GraphBuffer(parse(text, fmt))
        assert set(back) == set(g)
        assert serialize_to_string(back, fmt) == text


def test_gzip_output_is_deterministic(tmp_path):
    g = GraphBuffer([t("a", "p", Literal("ü"))])
    write_graph(g, tmp_path / "one.nt.gz")
    write_graph(g, tmp_path / "two.nt.gz")
    raw = (tmp_path / "one.nt.gz").read_bytes()
    assert raw == (tmp_path / "two.nt.gz").read_bytes()
    assert gzip.decompress(raw).decode() == serialize_to_string(g)
    assert set(read_graph(tmp_path / "one.nt.gz")) == set(g)


def test_turtle_file_round_trip(tmp_path):
    g = GraphBuffer([t("a", "p", Literal('multi\nline "q"', lang="de")), t("a", "p", "b")])
    write_graph(g, tmp_path / "g.ttl")
    assert set(read_graph(tmp_path / "g.ttl")) == set(g)


@pytest.mark.parametrize("text", [
    "<http://x.org/a> <http://x.org/p> .\n",
    "<http://x.org/a> <http://x.org/p> \"unterminated .\n",
    "<http://x.org/a> <http://x.org/p> <http://x.org/b>\n",
    "_:b0 <http://x.org/p> <http://x.org/b> .\n",
    "ex:a <http://x.org/p> <http://x.org/b> .\n",
    "<a> <http://x.org/p> <http://x.org/b> .\n",
])
def test_ntriples_parse_errors(text):
    with pytest.raises(ParseError):
        parse(text, "ntriples")


def test_parse_error_reports_line():
    text = "<http://x.org/a> <http://x.org/p> <http://x.org/b> .\n<bad line\n"
    with pytest.raises(ParseError) as info:
        parse(text, "ntriples")
    assert info.value.line == 2


def test_unwritable_sink():
    class Broken(io.RawIOBase):
        def write(self, b):
            raise OSError("disk full")

    from kgforge.rdf import serialize

    with pytest.raises(SinkWrite):
        serialize(GraphBuffer([t("a", "p", "b")]), "ntriples", Broken())


def test_unicode_escapes_are_parsed():
    text = '<http://x.org/a> <http://x.org/p> "caf\\u00E9 \\U0001F600" .\n'
    assert parse(text)[0].object == Literal("café 😀")


def test_emit_paper_with_two_tasks_and_markdown_abstract():
    record = EntityRecord("Paper", "p", scalars={"title": "T"},
                          links={"hasTask": [Ref("Task", "Image Classification"), Ref("Task", "Detection")]})
    triples = emit_entity(record)
    assert len(triples) == 4
    record.scalars["abstract"] = "**x**"
    abstract = [t for t in emit_entity(record) if t.predicate.value.endswith("/abstract")]
    assert [t.object.lexical for t in abstract] == ["x"]
