"""Canonical N-Triples/Turtle writers and the small parser used to read them back.

The parser only covers what the writers produce plus ordinary N-Triples:
IRIs, literals with language tags or datatypes, prefixed names, ``a`` and
the ``;``/``,`` abbreviations. It is not a general RDF toolkit.
"""

from __future__ import annotations

import gzip
import io
import re
from pathlib import Path
from typing import BinaryIO, Iterable, Iterator

from ..errors import InvalidTerm, ParseError, SinkWrite
from ..namespaces import DEFAULT_PREFIXES, RDF_TYPE, XSD_STRING
from .graph import GraphBuffer
from .terms import IRI, Literal, Triple, escape_ntriples_literal

FORMATS = ("ntriples", "turtle")

_PN_PREFIX = re.compile(r"^[A-Za-z][A-Za-z0-9_\-]*$")
_PN_LOCAL = re.compile(r"^[A-Za-z0-9_](?:[A-Za-z0-9_\-]*[A-Za-z0-9_])?$")


# -- writing ---------------------------------------------------------------


def open_sink(path: str | Path) -> BinaryIO:
    """Open a binary output file, gzip-compressed when the name ends in ``.gz``."""
    path = Path(path)
    try:
        path.parent.mkdir(parents=True, exist_ok=True)
        if path.suffix == ".gz":
            # mtime=0 keeps compressed output byte-identical across runs.
            return gzip.GzipFile(filename="", mode="wb", fileobj=open(path, "wb"), mtime=0)
        return open(path, "wb")
    except OSError as exc:
        raise SinkWrite(str(exc)) from exc


def open_source(path: str | Path) -> BinaryIO:
    path = Path(path)
    raw = open(path, "rb")
    if raw.read(2) == b"\x1f\x8b":
        raw.seek(0)
        return gzip.GzipFile(fileobj=raw, mode="rb")
    raw.seek(0)
    return raw


class _PrefixMap:
    def __init__(self, prefixes: dict[str, str]):
        for name in prefixes:
            if name and not _PN_PREFIX.match(name):
                raise ValueError(f"invalid prefix name: {name!r}")
        # Longest namespace first so the most specific prefix wins.
        self.items = sorted(prefixes.items(), key=lambda kv: (-len(kv[1]), kv[0]))

    def shorten(self, iri: str) -> str:
        for name, ns in self.items:
            if iri.startswith(ns):
                local = iri[len(ns):]
                if _PN_LOCAL.match(local):
                    return f"{name}:{local}"
        return f"<{iri}>"

    def term(self, term) -> str:
        if isinstance(term, IRI):
            return self.shorten(term.value)
        quoted = '"' + escape_ntriples_literal(term.lexical) + '"'
        if term.lang is not None:
            return f"{quoted}@{term.lang}"
        if term.datatype == XSD_STRING:
            return quoted
        return f"{quoted}^^{self.shorten(term.datatype)}"


def _ntriples_lines(triples: list[Triple]) -> Iterator[str]:
    for t in triples:
        yield t.n3() + "\n"


def _turtle_lines(triples: list[Triple], prefixes: dict[str, str]) -> Iterator[str]:
    pm = _PrefixMap(prefixes)
    for name, ns in sorted(prefixes.items()):
        yield f"@prefix {name}: <{ns}> .\n"
    if triples:
        yield "\n"
    prev_s = prev_p = None
    for t in triples:
        verb = "a" if t.predicate.value == RDF_TYPE else pm.shorten(t.predicate.value)
        obj = pm.term(t.object)
        if t.subject == prev_s:
            if t.predicate == prev_p:
                yield f" ,\n        {obj}"
            else:
                yield f" ;\n    {verb} {obj}"
        else:
            if prev_s is not None:
                yield " .\n\n"
            yield f"{pm.shorten(t.subject.value)} {verb} {obj}"
        prev_s, prev_p = t.subject, t.predicate
    if prev_s is not None:
        yield " .\n"


def serialize(
    graph: GraphBuffer | Iterable[Triple],
    fmt: str,
    sink: BinaryIO,
    prefixes: dict[str, str] | None = None,
) -> int:
    """Write triples in canonical (sorted) order and return how many were written.

    The output is a pure function of the triple set (and, for Turtle, the
    prefix map).
    """
    if fmt not in FORMATS:
        raise ValueError(f"unknown format {fmt!r}")
    triples = graph.sorted() if isinstance(graph, GraphBuffer) else sorted(set(graph), key=Triple.sort_key)
    if fmt == "ntriples":
        lines = _ntriples_lines(triples)
    else:
        lines = _turtle_lines(triples, DEFAULT_PREFIXES if prefixes is None else prefixes)
    buf: list[str] = []
    try:
        for line in lines:
            buf.append(line)
            if len(buf) >= 4096:
                sink.write("".join(buf).encode("utf-8"))
                buf.clear()
        if buf:
            sink.write("".join(buf).encode("utf-8"))
    except OSError as exc:
        raise SinkWrite(str(exc)) from exc
    return len(triples)


def serialize_to_string(graph, fmt: str = "ntriples", prefixes=None) -> str:
    out = io.BytesIO()
    serialize(graph, fmt, out, prefixes)
    return out.getvalue().decode("utf-8")


def write_graph(graph, path: str | Path, fmt: str | None = None, prefixes=None) -> int:
    path = Path(path)
    if fmt is None:
        stem = path.name[:-3] if path.name.endswith(".gz") else path.name
        fmt = "turtle" if stem.endswith(".ttl") else "ntriples"
    with open_sink(path) as sink:
        return serialize(graph, fmt, sink, prefixes)


# -- parsing ---------------------------------------------------------------

_TOKEN = re.compile(
    r"""
    (?P<ws>[ \t\r\n]+)
  | (?P<comment>\#[^\n]*)
  | (?P<iri><[^<>"{}|^`\\\x00-\x20]*>)
  | (?P<string>"(?:[^"\\\n\r]|\\.)*")
  | (?P<lang>@[A-Za-z]+(?:-[A-Za-z0-9]+)*)
  | (?P<dtype>\^\^)
  | (?P<pname>(?:[A-Za-z][A-Za-z0-9_\-]*)?:(?:[A-Za-z0-9_](?:[A-Za-z0-9_\-]*[A-Za-z0-9_])?)?)
  | (?P<a>a(?=[\s<"]))
  | (?P<punct>[.;,])
    """,
    re.VERBOSE,
)

_PREFIX_DIRECTIVE = re.compile(r"@prefix\s+([A-Za-z][A-Za-z0-9_\-]*)?:\s*<([^<>\s]*)>\s*\.")

_UNESCAPE = re.compile(r"\\(?:u([0-9A-Fa-f]{4})|U([0-9A-Fa-f]{8})|(.))", re.DOTALL)
_SIMPLE = {"t": "\t", "n": "\n", "r": "\r", "b": "\b", "f": "\f", '"': '"', "'": "'", "\\": "\\"}


def _unescape(body: str, line: int | None) -> str:
    def repl(m):
        if m.group(1) or m.group(2):
            return chr(int(m.group(1) or m.group(2), 16))
        ch = m.group(3)
        if ch not in _SIMPLE:
            raise ParseError(f"bad escape \\{ch}", line)
        return _SIMPLE[ch]

    return _UNESCAPE.sub(repl, body)


def _tokens(text: str, line: int | None) -> list[tuple[str, str]]:
    out = []
    pos = 0
    while pos < len(text):
        at_statement_start = not out or out[-1][0] == "prefix" or out[-1] == ("punct", ".")
        if at_statement_start and text.startswith("@prefix", pos):
            m = _PREFIX_DIRECTIVE.match(text, pos)
            if not m:
                raise ParseError("malformed @prefix directive", line)
            out.append(("prefix", (m.group(1) or "", m.group(2))))
            pos = m.end()
            continue
        m = _TOKEN.match(text, pos)
        if not m:
            raise ParseError(f"unexpected input {text[pos:pos + 20]!r}", line)
        kind = m.lastgroup
        if kind not in ("ws", "comment"):
            out.append((kind, m.group()))
        pos = m.end()
    return out


class _StatementParser:
    def __init__(self, prefixes: dict[str, str], allow_abbrev: bool):
        self.prefixes = dict(prefixes)
        self.allow_abbrev = allow_abbrev

    def _iri(self, tok, line) -> IRI:
        kind, value = tok
        if kind == "iri":
            return IRI(value[1:-1])
        if kind == "pname" and self.allow_abbrev:
            name, _, local = value.partition(":")
            if name not in self.prefixes:
                raise ParseError(f"undeclared prefix {name!r}", line)
            return IRI(self.prefixes[name] + local)
        if kind == "a" and self.allow_abbrev:
            return IRI(RDF_TYPE)
        raise ParseError(f"expected IRI, got {value!r}", line)

    def parse(self, tokens, line=None) -> Iterator[Triple]:
        i = 0
        n = len(tokens)

        def peek():
            return tokens[i] if i < n else ("eof", "")

        while i < n:
            if tokens[i][0] == "prefix":
                if not self.allow_abbrev:
                    raise ParseError("@prefix not allowed in N-Triples", line)
                name, ns = tokens[i][1]
                self.prefixes[name] = ns
                i += 1
                continue
            subject = self._iri(tokens[i], line)
            i += 1
            while True:
                predicate = self._iri(peek(), line)
                i += 1
                while True:
                    tok = peek()
                    i += 1
                    if tok[0] == "string":
                        lexical = _unescape(tok[1][1:-1], line)
                        nxt = peek()
                        if nxt[0] == "lang":
                            i += 1
                            obj = Literal(lexical, lang=nxt[1][1:])
                        elif nxt[0] == "dtype":
                            i += 1
                            dt = self._iri(peek(), line)
                            i += 1
                            obj = Literal(lexical, dt.value)
                        else:
                            obj = Literal(lexical)
                    else:
                        obj = self._iri(tok, line)
                    yield Triple(subject, predicate, obj)
                    if self.allow_abbrev and peek() == ("punct", ","):
                        i += 1
                        continue
                    break
                if self.allow_abbrev and peek() == ("punct", ";"):
                    i += 1
                    if peek() == ("punct", "."):
                        break
                    continue
                break
            if peek() != ("punct", "."):
                raise ParseError(f"expected '.', got {peek()[1]!r}", line)
            i += 1


def parse_ntriples(lines: Iterable[str]) -> Iterator[Triple]:
    """Parse N-Triples one line at a time (lines split on LF only)."""
    parser = _StatementParser({}, allow_abbrev=False)
    for lineno, line in enumerate(lines, 1):
        tokens = _tokens(line, lineno)
        if tokens:
            try:
                yield from parser.parse(tokens, lineno)
            except InvalidTerm as exc:
                raise ParseError(str(exc), lineno) from None


def parse_turtle(text: str) -> Iterator[Triple]:
    parser = _StatementParser({}, allow_abbrev=True)
    try:
        yield from parser.parse(_tokens(text, None))
    except InvalidTerm as exc:
        raise ParseError(str(exc), None) from None


def parse(text: str, fmt: str = "ntriples") -> list[Triple]:
    if fmt == "ntriples":
        return list(parse_ntriples(text.split("\n")))
    if fmt == "turtle":
        return list(parse_turtle(text))
    raise ValueError(f"unknown format {fmt!r}")


def read_graph(path: str | Path, fmt: str | None = None) -> GraphBuffer:
    """Load an ``.nt`` or ``.ttl`` file (optionally gzip-compressed) into a graph."""
    path = Path(path)
    stem = path.name[:-3] if path.name.endswith(".gz") else path.name
    fmt = fmt or ("turtle" if stem.endswith(".ttl") else "ntriples")
    graph = GraphBuffer()
    with open_source(path) as raw:
        text = io.TextIOWrapper(raw, encoding="utf-8", newline="\n")
        if fmt == "ntriples":
            graph.update(parse_ntriples(line.rstrip("\n") for line in text))
        else:
            graph.update(parse_turtle(text.read()))
    return graph
