"""Markdown stripping, string normalization and fuzzy similarity.

Everything here is pure and stateless, so the functions are safe to call
from any number of worker threads.
"""

from __future__ import annotations

import re
import unicodedata
from dataclasses import dataclass

from .errors import EmptyTitle

__all__ = [
    "NormalizedString",
    "strip_markdown",
    "normalize",
    "title_variants",
    "levenshtein",
    "fuzzy_similarity",
]


# -- markdown --------------------------------------------------------------

_FENCE = re.compile(r"^[ \t]{0,3}(`{3,}|~{3,})[^\n]*\n?", re.MULTILINE)
_IMAGE = re.compile(r"!\[([^\[\]]*)\]\([^()\s]*(?:\s+\"[^\"]*\")?\)")
_LINK = re.compile(r"\[([^\[\]]*)\]\([^()\s]*(?:\s+\"[^\"]*\")?\)")
_AUTOLINK = re.compile(r"<((?:https?|ftp|mailto):[^<>\s]+)>")
_INLINE_CODE = re.compile(r"(`+)(?=[^`\n])(.+?)(?<=[^`\n])\1(?!`)")
_STRONG = re.compile(r"(\*\*|__)(?=\S)(.+?)(?<=\S)\1")
_STRIKE = re.compile(r"~~(?=\S)(.+?)(?<=\S)~~")
_EM_STAR = re.compile(r"\*(?=[^\s*])(.+?)(?<=[^\s*])\*")
_EM_UNDER = re.compile(r"(?<![A-Za-z0-9_])_(?=[^\s_])(.+?)(?<=[^\s_])_(?![A-Za-z0-9_])")
_HEADING = re.compile(r"^[ \t]{0,3}#{1,6}(?:[ \t]+|$)", re.MULTILINE)
_HEADING_TAIL = re.compile(r"[ \t]+#+[ \t]*$", re.MULTILINE)
_RULE = re.compile(r"^[ \t]{0,3}([-*_])(?:[ \t]*\1){2,}[ \t]*$\n?", re.MULTILINE)
_BLOCKQUOTE = re.compile(r"^[ \t]{0,3}>[ \t]?", re.MULTILINE)
_BULLET = re.compile(r"^([ \t]*)(?:[-*+]|\d{1,9}[.)])[ \t]+", re.MULTILINE)

# Each rule only ever deletes characters, so iterating to a fixed point
# terminates and makes the conversion idempotent.
_RULES = (
    (_FENCE, ""),
    (_RULE, ""),
    (_IMAGE, r"\1"),
    (_LINK, r"\1"),
    (_AUTOLINK, r"\1"),
    (_INLINE_CODE, r"\2"),
    (_HEADING, ""),
    (_HEADING_TAIL, ""),
    (_BLOCKQUOTE, ""),
    (_BULLET, r"\1"),
    (_STRONG, r"\2"),
    (_STRIKE, r"\1"),
    (_EM_STAR, r"\1"),
    (_EM_UNDER, r"\1"),
)


def strip_markdown(text: str) -> str:
    """Convert the markdown subset used in dump descriptions to plain text.

    Emphasis, strike-through, inline code, headings, list bullets,
    blockquotes and horizontal rules are removed; links and images collapse
    to their label or alt text; fenced code keeps its content without the
    fences. Non-markdown content (LaTeX, HTML) is left untouched.
    """
    previous = None
    while text != previous:
        previous = text
        for pattern, repl in _RULES:
            text = pattern.sub(repl, text)
    return text


# -- normalization ---------------------------------------------------------


@dataclass(frozen=True)
class NormalizedString:
    value: str
    source: str

    def __str__(self) -> str:
        return self.value


_WS = re.compile(r"\s+")


def _fold(text: str) -> str:
    decomposed = unicodedata.normalize("NFD", text)
    stripped = "".join(c for c in decomposed if unicodedata.category(c) != "Mn")
    return unicodedata.normalize("NFC", stripped)


def _strip_punctuation(text: str) -> str:
    out = []
    last = len(text) - 1
    for i, ch in enumerate(text):
        if not unicodedata.category(ch).startswith("P"):
            out.append(ch)
        elif ch == "-" and 0 < i < last and text[i - 1].isalnum() and text[i + 1].isalnum():
            out.append(ch)
    return "".join(out)


def _normalize_value(text: str, fold_diacritics: bool) -> str:
    text = unicodedata.normalize("NFC", text)
    if fold_diacritics:
        text = _fold(text)
    text = unicodedata.normalize("NFC", text.casefold())
    text = _strip_punctuation(text)
    return _WS.sub(" ", text).strip()


def normalize(text: str, *, fold_diacritics: bool = False) -> NormalizedString:
    """NFC, case-fold, drop punctuation (intra-word hyphens survive), collapse whitespace.

    >>> normalize("  ACL   2020 ").value
    'acl 2020'
    """
    value = _normalize_value(text, fold_diacritics)
    # casefold can expose characters whose own casefold differs (e.g. some
    # Greek and ligature forms); iterate so the result is a fixed point.
    while True:
        again = _normalize_value(value, fold_diacritics)
        if again == value:
            break
        value = again
    return NormalizedString(value, text)


_BRACKETED = re.compile(r"\([^()]*\)|\[[^\[\]]*\]|\{[^{}]*\}")


def _drop_brackets(text: str) -> str:
    previous = None
    while text != previous:
        previous = text
        text = _BRACKETED.sub(" ", text)
    return text


def title_variants(title: str) -> list[str]:
    """Search variants of a paper title, most specific first.

    The order is: full title, title without subtitle (text after the first
    colon), title without bracketed spans, and both reductions combined.
    Empty and duplicate variants are dropped.
    """
    head = normalize(title).value
    if not head:
        raise EmptyTitle(repr(title))
    no_subtitle = title.split(":", 1)[0]
    candidates = [
        head,
        normalize(no_subtitle).value,
        normalize(_drop_brackets(title)).value,
        normalize(_drop_brackets(no_subtitle)).value,
    ]
    variants: list[str] = []
    for candidate in candidates:
        if candidate and candidate not in variants:
            variants.append(candidate)
    return variants


# -- similarity ------------------------------------------------------------


def levenshtein(a: str, b: str) -> int:
    """Edit distance with unit insert/delete/substitute costs (two-row DP)."""
    if len(a) < len(b):
        a, b = b, a
    previous = list(range(len(b) + 1))
    for i, ca in enumerate(a, 1):
        current = [i]
        for j, cb in enumerate(b, 1):
            current.append(min(
                previous[j] + 1,
                current[j - 1] + 1,
                previous[j - 1] + (ca != cb),
            ))
        previous = current
    return previous[-1]


def fuzzy_similarity(a: str, b: str) -> float:
    """Normalized Levenshtein similarity in [0, 1]; inputs should be normalized already."""
    longest = max(len(a), len(b))
    if longest == 0:
        return 1.0
    return 1.0 - levenshtein(a, b) / longest
