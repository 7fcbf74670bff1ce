"""Keyword text model and negative-keyword match semantics.

Search queries and bidding keywords are both short token sequences.  A negative
keyword blocks a query according to its match type:

* ``EXACT``  -- the query is exactly the negative's token sequence;
* ``PHRASE`` -- the negative's tokens occur as a contiguous run inside the query;
* ``LARGE``  -- every distinct word of the negative occurs somewhere in the query,
  regardless of order or repetition.

Each type blocks at least everything the previous one blocks, so permissiveness
strictly increases from exact to large.  All text is normalized to lowercase
whitespace-separated tokens; hyphens are kept inside a token ("tee-shirt" stays
one word).
"""

from __future__ import annotations

from dataclasses import dataclass
from enum import Enum
from functools import total_ordering
from typing import Iterable

from .errors import EmptyKeywordError


@dataclass(frozen=True, order=True)
class Keyword:
    """An immutable, normalized token sequence."""

    words: tuple[str, ...]

    @property
    def text(self) -> str:
        return " ".join(self.words)

    def __str__(self) -> str:
        return self.text


def normalize(text: str) -> Keyword:
    """Lowercase and whitespace-split ``text`` into a Keyword.

    Raises EmptyKeywordError when no tokens remain.  Idempotent on its own
    output: normalize(k.text) == k.
    """
    tokens = tuple(text.lower().split())
    if not tokens:
        raise EmptyKeywordError(f"keyword text has no tokens: {text!r}")
    return Keyword(tokens)


def word_set(keyword: Keyword) -> frozenset[str]:
    """The set of distinct words of a keyword."""
    return frozenset(keyword.words)


def subword_set(keyword: Keyword) -> frozenset[tuple[str, ...]]:
    """All contiguous sub-sequences of the keyword's tokens, of length >= 1."""
    words = keyword.words
    n = len(words)
    return frozenset(words[i:j] for i in range(n) for j in range(i + 1, n + 1))


@total_ordering
class MatchType(Enum):
    """Negative keyword match type, in canonical (least permissive first) order."""

    EXACT = "exact"
    PHRASE = "phrase"
    LARGE = "large"

    @property
    def rank(self) -> int:
        return _MATCH_RANK[self]

    def __lt__(self, other: "MatchType") -> bool:
        if not isinstance(other, MatchType):
            return NotImplemented
        return self.rank < other.rank


_MATCH_RANK = {MatchType.EXACT: 0, MatchType.PHRASE: 1, MatchType.LARGE: 2}


@dataclass(frozen=True)
class NegativeKeyword:
    """A keyword paired with the match type under which it blocks queries."""

    keyword: Keyword
    match: MatchType

    def sort_key(self) -> tuple[int, tuple[str, ...]]:
        return (self.match.rank, self.keyword.words)

    def describe(self) -> str:
        return f"[{self.match.value}] {self.keyword.text}"


def exact_matches(query: Keyword, keyword: Keyword) -> bool:
    return query.words == keyword.words


def phrase_matches(query: Keyword, keyword: Keyword) -> bool:
    """True when ``keyword`` occurs as a contiguous token run inside ``query``."""
    needle = keyword.words
    hay = query.words
    k = len(needle)
    if k > len(hay):
        return False
    return any(hay[i : i + k] == needle for i in range(len(hay) - k + 1))


def large_matches(query: Keyword, keyword: Keyword) -> bool:
    """True when every distinct word of ``keyword`` appears in ``query``."""
    return word_set(keyword) <= word_set(query)


def matches(query: Keyword, negative: NegativeKeyword) -> bool:
    """Does ``negative`` block ``query``?"""
    if negative.match is MatchType.EXACT:
        return exact_matches(query, negative.keyword)
    if negative.match is MatchType.PHRASE:
        return phrase_matches(query, negative.keyword)
    return large_matches(query, negative.keyword)


def exact(keyword: Keyword) -> NegativeKeyword:
    return NegativeKeyword(keyword, MatchType.EXACT)


def phrase(keyword: Keyword) -> NegativeKeyword:
    return NegativeKeyword(keyword, MatchType.PHRASE)


def large(keyword: Keyword) -> NegativeKeyword:
    return NegativeKeyword(keyword, MatchType.LARGE)


def distinct_keywords(keywords: Iterable[Keyword]) -> None:
    """Raise when the iterable repeats a keyword; used at rule ingestion."""
    from .errors import DuplicateKeywordError

    seen: set[Keyword] = set()
    for kw in keywords:
        if kw in seen:
            raise DuplicateKeywordError(f"duplicate keyword: {kw.text!r}")
        seen.add(kw)
