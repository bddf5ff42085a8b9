"""Word frequencies, head/tail-breaks word sizing and document structure counts."""

from __future__ import annotations

import re
from collections import Counter
from dataclasses import dataclass
from typing import Iterable, Optional

from .errors import EmptySeriesError
from .htb import head_tail_breaks

# a terminator only ends a sentence at the end of a whitespace token, so "3.14" stays whole
_TERMINATORS = re.compile(r"[.!?]+(?=\s|$)")
_BLANK_LINE = re.compile(r"\n\s*\n")


def _strip_edges(word: str) -> str:
    start, end = 0, len(word)
    while start < end and not word[start].isalnum():
        start += 1
    while end > start and not word[end - 1].isalnum():
        end -= 1
    return word[start:end]


def tokenize(text: str) -> list[str]:
    """Lowercased whitespace tokens with leading/trailing punctuation removed."""
    tokens = (_strip_edges(w) for w in text.lower().split())
    return [t for t in tokens if t]


@dataclass(frozen=True)
class FrequencyRow:
    token: str
    frequency: int
    rank: int


@dataclass(frozen=True)
class FrequencyTable:
    rows: tuple[FrequencyRow, ...]

    def __len__(self):
        return len(self.rows)

    def __iter__(self):
        return iter(self.rows)

    @property
    def frequencies(self) -> list[int]:
        return [r.frequency for r in self.rows]


def word_frequencies(tokens: Iterable[str]) -> FrequencyTable:
    counts = Counter(tokens)
    # Counter preserves first-insertion order, and sorted() is stable
    ordered = sorted(counts.items(), key=lambda kv: -kv[1])
    return FrequencyTable(tuple(FrequencyRow(t, f, r) for r, (t, f) in enumerate(ordered, start=1)))


@dataclass(frozen=True)
class WordLevel:
    token: str
    frequency: int
    level: int
    size: float


def word_levels(ft: FrequencyTable, head_limit: float = 0.40, max_levels: Optional[int] = None,
                base_size: float = 10.0, growth: float = 1.8) -> list[WordLevel]:
    """Head/tail-breaks level of every word and its display size.

    Size grows geometrically with level: ``base_size * growth**(level - 1)``.
    """
    if len(ft) == 0:
        raise EmptySeriesError("frequency table is empty")
    res = head_tail_breaks(ft.frequencies, head_limit, max_levels)
    return [
        WordLevel(row.token, row.frequency, lvl, base_size * growth ** (lvl - 1))
        for row, lvl in zip(ft.rows, res.assignments)
    ]


@dataclass(frozen=True)
class StructureProfile:
    sections: int
    paragraphs: int
    sentences: int
    words: int


def structure_profile(text: str, section_marker: Optional[str] = None) -> StructureProfile:
    """Count sections, paragraphs, sentences and words.

    Paragraphs are blank-line separated blocks and sentences are runs ended
    by ``.``, ``!`` or ``?``; both must contain at least one token.  Sections are
    regex matches of ``section_marker`` (multiline mode) when one is given.
    """
    paragraphs = [p for p in _BLANK_LINE.split(text) if tokenize(p)]
    sentences = sum(1 for p in paragraphs for s in _TERMINATORS.split(p) if tokenize(s))
    sections = len(re.findall(section_marker, text, flags=re.MULTILINE)) if section_marker else 0
    return StructureProfile(sections, len(paragraphs), sentences, len(tokenize(text)))
