"""Tokenization, rule-based part-of-speech tagging, and entity extraction.

Entities are the noun and number tokens of the corpus, ranked by total
occurrence count and capped at the k most frequent. Each entity carries a
posting list of the example ids that contain it.
"""

from __future__ import annotations

import re
import unicodedata
from collections import Counter
from dataclasses import dataclass
from importlib import resources
from typing import Iterator, NamedTuple

from .corpus import Corpus

DEFAULT_K_CAP = 2000
MIN_WORD_CHARS = 2  # single-letter word entities are noise; numbers are exempt

WORD = "WORD"
NUMBER = "NUMBER"

NOUN = "NOUN"
OTHER = "OTHER"

# Maximal runs of letters/digits; internal hyphens and apostrophes glue runs
# together ("covid-19", "don't"), everything else splits.
_TOKEN_RE = re.compile(r"[^\W_]+(?:['-][^\W_]+)*")
_NUMBER_RE = re.compile(r"[0-9]+(\.[0-9]+)?")


class ExtractionError(Exception):
    pass


class Token(NamedTuple):
    surface: str
    kind: str  # WORD or NUMBER


def tokenize(text: str) -> list[Token]:
    """Split text into lowercased tokens after NFC normalization."""
    normalized = unicodedata.normalize("NFC", text).lower()
    tokens = []
    for match in _TOKEN_RE.finditer(normalized):
        surface = match.group()
        kind = NUMBER if _NUMBER_RE.fullmatch(surface) else WORD
        tokens.append(Token(surface, kind))
    return tokens


def _load_wordlist(filename: str) -> frozenset[str]:
    text = resources.files("texthist.data").joinpath(filename).read_text("utf-8")
    entries = set()
    for line in text.splitlines():
        line = line.strip()
        if line and not line.startswith("#"):
            entries.add(line)
    return frozenset(entries)


class RuleTagger:
    """Deterministic reference tagger over the bundled word lists.

    Stopwords and function words map to OTHER; words with a verb/adjective
    suffix map to OTHER unless whitelisted; everything else is a noun.
    The suffix rule only fires when the stem keeps at least 3 characters,
    so short words like "king" or "red" are never stripped.
    """

    def __init__(self):
        self.stopwords = _load_wordlist("stopwords.txt")
        self.suffixes = tuple(
            sorted(_load_wordlist("excluded_suffixes.txt"), key=len, reverse=True)
        )
        self.whitelist = _load_wordlist("suffix_noun_whitelist.txt")

    def tag_word(self, surface: str) -> str:
        if surface in self.stopwords:
            return OTHER
        if surface not in self.whitelist:
            for suffix in self.suffixes:
                if surface.endswith(suffix) and len(surface) >= len(suffix) + 3:
                    return OTHER
        return NOUN


_default_tagger: RuleTagger | None = None


def default_tagger() -> RuleTagger:
    global _default_tagger
    if _default_tagger is None:
        _default_tagger = RuleTagger()
    return _default_tagger


def classify_pos(tokens: list[Token], tagger: RuleTagger | None = None) -> list[str]:
    """Map each token to NOUN, NUMBER, or OTHER. Total and deterministic."""
    if tagger is None:
        tagger = default_tagger()
    return [
        NUMBER if tok.kind == NUMBER else tagger.tag_word(tok.surface)
        for tok in tokens
    ]


@dataclass(frozen=True)
class Entity:
    id: int
    surface: tuple[str, ...]
    frequency: int
    postings: tuple[int, ...]

    @property
    def surface_text(self) -> str:
        return " ".join(self.surface)


class EntityTable:
    """Entities sorted by (frequency desc, surface asc), unique surfaces."""

    def __init__(self, entities: list[Entity], k_cap: int):
        self.entities: tuple[Entity, ...] = tuple(entities)
        self.k_cap = k_cap
        self._by_id = {e.id: e for e in self.entities}
        self._by_surface = {e.surface: e for e in self.entities}

    def __len__(self) -> int:
        return len(self.entities)

    def __iter__(self) -> Iterator[Entity]:
        return iter(self.entities)

    def __contains__(self, entity_id: int) -> bool:
        return entity_id in self._by_id

    def get(self, entity_id: int) -> Entity:
        if entity_id not in self._by_id:
            raise KeyError(f"no entity with id {entity_id}")
        return self._by_id[entity_id]

    def find(self, surface: tuple[str, ...]) -> Entity | None:
        return self._by_surface.get(surface)


def extract_entities(
    corpus: Corpus,
    k_cap: int = DEFAULT_K_CAP,
    tagger: RuleTagger | None = None,
) -> EntityTable:
    """Build the top-k entity table over unigram noun/number tokens.

    Frequency counts every token occurrence; postings hold the distinct
    example ids containing the token. Ties at the cap break lexicographically.
    """
    if k_cap < 1:
        raise ValueError(f"k_cap must be >= 1, got {k_cap}")
    if tagger is None:
        tagger = default_tagger()

    frequencies: Counter[str] = Counter()
    postings: dict[str, set[int]] = {}
    for example in corpus.examples:
        tokens = tokenize(example.text)
        for token, pos in zip(tokens, classify_pos(tokens, tagger)):
            if pos == OTHER:
                continue
            if pos == NOUN and len(token.surface) < MIN_WORD_CHARS:
                continue
            frequencies[token.surface] += 1
            postings.setdefault(token.surface, set()).add(example.id)

    if not frequencies:
        raise ExtractionError("corpus yields zero entities")

    ranked = sorted(frequencies.items(), key=lambda item: (-item[1], item[0]))
    entities = [
        Entity(
            id=i,
            surface=(surface,),
            frequency=freq,
            postings=tuple(sorted(postings[surface])),
        )
        for i, (surface, freq) in enumerate(ranked[:k_cap])
    ]
    return EntityTable(entities, k_cap)
