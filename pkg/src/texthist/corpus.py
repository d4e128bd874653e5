"""Immutable text corpora: loading, validation, and id-based access.

A corpus is an ordered list of examples with dense 0-based ids. The
source digest is a content hash over the ordered example texts, so two
corpora are interchangeable exactly when their texts match byte for byte.
"""

from __future__ import annotations

import csv
import hashlib
import json
import struct
from dataclasses import dataclass
from pathlib import Path

CORPUS_FORMATS = ("jsonl", "csv", "txt-lines")
_FORMAT_ALIASES = {"txt": "txt-lines"}

DEFAULT_MAX_EXAMPLES = 1_000_000


class CorpusError(Exception):
    """Unreadable file, malformed row, or an otherwise unusable corpus."""


@dataclass(frozen=True)
class Example:
    id: int
    text: str


class Corpus:
    """Ordered, immutable collection of text examples."""

    def __init__(self, texts: list[str], name: str = "corpus"):
        if not texts:
            raise CorpusError("corpus has no usable examples")
        self.examples: tuple[Example, ...] = tuple(
            Example(i, t) for i, t in enumerate(texts)
        )
        self.name = name
        self.source_digest = compute_digest(texts)

    def __len__(self) -> int:
        return len(self.examples)

    def get_examples(self, ids: list[int]) -> list[Example]:
        """Return examples for the given ids, preserving the given order."""
        n = len(self.examples)
        out = []
        for i in ids:
            if not 0 <= i < n:
                raise IndexError(f"example id {i} out of range [0, {n})")
            out.append(self.examples[i])
        return out


def compute_digest(texts: list[str]) -> str:
    """SHA-256 over length-prefixed UTF-8 texts in order (format-independent)."""
    h = hashlib.sha256()
    for t in texts:
        raw = t.encode("utf-8")
        h.update(struct.pack(">Q", len(raw)))
        h.update(raw)
    return h.hexdigest()


def load_corpus(
    path: str | Path,
    format: str = "jsonl",
    name: str | None = None,
    max_examples: int = DEFAULT_MAX_EXAMPLES,
) -> Corpus:
    """Load a corpus file; blank or whitespace-only rows are skipped.

    jsonl rows must carry a "text" field, csv needs a "text" column
    (comma-delimited, double-quote escaping, first row is the header),
    and txt treats each non-blank line as one example.
    """
    path = Path(path)
    format = _FORMAT_ALIASES.get(format, format)
    if format not in CORPUS_FORMATS:
        raise CorpusError(f"unknown corpus format {format!r}; expected one of {CORPUS_FORMATS}")
    try:
        raw = path.read_text(encoding="utf-8")
    except OSError as exc:
        raise CorpusError(f"cannot read corpus file {path}: {exc}") from exc

    if format == "jsonl":
        texts = _parse_jsonl(raw)
    elif format == "csv":
        texts = _parse_csv(raw)
    else:
        texts = [line for line in raw.splitlines() if line.strip()]

    if not texts:
        raise CorpusError(f"corpus file {path} contains zero usable examples")
    if len(texts) > max_examples:
        raise CorpusError(
            f"corpus has {len(texts)} examples, above the {max_examples} cap; "
            "raise max_examples if this is intentional"
        )
    return Corpus(texts, name=name if name is not None else path.stem)


def _parse_jsonl(raw: str) -> list[str]:
    texts = []
    for lineno, line in enumerate(raw.splitlines(), start=1):
        if not line.strip():
            continue
        try:
            row = json.loads(line)
        except json.JSONDecodeError as exc:
            raise CorpusError(f"malformed jsonl at line {lineno}: {exc}") from exc
        if not isinstance(row, dict) or "text" not in row:
            raise CorpusError(f"jsonl row at line {lineno} is missing the \"text\" field")
        text = row["text"]
        if not isinstance(text, str):
            raise CorpusError(f"jsonl row at line {lineno} has a non-string \"text\" field")
        if text.strip():
            texts.append(text)
    return texts


def _parse_csv(raw: str) -> list[str]:
    reader = csv.DictReader(raw.splitlines())
    if reader.fieldnames is None or "text" not in reader.fieldnames:
        raise CorpusError("csv corpus is missing a \"text\" column in the header")
    texts = []
    for lineno, row in enumerate(reader, start=2):
        text = row.get("text")
        if text is None:
            raise CorpusError(f"csv row at line {lineno} has no value in the \"text\" column")
        if text.strip():
            texts.append(text)
    return texts
