"""Lexical style metrics: vocabulary diversity, cross-text repetition, and
word-frequency profiles with cosine comparison."""

from __future__ import annotations

import math
from collections import Counter
from dataclasses import dataclass
from functools import lru_cache
from importlib import resources
from typing import IO, Iterable, Mapping, Sequence

from .lexicon import normalize_token
from .scansion import WORD_RE

STOPWORDS_VERSION = "stopwords-en-v1"
IMAGERY_VERSION = "imagery-en-v1"

PROFILE_BASES = ("all", "content", "opening-words", "imagery")


@dataclass(frozen=True)
class TokenStream:
    """Lowercased word tokens of a text, with the stopword-free subset."""

    tokens: tuple[str, ...]
    content_tokens: tuple[str, ...]

    @property
    def types(self) -> frozenset[str]:
        return frozenset(self.tokens)

    @property
    def content_types(self) -> frozenset[str]:
        return frozenset(self.content_tokens)


def load_word_list(source: str | IO[str]) -> frozenset[str]:
    """Load a newline-delimited word file; blank lines are skipped."""
    if hasattr(source, "read"):
        text = source.read()
    else:
        with open(source, encoding="utf-8") as fh:
            text = fh.read()
    return frozenset(w.strip().lower() for w in text.splitlines() if w.strip())


@lru_cache(maxsize=1)
def default_stopwords() -> frozenset[str]:
    text = resources.files("poemetric.data").joinpath("stopwords_v1.txt").read_text("utf-8")
    return frozenset(w for w in text.split() if w)


@lru_cache(maxsize=1)
def default_imagery_lexicon() -> frozenset[str]:
    text = resources.files("poemetric.data").joinpath("imagery_v1.txt").read_text("utf-8")
    return frozenset(w for w in text.split() if w)


def tokenize(text: str, stopwords: frozenset[str] | None = None) -> TokenStream:
    if stopwords is None:
        stopwords = default_stopwords()
    tokens = tuple(normalize_token(t).lower() for t in WORD_RE.findall(text))
    content = tuple(t for t in tokens if t not in stopwords)
    return TokenStream(tokens=tokens, content_tokens=content)


def mattr(tokens: Sequence[str], window: int = 50) -> float:
    """Moving-average type-token ratio over sliding windows of exact size.

    Streams no longer than the window fall back to the plain type-token
    ratio. The result always lies in (0, 1].
    """
    if window < 1:
        raise ValueError(f"window must be positive, got {window}")
    n = len(tokens)
    if n == 0:
        raise ValueError("cannot compute MATTR of an empty token stream")
    if n <= window:
        return len(set(tokens)) / n
    counts: Counter[str] = Counter(tokens[:window])
    distinct_sum = len(counts)
    for start in range(1, n - window + 1):
        out_tok = tokens[start - 1]
        counts[out_tok] -= 1
        if counts[out_tok] == 0:
            del counts[out_tok]
        in_tok = tokens[start + window - 1]
        counts[in_tok] += 1
        distinct_sum += len(counts)
    return distinct_sum / ((n - window + 1) * window)


def repetition_rate(candidate: TokenStream, reference: TokenStream) -> float:
    """Fraction of the candidate's content vocabulary reused from the reference."""
    cand = candidate.content_types
    if not cand:
        raise ValueError("candidate has no content tokens")
    return len(cand & reference.content_types) / len(cand)


@dataclass(frozen=True)
class FrequencyProfile:
    basis: str
    counts: Mapping[str, int]

    @property
    def total(self) -> int:
        return sum(self.counts.values())


def frequency_profile(
    texts: Iterable[str],
    basis: str = "content",
    stopwords: frozenset[str] | None = None,
    imagery: frozenset[str] | None = None,
) -> FrequencyProfile:
    """Aggregate word counts over texts on one of four bases.

    "all" counts every token, "content" drops stopwords, "opening-words"
    keeps only each line's first token, and "imagery" keeps tokens from the
    imagery lexicon.
    """
    if basis not in PROFILE_BASES:
        raise ValueError(f"unknown basis {basis!r}: expected one of {list(PROFILE_BASES)}")
    if imagery is None and basis == "imagery":
        imagery = default_imagery_lexicon()
    counts: Counter[str] = Counter()
    for text in texts:
        if basis == "opening-words":
            for line in text.splitlines():
                words = WORD_RE.findall(line)
                if words:
                    counts[normalize_token(words[0]).lower()] += 1
            continue
        stream = tokenize(text, stopwords=stopwords)
        if basis == "all":
            counts.update(stream.tokens)
        elif basis == "content":
            counts.update(stream.content_tokens)
        else:
            counts.update(t for t in stream.tokens if t in imagery)
    return FrequencyProfile(basis=basis, counts=dict(counts))


def _as_counts(profile: FrequencyProfile | Mapping[str, int]) -> Mapping[str, int]:
    if isinstance(profile, FrequencyProfile):
        return profile.counts
    return profile


def cosine_similarity(
    a: FrequencyProfile | Mapping[str, int],
    b: FrequencyProfile | Mapping[str, int],
) -> float:
    """Cosine of the angle between two count vectors over their joint vocabulary."""
    ca, cb = _as_counts(a), _as_counts(b)
    norm_a = math.sqrt(sum(v * v for v in ca.values()))
    norm_b = math.sqrt(sum(v * v for v in cb.values()))
    if norm_a == 0.0 or norm_b == 0.0:
        raise ValueError("cosine similarity is undefined for an all-zero profile")
    dot = sum(v * cb.get(k, 0) for k, v in ca.items())
    return dot / (norm_a * norm_b)
