"""Stress-pattern extraction for poem lines and matching against meter templates.

Patterns are strings over three symbols: 'u' (unstressed), 'S' (stressed),
'*' (indeterminate). '*' agrees with anything when matching.
"""

from __future__ import annotations

import re
from dataclasses import dataclass, field
from typing import NamedTuple, Sequence

from .lexicon import PronouncingLexicon, RhymeFoot, fallback_syllabify, normalize_token, rhyme_foot_of

WORD_RE = re.compile(r"[A-Za-z]+(?:['’-][A-Za-z]+)*")

# Registered meters, each a cycle of per-line patterns. All are single-line
# except common meter, which alternates 8- and 6-syllable iambic lines.
METER_REGISTRY: dict[str, tuple[str, ...]] = {
    "iambic pentameter": ("uS" * 5,),
    "iambic tetrameter": ("uS" * 4,),
    "iambic trimeter": ("uS" * 3,),
    "trochaic tetrameter": ("Su" * 4,),
    "anapestic trimeter": ("uuS" * 3,),
    "common meter": ("uS" * 4, "uS" * 3),
}


class MeterLineMatch(NamedTuple):
    matched: bool
    agreement: float


@dataclass(frozen=True)
class MeterTemplate:
    """A named meter as a cycle of per-line {u,S} patterns."""

    name: str
    line_patterns: tuple[str, ...]

    @property
    def pattern(self) -> str:
        return self.line_patterns[0]

    @property
    def length(self) -> int:
        return len(self.line_patterns[0])

    def pattern_for_line(self, line_index: int) -> str:
        return self.line_patterns[line_index % len(self.line_patterns)]


@dataclass(frozen=True)
class LineScansion:
    """Scansion of one line: normalized tokens, stress pattern, end-word rhyme feet."""

    line_index: int
    tokens: tuple[str, ...]
    pattern: str
    end_feet: tuple[RhymeFoot, ...] = field(default=())

    @property
    def end_foot(self) -> RhymeFoot | None:
        return self.end_feet[0] if self.end_feet else None

    @property
    def syllable_count(self) -> int:
        return len(self.pattern)


def _normalize_meter_name(name: str) -> str:
    return re.sub(r"[\s_\-]+", " ", name.strip().lower())


def _parse_literal(text: str) -> tuple[str, ...] | None:
    parts = text.split()
    if not parts:
        return None
    patterns = []
    for part in parts:
        mapped = []
        for ch in part:
            if ch.lower() == "u":
                mapped.append("u")
            elif ch.lower() == "s":
                mapped.append("S")
            else:
                return None
        patterns.append("".join(mapped))
    return tuple(patterns)


def expected_pattern(meter_name_or_literal: str) -> MeterTemplate:
    """Resolve a registry name or a literal {u,S} pattern into a MeterTemplate.

    A literal may contain several space-separated per-line patterns, which are
    applied cyclically (the same mechanism common meter uses for its 8/6
    alternation). Unknown names that are not valid literals raise ValueError.
    """
    key = _normalize_meter_name(meter_name_or_literal)
    if key in METER_REGISTRY:
        return MeterTemplate(name=key, line_patterns=METER_REGISTRY[key])
    literal = _parse_literal(meter_name_or_literal.strip())
    if literal is not None:
        return MeterTemplate(name=" ".join(literal), line_patterns=literal)
    known = ", ".join(sorted(METER_REGISTRY))
    raise ValueError(
        f"unknown meter {meter_name_or_literal!r}: expected one of [{known}] "
        "or a literal pattern over u/S"
    )


def scan_line(line: str, lex: PronouncingLexicon, line_index: int = 0) -> LineScansion:
    """Scan one line into a stress pattern plus the last word's rhyme feet.

    Dictionary words map stress digits 1/2 to 'S' and 0 to 'u', except
    monosyllables, which scan as '*' (their stress is context-dependent).
    Out-of-vocabulary words contribute '*' per estimated syllable. The end
    feet cover every pronunciation variant of the last word.
    """
    tokens: list[str] = []
    symbols: list[str] = []
    end_feet: tuple[RhymeFoot, ...] = ()
    for raw in WORD_RE.findall(line):
        tokens.append(normalize_token(raw).lower())
        prons = lex.lookup(raw)
        if prons:
            first = prons[0]
            if first.syllable_count == 1:
                symbols.append("*")
            else:
                symbols.extend("S" if d in (1, 2) else "u" for d in first.vowel_stresses())
            feet = []
            for p in prons:
                try:
                    foot = rhyme_foot_of(p)
                except ValueError:
                    continue
                if foot not in feet:
                    feet.append(foot)
            end_feet = tuple(feet)
        else:
            _, stars = fallback_syllabify(raw)
            symbols.extend(stars)
            end_feet = ()
    return LineScansion(
        line_index=line_index,
        tokens=tuple(tokens),
        pattern="".join(symbols),
        end_feet=end_feet,
    )


def line_matches_meter(
    scansion: LineScansion,
    template: MeterTemplate,
    agreement_threshold: float = 0.8,
    line_index: int | None = None,
) -> MeterLineMatch:
    """Match one scanned line against a template line.

    The line matches when its syllable count is within one of the template's
    and the positional agreement (over the first min-length positions, '*'
    agreeing with anything) reaches the threshold.
    """
    idx = scansion.line_index if line_index is None else line_index
    target = template.pattern_for_line(idx)
    got = scansion.pattern
    if not got:
        return MeterLineMatch(False, 0.0)
    span = min(len(got), len(target))
    agreeing = sum(1 for i in range(span) if got[i] == "*" or got[i] == target[i])
    agreement = agreeing / span
    matched = abs(len(got) - len(target)) <= 1 and agreement >= agreement_threshold
    return MeterLineMatch(matched, agreement)


def match_lines(
    scansions: Sequence[LineScansion],
    template: MeterTemplate,
    agreement_threshold: float = 0.8,
) -> list[MeterLineMatch]:
    """Per-line matches for the non-empty lines, in order."""
    non_empty = [s for s in scansions if s.tokens]
    return [
        line_matches_meter(s, template, agreement_threshold, line_index=i)
        for i, s in enumerate(non_empty)
    ]


def meter_match_ratio(
    scansions: Sequence[LineScansion],
    template: MeterTemplate,
    agreement_threshold: float = 0.8,
) -> float:
    """Fraction of non-empty lines that match the template."""
    matches = match_lines(scansions, template, agreement_threshold)
    if not matches:
        raise ValueError("meter ratio needs at least one non-empty line")
    return sum(1 for m in matches if m.matched) / len(matches)
