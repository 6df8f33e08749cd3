"""Rhyme-scheme inference and scoring against target schemes.

Two lines rhyme when they share a rhyme foot (phoneme suffix from the last
stressed vowel, stress digits erased) under any pronunciation variant.
Identical words therefore rhyme with themselves, which refrain-built forms
rely on.
"""

from __future__ import annotations

from dataclasses import dataclass
from itertools import combinations
from typing import Sequence

from .lexicon import RhymeFoot
from .scansion import LineScansion


@dataclass(frozen=True)
class RhymeScheme:
    """Inferred scheme: one label per non-empty line, plus stanza boundaries.

    stanza_breaks holds cumulative line counts, one entry per stanza; the last
    entry equals len(labels).
    """

    labels: tuple[str, ...]
    stanza_breaks: tuple[int, ...]

    def __post_init__(self) -> None:
        if self.stanza_breaks and self.stanza_breaks[-1] != len(self.labels):
            raise ValueError("stanza_breaks must end at the label count")

    def stanza_labels(self) -> list[tuple[str, ...]]:
        out = []
        start = 0
        for end in self.stanza_breaks:
            out.append(self.labels[start:end])
            start = end
        return out

    def scheme_string(self) -> str:
        return " ".join("".join(run) for run in self.stanza_labels())


def rhymes_with(foot_a: RhymeFoot, foot_b: RhymeFoot) -> bool:
    """Perfect rhyme: identical non-empty feet."""
    return len(foot_a) > 0 and foot_a == foot_b


def _label(index: int) -> str:
    letters = ""
    index += 1
    while index:
        index, rem = divmod(index - 1, 26)
        letters = chr(ord("A") + rem) + letters
    return letters


def infer_scheme(
    scansions: Sequence[LineScansion],
    stanza_lengths: Sequence[int] | None = None,
) -> RhymeScheme:
    """Label lines greedily in first-occurrence order (A, B, ... then AA, AB).

    A line joins the earliest class whose representative foot set intersects
    its own feet; the representative is frozen from the class's first member.
    Lines with no rhyme foot always open a fresh class.
    """
    lines = [s for s in scansions if s.tokens]
    if len(lines) < 2:
        raise ValueError("rhyme scheme inference needs at least two non-empty lines")
    class_feet: list[frozenset[RhymeFoot]] = []
    labels: list[str] = []
    for line in lines:
        feet = frozenset(line.end_feet)
        assigned = None
        if feet:
            for ci, rep in enumerate(class_feet):
                if feet & rep:
                    assigned = ci
                    break
        if assigned is None:
            class_feet.append(feet)
            assigned = len(class_feet) - 1
        labels.append(_label(assigned))
    if stanza_lengths is None:
        breaks: tuple[int, ...] = (len(labels),)
    else:
        if sum(stanza_lengths) != len(labels):
            raise ValueError("stanza lengths must cover every non-empty line")
        acc = 0
        parts = []
        for n in stanza_lengths:
            acc += n
            parts.append(acc)
        breaks = tuple(parts)
    return RhymeScheme(labels=tuple(labels), stanza_breaks=breaks)


def _parse_target(target: str) -> list[str]:
    segments = target.split()
    if not segments:
        raise ValueError("empty target rhyme scheme")
    for seg in segments:
        if not (seg.isascii() and seg.isalpha() and seg.isupper()):
            raise ValueError(f"bad target scheme segment {seg!r}: expected uppercase letters")
    return segments


def rhyme_match_ratio(inferred: RhymeScheme, target: str) -> float:
    """Pairwise-constraint agreement between an inferred scheme and a target.

    Within each stanza, every pair of target positions is a constraint
    (same letter: must rhyme; different: must not) and the score is the
    fraction of constraints the inferred labels satisfy. Stanzas shorter than
    their target segment count the missing pairs as failures. The poem score
    is the mean over stanzas that have at least one constrained pair; if no
    stanza does, the ratio is 1.0.

    Target segments pair with stanzas positionally when the counts are equal;
    a lone segment is tiled over every stanza; a lone stanza consumes the
    segments concatenated; otherwise a segment whose length matches the
    stanza wins, with positional cycling as the last resort.
    """
    segments = _parse_target(target)
    stanza_runs = inferred.stanza_labels()
    k = len(stanza_runs)
    m = len(segments)
    per_stanza: list[float] = []
    for si, run in enumerate(stanza_runs):
        if k == m:
            seg = segments[si]
        elif m == 1:
            seg = segments[0]
        elif k == 1:
            seg = "".join(segments)
        else:
            sized = [s for s in segments if len(s) == len(run)]
            seg = sized[0] if sized else segments[si % m]
        g = len(seg)
        total = g * (g - 1) // 2
        if total == 0:
            continue
        satisfied = 0
        for i, j in combinations(range(g), 2):
            if i < len(run) and j < len(run):
                if (seg[i] == seg[j]) == (run[i] == run[j]):
                    satisfied += 1
        per_stanza.append(satisfied / total)
    if not per_stanza:
        return 1.0
    return sum(per_stanza) / len(per_stanza)
