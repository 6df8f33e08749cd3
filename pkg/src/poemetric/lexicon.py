"""CMU-format pronouncing dictionary: loading, lookup, syllable fallback, rhyme feet."""

from __future__ import annotations

import hashlib
import itertools
import re
from dataclasses import dataclass
from pathlib import Path
from typing import IO, Iterable, Union

ARPABET_VOWELS = frozenset({
    "AA", "AE", "AH", "AO", "AW", "AY", "EH", "ER",
    "EY", "IH", "IY", "OW", "OY", "UH", "UW",
})

# A rhyme foot is the stress-stripped phoneme suffix from the rhyming vowel on.
RhymeFoot = tuple[str, ...]

_PHONEME_RE = re.compile(r"^([A-Z]{1,2})([0-9])?$")
_VARIANT_RE = re.compile(r"\((\d+)\)$")
_APOSTROPHES = str.maketrans({"’": "'", "ʼ": "'"})
_EDGE_PUNCT = "".join(chr(c) for c in range(0x21, 0x7f) if not chr(c).isalnum()) + "–—“”‘«»…"


class DictionaryParseError(ValueError):
    """Raised when a dictionary source line cannot be parsed."""


@dataclass(frozen=True)
class Pronunciation:
    """One pronunciation: a sequence of ARPAbet phonemes, vowels carrying a stress digit."""

    phonemes: tuple[str, ...]

    def __post_init__(self) -> None:
        if not self.phonemes:
            raise ValueError("pronunciation must contain at least one phoneme")
        for ph in self.phonemes:
            m = _PHONEME_RE.match(ph)
            if m is None:
                raise ValueError(f"malformed phoneme {ph!r}")
            base, digit = m.groups()
            if base in ARPABET_VOWELS:
                if digit is None:
                    raise ValueError(f"vowel phoneme {ph!r} missing stress digit")
                if digit not in "012":
                    raise ValueError(f"unparseable stress digit in {ph!r}")
            elif digit is not None:
                raise ValueError(f"consonant phoneme {ph!r} must not carry a stress digit")

    @property
    def syllable_count(self) -> int:
        return sum(1 for ph in self.phonemes if ph[:-1] in ARPABET_VOWELS)

    def vowel_stresses(self) -> tuple[int, ...]:
        """Stress digits of the vowel phonemes, in order."""
        return tuple(int(ph[-1]) for ph in self.phonemes if ph[:-1] in ARPABET_VOWELS)

    def __iter__(self):
        return iter(self.phonemes)

    def __str__(self) -> str:
        return " ".join(self.phonemes)


def _concat(prons: Iterable[Pronunciation]) -> Pronunciation:
    merged: tuple[str, ...] = ()
    for p in prons:
        merged = merged + p.phonemes
    return Pronunciation(merged)


class PronouncingLexicon:
    """Immutable word -> pronunciation-variants map keyed by normalized (uppercase) word.

    Variant order follows the source file. Instances are safe to share across
    threads once loaded.
    """

    def __init__(self, entries: dict[str, list[Pronunciation]], fingerprint: str = ""):
        self._entries = {w: tuple(ps) for w, ps in entries.items()}
        self.fingerprint = fingerprint

    @property
    def word_count(self) -> int:
        return len(self._entries)

    @property
    def entry_count(self) -> int:
        """Total pronunciations, i.e. well-formed non-comment source lines."""
        return sum(len(ps) for ps in self._entries.values())

    def __contains__(self, word: str) -> bool:
        return bool(self.lookup(word))

    def lookup(self, word: str) -> list[Pronunciation]:
        """All pronunciation variants for a surface token, or [] when out-of-vocabulary.

        The token is normalized (case fold, edge punctuation stripped); a trailing
        possessive 's is stripped when the direct form is missing, and hyphenated
        words are resolved by concatenating the parts' pronunciations.
        """
        key = normalize_token(word)
        if not key:
            return []
        return list(self._lookup_normalized(key))

    def _lookup_normalized(self, key: str) -> tuple[Pronunciation, ...]:
        direct = self._lookup_possessive(key)
        if direct:
            return direct
        if "-" in key:
            per_part = [self._lookup_possessive(part) for part in key.split("-") if part]
            if per_part and all(per_part):
                combos = itertools.islice(itertools.product(*per_part), 8)
                return tuple(_concat(combo) for combo in combos)
        return ()

    def _lookup_possessive(self, key: str) -> tuple[Pronunciation, ...]:
        hit = self._entries.get(key)
        if hit:
            return hit
        if key.endswith("'S"):
            base = self._entries.get(key[:-2])
            if base:
                # possessive: append Z (S after unvoiced stops would be finer; Z suffices
                # for syllable and rhyme purposes on open classes)
                return tuple(Pronunciation(p.phonemes + ("Z",)) for p in base)
        if key.endswith("'"):
            hit = self._entries.get(key[:-1])
            if hit:
                return hit
        return ()


def normalize_token(word: str) -> str:
    """Uppercase a surface token and strip surrounding punctuation.

    Internal apostrophes and hyphens survive ("ow'st", "to-day"); typographic
    apostrophes are folded to ASCII.
    """
    return word.translate(_APOSTROPHES).strip(_EDGE_PUNCT + " \t").upper()


def load_dictionary(source: Union[str, Path, IO[str]]) -> PronouncingLexicon:
    """Parse a CMU-format dictionary (``WORD  PH PH ...``; ``;;;`` comments).

    Variant entries like ``WORD(1)`` are grouped under the base word in file
    order. Raises DictionaryParseError on malformed lines (with the 1-based
    line number) and on a source containing no entries.
    """
    if hasattr(source, "read"):
        text = source.read()
    else:
        text = Path(source).read_text(encoding="utf-8", errors="replace")
    fingerprint = hashlib.sha256(text.encode("utf-8")).hexdigest()

    entries: dict[str, list[Pronunciation]] = {}
    count = 0
    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.strip()
        if not line or line.startswith(";;;"):
            continue
        fields = line.split()
        if len(fields) < 2:
            raise DictionaryParseError(f"line {lineno}: entry has no phonemes: {raw!r}")
        word = _VARIANT_RE.sub("", fields[0]).upper()
        if not word:
            raise DictionaryParseError(f"line {lineno}: entry has no word: {raw!r}")
        try:
            pron = Pronunciation(tuple(ph.upper() for ph in fields[1:]))
        except ValueError as exc:
            raise DictionaryParseError(f"line {lineno}: {exc}") from exc
        entries.setdefault(word, []).append(pron)
        count += 1
    if count == 0:
        raise DictionaryParseError("dictionary source contains no entries")
    return PronouncingLexicon(entries, fingerprint=fingerprint)


_VOWEL_GROUP_RE = re.compile(r"[aeiouy]+")


def fallback_syllabify(word: str) -> tuple[int, str]:
    """Estimate syllables for an out-of-vocabulary word.

    Counts maximal vowel-letter groups (y counts as a vowel), subtracts one for
    a terminal silent e (not preceded by l), floors at 1. Every syllable's
    stress is unknown, so the pattern is '*' per syllable.
    """
    letters = re.sub(r"[^a-z]", "", word.lower())
    if not letters:
        raise ValueError(f"cannot syllabify a word with no letters: {word!r}")
    count = len(_VOWEL_GROUP_RE.findall(letters))
    if count >= 2 and letters.endswith("e") and not letters.endswith("le"):
        count -= 1
    count = max(count, 1)
    return count, "*" * count


def rhyme_foot_of(pron: Pronunciation) -> RhymeFoot:
    """Phoneme suffix from the rhyming vowel on, stress digits erased.

    The rhyming vowel is the last primary-stressed vowel, falling back to the
    last secondary-stressed vowel, then to the last vowel of any stress.
    """
    vowel_positions: dict[int, list[int]] = {0: [], 1: [], 2: []}
    for i, ph in enumerate(pron.phonemes):
        if ph[:-1] in ARPABET_VOWELS:
            vowel_positions[int(ph[-1])].append(i)
    for stress in (1, 2):
        if vowel_positions[stress]:
            start = vowel_positions[stress][-1]
            break
    else:
        all_vowels = sorted(vowel_positions[0] + vowel_positions[1] + vowel_positions[2])
        if not all_vowels:
            raise ValueError("pronunciation has no vowel phoneme")
        start = all_vowels[-1]
    return tuple(
        ph[:-1] if ph[:-1] in ARPABET_VOWELS else ph
        for ph in pron.phonemes[start:]
    )
