"""A walk through syllables, stress, and meter matching.

Loads the bundled pronouncing dictionary, scans a few lines of verse into
stress patterns, and checks them against iambic pentameter and common meter
templates.
"""

from importlib import resources

from poemetric.lexicon import fallback_syllabify, load_dictionary
from poemetric.scansion import expected_pattern, line_matches_meter, match_lines, scan_line


def data(name):
    return resources.files("poemetric.data").joinpath(name)


lex = load_dictionary(data("sample_lexicon.dict"))
print(f"dictionary: {lex.word_count} words, {lex.entry_count} entries, "
      f"fingerprint {lex.fingerprint[:12]}...")

# A single word carries its stress contour in the dictionary.
for word in ("compare", "temperate", "darling", "summer"):
    prons = lex.lookup(word)
    print(f"{word:10} -> {prons[0]}  ({prons[0].syllable_count} syllables)")

# Out-of-vocabulary words fall back to counting vowel groups; every
# fallback syllable is flexible (*).
for word in ("yonder", "gleamingly"):
    count, pattern = fallback_syllabify(word)
    print(f"{word:10} -> {count} syllables, pattern {pattern}")

# Scanning a line concatenates the word patterns. Monosyllables are
# flexible (*): they can sit on a stressed or unstressed beat.
line = "Shall I compare thee to a summer's day?"
scansion = scan_line(line, lex, line_index=0)
print(f"\n{line}")
print(f"pattern: {scansion.pattern}")

pentameter = expected_pattern("iambic pentameter")
matched, agreement = line_matches_meter(scansion, pentameter)
print(f"iambic pentameter ({pentameter.pattern}): "
      f"matched={matched}, positional agreement={agreement:.2f}")

# Common meter alternates 8- and 6-syllable iambic lines, so the template
# depends on the line's position within the poem.
ballad = [
    "She dwelt among the untrodden ways",
    "Beside the springs of Dove,",
]
common = expected_pattern("common meter")
print("\ncommon meter, line by line:")
for i, text in enumerate(ballad):
    s = scan_line(text, lex, line_index=i)
    matched, agreement = line_matches_meter(s, common)
    print(f"  {text:36} {s.pattern:10} matched={matched} agreement={agreement:.2f}")

matches = match_lines([scan_line(t, lex, i) for i, t in enumerate(ballad)], common)
ratio = sum(m.matched for m in matches) / len(matches)
print(f"meter ratio over the couplet: {ratio:.2f}")
