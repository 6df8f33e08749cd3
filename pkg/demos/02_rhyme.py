"""Rhyme feet, scheme inference, and scoring against a target scheme.

Takes the model sonnet from the bundled corpus, shows each line's rhyme
foot, infers the scheme letter by letter, and scores it against the
Shakespearean target ABAB CDCD EFEF GG.
"""

from importlib import resources

from poemetric.corpus import load_corpus
from poemetric.lexicon import load_dictionary, rhyme_foot_of
from poemetric.rhyme import infer_scheme, rhyme_match_ratio
from poemetric.scansion import scan_line


def data(name):
    return resources.files("poemetric.data").joinpath(name)


lex = load_dictionary(data("sample_lexicon.dict"))
poems = {rec.id: rec for rec in load_corpus(data("sample_poems.jsonl"))}

# The rhyme foot is everything from the last stressed vowel onward, with
# stress digits erased: day -> (EY,), temperate -> (AH, T).
for word in ("day", "May", "temperate", "date"):
    foot = rhyme_foot_of(lex.lookup(word)[0])
    print(f"{word:10} -> {foot}")

sonnet = poems["sonnet-18__example-bard"]
lines = [ln for ln in sonnet.body.splitlines() if ln.strip()]
scansions = [scan_line(ln, lex, i) for i, ln in enumerate(lines)]
scheme = infer_scheme(scansions, stanza_lengths=(len(lines),))

print(f"\n{sonnet.title} ({sonnet.authored_by})")
for label, line in zip(scheme.labels, lines):
    print(f"  {label}  {line}")
print(f"inferred scheme: {scheme.scheme_string()}")

target = "ABAB CDCD EFEF GG"
ratio = rhyme_match_ratio(scheme, target)
print(f"agreement with {target}: {ratio:.3f}")

# Damage one rhyme and watch the pairwise score drop: every pair involving
# the changed line is re-judged against the target's constraints.
damaged = infer_scheme(scansions[:13] + [scan_line("And so the story ends.", lex, 13)],
                       stanza_lengths=(14,))
print(f"\nlast line replaced -> scheme {damaged.scheme_string()}, "
      f"agreement {rhyme_match_ratio(damaged, target):.3f}")
