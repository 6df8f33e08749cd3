"""Fixed-form structural checks and the combined pass/fail gate for a poem.

A poem passes its form when the form's structural constraints hold, the
meter match ratio clears its gate, and the rhyme match ratio clears its
gate (both default 0.7). Forms built on repetition (ghazal, limerick,
pantoum, sestina, villanelle) are judged structurally instead of against a
target rhyme string; the villanelle additionally carries a whole-poem rhyme
ratio because its tercets must share rhyme sounds globally.
"""

from __future__ import annotations

from dataclasses import dataclass, field

from .lexicon import PronouncingLexicon, RhymeFoot, normalize_token
from .rhyme import RhymeScheme, infer_scheme, rhyme_match_ratio
from .scansion import (
    WORD_RE,
    MeterLineMatch,
    MeterTemplate,
    expected_pattern,
    match_lines,
    scan_line,
)

SUPPORTED_FORMS = ("ballad", "ghazal", "limerick", "pantoum", "sestina", "sonnet", "villanelle")

# Forms validated by their repetition structure rather than a rhyme target.
STRUCTURAL_FORMS = ("ghazal", "limerick", "pantoum", "sestina", "villanelle")

DEFAULT_METER = {"sonnet": "iambic pentameter", "ballad": "common meter"}
DEFAULT_RHYME = {"sonnet": "ABAB CDCD EFEF GG", "ballad": "ABCB"}

VILLANELLE_RHYME = "ABA ABA ABA ABA ABA ABAA"

# Stanza k+1 of a strict sestina reuses stanza k's end words in the order
# bottom-up-outside-in: positions 6,1,5,2,4,3 (1-based).
SESTINA_SPIRAL = (5, 0, 4, 1, 3, 2)


@dataclass(frozen=True)
class Stanzas:
    """A poem as stanzas of non-blank lines (blank lines are separators)."""

    stanzas: tuple[tuple[str, ...], ...]

    @property
    def lines(self) -> tuple[str, ...]:
        return tuple(line for stanza in self.stanzas for line in stanza)

    @property
    def lengths(self) -> tuple[int, ...]:
        return tuple(len(s) for s in self.stanzas)


def segment_stanzas(text: str) -> Stanzas:
    stanzas: list[tuple[str, ...]] = []
    current: list[str] = []
    for raw in text.splitlines():
        line = raw.strip()
        if line:
            current.append(line)
        elif current:
            stanzas.append(tuple(current))
            current = []
    if current:
        stanzas.append(tuple(current))
    if not stanzas:
        raise ValueError("poem has no non-blank lines")
    return Stanzas(stanzas=tuple(stanzas))


def line_tokens(line: str) -> tuple[str, ...]:
    return tuple(normalize_token(t).lower() for t in WORD_RE.findall(line))


def normalize_line(line: str) -> str:
    return " ".join(line_tokens(line))


def _token_edit_distance(a: tuple[str, ...], b: tuple[str, ...]) -> int:
    if len(a) < len(b):
        a, b = b, a
    previous = list(range(len(b) + 1))
    for i, ta in enumerate(a, start=1):
        current = [i]
        for j, tb in enumerate(b, start=1):
            cost = 0 if ta == tb else 1
            current.append(min(previous[j] + 1, current[j - 1] + 1, previous[j - 1] + cost))
        previous = current
    return previous[-1]


def _lines_equivalent(a: str, b: str, tolerance: int) -> bool:
    ta, tb = line_tokens(a), line_tokens(b)
    if tolerance <= 0:
        return ta == tb
    return _token_edit_distance(ta, tb) <= tolerance


@dataclass(frozen=True)
class StructuralFailure:
    check: str
    detail: str


@dataclass(frozen=True)
class StructuralResult:
    passed: bool
    failures: tuple[StructuralFailure, ...] = ()
    notes: tuple[str, ...] = ()
    rhyme_ratio: float | None = None


def _result(failures: list[StructuralFailure], notes: list[str],
            rhyme_ratio: float | None = None) -> StructuralResult:
    return StructuralResult(
        passed=not failures,
        failures=tuple(failures),
        notes=tuple(notes),
        rhyme_ratio=rhyme_ratio,
    )


def _end_feet(word: str, lex: PronouncingLexicon) -> frozenset[RhymeFoot]:
    return frozenset(scan_line(word, lex).end_feet)


def check_ghazal(stanzas: Stanzas, lex: PronouncingLexicon) -> StructuralResult:
    """Couplets sharing a trailing refrain (radif) with rhyme just before it (qafia).

    Both lines of the opening couplet and the second line of every later
    couplet must end in a maximal common word sequence; the words immediately
    before it must rhyme with the opening couplet's.
    """
    failures: list[StructuralFailure] = []
    notes: list[str] = []
    bad = [i + 1 for i, s in enumerate(stanzas.stanzas) if len(s) != 2]
    if bad:
        failures.append(StructuralFailure(
            "couplets", f"stanzas {bad} do not have exactly two lines"))
    if len(stanzas.stanzas) < 2:
        failures.append(StructuralFailure("couplets", "a ghazal needs at least two couplets"))
    if failures:
        return _result(failures, notes)

    couplets = stanzas.stanzas
    refrain_lines = [couplets[0][0]] + [c[1] for c in couplets]
    token_seqs = [line_tokens(ln) for ln in refrain_lines]
    radif_len = 0
    while all(len(seq) > radif_len for seq in token_seqs):
        suffix = {seq[-(radif_len + 1)] for seq in token_seqs}
        if len(suffix) == 1:
            radif_len += 1
        else:
            break
    if radif_len == 0:
        failures.append(StructuralFailure(
            "radif",
            "no common trailing word across the opening couplet and later second lines"))
        return _result(failures, notes)
    radif = " ".join(token_seqs[0][-radif_len:])
    notes.append(f"radif: {radif!r}")

    qafia_words = []
    for seq in token_seqs:
        if len(seq) <= radif_len:
            qafia_words.append(None)
        else:
            qafia_words.append(seq[-(radif_len + 1)])
    if any(w is None for w in qafia_words):
        failures.append(StructuralFailure(
            "qafia", "a refrain line consists of the radif alone, leaving no rhyme word"))
        return _result(failures, notes)
    feet = [_end_feet(w, lex) for w in qafia_words]
    known = [(w, f) for w, f in zip(qafia_words, feet) if f]
    skipped = [w for w, f in zip(qafia_words, feet) if not f]
    if skipped:
        notes.append(f"qafia words not in dictionary, skipped: {sorted(set(skipped))}")
    if known:
        rep_word, rep = known[0]
        off = [w for w, f in known[1:] if not (f & rep)]
        if off:
            failures.append(StructuralFailure(
                "qafia", f"words {off} do not rhyme with {rep_word!r} before the radif"))
    return _result(failures, notes)


def check_sestina(stanzas: Stanzas, strict_spiral: bool = False) -> StructuralResult:
    """Six sestets cycling the same six end words, closed by a three-line envoi.

    Each sestet must reuse stanza one's end words as a permutation with no
    stanza repeating its predecessor's order; the envoi must work all six in,
    two per line. With strict_spiral the classical 6-1-5-2-4-3 retrograde
    order is enforced between consecutive sestets.
    """
    failures: list[StructuralFailure] = []
    notes: list[str] = []
    lengths = stanzas.lengths
    if len(lengths) != 7 or lengths[:6] != (6,) * 6 or lengths[6] != 3:
        failures.append(StructuralFailure(
            "shape", f"expected six sestets and a three-line envoi, got stanza lengths {lengths}"))
        return _result(failures, notes)

    orders = []
    for stanza in stanzas.stanzas[:6]:
        ends = []
        for line in stanza:
            toks = line_tokens(line)
            ends.append(toks[-1] if toks else "")
        orders.append(tuple(ends))
    key_words = orders[0]
    notes.append(f"end words: {list(key_words)}")
    for i, order in enumerate(orders[1:], start=2):
        if sorted(order) != sorted(key_words):
            failures.append(StructuralFailure(
                "permutation", f"stanza {i} end words {list(order)} are not a permutation "
                               f"of stanza 1's {list(key_words)}"))
    if not failures:
        for i in range(1, 6):
            if orders[i] == orders[i - 1]:
                failures.append(StructuralFailure(
                    "order", f"stanza {i + 1} repeats stanza {i}'s end-word order exactly"))
        if strict_spiral:
            for i in range(1, 6):
                expected = tuple(orders[i - 1][j] for j in SESTINA_SPIRAL)
                if orders[i] != expected:
                    failures.append(StructuralFailure(
                        "spiral", f"stanza {i + 1} end words {list(orders[i])} break the "
                                  f"6-1-5-2-4-3 order, expected {list(expected)}"))
                    break

    envoi = stanzas.stanzas[6]
    key_set = set(key_words)
    seen: set[str] = set()
    envoi_ok = True
    for li, line in enumerate(envoi, start=1):
        present = {t for t in line_tokens(line) if t in key_set}
        seen |= present
        if len(present) != 2:
            envoi_ok = False
            failures.append(StructuralFailure(
                "envoi", f"envoi line {li} contains {len(present)} of the six end words, "
                         "expected exactly two"))
    if envoi_ok and seen != key_set:
        missing = sorted(key_set - seen)
        failures.append(StructuralFailure("envoi", f"envoi never uses end words {missing}"))
    return _result(failures, notes)


def check_villanelle(
    stanzas: Stanzas,
    lex: PronouncingLexicon,
    refrain_tolerance: int = 0,
    rhyme_gate: float = 0.7,
    scheme: RhymeScheme | None = None,
) -> StructuralResult:
    """Five tercets plus a quatrain with two alternating refrains and two rhymes.

    Line 1 must return as lines 6, 12 and 18; line 3 as lines 9, 15 and 19.
    Refrain comparison is on normalized words, with an optional token edit
    distance allowance. The rhyme constraint is scored globally over all 19
    lines against ABA ABA ABA ABA ABA ABAA and gated at rhyme_gate.
    """
    failures: list[StructuralFailure] = []
    notes: list[str] = []
    if stanzas.lengths != (3, 3, 3, 3, 3, 4):
        failures.append(StructuralFailure(
            "shape", f"expected stanzas of 3,3,3,3,3,4 lines, got {stanzas.lengths}"))
        return _result(failures, notes)

    lines = stanzas.lines
    for refrain_line, positions in ((1, (6, 12, 18)), (3, (9, 15, 19))):
        expected = lines[refrain_line - 1]
        for pos in positions:
            if not _lines_equivalent(expected, lines[pos - 1], refrain_tolerance):
                failures.append(StructuralFailure(
                    "refrain", f"line {pos} should repeat line {refrain_line} "
                               f"({normalize_line(expected)!r}), got "
                               f"{normalize_line(lines[pos - 1])!r}"))

    if scheme is None:
        scansions = [scan_line(line, lex, i) for i, line in enumerate(lines)]
        scheme = infer_scheme(scansions, stanza_lengths=stanzas.lengths)
    flat = RhymeScheme(labels=scheme.labels, stanza_breaks=(len(scheme.labels),))
    ratio = rhyme_match_ratio(flat, VILLANELLE_RHYME)
    if ratio < rhyme_gate:
        failures.append(StructuralFailure(
            "rhyme", f"global rhyme ratio {ratio:.3f} below {rhyme_gate}"))
    return _result(failures, notes, rhyme_ratio=ratio)


def check_pantoum(stanzas: Stanzas, refrain_tolerance: int = 0) -> StructuralResult:
    """Quatrains chained by repetition, closing the loop back to the opening.

    Lines 2 and 4 of each quatrain return as lines 1 and 3 of the next; the
    final quatrain's lines 2 and 4 revisit the opening quatrain's lines 1 and
    3 (in either order).
    """
    failures: list[StructuralFailure] = []
    notes: list[str] = []
    lengths = stanzas.lengths
    if len(lengths) < 2 or any(n != 4 for n in lengths):
        failures.append(StructuralFailure(
            "quatrains", f"expected at least two four-line stanzas, got lengths {lengths}"))
        return _result(failures, notes)

    quatrains = stanzas.stanzas
    for i in range(len(quatrains) - 1):
        for src, dst in ((1, 0), (3, 2)):
            if not _lines_equivalent(quatrains[i][src], quatrains[i + 1][dst], refrain_tolerance):
                failures.append(StructuralFailure(
                    "repetition",
                    f"stanza {i + 2} line {dst + 1} should repeat stanza {i + 1} "
                    f"line {src + 1} ({normalize_line(quatrains[i][src])!r})"))

    first, last = quatrains[0], quatrains[-1]
    straight = (_lines_equivalent(last[1], first[2], refrain_tolerance)
                and _lines_equivalent(last[3], first[0], refrain_tolerance))
    crossed = (_lines_equivalent(last[1], first[0], refrain_tolerance)
               and _lines_equivalent(last[3], first[2], refrain_tolerance))
    if not (straight or crossed):
        failures.append(StructuralFailure(
            "wrap", "final stanza's lines 2 and 4 should revisit the opening "
                    "stanza's lines 1 and 3"))
    return _result(failures, notes)


def check_limerick(scheme: RhymeScheme) -> StructuralResult:
    """Five lines rhyming AABBA, or the four-line AABA variant that folds the
    short internal couplet into one printed line."""
    failures: list[StructuralFailure] = []
    labels = scheme.labels
    if len(labels) == 5:
        expected = ("A", "A", "B", "B", "A")
    elif len(labels) == 4:
        expected = ("A", "A", "B", "A")
    else:
        failures.append(StructuralFailure(
            "shape", f"expected five lines (or four with a fused couplet), got {len(labels)}"))
        return _result(failures, [])
    if labels != expected:
        failures.append(StructuralFailure(
            "pattern", f"rhyme scheme {''.join(labels)} is not {''.join(expected)}"))
    return _result(failures, [])


@dataclass(frozen=True)
class FormSpec:
    """What to hold a poem to: a form plus optional meter and rhyme targets."""

    form: str
    meter: MeterTemplate | None = None
    rhyme: str | None = None

    def __post_init__(self) -> None:
        if self.form not in SUPPORTED_FORMS:
            raise ValueError(
                f"unknown form {self.form!r}: expected one of {list(SUPPORTED_FORMS)}")

    @classmethod
    def from_strings(
        cls,
        form: str,
        meter: str | None = None,
        rhyme: str | None = None,
        apply_defaults: bool = True,
    ) -> "FormSpec":
        form = form.strip().lower()
        if apply_defaults:
            meter = meter or DEFAULT_METER.get(form)
            rhyme = rhyme or DEFAULT_RHYME.get(form)
        template = expected_pattern(meter) if meter else None
        return cls(form=form, meter=template, rhyme=rhyme)


@dataclass(frozen=True)
class FormReport:
    """Everything the gate decided about one poem, ready for serialization."""

    form: str
    line_count: int
    stanza_lengths: tuple[int, ...]
    structural_valid: bool | None
    structural_failures: tuple[StructuralFailure, ...]
    meter_name: str | None
    meter_ratio: float | None
    line_matches: tuple[MeterLineMatch, ...]
    rhyme_target: str | None
    rhyme_ratio: float | None
    inferred_scheme: str
    passed: bool
    notes: tuple[str, ...] = field(default=())

    def as_dict(self) -> dict:
        return {
            "form": self.form,
            "line_count": self.line_count,
            "stanza_lengths": list(self.stanza_lengths),
            "structural_valid": self.structural_valid,
            "structural_failures": [
                {"check": f.check, "detail": f.detail} for f in self.structural_failures
            ],
            "meter": self.meter_name,
            "meter_ratio": self.meter_ratio,
            "line_matches": [
                {"matched": m.matched, "agreement": m.agreement} for m in self.line_matches
            ],
            "rhyme_target": self.rhyme_target,
            "rhyme_ratio": self.rhyme_ratio,
            "inferred_scheme": self.inferred_scheme,
            "passed": self.passed,
            "notes": list(self.notes),
        }


def evaluate_form(
    text: str,
    form_spec: FormSpec,
    lex: PronouncingLexicon,
    *,
    meter_gate: float = 0.7,
    rhyme_gate: float = 0.7,
    line_agreement: float = 0.8,
    strict_sestina: bool = False,
    refrain_tolerance: int = 0,
) -> FormReport:
    """Run structural checks, meter matching and rhyme scoring for one poem.

    The poem passes when the structural checks hold (where the form has any),
    the fraction of meter-matching lines is at least meter_gate, and the
    rhyme ratio is at least rhyme_gate. A missing meter or rhyme target
    simply skips that gate.
    """
    stanzas = segment_stanzas(text)
    lines = stanzas.lines
    scansions = [scan_line(line, lex, i) for i, line in enumerate(lines)]
    notes: list[str] = []

    if len(lines) >= 2:
        scheme = infer_scheme(scansions, stanza_lengths=stanzas.lengths)
    else:
        scheme = RhymeScheme(labels=("A",), stanza_breaks=(1,))

    structural: StructuralResult | None = None
    form = form_spec.form
    if form == "ghazal":
        structural = check_ghazal(stanzas, lex)
    elif form == "sestina":
        structural = check_sestina(stanzas, strict_spiral=strict_sestina)
    elif form == "villanelle":
        structural = check_villanelle(
            stanzas, lex, refrain_tolerance=refrain_tolerance,
            rhyme_gate=rhyme_gate, scheme=scheme)
    elif form == "pantoum":
        structural = check_pantoum(stanzas, refrain_tolerance=refrain_tolerance)
    elif form == "limerick":
        structural = check_limerick(scheme)
    if structural is not None:
        notes.extend(structural.notes)

    meter_ratio = None
    matches: tuple[MeterLineMatch, ...] = ()
    if form_spec.meter is not None:
        matches = tuple(match_lines(scansions, form_spec.meter, line_agreement))
        meter_ratio = sum(1 for m in matches if m.matched) / len(matches)

    rhyme_ratio = None
    rhyme_target = None
    if form == "villanelle":
        rhyme_ratio = structural.rhyme_ratio
        rhyme_target = VILLANELLE_RHYME
    elif form in STRUCTURAL_FORMS:
        if form_spec.rhyme:
            notes.append(f"rhyme target {form_spec.rhyme!r} ignored: "
                         f"{form} is judged by its repetition structure")
    elif form_spec.rhyme:
        rhyme_target = form_spec.rhyme
        rhyme_ratio = rhyme_match_ratio(scheme, rhyme_target)

    passed = (
        (structural is None or structural.passed)
        and (meter_ratio is None or meter_ratio >= meter_gate)
        and (rhyme_ratio is None or rhyme_ratio >= rhyme_gate)
    )
    return FormReport(
        form=form,
        line_count=len(lines),
        stanza_lengths=stanzas.lengths,
        structural_valid=None if structural is None else structural.passed,
        structural_failures=() if structural is None else structural.failures,
        meter_name=form_spec.meter.name if form_spec.meter else None,
        meter_ratio=meter_ratio,
        line_matches=matches,
        rhyme_target=rhyme_target,
        rhyme_ratio=rhyme_ratio,
        inferred_scheme=scheme.scheme_string(),
        passed=passed,
        notes=tuple(notes),
    )
