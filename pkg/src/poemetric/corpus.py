"""Poem corpus I/O, generation prompts, evaluation records, and the
versioned analysis report."""

from __future__ import annotations

import csv
import io
import json
from dataclasses import dataclass, field
from typing import IO, Iterable, Iterator, Mapping, Sequence

from .form_validator import FormReport, FormSpec, SUPPORTED_FORMS, segment_stanzas
from .scansion import METER_REGISTRY

REPORT_SCHEMA = "poemetric-report/1"

# Rubric dimensions, shared by the judge rubric and report aggregation.
DIMENSIONS = (
    "form_accuracy",
    "theme_alignment",
    "creativity",
    "lexical_diversity",
    "idiosyncrasy",
    "emotional_resonance",
    "literary_devices",
    "imagery",
    "overall_quality",
    "human_authorship",
)

MAX_COMMENTS = 3

REQUIRED_CONFIG_KEYS = (
    "meter_gate",
    "rhyme_gate",
    "line_agreement",
    "mattr_window",
    "dictionary_fingerprint",
    "stopwords_version",
)

_CSV_FIELDS = (
    "id", "form", "body", "authored_by", "title", "author",
    "theme", "meter", "rhyme", "source",
)


class CorpusValidationError(ValueError):
    """Raised when corpus records are malformed; lists every offending record."""

    def __init__(self, issues: Sequence[tuple[str, str]]):
        self.issues = list(issues)
        lines = "; ".join(f"{where}: {msg}" for where, msg in self.issues)
        super().__init__(f"invalid corpus records: {lines}")


@dataclass(frozen=True)
class PoemRecord:
    """One poem plus the claims it is graded against."""

    id: str
    form: str
    body: str
    authored_by: str = "unknown"
    title: str | None = None
    author: str | None = None
    theme: str | None = None
    meter: str | None = None
    rhyme: str | None = None
    source: str | None = None

    def validate(self) -> list[str]:
        problems = []
        if not self.id or self.id != self.id.strip():
            problems.append("id must be a non-empty string without surrounding whitespace")
        if self.form not in SUPPORTED_FORMS:
            problems.append(f"form {self.form!r} is not one of {list(SUPPORTED_FORMS)}")
        try:
            segment_stanzas(self.body)
        except ValueError as exc:
            problems.append(str(exc))
        if not (self.authored_by in ("human", "unknown")
                or (self.authored_by.startswith("model:") and len(self.authored_by) > 6)):
            problems.append(
                f"authored_by {self.authored_by!r} must be 'human', 'unknown', or 'model:<name>'")
        if self.form in SUPPORTED_FORMS:
            try:
                self.to_form_spec()
            except ValueError as exc:
                problems.append(str(exc))
        return problems

    def to_form_spec(self) -> FormSpec:
        return FormSpec.from_strings(self.form, self.meter, self.rhyme)


def _record_from_mapping(raw: Mapping[str, object], where: str) -> PoemRecord:
    unknown = set(raw) - set(_CSV_FIELDS)
    if unknown:
        raise ValueError(f"{where}: unknown fields {sorted(unknown)}")
    missing = [k for k in ("id", "form", "body") if not raw.get(k)]
    if missing:
        raise ValueError(f"{where}: missing required fields {missing}")
    kwargs = {k: v for k, v in raw.items() if v not in (None, "")}
    kwargs.setdefault("authored_by", "unknown")
    return PoemRecord(**kwargs)  # type: ignore[arg-type]


def load_corpus(source: str | IO[str], fmt: str = "jsonl") -> list[PoemRecord]:
    """Load poem records from JSONL (one object per line) or CSV.

    All malformed records are collected and reported together in a
    CorpusValidationError; duplicate ids are rejected.
    """
    if hasattr(source, "read"):
        text = source.read()
    else:
        with open(source, encoding="utf-8") as fh:
            text = fh.read()

    records: list[PoemRecord] = []
    issues: list[tuple[str, str]] = []
    if fmt == "jsonl":
        for lineno, line in enumerate(text.splitlines(), start=1):
            if not line.strip():
                continue
            where = f"line {lineno}"
            try:
                raw = json.loads(line)
                if not isinstance(raw, dict):
                    raise ValueError(f"{where}: expected a JSON object")
                records.append(_record_from_mapping(raw, where))
            except (ValueError, TypeError) as exc:
                issues.append((where, str(exc)))
    elif fmt == "csv":
        # a file-like source keeps newlines inside quoted bodies intact
        reader = csv.DictReader(io.StringIO(text))
        for rowno, row in enumerate(reader, start=2):
            where = f"row {rowno}"
            try:
                records.append(_record_from_mapping(
                    {k: v for k, v in row.items() if k is not None}, where))
            except (ValueError, TypeError) as exc:
                issues.append((where, str(exc)))
    else:
        raise ValueError(f"unknown corpus format {fmt!r}: expected 'jsonl' or 'csv'")

    seen: dict[str, int] = {}
    for rec in records:
        seen[rec.id] = seen.get(rec.id, 0) + 1
        for problem in rec.validate():
            issues.append((rec.id, problem))
    for rec_id, count in seen.items():
        if count > 1:
            issues.append((rec_id, f"duplicate id appears {count} times"))
    if issues:
        raise CorpusValidationError(issues)
    if not records:
        raise ValueError("corpus is empty")
    return records


def write_corpus(records: Iterable[PoemRecord], sink: str | IO[str]) -> None:
    """Write records as JSONL, omitting unset optional fields."""
    def dump(fh: IO[str]) -> None:
        for rec in records:
            raw = {k: v for k, v in vars(rec).items() if v is not None}
            fh.write(json.dumps(raw, ensure_ascii=False) + "\n")

    if hasattr(sink, "write"):
        dump(sink)
    else:
        with open(sink, "w", encoding="utf-8") as fh:
            dump(fh)


def render_generation_prompt(record: PoemRecord) -> str:
    """Deterministic instruction for producing a poem matching the record's claims."""
    if not record.theme:
        raise ValueError(f"record {record.id!r} has no theme to prompt on")
    spec = record.to_form_spec()
    sentences = [f'Please write a {spec.form} on the theme of "{record.theme}".']
    if spec.meter is not None:
        if spec.meter.name in METER_REGISTRY:
            sentences.append(f"It should be written in {spec.meter.name}.")
        else:
            sentences.append(
                f"It should follow the stress pattern {spec.meter.name} "
                "(u = unstressed syllable, S = stressed syllable).")
    if spec.rhyme and spec.form in ("ballad", "sonnet"):
        sentences.append(f"It should follow the rhyme scheme {spec.rhyme}.")
    sentences.append(
        "Respond with the poem text only, with a blank line between stanzas "
        "and no title or commentary.")
    return " ".join(sentences)


@dataclass(frozen=True)
class EvaluationRecord:
    """One judge's rubric scores for one poem."""

    poem_id: str
    judge: str
    scores: Mapping[str, int]
    comments: tuple[str, ...] = ()
    transcript_ref: str | None = None

    def __post_init__(self) -> None:
        if not self.poem_id or not self.judge:
            raise ValueError("poem_id and judge must be non-empty")
        got = set(self.scores)
        if got != set(DIMENSIONS):
            raise ValueError(
                f"scores must cover exactly the {len(DIMENSIONS)} dimensions; "
                f"missing {sorted(set(DIMENSIONS) - got)}, extra {sorted(got - set(DIMENSIONS))}")
        bad = {k: v for k, v in self.scores.items()
               if not isinstance(v, int) or isinstance(v, bool) or not 1 <= v <= 5}
        if bad:
            raise ValueError(f"scores must be integers in [1, 5], got {bad}")
        if len(self.comments) > MAX_COMMENTS:
            raise ValueError(f"at most {MAX_COMMENTS} comments are kept, got {len(self.comments)}")

    def as_dict(self) -> dict:
        return {
            "poem_id": self.poem_id,
            "judge": self.judge,
            "scores": {dim: self.scores[dim] for dim in DIMENSIONS},
            "comments": list(self.comments),
            "transcript_ref": self.transcript_ref,
        }

    @classmethod
    def from_dict(cls, raw: Mapping[str, object]) -> "EvaluationRecord":
        return cls(
            poem_id=str(raw["poem_id"]),
            judge=str(raw["judge"]),
            scores=dict(raw["scores"]),  # type: ignore[arg-type]
            comments=tuple(raw.get("comments") or ()),  # type: ignore[arg-type]
            transcript_ref=raw.get("transcript_ref"),  # type: ignore[arg-type]
        )


@dataclass(frozen=True)
class PoemResult:
    """Everything the pipeline computed for one poem."""

    record: PoemRecord
    form_report: FormReport
    mattr: float | None = None
    repetition: float | None = None
    evaluations: tuple[EvaluationRecord, ...] = ()


def aggregate_authors(results: Sequence[PoemResult]) -> dict:
    """Per-authored_by aggregates: form accuracy and metric/score means."""
    groups: dict[str, list[PoemResult]] = {}
    for res in results:
        groups.setdefault(res.record.authored_by, []).append(res)

    def mean(values: list[float]) -> float | None:
        return sum(values) / len(values) if values else None

    out = {}
    for author in sorted(groups):
        members = groups[author]
        mattrs = [r.mattr for r in members if r.mattr is not None]
        reps = [r.repetition for r in members if r.repetition is not None]
        per_dim: dict[str, list[int]] = {dim: [] for dim in DIMENSIONS}
        for res in members:
            for ev in res.evaluations:
                for dim in DIMENSIONS:
                    per_dim[dim].append(ev.scores[dim])
        mean_scores = {dim: mean(vals) for dim, vals in per_dim.items() if vals}
        out[author] = {
            "poems": len(members),
            "form_accuracy": sum(1 for r in members if r.form_report.passed) / len(members),
            "mean_mattr": mean(mattrs),
            "mean_repetition": mean(reps),
            "mean_scores": mean_scores or None,
        }
    return out


def write_report(
    results: Sequence[PoemResult],
    sink: str | IO[str],
    config: Mapping[str, object],
) -> dict:
    """Write the versioned JSON report and return it as a dict.

    The config echo must carry the knobs a reader needs to reproduce the
    run: gates, MATTR window, dictionary fingerprint, stopword list version.
    """
    missing = [k for k in REQUIRED_CONFIG_KEYS if k not in config]
    if missing:
        raise ValueError(f"report config is missing keys {missing}")
    from . import __version__

    doc = {
        "schema": REPORT_SCHEMA,
        "generator": {"name": "poemetric", "version": __version__},
        "config": dict(config),
        "poems": [
            {
                "id": res.record.id,
                "authored_by": res.record.authored_by,
                "title": res.record.title,
                "form_report": res.form_report.as_dict(),
                "mattr": res.mattr,
                "repetition": res.repetition,
                "evaluations": [ev.as_dict() for ev in res.evaluations],
            }
            for res in results
        ],
        "authors": aggregate_authors(results),
    }
    if hasattr(sink, "write"):
        json.dump(doc, sink, indent=2, ensure_ascii=False)
        sink.write("\n")
    else:
        with open(sink, "w", encoding="utf-8") as fh:
            json.dump(doc, fh, indent=2, ensure_ascii=False)
            fh.write("\n")
    return doc


def iter_report_ratings(doc: Mapping[str, object]) -> Iterator[tuple[str, str, str, int]]:
    """Yield (item_id, rater_id, dimension, score) rows from a report dict."""
    if doc.get("schema") != REPORT_SCHEMA:
        raise ValueError(f"not a {REPORT_SCHEMA} document: schema={doc.get('schema')!r}")
    for poem in doc.get("poems", ()):  # type: ignore[union-attr]
        for ev in poem.get("evaluations", ()):
            for dim in DIMENSIONS:
                yield str(poem["id"]), str(ev["judge"]), dim, int(ev["scores"][dim])
