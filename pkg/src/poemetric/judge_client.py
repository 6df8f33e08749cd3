"""LLM judge harness: rubric prompt, response parsing, transport with
retries, and resumable corpus-scale runs.

The judge never sees who or what wrote a poem; the prompt carries only the
generation instructions and the poem text.
"""

from __future__ import annotations

import json
import os
import re
import time
from concurrent.futures import ThreadPoolExecutor, as_completed
from dataclasses import dataclass, field
from typing import Callable, Mapping, Protocol, Sequence

import requests

from .corpus import DIMENSIONS, EvaluationRecord, PoemRecord, render_generation_prompt

LIKERT_MIN = 1
LIKERT_MAX = 5

SCORES_HEADER = "SCORES"
COMMENTS_HEADER = "COMMENTS"

RUBRIC_STATEMENTS: Mapping[str, str] = {
    "form_accuracy": "The poem follows the requested form, including any meter "
                     "and rhyme constraints in the instructions.",
    "theme_alignment": "The poem addresses the requested theme.",
    "creativity": "The poem is creative and original.",
    "lexical_diversity": "The poem draws on a varied vocabulary.",
    "idiosyncrasy": "The poem has a distinctive, personal voice.",
    "emotional_resonance": "The poem evokes an emotional response.",
    "literary_devices": "The poem makes skillful use of literary devices such as "
                        "metaphor, simile, personification, or allusion.",
    "imagery": "The poem calls up vivid images and engages the senses.",
    "overall_quality": "Overall, this is a good poem.",
    "human_authorship": "This poem reads as if a human wrote it.",
}

OPEN_QUESTIONS = (
    "Briefly explain the score you gave for overall quality.",
    "Briefly explain the score you gave for human authorship.",
    "Any further comments on the poem.",
)

FORMAT_REMINDER = (
    f"REMINDER: reply with a {SCORES_HEADER} block followed by a "
    f"{COMMENTS_HEADER} block. The {SCORES_HEADER} block must contain exactly "
    f"{len(DIMENSIONS)} lines, one per dimension, each formatted as "
    f"'<dimension>: <integer {LIKERT_MIN}-{LIKERT_MAX}>', with the dimension "
    "names spelled exactly as listed."
)


@dataclass(frozen=True)
class DimensionScores:
    """The ten rubric scores, each an integer from 1 to 5."""

    form_accuracy: int
    theme_alignment: int
    creativity: int
    lexical_diversity: int
    idiosyncrasy: int
    emotional_resonance: int
    literary_devices: int
    imagery: int
    overall_quality: int
    human_authorship: int

    def __post_init__(self) -> None:
        for dim in DIMENSIONS:
            value = getattr(self, dim)
            if not isinstance(value, int) or isinstance(value, bool) \
                    or not LIKERT_MIN <= value <= LIKERT_MAX:
                raise ValueError(
                    f"{dim} must be an integer in [{LIKERT_MIN}, {LIKERT_MAX}], got {value!r}")

    def as_dict(self) -> dict[str, int]:
        return {dim: getattr(self, dim) for dim in DIMENSIONS}

    @classmethod
    def from_dict(cls, raw: Mapping[str, int]) -> "DimensionScores":
        return cls(**{dim: raw[dim] for dim in DIMENSIONS})


def _indent(text: str) -> str:
    return "\n".join("    " + line for line in text.splitlines())


def render_judge_prompt(generation_prompt: str, poem: str) -> str:
    """Render the deterministic judging prompt for one poem.

    The embedded texts are indented four spaces so they cannot collide with
    the column-zero section markers the parser keys on.
    """
    if not generation_prompt.strip():
        raise ValueError("generation prompt is empty")
    if not poem.strip():
        raise ValueError("poem text is empty")
    lines = [
        "You are judging a poem that was written to the following instructions.",
        "",
        "INSTRUCTIONS:",
        _indent(generation_prompt),
        "",
        "POEM:",
        _indent(poem),
        "",
        f"Rate your agreement with each statement on a scale from {LIKERT_MIN} "
        f"(strongly disagree) to {LIKERT_MAX} (strongly agree).",
        "",
    ]
    for i, dim in enumerate(DIMENSIONS, start=1):
        lines.append(f"{i}. {dim}: {RUBRIC_STATEMENTS[dim]}")
    lines.append("")
    lines.append("Then answer in free text:")
    for i, question in enumerate(OPEN_QUESTIONS, start=1):
        lines.append(f"{i}. {question}")
    lines.extend([
        "",
        f"Format your reply exactly as: a line reading {SCORES_HEADER}, then one "
        f"line per dimension as '<dimension>: <integer {LIKERT_MIN}-{LIKERT_MAX}>' "
        f"in the order listed, then a line reading {COMMENTS_HEADER}, then your "
        "numbered free-text answers.",
    ])
    return "\n".join(lines)


@dataclass(frozen=True)
class ParseResult:
    scores: DimensionScores | None
    comments: tuple[str, ...] = ()
    failure: str | None = None


def _tail_after_last_header(text: str, header: str) -> str | None:
    matches = list(re.finditer(rf"^\s*{header}\b.*$", text, re.MULTILINE))
    if not matches:
        return None
    return text[matches[-1].end():]


def parse_judge_response(text: str) -> ParseResult:
    """Extract the ten scores and up to three comments from a judge reply.

    Scores are read from '<dimension>: <n>' lines (after the last SCORES
    header when one exists); a 'Question N: <n>' style line is accepted as a
    fallback for a missing dimension. Any missing or out-of-range dimension
    makes the whole parse fail, naming the dimension.
    """
    region = _tail_after_last_header(text, SCORES_HEADER)
    score_region = region if region is not None else text
    values: dict[str, int] = {}
    problems: list[str] = []
    for i, dim in enumerate(DIMENSIONS, start=1):
        match = re.search(rf"^\W*{re.escape(dim)}\s*[:=\-]\s*(\d+)\b",
                          score_region, re.MULTILINE | re.IGNORECASE)
        if match is None:
            match = re.search(rf"^\s*(?:question|q)\s*\.?\s*{i}\s*[:.)\]=-]\s*(\d+)\b",
                              text, re.MULTILINE | re.IGNORECASE)
        if match is None:
            problems.append(f"{dim}: no score found")
            continue
        value = int(match.group(1))
        if not LIKERT_MIN <= value <= LIKERT_MAX:
            problems.append(f"{dim}: score {value} outside [{LIKERT_MIN}, {LIKERT_MAX}]")
            continue
        values[dim] = value
    if problems:
        return ParseResult(scores=None, failure="; ".join(problems))

    comments: list[str] = []
    comment_region = _tail_after_last_header(text, COMMENTS_HEADER)
    if comment_region is not None:
        for m in re.finditer(r"^\s*\d+\s*[.):\-]\s*(\S.*)$", comment_region, re.MULTILINE):
            comments.append(m.group(1).strip())
            if len(comments) == 3:
                break
    return ParseResult(scores=DimensionScores(**values), comments=tuple(comments))


class TransportError(RuntimeError):
    """A request to the judge endpoint failed (network, HTTP, or payload shape)."""


class JudgeTransport(Protocol):
    def send(self, prompt: str) -> str: ...


@dataclass(frozen=True)
class RetryPolicy:
    """max_retries is the total attempt budget (first try included)."""

    max_retries: int = 3
    backoff_base: float = 0.5
    backoff_cap: float = 8.0

    def __post_init__(self) -> None:
        if self.max_retries < 1:
            raise ValueError("max_retries must be at least 1")

    def backoff(self, attempt: int) -> float:
        return min(self.backoff_base * 2 ** (attempt - 1), self.backoff_cap)


@dataclass
class HttpChatTransport:
    """Chat-completions HTTP adapter; credentials come from the environment.

    Sends {model, messages} to the endpoint and returns the first choice's
    message content. The API key is read from api_key_env at send time and
    never stored or logged.
    """

    endpoint: str
    model: str
    api_key_env: str = "POEMETRIC_API_KEY"
    timeout: float = 120.0

    def send(self, prompt: str) -> str:
        headers = {"Content-Type": "application/json"}
        key = os.environ.get(self.api_key_env)
        if key:
            headers["Authorization"] = f"Bearer {key}"
        payload = {
            "model": self.model,
            "messages": [{"role": "user", "content": prompt}],
            "temperature": 0,
        }
        try:
            resp = requests.post(self.endpoint, json=payload, headers=headers,
                                 timeout=self.timeout)
        except requests.RequestException as exc:
            raise TransportError(f"request failed: {exc}") from exc
        if resp.status_code != 200:
            raise TransportError(f"endpoint returned HTTP {resp.status_code}")
        try:
            return resp.json()["choices"][0]["message"]["content"]
        except (ValueError, KeyError, IndexError, TypeError) as exc:
            raise TransportError(f"malformed response body: {exc!r}") from exc


@dataclass(frozen=True)
class JudgeTranscript:
    """Full record of one judging exchange; either scores or failure is set."""

    poem_id: str
    judge: str
    prompt: str
    response: str | None
    scores: DimensionScores | None
    comments: tuple[str, ...]
    failure: str | None
    attempts: int
    elapsed_s: float

    def as_dict(self) -> dict:
        return {
            "poem_id": self.poem_id,
            "judge": self.judge,
            "prompt": self.prompt,
            "response": self.response,
            "scores": self.scores.as_dict() if self.scores else None,
            "comments": list(self.comments),
            "failure": self.failure,
            "attempts": self.attempts,
            "elapsed_s": self.elapsed_s,
        }


class JudgeError(RuntimeError):
    """Transport gave out before a response was obtained; carries the transcript."""

    def __init__(self, message: str, transcript: JudgeTranscript):
        super().__init__(message)
        self.transcript = transcript


def evaluate_poem(
    record: PoemRecord,
    transport: JudgeTransport,
    policy: RetryPolicy = RetryPolicy(),
    *,
    judge: str = "llm-judge",
    poem: str | None = None,
    transcript_ref: str | None = None,
    sleep: Callable[[float], None] = time.sleep,
) -> tuple[EvaluationRecord | None, JudgeTranscript]:
    """Judge one poem, retrying within the policy's attempt budget.

    A malformed reply triggers a retry with a format reminder appended to the
    prompt. Returns (None, transcript) when every attempt parsed badly;
    raises JudgeError when the transport never produced a response.
    """
    body = poem if poem is not None else record.body
    base_prompt = render_judge_prompt(render_generation_prompt(record), body)
    prompt = base_prompt
    start = time.perf_counter()
    attempts = 0
    last_failure = "no attempts made"
    response: str | None = None
    while attempts < policy.max_retries:
        attempts += 1
        try:
            response = transport.send(prompt)
        except TransportError as exc:
            if attempts >= policy.max_retries:
                transcript = JudgeTranscript(
                    poem_id=record.id, judge=judge, prompt=prompt, response=None,
                    scores=None, comments=(), failure=f"transport: {exc}",
                    attempts=attempts, elapsed_s=time.perf_counter() - start)
                raise JudgeError(str(exc), transcript) from exc
            sleep(policy.backoff(attempts))
            continue
        parsed = parse_judge_response(response)
        if parsed.scores is not None:
            transcript = JudgeTranscript(
                poem_id=record.id, judge=judge, prompt=prompt, response=response,
                scores=parsed.scores, comments=parsed.comments, failure=None,
                attempts=attempts, elapsed_s=time.perf_counter() - start)
            evaluation = EvaluationRecord(
                poem_id=record.id, judge=judge, scores=parsed.scores.as_dict(),
                comments=parsed.comments, transcript_ref=transcript_ref)
            return evaluation, transcript
        last_failure = parsed.failure or "unparseable reply"
        prompt = base_prompt + "\n\n" + FORMAT_REMINDER
    transcript = JudgeTranscript(
        poem_id=record.id, judge=judge, prompt=prompt, response=response,
        scores=None, comments=(), failure=f"parse: {last_failure}",
        attempts=attempts, elapsed_s=time.perf_counter() - start)
    return None, transcript


@dataclass
class JudgeRunSummary:
    scored: int = 0
    unscored: int = 0
    failed: int = 0
    skipped: int = 0
    evaluations: list[EvaluationRecord] = field(default_factory=list)


def _completed_ids(transcript_path: str) -> set[str]:
    done: set[str] = set()
    if not os.path.exists(transcript_path):
        return done
    with open(transcript_path, encoding="utf-8") as fh:
        for line in fh:
            if line.strip():
                done.add(str(json.loads(line)["poem_id"]))
    return done


def judge_corpus(
    records: Sequence[PoemRecord],
    transport: JudgeTransport,
    transcript_path: str,
    *,
    policy: RetryPolicy = RetryPolicy(),
    judge: str = "llm-judge",
    max_inflight: int = 4,
    sleep: Callable[[float], None] = time.sleep,
) -> JudgeRunSummary:
    """Judge a corpus with bounded concurrency and a resumable transcript.

    Each finished exchange is appended to the transcript JSONL immediately;
    poem ids already present there are skipped, so an interrupted run can be
    rerun against the same file. Transport failures are recorded and counted
    without aborting the rest of the run.
    """
    if max_inflight < 1:
        raise ValueError("max_inflight must be at least 1")
    done = _completed_ids(transcript_path)
    todo = [rec for rec in records if rec.id not in done]
    summary = JudgeRunSummary(skipped=len(records) - len(todo))
    order = {rec.id: i for i, rec in enumerate(records)}
    ref = os.path.basename(transcript_path)
    with open(transcript_path, "a", encoding="utf-8") as sink:
        with ThreadPoolExecutor(max_workers=max_inflight) as pool:
            futures = {
                pool.submit(evaluate_poem, rec, transport, policy, judge=judge,
                            transcript_ref=ref, sleep=sleep): rec
                for rec in todo
            }
            for future in as_completed(futures):
                try:
                    evaluation, transcript = future.result()
                except JudgeError as exc:
                    transcript = exc.transcript
                    evaluation = None
                    summary.failed += 1
                else:
                    if evaluation is not None:
                        summary.scored += 1
                        summary.evaluations.append(evaluation)
                    else:
                        summary.unscored += 1
                sink.write(json.dumps(transcript.as_dict(), ensure_ascii=False) + "\n")
                sink.flush()
    summary.evaluations.sort(key=lambda ev: order[ev.poem_id])
    return summary
