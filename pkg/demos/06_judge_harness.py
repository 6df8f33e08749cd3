"""The LLM-judge loop without a network: prompt rendering, reply parsing,
format-reminder retries, and the resumable corpus transcript.

A scripted transport stands in for the HTTP endpoint, replying from a
canned sequence, so the whole exchange is reproducible offline. Swapping in
HttpChatTransport(endpoint, model) is the only change needed for a real
run; the API key is read from POEMETRIC_API_KEY at send time.
"""

import json
import tempfile
from importlib import resources
from pathlib import Path

from poemetric.corpus import DIMENSIONS, load_corpus, render_generation_prompt
from poemetric.judge_client import (
    RetryPolicy,
    evaluate_poem,
    judge_corpus,
    render_judge_prompt,
)


def data(name):
    return resources.files("poemetric.data").joinpath(name)


class ScriptedTransport:
    def __init__(self, replies):
        self.replies = list(replies)

    def send(self, prompt):
        return self.replies.pop(0)


def reply(value, comments=()):
    lines = ["SCORES"] + [f"{dim}: {value}" for dim in DIMENSIONS]
    lines += ["COMMENTS"] + [f"{i}. {c}" for i, c in enumerate(comments, 1)]
    return "\n".join(lines)


records = load_corpus(data("sample_poems.jsonl"))
record = records[0]

# The judge sees the generation prompt and the poem body, never the author:
# poem text is indented so a poem cannot spoof the SCORES header.
prompt = render_judge_prompt(render_generation_prompt(record), record.body)
print("--- judge prompt (first 12 lines) ---")
print("\n".join(prompt.splitlines()[:12]))
print("...\n")

# First reply is nonsense; the harness retries once with a format reminder
# appended and parses the second reply.
transport = ScriptedTransport([
    "The poem is lovely, five stars.",
    reply(4, ["confident meter", "imagery thins at the turn"]),
])
evaluation, transcript = evaluate_poem(record, transport, RetryPolicy(max_retries=3))
print(f"scored {transcript.poem_id} after {transcript.attempts} attempt(s)")
print(f"scores: {evaluation.scores}")
print(f"comments: {list(evaluation.comments)}")

# Corpus runs append each exchange to a JSONL transcript keyed by poem id;
# rerunning against the same file skips everything already judged.
with tempfile.TemporaryDirectory() as tmp:
    path = str(Path(tmp) / "transcripts.jsonl")
    three = records[:3]
    summary = judge_corpus(
        three, ScriptedTransport([reply(3)] * 3), path, max_inflight=1)
    print(f"\nfirst run:  scored={summary.scored} skipped={summary.skipped}")
    rerun = judge_corpus(three, ScriptedTransport([]), path, max_inflight=1)
    print(f"second run: scored={rerun.scored} skipped={rerun.skipped}")
    entry = json.loads(Path(path).read_text().splitlines()[0])
    print(f"transcript entry keys: {sorted(entry)}")
