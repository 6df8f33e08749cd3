"""Command-line entry points: analyze, gen-prompts, judge, agreement.

Settings resolve in three layers: built-in defaults, then a key=value config
file (--config), then explicit flags.
"""

from __future__ import annotations

import argparse
import csv
import json
import sys
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, fields
from typing import Callable, IO, Sequence

from . import __version__
from .agreement import pao, spearman_rho, weighted_kappa
from .corpus import (
    CorpusValidationError,
    PoemRecord,
    PoemResult,
    iter_report_ratings,
    load_corpus,
    render_generation_prompt,
    write_report,
)
from .form_validator import evaluate_form
from .judge_client import HttpChatTransport, JudgeTransport, RetryPolicy, judge_corpus
from .lexicon import load_dictionary
from .style_metrics import STOPWORDS_VERSION, default_stopwords, mattr, repetition_rate, tokenize

# Candidate poems pair with their reference for repetition scoring through
# the id convention "<reference_id>__<variant>".
PAIR_SEPARATOR = "__"


@dataclass
class RunConfig:
    dictionary: str | None = None
    corpus: str | None = None
    out: str | None = None
    meter_gate: float = 0.7
    rhyme_gate: float = 0.7
    line_agreement: float = 0.8
    mattr_window: int = 50
    strict_sestina: bool = False
    refrain_tolerance: int = 0
    endpoint: str | None = None
    model: str | None = None
    max_inflight: int = 4
    max_retries: int = 3
    api_key_env: str = "POEMETRIC_API_KEY"
    judge: str | None = None
    transcript: str = "judge-transcripts.jsonl"


def _parse_bool(raw: str) -> bool:
    lowered = raw.strip().lower()
    if lowered in ("1", "true", "yes", "on"):
        return True
    if lowered in ("0", "false", "no", "off"):
        return False
    raise ValueError(f"expected a boolean, got {raw!r}")


_COERCERS: dict[str, Callable[[str], object]] = {
    "dictionary": str,
    "corpus": str,
    "out": str,
    "meter_gate": float,
    "rhyme_gate": float,
    "line_agreement": float,
    "mattr_window": int,
    "strict_sestina": _parse_bool,
    "refrain_tolerance": int,
    "endpoint": str,
    "model": str,
    "max_inflight": int,
    "max_retries": int,
    "api_key_env": str,
    "judge": str,
    "transcript": str,
}


def parse_config_file(path: str) -> dict[str, object]:
    """Read a flat key = value settings file; '#' starts a comment line."""
    values: dict[str, object] = {}
    with open(path, encoding="utf-8") as fh:
        for lineno, raw in enumerate(fh, start=1):
            line = raw.strip()
            if not line or line.startswith("#"):
                continue
            if "=" not in line:
                raise ValueError(f"{path}:{lineno}: expected 'key = value', got {line!r}")
            key, _, value = line.partition("=")
            key = key.strip().lower().replace("-", "_")
            if key == "dict":
                key = "dictionary"
            if key not in _COERCERS:
                raise ValueError(f"{path}:{lineno}: unknown setting {key!r}")
            try:
                values[key] = _COERCERS[key](value.strip())
            except ValueError as exc:
                raise ValueError(f"{path}:{lineno}: bad value for {key}: {exc}") from exc
    return values


def resolve_config(args: argparse.Namespace) -> RunConfig:
    config = RunConfig()
    if getattr(args, "config", None):
        for key, value in parse_config_file(args.config).items():
            setattr(config, key, value)
    for f in fields(RunConfig):
        flag_value = getattr(args, f.name, None)
        if flag_value is not None:
            setattr(config, f.name, flag_value)
    return config


def _require(config: RunConfig, *names: str) -> None:
    missing = [name for name in names if getattr(config, name) in (None, "")]
    if missing:
        flags = ", ".join("--" + name.replace("_", "-").replace("dictionary", "dict")
                          for name in missing)
        raise ValueError(f"missing required settings: {flags}")


def _analyze_one(
    record: PoemRecord,
    by_id: dict[str, PoemRecord],
    lex,
    stopwords: frozenset[str],
    config: RunConfig,
) -> PoemResult:
    report = evaluate_form(
        record.body, record.to_form_spec(), lex,
        meter_gate=config.meter_gate,
        rhyme_gate=config.rhyme_gate,
        line_agreement=config.line_agreement,
        strict_sestina=config.strict_sestina,
        refrain_tolerance=config.refrain_tolerance,
    )
    stream = tokenize(record.body, stopwords)
    try:
        diversity = mattr(stream.tokens, config.mattr_window)
    except ValueError:
        diversity = None
    repetition = None
    base_id, sep, _ = record.id.rpartition(PAIR_SEPARATOR)
    if sep and base_id in by_id and base_id != record.id:
        try:
            repetition = repetition_rate(stream, tokenize(by_id[base_id].body, stopwords))
        except ValueError:
            repetition = None
    return PoemResult(record=record, form_report=report, mattr=diversity, repetition=repetition)


def cmd_analyze(config: RunConfig, stdout: IO[str]) -> int:
    _require(config, "dictionary", "corpus")
    lex = load_dictionary(config.dictionary)
    records = load_corpus(config.corpus)
    stopwords = default_stopwords()
    by_id = {rec.id: rec for rec in records}
    with ThreadPoolExecutor() as pool:
        results = list(pool.map(
            lambda rec: _analyze_one(rec, by_id, lex, stopwords, config), records))
    for res in results:
        verdict = "PASS" if res.form_report.passed else "FAIL"
        print(f"{verdict}  {res.record.id}  ({res.record.form})", file=stdout)
    out_path = config.out or "poemetric-report.json"
    doc = write_report(results, out_path, report_config(config, lex))
    for author, stats in doc["authors"].items():
        print(f"{author}: form accuracy {stats['form_accuracy']:.2f} "
              f"over {stats['poems']} poem(s)", file=stdout)
    print(f"report written to {out_path}", file=stdout)
    return 0


def report_config(config: RunConfig, lex) -> dict:
    return {
        "meter_gate": config.meter_gate,
        "rhyme_gate": config.rhyme_gate,
        "line_agreement": config.line_agreement,
        "mattr_window": config.mattr_window,
        "strict_sestina": config.strict_sestina,
        "refrain_tolerance": config.refrain_tolerance,
        "dictionary_fingerprint": lex.fingerprint,
        "dictionary_words": lex.word_count,
        "stopwords_version": STOPWORDS_VERSION,
    }


def cmd_gen_prompts(config: RunConfig, stdout: IO[str]) -> int:
    _require(config, "corpus")
    records = load_corpus(config.corpus)
    themeless = [rec.id for rec in records if not rec.theme]
    if themeless:
        raise ValueError(f"records without a theme cannot be prompted: {themeless}")
    lines = [json.dumps({"id": rec.id, "prompt": render_generation_prompt(rec)},
                        ensure_ascii=False)
             for rec in records]
    if config.out:
        with open(config.out, "w", encoding="utf-8") as fh:
            fh.write("\n".join(lines) + "\n")
        print(f"{len(lines)} prompt(s) written to {config.out}", file=stdout)
    else:
        for line in lines:
            print(line, file=stdout)
    return 0


def cmd_judge(
    config: RunConfig,
    stdout: IO[str],
    transport: JudgeTransport | None = None,
) -> int:
    _require(config, "corpus")
    records = load_corpus(config.corpus)
    if transport is None:
        _require(config, "endpoint", "model")
        transport = HttpChatTransport(
            endpoint=config.endpoint, model=config.model, api_key_env=config.api_key_env)
    judge_name = config.judge or config.model or "llm-judge"
    summary = judge_corpus(
        records, transport, config.transcript,
        policy=RetryPolicy(max_retries=config.max_retries),
        judge=judge_name, max_inflight=config.max_inflight)
    out_path = config.out or "judge-evaluations.jsonl"
    with open(out_path, "a", encoding="utf-8") as fh:
        for evaluation in summary.evaluations:
            fh.write(json.dumps(evaluation.as_dict(), ensure_ascii=False) + "\n")
    print(f"scored {summary.scored}, skipped {summary.skipped} already in "
          f"{config.transcript}", file=stdout)
    if summary.unscored:
        print(f"warning: {summary.unscored} poem(s) returned unparseable replies "
              f"after retries", file=sys.stderr)
    if summary.failed:
        print(f"warning: {summary.failed} poem(s) hit transport failures; their "
              f"transcript lines must be removed before a rerun retries them",
              file=sys.stderr)
    print(f"evaluations appended to {out_path}", file=stdout)
    return 0


def _read_ratings(path: str) -> dict[tuple[str, str], int]:
    """Load one rater's ratings from a CSV or a report JSON file."""
    rows: list[tuple[str, str, str, int]] = []
    if path.endswith(".json"):
        with open(path, encoding="utf-8") as fh:
            rows = list(iter_report_ratings(json.load(fh)))
    else:
        with open(path, encoding="utf-8", newline="") as fh:
            reader = csv.DictReader(fh)
            needed = {"item_id", "rater_id", "dimension", "score"}
            if reader.fieldnames is None or not needed <= set(reader.fieldnames):
                raise ValueError(f"{path}: expected CSV columns {sorted(needed)}")
            for row in reader:
                rows.append((row["item_id"], row["rater_id"],
                             row["dimension"], int(row["score"])))
    if not rows:
        raise ValueError(f"{path}: no ratings found")
    raters = sorted({r for _, r, _, _ in rows})
    if len(raters) > 1:
        raise ValueError(f"{path}: contains several raters {raters}; "
                         "agreement compares one rater per file")
    ratings: dict[tuple[str, str], int] = {}
    for item, _, dim, score in rows:
        key = (item, dim)
        if key in ratings:
            raise ValueError(f"{path}: duplicate rating for item {item!r}, "
                             f"dimension {dim!r}")
        ratings[key] = score
    return ratings


def cmd_agreement(config: RunConfig, ratings_a: str, ratings_b: str,
                  stdout: IO[str]) -> int:
    a = _read_ratings(ratings_a)
    b = _read_ratings(ratings_b)
    if set(a) != set(b):
        diff = sorted(set(a) ^ set(b))
        raise ValueError(f"rating files are misaligned; first mismatch: {diff[0]}")
    keys = sorted(a)
    series_a = [a[k] for k in keys]
    series_b = [b[k] for k in keys]

    def stats(xs: list[int], ys: list[int]) -> dict:
        try:
            rho = spearman_rho(xs, ys)
        except ValueError:
            rho = None
        return {"pao": pao(xs, ys), "weighted_kappa": weighted_kappa(xs, ys),
                "spearman_rho": rho, "n": len(xs)}

    overall = stats(series_a, series_b)
    dims = sorted({dim for _, dim in keys})
    per_dimension = {}
    for dim in dims:
        xs = [a[k] for k in keys if k[1] == dim]
        ys = [b[k] for k in keys if k[1] == dim]
        per_dimension[dim] = stats(xs, ys)

    def fmt(value: float | None) -> str:
        return "n/a" if value is None else f"{value:.3f}"

    width = max(len(d) for d in dims + ["overall"])
    print(f"{'dimension':<{width}}  {'n':>4}  {'pao':>6}  {'kappa':>6}  {'rho':>6}",
          file=stdout)
    for dim in dims:
        s = per_dimension[dim]
        print(f"{dim:<{width}}  {s['n']:>4}  {fmt(s['pao']):>6}  "
              f"{fmt(s['weighted_kappa']):>6}  {fmt(s['spearman_rho']):>6}", file=stdout)
    print(f"{'overall':<{width}}  {overall['n']:>4}  {fmt(overall['pao']):>6}  "
          f"{fmt(overall['weighted_kappa']):>6}  {fmt(overall['spearman_rho']):>6}",
          file=stdout)
    if config.out:
        with open(config.out, "w", encoding="utf-8") as fh:
            json.dump({"overall": overall, "per_dimension": per_dimension}, fh, indent=2)
            fh.write("\n")
        print(f"agreement written to {config.out}", file=stdout)
    return 0


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="poemetric",
        description="Rule-based analysis of fixed-form poetry, plus an LLM judge harness.")
    parser.add_argument("--version", action="version", version=f"poemetric {__version__}")
    sub = parser.add_subparsers(dest="command", required=True)

    def common(p: argparse.ArgumentParser, *, with_dict: bool) -> None:
        p.add_argument("--config", help="key = value settings file")
        p.add_argument("--corpus", help="poem corpus (JSONL)")
        p.add_argument("--out", help="output file path")
        if with_dict:
            p.add_argument("--dict", dest="dictionary",
                           help="pronouncing dictionary file")

    analyze = sub.add_parser("analyze", help="score every poem and write the report")
    common(analyze, with_dict=True)
    analyze.add_argument("--meter-gate", type=float, dest="meter_gate")
    analyze.add_argument("--rhyme-gate", type=float, dest="rhyme_gate")
    analyze.add_argument("--line-agreement", type=float, dest="line_agreement")
    analyze.add_argument("--mattr-window", type=int, dest="mattr_window")
    analyze.add_argument("--strict-sestina", action=argparse.BooleanOptionalAction,
                         dest="strict_sestina")
    analyze.add_argument("--refrain-tolerance", type=int, dest="refrain_tolerance")
    analyze.set_defaults(handler="analyze")

    gen = sub.add_parser("gen-prompts", help="render generation prompts as JSONL")
    common(gen, with_dict=False)
    gen.set_defaults(handler="gen-prompts")

    judge = sub.add_parser("judge", help="run the LLM judge over the corpus")
    common(judge, with_dict=False)
    judge.add_argument("--endpoint", help="chat-completions endpoint URL")
    judge.add_argument("--model", help="judge model name")
    judge.add_argument("--max-inflight", type=int, dest="max_inflight")
    judge.add_argument("--max-retries", type=int, dest="max_retries")
    judge.add_argument("--api-key-env", dest="api_key_env",
                       help="environment variable holding the API key")
    judge.add_argument("--judge", help="rater name recorded on evaluations")
    judge.add_argument("--transcript", help="resumable transcript JSONL path")
    judge.set_defaults(handler="judge")

    agree = sub.add_parser("agreement",
                           help="agreement statistics between two rating files")
    agree.add_argument("ratings_a", help="first rater's file (.csv or report .json)")
    agree.add_argument("ratings_b", help="second rater's file")
    agree.add_argument("--config", help="key = value settings file")
    agree.add_argument("--out", help="write statistics as JSON here")
    agree.set_defaults(handler="agreement")
    return parser


def main(
    argv: Sequence[str] | None = None,
    transport: JudgeTransport | None = None,
    stdout: IO[str] = sys.stdout,
) -> int:
    args = build_parser().parse_args(argv)
    try:
        config = resolve_config(args)
        if args.handler == "analyze":
            return cmd_analyze(config, stdout)
        if args.handler == "gen-prompts":
            return cmd_gen_prompts(config, stdout)
        if args.handler == "judge":
            return cmd_judge(config, stdout, transport)
        return cmd_agreement(config, args.ratings_a, args.ratings_b, stdout)
    except CorpusValidationError as exc:
        print("corpus validation failed:", file=sys.stderr)
        for where, message in exc.issues:
            print(f"  {where}: {message}", file=sys.stderr)
        return 1
    except (ValueError, OSError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1


if __name__ == "__main__":
    sys.exit(main())
