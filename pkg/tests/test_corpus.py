"""Tests for corpus I/O, generation prompts, evaluation records, and the
versioned report."""

import io
import json

import pytest

from poemetric.corpus import (
    DIMENSIONS,
    REPORT_SCHEMA,
    REQUIRED_CONFIG_KEYS,
    CorpusValidationError,
    EvaluationRecord,
    PoemRecord,
    PoemResult,
    aggregate_authors,
    iter_report_ratings,
    load_corpus,
    render_generation_prompt,
    write_corpus,
    write_report,
)
from poemetric.form_validator import FormReport

POEM = "The moon has spilled its silver on the lake,\nAnd every line is level with the last."


def record(**overrides):
    base = dict(id="p1", form="sonnet", body=POEM)
    base.update(overrides)
    return PoemRecord(**base)


def jsonl(*objs):
    return io.StringIO("\n".join(json.dumps(o) for o in objs) + "\n")


def passing_report(form="sonnet", passed=True):
    return FormReport(
        form=form, line_count=2, stanza_lengths=(2,), structural_valid=None,
        structural_failures=(), meter_name=None, meter_ratio=None, line_matches=(),
        rhyme_target=None, rhyme_ratio=None, inferred_scheme="AB", passed=passed)


def scores(value=3):
    return {dim: value for dim in DIMENSIONS}


CONFIG = {
    "meter_gate": 0.7,
    "rhyme_gate": 0.7,
    "line_agreement": 0.8,
    "mattr_window": 50,
    "dictionary_fingerprint": "0" * 64,
    "stopwords_version": "stopwords-en-v1",
}


class TestPoemRecordValidate:
    def test_valid_record(self):
        assert record().validate() == []
        assert record(authored_by="human").validate() == []
        assert record(authored_by="model:example-bard").validate() == []

    def test_bad_id(self):
        assert record(id="").validate()
        assert record(id=" p1 ").validate()

    def test_unknown_form(self):
        problems = record(form="haiku").validate()
        assert any("haiku" in p for p in problems)

    def test_empty_body(self):
        assert record(body="\n\n").validate()

    def test_bad_authored_by(self):
        assert record(authored_by="robot").validate()
        assert record(authored_by="model:").validate()

    def test_bad_meter_is_reported(self):
        problems = record(meter="dactylic hexameter").validate()
        assert any("unknown meter" in p for p in problems)


class TestLoadCorpus:
    def test_jsonl_happy_path(self):
        got = load_corpus(jsonl(
            {"id": "a", "form": "sonnet", "body": POEM},
            {"id": "b", "form": "ghazal", "body": POEM, "authored_by": "human"},
        ))
        assert [r.id for r in got] == ["a", "b"]
        assert got[0].authored_by == "unknown"
        assert got[1].authored_by == "human"

    def test_blank_lines_skipped(self):
        src = io.StringIO('\n{"id": "a", "form": "sonnet", "body": %s}\n\n' % json.dumps(POEM))
        assert len(load_corpus(src)) == 1

    def test_bad_json_reports_line(self):
        src = io.StringIO('{"id": "a", "form": "sonnet", "body": "x"}\n{oops\n')
        with pytest.raises(CorpusValidationError) as exc:
            load_corpus(src)
        assert any(where == "line 2" for where, _ in exc.value.issues)

    def test_non_object_line_rejected(self):
        with pytest.raises(CorpusValidationError):
            load_corpus(io.StringIO("[1, 2]\n"))

    def test_unknown_field_rejected(self):
        with pytest.raises(CorpusValidationError) as exc:
            load_corpus(jsonl({"id": "a", "form": "sonnet", "body": POEM, "mood": "wistful"}))
        assert "mood" in str(exc.value)

    def test_missing_required_fields(self):
        with pytest.raises(CorpusValidationError) as exc:
            load_corpus(jsonl({"id": "a", "form": "sonnet"}))
        assert "body" in str(exc.value)

    def test_all_issues_collected(self):
        with pytest.raises(CorpusValidationError) as exc:
            load_corpus(jsonl(
                {"id": "a", "form": "haiku", "body": POEM},
                {"id": "b", "form": "sonnet", "body": POEM, "authored_by": "robot"},
            ))
        assert len(exc.value.issues) == 2

    def test_duplicate_ids_rejected(self):
        with pytest.raises(CorpusValidationError) as exc:
            load_corpus(jsonl(
                {"id": "a", "form": "sonnet", "body": POEM},
                {"id": "a", "form": "sonnet", "body": POEM},
            ))
        assert "duplicate id" in str(exc.value)

    def test_empty_corpus_rejected(self):
        with pytest.raises(ValueError, match="empty"):
            load_corpus(io.StringIO("\n\n"))

    def test_csv_format(self):
        csv_text = io.StringIO(
            "id,form,body,authored_by\n"
            'a,sonnet,"line one\nline two",human\n'
            "x,haiku,oops,\n"
        )
        with pytest.raises(CorpusValidationError) as exc:
            load_corpus(csv_text, fmt="csv")
        assert any("haiku" in msg for _, msg in exc.value.issues)

    def test_csv_happy_path(self):
        csv_text = io.StringIO('id,form,body\na,sonnet,"two\nlines"\n')
        got = load_corpus(csv_text, fmt="csv")
        assert got[0].body == "two\nlines"

    def test_unknown_format_rejected(self):
        with pytest.raises(ValueError, match="unknown corpus format"):
            load_corpus(io.StringIO(""), fmt="yaml")

    def test_load_from_path(self, tmp_path):
        p = tmp_path / "corpus.jsonl"
        p.write_text(json.dumps({"id": "a", "form": "sonnet", "body": POEM}) + "\n")
        assert load_corpus(str(p))[0].id == "a"

    def test_bundled_corpus(self, sample_records):
        assert len(sample_records) == 10
        assert {r.authored_by for r in sample_records} == {
            "human", "unknown", "model:example-bard"}


class TestWriteCorpus:
    def test_round_trip(self):
        recs = [record(id="a", theme="the sea"), record(id="b", authored_by="human")]
        sink = io.StringIO()
        write_corpus(recs, sink)
        sink.seek(0)
        assert load_corpus(sink) == recs

    def test_unset_fields_are_omitted(self):
        sink = io.StringIO()
        write_corpus([record()], sink)
        raw = json.loads(sink.getvalue())
        assert "title" not in raw
        assert "meter" not in raw


class TestRenderGenerationPrompt:
    def test_sonnet_with_defaults(self):
        got = render_generation_prompt(record(theme="a summer storm"))
        assert got == (
            'Please write a sonnet on the theme of "a summer storm". '
            "It should be written in iambic pentameter. "
            "It should follow the rhyme scheme ABAB CDCD EFEF GG. "
            "Respond with the poem text only, with a blank line between stanzas "
            "and no title or commentary."
        )

    def test_structural_form_has_no_targets(self):
        got = render_generation_prompt(record(form="ghazal", theme="exile"))
        assert got == (
            'Please write a ghazal on the theme of "exile". '
            "Respond with the poem text only, with a blank line between stanzas "
            "and no title or commentary."
        )

    def test_literal_meter_is_spelled_out(self):
        got = render_generation_prompt(record(form="villanelle", meter="uSuS uS", theme="rain"))
        assert "stress pattern uSuS uS" in got
        assert "u = unstressed syllable" in got

    def test_rhyme_sentence_only_for_rhyme_target_forms(self):
        got = render_generation_prompt(record(form="pantoum", rhyme="ABAB", theme="rivers"))
        assert "rhyme scheme" not in got

    def test_theme_is_required(self):
        with pytest.raises(ValueError, match="theme"):
            render_generation_prompt(record())


class TestEvaluationRecord:
    def test_round_trip(self):
        ev = EvaluationRecord(poem_id="p1", judge="judge-a", scores=scores(4),
                              comments=("tight form",), transcript_ref="t.jsonl:3")
        again = EvaluationRecord.from_dict(json.loads(json.dumps(ev.as_dict())))
        assert again == ev

    def test_as_dict_orders_dimensions(self):
        ev = EvaluationRecord(poem_id="p1", judge="j", scores=scores())
        assert list(ev.as_dict()["scores"]) == list(DIMENSIONS)

    def test_missing_dimension_rejected(self):
        partial = scores()
        partial.pop("imagery")
        with pytest.raises(ValueError, match="imagery"):
            EvaluationRecord(poem_id="p1", judge="j", scores=partial)

    def test_extra_dimension_rejected(self):
        extra = scores()
        extra["sparkle"] = 3
        with pytest.raises(ValueError, match="sparkle"):
            EvaluationRecord(poem_id="p1", judge="j", scores=extra)

    def test_out_of_range_score_rejected(self):
        bad = scores()
        bad["imagery"] = 6
        with pytest.raises(ValueError, match="integers in"):
            EvaluationRecord(poem_id="p1", judge="j", scores=bad)

    def test_boolean_score_rejected(self):
        bad = scores()
        bad["imagery"] = True
        with pytest.raises(ValueError):
            EvaluationRecord(poem_id="p1", judge="j", scores=bad)

    def test_comment_cap(self):
        with pytest.raises(ValueError, match="comments"):
            EvaluationRecord(poem_id="p1", judge="j", scores=scores(),
                             comments=("a", "b", "c", "d"))

    def test_identity_fields_required(self):
        with pytest.raises(ValueError):
            EvaluationRecord(poem_id="", judge="j", scores=scores())


class TestAggregateAuthors:
    def result(self, rec_id, authored_by, passed, mattr=None, evaluations=()):
        return PoemResult(
            record=record(id=rec_id, authored_by=authored_by),
            form_report=passing_report(passed=passed),
            mattr=mattr,
            evaluations=evaluations,
        )

    def test_grouping_and_accuracy(self):
        results = [
            self.result("a", "human", True, mattr=0.8),
            self.result("b", "human", False, mattr=0.6),
            self.result("c", "model:m", True),
        ]
        got = aggregate_authors(results)
        assert sorted(got) == ["human", "model:m"]
        assert got["human"]["poems"] == 2
        assert got["human"]["form_accuracy"] == 0.5
        assert got["human"]["mean_mattr"] == pytest.approx(0.7)
        assert got["model:m"]["form_accuracy"] == 1.0
        assert got["model:m"]["mean_mattr"] is None

    def test_mean_scores(self):
        evs = (EvaluationRecord(poem_id="a", judge="j1", scores=scores(2)),
               EvaluationRecord(poem_id="a", judge="j2", scores=scores(4)))
        got = aggregate_authors([self.result("a", "human", True, evaluations=evs)])
        assert got["human"]["mean_scores"]["imagery"] == pytest.approx(3.0)

    def test_no_evaluations_mean_scores_is_none(self):
        got = aggregate_authors([self.result("a", "human", True)])
        assert got["human"]["mean_scores"] is None


class TestWriteReport:
    def results(self):
        ev = EvaluationRecord(poem_id="a", judge="j", scores=scores(5))
        return [PoemResult(record=record(id="a", authored_by="human"),
                           form_report=passing_report(), mattr=0.9,
                           repetition=0.25, evaluations=(ev,))]

    def test_config_keys_enforced(self):
        partial = dict(CONFIG)
        del partial["dictionary_fingerprint"]
        with pytest.raises(ValueError, match="dictionary_fingerprint"):
            write_report(self.results(), io.StringIO(), partial)

    def test_document_shape(self, tmp_path):
        out = tmp_path / "report.json"
        doc = write_report(self.results(), str(out), CONFIG)
        on_disk = json.loads(out.read_text())
        assert on_disk == doc
        assert doc["schema"] == REPORT_SCHEMA
        assert doc["generator"]["name"] == "poemetric"
        assert doc["config"]["mattr_window"] == 50
        poem = doc["poems"][0]
        assert poem["id"] == "a"
        assert poem["form_report"]["passed"] is True
        assert poem["evaluations"][0]["scores"]["imagery"] == 5
        assert doc["authors"]["human"]["form_accuracy"] == 1.0

    def test_required_keys_registry(self):
        assert set(REQUIRED_CONFIG_KEYS) == set(CONFIG)

    def test_iter_report_ratings(self):
        doc = write_report(self.results(), io.StringIO(), CONFIG)
        rows = list(iter_report_ratings(doc))
        assert len(rows) == len(DIMENSIONS)
        assert rows[0] == ("a", "j", "form_accuracy", 5)

    def test_iter_report_ratings_checks_schema(self):
        with pytest.raises(ValueError, match="schema"):
            list(iter_report_ratings({"schema": "other/1"}))
