"""Tests for vocabulary diversity, repetition, and frequency-profile metrics."""

import io
import random

import pytest

from poemetric.style_metrics import (
    PROFILE_BASES,
    FrequencyProfile,
    TokenStream,
    cosine_similarity,
    default_imagery_lexicon,
    default_stopwords,
    frequency_profile,
    load_word_list,
    mattr,
    repetition_rate,
    tokenize,
)


def stream(*content):
    return TokenStream(tokens=tuple(content), content_tokens=tuple(content))


class TestTokenize:
    def test_tokens_lowercased_and_stripped(self):
        got = tokenize('The Moon has spilled its "silver" on the lake!')
        assert got.tokens == ("the", "moon", "has", "spilled", "its",
                              "silver", "on", "the", "lake")

    def test_content_tokens_drop_stopwords(self):
        got = tokenize("The moon on the lake")
        assert got.content_tokens == ("moon", "lake")
        assert got.types == frozenset({"the", "moon", "on", "lake"})
        assert got.content_types == frozenset({"moon", "lake"})

    def test_custom_stopwords(self):
        got = tokenize("the moon on the lake", stopwords=frozenset({"moon"}))
        assert got.content_tokens == ("the", "on", "the", "lake")


class TestWordLists:
    def test_load_from_stream(self):
        words = load_word_list(io.StringIO("Moon\n\n  lake \nMOON\n"))
        assert words == frozenset({"moon", "lake"})

    def test_load_from_path(self, tmp_path):
        p = tmp_path / "words.txt"
        p.write_text("sun\nstar\n", encoding="utf-8")
        assert load_word_list(str(p)) == frozenset({"sun", "star"})

    def test_default_stopwords(self):
        stops = default_stopwords()
        assert {"the", "and", "of", "a"} <= stops
        assert "river" not in stops

    def test_default_imagery(self):
        imagery = default_imagery_lexicon()
        assert {"moon", "river", "stone"} <= imagery
        assert "the" not in imagery


class TestMattr:
    def test_short_stream_is_plain_ttr(self):
        assert mattr(["a", "b", "a"], window=5) == pytest.approx(2 / 3)

    def test_stream_equal_to_window_is_plain_ttr(self):
        assert mattr(["a", "b", "a"], window=3) == pytest.approx(2 / 3)

    def test_sliding_windows(self):
        assert mattr(["a", "a", "b", "a"], window=2) == pytest.approx(5 / 6)
        assert mattr(["a", "b", "a", "c"], window=2) == pytest.approx(1.0)

    def test_constant_stream(self):
        assert mattr(["a"] * 10, window=4) == pytest.approx(1 / 4)

    def test_matches_brute_force(self):
        rng = random.Random(20240817)
        for _ in range(25):
            n = rng.randint(1, 60)
            tokens = [rng.choice("abcde") for _ in range(n)]
            window = rng.randint(1, 12)
            if n <= window:
                expected = len(set(tokens)) / n
            else:
                spans = [tokens[i:i + window] for i in range(n - window + 1)]
                expected = sum(len(set(s)) / window for s in spans) / len(spans)
            assert mattr(tokens, window=window) == pytest.approx(expected, abs=1e-12)

    def test_empty_stream_rejected(self):
        with pytest.raises(ValueError):
            mattr([], window=3)

    def test_bad_window_rejected(self):
        with pytest.raises(ValueError):
            mattr(["a"], window=0)


class TestRepetitionRate:
    def test_fraction_of_candidate_vocabulary(self):
        cand = stream("moon", "lake", "stone", "fire")
        ref = stream("moon", "stone", "river")
        assert repetition_rate(cand, ref) == pytest.approx(2 / 4)

    def test_duplicates_do_not_change_the_rate(self):
        cand = stream("moon", "moon", "moon", "lake")
        ref = stream("moon")
        assert repetition_rate(cand, ref) == pytest.approx(1 / 2)

    def test_disjoint_and_identical(self):
        assert repetition_rate(stream("a"), stream("b")) == 0.0
        assert repetition_rate(stream("a", "b"), stream("b", "a")) == 1.0

    def test_candidate_needs_content(self):
        empty = TokenStream(tokens=("the",), content_tokens=())
        with pytest.raises(ValueError):
            repetition_rate(empty, stream("moon"))


class TestFrequencyProfile:
    TEXTS = ["The moon on the lake,\nThe silver moon.", "Dark water under stone."]

    def test_all_counts_everything(self):
        prof = frequency_profile(self.TEXTS, basis="all")
        assert prof.counts["the"] == 3
        assert prof.counts["moon"] == 2
        assert prof.total == 12

    def test_content_drops_stopwords(self):
        prof = frequency_profile(self.TEXTS, basis="content")
        assert "the" not in prof.counts
        assert prof.counts["moon"] == 2
        assert prof.counts["water"] == 1

    def test_opening_words_take_line_heads(self):
        prof = frequency_profile(self.TEXTS, basis="opening-words")
        assert prof.counts == {"the": 2, "dark": 1}

    def test_imagery_filters_to_lexicon(self):
        prof = frequency_profile(self.TEXTS, basis="imagery",
                                 imagery=frozenset({"moon", "stone"}))
        assert prof.counts == {"moon": 2, "stone": 1}

    def test_imagery_defaults_to_bundled_lexicon(self):
        prof = frequency_profile(["moon over zzxqj"], basis="imagery")
        assert prof.counts == {"moon": 1}

    def test_bases_registry(self):
        assert PROFILE_BASES == ("all", "content", "opening-words", "imagery")

    def test_unknown_basis_rejected(self):
        with pytest.raises(ValueError, match="unknown basis"):
            frequency_profile(self.TEXTS, basis="endings")


class TestCosineSimilarity:
    def test_identical_profiles(self):
        prof = frequency_profile(["the moon on the lake"], basis="all")
        assert cosine_similarity(prof, prof) == pytest.approx(1.0, abs=1e-12)

    def test_half_overlap_anchor(self):
        got = cosine_similarity({"a": 1, "b": 1}, {"a": 1})
        assert got == pytest.approx(0.7071067811865475, abs=1e-9)

    def test_orthogonal_profiles(self):
        assert cosine_similarity({"a": 1}, {"b": 1}) == 0.0

    def test_scale_invariance(self):
        assert cosine_similarity({"a": 2, "b": 4}, {"a": 1, "b": 2}) == pytest.approx(1.0)

    def test_mixed_argument_types(self):
        prof = FrequencyProfile(basis="all", counts={"a": 1, "b": 1})
        assert cosine_similarity(prof, {"a": 1, "b": 1}) == pytest.approx(1.0)

    def test_zero_profile_rejected(self):
        with pytest.raises(ValueError):
            cosine_similarity({"a": 0}, {"a": 1})
