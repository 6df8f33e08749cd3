"""poemetric: rule-based evaluation of fixed-form English poetry.

The pipeline scans lines into stress patterns against a pronouncing
dictionary, infers rhyme schemes, checks fixed-form structure (ballad,
ghazal, limerick, pantoum, sestina, sonnet, villanelle), computes lexical
style metrics, and scores rater agreement. A separate harness sends poems
to an LLM judge over a ten-dimension rubric and keeps resumable
transcripts.
"""

__version__ = "0.1.0"

from .agreement import pao, spearman_rho, weighted_kappa
from .corpus import (
    DIMENSIONS,
    CorpusValidationError,
    EvaluationRecord,
    PoemRecord,
    PoemResult,
    REPORT_SCHEMA,
    load_corpus,
    render_generation_prompt,
    write_corpus,
    write_report,
)
from .form_validator import (
    FormReport,
    FormSpec,
    SUPPORTED_FORMS,
    StructuralFailure,
    StructuralResult,
    Stanzas,
    check_ghazal,
    check_limerick,
    check_pantoum,
    check_sestina,
    check_villanelle,
    evaluate_form,
    segment_stanzas,
)
from .judge_client import (
    DimensionScores,
    HttpChatTransport,
    JudgeError,
    JudgeTranscript,
    RetryPolicy,
    TransportError,
    evaluate_poem,
    judge_corpus,
    parse_judge_response,
    render_judge_prompt,
)
from .lexicon import (
    DictionaryParseError,
    Pronunciation,
    PronouncingLexicon,
    fallback_syllabify,
    load_dictionary,
    normalize_token,
    rhyme_foot_of,
)
from .rhyme import RhymeScheme, infer_scheme, rhyme_match_ratio, rhymes_with
from .scansion import (
    LineScansion,
    METER_REGISTRY,
    MeterTemplate,
    expected_pattern,
    line_matches_meter,
    meter_match_ratio,
    scan_line,
)
from .style_metrics import (
    FrequencyProfile,
    TokenStream,
    cosine_similarity,
    frequency_profile,
    load_word_list,
    mattr,
    repetition_rate,
    tokenize,
)

__all__ = [
    "__version__",
    "DIMENSIONS",
    "METER_REGISTRY",
    "REPORT_SCHEMA",
    "SUPPORTED_FORMS",
    "CorpusValidationError",
    "DictionaryParseError",
    "DimensionScores",
    "EvaluationRecord",
    "FormReport",
    "FormSpec",
    "FrequencyProfile",
    "HttpChatTransport",
    "JudgeError",
    "JudgeTranscript",
    "LineScansion",
    "MeterTemplate",
    "PoemRecord",
    "PoemResult",
    "PronouncingLexicon",
    "Pronunciation",
    "RetryPolicy",
    "RhymeScheme",
    "Stanzas",
    "StructuralFailure",
    "StructuralResult",
    "TokenStream",
    "TransportError",
    "check_ghazal",
    "check_limerick",
    "check_pantoum",
    "check_sestina",
    "check_villanelle",
    "cosine_similarity",
    "evaluate_form",
    "evaluate_poem",
    "expected_pattern",
    "fallback_syllabify",
    "frequency_profile",
    "infer_scheme",
    "judge_corpus",
    "line_matches_meter",
    "load_corpus",
    "load_dictionary",
    "load_word_list",
    "mattr",
    "meter_match_ratio",
    "normalize_token",
    "pao",
    "parse_judge_response",
    "render_generation_prompt",
    "render_judge_prompt",
    "repetition_rate",
    "rhyme_foot_of",
    "rhyme_match_ratio",
    "rhymes_with",
    "scan_line",
    "segment_stanzas",
    "spearman_rho",
    "tokenize",
    "weighted_kappa",
    "write_corpus",
    "write_report",
]
