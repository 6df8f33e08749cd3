import io
import re
from importlib import resources

import pytest

from poemetric import PronouncingLexicon, load_corpus, load_dictionary


def data_path(name: str):
    return resources.files("poemetric.data").joinpath(name)


@pytest.fixture(scope="session")
def lex() -> PronouncingLexicon:
    return load_dictionary(data_path("sample_lexicon.dict"))


@pytest.fixture(scope="session")
def sample_records():
    return load_corpus(data_path("sample_poems.jsonl"))


@pytest.fixture(scope="session")
def sample_by_id(sample_records):
    return {rec.id: rec for rec in sample_records}


def make_lexicon(text: str) -> PronouncingLexicon:
    return load_dictionary(io.StringIO(text))


END_WORD = re.compile(r"[A-Za-z][A-Za-z'’-]*(?=\W*$)")


def swap_end_word(line: str, word: str) -> str:
    """Replace the last word of a line, keeping trailing punctuation."""
    return END_WORD.sub(word, line, count=1)


def mutate_poem_line(text: str, line_no: int, fn) -> str:
    """Apply fn to the line_no-th non-blank line (1-based), keeping layout."""
    out = []
    n = 0
    for raw in text.splitlines():
        if raw.strip():
            n += 1
            if n == line_no:
                raw = fn(raw)
        out.append(raw)
    return "\n".join(out)


def swap_poem_end_word(text: str, line_no: int, word: str) -> str:
    return mutate_poem_line(text, line_no, lambda ln: swap_end_word(ln, word))


def prepend_to_lines(text: str, line_nos, word: str) -> str:
    for n in line_nos:
        text = mutate_poem_line(text, n, lambda ln: f"{word} {ln.lstrip()}")
    return text


def drop_poem_line(text: str, line_no: int) -> str:
    out = []
    n = 0
    for raw in text.splitlines():
        if raw.strip():
            n += 1
            if n == line_no:
                continue
        out.append(raw)
    return "\n".join(out)
