import json
import random
from pathlib import Path

import pytest

from discoursekit.corpus import Document, Token, TokenizedDocument

# verdict lines appended by the acceptance tests, echoed after the run so they
# are visible even when pytest captures per-test stdout
ACCEPTANCE_VERDICTS = []


def pytest_terminal_summary(terminalreporter):
    for line in ACCEPTANCE_VERDICTS:
        terminalreporter.write_line(line)


def make_doc(doc_id="d1", body="", lang="en", title="", source="wire", date="2024-08-01"):
    return Document(id=doc_id, source=source, lang=lang, published=date,
                    title=title, body=body)


def tagged_doc(doc_id, spec):
    """Build a TokenizedDocument from "surface/POS surface/POS ..." shorthand."""
    tokens = []
    off = 0
    for part in spec.split():
        surface, _, pos = part.rpartition("/")
        if not surface:
            surface, pos = pos, "OTHER"
        tokens.append(Token(surface=surface, lemma=surface, pos=pos, char_offset=off))
        off += len(surface) + 1
    return TokenizedDocument(doc_id, tokens)


def plain_doc(doc_id, text):
    """Whitespace-tokenized document, all POS OTHER."""
    return tagged_doc(doc_id, " ".join(f"{w}/OTHER" for w in text.split()))


WORDS = ["medal", "gold", "won", "the", "games", "team", "ceremony", "river",
         "opening", "athletes", "paris", "record", "final", "women", "swim"]


def random_corpus(n_docs, rng=None, words=WORDS, min_len=3, max_len=20):
    rng = rng or random.Random(0)
    return [
        plain_doc(f"r{i}", " ".join(rng.choice(words) for _ in range(rng.randint(min_len, max_len))))
        for i in range(n_docs)
    ]


WORKSPACE_DOCS = [
    {"id": "k1", "source": "Wire", "lang": "en", "date": "2024-07-27",
     "title": "First win",
     "body": "She won the first gold medal . The medal pleased the team ."},
    {"id": "k2", "source": "Wire", "lang": "en", "date": "2024-07-28",
     "title": "Shared honours",
     "body": "They shared gold medal honours . Another medal story . A third medal mention ."},
    {"id": "k3", "source": "Wire", "lang": "en", "date": "2024-07-29",
     "title": "Single mention", "body": "One medal only appears here ."},
    {"id": "k4", "source": "Wire", "lang": "en", "date": "2024-07-30",
     "title": "Nothing relevant", "body": "No hardware at all today ."},
]

TAG_LEXICON = {
    "won": "VERB", "shared": "VERB", "pleased": "VERB", "appears": "VERB",
    "the": "DET", "The": "DET", "A": "DET", "first": "ADJ", "gold": "ADJ",
    "third": "ADJ", "medal": "NOUN", "team": "NOUN", "honours": "NOUN",
    "story": "NOUN", "mention": "NOUN", ".": "PUNCT",
}


def make_workspace(root, docs=None, config_extra=None):
    """Write a ready-to-run workspace directory and return its path."""
    root = Path(root)
    root.mkdir(parents=True, exist_ok=True)
    (root / "input.jsonl").write_text(
        "\n".join(json.dumps(d, ensure_ascii=False) for d in (docs or WORKSPACE_DOCS)) + "\n",
        encoding="utf-8")
    (root / "stoplist.txt").write_text("the\na\n", encoding="utf-8")
    (root / "tags.txt").write_text(
        "".join(f"{w}\t{t}\n" for w, t in TAG_LEXICON.items()), encoding="utf-8")
    (root / "patterns.txt").write_text(
        'v_gold := V ( "the" ) ( MOD ) "gold" NODE\nbare := NODE\n', encoding="utf-8")
    (root / "scheme.txt").write_text("attain: won\nshare: shared\n", encoding="utf-8")
    config = {
        "version": 1,
        "corpus": {"path": "input.jsonl", "format": "jsonl"},
        "stoplist": "stoplist.txt",
        "tag_lexicon": "tags.txt",
        "patterns": "patterns.txt",
        "scheme": "scheme.txt",
        "keywords": ["medal"],
        "min_count": 2,
        "min_df": 1,
        "lda": {"K": 2, "iterations": 20, "burn_in": 0, "seed": 7},
        "sweep": {"kmin": 2, "kmax": 3, "topn": 2},
        "top_keywords": 5,
        "llm": {"provider": "mock"},
    }
    config.update(config_extra or {})
    (root / "config.json").write_text(json.dumps(config, indent=1), encoding="utf-8")
    return root


@pytest.fixture
def workspace(tmp_path):
    return make_workspace(tmp_path / "ws")


@pytest.fixture
def jsonl_corpus(tmp_path):
    """Two-document JSONL corpus file."""
    path = tmp_path / "corpus.jsonl"
    records = [
        {"id": "a1", "source": "Wire", "lang": "en", "date": "2024-07-26",
         "title": "Opening night", "body": "The opening ceremony on the Seine."},
        {"id": "a2", "source": "Wire", "lang": "en", "date": "2024-07-28",
         "title": "First gold", "body": "She won the gold medal yesterday."},
    ]
    path.write_text("\n".join(json.dumps(r) for r in records) + "\n", encoding="utf-8")
    return path
