"""Language-specific tokenization: rule-based English splitting and
longest-match dictionary segmentation for Chinese."""

from __future__ import annotations

import re

from .corpus import Document, Token, TokenizedDocument
from .errors import NoSegmenter

_EN_TOKEN = re.compile(r"[A-Za-z0-9]+(?:['\-][A-Za-z0-9]+)*|'s|[^\sA-Za-z0-9]")


class EnglishSegmenter:
    """Whitespace/punctuation word splitter; possessive 's is split off."""

    lang = "en"

    def segment(self, text: str) -> list[tuple[str, int]]:
        out = []
        for m in _EN_TOKEN.finditer(text):
            surface = m.group(0)
            # split trailing possessive clitic so "women's" -> women + 's
            if surface.lower().endswith("'s") and len(surface) > 2:
                head = surface[:-2]
                out.append((head, m.start()))
                out.append((surface[-2:], m.start() + len(head)))
            else:
                out.append((surface, m.start()))
        return out


class ChineseSegmenter:
    """Greedy forward longest-match over a user-supplied lexicon.

    Characters not covered by any lexicon entry come out as single-character
    tokens, which keeps segmentation total and deterministic.
    """

    lang = "zh"

    def __init__(self, lexicon):
        self.lexicon = set(lexicon)
        self.max_len = max((len(w) for w in self.lexicon), default=1)

    def segment(self, text: str) -> list[tuple[str, int]]:
        out = []
        i = 0
        n = len(text)
        while i < n:
            ch = text[i]
            if ch.isspace():
                i += 1
                continue
            # runs of latin letters or digits stay whole even inside zh text
            m = re.match(r"[A-Za-z0-9]+", text[i:])
            if m:
                out.append((m.group(0), i))
                i += m.end()
                continue
            best = ch
            for j in range(min(self.max_len, n - i), 1, -1):
                if text[i:i + j] in self.lexicon:
                    best = text[i:i + j]
                    break
            out.append((best, i))
            i += len(best)
        return out


class SegmenterRegistry:
    def __init__(self):
        self._by_lang = {}

    def register(self, segmenter) -> None:
        self._by_lang[segmenter.lang] = segmenter

    def get(self, lang: str):
        if lang not in self._by_lang:
            raise NoSegmenter(f"no segmenter registered for lang {lang!r}")
        return self._by_lang[lang]


def default_registry(zh_lexicon=()) -> SegmenterRegistry:
    reg = SegmenterRegistry()
    reg.register(EnglishSegmenter())
    reg.register(ChineseSegmenter(zh_lexicon))
    return reg


def tokenize(doc: Document, segmenter) -> TokenizedDocument:
    """Tokenize a document; offsets index into the cleaned body."""
    if hasattr(segmenter, "get"):  # registry passed directly
        segmenter = segmenter.get(doc.lang)
    pieces = segmenter.segment(doc.body)
    tokens = [Token(surface=s, lemma=s, pos="OTHER", char_offset=off) for s, off in pieces]
    return TokenizedDocument(doc.id, tokens)
