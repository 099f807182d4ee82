"""Slot-pattern DSL and matcher for co-occurrence pattern analysis.

Grammar: whitespace-separated slots; `"lit"` literal surface; UPPER POS class
(PREP, V, VP, N, MOD, DET, PP, or a raw tag like NOUN); NODE anchors the node
word; parentheses mark a slot optional. VP matches 1-3 consecutive tokens
headed by a verb (head first); PP matches a preposition plus up to 3 tokens
ending in a noun."""

from __future__ import annotations

import re
from dataclasses import dataclass, field

from .corpus import POS_TAGS, Token
from .errors import (
    MultipleNodeSlots,
    NoNodeSlot,
    NodeAbsent,
    PatternSyntaxError,
    SlotOutOfRange,
)
from .index import PositionIndex

VP_MAX_SPAN = 3   # verb head plus up to 2 dependents to the right
PP_MAX_SPAN = 4   # preposition plus up to 3 tokens ending in a noun

_CLASS_POS = {
    "PREP": {"PREP"},
    "V": {"VERB"},
    "N": {"NOUN", "PROPN"},
    "MOD": {"ADJ", "NUM", "PROPN", "NOUN"},  # premodifier classes
    "DET": {"DET"},
}


@dataclass(frozen=True)
class Slot:
    kind: str                 # literal | class | vp | pp | node
    value: str = ""           # literal text or class name
    optional: bool = False

    def span_range(self) -> tuple[int, int]:
        if self.kind == "vp":
            lo, hi = 1, VP_MAX_SPAN
        elif self.kind == "pp":
            lo, hi = 2, PP_MAX_SPAN
        else:
            lo, hi = 1, 1
        return (0 if self.optional else lo, hi)

    def spans(self) -> list[int]:
        """Candidate token counts, preferred (longest) first; 0 = skipped."""
        lo, hi = self.span_range()
        if self.kind == "vp":
            widths = list(range(VP_MAX_SPAN, 0, -1))
        elif self.kind == "pp":
            widths = list(range(PP_MAX_SPAN, 1, -1))
        else:
            widths = [1]
        if self.optional:
            widths = widths + [0]
        return widths

    def accepts(self, tokens: list[Token]) -> bool:
        """Whether this slot matches the given consecutive tokens."""
        if self.kind == "literal":
            return len(tokens) == 1 and tokens[0].surface == self.value
        if self.kind == "class":
            return len(tokens) == 1 and tokens[0].pos in _CLASS_POS.get(self.value, {self.value})
        if self.kind == "vp":
            return 1 <= len(tokens) <= VP_MAX_SPAN and tokens[0].pos == "VERB"
        if self.kind == "pp":
            return (2 <= len(tokens) <= PP_MAX_SPAN
                    and tokens[0].pos == "PREP"
                    and tokens[-1].pos in ("NOUN", "PROPN"))
        if self.kind == "node":
            return len(tokens) == 1
        return False


@dataclass
class SlotPattern:
    source: str
    slots: list[Slot]
    name: str = ""

    @property
    def node_position(self) -> int:
        return next(i for i, s in enumerate(self.slots) if s.kind == "node")


_DSL_TOKEN = re.compile(r'\(|\)|"[^"]*"|[^\s()"]+')


def compile_pattern(dsl: str, name: str = "") -> SlotPattern:
    """Compile DSL text into a SlotPattern with exactly one NODE slot."""
    slots: list[Slot] = []
    pending_optional = False
    in_optional = False
    for tok in _DSL_TOKEN.findall(dsl):
        if tok == "(":
            if in_optional:
                raise PatternSyntaxError("optional slots cannot nest")
            in_optional = True
            pending_optional = False
            continue
        if tok == ")":
            if not in_optional or not pending_optional:
                raise PatternSyntaxError("empty or unbalanced optional group")
            in_optional = False
            pending_optional = False
            continue
        if in_optional and pending_optional:
            raise PatternSyntaxError("optional group must contain exactly one slot")
        if tok.startswith('"'):
            slot = Slot("literal", tok[1:-1], optional=in_optional)
        elif tok == "NODE":
            slot = Slot("node", optional=in_optional)
        elif tok == "VP":
            slot = Slot("vp", optional=in_optional)
        elif tok == "PP":
            slot = Slot("pp", optional=in_optional)
        elif tok in _CLASS_POS or tok in POS_TAGS:
            slot = Slot("class", tok, optional=in_optional)
        else:
            raise PatternSyntaxError(f"unknown DSL token {tok!r}")
        slots.append(slot)
        if in_optional:
            pending_optional = True
    if in_optional:
        raise PatternSyntaxError("unclosed optional group")
    n_nodes = sum(1 for s in slots if s.kind == "node")
    if n_nodes == 0:
        raise NoNodeSlot(dsl)
    if n_nodes > 1:
        raise MultipleNodeSlots(dsl)
    node_slot = slots[[s.kind for s in slots].index("node")]
    if node_slot.optional:
        raise PatternSyntaxError("NODE slot cannot be optional")
    return SlotPattern(source=dsl.strip(), slots=slots, name=name)


@dataclass
class PatternMatch:
    pattern_name: str
    doc_id: str
    span: tuple[int, int]                       # [start, end) token indices
    slot_fillers: dict[int, list[Token]]        # slot position -> matched tokens
    n_slots: int = 0
    match_id: str = field(default="")

    def __post_init__(self):
        if not self.match_id:
            self.match_id = f"{self.pattern_name}:{self.doc_id}:{self.span[0]}:{self.span[1]}"


def match_pattern(index: PositionIndex, pattern: SlotPattern, node: str) -> list[PatternMatch]:
    """All contiguous matches of the pattern anchored at node occurrences.

    At most one match is reported per node occurrence, resolved
    leftmost-longest over optional and variable-width slots."""
    occurrences = index.occurrences(node)
    if not occurrences:
        raise NodeAbsent(node)
    node_pos = pattern.node_position
    pre = pattern.slots[:node_pos]
    post = pattern.slots[node_pos + 1:]
    pre_min = sum(s.span_range()[0] for s in pre)
    pre_max = sum(s.span_range()[1] for s in pre)

    matches = []
    for doc_id, idx in occurrences:
        tokens = index.docs[doc_id].tokens
        found = None
        lo = max(0, idx - pre_max)
        hi = idx - pre_min
        for start in range(lo, hi + 1):   # leftmost (longest prefix) first
            pre_res = _first_match(pre, tokens, start, idx)
            if pre_res is None:
                continue
            post_res = _first_match(post, tokens, idx + 1, None)
            if post_res is None:
                continue
            pre_end, pre_fill = pre_res
            post_end, post_fill = post_res
            fillers = {}
            for si, toks in pre_fill.items():
                fillers[si] = toks
            fillers[node_pos] = [tokens[idx]]
            for si, toks in post_fill.items():
                fillers[node_pos + 1 + si] = toks
            found = PatternMatch(
                pattern_name=pattern.name or pattern.source,
                doc_id=doc_id,
                span=(start, post_end),
                slot_fillers=fillers,
                n_slots=len(pattern.slots),
            )
            break
        if found:
            matches.append(found)
    return matches


def _first_match(slots: list[Slot], tokens: list[Token], start: int,
                 end_exact: int | None):
    """First (preference-ordered) match of `slots` from `start`; fillers keyed
    by slot offset within `slots`. Returns (end, fillers) or None."""
    if not slots:
        if end_exact is None or start == end_exact:
            return start, {}
        return None
    slot, rest = slots[0], slots[1:]
    for width in slot.spans():
        stop = start + width
        if stop > len(tokens) or (end_exact is not None and stop > end_exact):
            continue
        if width > 0 and not slot.accepts(tokens[start:stop]):
            continue
        tail = _first_match(rest, tokens, stop, end_exact)
        if tail is None:
            continue
        end, fillers = tail
        out = {si + 1: toks for si, toks in fillers.items()}
        if width > 0:
            out[0] = tokens[start:stop]
        return end, out
    return None


def filler_surface(tokens: list[Token]) -> str:
    """Human-readable filler text; CJK-only fillers join without spaces."""
    surfaces = [t.surface for t in tokens]
    if all(not re.search(r"[A-Za-z0-9]", s) for s in surfaces):
        return "".join(surfaces)
    return " ".join(surfaces)


@dataclass
class SemanticClassScheme:
    """Analyst-supplied grouping of slot fillers; class order is priority order."""
    name: str
    classes: list[tuple[str, set[str]]]

    @classmethod
    def from_file(cls, path, name=None) -> "SemanticClassScheme":
        classes = []
        with open(path, encoding="utf-8") as fh:
            for line in fh:
                line = line.strip()
                if not line or line.startswith("#"):
                    continue
                label, _, forms = line.partition(":")
                if not label.strip() or not forms.strip():
                    raise PatternSyntaxError(f"bad scheme line {line!r}")
                classes.append((label.strip(), {f.strip() for f in forms.split(",") if f.strip()}))
        return cls(name=name or str(path), classes=classes)


UNCLASSIFIED = "unclassified"


def classify_slot_fillers(matches: list[PatternMatch], slot: int,
                          scheme: SemanticClassScheme) -> dict[str, tuple[int, list[PatternMatch]]]:
    """Group matches by the semantic class of their filler in the given slot.

    Each match lands in the first (highest-priority) class containing its
    filler surface; the rest go under "unclassified". Counts sum to |matches|.
    """
    for m in matches:
        if not (0 <= slot < m.n_slots):
            raise SlotOutOfRange(f"slot {slot} outside pattern of {m.n_slots} slots")
    grouped: dict[str, tuple[int, list[PatternMatch]]] = {}
    for m in matches:
        toks = m.slot_fillers.get(slot)
        surface = filler_surface(toks) if toks else ""
        label = UNCLASSIFIED
        for cls_label, forms in scheme.classes:
            if surface in forms:
                label = cls_label
                break
        count, examples = grouped.get(label, (0, []))
        grouped[label] = (count + 1, examples + [m])
    return grouped


def load_pattern_file(path) -> dict[str, SlotPattern]:
    """Pattern DSL file: one `name := DSL` definition per line."""
    patterns = {}
    with open(path, encoding="utf-8") as fh:
        for line_no, line in enumerate(fh, start=1):
            line = line.strip()
            if not line or line.startswith("#"):
                continue
            if ":=" not in line:
                raise PatternSyntaxError(f"line {line_no}: expected `name := pattern`")
            name, _, dsl = line.partition(":=")
            name = name.strip()
            patterns[name] = compile_pattern(dsl.strip(), name=name)
    return patterns
