"""Text preparation: EDU segmentation, lexical core extraction with
borrowing, and basic tree construction with syntactic leaf attributes."""

import re
from dataclasses import dataclass, field

from .dkb import COLORS
from .errors import EmptyInput, UnknownConcept
from .grammar import ArtrNode, AttributeMap, default_schema

PUNCT_NAMES = {
    ",": "comma",
    ".": "point",
    ";": "semicolon",
    "?": "question",
    "!": "exclamation",
}

_TOKEN_RE = re.compile(r"[\w'-]+", re.UNICODE)


def tokenize(text):
    return _TOKEN_RE.findall(text)


@dataclass(frozen=True)
class Edu:
    id: int  # 1-based text order
    text: str
    tokens: tuple
    terminal_punctuation: str = "none"


@dataclass(frozen=True)
class LexicalCore:
    green: str
    red: str
    blue: str
    edu_id: int
    borrowed: frozenset = frozenset()
    # slot -> edu id the concept was borrowed from
    borrow_sources: tuple = ()

    def slot(self, color):
        return getattr(self, color)

    def source_of(self, color):
        return dict(self.borrow_sources).get(color)

    def to_json(self):
        doc = {
            "green": self.green,
            "red": self.red,
            "blue": self.blue,
            "edu": self.edu_id,
        }
        if self.borrowed:
            doc["borrowed"] = sorted(self.borrowed)
            doc["borrow_sources"] = {
                slot: src for slot, src in sorted(self.borrow_sources)
            }
        return doc

    @classmethod
    def from_json(cls, doc):
        return cls(
            green=doc["green"],
            red=doc["red"],
            blue=doc["blue"],
            edu_id=doc["edu"],
            borrowed=frozenset(doc.get("borrowed", ())),
            borrow_sources=tuple(sorted(doc.get("borrow_sources", {}).items())),
        )


@dataclass(frozen=True)
class BasicTree:
    """Height-1 tree: the LC's blue concept as root over green/red leaves."""

    root: ArtrNode  # carries the leaf payload used during parsing
    green_leaf: str
    red_leaf: str

    @property
    def edu_id(self):
        return self.root.leaf_edu


@dataclass
class SegmentConfig:
    delimiters: str = ",.;?!"


def segment(raw_text, config=None):
    """Split raw text into EDUs at configured punctuation marks."""
    config = config or SegmentConfig()
    if not raw_text or not raw_text.strip():
        raise EmptyInput("no text to segment")
    pieces = []
    current = []
    for ch in raw_text:
        if ch in config.delimiters:
            text = "".join(current).strip()
            if text:
                pieces.append((text, PUNCT_NAMES.get(ch, "none")))
            current = []
        else:
            current.append(ch)
    tail = "".join(current).strip()
    if tail:
        pieces.append((tail, "none"))
    return [
        Edu(i, text, tuple(tokenize(text)), punct)
        for i, (text, punct) in enumerate(pieces, start=1)
    ]


def edus_from_lines(lines):
    """Pre-segmented input: one EDU per line, text passed through unchanged."""
    edus = []
    for i, line in enumerate((l for l in lines if l.strip()), start=1):
        text = line.strip()
        punct = PUNCT_NAMES.get(text[-1], "none")
        edus.append(Edu(i, text, tuple(tokenize(text)), punct))
    if not edus:
        raise EmptyInput("no EDUs in input")
    return edus


def load_presegmented(path):
    """Read a pre-segmented corpus: blank lines separate texts."""
    with open(path, encoding="utf-8") as f:
        content = f.read()
    texts = []
    block = []
    for line in content.splitlines():
        if line.strip():
            block.append(line)
        elif block:
            texts.append(edus_from_lines(block))
            block = []
    if block:
        texts.append(edus_from_lines(block))
    return texts


def extract_lcs(edus, dkb, radius=1, prefer_following=True):
    """Extract at most one LC per EDU; missing slots borrow from neighbours.

    Returns ``(lcs, skipped_edu_ids)``.  Borrowing looks at the directly
    matched (not borrowed) concepts of neighbouring EDUs within ``radius``,
    preferring the following EDU by default.
    """
    own = []  # per edu: {color: concept id or None}
    for edu in edus:
        slots = {}
        for color in COLORS:
            matches = dkb.lookup(list(edu.tokens), color)
            slots[color] = matches[0][1] if matches else None
        own.append(slots)

    lcs = []
    skipped = []
    for idx, edu in enumerate(edus):
        slots = dict(own[idx])
        borrowed = set()
        sources = {}
        for color in COLORS:
            if slots[color] is not None:
                continue
            offsets = []
            for step in range(1, radius + 1):
                pair = (step, -step) if prefer_following else (-step, step)
                offsets.extend(pair)
            for offset in offsets:
                j = idx + offset
                if 0 <= j < len(edus) and own[j][color] is not None:
                    slots[color] = own[j][color]
                    borrowed.add(color)
                    sources[color] = edus[j].id
                    break
        if any(slots[color] is None for color in COLORS):
            skipped.append(edu.id)
            continue
        lcs.append(
            LexicalCore(
                green=slots["green"],
                red=slots["red"],
                blue=slots["blue"],
                edu_id=edu.id,
                borrowed=frozenset(borrowed),
                borrow_sources=tuple(sorted(sources.items())),
            )
        )
    return lcs, skipped


def load_cue_lexicon(path):
    with open(path, encoding="utf-8") as f:
        return [line.strip() for line in f if line.strip()]


def find_cues(tokens, cue_lexicon):
    """Exact (case-insensitive) phrase match of cue lexicon entries."""
    lowered = [t.lower() for t in tokens]
    found = set()
    for cue in cue_lexicon:
        phrase = tuple(cue.lower().split())
        width = len(phrase)
        for i in range(len(lowered) - width + 1):
            if tuple(lowered[i : i + width]) == phrase:
                found.add(cue.lower())
                break
    return frozenset(found)


def build_basic_trees(lcs, edus, dkb, cue_lexicon, overrides=None, schema=None):
    """One basic tree per LC.

    Root attributes: ``cue`` (lexicon phrases found in the EDU),
    ``punctuation`` (terminal mark), ``position`` (edu id) and ``happy``
    (seeded from the blue concept's polarity).  ``overrides`` maps
    edu id -> {attribute: value} and wins over the defaults.
    """
    schema = schema or default_schema()
    overrides = overrides or {}
    by_id = {edu.id: edu for edu in edus}
    trees = []
    for lc in lcs:
        for color in COLORS:
            if lc.slot(color) not in dkb.concepts:
                raise UnknownConcept(
                    "LC of EDU %d references unknown concept %r"
                    % (lc.edu_id, lc.slot(color))
                )
        edu = by_id[lc.edu_id]
        attrs = {
            "cue": find_cues(list(edu.tokens), cue_lexicon),
            "punctuation": edu.terminal_punctuation,
            "position": edu.id,
            "happy": dkb.concept(lc.blue).polarity,
        }
        attrs.update(overrides.get(edu.id, {}))
        amap = AttributeMap.of(attrs)
        amap.check(schema)
        root = ArtrNode(
            dre=lc.blue,
            attributes=amap,
            leaf_edu=edu.id,
            leaf_lc=lc,
            leaf_text=edu.text,
        )
        trees.append(BasicTree(root=root, green_leaf=lc.green, red_leaf=lc.red))
    return trees
