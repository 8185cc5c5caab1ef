"""Domain knowledge base: three colored concept hierarchies with surface forms.

Green concepts are acting agents, red concepts are influence factors and blue
concepts describe domain dynamics (blue concepts double as the grammar's
domain-relation symbols).  Matching is case insensitive and multi-word
surface forms are supported.
"""

from dataclasses import dataclass, field

from . import jsonio
from .errors import (
    BadLevel,
    BadPolarity,
    ColorMismatch,
    ConflictingRedefinition,
    CycleDetected,
    DuplicateId,
    DuplicateSurfaceForm,
    UnknownConcept,
)

COLORS = ("green", "red", "blue")


@dataclass(frozen=True)
class Concept:
    id: str
    color: str
    surface_forms: tuple
    level: int
    parent: str | None = None
    polarity: int = 0

    def to_json(self):
        doc = {
            "id": self.id,
            "color": self.color,
            "forms": list(self.surface_forms),
            "level": self.level,
        }
        if self.parent is not None:
            doc["parent"] = self.parent
        if self.polarity:
            doc["polarity"] = self.polarity
        return doc

    @classmethod
    def from_json(cls, doc):
        return cls(
            id=doc["id"],
            color=doc["color"],
            surface_forms=tuple(doc["forms"]),
            level=int(doc["level"]),
            parent=doc.get("parent"),
            polarity=int(doc.get("polarity", 0)),
        )


def _form_key(form):
    return tuple(form.lower().split())


@dataclass
class DomainKnowledgeBase:
    domain_name: str
    concepts: dict = field(default_factory=dict)  # id -> Concept
    # per color: token-tuple -> concept id
    index: dict = field(default_factory=dict)
    max_form_len: dict = field(default_factory=dict)

    def concept(self, cid):
        try:
            return self.concepts[cid]
        except KeyError:
            raise UnknownConcept("unknown concept id: %r" % cid) from None

    def counts(self):
        out = {color: 0 for color in COLORS}
        for c in self.concepts.values():
            out[c.color] += 1
        return out

    def lookup(self, tokens, color):
        """Greedy longest-match left-to-right over a token list.

        Returns non-overlapping ``((start, end), concept_id)`` pairs with
        end exclusive, restricted to the requested color.
        """
        index = self.index.get(color, {})
        limit = self.max_form_len.get(color, 0)
        lowered = [t.lower() for t in tokens]
        matches = []
        i = 0
        n = len(lowered)
        while i < n:
            hit = None
            for width in range(min(limit, n - i), 0, -1):
                cid = index.get(tuple(lowered[i : i + width]))
                if cid is not None:
                    hit = ((i, i + width), cid)
                    break
            if hit is None:
                i += 1
            else:
                matches.append(hit)
                i = hit[0][1]
        return matches

    def to_json(self):
        return {
            "domain": self.domain_name,
            "concepts": [
                self.concepts[cid].to_json() for cid in sorted(self.concepts)
            ],
        }


def _validate_and_build(domain_name, concepts):
    by_id = {}
    for c in concepts:
        if c.id in by_id:
            raise DuplicateId("duplicate concept id: %r" % c.id)
        if c.color not in COLORS:
            raise ColorMismatch("bad color %r for concept %r" % (c.color, c.id))
        if not c.surface_forms or any(not f.strip() for f in c.surface_forms):
            raise BadLevel("concept %r needs non-empty surface forms" % c.id)
        if c.level < 1:
            raise BadLevel("concept %r has non-positive level" % c.id)
        if c.polarity not in (-1, 0, 1):
            raise BadPolarity("concept %r polarity out of range" % c.id)
        if c.color != "blue" and c.polarity != 0:
            raise BadPolarity("non-blue concept %r has polarity" % c.id)
        by_id[c.id] = c

    # cycle detection first, so a 2-cycle reports as such and not as a
    # level inconsistency
    state = {}  # id -> 1 (visiting) / 2 (done)
    for cid in by_id:
        path = []
        cur = cid
        while cur is not None and state.get(cur) != 2:
            if state.get(cur) == 1:
                raise CycleDetected("parent cycle through %r" % cur)
            state[cur] = 1
            path.append(cur)
            parent = by_id[cur].parent
            if parent is not None and parent not in by_id:
                raise UnknownConcept(
                    "concept %r names missing parent %r" % (cur, parent)
                )
            cur = parent
        for seen in path:
            state[seen] = 2

    for c in by_id.values():
        if c.parent is None:
            continue
        parent = by_id[c.parent]
        if parent.color != c.color:
            raise ColorMismatch(
                "concept %r (%s) has %s parent %r" % (c.id, c.color, parent.color, parent.id)
            )
        if parent.level != c.level - 1:
            raise BadLevel(
                "concept %r at level %d has parent at level %d"
                % (c.id, c.level, parent.level)
            )

    index = {color: {} for color in COLORS}
    max_len = {color: 0 for color in COLORS}
    for c in by_id.values():
        for form in c.surface_forms:
            key = _form_key(form)
            other = index[c.color].get(key)
            if other is not None and other != c.id:
                raise DuplicateSurfaceForm(
                    "form %r maps to both %r and %r" % (form, other, c.id)
                )
            index[c.color][key] = c.id
            max_len[c.color] = max(max_len[c.color], len(key))
    return DomainKnowledgeBase(domain_name, by_id, index, max_len)


def dkb_from_json(doc):
    concepts = [Concept.from_json(c) for c in doc.get("concepts", [])]
    return _validate_and_build(doc.get("domain", ""), concepts)


def load_dkb(path):
    return dkb_from_json(jsonio.read(path))


def save_dkb(dkb, path):
    jsonio.write(path, dkb.to_json())


def extend_dkb(dkb, additions):
    """Merge ``additions`` (a DKB or concept iterable) into ``dkb``.

    Re-adding a concept verbatim is a no-op; same id with different fields
    raises.  Returns ``(merged, added_counts_per_color)``.
    """
    if isinstance(additions, DomainKnowledgeBase):
        new_concepts = list(additions.concepts.values())
    else:
        new_concepts = list(additions)
    merged = dict(dkb.concepts)
    added = {color: 0 for color in COLORS}
    for c in new_concepts:
        old = merged.get(c.id)
        if old is None:
            merged[c.id] = c
            added[c.color] += 1
        elif old != c:
            raise ConflictingRedefinition("concept %r redefined differently" % c.id)
    out = _validate_and_build(dkb.domain_name, list(merged.values()))
    return out, added
