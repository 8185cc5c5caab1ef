"""Nucleus-centered summary generation.

Two suspendable traversal cursors walk the root's nucleus and satellite
subtrees; a deterministic scheduler alternates between them on each emitted
leaf while both still have output, then drains the remaining cursor.  Within
a cursor the order is nucleus-first depth-first.
"""

from dataclasses import dataclass, field
from fractions import Fraction

from .errors import BadRequest, MalformedTree


@dataclass(frozen=True)
class SummaryRequest:
    count: int | None = None  # desired number of summary EDUs (< leaf count)
    ratio: Fraction | None = None  # reduction rate in (0, 1]
    restore_text_order: bool = False

    @classmethod
    def by_count(cls, m, restore_text_order=False):
        return cls(count=m, restore_text_order=restore_text_order)

    @classmethod
    def by_ratio(cls, t, restore_text_order=False):
        return cls(ratio=Fraction(t), restore_text_order=restore_text_order)


@dataclass(frozen=True)
class SummaryItem:
    edu_id: int
    rank: int  # 1-based significance order
    text: str | None


@dataclass(frozen=True)
class SummaryResult:
    items: tuple
    halted_by: str  # COUNT, RATIO or EXHAUSTED


def _split_children(node):
    """(nucleus_child, satellite_slot_child); for an N,N pair the left child
    takes the nucleus slot."""
    if len(node.children) != 2:
        raise MalformedTree("internal node with %d children" % len(node.children))
    left, right = node.children
    roles = (left.attributes.get("role"), right.attributes.get("role"))
    if roles == ("N", "S"):
        return left, right
    if roles == ("S", "N"):
        return right, left
    if roles == ("N", "N"):
        return left, right
    raise MalformedTree("children roles %s are not a valid N/S pattern" % (roles,))


def _nucleus_first_leaves(node, visits):
    """Suspendable cursor over one subtree, nucleus child before satellite."""
    visits[0] += 1
    if node.is_leaf:
        yield node
        return
    nuc, sat = _split_children(node)
    yield from _nucleus_first_leaves(nuc, visits)
    yield from _nucleus_first_leaves(sat, visits)


def significance_order(root, _visits_out=None):
    """All leaves in significance order (no halting condition)."""
    visits = [0]
    if root.is_leaf:
        visits[0] += 1
        order = [root]
    else:
        visits[0] += 1
        nuc, sat = _split_children(root)
        current = _nucleus_first_leaves(nuc, visits)
        other = _nucleus_first_leaves(sat, visits)
        order = []
        while True:
            leaf = next(current, None)
            if leaf is None:
                if other is None:
                    break
                # one subtree exhausted: control stays with the other
                current, other = other, None
                continue
            order.append(leaf)
            if other is not None:
                current, other = other, current
    if _visits_out is not None:
        _visits_out.append(visits[0])
    return order


def summarize(root, request, edu_texts=None):
    """Prefix of the significance order per the halting rule: after each
    output the counter i is incremented and the traversal stops as soon as
    i = m or i/h >= t."""
    root = getattr(root, "root", root)
    leaves = root.leaves()
    h = len(leaves)
    if request.count is not None and not 0 < request.count < h:
        raise BadRequest("requested %r EDUs of a %d-leaf tree" % (request.count, h))
    if request.ratio is not None and not 0 < request.ratio <= 1:
        raise BadRequest("ratio must be in (0, 1]")
    edu_texts = edu_texts or {}

    items = []
    halted_by = "EXHAUSTED"
    i = 0
    for leaf in significance_order(root):
        i += 1
        text = edu_texts.get(leaf.leaf_edu, leaf.leaf_text)
        items.append(SummaryItem(edu_id=leaf.leaf_edu, rank=i, text=text))
        if request.count is not None and i == request.count:
            halted_by = "COUNT"
            break
        if request.ratio is not None and Fraction(i, h) >= request.ratio:
            halted_by = "RATIO"
            break
    if request.restore_text_order:
        items.sort(key=lambda item: item.edu_id)
    return SummaryResult(items=tuple(items), halted_by=halted_by)
