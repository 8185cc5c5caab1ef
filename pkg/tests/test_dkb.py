import copy

import pytest
from hypothesis import given, strategies as st

from arsg import jsonio
from arsg.dkb import Concept, dkb_from_json, extend_dkb
from arsg.errors import (
    BadPolarity,
    ColorMismatch,
    ConflictingRedefinition,
    CycleDetected,
    DuplicateId,
    DuplicateSurfaceForm,
)
from conftest import WET_DKB_DOC


def _doc(concepts):
    return {"domain": "d", "concepts": concepts}


def test_counts(wet_dkb):
    assert wet_dkb.counts() == {"green": 1, "red": 6, "blue": 7}


def test_single_concept_dkb():
    dkb = dkb_from_json(
        _doc([{"id": "b1", "color": "blue", "forms": ["grows"], "level": 1}])
    )
    assert dkb.counts() == {"green": 0, "red": 0, "blue": 1}


def test_duplicate_id_rejected():
    base = {"color": "blue", "forms": ["x"], "level": 1}
    with pytest.raises(DuplicateId):
        dkb_from_json(_doc([dict(base, id="b"), dict(base, id="b")]))


def test_two_cycle_reports_cycle():
    with pytest.raises(CycleDetected):
        dkb_from_json(
            _doc(
                [
                    {"id": "g1", "color": "green", "forms": ["a"], "level": 2, "parent": "g2"},
                    {"id": "g2", "color": "green", "forms": ["b"], "level": 3, "parent": "g1"},
                ]
            )
        )


def test_parent_color_mismatch():
    with pytest.raises(ColorMismatch):
        dkb_from_json(
            _doc(
                [
                    {"id": "g1", "color": "green", "forms": ["a"], "level": 1},
                    {"id": "r1", "color": "red", "forms": ["b"], "level": 2, "parent": "g1"},
                ]
            )
        )


def test_polarity_only_on_blue():
    with pytest.raises(BadPolarity):
        dkb_from_json(
            _doc([{"id": "g", "color": "green", "forms": ["a"], "level": 1, "polarity": 1}])
        )


def test_duplicate_form_same_color_rejected():
    with pytest.raises(DuplicateSurfaceForm):
        dkb_from_json(
            _doc(
                [
                    {"id": "r1", "color": "red", "forms": ["trade"], "level": 1},
                    {"id": "r2", "color": "red", "forms": ["Trade"], "level": 1},
                ]
            )
        )


def test_cross_color_form_collision_allowed():
    dkb = dkb_from_json(
        _doc(
            [
                {"id": "r1", "color": "red", "forms": ["trade"], "level": 1},
                {"id": "b1", "color": "blue", "forms": ["trade"], "level": 1},
            ]
        )
    )
    assert dkb.lookup(["trade"], "red") == [((0, 1), "r1")]
    assert dkb.lookup(["trade"], "blue") == [((0, 1), "b1")]


def test_lookup_longest_match_wins():
    dkb = dkb_from_json(
        _doc(
            [
                {"id": "r_short", "color": "red", "forms": ["trade"], "level": 1},
                {"id": "r_long", "color": "red", "forms": ["foreign trade"], "level": 1},
            ]
        )
    )
    matches = dkb.lookup(["boost", "foreign", "trade", "now"], "red")
    assert matches == [((1, 3), "r_long")]


def test_lookup_first_clause(wet_dkb):
    tokens = "It is well known that although China's foreign trade develops rapidly and".split()
    assert [cid for _, cid in wet_dkb.lookup(tokens, "red")] == ["foreign_trade"]
    assert [cid for _, cid in wet_dkb.lookup(tokens, "green")] == ["china"]


def test_lookup_empty_tokens(wet_dkb):
    assert wet_dkb.lookup([], "green") == []


@given(st.lists(st.sampled_from(["China", "foreign", "trade", "low", "end", "x"]), max_size=12))
def test_lookup_matches_never_overlap(tokens):
    dkb = dkb_from_json(WET_DKB_DOC)
    for color in ("green", "red", "blue"):
        matches = dkb.lookup(tokens, color)
        ends = 0
        for (start, end), _cid in matches:
            assert start >= ends and end > start
            ends = end


def test_extend_disjoint_counts(wet_dkb):
    additions = [
        Concept(id="india", color="green", surface_forms=("India",), level=1),
        Concept(id="it_exports", color="red", surface_forms=("IT exports",), level=1),
    ]
    merged, added = extend_dkb(wet_dkb, additions)
    assert added == {"green": 1, "red": 1, "blue": 0}
    assert merged.counts() == {"green": 2, "red": 7, "blue": 7}


def test_extend_empty_is_identity(wet_dkb):
    merged, added = extend_dkb(wet_dkb, [])
    assert added == {"green": 0, "red": 0, "blue": 0}
    assert merged.to_json() == wet_dkb.to_json()


def test_extend_idempotent_readd(wet_dkb):
    merged, added = extend_dkb(wet_dkb, [wet_dkb.concept("china")])
    assert added == {"green": 0, "red": 0, "blue": 0}
    assert merged.to_json() == wet_dkb.to_json()


def test_extend_conflicting_redefinition(wet_dkb):
    clash = Concept(id="china", color="green", surface_forms=("PRC",), level=1)
    with pytest.raises(ConflictingRedefinition):
        extend_dkb(wet_dkb, [clash])


def test_serialize_round_trip(wet_dkb, tmp_path):
    path = tmp_path / "dkb.json"
    path.write_text(jsonio.dumps(wet_dkb.to_json()), encoding="utf-8")
    again = dkb_from_json(jsonio.read(path))
    assert again.to_json() == wet_dkb.to_json()
    assert again.index == wet_dkb.index
