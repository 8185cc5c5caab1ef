import pytest

from arsg import service
from arsg.errors import (
    IllegalShift,
    IncompleteReduce,
    NoLexicalCores,
    NothingToUndo,
    NotReducedToRoot,
    SessionClosed,
)
from arsg.learner import replay_log
from conftest import (
    CUE_LEXICON,
    EXAMPLE2_LINES,
    EXAMPLE2_SCRIPT,
    run_example2_session,
)


def fresh(wet_dkb, cues):
    return service.create_session(EXAMPLE2_LINES, wet_dkb, cues, text_id="t")


def test_create_session_initial_state(wet_dkb, cue_lexicon):
    sess = fresh(wet_dkb, cue_lexicon)
    assert len(sess.basic_roots) == 8
    assert [n.dre for n in sess.stack] == ["dev_rap", "increasing"]
    assert sess.lookahead.dre == "low_pos"
    assert service.legal_actions(sess) == ["shift", "reduce"]


def test_create_session_no_cores(wet_dkb, cue_lexicon):
    with pytest.raises(NoLexicalCores):
        service.create_session(["nothing relevant"], wet_dkb, cue_lexicon)


def test_single_core_session_finalizable(wet_dkb, cue_lexicon):
    sess = service.create_session(
        ["China's foreign trade develops rapidly."], wet_dkb, cue_lexicon
    )
    assert len(sess.basic_roots) == 1
    assert service.legal_actions(sess) == []
    artr, log = service.finalize(sess)
    assert artr.root.is_leaf and log.events == ()


def test_reduce_updates_stack_and_refills(wet_dkb, cue_lexicon):
    sess = fresh(wet_dkb, cue_lexicon)
    service.apply_decision(sess, EXAMPLE2_SCRIPT[0])
    assert [n.dre for n in sess.stack] == ["good_devel", "low_pos"]
    assert sess.lookahead.dre == "low_end"
    parent = sess.stack[0]
    assert parent.attributes.get("cue") == frozenset({"although"})
    assert parent.attributes.get("happy") == 1
    assert parent.attributes.get("rre") == "Conjunction"
    assert [c.attributes.get("role") for c in parent.children] == ["N", "S"]
    # only one event recorded: the refill shift is bookkeeping
    assert len(sess.events) == 1


def test_shift_at_end_illegal(wet_dkb, cue_lexicon):
    sess = fresh(wet_dkb, cue_lexicon)
    for decision in EXAMPLE2_SCRIPT:
        service.apply_decision(sess, decision)
    with pytest.raises(IllegalShift):
        service.apply_decision(sess, {"action": "shift"})


def test_forbidden_role_pair(wet_dkb, cue_lexicon):
    sess = fresh(wet_dkb, cue_lexicon)
    with pytest.raises(IncompleteReduce):
        service.apply_decision(
            sess,
            {"action": "reduce", "head": "x", "left_role": "S", "right_role": "S",
             "rre": "Join"},
        )


def test_reduce_needs_head_and_rre(wet_dkb, cue_lexicon):
    sess = fresh(wet_dkb, cue_lexicon)
    with pytest.raises(IncompleteReduce):
        service.apply_decision(
            sess, {"action": "reduce", "left_role": "N", "right_role": "S"}
        )


def test_undo_restores_state_exactly(wet_dkb, cue_lexicon):
    sess = fresh(wet_dkb, cue_lexicon)
    service.apply_decision(sess, EXAMPLE2_SCRIPT[0])
    before = service.view_state(sess)
    service.apply_decision(sess, EXAMPLE2_SCRIPT[1])
    service.undo(sess)
    after = service.view_state(sess)
    assert after == before


def test_undo_nothing(wet_dkb, cue_lexicon):
    sess = fresh(wet_dkb, cue_lexicon)
    with pytest.raises(NothingToUndo):
        service.undo(sess)


def test_finalize_too_early(wet_dkb, cue_lexicon):
    sess = fresh(wet_dkb, cue_lexicon)
    with pytest.raises(NotReducedToRoot):
        service.finalize(sess)


def test_finalized_session_closed(wet_dkb, cue_lexicon):
    artr, _log = run_example2_session(wet_dkb, cue_lexicon)
    assert artr.root.dre == "overall"


def test_closed_session_rejects_decisions(wet_dkb, cue_lexicon):
    sess = fresh(wet_dkb, cue_lexicon)
    for decision in EXAMPLE2_SCRIPT:
        service.apply_decision(sess, decision)
    service.finalize(sess)
    with pytest.raises(SessionClosed):
        service.apply_decision(sess, {"action": "shift"})
    with pytest.raises(SessionClosed):
        service.undo(sess)


def test_log_replays_and_counts(wet_dkb, cue_lexicon):
    _artr, log = run_example2_session(wet_dkb, cue_lexicon)
    replay_log(log)
    n = len(log.basic_roots)
    reduces = sum(1 for e in log.events if e.kind == "REDUCE")
    shifts = sum(1 for e in log.events if e.kind == "SHIFT")
    assert reduces == n - 1
    # recorded plus bookkeeping refills account for every entering tree
    assert shifts <= n - 2
    assert len(log.events) == reduces + shifts


def test_suggested_action_hint(wet_dkb, cue_lexicon):
    from arsg.learner import learn

    _artr, log = run_example2_session(wet_dkb, cue_lexicon)
    grammar = learn([log])
    sess = service.create_session(
        EXAMPLE2_LINES, wet_dkb, cue_lexicon, grammar=grammar
    )
    assert service.suggested_action(sess) == "reduce"
    state = service.view_state(sess)
    assert state["hint"] == "reduce"
