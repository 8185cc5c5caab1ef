"""Interactive annotation sessions: present the parse state, accept
shift/reduce decisions, enforce legality, record decision events and
finalize the tree plus its replayable log.

State is always derivable from the basic trees plus the event list, so undo
simply drops the last event and replays.
"""

import itertools
from dataclasses import dataclass, field

from .errors import (
    IllegalShift,
    IncompleteReduce,
    NoLexicalCores,
    NothingToUndo,
    NotReducedToRoot,
    SessionClosed,
)
from .grammar import (
    END,
    REDUCE,
    ROLE_PAIRS,
    SHIFT,
    Artr,
    default_schema,
    reduce_nodes,
    standard_equations,
)
from .learner import AnnotationLog, DecisionEvent
from .textprep import build_basic_trees, edus_from_lines, extract_lcs, segment

OPEN, FINALIZED, ABANDONED = "OPEN", "FINALIZED", "ABANDONED"

_session_counter = itertools.count(1)


@dataclass
class Session:
    id: str
    text_id: str
    edus: list
    basic_roots: list  # leaf ArtrNodes in text order
    schema: object
    stack: list = field(default_factory=list)
    pos: int = 0
    events: list = field(default_factory=list)
    status: str = OPEN
    grammar: object = None  # optional, for non-binding hints

    @property
    def lookahead(self):
        if self.pos < len(self.basic_roots):
            return self.basic_roots[self.pos]
        return None


def create_session(
    text,
    dkb,
    cue_lexicon,
    overrides=None,
    text_id=None,
    schema=None,
    grammar=None,
    session_id=None,
):
    """Preprocess a text (string or pre-segmented lines) and open a session
    with the first two basic-tree roots pushed."""
    schema = schema or default_schema()
    if isinstance(text, str):
        edus = segment(text)
    else:
        edus = edus_from_lines(text)
    lcs, _skipped = extract_lcs(edus, dkb)
    if not lcs:
        raise NoLexicalCores("text yields no lexical cores")
    trees = build_basic_trees(lcs, edus, dkb, cue_lexicon, overrides, schema)
    roots = [bt.root for bt in trees]
    session = Session(
        id=session_id or ("s%d" % next(_session_counter)),
        text_id=text_id or "text",
        edus=edus,
        basic_roots=roots,
        schema=schema,
        grammar=grammar,
    )
    _reset(session)
    return session


def _reset(session):
    session.stack = list(session.basic_roots[: min(2, len(session.basic_roots))])
    session.pos = len(session.stack)


def legal_actions(session):
    actions = []
    if session.status == OPEN:
        if session.lookahead is not None and len(session.stack) >= 2:
            actions.append("shift")
        if len(session.stack) >= 2:
            actions.append("reduce")
    return actions


def _context_event(session, kind, **reduce_fields):
    left, middle = session.stack[-2], session.stack[-1]
    lookahead = session.lookahead
    return DecisionEvent(
        kind=kind,
        left_dre=left.dre,
        middle_dre=middle.dre,
        lookahead_dre=lookahead.dre if lookahead is not None else END,
        left_attrs=left.attributes,
        middle_attrs=middle.attributes,
        lookahead_attrs=lookahead.attributes if lookahead is not None else None,
        **reduce_fields,
    )


def apply_decision(session, decision):
    """Apply a decision payload.

    Shift: ``{"action": "shift"}``.  Reduce: ``{"action": "reduce",
    "head": dre, "left_role": "N"|"S", "right_role": ..., "rre": label,
    "attributes": {name: value}}`` (extra constant attributes, e.g. happy).
    """
    if session.status != OPEN:
        raise SessionClosed("session %s is %s" % (session.id, session.status))
    action = decision.get("action")
    if action == "shift":
        if session.lookahead is None:
            raise IllegalShift("no input left to shift")
        if len(session.stack) < 2:
            raise IncompleteReduce("fewer than two stack nodes")
        event = _context_event(session, SHIFT)
        session.stack.append(session.basic_roots[session.pos])
        session.pos += 1
    elif action == "reduce":
        if len(session.stack) < 2:
            raise IncompleteReduce("fewer than two stack nodes")
        head = decision.get("head")
        left_role = decision.get("left_role")
        right_role = decision.get("right_role")
        rre = decision.get("rre")
        if not head or not rre:
            raise IncompleteReduce("reduce needs head and rre")
        if (left_role, right_role) not in ROLE_PAIRS:
            raise IncompleteReduce(
                "roles (%s, %s) are not an allowed pattern" % (left_role, right_role)
            )
        extras = dict(decision.get("attributes", {}))
        equations = standard_equations(rre, extras)
        event = _context_event(
            session,
            REDUCE,
            head=head,
            left_role=left_role,
            right_role=right_role,
            rre_label=rre,
            equations=equations,
        )
        parent = reduce_nodes(
            head, left_role, right_role, equations,
            session.stack[-2], session.stack[-1], session.schema,
        )
        session.stack[-2:] = [parent]
        # bookkeeping refill so the annotator always faces a genuine choice
        while len(session.stack) < 2 and session.pos < len(session.basic_roots):
            session.stack.append(session.basic_roots[session.pos])
            session.pos += 1
    else:
        raise IncompleteReduce("unknown action %r" % action)
    session.events.append(event)
    return session


def undo(session):
    """Drop the last event and replay the rest."""
    if session.status != OPEN:
        raise SessionClosed("session %s is %s" % (session.id, session.status))
    if not session.events:
        raise NothingToUndo("no events recorded")
    events = session.events[:-1]
    session.events = []
    _reset(session)
    for event in events:
        if event.kind == SHIFT:
            apply_decision(session, {"action": "shift"})
        else:
            extras = {
                eq.target: eq.operands[0]
                for eq in event.equations
                if eq.op == "const" and eq.target != "rre"
            }
            apply_decision(
                session,
                {
                    "action": "reduce",
                    "head": event.head,
                    "left_role": event.left_role,
                    "right_role": event.right_role,
                    "rre": event.rre_label,
                    "attributes": extras,
                },
            )
    return session


def finalize(session):
    """Close the session and return (Artr, AnnotationLog)."""
    if session.status != OPEN:
        raise SessionClosed("session %s is %s" % (session.id, session.status))
    if len(session.stack) != 1 or session.lookahead is not None:
        raise NotReducedToRoot("stack not reduced to a single root")
    session.status = FINALIZED
    artr = Artr(root=session.stack[0], schema=session.schema)
    log = AnnotationLog(
        text_id=session.text_id,
        basic_roots=tuple(session.basic_roots),
        events=tuple(session.events),
        artr=session.stack[0],
        schema=session.schema,
    )
    return artr, log


def session_log(session):
    """Current (possibly partial) event log document."""
    return {
        "text_id": session.text_id,
        "schema": session.schema.to_json(),
        "basic_trees": [node.to_json() for node in session.basic_roots],
        "events": [event.to_json() for event in session.events],
        "status": session.status,
    }


def suggested_action(session):
    """Non-binding hint from a loaded grammar, or None."""
    if session.grammar is None or len(session.stack) < 2:
        return None
    from .parser import ParseConfig, decide_action
    from .errors import NoAction

    try:
        directions = decide_action(
            session.grammar,
            session.stack[-2],
            session.stack[-1],
            session.lookahead,
            ParseConfig(),
        )
    except NoAction:
        return None
    return directions[0].lower() if directions else None


def view_state(session):
    """JSON-ready snapshot of the session for clients."""
    return {
        "id": session.id,
        "text_id": session.text_id,
        "status": session.status,
        "edus": [
            {"id": e.id, "text": e.text, "punctuation": e.terminal_punctuation}
            for e in session.edus
        ],
        "stack": [node.to_json() for node in session.stack],
        "lookahead": (
            session.lookahead.to_json() if session.lookahead is not None else None
        ),
        "input_remaining": len(session.basic_roots) - session.pos,
        "events": [event.to_json() for event in session.events],
        "legal_actions": legal_actions(session),
        "hint": suggested_action(session),
    }
