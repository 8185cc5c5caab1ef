"""Shared fixtures: a small world-economy DKB with an eight-clause sample
text whose annotation script exercises the whole pipeline, plus builders
for weighted-rule scenarios and synthetic conflict-free corpora."""

import random

import pytest

from arsg import service
from arsg.dkb import Concept, _validate_and_build, dkb_from_json
from arsg.grammar import (
    LEFT,
    RIGHT,
    AttributeMap,
    AttributeSchema,
    Grammar,
    ProductionRule,
    Reason,
    ReasonAtom,
    canonical_equations,
    const_eq,
    default_schema,
)
from arsg.learner import instances_from_log

EXAMPLE2_LINES = [
    "It is well known that although China's foreign trade develops rapidly and",
    "China's integration into the global value chain is increasing",
    "China is still in a lower position in the international division of labor.",
    "Especially in the high-tech industries, technology and services exports and so on",
    "China is still at the low end of the global value chain.",
    "Therefore, how to speed up the transformation and upgrading of foreign trade,",
    "and to enhance the status of international division of labor in China",
    "is an important factor of China's economic development in the future.",
]

CUE_LEXICON = [
    "although",
    "still",
    "nevertheless",
    "especially",
    "in particular",
    "because",
    "therefore",
    "while",
    "whereas",
]

WET_DKB_DOC = {
    "domain": "world-economy",
    "concepts": [
        {"id": "china", "color": "green", "forms": ["China", "China's"], "level": 1},
        {"id": "foreign_trade", "color": "red", "forms": ["foreign trade"], "level": 1},
        {
            "id": "integration_gvc",
            "color": "red",
            "forms": ["integration into the global value chain"],
            "level": 1,
        },
        {
            "id": "division_labor",
            "color": "red",
            "forms": ["international division of labor"],
            "level": 1,
        },
        {
            "id": "gvc",
            "color": "red",
            "forms": ["global value chain", "technology and services exports"],
            "level": 1,
        },
        {
            "id": "transform_upgrade",
            "color": "red",
            "forms": ["transformation and upgrading"],
            "level": 1,
        },
        {
            "id": "econ_devel",
            "color": "red",
            "forms": ["economic development in the future"],
            "level": 1,
        },
        {"id": "dev_rap", "color": "blue", "forms": ["develops rapidly"], "level": 1, "polarity": 1},
        {"id": "increasing", "color": "blue", "forms": ["increasing"], "level": 1, "polarity": 1},
        {"id": "low_pos", "color": "blue", "forms": ["lower position"], "level": 1, "polarity": -1},
        {"id": "low_end", "color": "blue", "forms": ["low end"], "level": 1},
        {"id": "speed_up", "color": "blue", "forms": ["speed up"], "level": 1, "polarity": 1},
        {"id": "enhance", "color": "blue", "forms": ["enhance"], "level": 1, "polarity": 1},
        {"id": "is_factor", "color": "blue", "forms": ["is an important factor"], "level": 1},
    ],
}

# full annotation script for the eight-clause text; the first three
# decisions are the documented reduce/reduce/shift prefix
EXAMPLE2_SCRIPT = [
    {"action": "reduce", "head": "good_devel", "left_role": "N", "right_role": "S",
     "rre": "Conjunction", "attributes": {"happy": 1}},
    {"action": "reduce", "head": "devel_but_low", "left_role": "S", "right_role": "N",
     "rre": "Concession", "attributes": {"happy": -1}},
    {"action": "shift"},
    {"action": "reduce", "head": "low_end_overall", "left_role": "N", "right_role": "S",
     "rre": "Elaboration", "attributes": {"happy": 0}},
    {"action": "reduce", "head": "low_status", "left_role": "N", "right_role": "S",
     "rre": "Elaboration", "attributes": {"happy": -1}},
    {"action": "shift"},
    {"action": "reduce", "head": "improve_plan", "left_role": "N", "right_role": "N",
     "rre": "Conjunction", "attributes": {"happy": 1}},
    {"action": "shift"},
    {"action": "reduce", "head": "future_devel", "left_role": "S", "right_role": "N",
     "rre": "Elaboration", "attributes": {"happy": 0}},
    {"action": "reduce", "head": "overall", "left_role": "S", "right_role": "N",
     "rre": "Solutionhood", "attributes": {"happy": 0}},
]


@pytest.fixture
def wet_dkb():
    return dkb_from_json(WET_DKB_DOC)


@pytest.fixture
def cue_lexicon():
    return list(CUE_LEXICON)


def run_example2_session(dkb, cues, text_id="wet-sample"):
    sess = service.create_session(EXAMPLE2_LINES, dkb, cues, text_id=text_id)
    for decision in EXAMPLE2_SCRIPT:
        service.apply_decision(sess, decision)
    return service.finalize(sess)


@pytest.fixture
def example2_log(wet_dkb, cue_lexicon):
    _artr, log = run_example2_session(wet_dkb, cue_lexicon)
    return log


@pytest.fixture
def example2_artr(wet_dkb, cue_lexicon):
    artr, _log = run_example2_session(wet_dkb, cue_lexicon)
    return artr


# ---------------------------------------------------------------------------
# weighted-rule scenario: 23 instances, counts 3/1/4/1/5/9 over heads D/E/F


def weighted_rule_schema():
    return AttributeSchema(
        (
            ("rre", "symbol", "semantic"),
            ("role", "symbol", "semantic"),
            ("cue", "string_set", "syntactic"),
            ("happy", "integer", "semantic"),
            ("punctuation", "symbol", "syntactic"),
            ("u_lt_s", "boolean", "semantic"),
            ("v_lt_s", "boolean", "semantic"),
        )
    )


def _cond(attr):
    return Reason.conjunction([ReasonAtom(LEFT, attr, "EQ", True)])


def weighted_rule_instances():
    """The six instance groups with copy counts 3, 1, 4, 1, 5, 9."""
    from arsg.learner import RuleInstance

    u, v = _cond("u_lt_s"), _cond("v_lt_s")
    groups = [
        ("D", u, "q_eq_r", "N", "S", 3),
        ("D", v, "q_eq_r_plus_1", "S", "N", 1),
        ("E", u, "m_eq_q_minus_1", "S", "N", 4),
        ("E", v, "m_eq_q_minus_1", "S", "N", 1),
        ("F", v, "q_eq_r_plus_1", "N", "S", 5),
        ("F", u, "q_eq_r_plus_2", "N", "S", 9),
    ]
    instances = []
    for head, reason, label, lrole, rrole, copies in groups:
        eqs = canonical_equations([const_eq("rre", label), const_eq("happy", 0)])
        for _ in range(copies):
            instances.append(
                RuleInstance(
                    head=head,
                    reason=reason,
                    equations=eqs,
                    left="A",
                    right="B",
                    left_role=lrole,
                    right_role=rrole,
                )
            )
    return instances


def weighted_rule_grammar(rules):
    schema = weighted_rule_schema()
    return Grammar(
        start="RS",
        dre=frozenset({"RS", "A", "B", "D", "E", "F"}),
        dcp=frozenset(),
        rre=frozenset({"q_eq_r", "q_eq_r_plus_1", "m_eq_q_minus_1", "q_eq_r_plus_2"}),
        schema=schema,
        productions=tuple(rules),
        precedences=(),
    )


def context_node(dre, u, v):
    from arsg.grammar import ArtrNode

    return ArtrNode(
        dre=dre,
        attributes=AttributeMap.of({"u_lt_s": u, "v_lt_s": v, "happy": 0}),
        leaf_edu=1,
    )


# ---------------------------------------------------------------------------
# synthetic conflict-free corpus


def _leaf(symbol, position, schema):
    from arsg.grammar import ArtrNode

    return ArtrNode(
        dre=symbol,
        attributes=AttributeMap.of(
            {"cue": frozenset(), "punctuation": "none", "happy": 0, "position": position}
        ),
        leaf_edu=position,
        leaf_text="edu %d" % position,
    )


def _head_symbol(left, right):
    return "n_" + left + "_" + right


def _script_session(symbols, decisions, text_id):
    schema = default_schema()
    roots = [_leaf(s, i + 1, schema) for i, s in enumerate(symbols)]
    sess = service.Session(
        id=text_id, text_id=text_id, edus=[], basic_roots=roots, schema=schema
    )
    service._reset(sess)
    for decision in decisions:
        service.apply_decision(sess, decision)
    return service.finalize(sess)


def _reduce_payload(head):
    return {
        "action": "reduce",
        "head": head,
        "left_role": "N",
        "right_role": "S",
        "rre": "Join",
        "attributes": {"happy": 0},
    }


def right_branching_log(symbols, text_id):
    """Shift to the end, then fold from the right."""
    decisions = [{"action": "shift"} for _ in range(len(symbols) - 2)]
    stack = list(symbols)
    while len(stack) > 1:
        head = _head_symbol(stack[-2], stack[-1])
        decisions.append(_reduce_payload(head))
        stack[-2:] = [head]
    _artr, log = _script_session(symbols, decisions, text_id)
    return log


def left_branching_log(symbols, text_id):
    """Fold eagerly from the left; only the last reduce sees end of input."""
    decisions = []
    stack = list(symbols[:2])
    remaining = len(symbols) - 2
    while len(stack) > 1 or remaining:
        if len(stack) < 2:
            # service refills automatically after a reduce
            stack.append(symbols[len(symbols) - remaining])
            remaining -= 1
            continue
        head = _head_symbol(stack[-2], stack[-1])
        decisions.append(_reduce_payload(head))
        stack[-2:] = [head]
    _artr, log = _script_session(symbols, decisions, text_id)
    return log


def random_artr(rng, n_leaves, rre_labels=("Join", "Elaboration"), dre_pool=None):
    """Random binary tree with N/S, S/N or N/N role patterns on internal
    nodes; leaves are numbered 1..n in text order."""
    from arsg.grammar import ArtrNode

    counter = [0]

    def build(k):
        if k == 1:
            counter[0] += 1
            i = counter[0]
            return _leaf(
                dre_pool[i % len(dre_pool)] if dre_pool else ("b%d" % (i % 3)), i, None
            )
        split = rng.randint(1, k - 1)
        left = build(split)
        right = build(k - split)
        left_role, right_role = rng.choice([("N", "S"), ("S", "N"), ("N", "N")])
        return ArtrNode(
            dre="n%d" % rng.randint(0, 3),
            attributes=AttributeMap.of(
                {
                    "rre": rng.choice(list(rre_labels)),
                    "happy": 0,
                    "cue": frozenset(),
                    "punctuation": "none",
                }
            ),
            children=(left.with_role(left_role), right.with_role(right_role)),
        )

    return build(n_leaves)


def synthetic_corpus(n_texts=60, seed=20240817):
    """Conflict-free by construction: one family always shifts before the
    end of input, the other (over a disjoint alphabet) always reduces."""
    rng = random.Random(seed)
    shift_alpha = ["b%d" % i for i in range(4)]
    reduce_alpha = ["c%d" % i for i in range(4)]
    logs = []
    for i in range(n_texts):
        length = rng.randint(2, 6)
        if i % 2 == 0:
            symbols = [rng.choice(shift_alpha) for _ in range(length)]
            logs.append(right_branching_log(symbols, "right%03d" % i))
        else:
            symbols = [rng.choice(reduce_alpha) for _ in range(length)]
            logs.append(left_branching_log(symbols, "left%03d" % i))
    return logs
