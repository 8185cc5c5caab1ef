"""Bottom-up probabilistic attributed relation precedence parsing with
depth-first backtracking.

Shift-reduce conflicts are resolved by precedence tuples, reduce-reduce
conflicts by rule weights (exact rational probabilities).  Alternatives are
explored in probability-descending order; a full state snapshot is kept per
choice point.
"""

from dataclasses import dataclass, field
from fractions import Fraction

from .errors import NoAction, NoApplicableRule, ParseFailure
from .grammar import (
    END,
    LEFT,
    LOOKAHEAD,
    REDUCE,
    RIGHT,
    SHIFT,
    Artr,
    eval_reason,
    reduce_nodes,
)

BACKOFF_FAIL = "FAIL"
BACKOFF_MAJORITY = "MAJORITY_ABC_STAR"
BACKOFF_DEFAULT_SHIFT = "DEFAULT_SHIFT"

TIE_LEFTMOST_RULE = "LEFTMOST_RULE"
TIE_LOWEST_HEAD = "LOWEST_HEAD_SYMBOL"


@dataclass
class ParseConfig:
    backoff: str = BACKOFF_MAJORITY
    max_backtracks: int = 10_000
    tie_break: str = TIE_LEFTMOST_RULE

    def __post_init__(self):
        if self.max_backtracks < 1:
            raise ValueError("max_backtracks must be >= 1")


@dataclass
class ParseStats:
    steps: int = 0
    backtracks: int = 0


def applicable_rules(grammar, left, right, config=None):
    """Rules whose right side is (dre(left), dre(right)) and whose reason
    holds; probability = weight / total satisfied weight, sorted
    descending."""
    config = config or ParseConfig()
    ctx = {LEFT: left.attributes, RIGHT: right.attributes}
    candidates = []
    for order, rule in enumerate(grammar.rules_for(left.dre, right.dre)):
        if eval_reason(rule.reason, ctx):
            candidates.append((order, rule))
    if not candidates:
        raise NoApplicableRule(
            "no rule applies to (%s, %s) in this context" % (left.dre, right.dre)
        )
    total = sum(rule.weight for _, rule in candidates)
    if config.tie_break == TIE_LOWEST_HEAD:
        tie_key = lambda pair: pair[1].head
    else:
        tie_key = lambda pair: pair[0]
    ordered = sorted(
        candidates, key=lambda pair: (-Fraction(pair[1].weight, total), tie_key(pair))
    )
    return [(rule, Fraction(rule.weight, total)) for _, rule in ordered]


def _reason_ctx(left, right, lookahead):
    return {
        LEFT: left.attributes,
        RIGHT: right.attributes,
        LOOKAHEAD: lookahead.attributes if lookahead is not None else None,
    }


def decide_action(grammar, left, right, lookahead, config=None):
    """Ordered list of directions (SHIFT/REDUCE) for the current context.

    ``lookahead`` is None at end of input, where only REDUCE is possible.
    """
    config = config or ParseConfig()
    at_end = lookahead is None
    if at_end:
        # reduce is forced whenever any rule applies
        return [REDUCE]
    ctx = _reason_ctx(left, right, lookahead)
    shift_tup, reduce_tup = grammar.precedence_for(
        left.dre, right.dre, lookahead.dre
    )
    satisfied = []
    if shift_tup is not None and eval_reason(shift_tup.reason, ctx):
        satisfied.append((shift_tup.probability, SHIFT))
    if reduce_tup is not None and eval_reason(reduce_tup.reason, ctx):
        satisfied.append((reduce_tup.probability, REDUCE))
    if satisfied:
        satisfied.sort(key=lambda pair: (-pair[0], pair[1] != SHIFT))
        return [direction for _, direction in satisfied]
    return _backoff(grammar, left, right, at_end=False, config=config)


def _backoff(grammar, left, right, at_end, config):
    if config.backoff == BACKOFF_FAIL:
        raise NoAction(
            "no precedence action for (%s, %s) and backoff is FAIL"
            % (left.dre, right.dre)
        )
    if config.backoff == BACKOFF_DEFAULT_SHIFT:
        return [REDUCE] if at_end else [SHIFT]
    # MAJORITY_ABC_STAR: aggregate tuples over all lookaheads for (A, B)
    shift_mass = Fraction(0)
    reduce_mass = Fraction(0)
    for context, entry in grammar.precedence_contexts().items():
        if context[0] != left.dre or context[1] != right.dre:
            continue
        if SHIFT in entry:
            shift_mass += entry[SHIFT].probability
        if REDUCE in entry:
            reduce_mass += entry[REDUCE].probability
    if at_end:
        return [REDUCE]
    if shift_mass == reduce_mass == 0:
        return [SHIFT]
    return [SHIFT, REDUCE] if shift_mass >= reduce_mass else [REDUCE, SHIFT]


def _expand_alternatives(grammar, stack, trees, pos, config):
    """Concrete ordered actions at the current state: ('SHIFT', None) or
    ('REDUCE', rule)."""
    left, right = stack[-2], stack[-1]
    lookahead = trees[pos] if pos < len(trees) else None
    try:
        directions = decide_action(grammar, left, right, lookahead, config)
    except NoAction:
        return []
    actions = []
    for direction in directions:
        if direction == SHIFT:
            if pos < len(trees):
                actions.append((SHIFT, None))
        else:
            try:
                for rule, _p in applicable_rules(grammar, left, right, config):
                    actions.append((REDUCE, rule))
            except NoApplicableRule:
                pass
    return actions


def parse(grammar, basic_trees, config=None, trace=None):
    """Parse basic trees into a single ARTR, backtracking over recorded
    alternatives on dead ends.  ``trace``, when given, is called with a
    dict per decision and per backtrack."""
    config = config or ParseConfig()
    trees = [bt.root if hasattr(bt, "root") else bt for bt in basic_trees]
    if not trees:
        raise ParseFailure("nothing to parse")
    stats = ParseStats()
    if len(trees) == 1:
        return Artr(root=trees[0], schema=grammar.schema)

    stack = trees[:2]
    pos = 2
    trail = []  # (stack snapshot, pos, remaining alternatives)

    def fail(message):
        raise ParseFailure(
            message, partial_forest=list(stack) + trees[pos:], stats=stats
        )

    while True:
        if len(stack) == 1 and pos == len(trees):
            return Artr(root=stack[0], schema=grammar.schema)
        if len(stack) < 2:
            stack.append(trees[pos])
            pos += 1
            continue
        alternatives = _expand_alternatives(grammar, stack, trees, pos, config)
        while not alternatives:
            stats.backtracks += 1
            if not trail:
                fail("all alternatives exhausted")
            if stats.backtracks >= config.max_backtracks:
                fail("backtrack limit reached")
            snapshot, snap_pos, rest = trail.pop()
            stack = list(snapshot)
            pos = snap_pos
            alternatives = rest
            if trace is not None:
                trace({"event": "backtrack", "stack_depth": len(stack), "pos": pos})
        action, rest = alternatives[0], alternatives[1:]
        if rest:
            trail.append((tuple(stack), pos, rest))
        stats.steps += 1
        kind, rule = action
        if trace is not None:
            trace(
                {
                    "event": "decision",
                    "action": kind,
                    "left": stack[-2].dre,
                    "right": stack[-1].dre,
                    "lookahead": trees[pos].dre if pos < len(trees) else END,
                    "head": rule.head if rule is not None else None,
                }
            )
        if kind == SHIFT:
            stack.append(trees[pos])
            pos += 1
        else:
            parent = reduce_nodes(
                rule.head,
                rule.left_role,
                rule.right_role,
                rule.equations,
                stack[-2],
                stack[-1],
                grammar.schema,
                rule=rule,
            )
            stack[-2:] = [parent]
