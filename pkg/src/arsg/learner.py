"""Grammar learning: turn annotation logs into rule/precedence instances and
synthesize them into a grammar.

Precedence probabilities are exact rationals n/(n+m); zero-probability
directions are dropped.  Rules that agree on everything but their reasons are
clustered into one weighted rule whose reason is the disjunction of the
member reasons.
"""

from dataclasses import dataclass
from fractions import Fraction

from . import jsonio
from .errors import ReplayMismatch, SchemaViolation, UnknownSymbol
from .grammar import (
    END,
    LEFT,
    LOOKAHEAD,
    REDUCE,
    RIGHT,
    SHIFT,
    Artr,
    ArtrNode,
    AttributeEquation,
    AttributeMap,
    AttributeSchema,
    Grammar,
    PrecedenceTuple,
    ProductionRule,
    Reason,
    ReasonAtom,
    canonical_equations,
    default_schema,
    disjoin,
    reduce_nodes,
)

DEFAULT_REASON_ATTRS = ("cue", "happy", "punctuation")


@dataclass(frozen=True)
class DecisionEvent:
    kind: str  # SHIFT or REDUCE
    left_dre: str
    middle_dre: str
    lookahead_dre: str  # END at end of input
    left_attrs: AttributeMap
    middle_attrs: AttributeMap
    lookahead_attrs: AttributeMap | None
    # reduce payload
    head: str | None = None
    left_role: str | None = None
    right_role: str | None = None
    rre_label: str | None = None
    equations: tuple = ()

    def to_json(self):
        doc = {
            "kind": self.kind,
            "context": {
                "left": self.left_dre,
                "middle": self.middle_dre,
                "lookahead": self.lookahead_dre,
                "left_attrs": self.left_attrs.to_json(),
                "middle_attrs": self.middle_attrs.to_json(),
                "lookahead_attrs": (
                    None
                    if self.lookahead_attrs is None
                    else self.lookahead_attrs.to_json()
                ),
            },
        }
        if self.kind == REDUCE:
            doc["reduce"] = {
                "head": self.head,
                "left_role": self.left_role,
                "right_role": self.right_role,
                "rre": self.rre_label,
                "equations": [eq.to_json() for eq in self.equations],
            }
        return doc

    @classmethod
    def from_json(cls, doc, schema):
        ctx = doc["context"]
        red = doc.get("reduce", {})
        return cls(
            kind=doc["kind"],
            left_dre=ctx["left"],
            middle_dre=ctx["middle"],
            lookahead_dre=ctx["lookahead"],
            left_attrs=AttributeMap.from_json(ctx["left_attrs"], schema),
            middle_attrs=AttributeMap.from_json(ctx["middle_attrs"], schema),
            lookahead_attrs=(
                None
                if ctx["lookahead_attrs"] is None
                else AttributeMap.from_json(ctx["lookahead_attrs"], schema)
            ),
            head=red.get("head"),
            left_role=red.get("left_role"),
            right_role=red.get("right_role"),
            rre_label=red.get("rre"),
            equations=tuple(
                AttributeEquation.from_json(e) for e in red.get("equations", ())
            ),
        )


@dataclass(frozen=True)
class AnnotationLog:
    text_id: str
    basic_roots: tuple  # leaf ArtrNodes in text order
    events: tuple
    artr: ArtrNode
    schema: AttributeSchema

    def to_json(self):
        return {
            "text_id": self.text_id,
            "schema": self.schema.to_json(),
            "basic_trees": [node.to_json() for node in self.basic_roots],
            "events": [event.to_json() for event in self.events],
            "artr": self.artr.to_json(),
        }

    @classmethod
    def from_json(cls, doc):
        schema = AttributeSchema.from_json(doc["schema"])
        return cls(
            text_id=doc["text_id"],
            basic_roots=tuple(
                ArtrNode.from_json(n, schema) for n in doc["basic_trees"]
            ),
            events=tuple(DecisionEvent.from_json(e, schema) for e in doc["events"]),
            artr=ArtrNode.from_json(doc["artr"], schema),
            schema=schema,
        )


def load_log(path):
    return AnnotationLog.from_json(jsonio.read(path))


def save_log(log, path):
    jsonio.write(path, log.to_json())


def replay_log(log):
    """Re-run the recorded decisions over the basic trees; returns the root.

    Raises ReplayMismatch when any recorded context disagrees with the
    replayed state or the result differs from the stored ARTR.
    """
    roots = list(log.basic_roots)
    if not roots:
        raise ReplayMismatch("log has no basic trees")
    stack = roots[: min(2, len(roots))]
    pos = len(stack)
    for n, event in enumerate(log.events):
        if len(stack) < 2:
            raise ReplayMismatch("event %d with fewer than two stack nodes" % n)
        left, middle = stack[-2], stack[-1]
        lookahead = roots[pos] if pos < len(roots) else None
        context = (
            left.dre,
            middle.dre,
            lookahead.dre if lookahead is not None else END,
        )
        if context != (event.left_dre, event.middle_dre, event.lookahead_dre):
            raise ReplayMismatch(
                "event %d context %s does not match recorded %s"
                % (n, context, (event.left_dre, event.middle_dre, event.lookahead_dre))
            )
        if event.kind == SHIFT:
            if lookahead is None:
                raise ReplayMismatch("event %d shifts at end of input" % n)
            stack.append(lookahead)
            pos += 1
        else:
            parent = reduce_nodes(
                event.head,
                event.left_role,
                event.right_role,
                event.equations,
                left,
                middle,
                log.schema,
            )
            stack[-2:] = [parent]
            while len(stack) < 2 and pos < len(roots):
                stack.append(roots[pos])
                pos += 1
    if len(stack) != 1 or pos != len(roots):
        raise ReplayMismatch("log does not reduce to a single root")
    if stack[0] != log.artr:
        raise ReplayMismatch("replayed tree differs from stored ARTR")
    return stack[0]


# ---------------------------------------------------------------------------
# instance extraction


@dataclass(frozen=True)
class RuleInstance:
    head: str
    reason: Reason  # single conjunction
    equations: tuple
    left: str
    right: str
    left_role: str
    right_role: str


@dataclass(frozen=True)
class PrecedenceInstance:
    left: str
    middle: str
    lookahead: str
    direction: str
    reason: Reason  # single conjunction


def context_reason(slot_maps, reason_attrs, schema, slots):
    """Conjunction of attribute predicates describing a parse context.

    ``happy`` becomes a sign predicate; empty cue sets and absent
    punctuation carry no information and produce no atom.
    """
    atoms = []
    names = [n for n in schema.names() if n in reason_attrs]
    for slot in slots:
        amap = slot_maps.get(slot)
        if amap is None:
            continue
        for name in names:
            value = amap.get(name)
            if value is None:
                continue
            kind = schema.kind_of(name)
            if name == "happy":
                if value > 0:
                    atoms.append(ReasonAtom(slot, name, "GT", 0))
                elif value < 0:
                    atoms.append(ReasonAtom(slot, name, "LT", 0))
                else:
                    atoms.append(ReasonAtom(slot, name, "EQ", 0))
            elif kind == "string_set":
                if value:
                    atoms.append(ReasonAtom(slot, name, "SET_EQ", value))
            elif name == "punctuation":
                if value != "none":
                    atoms.append(ReasonAtom(slot, name, "EQ", value))
            else:
                atoms.append(ReasonAtom(slot, name, "EQ", value))
    return Reason.conjunction(atoms)


def instances_from_log(log, reason_attrs=DEFAULT_REASON_ATTRS):
    """One precedence instance per decision and one rule instance per
    reduce.  The log is replayed first; a corrupt log raises."""
    replay_log(log)
    rules = []
    precedences = []
    for event in log.events:
        slot_maps = {
            LEFT: event.left_attrs,
            RIGHT: event.middle_attrs,
            LOOKAHEAD: event.lookahead_attrs,
        }
        direction = SHIFT if event.kind == SHIFT else REDUCE
        precedences.append(
            PrecedenceInstance(
                left=event.left_dre,
                middle=event.middle_dre,
                lookahead=event.lookahead_dre,
                direction=direction,
                reason=context_reason(
                    slot_maps, reason_attrs, log.schema, (LEFT, RIGHT, LOOKAHEAD)
                ),
            )
        )
        if event.kind == REDUCE:
            rules.append(
                RuleInstance(
                    head=event.head,
                    reason=context_reason(
                        slot_maps, reason_attrs, log.schema, (LEFT, RIGHT)
                    ),
                    equations=canonical_equations(event.equations),
                    left=event.left_dre,
                    right=event.middle_dre,
                    left_role=event.left_role,
                    right_role=event.right_role,
                )
            )
    return rules, precedences


# ---------------------------------------------------------------------------
# synthesis


def _canonical_disjunction(reasons):
    merged = disjoin(*reasons)
    if merged.constant_true:
        return merged
    clauses = sorted(merged.dnf, key=lambda clause: repr(clause))
    return Reason(dnf=tuple(clauses))


def synthesize_precedence(instances):
    """Group by (A, B, C); p_shift = n/(n+m), p_reduce = m/(n+m)."""
    groups = {}
    for inst in instances:
        key = (inst.left, inst.middle, inst.lookahead)
        groups.setdefault(key, {SHIFT: [], REDUCE: []})[inst.direction].append(
            inst.reason
        )
    tuples = []
    for key in sorted(groups):
        left, middle, lookahead = key
        n = len(groups[key][SHIFT])
        m = len(groups[key][REDUCE])
        for direction, count, reasons in (
            (SHIFT, n, groups[key][SHIFT]),
            (REDUCE, m, groups[key][REDUCE]),
        ):
            if count == 0:
                continue
            tuples.append(
                PrecedenceTuple(
                    left=left,
                    middle=middle,
                    lookahead=lookahead,
                    direction=direction,
                    reason=_canonical_disjunction(reasons),
                    probability=Fraction(count, n + m),
                )
            )
    return tuple(tuples)


def cluster_rules(instances):
    """Cluster instances identical up to their reasons; the weight is the
    member count and the reason the (deduplicated) disjunction."""
    groups = {}
    order = []
    for inst in instances:
        key = (
            inst.head,
            inst.left,
            inst.right,
            inst.left_role,
            inst.right_role,
            inst.equations,
        )
        if key not in groups:
            groups[key] = []
            order.append(key)
        groups[key].append(inst.reason)
    rules = []
    for key in sorted(order, key=lambda k: (k[:5], tuple(repr(eq) for eq in k[5]))):
        head, left, right, left_role, right_role, equations = key
        reasons = groups[key]
        rules.append(
            ProductionRule(
                head=head,
                reason=_canonical_disjunction(reasons),
                equations=equations,
                left_role=left_role,
                right_role=right_role,
                left=left,
                right=right,
                weight=len(reasons),
            )
        )
    return rules


def learn(
    logs,
    schema=None,
    start="RS",
    dre=None,
    dcp=None,
    rre=None,
    reason_attrs=DEFAULT_REASON_ATTRS,
):
    """Assemble a grammar from annotation logs."""
    schema = schema or default_schema()
    rule_instances = []
    prec_instances = []
    used_symbols = set()
    used_dcp = set()
    used_rre = set()
    for log in logs:
        rules, precs = instances_from_log(log, reason_attrs)
        rule_instances.extend(rules)
        prec_instances.extend(precs)
        for node in log.artr.iter_nodes():
            used_symbols.add(node.dre)
            label = node.attributes.get("rre")
            if label is not None:
                used_rre.add(label)
            if node.leaf_lc is not None:
                lc = node.leaf_lc
                used_dcp.update((lc.green, lc.red, lc.blue))
    if dre is not None:
        missing = used_symbols - set(dre)
        if missing:
            raise UnknownSymbol(
                "symbols in logs missing from DRE set: %s" % sorted(missing)
            )
        dre = frozenset(dre)
    else:
        dre = frozenset(used_symbols)
    grammar = Grammar(
        start=start,
        dre=dre | {start},
        dcp=frozenset(dcp) if dcp is not None else frozenset(used_dcp),
        rre=frozenset(rre) if rre is not None else frozenset(used_rre),
        schema=schema,
        productions=tuple(cluster_rules(rule_instances)),
        precedences=synthesize_precedence(prec_instances),
    )
    diagnostics = [d for d in _validate(grammar)]
    if diagnostics:
        raise SchemaViolation("learned grammar invalid: %s" % "; ".join(diagnostics))
    return grammar


def _validate(grammar):
    from .grammar import validate_grammar

    return validate_grammar(grammar)
