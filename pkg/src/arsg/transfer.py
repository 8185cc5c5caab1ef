"""Map a learned grammar to a sibling domain: pure symbol substitution over
productions, precedence tuples, reasons and equation constants, plus
attribute-schema renames, with a change-count report."""

from dataclasses import dataclass, replace

from . import jsonio
from .errors import DanglingTarget, SchemaViolation
from .grammar import (
    END,
    AttributeEquation,
    Grammar,
    PrecedenceTuple,
    ProductionRule,
    Reason,
    ReasonAtom,
)


@dataclass(frozen=True)
class ConceptMapping:
    pairs: tuple  # sorted (source concept id, target concept id)
    attribute_renames: tuple = ()  # sorted (source attr name, target name)

    def __post_init__(self):
        mapping = dict(self.pairs)
        if len(mapping) != len(self.pairs):
            raise SchemaViolation("duplicate source in mapping")
        targets = list(mapping.values())
        if len(set(targets)) != len(targets):
            raise SchemaViolation("mapping must be injective on DRE symbols")

    @classmethod
    def of(cls, pairs, attribute_renames=None):
        return cls(
            pairs=tuple(sorted(dict(pairs).items())),
            attribute_renames=tuple(sorted(dict(attribute_renames or {}).items())),
        )

    def symbol_map(self):
        return dict(self.pairs)

    def rename_map(self):
        return dict(self.attribute_renames)

    def to_json(self):
        records = [
            {"source": s, "target": t, "class": "dre"} for s, t in self.pairs
        ]
        records += [
            {"source": s, "target": t, "class": "attribute"}
            for s, t in self.attribute_renames
        ]
        return {"pairs": records}

    @classmethod
    def from_json(cls, doc):
        pairs = {}
        renames = {}
        for record in doc["pairs"]:
            if record.get("class", "dre") == "attribute":
                renames[record["source"]] = record["target"]
            else:
                pairs[record["source"]] = record["target"]
        return cls.of(pairs, renames)


def load_mapping(path):
    return ConceptMapping.from_json(jsonio.read(path))


@dataclass(frozen=True)
class TransferReport:
    changed_productions: int
    changed_attributes: int
    changed_precedences: int


def compose(first, second):
    """Mapping equal to applying ``first`` then ``second``."""
    f = first.symbol_map()
    s = second.symbol_map()
    out = {src: s.get(tgt, tgt) for src, tgt in f.items()}
    consumed = set(f.values())
    for src, tgt in s.items():
        # symbols in first's range are already rewritten above
        if src not in out and src not in consumed:
            out[src] = tgt
    rf = first.rename_map()
    rs = second.rename_map()
    renames = {src: rs.get(tgt, tgt) for src, tgt in rf.items()}
    taken = set(rf.values())
    for src, tgt in rs.items():
        if src not in renames and src not in taken:
            renames[src] = tgt
    return ConceptMapping.of(out, renames)


def _map_value(value, symbols):
    if isinstance(value, str):
        return symbols.get(value, value)
    if isinstance(value, frozenset):
        return frozenset(symbols.get(v, v) for v in value)
    return value


def _map_atom(atom, symbols, renames):
    return ReasonAtom(
        slot=atom.slot,
        attribute=renames.get(atom.attribute, atom.attribute),
        op=atom.op,
        literal=_map_value(atom.literal, symbols),
    )


def _map_reason(reason, symbols, renames):
    if reason.constant_true:
        return reason
    return Reason(
        dnf=tuple(
            tuple(_map_atom(a, symbols, renames) for a in clause)
            for clause in reason.dnf
        )
    )


def _map_equation(eq, symbols, renames):
    target = renames.get(eq.target, eq.target)
    if eq.op == "const":
        operands = (_map_value(eq.operands[0], symbols),)
    elif eq.op == "copy":
        operands = (eq.operands[0], renames.get(eq.operands[1], eq.operands[1]))
    else:
        operands = tuple(renames.get(o, o) for o in eq.operands)
    return AttributeEquation(target=target, op=eq.op, operands=operands)


def transfer_grammar(grammar, mapping, ext_dkb=None):
    """Substitute mapped symbols everywhere; returns (grammar, report)."""
    symbols = mapping.symbol_map()
    renames = mapping.rename_map()
    if ext_dkb is not None:
        dangling = [t for t in symbols.values() if t not in ext_dkb.concepts]
        if dangling:
            raise DanglingTarget(
                "mapping targets absent from extended DKB: %s" % sorted(dangling)
            )

    changed_rules = 0
    productions = []
    for rule in grammar.productions:
        mapped = ProductionRule(
            head=symbols.get(rule.head, rule.head),
            reason=_map_reason(rule.reason, symbols, renames),
            equations=tuple(
                _map_equation(eq, symbols, renames) for eq in rule.equations
            ),
            left_role=rule.left_role,
            right_role=rule.right_role,
            left=symbols.get(rule.left, rule.left),
            right=symbols.get(rule.right, rule.right),
            weight=rule.weight,
        )
        if mapped != rule:
            changed_rules += 1
        productions.append(mapped)

    changed_tuples = 0
    precedences = []
    for tup in grammar.precedences:
        mapped = PrecedenceTuple(
            left=symbols.get(tup.left, tup.left),
            middle=symbols.get(tup.middle, tup.middle),
            lookahead=(
                tup.lookahead
                if tup.lookahead == END
                else symbols.get(tup.lookahead, tup.lookahead)
            ),
            direction=tup.direction,
            reason=_map_reason(tup.reason, symbols, renames),
            probability=tup.probability,
        )
        if mapped != tup:
            changed_tuples += 1
        precedences.append(mapped)

    schema = grammar.schema
    changed_attrs = 0
    if renames:
        names = set(schema.names())
        changed_attrs = sum(1 for src in renames if src in names)
        schema = schema.rename(renames)

    out = Grammar(
        start=symbols.get(grammar.start, grammar.start),
        dre=frozenset(symbols.get(s, s) for s in grammar.dre),
        dcp=frozenset(symbols.get(s, s) for s in grammar.dcp),
        rre=grammar.rre,
        schema=schema,
        productions=tuple(productions),
        precedences=tuple(precedences),
    )
    report = TransferReport(
        changed_productions=changed_rules,
        changed_attributes=changed_attrs,
        changed_precedences=changed_tuples,
    )
    return out, report
