"""Grammar core: attribute schema, reasons, attribute equations, production
rules, precedence tuples, the grammar seven-tuple and attributed trees.

Reasons are propositional formulas in disjunctive normal form over
comparison/membership atoms; probabilities are exact rationals.
"""

from dataclasses import dataclass, field, replace
from fractions import Fraction

from . import jsonio
from .errors import KindMismatch, SchemaMismatch, SchemaViolation, UnsetSource

# parse-context slots an atom or equation may bind to
LEFT, RIGHT, LOOKAHEAD = "LEFT", "RIGHT", "LOOKAHEAD"
SLOTS = (LEFT, RIGHT, LOOKAHEAD)

# sentinel lookahead symbol at end of input
END = "$end"

SHIFT, REDUCE = "SHIFT", "REDUCE"

KINDS = ("integer", "boolean", "symbol", "string_set")
SCOPES = ("syntactic", "semantic")

_REQUIRED_ATTRS = {
    "rre": "symbol",
    "role": "symbol",
    "cue": "string_set",
    "happy": "integer",
    "punctuation": "symbol",
}


@dataclass(frozen=True)
class AttributeSchema:
    entries: tuple  # of (name, kind, scope)

    def __post_init__(self):
        names = [name for name, _, _ in self.entries]
        if len(names) != len(set(names)):
            raise SchemaViolation("duplicate attribute names in schema")
        kinds = {name: kind for name, kind, _ in self.entries}
        for name, kind in _REQUIRED_ATTRS.items():
            if kinds.get(name) != kind:
                raise SchemaViolation(
                    "schema must declare %s as %s" % (name, kind)
                )
        for name, kind, scope in self.entries:
            if kind not in KINDS or scope not in SCOPES:
                raise SchemaViolation("bad kind/scope for attribute %r" % name)

    def kind_of(self, name):
        for entry_name, kind, _ in self.entries:
            if entry_name == name:
                return kind
        return None

    def names(self):
        return [name for name, _, _ in self.entries]

    def rename(self, renames):
        return AttributeSchema(
            tuple((renames.get(n, n), k, s) for n, k, s in self.entries)
        )

    def to_json(self):
        return [list(entry) for entry in self.entries]

    @classmethod
    def from_json(cls, doc):
        return cls(tuple(tuple(entry) for entry in doc))


def default_schema():
    return AttributeSchema(
        (
            ("rre", "symbol", "semantic"),
            ("role", "symbol", "semantic"),
            ("cue", "string_set", "syntactic"),
            ("happy", "integer", "semantic"),
            ("punctuation", "symbol", "syntactic"),
            ("position", "integer", "syntactic"),
        )
    )


def _value_kind(value):
    if isinstance(value, bool):
        return "boolean"
    if isinstance(value, int):
        return "integer"
    if isinstance(value, str):
        return "symbol"
    if isinstance(value, frozenset):
        return "string_set"
    return None


@dataclass(frozen=True)
class AttributeMap:
    values: tuple = ()  # sorted (name, value) pairs

    @classmethod
    def of(cls, mapping):
        return cls(tuple(sorted(mapping.items())))

    def as_dict(self):
        return dict(self.values)

    def get(self, name):
        for key, value in self.values:
            if key == name:
                return value
        return None

    def set(self, name, value):
        d = self.as_dict()
        d[name] = value
        return AttributeMap.of(d)

    def check(self, schema):
        for name, value in self.values:
            kind = schema.kind_of(name)
            if kind is None:
                raise SchemaMismatch("attribute %r not in schema" % name)
            if _value_kind(value) != kind:
                raise SchemaMismatch(
                    "attribute %r is not of kind %s" % (name, kind)
                )
        role = self.get("role")
        if role is not None and role not in ("N", "S"):
            raise SchemaMismatch("role must be N or S")
        happy = self.get("happy")
        if happy is not None and happy not in (-1, 0, 1):
            raise SchemaMismatch("happy must be -1, 0 or 1")

    def to_json(self):
        return {name: _value_to_json(value) for name, value in self.values}

    @classmethod
    def from_json(cls, doc, schema):
        out = {}
        for name, raw in doc.items():
            kind = schema.kind_of(name)
            if kind is None:
                raise SchemaViolation("attribute %r not in schema" % name)
            out[name] = _value_from_json(raw, kind)
        return cls.of(out)


def _value_to_json(value):
    if isinstance(value, frozenset):
        return sorted(value)
    return value


def _value_from_json(raw, kind):
    if kind == "string_set":
        return frozenset(raw)
    if kind == "integer":
        return int(raw)
    if kind == "boolean":
        return bool(raw)
    return raw


# ---------------------------------------------------------------------------
# reasons

_ORDER_OPS = ("LT", "GT", "LE", "GE")
_SET_OPS = ("SET_EQ", "CONTAINS")
OPS = ("EQ", "NEQ") + _ORDER_OPS + _SET_OPS


@dataclass(frozen=True)
class ReasonAtom:
    slot: str
    attribute: str
    op: str
    literal: object

    def __post_init__(self):
        if self.slot not in SLOTS:
            raise SchemaViolation("bad atom slot %r" % self.slot)
        if self.op not in OPS:
            raise SchemaViolation("bad atom op %r" % self.op)
        lit_kind = _value_kind(self.literal)
        if self.op in _ORDER_OPS and lit_kind != "integer":
            raise SchemaViolation("%s needs an integer literal" % self.op)
        if self.op == "SET_EQ" and lit_kind != "string_set":
            raise SchemaViolation("SET_EQ needs a set literal")
        if self.op == "CONTAINS" and lit_kind != "symbol":
            raise SchemaViolation("CONTAINS needs a string literal")

    def evaluate(self, ctx):
        """ctx maps slot -> AttributeMap (LOOKAHEAD may be absent/None)."""
        amap = ctx.get(self.slot)
        if amap is None:
            return False
        value = amap.get(self.attribute)
        if value is None:
            return False
        op = self.op
        if op == "EQ":
            return value == self.literal
        if op == "NEQ":
            return value != self.literal
        if op == "LT":
            return value < self.literal
        if op == "GT":
            return value > self.literal
        if op == "LE":
            return value <= self.literal
        if op == "GE":
            return value >= self.literal
        if op == "SET_EQ":
            return value == self.literal
        if op == "CONTAINS":
            return self.literal in value
        raise AssertionError(op)

    def to_json(self):
        return {
            "slot": self.slot,
            "attribute": self.attribute,
            "op": self.op,
            "literal": _value_to_json(self.literal),
        }

    @classmethod
    def from_json(cls, doc):
        literal = doc["literal"]
        if isinstance(literal, list):
            literal = frozenset(literal)
        return cls(doc["slot"], doc["attribute"], doc["op"], literal)


@dataclass(frozen=True)
class Reason:
    dnf: tuple = ()  # of tuples of ReasonAtom
    constant_true: bool = False

    def __post_init__(self):
        if not self.constant_true and not self.dnf:
            raise SchemaViolation("reason needs clauses unless constant true")

    @classmethod
    def true(cls):
        return cls(dnf=(), constant_true=True)

    @classmethod
    def conjunction(cls, atoms):
        atoms = tuple(atoms)
        if not atoms:
            return cls.true()
        return cls(dnf=(atoms,))

    def evaluate(self, ctx):
        if self.constant_true:
            return True
        return any(
            all(atom.evaluate(ctx) for atom in clause) for clause in self.dnf
        )

    def to_json(self):
        if self.constant_true:
            return True
        return [[atom.to_json() for atom in clause] for clause in self.dnf]

    @classmethod
    def from_json(cls, doc):
        if doc is True:
            return cls.true()
        return cls(
            dnf=tuple(
                tuple(ReasonAtom.from_json(a) for a in clause) for clause in doc
            )
        )


def disjoin(*reasons):
    """Disjunction of reasons; duplicate clauses are kept once."""
    if any(r.constant_true for r in reasons):
        return Reason.true()
    clauses = []
    for r in reasons:
        for clause in r.dnf:
            if clause not in clauses:
                clauses.append(clause)
    return Reason(dnf=tuple(clauses))


def eval_reason(reason, ctx):
    """Standard DNF semantics; atoms on absent slots or unset attributes
    evaluate false."""
    return reason.evaluate(ctx)


# ---------------------------------------------------------------------------
# attribute equations

EQ_OPS = ("const", "copy", "union", "max", "min")


@dataclass(frozen=True)
class AttributeEquation:
    target: str
    op: str
    # const: (value,); copy: (slot, attribute);
    # union/max/min: (left_attribute, right_attribute)
    operands: tuple

    def __post_init__(self):
        if self.op not in EQ_OPS:
            raise SchemaViolation("bad equation op %r" % self.op)

    def to_json(self):
        if self.op == "const":
            operands = [_value_to_json(self.operands[0])]
        else:
            operands = list(self.operands)
        return {"target": self.target, "op": self.op, "operands": operands}

    @classmethod
    def from_json(cls, doc):
        operands = doc["operands"]
        if doc["op"] == "const" and isinstance(operands[0], list):
            operands = [frozenset(operands[0])]
        return cls(doc["target"], doc["op"], tuple(operands))


def const_eq(target, value):
    return AttributeEquation(target, "const", (value,))


def copy_eq(target, slot, attribute):
    return AttributeEquation(target, "copy", (slot, attribute))


def union_eq(target, left_attr="cue", right_attr="cue"):
    return AttributeEquation(target, "union", (left_attr, right_attr))


def canonical_equations(equations):
    """Order-insensitive canonical form used for rule identity."""
    return tuple(sorted(equations, key=lambda e: (e.target, e.op, repr(e.operands))))


def _fetch(ctx, slot, attribute):
    value = ctx[slot].get(attribute)
    if value is None:
        raise UnsetSource("%s.%s is unset" % (slot, attribute))
    return value


def apply_equations(equations, left, right, schema=None):
    """Compute the parent attribute map from the two children.

    ``left``/``right`` may be AttributeMaps or nodes carrying ``attributes``.
    """
    left = getattr(left, "attributes", left)
    right = getattr(right, "attributes", right)
    ctx = {LEFT: left, RIGHT: right}
    out = {}
    for eq in equations:
        if eq.op == "const":
            value = eq.operands[0]
        elif eq.op == "copy":
            value = _fetch(ctx, eq.operands[0], eq.operands[1])
        elif eq.op == "union":
            value = _fetch(ctx, LEFT, eq.operands[0]) | _fetch(
                ctx, RIGHT, eq.operands[1]
            )
        elif eq.op == "max":
            value = max(
                _fetch(ctx, LEFT, eq.operands[0]),
                _fetch(ctx, RIGHT, eq.operands[1]),
            )
        elif eq.op == "min":
            value = min(
                _fetch(ctx, LEFT, eq.operands[0]),
                _fetch(ctx, RIGHT, eq.operands[1]),
            )
        else:
            raise AssertionError(eq.op)
        if schema is not None:
            kind = schema.kind_of(eq.target)
            if kind is not None and _value_kind(value) != kind:
                raise KindMismatch(
                    "equation for %r produced a non-%s value" % (eq.target, kind)
                )
        out[eq.target] = value
    return AttributeMap.of(out)


def standard_equations(rre_label, extras=None):
    """Equation set recorded for a reduction: cue sets of both children are
    uploaded to the parent, punctuation follows the right (span-final) child,
    ``rre`` and any extra constants are set explicitly."""
    eqs = [
        union_eq("cue"),
        copy_eq("punctuation", RIGHT, "punctuation"),
        const_eq("rre", rre_label),
    ]
    for name, value in (extras or {}).items():
        eqs.append(const_eq(name, value))
    return canonical_equations(eqs)


# ---------------------------------------------------------------------------
# rules, precedence tuples, grammar

ROLE_PAIRS = (("N", "S"), ("S", "N"), ("N", "N"))


@dataclass(frozen=True)
class ProductionRule:
    head: str
    reason: Reason
    equations: tuple
    left_role: str
    right_role: str
    left: str
    right: str
    weight: int

    def to_json(self):
        return {
            "head": self.head,
            "reason": self.reason.to_json(),
            "equations": [eq.to_json() for eq in self.equations],
            "left_role": self.left_role,
            "right_role": self.right_role,
            "left": self.left,
            "right": self.right,
            "weight": self.weight,
        }

    @classmethod
    def from_json(cls, doc):
        return cls(
            head=doc["head"],
            reason=Reason.from_json(doc["reason"]),
            equations=tuple(
                AttributeEquation.from_json(e) for e in doc["equations"]
            ),
            left_role=doc["left_role"],
            right_role=doc["right_role"],
            left=doc["left"],
            right=doc["right"],
            weight=int(doc["weight"]),
        )


@dataclass(frozen=True)
class PrecedenceTuple:
    left: str
    middle: str
    lookahead: str  # DRE symbol or END
    direction: str  # SHIFT or REDUCE
    reason: Reason
    probability: Fraction

    def context(self):
        return (self.left, self.middle, self.lookahead)

    def to_json(self):
        return {
            "left": self.left,
            "middle": self.middle,
            "lookahead": self.lookahead,
            "direction": self.direction,
            "reason": self.reason.to_json(),
            "probability": jsonio.fraction_to_json(self.probability),
        }

    @classmethod
    def from_json(cls, doc):
        return cls(
            left=doc["left"],
            middle=doc["middle"],
            lookahead=doc["lookahead"],
            direction=doc["direction"],
            reason=Reason.from_json(doc["reason"]),
            probability=jsonio.fraction_from_json(doc["probability"]),
        )


@dataclass
class Grammar:
    start: str
    dre: frozenset
    dcp: frozenset
    rre: frozenset
    schema: AttributeSchema
    productions: tuple
    precedences: tuple

    def __post_init__(self):
        self._prec_index = {}
        self._rule_index = {}
        for tup in self.precedences:
            self._prec_index.setdefault(tup.context(), {})[tup.direction] = tup
        for rule in self.productions:
            self._rule_index.setdefault((rule.left, rule.right), []).append(rule)

    def precedence_for(self, left, middle, lookahead):
        """(shift_tuple_or_None, reduce_tuple_or_None) for a context."""
        entry = self._prec_index.get((left, middle, lookahead), {})
        return entry.get(SHIFT), entry.get(REDUCE)

    def precedence_contexts(self):
        return self._prec_index

    def rules_for(self, left, right):
        return self._rule_index.get((left, right), [])

    def to_json(self):
        productions = sorted(
            self.productions,
            key=lambda r: (r.left, r.right, r.head, -r.weight, r.left_role, r.right_role, jsonio.dumps(r.to_json())),
        )
        precedences = sorted(
            self.precedences,
            key=lambda t: (t.left, t.middle, t.lookahead, t.direction),
        )
        return {
            "start": self.start,
            "dre": sorted(self.dre),
            "dcp": sorted(self.dcp),
            "rre": sorted(self.rre),
            "schema": self.schema.to_json(),
            "productions": [r.to_json() for r in productions],
            "precedences": [t.to_json() for t in precedences],
        }

    @classmethod
    def from_json(cls, doc):
        for key in ("start", "dre", "dcp", "rre", "schema", "productions", "precedences"):
            if key not in doc:
                raise SchemaViolation("grammar document missing %r" % key)
        return cls(
            start=doc["start"],
            dre=frozenset(doc["dre"]),
            dcp=frozenset(doc["dcp"]),
            rre=frozenset(doc["rre"]),
            schema=AttributeSchema.from_json(doc["schema"]),
            productions=tuple(
                ProductionRule.from_json(r) for r in doc["productions"]
            ),
            precedences=tuple(
                PrecedenceTuple.from_json(t) for t in doc["precedences"]
            ),
        )


def serialize_grammar(grammar):
    return jsonio.dumps(grammar.to_json())


def deserialize_grammar(text):
    return Grammar.from_json(jsonio.loads(text))


def load_grammar(path):
    return Grammar.from_json(jsonio.read(path))


def save_grammar(grammar, path):
    with open(path, "w", encoding="utf-8") as f:
        f.write(serialize_grammar(grammar))


def validate_grammar(grammar):
    """Return a list of human-readable diagnostics; empty iff well formed."""
    diags = []
    for rule in grammar.productions:
        if (rule.left_role, rule.right_role) not in ROLE_PAIRS:
            diags.append(
                "production %s <- %s, %s: forbidden role pair (%s, %s)"
                % (rule.head, rule.left, rule.right, rule.left_role, rule.right_role)
            )
        if rule.weight < 1:
            diags.append(
                "production %s <- %s, %s: weight must be >= 1"
                % (rule.head, rule.left, rule.right)
            )
        for symbol in (rule.head, rule.left, rule.right):
            if symbol not in grammar.dre:
                diags.append("production references unknown DRE %r" % symbol)
        for eq in rule.equations:
            if eq.target == "rre" and eq.op == "const":
                if eq.operands[0] not in grammar.rre:
                    diags.append(
                        "production %s uses unknown RRE label %r"
                        % (rule.head, eq.operands[0])
                    )
    seen = {}
    for tup in grammar.precedences:
        key = (tup.context(), tup.direction)
        if key in seen:
            diags.append(
                "duplicate %s tuple for context %s" % (tup.direction, tup.context())
            )
        seen[key] = tup
        if not 0 < tup.probability <= 1:
            diags.append(
                "tuple %s %s has probability outside (0,1]"
                % (tup.context(), tup.direction)
            )
        for symbol in (tup.left, tup.middle):
            if symbol not in grammar.dre:
                diags.append("precedence tuple references unknown DRE %r" % symbol)
        if tup.lookahead != END and tup.lookahead not in grammar.dre:
            diags.append(
                "precedence tuple references unknown lookahead %r" % tup.lookahead
            )
    for context, entry in grammar.precedence_contexts().items():
        if SHIFT in entry and REDUCE in entry:
            total = entry[SHIFT].probability + entry[REDUCE].probability
            if total != 1:
                diags.append(
                    "context %s: shift+reduce probabilities sum to %s, not 1"
                    % (context, total)
                )
        elif entry:
            (tup,) = entry.values()
            if tup.probability != 1:
                diags.append(
                    "context %s: lone %s tuple must have probability 1"
                    % (context, tup.direction)
                )
    return diags


# ---------------------------------------------------------------------------
# attributed trees


@dataclass(frozen=True)
class ArtrNode:
    dre: str
    attributes: AttributeMap
    children: tuple = ()
    leaf_edu: int | None = None
    leaf_lc: object = None  # LexicalCore for leaves
    leaf_text: str | None = None
    rule_used: ProductionRule | None = None

    @property
    def is_leaf(self):
        return not self.children

    def with_role(self, role):
        return replace(self, attributes=self.attributes.set("role", role))

    def leaves(self):
        if self.is_leaf:
            return [self]
        out = []
        stack = [self]
        while stack:
            node = stack.pop()
            if node.is_leaf:
                out.append(node)
            else:
                stack.extend(reversed(node.children))
        return out

    def iter_nodes(self):
        stack = [self]
        while stack:
            node = stack.pop()
            yield node
            stack.extend(reversed(node.children))

    def to_json(self):
        doc = {"dre": self.dre, "attributes": self.attributes.to_json()}
        if self.children:
            doc["children"] = [c.to_json() for c in self.children]
        if self.leaf_edu is not None:
            doc["edu"] = self.leaf_edu
        if self.leaf_lc is not None:
            doc["lc"] = self.leaf_lc.to_json()
        if self.leaf_text is not None:
            doc["text"] = self.leaf_text
        if self.rule_used is not None:
            doc["rule"] = self.rule_used.to_json()
        return doc

    @classmethod
    def from_json(cls, doc, schema):
        from .textprep import LexicalCore

        return cls(
            dre=doc["dre"],
            attributes=AttributeMap.from_json(doc["attributes"], schema),
            children=tuple(
                cls.from_json(c, schema) for c in doc.get("children", ())
            ),
            leaf_edu=doc.get("edu"),
            leaf_lc=LexicalCore.from_json(doc["lc"]) if "lc" in doc else None,
            leaf_text=doc.get("text"),
            rule_used=ProductionRule.from_json(doc["rule"]) if "rule" in doc else None,
        )


@dataclass(frozen=True)
class Artr:
    root: ArtrNode
    schema: AttributeSchema

    def leaves(self):
        return self.root.leaves()

    def to_json(self):
        return {"schema": self.schema.to_json(), "root": self.root.to_json()}

    @classmethod
    def from_json(cls, doc):
        schema = AttributeSchema.from_json(doc["schema"])
        return cls(root=ArtrNode.from_json(doc["root"], schema), schema=schema)


def reduce_nodes(head, left_role, right_role, equations, left, right, schema=None, rule=None):
    """Build the parent node for a reduction: roles are written onto copies
    of the children, parent attributes come from the equations."""
    left = left.with_role(left_role)
    right = right.with_role(right_role)
    attributes = apply_equations(equations, left, right, schema)
    return ArtrNode(
        dre=head,
        attributes=attributes,
        children=(left, right),
        rule_used=rule,
    )


def load_artr(path):
    return Artr.from_json(jsonio.read(path))


def save_artr(artr, path):
    jsonio.write(path, artr.to_json())
