"""Canonical JSON helpers.

All documents (DKB, grammar, ARTR, annotation logs) are written through
``dumps`` so that write -> read -> write round trips are byte identical.
"""

import json
from fractions import Fraction


def dumps(obj):
    return json.dumps(obj, sort_keys=True, indent=2, ensure_ascii=False) + "\n"


def loads(text):
    return json.loads(text)


def write(path, obj):
    with open(path, "w", encoding="utf-8") as f:
        f.write(dumps(obj))


def read(path):
    with open(path, encoding="utf-8") as f:
        return json.load(f)


def fraction_to_json(fr):
    return "%d/%d" % (fr.numerator, fr.denominator)


def fraction_from_json(text):
    num, _, den = text.partition("/")
    return Fraction(int(num), int(den or 1))
