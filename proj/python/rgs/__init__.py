"""Python access to the R-graph semigroup library.

Graphs are passed as JSON documents (str, or a dict that is serialized);
results come back as plain Python objects.
"""

import json

from . import _rgs
from ._rgs import InputError, IntegrityError, PreconditionError, ScopeError

__all__ = [
    "InputError", "IntegrityError", "PreconditionError", "ScopeError",
    "validate", "conditions", "quotient", "reduce", "admissible", "census", "md3", "conjugacy",
]


def _text(graph):
    return graph if isinstance(graph, str) else json.dumps(graph)


def validate(graph):
    return _rgs.validate(_text(graph))


def conditions(graph, set="thm23", mode="exclude"):
    return json.loads(_rgs.conditions(_text(graph), set, mode))


def quotient(graph, emit="tilde", mode="exclude"):
    return json.loads(_rgs.quotient(_text(graph), emit, mode))


def reduce(graph, word):
    return json.loads(_rgs.reduce(_text(graph), list(word)))


def admissible(graph, word):
    return _rgs.admissible(_text(graph), list(word))


def census(graph, max_len, orbits=False):
    return json.loads(_rgs.census(_text(graph), max_len, orbits))


def md3(variant, T, delta_super=0, delta_sub=0, measure=False):
    return json.loads(_rgs.md3(variant, T, delta_super, delta_sub, measure))


def conjugacy(a, b):
    return json.loads(_rgs.conjugacy(_text(a), _text(b)))
