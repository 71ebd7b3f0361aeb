"""Concrete rulesets with canonical codecs and JSON instance schemas."""

from __future__ import annotations

from .nim import NimMove, NimRuleset
from .geography import GeographyPosition, GeographyRuleset
from .node_kayles import NodeKaylesRuleset, SnortPosition
from .avoid_true import AvoidTrueRuleset
from .qbf import (
    Assign,
    Blow,
    Phantom,
    QbfPosition,
    QbfRuleset,
    SelectClause,
    SelectLiteral,
)


class InvalidInstanceError(ValueError):
    """Instance JSON parsed but violates the ruleset's schema constraints."""


_LOADERS = {
    "nim": NimRuleset.from_json,
    "geography": GeographyRuleset.from_json,
    "node_kayles": NodeKaylesRuleset.from_json,
    "avoid_true": AvoidTrueRuleset.from_json,
    "qbf": QbfRuleset.from_json,
}


def instance_from_json(data: dict):
    if not isinstance(data, dict) or "ruleset" not in data:
        raise InvalidInstanceError("instance JSON needs a 'ruleset' field")
    kind = data["ruleset"]
    loader = _LOADERS.get(kind)
    if loader is None:
        raise InvalidInstanceError(f"unknown ruleset {kind!r}")
    return loader(data)


__all__ = [
    "Assign",
    "AvoidTrueRuleset",
    "Blow",
    "GeographyPosition",
    "GeographyRuleset",
    "InvalidInstanceError",
    "NimMove",
    "NimRuleset",
    "NodeKaylesRuleset",
    "Phantom",
    "QbfPosition",
    "QbfRuleset",
    "SelectClause",
    "SelectLiteral",
    "SnortPosition",
    "instance_from_json",
]
