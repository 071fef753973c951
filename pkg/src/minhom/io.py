"""JSON documents for languages, instances and graphs."""

from __future__ import annotations

import json
from pathlib import Path
from typing import Any

import jsonschema

from .consistency import PPFormula
from .gadgets import UndirectedGraph
from .relations import Constraint, ConstraintLanguage, Relation, WeightedInstance

FORMAT_VERSION = 1

_TUPLES = {"type": "array", "items": {"type": "array", "items": {"type": "integer", "minimum": 0}}}

LANGUAGE_SCHEMA: dict[str, Any] = {
    "type": "object",
    "required": ["domain_size", "relations"],
    "properties": {
        "version": {"const": FORMAT_VERSION},
        "domain_size": {"type": "integer", "minimum": 1},
        "relations": {
            "type": "object",
            "additionalProperties": {
                "type": "object",
                "required": ["arity", "tuples"],
                "properties": {"arity": {"type": "integer", "minimum": 1}, "tuples": _TUPLES},
                "additionalProperties": False,
            },
        },
    },
}

_FORMULA = {
    "type": "object",
    "required": ["atoms"],
    "properties": {
        "exists": {"type": "array"},
        "atoms": {
            "type": "array",
            "items": {
                "type": "object",
                "required": ["relation", "args"],
                "properties": {
                    "relation": {"type": "string"},
                    "args": {"type": "array", "items": {"type": "integer", "minimum": 0}},
                },
            },
        },
    },
}

INSTANCE_SCHEMA: dict[str, Any] = {
    "type": "object",
    "required": ["num_vars", "constraints", "weights"],
    "oneOf": [{"required": ["language"]}, {"required": ["language_ref"]}],
    "properties": {
        "version": {"const": FORMAT_VERSION},
        "language": LANGUAGE_SCHEMA,
        "language_ref": {"type": "string"},
        "num_vars": {"type": "integer", "minimum": 0},
        "constraints": {
            "type": "array",
            "items": {
                "type": "object",
                "required": ["scope"],
                "oneOf": [{"required": ["relation"]}, {"required": ["values"]}],
                "properties": {
                    "relation": {"type": "string"},
                    "values": {"type": "array", "items": {"type": "integer", "minimum": 0}},
                    "scope": {"type": "array", "items": {"type": "integer", "minimum": 0}},
                },
            },
        },
        "weights": {"type": "array", "items": {"type": "array", "items": {"type": "integer"}}},
        "definitions": {"type": "object", "additionalProperties": _FORMULA},
    },
}

GRAPH_SCHEMA: dict[str, Any] = {
    "type": "object",
    "required": ["num_vertices", "edges"],
    "properties": {
        "version": {"const": FORMAT_VERSION},
        "num_vertices": {"type": "integer", "minimum": 0},
        "edges": {"type": "array", "items": {"type": "array", "items": {"type": "integer", "minimum": 0},
                                             "minItems": 2, "maxItems": 2}},
        "parts": {"type": "array", "items": {"type": "integer", "minimum": 0}},
    },
}


class FormatError(ValueError):
    """A document failed to parse or validate; the message names the location."""


def _validate(doc: Any, schema: dict, what: str) -> None:
    try:
        jsonschema.validate(doc, schema)
    except jsonschema.ValidationError as exc:
        where = "/".join(str(p) for p in exc.absolute_path) or "<root>"
        raise FormatError(f"{what}: {exc.message} at {where}") from None


def read_json(path: str | Path) -> Any:
    try:
        return json.loads(Path(path).read_text())
    except json.JSONDecodeError as exc:
        raise FormatError(f"{path}: invalid JSON at line {exc.lineno} column {exc.colno}: {exc.msg}") from None
    except OSError as exc:
        raise FormatError(f"{path}: {exc.strerror}") from None


# ---------------------------------------------------------------- languages

def language_from_dict(doc: Any) -> ConstraintLanguage:
    _validate(doc, LANGUAGE_SCHEMA, "language")
    d = doc["domain_size"]
    rels = {}
    for name, body in doc["relations"].items():
        try:
            rels[name] = Relation(body["arity"], d, frozenset(tuple(t) for t in body["tuples"]))
        except ValueError as exc:
            raise FormatError(f"language: relation {name!r}: {exc}") from None
    return ConstraintLanguage.of(d, rels)


def language_to_dict(lang: ConstraintLanguage) -> dict:
    return {
        "version": FORMAT_VERSION,
        "domain_size": lang.domain_size,
        "relations": {name: {"arity": r.arity, "tuples": [list(t) for t in r.sorted_tuples()]}
                      for name, r in lang.named},
    }


def load_language(path: str | Path) -> ConstraintLanguage:
    return language_from_dict(read_json(path))


# ---------------------------------------------------------------- instances

class InstanceDocument:
    """Parsed instance file: the language, the instance, and any pp-definitions."""

    def __init__(self, language: ConstraintLanguage, instance: WeightedInstance,
                 definitions: dict[Relation, PPFormula], relation_names: dict[Relation, str]) -> None:
        self.language = language
        self.instance = instance
        self.definitions = definitions
        self.relation_names = relation_names


def instance_from_dict(doc: Any, base: Path | None = None, shift: int = 0) -> InstanceDocument:
    _validate(doc, INSTANCE_SCHEMA, "instance")
    if "language" in doc:
        lang = language_from_dict(doc["language"])
    else:
        ref = Path(doc["language_ref"])
        if base is not None and not ref.is_absolute():
            ref = base / ref
        lang = load_language(ref)
    d = lang.domain_size
    by_name = lang.relations
    n = doc["num_vars"]
    constraints = []
    for i, c in enumerate(doc["constraints"]):
        if "values" in c:
            try:
                rel = Relation.unary(d, c["values"])
            except ValueError as exc:
                raise FormatError(f"instance: constraints/{i}: {exc}") from None
        else:
            if c["relation"] not in by_name:
                raise FormatError(f"instance: constraints/{i}: unknown relation {c['relation']!r}")
            rel = by_name[c["relation"]]
        constraints.append(Constraint(rel, tuple(c["scope"])))
    weights = [[w + shift for w in row] for row in doc["weights"]]
    try:
        inst = WeightedInstance(n, d, tuple(constraints), tuple(map(tuple, weights)))
    except ValueError as exc:
        raise FormatError(f"instance: {exc}") from None
    definitions = {}
    for name, body in doc.get("definitions", {}).items():
        if name not in by_name:
            raise FormatError(f"instance: definitions/{name}: not a relation of the language")
        target = by_name[name]
        atoms = []
        for j, atom in enumerate(body["atoms"]):
            rname = atom["relation"]
            if rname == "=":
                atoms.append((None, tuple(atom["args"])))
            elif rname in by_name:
                atoms.append((by_name[rname], tuple(atom["args"])))
            else:
                raise FormatError(f"instance: definitions/{name}/atoms/{j}: unknown relation {rname!r}")
        try:
            definitions[target] = PPFormula(target.arity, len(body.get("exists", [])), tuple(atoms))
        except ValueError as exc:
            raise FormatError(f"instance: definitions/{name}: {exc}") from None
    names = {rel: name for name, rel in lang.named}
    return InstanceDocument(lang, inst, definitions, names)


def instance_to_dict(lang: ConstraintLanguage, inst: WeightedInstance) -> dict:
    names = {rel: name for name, rel in lang.named}
    cons = []
    for c in inst.constraints:
        if c.relation in names:
            cons.append({"relation": names[c.relation], "scope": list(c.scope)})
        elif c.relation.arity == 1:
            cons.append({"values": sorted(t[0] for t in c.relation.tuples), "scope": list(c.scope)})
        else:
            raise ValueError("constraint relation is not named in the language")
    return {
        "version": FORMAT_VERSION,
        "language": language_to_dict(lang),
        "num_vars": inst.num_vars,
        "constraints": cons,
        "weights": [list(row) for row in inst.weights],
    }


def load_instance(path: str | Path, shift: int = 0) -> InstanceDocument:
    path = Path(path)
    return instance_from_dict(read_json(path), path.parent, shift)


# ---------------------------------------------------------------- graphs

def graph_from_dict(doc: Any) -> tuple[UndirectedGraph, list[int] | None]:
    _validate(doc, GRAPH_SCHEMA, "graph")
    try:
        g = UndirectedGraph(doc["num_vertices"], tuple(tuple(e) for e in doc["edges"]))
    except ValueError as exc:
        raise FormatError(f"graph: {exc}") from None
    parts = doc.get("parts")
    if parts is not None and len(parts) != g.num_vertices:
        raise FormatError("graph: parts must label every vertex")
    return g, parts


def graph_to_dict(g: UndirectedGraph, parts=None) -> dict:
    out = {"version": FORMAT_VERSION, "num_vertices": g.num_vertices, "edges": [list(e) for e in g.edges]}
    if parts is not None:
        out["parts"] = list(parts)
    return out


def load_graph(path: str | Path) -> tuple[UndirectedGraph, list[int] | None]:
    return graph_from_dict(read_json(path))
