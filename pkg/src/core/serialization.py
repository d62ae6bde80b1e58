"""JSON records for semilattices, morphisms, posets and diagrams.

Semilattice: ``{"size": n, "zero": i, "join": [[...]], "labels": [...]}``
(labels optional). Morphism: ``{"src": id, "dst": id, "map": [...]}``.
Poset: ``{"size": n, "covers": [[a, b], ...]}``. Diagram: ``{"index": poset,
"semilattices": {id: semilattice}, "vertices": {point: id}, "arrows":
{"i->j": morphism}}``, with ``"embeddings": true`` marking a direct system
and an optional ``"names"`` list. A document may hold several named
semilattices and morphisms side by side.
"""

from __future__ import annotations

import json
import logging
from pathlib import Path
from typing import Any, Dict, Mapping, Optional, Tuple

from core.diagram import Diagram, DirectSystem
from core.errors import CodecError
from core.morphism import Morphism
from core.poset import Poset
from core.semilattice import Semilattice

logger = logging.getLogger(__name__)


def _require(record: Mapping[str, Any], field: str, kind: str) -> Any:
    if not isinstance(record, Mapping):
        raise CodecError(f"{kind} record must be an object, got {type(record).__name__}")
    if field not in record:
        raise CodecError(f"{kind} record lacks '{field}'", witness=field)
    return record[field]


def _int_list(value: Any, what: str) -> list:
    if not isinstance(value, list) or not all(isinstance(v, int) and not isinstance(v, bool) for v in value):
        raise CodecError(f"{what} must be a list of integers")
    return value


# --- semilattices ---

def encode_semilattice(s: Semilattice) -> Dict[str, Any]:
    record: Dict[str, Any] = {"size": s.size, "zero": s.zero, "join": [list(row) for row in s.table]}
    if s.labels is not None:
        record["labels"] = list(s.labels)
    return record


def decode_semilattice(record: Mapping[str, Any]) -> Semilattice:
    """Decode and validate; axiom failures propagate as ``AxiomViolation``."""
    size = _require(record, "size", "semilattice")
    zero = _require(record, "zero", "semilattice")
    rows = _require(record, "join", "semilattice")
    if not isinstance(rows, list) or len(rows) != size:
        raise CodecError(f"join table must have {size} rows", witness=size)
    table = [_int_list(row, "join row") for row in rows]
    labels = record.get("labels")
    if labels is not None and (not isinstance(labels, list) or len(labels) != size):
        raise CodecError(f"labels must be a list of {size} strings")
    return Semilattice(table, zero, [str(x) for x in labels] if labels is not None else None)


# --- morphisms ---

def encode_morphism(f: Morphism, src: str, dst: str) -> Dict[str, Any]:
    return {"src": src, "dst": dst, "map": list(f.map)}


def decode_morphism(record: Mapping[str, Any], objects: Mapping[str, Semilattice]) -> Morphism:
    names = []
    for field in ("src", "dst"):
        name = _require(record, field, "morphism")
        if name not in objects:
            raise CodecError(f"morphism refers to unknown semilattice {name!r}", witness=name)
        names.append(name)
    mapping = _int_list(_require(record, "map", "morphism"), "morphism map")
    return Morphism(objects[names[0]], objects[names[1]], mapping)


# --- posets ---

def encode_poset(p: Poset) -> Dict[str, Any]:
    return {"size": p.size, "covers": [list(c) for c in p.covers]}


def decode_poset(record: Mapping[str, Any]) -> Poset:
    size = _require(record, "size", "poset")
    covers = _require(record, "covers", "poset")
    if not isinstance(covers, list):
        raise CodecError("poset covers must be a list of pairs")
    pairs = []
    for pair in covers:
        pair = _int_list(pair, "cover pair")
        if len(pair) != 2:
            raise CodecError("cover pairs have two entries", witness=pair)
        pairs.append((pair[0], pair[1]))
    return Poset(size, pairs)


# --- diagrams ---

def _arrow_key(key: str) -> Tuple[int, int]:
    try:
        i, j = key.split("->")
        return int(i), int(j)
    except ValueError:
        raise CodecError(f"arrow key {key!r} is not of the form 'i->j'", witness=key) from None


def encode_diagram(d: Diagram) -> Dict[str, Any]:
    ids: Dict[Tuple, str] = {}
    semilattices: Dict[str, Any] = {}
    vertices: Dict[str, str] = {}
    for i, v in enumerate(d.vertices):
        fingerprint = (v.table, v.zero, v.labels)
        if fingerprint not in ids:
            ids[fingerprint] = f"s{len(ids)}"
            semilattices[ids[fingerprint]] = encode_semilattice(v)
        vertices[str(i)] = ids[fingerprint]
    arrows = {
        f"{i}->{j}": encode_morphism(f, vertices[str(i)], vertices[str(j)])
        for (i, j), f in sorted(d.cover_arrows().items())
    }
    record: Dict[str, Any] = {
        "index": encode_poset(d.index),
        "semilattices": semilattices,
        "vertices": vertices,
        "arrows": arrows,
        "names": [str(n) for n in d.names],
    }
    if isinstance(d, DirectSystem):
        record["embeddings"] = True
    return record


def decode_diagram(record: Mapping[str, Any]) -> Diagram:
    index = decode_poset(_require(record, "index", "diagram"))
    objects = {
        name: decode_semilattice(s)
        for name, s in _require(record, "semilattices", "diagram").items()
    }
    points = _require(record, "vertices", "diagram")
    vertices = []
    for i in range(index.size):
        name = points.get(str(i))
        if name not in objects:
            raise CodecError(f"point {i} has no known semilattice", witness=i)
        vertices.append(objects[name])
    arrows = {
        _arrow_key(key): decode_morphism(m, objects)
        for key, m in _require(record, "arrows", "diagram").items()
    }
    names = record.get("names")
    cls = DirectSystem if record.get("embeddings") else Diagram
    return cls(index, vertices, arrows, names)


# --- documents ---

def load_document(path: Path | str) -> Dict[str, Any]:
    try:
        with open(path, "r", encoding="utf-8") as f:
            document = json.load(f)
    except json.JSONDecodeError as e:
        raise CodecError(f"{path}: invalid JSON ({e})") from e
    except (IOError, OSError) as e:
        raise CodecError(f"cannot read {path}: {e}") from e
    if not isinstance(document, dict):
        raise CodecError(f"{path}: top level must be an object")
    return document


def dump_document(document: Mapping[str, Any]) -> str:
    """Deterministic JSON text (sorted keys, fixed separators)."""
    return json.dumps(document, indent=2, sort_keys=True, ensure_ascii=False)


def semilattice_from_document(document: Mapping[str, Any], name: Optional[str] = None) -> Semilattice:
    """A bare semilattice record, or the named (or only) entry of ``"semilattices"``."""
    if "join" in document:
        return decode_semilattice(document)
    objects = document.get("semilattices")
    if not isinstance(objects, Mapping) or not objects:
        raise CodecError("document holds no semilattice")
    if name is None:
        if len(objects) != 1:
            raise CodecError("document holds several semilattices; name one", witness=sorted(objects))
        name = next(iter(objects))
    if name not in objects:
        raise CodecError(f"no semilattice named {name!r}", witness=name)
    return decode_semilattice(objects[name])


def morphism_from_document(document: Mapping[str, Any], name: Optional[str] = None) -> Morphism:
    objects = {k: decode_semilattice(v) for k, v in document.get("semilattices", {}).items()}
    morphisms = document.get("morphisms")
    if not isinstance(morphisms, Mapping) or not morphisms:
        raise CodecError("document holds no morphism")
    if name is None:
        if len(morphisms) != 1:
            raise CodecError("document holds several morphisms; name one", witness=sorted(morphisms))
        name = next(iter(morphisms))
    if name not in morphisms:
        raise CodecError(f"no morphism named {name!r}", witness=name)
    return decode_morphism(morphisms[name], objects)


def diagram_from_document(document: Mapping[str, Any]) -> Diagram:
    if "index" in document:
        return decode_diagram(document)
    if "diagram" in document:
        return decode_diagram(document["diagram"])
    raise CodecError("document holds no diagram")
