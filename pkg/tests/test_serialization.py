from __future__ import annotations

import json

import pytest

from core.diagram import DirectSystem, chain_system
from core.errors import CodecError, NotIdempotent
from core.morphism import Morphism
from core.serialization import (
    decode_diagram,
    decode_morphism,
    decode_semilattice,
    diagram_from_document,
    dump_document,
    encode_diagram,
    encode_morphism,
    encode_semilattice,
    load_document,
    morphism_from_document,
    semilattice_from_document,
)


class TestSemilatticeRecords:
    def test_encode(self, sq, c2):
        assert encode_semilattice(c2) == {"size": 2, "zero": 0, "join": [[0, 1], [1, 1]]}
        assert encode_semilattice(sq)["labels"] == ["0", "a", "b", "1"]
        assert decode_semilattice(encode_semilattice(sq)) == sq

    def test_missing_field(self):
        with pytest.raises(CodecError) as exc:
            decode_semilattice({"size": 1, "join": [[0]]})
        assert exc.value.witness == "zero"

    def test_wrong_row_count(self):
        with pytest.raises(CodecError):
            decode_semilattice({"size": 2, "zero": 0, "join": [[0, 1]]})

    def test_booleans_are_not_integers(self):
        with pytest.raises(CodecError):
            decode_semilattice({"size": 1, "zero": 0, "join": [[False]]})

    def test_axiom_failures_propagate(self):
        with pytest.raises(NotIdempotent):
            decode_semilattice({"size": 2, "zero": 0, "join": [[0, 1], [1, 0]]})

    def test_not_an_object(self):
        with pytest.raises(CodecError):
            decode_semilattice([[0]])


class TestMorphismRecords:
    def test_round_trip(self, c3_into_square, c3, sq):
        record = encode_morphism(c3_into_square, "c3", "sq")
        assert record == {"src": "c3", "dst": "sq", "map": [0, 1, 3]}
        assert decode_morphism(record, {"c3": c3, "sq": sq}) == c3_into_square

    def test_unknown_object(self, c3):
        with pytest.raises(CodecError):
            decode_morphism({"src": "c3", "dst": "nope", "map": [0, 1, 2]}, {"c3": c3})


class TestDiagramRecords:
    def test_direct_system(self, c2, c3, sq):
        d = chain_system([c2, c3, sq], [Morphism(c2, c3, [0, 2]), Morphism(c3, sq, [0, 1, 3])])
        record = encode_diagram(d)
        assert record["embeddings"] is True
        assert sorted(record["arrows"]) == ["0->1", "1->2"]
        back = decode_diagram(json.loads(json.dumps(record)))
        assert isinstance(back, DirectSystem)
        assert back.arrow(0, 2).map == (0, 3)
        assert back.names == ("0", "1", "2")

    def test_shared_vertices_are_stored_once(self, c2):
        d = chain_system([c2, c2], [Morphism(c2, c2, [0, 1])])
        assert list(encode_diagram(d)["semilattices"]) == ["s0"]

    def test_bad_arrow_key(self, c2):
        record = encode_diagram(chain_system([c2, c2], [Morphism(c2, c2, [0, 1])]))
        record["arrows"] = {"0-1": record["arrows"]["0->1"]}
        with pytest.raises(CodecError):
            decode_diagram(record)

    def test_unknown_vertex(self, c2):
        record = encode_diagram(chain_system([c2, c2], [Morphism(c2, c2, [0, 1])]))
        record["vertices"]["1"] = "s9"
        with pytest.raises(CodecError):
            decode_diagram(record)


class TestDocuments:
    def test_load_invalid_json(self, tmp_path):
        path = tmp_path / "bad.json"
        path.write_text("{not json")
        with pytest.raises(CodecError):
            load_document(path)
        with pytest.raises(CodecError):
            load_document(tmp_path / "missing.json")

    def test_top_level_must_be_object(self, tmp_path):
        path = tmp_path / "list.json"
        path.write_text("[1, 2]")
        with pytest.raises(CodecError):
            load_document(path)

    def test_dump_is_deterministic(self):
        assert dump_document({"b": 1, "a": [1]}) == '{\n  "a": [\n    1\n  ],\n  "b": 1\n}'

    def test_named_semilattices(self, c2, sq):
        doc = {"semilattices": {"c2": encode_semilattice(c2), "sq": encode_semilattice(sq)}}
        assert semilattice_from_document(doc, "sq") == sq
        with pytest.raises(CodecError):
            semilattice_from_document(doc)
        with pytest.raises(CodecError):
            semilattice_from_document(doc, "m3")
        assert semilattice_from_document(encode_semilattice(c2)) == c2

    def test_morphism_document(self, c3, sq, c3_into_square):
        doc = {
            "semilattices": {"c3": encode_semilattice(c3), "sq": encode_semilattice(sq)},
            "morphisms": {"f": encode_morphism(c3_into_square, "c3", "sq")},
        }
        assert morphism_from_document(doc) == c3_into_square
        with pytest.raises(CodecError):
            morphism_from_document({"semilattices": doc["semilattices"]})

    def test_diagram_document(self, c2):
        record = encode_diagram(chain_system([c2, c2], [Morphism(c2, c2, [0, 1])]))
        assert diagram_from_document({"diagram": record}).size == 2
        with pytest.raises(CodecError):
            diagram_from_document({})
