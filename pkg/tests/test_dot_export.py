from __future__ import annotations

import pytest

from core.counterexample import counterexample
from core.diagram import chain_system
from core.morphism import Morphism
from core.semilattice import chain
from utils.dot_export import diagram_dot, export_dot, morphism_dot, semilattice_dot

FILLED = 'fillcolor="#F4E5AD"'


def _nodes(text: str):
    return [line for line in text.splitlines() if "[label=" in line]


def _edges(text: str):
    return [line for line in text.splitlines() if "->" in line]


class TestSemilatticeDot:
    def test_two_element_chain(self, c2):
        text = semilattice_dot(c2)
        assert text.startswith("digraph semilattice {\n")
        assert "\trankdir=BT\n" in text
        assert _nodes(text) == ["\tx0 [label=0]", "\tx1 [label=1 fillcolor=\"#F4E5AD\" style=filled]"]
        assert _edges(text) == ["\tx0 -> x1"]
        assert text.endswith("}\n")

    def test_join_irreducibles_highlighted(self, sq):
        lines = _nodes(semilattice_dot(sq))
        highlighted = [line.split()[0] for line in lines if FILLED in line]
        assert highlighted == ["x1", "x2"]
        assert not any(FILLED in line for line in _nodes(semilattice_dot(sq, highlight_joins=False)))

    def test_labels_quoted(self):
        s = chain(2).with_labels(['a"b', "c"])
        assert 'label="a\\"b"' in semilattice_dot(s)

    def test_counterexample_lattice(self):
        a = counterexample().lattice
        text = semilattice_dot(a, "A")
        assert text.startswith("digraph A {")
        assert len(_nodes(text)) == 21
        assert len(_edges(text)) == len(a.covers)

    def test_deterministic(self, n5):
        assert semilattice_dot(n5) == semilattice_dot(n5)


class TestMorphismDot:
    def test_dashed_cross_edges(self, c3_into_square):
        text = morphism_dot(c3_into_square)
        dashed = [line for line in _edges(text) if "style=dashed" in line]
        assert len(dashed) == 3
        assert dashed[2] == "\tv0_2 -> v1_3 [color=gray40 constraint=false style=dashed]"
        assert "\tsubgraph cluster_0 {" in text and "\tsubgraph cluster_1 {" in text
        assert "\t\tlabel=source\n" in text


class TestDiagramDot:
    def test_clusters_per_point(self, c2, c3, sq):
        system = chain_system([c2, c3, sq], [Morphism(c2, c3, [0, 2]), Morphism(c3, sq, [0, 1, 3])])
        text = diagram_dot(system)
        assert sum("subgraph cluster_" in line for line in text.splitlines()) == 3
        dashed = [line for line in _edges(text) if "style=dashed" in line]
        # only the two index covers are drawn
        assert len(dashed) == 2 + 3

    def test_custom_titles(self, c2, c3):
        system = chain_system([c2, c3], [Morphism(c2, c3, [0, 2])])
        assert "\t\tlabel=low\n" in diagram_dot(system, titles=["low", "high"])


class TestExportDot:
    def test_dispatch(self, c2, c3_into_square):
        assert export_dot(c2) == semilattice_dot(c2)
        assert export_dot(c3_into_square, "f") == morphism_dot(c3_into_square, "f")

    def test_rejects_other_objects(self):
        with pytest.raises(TypeError):
            export_dot([[0]])
