"""Graphviz DOT text for semilattices, morphisms and diagrams.

Hasse edges point upward (``rankdir=BT``); morphism arrows are dashed
cross-edges between clusters. Output depends only on the objects, so two
exports of the same input are byte-identical.
"""

from __future__ import annotations

import logging
from typing import Optional, Sequence, Union

from graphviz import Digraph

from core.diagram import Diagram
from core.morphism import Morphism
from core.semilattice import Semilattice

logger = logging.getLogger(__name__)

Exportable = Union[Semilattice, Morphism, Diagram]

HIGHLIGHT = {"style": "filled", "fillcolor": "#F4E5AD"}
CROSS_EDGE = {"style": "dashed", "constraint": "false", "color": "gray40"}


def _graph(name: str) -> Digraph:
    g = Digraph(name)
    g.attr(rankdir="BT")
    g.attr("node", shape="circle", fontsize="10")
    return g


def _hasse(g: Digraph, s: Semilattice, prefix: str, highlight: bool) -> None:
    joins = set(s.join_irreducibles) if highlight else set()
    for x in s.elements:
        g.node(f"{prefix}{x}", s.label(x), **(HIGHLIGHT if x in joins else {}))
    for lo, hi in s.covers:
        g.edge(f"{prefix}{lo}", f"{prefix}{hi}")


def _cluster(g: Digraph, s: Semilattice, k: int, title: str, highlight: bool) -> None:
    with g.subgraph(name=f"cluster_{k}") as c:
        c.attr(label=title)
        _hasse(c, s, f"v{k}_", highlight)


def _cross(g: Digraph, f: Morphism, src: int, dst: int) -> None:
    for x in f.src.elements:
        g.edge(f"v{src}_{x}", f"v{dst}_{f(x)}", **CROSS_EDGE)


# --- API ---

def semilattice_dot(s: Semilattice, name: str = "semilattice", highlight_joins: bool = True) -> str:
    g = _graph(name)
    _hasse(g, s, "x", highlight_joins)
    return g.source


def morphism_dot(f: Morphism, name: str = "morphism", highlight_joins: bool = True) -> str:
    g = _graph(name)
    _cluster(g, f.src, 0, "source", highlight_joins)
    _cluster(g, f.dst, 1, "target", highlight_joins)
    _cross(g, f, 0, 1)
    return g.source


def diagram_dot(
    d: Diagram,
    name: str = "diagram",
    highlight_joins: bool = True,
    titles: Optional[Sequence[str]] = None,
) -> str:
    """One cluster per point, dashed edges for the arrows on index covers."""
    titles = titles or [str(n) for n in d.names]
    g = _graph(name)
    for i, v in enumerate(d.vertices):
        _cluster(g, v, i, titles[i], highlight_joins)
    for (i, j), f in sorted(d.cover_arrows().items()):
        _cross(g, f, i, j)
    return g.source


def export_dot(obj: Exportable, name: Optional[str] = None, highlight_joins: bool = True) -> str:
    logger.debug("exporting %s to DOT", type(obj).__name__)
    if isinstance(obj, Semilattice):
        return semilattice_dot(obj, name or "semilattice", highlight_joins)
    if isinstance(obj, Morphism):
        return morphism_dot(obj, name or "morphism", highlight_joins)
    if isinstance(obj, Diagram):
        return diagram_dot(obj, name or "diagram", highlight_joins)
    raise TypeError(f"cannot export {type(obj).__name__} to DOT")
