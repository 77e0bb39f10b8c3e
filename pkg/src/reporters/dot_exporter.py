"""
DOT Exporter

Builds networkx graphs for matrix-weighted signed graphs and their
quotients, and writes them in Graphviz DOT format through pydot.
"""

import logging
from pathlib import Path
from typing import List, Optional, Union

import networkx as nx
from networkx.drawing.nx_pydot import write_dot

from network import EdgeSign, MatrixWeightedSignedGraph, Partition, cell_degree, sign_class_sums

logger = logging.getLogger(__name__)


class DotExporter:
    """
    Exports matrix-weighted signed graphs to DOT files.
    """

    def _label(self, g: MatrixWeightedSignedGraph, m) -> str:
        rows = g.backend.to_python(m)
        return '[' + '; '.join(' '.join(_fmt(x) for x in row) for row in rows) + ']'

    def graph_to_nx(self, g: MatrixWeightedSignedGraph) -> nx.Graph:
        """Nodes 1..n (leaders boxed); negative edges dashed."""
        graph = nx.Graph(name=g.name or 'network')
        for v in range(g.n):
            graph.add_node(v + 1, shape='box' if v in g.leaders else 'ellipse')
        for edge in g.edges:
            graph.add_edge(
                edge.i + 1,
                edge.j + 1,
                label=self._label(g, edge.weight),
                style='solid' if edge.sign is EdgeSign.POSITIVE else 'dashed',
            )
        return graph

    def quotient_to_nx(self, g: MatrixWeightedSignedGraph, pi: Partition) -> nx.Graph:
        """
        Cells as nodes, edges labelled with d(V_i, V_j) and the sign classes present.

        Cell pairs with a zero magnitude sum get no edge.
        """
        backend = g.backend
        graph = nx.Graph(name=f"{g.name or 'network'}_quotient")
        for index, cell in enumerate(pi.cells):
            graph.add_node(
                f'c{index + 1}',
                label='{' + ','.join(str(v + 1) for v in cell) + '}',
                shape='box' if any(v in g.leaders for v in cell) else 'ellipse',
            )
        for i in range(pi.card):
            for j in range(i, pi.card):
                magnitude = cell_degree(g, pi, i, j)
                if backend.is_zero(magnitude):
                    continue
                positive, negative = sign_class_sums(g, pi.cells[i][0], pi.cells[j])
                classes: List[str] = []
                if not backend.is_zero(positive):
                    classes.append('+')
                if not backend.is_zero(negative):
                    classes.append('-')
                graph.add_edge(
                    f'c{i + 1}',
                    f'c{j + 1}',
                    label=f"{self._label(g, magnitude)} ({''.join(classes)})",
                    style='dashed' if classes == ['-'] else 'solid',
                )
        return graph

    def export(self, path: Union[str, Path], g: MatrixWeightedSignedGraph,
               pi: Optional[Partition] = None) -> Optional[str]:
        """
        Write the graph, or its quotient when pi is given.

        Args:
            path: Output file
            g: Graph
            pi: Equitable partition for a quotient export

        Returns:
            Optional[str]: Path written, or None on failure
        """
        graph = self.graph_to_nx(g) if pi is None else self.quotient_to_nx(g, pi)
        filepath = Path(path)
        try:
            filepath.parent.mkdir(parents=True, exist_ok=True)
            write_dot(graph, filepath)
            logger.info(f"Exported {'quotient ' if pi is not None else ''}graph to: {filepath}")
            return str(filepath)
        except OSError as e:
            logger.error(f"Failed to export DOT file: {e}")
            return None


def _fmt(x) -> str:
    if hasattr(x, 'denominator'):
        return str(x.numerator) if x.denominator == 1 else f"{x.numerator}/{x.denominator}"
    return f"{x:g}"
