"""
Matrix-Weighted Signed Graphs

This module models undirected graphs whose edges carry a sign and a
symmetric d x d weight magnitude, and assembles their block Laplacians.
Node ids are 0-based here; external formats shift them to 1-based.
"""

import logging
from dataclasses import dataclass
from enum import Enum
from typing import Any, Dict, Iterable, List, Optional, Sequence, Tuple

from linalg import BaseBackend, Definiteness
from utils.errors import DimensionMismatchError, GraphCompatibilityError, InvalidNodeError, InvalidWeightError

logger = logging.getLogger(__name__)


class EdgeSign(str, Enum):
    """Sign class of an edge."""

    POSITIVE = 'positive'
    NEGATIVE = 'negative'

    @property
    def factor(self) -> int:
        return 1 if self is EdgeSign.POSITIVE else -1

    @classmethod
    def parse(cls, value: Any) -> 'EdgeSign':
        """Accept 'positive'/'negative', '+'/'-' or an existing EdgeSign."""
        if isinstance(value, EdgeSign):
            return value
        text = str(value).strip().lower()
        if text in ('+', 'positive', 'pos'):
            return cls.POSITIVE
        if text in ('-', 'negative', 'neg'):
            return cls.NEGATIVE
        raise ValueError(f"Unknown edge sign: {value!r}")


@dataclass(frozen=True)
class WeightedEdge:
    """
    Undirected edge {i, j} with i < j.

    The adjacency block is sign.factor * weight and |A_ij| = weight.
    """

    i: int
    j: int
    sign: EdgeSign
    weight: Any
    definiteness: Definiteness

    @property
    def pair(self) -> Tuple[int, int]:
        return (self.i, self.j)

    def other(self, node: int) -> int:
        return self.j if node == self.i else self.i


def make_edge(backend: BaseBackend, i: int, j: int, sign: Any, weight: Any, d: int) -> WeightedEdge:
    """
    Validate and build a WeightedEdge.

    Args:
        backend: Backend whose native matrices the edge stores
        i, j: 0-based endpoints (any order)
        sign: EdgeSign or its textual form
        weight: Native matrix or nested rows for the magnitude
        d: State dimension

    Returns:
        WeightedEdge: Edge with canonical endpoint order
    """
    if i == j:
        raise InvalidNodeError(f"Self-loop on node {i + 1} is not allowed")
    if not hasattr(weight, 'shape'):
        weight = backend.matrix(weight)
    if tuple(weight.shape) != (d, d):
        raise InvalidWeightError(f"Edge {i + 1}-{j + 1} weight has shape {tuple(weight.shape)}, expected {d}x{d}")
    if not backend.is_symmetric(weight):
        raise InvalidWeightError(f"Edge {i + 1}-{j + 1} weight is not symmetric")
    if backend.is_zero(weight):
        raise InvalidWeightError(f"Edge {i + 1}-{j + 1} weight is zero")

    low, high = (i, j) if i < j else (j, i)
    return WeightedEdge(low, high, EdgeSign.parse(sign), backend.freeze(weight), backend.definiteness(weight))


class MatrixWeightedSignedGraph:
    """
    Immutable matrix-weighted signed graph with a leader list.
    """

    def __init__(self, n: int, d: int, edges: Iterable[WeightedEdge], leaders: Sequence[int],
                 backend: BaseBackend, name: Optional[str] = None):
        """
        Initialize and validate the graph.

        Args:
            n: Node count
            d: State dimension of every node
            edges: Edges with 0-based endpoints
            leaders: 0-based leader ids in leader order
            backend: Backend the edge weights were built with
            name: Optional label used in logs and reports
        """
        if n < 1 or d < 1:
            raise InvalidNodeError(f"Graph needs n >= 1 and d >= 1 (got n={n}, d={d})")
        self._n = n
        self._d = d
        self._backend = backend
        self.name = name

        self._edges: Dict[Tuple[int, int], WeightedEdge] = {}
        self._neighbors: Dict[int, List[WeightedEdge]] = {v: [] for v in range(n)}
        for edge in edges:
            self._check_node(edge.i)
            self._check_node(edge.j)
            if edge.pair in self._edges:
                raise InvalidNodeError(f"Duplicate edge {edge.i + 1}-{edge.j + 1}")
            self._edges[edge.pair] = edge
            self._neighbors[edge.i].append(edge)
            self._neighbors[edge.j].append(edge)

        leaders = tuple(int(v) for v in leaders)
        if not 1 <= len(leaders) <= n:
            raise InvalidNodeError(f"Graph needs between 1 and {n} leaders (got {len(leaders)})")
        if len(set(leaders)) != len(leaders):
            raise InvalidNodeError("Leader ids must be distinct")
        for v in leaders:
            self._check_node(v)
        self._leaders = leaders

        logger.debug(f"Graph {name or ''} built: n={n}, d={d}, edges={len(self._edges)}, leaders={len(leaders)}")

    def _check_node(self, v: int) -> None:
        if not 0 <= v < self._n:
            raise InvalidNodeError(f"Node id {v + 1} out of range 1..{self._n}")

    @property
    def n(self) -> int:
        return self._n

    @property
    def d(self) -> int:
        return self._d

    @property
    def backend(self) -> BaseBackend:
        return self._backend

    @property
    def leaders(self) -> Tuple[int, ...]:
        return self._leaders

    @property
    def followers(self) -> Tuple[int, ...]:
        return tuple(v for v in range(self._n) if v not in self._leaders)

    @property
    def edges(self) -> Tuple[WeightedEdge, ...]:
        return tuple(self._edges[pair] for pair in sorted(self._edges))

    def edge(self, i: int, j: int) -> Optional[WeightedEdge]:
        self._check_node(i)
        self._check_node(j)
        return self._edges.get((min(i, j), max(i, j)))

    def incident_edges(self, i: int) -> List[WeightedEdge]:
        self._check_node(i)
        return list(self._neighbors[i])

    def warnings(self) -> List[str]:
        """Human-readable notes on magnitudes that are not positive semidefinite."""
        notes = []
        for edge in self.edges:
            if not edge.definiteness.is_nonnegative:
                notes.append(
                    f"edge {edge.i + 1}-{edge.j + 1} ({edge.sign.value}) has {edge.definiteness.value} magnitude"
                )
        return notes

    # -- block matrices ---------------------------------------------------

    def adjacency_block(self, i: int, j: int) -> Any:
        """Signed block A_ij = sign * |A_ij|, or the d x d zero matrix."""
        edge = self.edge(i, j)
        if edge is None:
            return self._backend.zeros(self._d, self._d)
        return edge.sign.factor * edge.weight

    def degree(self, i: int) -> Any:
        """d_i = sum of |A_ij| over all neighbors of i."""
        total = self._backend.zeros(self._d, self._d)
        for edge in self.incident_edges(i):
            total = total + edge.weight
        return total

    def laplacian(self) -> Any:
        """dn x dn block Laplacian L = D - A."""
        d = self._d
        lap = self._backend.zeros(d * self._n, d * self._n)
        for v in range(self._n):
            lap[v * d:(v + 1) * d, v * d:(v + 1) * d] = self.degree(v)
        for (i, j), edge in self._edges.items():
            block = -edge.sign.factor * edge.weight
            lap[i * d:(i + 1) * d, j * d:(j + 1) * d] = block
            lap[j * d:(j + 1) * d, i * d:(i + 1) * d] = block
        return lap


def check_compatible(graphs: Sequence[MatrixWeightedSignedGraph]) -> None:
    """Raise GraphCompatibilityError unless all graphs share n, d, leaders and backend."""
    if not graphs:
        raise GraphCompatibilityError("At least one graph is required")
    first = graphs[0]
    for index, g in enumerate(graphs[1:], start=2):
        if (g.n, g.d) != (first.n, first.d):
            raise GraphCompatibilityError(
                f"Graph {index} has n={g.n}, d={g.d}; graph 1 has n={first.n}, d={first.d}"
            )
        if g.leaders != first.leaders:
            raise GraphCompatibilityError(f"Graph {index} has a different leader list")
        if g.backend.name != first.backend.name:
            raise GraphCompatibilityError(f"Graph {index} was built on the {g.backend.name} backend")


def union_graph(graphs: Sequence[MatrixWeightedSignedGraph], name: Optional[str] = None) -> MatrixWeightedSignedGraph:
    """
    Union graph with summed adjacency blocks.

    Each pair's signed blocks are added. When all contributions share a sign
    the edge keeps it with the summed magnitude; mixed contributions are
    classified by the definiteness of the sum. A zero sum yields no edge.

    Args:
        graphs: Compatible graphs

    Returns:
        MatrixWeightedSignedGraph: The union graph
    """
    check_compatible(graphs)
    first = graphs[0]
    backend = first.backend

    contributions: Dict[Tuple[int, int], List[WeightedEdge]] = {}
    for g in graphs:
        for edge in g.edges:
            contributions.setdefault(edge.pair, []).append(edge)

    merged = []
    for (i, j), group in sorted(contributions.items()):
        total = backend.zeros(first.d, first.d)
        for edge in group:
            total = total + edge.sign.factor * edge.weight
        if backend.is_zero(total):
            logger.debug(f"Union: contributions on {i + 1}-{j + 1} cancel, no edge")
            continue

        signs = {edge.sign for edge in group}
        if len(signs) == 1:
            sign = signs.pop()
        else:
            sign = EdgeSign.NEGATIVE if backend.definiteness(total).is_nonpositive else EdgeSign.POSITIVE
            logger.warning(f"Union: edge {i + 1}-{j + 1} mixes signs, classified {sign.value}")
        merged.append(make_edge(backend, i, j, sign, sign.factor * total, first.d))

    logger.info(f"Union of {len(graphs)} graph(s): {len(merged)} edge(s)")
    return MatrixWeightedSignedGraph(first.n, first.d, merged, first.leaders, backend, name=name or 'union')
