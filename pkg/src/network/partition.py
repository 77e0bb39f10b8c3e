"""
Partitions and Equitable Partitions

Node partitions, their characteristic matrices, the equitable-partition
check and its coarsest-refinement search, quotient Laplacians, and the
partition lattice operations used by the switching bounds.
"""

import logging
from dataclasses import dataclass
from typing import Any, Callable, Dict, Iterable, List, Optional, Sequence, Tuple

from linalg import BaseBackend
from utils.errors import PartitionError, PreconditionError
from .graph import EdgeSign, MatrixWeightedSignedGraph, check_compatible

logger = logging.getLogger(__name__)


class Partition:
    """
    Ordered partition of the node set {0, ..., n-1}.

    Cells are stored as sorted tuples and ordered by their smallest member,
    so two partitions with the same cells compare equal.
    """

    def __init__(self, cells: Iterable[Iterable[int]], n: Optional[int] = None):
        cells = [tuple(sorted(int(v) for v in cell)) for cell in cells]
        if any(not cell for cell in cells):
            raise PartitionError("Partition cells must be nonempty")

        members = [v for cell in cells for v in cell]
        if n is None:
            n = len(members)
        if len(set(members)) != len(members):
            raise PartitionError("Partition cells overlap")
        if sorted(members) != list(range(n)):
            missing = sorted(set(range(n)) - set(members))
            extra = sorted(set(members) - set(range(n)))
            raise PartitionError(
                f"Partition does not cover nodes 1..{n}"
                + (f"; missing {[v + 1 for v in missing]}" if missing else "")
                + (f"; unknown {[v + 1 for v in extra]}" if extra else "")
            )

        self._cells: Tuple[Tuple[int, ...], ...] = tuple(sorted(cells, key=lambda cell: cell[0]))
        self._n = n
        self._cell_of = {v: index for index, cell in enumerate(self._cells) for v in cell}

    @classmethod
    def singletons(cls, n: int) -> 'Partition':
        return cls([[v] for v in range(n)], n)

    @classmethod
    def single_cell(cls, n: int) -> 'Partition':
        return cls([range(n)], n)

    @classmethod
    def parse(cls, text: str, n: int) -> 'Partition':
        """
        Parse the external form "1|2,3|4" (1-based ids, '|' between cells).

        Args:
            text: Partition string
            n: Node count of the graph it applies to

        Returns:
            Partition: Parsed partition
        """
        try:
            cells = [
                [int(token) - 1 for token in chunk.split(',') if token.strip()]
                for chunk in text.split('|')
            ]
        except ValueError as e:
            raise PartitionError(f"Cannot parse partition {text!r}: {e}")
        return cls(cells, n)

    @property
    def cells(self) -> Tuple[Tuple[int, ...], ...]:
        return self._cells

    @property
    def n(self) -> int:
        return self._n

    @property
    def card(self) -> int:
        return len(self._cells)

    def __len__(self) -> int:
        return len(self._cells)

    def __iter__(self):
        return iter(self._cells)

    def __eq__(self, other: object) -> bool:
        return isinstance(other, Partition) and self._cells == other._cells

    def __hash__(self) -> int:
        return hash(self._cells)

    def __repr__(self) -> str:
        return f"Partition({self})"

    def __str__(self) -> str:
        inner = ','.join('{' + ','.join(str(v + 1) for v in cell) + '}' for cell in self._cells)
        return '{' + inner + '}'

    def cell_of(self, v: int) -> int:
        """Index of the cell holding node v."""
        return self._cell_of[v]

    def nontrivial_cells(self) -> List[Tuple[int, ...]]:
        return [cell for cell in self._cells if len(cell) > 1]

    @property
    def is_discrete(self) -> bool:
        """True when every cell is trivial."""
        return len(self._cells) == self._n

    def refines(self, other: 'Partition') -> bool:
        """True when every cell of self lies inside a cell of other."""
        _check_same_nodes(self, other)
        return all(len({other.cell_of(v) for v in cell}) == 1 for cell in self._cells)

    def to_external(self) -> List[List[int]]:
        """Cells as 1-based node-id lists."""
        return [[v + 1 for v in cell] for cell in self._cells]


def _check_same_nodes(p1: Partition, p2: Partition) -> None:
    if p1.n != p2.n:
        raise PartitionError(f"Partitions cover different node sets (n={p1.n} vs n={p2.n})")


def join(p1: Partition, p2: Partition) -> Partition:
    """
    Finest common coarsening of two partitions.

    Cells are the connected components of "same cell in p1 or in p2".
    """
    _check_same_nodes(p1, p2)
    parent = list(range(p1.n))

    def find(v: int) -> int:
        while parent[v] != v:
            parent[v] = parent[parent[v]]
            v = parent[v]
        return v

    for partition in (p1, p2):
        for cell in partition.cells:
            root = find(cell[0])
            for v in cell[1:]:
                other = find(v)
                if other != root:
                    parent[max(root, other)] = min(root, other)
                    root = min(root, other)

    components: Dict[int, List[int]] = {}
    for v in range(p1.n):
        components.setdefault(find(v), []).append(v)
    return Partition(components.values(), p1.n)


def meet(p1: Partition, p2: Partition) -> Partition:
    """Coarsest common refinement: nonempty intersections of cells."""
    _check_same_nodes(p1, p2)
    blocks: Dict[Tuple[int, int], List[int]] = {}
    for v in range(p1.n):
        blocks.setdefault((p1.cell_of(v), p2.cell_of(v)), []).append(v)
    return Partition(blocks.values(), p1.n)


def join_all(partitions: Sequence[Partition]) -> Partition:
    result = partitions[0]
    for p in partitions[1:]:
        result = join(result, p)
    return result


@dataclass(frozen=True)
class CharacteristicMatrix:
    """
    Block 0/I lift P_pi of a partition.

    Block (i, j) of p is I_d when node i lies in cell j, else 0.
    """

    p: Any
    partition: Partition
    d: int


def characteristic_matrix(pi: Partition, d: int, backend: BaseBackend) -> CharacteristicMatrix:
    """
    Build the dn x kd characteristic matrix of pi.

    Args:
        pi: Partition of the node set
        d: Block size
        backend: Backend for the native matrix

    Returns:
        CharacteristicMatrix: The lift with its partition
    """
    p = backend.zeros(pi.n * d, pi.card * d)
    identity = backend.eye(d)
    for j, cell in enumerate(pi.cells):
        for v in cell:
            p[v * d:(v + 1) * d, j * d:(j + 1) * d] = identity
    return CharacteristicMatrix(backend.freeze(p), pi, d)


# -- equitable partitions ---------------------------------------------------

@dataclass(frozen=True)
class EpViolation:
    """First pair of nodes in one cell whose sums toward another cell differ (0-based ids)."""

    cell_pair: Tuple[int, int]
    nodes: Tuple[int, int]
    sign: EdgeSign
    sums: Tuple[Any, Any]


@dataclass(frozen=True)
class EpWitness:
    verdict: bool
    violation: Optional[EpViolation] = None

    def __bool__(self) -> bool:
        return self.verdict


def sign_class_sums(g: MatrixWeightedSignedGraph, r: int, cell: Iterable[int]) -> Tuple[Any, Any]:
    """
    Magnitude sums from node r into a cell, split by sign class.

    Returns:
        Tuple: (sum over positive neighbors, sum over negative neighbors)
    """
    backend = g.backend
    positive = backend.zeros(g.d, g.d)
    negative = backend.zeros(g.d, g.d)
    for t in cell:
        edge = g.edge(r, t) if t != r else None
        if edge is None:
            continue
        if edge.sign is EdgeSign.POSITIVE:
            positive = positive + edge.weight
        else:
            negative = negative + edge.weight
    return positive, negative


def is_equitable(g: MatrixWeightedSignedGraph, pi: Partition) -> EpWitness:
    """
    Check whether pi is an equitable partition of g.

    For every ordered cell pair (V_i, V_j), all nodes of V_i must have equal
    positive-neighbor sums into V_j and equal negative-neighbor sums into V_j.

    Args:
        g: Graph
        pi: Partition of g's nodes

    Returns:
        EpWitness: Verdict and, on failure, the first violation in cell/node order
    """
    if pi.n != g.n:
        raise PartitionError(f"Partition covers {pi.n} nodes, graph has {g.n}")
    backend = g.backend

    for i, source in enumerate(pi.cells):
        if len(source) == 1:
            continue
        r = source[0]
        for j, target in enumerate(pi.cells):
            reference = sign_class_sums(g, r, target)
            for s in source[1:]:
                candidate = sign_class_sums(g, s, target)
                for sign, ref_sum, cand_sum in zip((EdgeSign.POSITIVE, EdgeSign.NEGATIVE), reference, candidate):
                    if not backend.equal(ref_sum, cand_sum):
                        violation = EpViolation((i, j), (r, s), sign, (ref_sum, cand_sum))
                        logger.debug(
                            f"Not equitable: nodes {r + 1},{s + 1} of cell {i + 1} differ toward cell {j + 1} "
                            f"({sign.value} class)"
                        )
                        return EpWitness(False, violation)
    return EpWitness(True)


def leader_partition(g: MatrixWeightedSignedGraph) -> Partition:
    """Every leader a singleton cell, all followers in one cell."""
    cells = [[v] for v in g.leaders]
    if g.followers:
        cells.append(list(g.followers))
    return Partition(cells, g.n)


def _group(nodes: Sequence[int], key: Callable[[int], Any], same: Callable[[Any, Any], bool]) -> List[List[int]]:
    """Split nodes into groups of matching keys, keeping first-seen order."""
    groups: List[Tuple[Any, List[int]]] = []
    for v in nodes:
        k = key(v)
        for representative, members in groups:
            if same(representative, k):
                members.append(v)
                break
        else:
            groups.append((k, [v]))
    return [members for _, members in groups]


def _matrices_match(backend: BaseBackend, a: Sequence[Any], b: Sequence[Any]) -> bool:
    return len(a) == len(b) and all(backend.equal(x, y) for x, y in zip(a, b))


def _refine(graphs: Sequence[MatrixWeightedSignedGraph], cells: List[List[int]]) -> Tuple[List[List[int]], int]:
    """Split cells by signatures taken over every graph until stable."""
    backend = graphs[0].backend
    rounds = 0
    while True:
        rounds += 1
        current = [tuple(cell) for cell in cells]

        def signature(v: int) -> List[Any]:
            sums = []
            for g in graphs:
                for target in current:
                    sums.extend(sign_class_sums(g, v, target))
            return sums

        refined = []
        for cell in current:
            if len(cell) == 1:
                refined.append(list(cell))
                continue
            refined.extend(_group(cell, signature, lambda a, b: _matrices_match(backend, a, b)))

        logger.debug(f"Refinement round {rounds}: {len(current)} -> {len(refined)} cell(s)")
        if len(refined) == len(current):
            return refined, rounds
        cells = refined


def coarsest_ep(g: MatrixWeightedSignedGraph, init: Optional[Partition] = None,
                node_labels: Optional[Sequence[Sequence[Any]]] = None) -> Partition:
    """
    Coarsest equitable partition refining init.

    Cells are split by node signature, the per-cell tuple of positive and
    negative magnitude sums, until no cell splits any more.

    Args:
        g: Graph
        init: Starting partition (defaults to leader singletons plus one follower cell)
        node_labels: Optional per-node matrix tuples; nodes with different
            labels are separated before refinement starts

    Returns:
        Partition: The coarsest equitable refinement of init
    """
    backend = g.backend
    if init is None:
        init = leader_partition(g)
    if init.n != g.n:
        raise PartitionError(f"Initial partition covers {init.n} nodes, graph has {g.n}")

    cells = [list(cell) for cell in init.cells]
    if node_labels is not None:
        if len(node_labels) != g.n:
            raise PartitionError(f"Expected {g.n} node labels, got {len(node_labels)}")
        split = []
        for cell in cells:
            split.extend(_group(cell, lambda v: node_labels[v], lambda a, b: _matrices_match(backend, a, b)))
        cells = split

    cells, rounds = _refine([g], cells)
    result = Partition(cells, g.n)
    logger.info(f"Coarsest equitable partition: {result} ({result.card} cell(s), {rounds} round(s))")
    return result


def coarsest_common_ep(gs: Sequence[MatrixWeightedSignedGraph], init: Optional[Partition] = None) -> Partition:
    """
    Coarsest partition refining init that is equitable for every graph in gs.

    It refines the meet of the members' coarsest equitable partitions.
    """
    check_compatible(gs)
    if init is None:
        init = leader_partition(gs[0])
    cells, rounds = _refine(list(gs), [list(cell) for cell in init.cells])
    result = Partition(cells, gs[0].n)
    logger.debug(f"Common equitable partition of {len(gs)} graph(s): {result}")
    return result


# -- quotients ----------------------------------------------------------------

def cell_degree(g: MatrixWeightedSignedGraph, pi: Partition, i: int, j: int) -> Any:
    """d(V_i, V_j): magnitude sum from a representative of V_i into V_j."""
    positive, negative = sign_class_sums(g, pi.cells[i][0], pi.cells[j])
    return positive + negative


def quotient_laplacian(g: MatrixWeightedSignedGraph, pi: Partition) -> Any:
    """
    Signed quotient Laplacian L_pi of an equitable partition.

    With r the first node of V_i, block (i, j) is -sum_{t in V_j} A_rt for
    i != j, and the diagonal block is d_r - sum_{t in V_i} A_rt. This is the
    unique matrix with L P_pi = P_pi L_pi.

    Raises:
        PreconditionError: If pi is not equitable for g
    """
    witness = is_equitable(g, pi)
    if not witness:
        raise PreconditionError(f"Partition {pi} is not equitable; the quotient Laplacian is undefined")

    d = g.d
    backend = g.backend
    lap = backend.zeros(pi.card * d, pi.card * d)
    for i, source in enumerate(pi.cells):
        r = source[0]
        for j, target in enumerate(pi.cells):
            positive, negative = sign_class_sums(g, r, target)
            block = negative - positive
            if i == j:
                block = block + g.degree(r)
            lap[i * d:(i + 1) * d, j * d:(j + 1) * d] = block
    return lap
