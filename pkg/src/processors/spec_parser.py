"""
Network Specification Parser

This module loads network specifications from JSON, validates them against
config/network_schema.json and the graph invariants, and serializes them
back to the same document shape.
"""

import json
import logging
from dataclasses import dataclass, field
from fractions import Fraction
from pathlib import Path
from typing import Any, Dict, List, Optional, Sequence, Union

from jsonschema import Draft7Validator

from linalg import BaseBackend, ExactBackend, FloatBackend
from network import (
    Dynamics,
    EdgeSign,
    HeterogeneousDynamics,
    MatrixWeightedSignedGraph,
    make_edge,
)
from utils.errors import MatnetError, SpecValidationError
from utils.settings import CONFIG_DIR

logger = logging.getLogger(__name__)

Scalar = Union[Fraction, float]
Rows = List[List[Scalar]]


def parse_scalar(value: Any) -> Scalar:
    """int and 'p/q' become Fraction; floats stay float."""
    if isinstance(value, bool):
        raise ValueError(f"Boolean is not a matrix entry: {value!r}")
    if isinstance(value, float):
        return value
    if isinstance(value, (int, str, Fraction)):
        return Fraction(value)
    raise ValueError(f"Unsupported matrix entry: {value!r}")


def format_scalar(value: Scalar) -> Union[int, str, float]:
    """Fraction -> int or 'p/q' string; float unchanged."""
    if isinstance(value, Fraction):
        return value.numerator if value.denominator == 1 else f"{value.numerator}/{value.denominator}"
    return float(value)


def _parse_rows(rows: Sequence[Sequence[Any]], location: str) -> Rows:
    try:
        parsed = [[parse_scalar(x) for x in row] for row in rows]
    except (ValueError, ZeroDivisionError) as e:
        raise SpecValidationError(str(e), location)
    width = len(parsed[0]) if parsed else 0
    if any(len(row) != width for row in parsed):
        raise SpecValidationError(f"Ragged matrix: rows must all have {width} entries", location)
    return parsed


def _format_rows(rows: Rows) -> List[List[Any]]:
    return [[format_scalar(x) for x in row] for row in rows]


@dataclass(frozen=True)
class EdgeSpec:
    """One edge as written in a spec (1-based node ids)."""

    i: int
    j: int
    sign: EdgeSign
    weight: Rows


@dataclass
class NetworkSpec:
    """
    Parsed network specification.

    Matrices hold Fractions (ints and 'p/q' strings) or floats exactly as
    written; backends convert them on demand. When edges is absent the first
    topology is the primary graph.
    """

    n: int
    d: int
    leaders: List[int]
    dynamics: Dict[str, Any]
    edges: Optional[List[EdgeSpec]] = None
    topologies: Optional[List[List[EdgeSpec]]] = None
    laplacian_override: Optional[Rows] = None
    topology_laplacians: Optional[List[Optional[Rows]]] = None
    name: Optional[str] = None
    description: Optional[str] = None
    expected: Dict[str, Any] = field(default_factory=dict)

    # -- inspection -------------------------------------------------------

    @property
    def heterogeneous(self) -> bool:
        return 'per_node' in self.dynamics

    @property
    def label(self) -> str:
        return self.name or 'network'

    def _matrices(self) -> List[Rows]:
        mats: List[Rows] = []
        for edge in self.edges or []:
            mats.append(edge.weight)
        for topology in self.topologies or []:
            mats.extend(edge.weight for edge in topology)
        if self.laplacian_override:
            mats.append(self.laplacian_override)
        mats.extend(m for m in self.topology_laplacians or [] if m)
        if self.heterogeneous:
            for node in self.dynamics['per_node']:
                mats.extend((node['a'], node['b']))
            mats.extend((self.dynamics['k'], self.dynamics['c']))
        else:
            mats.extend(self.dynamics[key] for key in ('a', 'b', 'k', 'c'))
        return mats

    def all_rational(self) -> bool:
        """True when no entry was written as a float."""
        return all(isinstance(x, Fraction) for m in self._matrices() for row in m for x in row)

    # -- construction -----------------------------------------------------

    def _build_graph(self, edges: Sequence[EdgeSpec], backend: BaseBackend, location: str,
                     name: Optional[str]) -> MatrixWeightedSignedGraph:
        built = []
        for index, edge in enumerate(edges):
            try:
                built.append(make_edge(backend, edge.i - 1, edge.j - 1, edge.sign,
                                       backend.matrix(edge.weight), self.d))
            except MatnetError as e:
                raise SpecValidationError(str(e), f"{location}/{index}")
        try:
            return MatrixWeightedSignedGraph(self.n, self.d, built, [v - 1 for v in self.leaders],
                                             backend, name=name)
        except MatnetError as e:
            raise SpecValidationError(str(e), location)

    def graph(self, backend: BaseBackend) -> MatrixWeightedSignedGraph:
        """Primary graph: edges, or the first topology when edges is absent."""
        if self.edges is None and self.topologies:
            return self._build_graph(self.topologies[0], backend, 'topologies/0', self.label)
        return self._build_graph(self.edges or [], backend, 'edges', self.label)

    def member_graphs(self, backend: BaseBackend) -> List[MatrixWeightedSignedGraph]:
        """One graph per topology; raises when the spec has none."""
        if not self.topologies:
            raise SpecValidationError("This command needs a 'topologies' list", 'topologies')
        return [
            self._build_graph(edges, backend, f"topologies/{index}", f"{self.label}[{index + 1}]")
            for index, edges in enumerate(self.topologies)
        ]

    def _matrix(self, rows: Rows, backend: BaseBackend, location: str) -> Any:
        try:
            return backend.matrix(rows)
        except MatnetError as e:
            raise SpecValidationError(str(e), location)

    def dynamics_for(self, backend: BaseBackend) -> Union[Dynamics, HeterogeneousDynamics]:
        dyn = self.dynamics
        try:
            if self.heterogeneous:
                if len(dyn['per_node']) != self.n:
                    raise SpecValidationError(
                        f"Expected {self.n} per-node entries, got {len(dyn['per_node'])}", 'dynamics/per_node'
                    )
                per_node = tuple(
                    (self._matrix(node['a'], backend, f"dynamics/per_node/{index}/a"),
                     self._matrix(node['b'], backend, f"dynamics/per_node/{index}/b"))
                    for index, node in enumerate(dyn['per_node'])
                )
                result = HeterogeneousDynamics(per_node, self._matrix(dyn['k'], backend, 'dynamics/k'),
                                               self._matrix(dyn['c'], backend, 'dynamics/c'))
            else:
                result = Dynamics(*(self._matrix(dyn[key], backend, f"dynamics/{key}") for key in ('a', 'b', 'k', 'c')))
        except SpecValidationError:
            raise
        except MatnetError as e:
            raise SpecValidationError(str(e), 'dynamics')
        if result.d != self.d:
            raise SpecValidationError(f"Dynamics have d={result.d}, spec declares d={self.d}", 'dynamics')
        return result

    def shared_dynamics(self, backend: BaseBackend) -> Dynamics:
        """Shared dynamics; a heterogeneous spec whose nodes all agree is accepted."""
        dyn = self.dynamics_for(backend)
        if isinstance(dyn, HeterogeneousDynamics):
            if not dyn.is_homogeneous(backend):
                raise SpecValidationError("This command needs shared dynamics (a, b, k, c)", 'dynamics')
            return dyn.node(0)
        return dyn

    def override(self, backend: BaseBackend) -> Optional[Any]:
        if self.laplacian_override is None:
            return None
        return self._matrix(self.laplacian_override, backend, 'laplacian_override')

    def member_laplacians(self, backend: BaseBackend) -> Optional[List[Optional[Any]]]:
        if self.topology_laplacians is None:
            return None
        return [
            None if rows is None else self._matrix(rows, backend, f"topology_laplacians/{index}")
            for index, rows in enumerate(self.topology_laplacians)
        ]

    # -- serialization ------------------------------------------------------

    def to_dict(self) -> Dict[str, Any]:
        """Document form accepted by NetworkSpecParser.parse_dict."""
        def edge_list(edges: Sequence[EdgeSpec]) -> List[Dict[str, Any]]:
            return [
                {'i': e.i, 'j': e.j, 'sign': e.sign.value, 'weight': _format_rows(e.weight)}
                for e in edges
            ]

        if self.heterogeneous:
            dynamics = {
                'per_node': [
                    {'a': _format_rows(node['a']), 'b': _format_rows(node['b'])}
                    for node in self.dynamics['per_node']
                ],
                'k': _format_rows(self.dynamics['k']),
                'c': _format_rows(self.dynamics['c']),
            }
        else:
            dynamics = {key: _format_rows(self.dynamics[key]) for key in ('a', 'b', 'k', 'c')}

        doc: Dict[str, Any] = {'n': self.n, 'd': self.d, 'leaders': list(self.leaders), 'dynamics': dynamics}
        if self.name is not None:
            doc['name'] = self.name
        if self.description is not None:
            doc['description'] = self.description
        if self.edges is not None:
            doc['edges'] = edge_list(self.edges)
        if self.topologies is not None:
            doc['topologies'] = [edge_list(t) for t in self.topologies]
        if self.laplacian_override is not None:
            doc['laplacian_override'] = _format_rows(self.laplacian_override)
        if self.topology_laplacians is not None:
            doc['topology_laplacians'] = [
                None if rows is None else _format_rows(rows) for rows in self.topology_laplacians
            ]
        if self.expected:
            doc['expected'] = self.expected
        return doc


class NetworkSpecParser:
    """
    Parses and validates network specification documents.
    """

    def __init__(self, schema_path: Optional[Union[str, Path]] = None):
        """
        Initialize the parser.

        Args:
            schema_path (Optional[Union[str, Path]]): JSON schema file (defaults to config/network_schema.json)
        """
        self.schema_path = Path(schema_path) if schema_path else CONFIG_DIR / 'network_schema.json'
        self.schema = self._load_schema(self.schema_path)
        self.validator = Draft7Validator(self.schema) if self.schema else None
        logger.debug("Network spec parser initialized")

    def _load_schema(self, schema_path: Path) -> Dict[str, Any]:
        """
        Load the network schema from JSON file.

        Args:
            schema_path (Path): Path to schema file

        Returns:
            Dict[str, Any]: Schema definition, empty when unavailable
        """
        try:
            with open(schema_path, 'r') as f:
                schema = json.load(f)
            logger.debug(f"Loaded network schema from {schema_path}")
            return schema
        except FileNotFoundError:
            logger.warning(f"Schema file not found: {schema_path}, skipping schema validation")
            return {}
        except json.JSONDecodeError as e:
            logger.error(f"Error parsing schema file: {e}")
            return {}

    def load(self, path: Union[str, Path]) -> NetworkSpec:
        """
        Load a specification file.

        Args:
            path (Union[str, Path]): JSON file

        Returns:
            NetworkSpec: Validated specification
        """
        path = Path(path)
        try:
            text = path.read_text(encoding='utf-8')
        except OSError as e:
            raise SpecValidationError(f"Cannot read specification: {e}", str(path))
        spec = self.parse_text(text, source=str(path))
        logger.info(f"Loaded network spec '{spec.label}' from {path} (n={spec.n}, d={spec.d})")
        return spec

    def parse_text(self, text: str, source: str = '<string>') -> NetworkSpec:
        try:
            data = json.loads(text)
        except json.JSONDecodeError as e:
            raise SpecValidationError(e.msg, f"{source}: line {e.lineno} col {e.colno}")
        return self.parse_dict(data)

    def parse_dict(self, data: Dict[str, Any]) -> NetworkSpec:
        """
        Validate a decoded document and build the NetworkSpec.

        Raises:
            SpecValidationError: With a JSON-path location for the first problem found
        """
        if self.validator is not None:
            errors = sorted(self.validator.iter_errors(data), key=lambda e: [str(p) for p in e.absolute_path])
            if errors:
                first = errors[0]
                location = '/'.join(str(p) for p in first.absolute_path) or '<root>'
                raise SpecValidationError(first.message, location)

        def edges_from(raw: Sequence[Dict[str, Any]], location: str) -> List[EdgeSpec]:
            parsed = []
            for index, edge in enumerate(raw):
                try:
                    sign = EdgeSign.parse(edge['sign'])
                except ValueError as e:
                    raise SpecValidationError(str(e), f"{location}/{index}/sign")
                parsed.append(EdgeSpec(int(edge['i']), int(edge['j']), sign,
                                       _parse_rows(edge['weight'], f"{location}/{index}/weight")))
            return parsed

        raw_dyn = data['dynamics']
        if 'per_node' in raw_dyn:
            dynamics = {
                'per_node': [
                    {'a': _parse_rows(node['a'], f"dynamics/per_node/{index}/a"),
                     'b': _parse_rows(node['b'], f"dynamics/per_node/{index}/b")}
                    for index, node in enumerate(raw_dyn['per_node'])
                ],
                'k': _parse_rows(raw_dyn['k'], 'dynamics/k'),
                'c': _parse_rows(raw_dyn['c'], 'dynamics/c'),
            }
        else:
            dynamics = {key: _parse_rows(raw_dyn[key], f"dynamics/{key}") for key in ('a', 'b', 'k', 'c')}

        spec = NetworkSpec(
            n=int(data['n']),
            d=int(data['d']),
            leaders=[int(v) for v in data['leaders']],
            dynamics=dynamics,
            edges=edges_from(data['edges'], 'edges') if 'edges' in data else None,
            topologies=[edges_from(t, f"topologies/{index}") for index, t in enumerate(data['topologies'])]
            if 'topologies' in data else None,
            laplacian_override=_parse_rows(data['laplacian_override'], 'laplacian_override')
            if 'laplacian_override' in data else None,
            topology_laplacians=[
                None if rows is None else _parse_rows(rows, f"topology_laplacians/{index}")
                for index, rows in enumerate(data['topology_laplacians'])
            ] if 'topology_laplacians' in data else None,
            name=data.get('name'),
            description=data.get('description'),
            expected=dict(data.get('expected', {})),
        )
        self.validate_semantics(spec)
        return spec

    def validate_semantics(self, spec: NetworkSpec) -> None:
        """Build every graph and matrix once so invariant violations surface at load time."""
        backend = ExactBackend() if spec.all_rational() else FloatBackend()
        spec.graph(backend)
        if spec.topologies:
            spec.member_graphs(backend)
        spec.dynamics_for(backend)

        dn = spec.n * spec.d
        if spec.laplacian_override is not None:
            override = spec.override(backend)
            if tuple(override.shape) != (dn, dn):
                raise SpecValidationError(f"Expected a {dn}x{dn} matrix, got {tuple(override.shape)}", 'laplacian_override')
        if spec.topology_laplacians is not None:
            if len(spec.topology_laplacians) != len(spec.topologies or []):
                raise SpecValidationError(
                    f"Got {len(spec.topology_laplacians)} Laplacian(s) for {len(spec.topologies or [])} topologies",
                    'topology_laplacians',
                )
            for index, rows in enumerate(spec.topology_laplacians):
                if rows is not None and (len(rows) != dn or len(rows[0]) != dn):
                    raise SpecValidationError(f"Expected a {dn}x{dn} matrix", f"topology_laplacians/{index}")
