"""Tests for loading and validating network specifications."""

import copy
import json
from fractions import Fraction

import pytest

from conftest import CORPUS_DIR
from linalg import ExactBackend
from network import EdgeSign, HeterogeneousDynamics
from processors.spec_parser import NetworkSpecParser, format_scalar, parse_scalar
from utils.errors import SpecValidationError

BASE_DOC = {
    'name': 'pair',
    'n': 2,
    'd': 1,
    'leaders': [1],
    'edges': [{'i': 1, 'j': 2, 'sign': '+', 'weight': [['1/2']]}],
    'dynamics': {'a': [[0]], 'b': [[1]], 'k': [[1]], 'c': [[1]]},
}


@pytest.fixture
def parser():
    return NetworkSpecParser()


def doc(**changes):
    data = copy.deepcopy(BASE_DOC)
    data.update(changes)
    return data


def location_of(parser, data):
    with pytest.raises(SpecValidationError) as info:
        parser.parse_dict(data)
    return info.value.location


def test_scalar_conversion():
    assert parse_scalar(3) == Fraction(3)
    assert parse_scalar('-2/6') == Fraction(-1, 3)
    assert parse_scalar(0.25) == 0.25
    assert format_scalar(Fraction(4)) == 4
    assert format_scalar(Fraction(-1, 3)) == '-1/3'
    with pytest.raises(ValueError):
        parse_scalar(True)


def test_parse_minimal_spec(parser):
    spec = parser.parse_dict(doc())
    assert (spec.n, spec.d, spec.leaders) == (2, 1, [1])
    assert spec.edges[0].sign is EdgeSign.POSITIVE
    assert spec.edges[0].weight == [[Fraction(1, 2)]]
    assert spec.all_rational()
    assert not spec.heterogeneous
    g = spec.graph(ExactBackend())
    assert g.leaders == (0,)
    assert g.edge(0, 1) is not None


def test_float_entries_are_not_rational(parser):
    data = doc()
    data['edges'][0]['weight'] = [[0.5]]
    assert not parser.parse_dict(data).all_rational()


def test_round_trip_through_dict(parser):
    data = doc(topologies=[[{'i': 1, 'j': 2, 'sign': '-', 'weight': [[2]]}]], expected={'mode': 'fixed'})
    spec = parser.parse_dict(data)
    again = parser.parse_dict(json.loads(json.dumps(spec.to_dict())))
    assert again == spec


def test_primary_graph_falls_back_to_first_topology(parser):
    data = doc(topologies=[[{'i': 1, 'j': 2, 'sign': '-', 'weight': [[2]]}], []])
    del data['edges']
    spec = parser.parse_dict(data)
    backend = ExactBackend()
    assert spec.graph(backend).edge(0, 1).sign is EdgeSign.NEGATIVE
    assert len(spec.member_graphs(backend)) == 2


def test_member_graphs_need_topologies(parser):
    spec = parser.parse_dict(doc())
    with pytest.raises(SpecValidationError) as info:
        spec.member_graphs(ExactBackend())
    assert info.value.location == 'topologies'


def test_heterogeneous_dynamics(parser):
    data = doc(dynamics={'per_node': [{'a': [[0]], 'b': [[1]]}, {'a': [[1]], 'b': [[1]]}], 'k': [[1]], 'c': [[1]]})
    spec = parser.parse_dict(data)
    assert spec.heterogeneous
    assert isinstance(spec.dynamics_for(ExactBackend()), HeterogeneousDynamics)
    with pytest.raises(SpecValidationError):
        spec.shared_dynamics(ExactBackend())


def test_homogeneous_per_node_counts_as_shared(parser):
    data = doc(dynamics={'per_node': [{'a': [[0]], 'b': [[1]]}] * 2, 'k': [[1]], 'c': [[1]]})
    dyn = parser.parse_dict(data).shared_dynamics(ExactBackend())
    assert dyn.d == 1


def test_json_syntax_error_has_line_and_column(parser):
    with pytest.raises(SpecValidationError) as info:
        parser.parse_text('{\n  "n": 2,,\n}', source='broken.json')
    assert info.value.location.startswith('broken.json: line 2 col')


def test_missing_required_key(parser):
    data = doc()
    del data['dynamics']
    assert location_of(parser, data) == '<root>'


def test_bad_scalar_is_located(parser):
    data = doc()
    data['edges'][0]['weight'] = [['one']]
    assert location_of(parser, data) == 'edges/0/weight/0/0'


def test_ragged_matrix_is_located(parser):
    data = doc(d=2, dynamics={'a': [[0, 0], [0]], 'b': [[1, 0], [0, 1]], 'k': [[1, 0], [0, 1]], 'c': [[1], [1]]})
    data['edges'][0]['weight'] = [[1, 0], [0, 1]]
    assert location_of(parser, data) == 'dynamics/a'


@pytest.mark.parametrize('edge, where', [
    ({'i': 1, 'j': 1, 'sign': '+', 'weight': [[1]]}, 'edges/0'),
    ({'i': 1, 'j': 2, 'sign': '+', 'weight': [[1, 0], [0, 1]]}, 'edges/0'),
    ({'i': 1, 'j': 2, 'sign': '+', 'weight': [[0]]}, 'edges/0'),
])
def test_invalid_edges_are_located(parser, edge, where):
    assert location_of(parser, doc(edges=[edge])) == where


def test_leader_out_of_range(parser):
    assert location_of(parser, doc(leaders=[3])) == 'edges'


def test_per_node_count_mismatch(parser):
    data = doc(dynamics={'per_node': [{'a': [[0]], 'b': [[1]]}], 'k': [[1]], 'c': [[1]]})
    assert location_of(parser, data) == 'dynamics/per_node'


def test_dynamics_dimension_mismatch(parser):
    data = doc(dynamics={'a': [[0, 0], [0, 0]], 'b': [[1], [0]], 'k': [[1, 0]], 'c': [[1], [0]]})
    assert location_of(parser, data) == 'dynamics'


def test_override_shape_checked(parser):
    assert location_of(parser, doc(laplacian_override=[[1]])) == 'laplacian_override'


def test_topology_laplacian_count_checked(parser):
    data = doc(topologies=[[]], topology_laplacians=[None, None])
    assert location_of(parser, data) == 'topology_laplacians'


def test_load_missing_file(parser, tmp_path):
    with pytest.raises(SpecValidationError):
        parser.load(tmp_path / 'absent.json')


def test_load_corpus_example(parser):
    spec = parser.load(CORPUS_DIR / 'example1.json')
    assert spec.name == 'example1'
    assert spec.expected['mode'] == 'fixed'
    assert len(spec.laplacian_override) == 8
