"""Shared fixtures: src/ on sys.path, backends and the example networks."""

import sys
from pathlib import Path

import pytest

SRC_DIR = Path(__file__).parent.parent / 'src'
sys.path.insert(0, str(SRC_DIR))

from linalg import ExactBackend, FloatBackend  # noqa: E402
from network import Dynamics, HeterogeneousDynamics, MatrixWeightedSignedGraph, make_edge  # noqa: E402

W1 = [[1, 2], [2, 1]]
W2 = [[2, 1], [1, 2]]
I2 = [[1, 0], [0, 1]]
TWO_I2 = [[2, 0], [0, 2]]

CORPUS_DIR = Path(__file__).parent.parent / 'config' / 'corpus'


def build_graph(backend, n, d, edges, leaders=(0,), name=None):
    """edges: (i, j, sign, rows) with 0-based ids."""
    built = [make_edge(backend, i, j, sign, backend.matrix(rows), d) for i, j, sign, rows in edges]
    return MatrixWeightedSignedGraph(n, d, built, list(leaders), backend, name=name)


def shared_dynamics(backend):
    """A = K = I2, B = C = 2 I2."""
    return Dynamics(backend.matrix(I2), backend.matrix(TWO_I2), backend.matrix(I2), backend.matrix(TWO_I2))


def first_order(backend, d=1):
    eye = backend.eye(d)
    return Dynamics(backend.zeros(d, d), eye, eye, eye)


def example1_graph(backend):
    return build_graph(backend, 4, 2, [
        (0, 1, '+', W1), (0, 2, '+', W1), (1, 3, '-', W2), (2, 3, '-', W2),
    ], name='example1')


EXAMPLE1_PRINTED = [
    [2, 4, -1, -2, -1, -2, 0, 0],
    [4, 2, -2, -1, -2, -1, 0, 0],
    [-1, -2, -1, 1, 0, 0, -2, -1],
    [-2, -1, 1, -1, 0, 0, -1, -2],
    [-1, -2, 0, 0, -1, 1, -2, -1],
    [-2, -1, 0, 0, 1, -1, -1, -2],
    [0, 0, -2, -1, -2, -1, -4, -2],
    [0, 0, -1, -2, -1, -2, -2, -4],
]


def example1_printed_laplacian(backend):
    return backend.matrix(EXAMPLE1_PRINTED)


def example1_asymmetric_override(backend):
    """Printed Laplacian with node 2's self block changed, so nodes 2 and 3 differ."""
    rows = [list(row) for row in EXAMPLE1_PRINTED]
    rows[2][2] = 5
    return backend.matrix(rows)


def example3_graph(backend):
    return build_graph(backend, 4, 2, [
        (0, 1, '+', W1), (0, 2, '+', W1), (1, 3, '+', W1), (2, 3, '+', W1),
    ], name='example3')


def example3_dynamics(backend):
    two = backend.matrix(TWO_I2)
    per_node = tuple((backend.matrix(a), two) for a in (I2, W2, W2, W1))
    return HeterogeneousDynamics(per_node, backend.matrix(I2), backend.matrix(TWO_I2))


def example2_members(backend):
    star = build_graph(backend, 4, 2, [(0, 1, '+', W1), (0, 2, '+', W1), (0, 3, '+', W1)])
    edge = build_graph(backend, 4, 2, [(1, 2, '+', W1)])
    return [star, edge]


def example4_members(backend):
    return [build_graph(backend, 3, 2, [(0, 1, '+', W1)]), build_graph(backend, 3, 2, [(0, 2, '+', W1)])]


def example5_members(backend):
    return [
        build_graph(backend, 3, 2, [(0, 1, '+', W1), (0, 2, '+', W1)]),
        build_graph(backend, 3, 2, [(1, 2, '+', W1)]),
    ]


@pytest.fixture
def exact():
    return ExactBackend()


@pytest.fixture
def flt():
    return FloatBackend()


@pytest.fixture(params=['exact', 'float'])
def backend(request):
    return ExactBackend() if request.param == 'exact' else FloatBackend()
