"""Tests for partitions, equitable-partition search and quotient Laplacians."""

import pytest
from hypothesis import given, settings, strategies as st

from conftest import W1, W2, build_graph, example1_graph, example2_members
from linalg import ExactBackend, FloatBackend, contains
from network import (
    EdgeSign,
    Partition,
    cell_degree,
    characteristic_matrix,
    coarsest_common_ep,
    coarsest_ep,
    is_equitable,
    join,
    join_all,
    leader_partition,
    meet,
    quotient_laplacian,
    sign_class_sums,
)
from utils.errors import PartitionError, PreconditionError


def test_parse_and_render():
    pi = Partition.parse('1|3,2|4', 4)
    assert pi.cells == ((0,), (1, 2), (3,))
    assert str(pi) == '{{1},{2,3},{4}}'
    assert pi.to_external() == [[1], [2, 3], [4]]
    assert pi == Partition([[3], [1, 2], [0]], 4)
    assert hash(pi) == hash(Partition([[0], [2, 1], [3]], 4))


@pytest.mark.parametrize('text', ['1,2|2,3', '1|2', '1|2|3|5', '1|a,2|3'])
def test_parse_rejects(text):
    with pytest.raises(PartitionError):
        Partition.parse(text, 3 if text != '1|2|3|5' else 4)


def test_empty_cell_rejected():
    with pytest.raises(PartitionError):
        Partition([[0], []], 1)


def test_shape_queries():
    pi = Partition.parse('1|2,3|4', 4)
    assert pi.card == 3
    assert len(pi) == 3
    assert pi.cell_of(2) == 1
    assert pi.nontrivial_cells() == [(1, 2)]
    assert not pi.is_discrete
    assert Partition.singletons(4).is_discrete
    assert Partition.single_cell(4).card == 1


def test_lattice_operations():
    a = Partition.parse('1,2|3|4', 4)
    b = Partition.parse('1|2,3|4', 4)
    assert join(a, b) == Partition.parse('1,2,3|4', 4)
    assert meet(a, b) == Partition.singletons(4)
    assert join_all([a]) == a
    assert Partition.singletons(4).refines(a)
    assert a.refines(join(a, b))
    assert not a.refines(b)


@st.composite
def partitions(draw, n):
    labels = draw(st.lists(st.integers(0, n - 1), min_size=n, max_size=n))
    cells = {}
    for v, label in enumerate(labels):
        cells.setdefault(label, []).append(v)
    return Partition(cells.values(), n)


partition_pairs = st.integers(1, 7).flatmap(lambda n: st.tuples(partitions(n), partitions(n)))


@given(partition_pairs, st.integers(1, 3))
@settings(max_examples=100, deadline=None)
def test_join_image_lies_in_both_images(pair, d):
    backend = ExactBackend()
    p1, p2 = pair
    pj = join(p1, p2)
    p_join = characteristic_matrix(pj, d, backend).p
    for p in (p1, p2):
        assert p.refines(pj)
        assert contains(backend, backend.column_space(characteristic_matrix(p, d, backend).p), p_join)
    assert backend.rank(p_join) == pj.card * d <= min(p1.card, p2.card) * d


@given(st.integers(1, 7).flatmap(partitions), st.integers(1, 3))
@settings(max_examples=100, deadline=None)
def test_characteristic_matrix_has_full_column_rank(pi, d):
    for backend in (ExactBackend(), FloatBackend()):
        p = characteristic_matrix(pi, d, backend).p
        assert p.shape == (pi.n * d, pi.card * d)
        assert backend.rank(p) == pi.card * d


def test_lattice_rejects_different_sizes():
    with pytest.raises(PartitionError):
        join(Partition.singletons(3), Partition.singletons(4))


def test_characteristic_matrix_blocks(exact):
    pi = Partition.parse('1|2,3|4', 4)
    cm = characteristic_matrix(pi, 2, exact)
    assert cm.p.shape == (8, 6)
    assert exact.to_python(exact.block(cm.p, 2, 1, 2, 2)) == [[1, 0], [0, 1]]
    assert exact.to_python(exact.block(cm.p, 2, 0, 2, 2)) == [[0, 0], [0, 0]]


def test_sign_class_sums(exact):
    g = example1_graph(exact)
    positive, negative = sign_class_sums(g, 3, [1, 2])
    assert exact.is_zero(positive)
    assert exact.equal(negative, exact.matrix(W2) * 2)


def test_example1_coarsest_ep(backend):
    g = example1_graph(backend)
    assert coarsest_ep(g) == Partition.parse('1|2,3|4', 4)
    assert is_equitable(g, Partition.parse('1|2,3|4', 4))


def test_example1_non_equitable_witness(exact):
    g = example1_graph(exact)
    witness = is_equitable(g, Partition.parse('1|2,4|3', 4))
    assert not witness
    violation = witness.violation
    assert violation.nodes == (1, 3)
    assert violation.cell_pair == (1, 0)
    assert violation.sign is EdgeSign.POSITIVE
    assert exact.equal(violation.sums[0], exact.matrix(W1))
    assert exact.is_zero(violation.sums[1])


def test_discrete_partition_is_always_equitable(exact):
    g = example1_graph(exact)
    assert is_equitable(g, Partition.singletons(4))


def test_leader_partition(exact):
    g = build_graph(exact, 4, 1, [(0, 1, '+', [[1]])], leaders=(2, 0))
    assert leader_partition(g) == Partition.parse('1|2,4|3', 4)


def test_coarsest_ep_respects_init(exact):
    g = example1_graph(exact)
    assert coarsest_ep(g, init=Partition.singletons(4)).is_discrete


def test_coarsest_ep_splits_on_node_labels(exact):
    g = example1_graph(exact)
    labels = [(exact.eye(2),), (exact.eye(2),), (exact.matrix(W2),), (exact.eye(2),)]
    assert coarsest_ep(g, node_labels=labels).is_discrete


def test_signed_sums_separate_same_magnitude(exact):
    # node 2 sees +1 and node 3 sees -1 from the leader: magnitudes match, signs do not
    g = build_graph(exact, 3, 1, [(0, 1, '+', [[1]]), (0, 2, '-', [[1]])])
    assert coarsest_ep(g).is_discrete
    star = build_graph(exact, 3, 1, [(0, 1, '-', [[1]]), (0, 2, '-', [[1]])])
    assert coarsest_ep(star) == Partition.parse('1|2,3', 3)


def test_example2_member_and_common_eps(exact):
    star, edge = example2_members(exact)
    assert coarsest_ep(star) == Partition.parse('1|2,3,4', 4)
    assert coarsest_ep(edge) == Partition.parse('1|2,3|4', 4)
    common = coarsest_common_ep([star, edge])
    assert common == Partition.parse('1|2,3|4', 4)
    assert is_equitable(star, common) and is_equitable(edge, common)


def test_cell_degree(exact):
    g = example1_graph(exact)
    pi = Partition.parse('1|2,3|4', 4)
    assert exact.equal(cell_degree(g, pi, 0, 1), exact.matrix(W1) * 2)
    assert exact.equal(cell_degree(g, pi, 1, 2), exact.matrix(W2))
    assert exact.is_zero(cell_degree(g, pi, 0, 2))


def test_example1_quotient_laplacian(backend):
    g = example1_graph(backend)
    pi = Partition.parse('1|2,3|4', 4)
    lpi = quotient_laplacian(g, pi)
    expected = backend.matrix([
        [2, 4, -2, -4, 0, 0],
        [4, 2, -4, -2, 0, 0],
        [-1, -2, 3, 3, 2, 1],
        [-2, -1, 3, 3, 1, 2],
        [0, 0, 4, 2, 4, 2],
        [0, 0, 2, 4, 2, 4],
    ])
    assert backend.equal(lpi, expected)
    p = characteristic_matrix(pi, 2, backend).p
    assert backend.equal(g.laplacian() @ p, p @ lpi)


def test_quotient_laplacian_needs_ep(exact):
    with pytest.raises(PreconditionError):
        quotient_laplacian(example1_graph(exact), Partition.parse('1|2,4|3', 4))


def test_discrete_quotient_is_laplacian(exact):
    g = example1_graph(exact)
    assert exact.equal(quotient_laplacian(g, Partition.singletons(4)), g.laplacian())
