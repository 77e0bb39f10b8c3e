"""Replay of the bundled examples on both backends."""

import pytest

from conftest import CORPUS_DIR, W1, build_graph, shared_dynamics
from network import Partition, assemble_switching
from processors.controllability_analyzer import theorem2_bound
from processors.corpus_runner import CorpusRunner
from utils.settings import Settings

EXAMPLES = sorted(path.stem for path in CORPUS_DIR.glob('*.json'))


def test_all_six_examples_present():
    assert EXAMPLES == [f'example{i}' for i in range(1, 7)]


@pytest.mark.parametrize('name', EXAMPLES)
@pytest.mark.parametrize('backend', ['exact', 'float'])
def test_example_reproduces(name, backend):
    runner = CorpusRunner(Settings(backend=backend))
    case = runner.run_case(CORPUS_DIR / f'{name}.json')
    assert case.backend == backend
    assert case.passed, case.mismatches


@pytest.mark.parametrize('name', EXAMPLES)
def test_backends_agree_on_verdicts(name):
    exact = CorpusRunner(Settings(backend='exact')).run_case(CORPUS_DIR / f'{name}.json').result
    flt = CorpusRunner(Settings(backend='float')).run_case(CORPUS_DIR / f'{name}.json').result
    for key in ('controllable', 'observable', 'subspace_dim', 'partition', 'union_dim', 'member_partitions'):
        assert exact.get(key) == flt.get(key)


def test_compare_ignores_mode():
    expected = {'mode': 'fixed', 'subspace_dim': 6, 'partition': [[1], [2, 3], [4]]}
    assert CorpusRunner.compare(expected, {'subspace_dim': 6, 'partition': [[1], [2, 3], [4]]}) == []
    mismatches = CorpusRunner.compare(expected, {'subspace_dim': 4, 'partition': [[1], [2, 3], [4]]})
    assert mismatches == ['subspace_dim: expected 6, got 4']


def test_join_bound_can_be_exceeded(exact):
    # star from the leader, then edges 1-2 and 1-4: the join of the member
    # partitions is {1},{2,3,4} yet the switching subspace has dimension 6
    star = build_graph(exact, 4, 2, [(0, 1, '+', W1), (0, 2, '+', W1), (0, 3, '+', W1)])
    fork = build_graph(exact, 4, 2, [(0, 1, '+', W1), (0, 3, '+', W1)])
    report = theorem2_bound(assemble_switching([star, fork], shared_dynamics(exact)))
    assert report.member_partitions[1] == Partition.parse('1|2,4|3', 4)
    assert report.partition_used == Partition.parse('1|2,3,4', 4)
    assert report.bound == 4
    assert report.achieved_dim == 6
    assert report.violated
    assert report.common_partition == Partition.parse('1|2,4|3', 4)
    assert report.common_bound == 6
    assert report.achieved_dim <= report.common_bound
