"""Randomized property checks for partitions, subspaces and union implications."""

from hypothesis import assume, given, settings, strategies as st

from conftest import build_graph
from linalg import ExactBackend, FloatBackend
from network import (
    Dynamics,
    Partition,
    assemble_fixed,
    assemble_switching,
    characteristic_matrix,
    coarsest_ep,
    is_equitable,
    quotient_laplacian,
)
from processors.controllability_analyzer import ctrb, kalman_matrix, switching_ctrb, theorem1_bound
from processors.union_analyzer import union_analysis

NONZERO = [v for v in range(-3, 4) if v != 0]


@st.composite
def symmetric_weights(draw, d, low=-3, high=3):
    upper = {(r, c): draw(st.integers(low, high)) for r in range(d) for c in range(r, d)}
    if not any(upper.values()):
        upper[0, 0] = draw(st.sampled_from(NONZERO))
    return [[upper[min(r, c), max(r, c)] for c in range(d)] for r in range(d)]


@st.composite
def graph_data(draw, max_n=6, max_d=3, max_dn=18):
    n = draw(st.integers(2, max_n))
    d = draw(st.integers(1, max(1, min(max_d, max_dn // n))))
    pairs = [(i, j) for i in range(n) for j in range(i + 1, n)]
    chosen = draw(st.lists(st.sampled_from(pairs), unique=True, max_size=len(pairs)))
    edges = [(i, j, draw(st.sampled_from('+-')), draw(symmetric_weights(d))) for i, j in chosen]
    leaders = draw(st.lists(st.integers(0, n - 1), min_size=1, max_size=2, unique=True))
    return n, d, edges, leaders


@st.composite
def twin_graph_data(draw, max_m=2, max_d=3):
    """Leader 0 with two identical copies of a small graph hanging off it."""
    m = draw(st.integers(1, max_m))
    d = draw(st.integers(1, max_d))
    edges = []
    for u in range(m):
        if draw(st.booleans()) or u == 0:
            sign, weight = draw(st.sampled_from('+-')), draw(symmetric_weights(d))
            edges.extend([(0, 1 + u, sign, weight), (0, 1 + m + u, sign, weight)])
    for u in range(m):
        for v in range(u + 1, m):
            if draw(st.booleans()):
                sign, weight = draw(st.sampled_from('+-')), draw(symmetric_weights(d))
                edges.extend([(1 + u, 1 + v, sign, weight), (1 + m + u, 1 + m + v, sign, weight)])
    return 1 + 2 * m, d, edges, [0]


def integer_matrix(rows, cols, low=-2, high=2):
    return st.lists(st.lists(st.integers(low, high), min_size=cols, max_size=cols), min_size=rows, max_size=rows)


@st.composite
def dynamics_data(draw, d, square_c=False):
    p = draw(st.integers(1, d))
    q = d if square_c else draw(st.integers(1, d))
    return (draw(integer_matrix(d, d)), draw(integer_matrix(d, p)), draw(integer_matrix(p, d)),
            draw(integer_matrix(d, q)))


@st.composite
def system_data(draw, graphs=None, square_c=False):
    data = draw(graphs if graphs is not None else graph_data())
    return data, draw(dynamics_data(data[1], square_c=square_c))


@st.composite
def switching_data(draw, max_n=5, max_d=2):
    """Members share n, d and leaders; each pair keeps one sign across members."""
    n = draw(st.integers(2, max_n))
    d = draw(st.integers(1, max_d))
    pairs = [(i, j) for i in range(n) for j in range(i + 1, n)]
    signs = {pair: draw(st.sampled_from('+-')) for pair in pairs}
    members = []
    for _ in range(draw(st.integers(2, 3))):
        chosen = draw(st.lists(st.sampled_from(pairs), unique=True, max_size=len(pairs)))
        members.append([(i, j, signs[i, j], draw(symmetric_weights(d))) for i, j in chosen])
    leaders = draw(st.lists(st.integers(0, n - 1), min_size=1, max_size=2, unique=True))
    return n, d, members, leaders, draw(dynamics_data(d))


def set_partitions(items):
    """Every partition of items, as lists of cells."""
    if not items:
        yield []
        return
    first, rest = items[0], items[1:]
    for split in set_partitions(rest):
        for k in range(len(split)):
            yield split[:k] + [[first] + split[k]] + split[k + 1:]
        yield [[first]] + split


def build(backend, data):
    n, d, edges, leaders = data
    return build_graph(backend, n, d, edges, leaders)


def build_dynamics(backend, rows):
    return Dynamics(*(backend.matrix(m) for m in rows))


@given(st.one_of(twin_graph_data(), graph_data()))
@settings(max_examples=200, deadline=None)
def test_equitable_partition_commutes_with_laplacian(data):
    backend = ExactBackend()
    g = build(backend, data)
    pi = coarsest_ep(g)
    p = characteristic_matrix(pi, g.d, backend).p
    assert backend.equal(g.laplacian() @ p, p @ quotient_laplacian(g, pi))


@given(twin_graph_data())
@settings(max_examples=50, deadline=None)
def test_mirrored_copies_share_cells(data):
    g = build(ExactBackend(), data)
    pi = coarsest_ep(g)
    m = (g.n - 1) // 2
    assert all(pi.cell_of(1 + u) == pi.cell_of(1 + m + u) for u in range(m))


@given(graph_data(max_d=2, max_dn=12))
@settings(max_examples=40, deadline=None)
def test_coarsest_ep_is_coarser_than_every_equitable_refinement(data):
    g = build(ExactBackend(), data)
    pi = coarsest_ep(g)
    assert is_equitable(g, pi)
    leaders = [[v] for v in g.leaders]
    for split in set_partitions(list(g.followers)):
        candidate = Partition(leaders + split, g.n)
        if is_equitable(g, candidate):
            assert candidate.refines(pi)


@given(system_data(graphs=graph_data(max_dn=12)))
@settings(max_examples=200, deadline=None)
def test_fixpoint_matches_kalman_rank(data):
    backend = ExactBackend()
    graph, dyn = data
    sys = assemble_fixed(build(backend, graph), build_dynamics(backend, dyn))
    assert ctrb(sys).subspace_dim == backend.rank(kalman_matrix(sys))


@given(system_data(graphs=graph_data(max_n=4, max_d=2, max_dn=8)))
@settings(max_examples=200, deadline=None)
def test_backends_agree_on_verdict(data):
    graph, dyn = data
    verdicts = []
    for backend in (ExactBackend(), FloatBackend()):
        sys = assemble_fixed(build(backend, graph), build_dynamics(backend, dyn))
        verdict = ctrb(sys)
        verdicts.append((verdict.controllable, verdict.subspace_dim))
    assert verdicts[0] == verdicts[1]


@given(switching_data())
@settings(max_examples=200, deadline=None)
def test_controllable_union_implies_controllable_switching(data):
    backend = ExactBackend()
    n, d, members, leaders, dyn = data
    graphs = [build_graph(backend, n, d, edges, leaders) for edges in members]
    report = union_analysis(graphs, build_dynamics(backend, dyn))
    if report.union_verdict.controllable:
        assert report.switched_verdict.controllable
    assert report.union_implies_switched.consistent
    assert report.union_verdict.subspace_dim <= report.switched_verdict.subspace_dim


@given(system_data(graphs=st.one_of(twin_graph_data(), graph_data(max_n=5, max_d=2)), square_c=True))
@settings(max_examples=200, deadline=None)
def test_controllable_systems_have_trivial_cells(data):
    backend = ExactBackend()
    graph, dyn = data
    assume(backend.is_invertible(backend.matrix(dyn[3])))
    g = build(backend, graph)
    dynamics = build_dynamics(backend, dyn)
    report = theorem1_bound(g, dynamics)
    assert report.applicable
    assert report.contained
    assert report.achieved_dim <= report.bound
    if report.verdict.controllable:
        assert report.partition_used.is_discrete
    assert report.uncontrollable_by_partition == (not report.partition_used.is_discrete)


@given(switching_data(max_n=4))
@settings(max_examples=100, deadline=None)
def test_adding_members_never_shrinks_switching_subspace(data):
    backend = ExactBackend()
    n, d, members, leaders, dyn = data
    graphs = [build_graph(backend, n, d, edges, leaders) for edges in members]
    dynamics = build_dynamics(backend, dyn)
    dims = [switching_ctrb(assemble_switching(graphs[:t], dynamics)).subspace_dim for t in range(1, len(graphs) + 1)]
    assert dims == sorted(dims)
    assert dims[0] >= ctrb(assemble_fixed(graphs[0], dynamics)).subspace_dim
