"""Tests for the linear-algebra backends and subspace helpers."""

from fractions import Fraction

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from linalg import Definiteness, ExactBackend, FloatBackend, contains, get_backend, invariant_image_fixpoint, is_invariant
from linalg import resolve_backend_name
from utils.errors import DimensionMismatchError


def test_rank_of_invertible_weight(backend):
    assert backend.rank(backend.matrix([[1, 2], [2, 1]])) == 2


def test_rank_of_empty_matrix(backend):
    assert backend.rank(backend.zeros(3, 0)) == 0


def test_column_space_of_repeated_column(backend):
    space = backend.column_space(backend.matrix([[1, 1], [1, 1]]))
    assert space.dim == 1
    v = backend.to_python(space.basis)
    assert v[0][0] != 0
    assert v[0][0] == pytest.approx(v[1][0])


def test_exact_column_space_is_reduced_echelon(exact):
    space = exact.column_space(exact.matrix([[2, 4], [1, 2], [0, 0]]))
    assert exact.to_python(space.basis) == [[Fraction(1)], [Fraction(1, 2)], [Fraction(0)]]


def test_solve_right_outside_image(backend):
    c = backend.matrix([[1], [1]])
    assert backend.solve_right(c, backend.matrix([[1], [0]])) is None


def test_solve_right_inside_image(backend):
    c = backend.matrix([[1, 0], [1, 0], [0, 2]])
    rhs = backend.matrix([[3], [3], [4]])
    x = backend.solve_right(c, rhs)
    assert x is not None
    assert backend.equal(c @ x, rhs)


def test_solve_right_row_mismatch(exact):
    with pytest.raises(DimensionMismatchError):
        exact.solve_right(exact.eye(2), exact.zeros(3, 1))


@pytest.mark.parametrize('rows, expected', [
    ([[2, 1], [1, 2]], Definiteness.POSITIVE_DEFINITE),
    ([[1, 1], [1, 1]], Definiteness.POSITIVE_SEMIDEFINITE),
    ([[1, 2], [2, 1]], Definiteness.INDEFINITE),
    ([[-2, 0], [0, -1]], Definiteness.NEGATIVE_DEFINITE),
    ([[0, 0], [0, 0]], Definiteness.ZERO),
])
def test_definiteness(backend, rows, expected):
    assert backend.definiteness(backend.matrix(rows)) is expected


def test_exact_scalar_parses_fractions(exact):
    assert exact.scalar('3/4') == exact.scalar(Fraction(3, 4))
    assert exact.to_python(exact.matrix([['1/3', 2]])) == [[Fraction(1, 3), Fraction(2)]]


def test_ragged_rows_rejected(backend):
    with pytest.raises(DimensionMismatchError):
        backend.matrix([[1, 2], [3]])


def test_float_freeze_is_read_only(flt):
    frozen = flt.freeze(flt.eye(2))
    with pytest.raises(ValueError):
        frozen[0, 0] = 5.0


def test_float_absolute_tolerance():
    loose = FloatBackend(float_tolerance=1e-3)
    m = np.array([[1.0, 0.0], [0.0, 1e-6]])
    assert loose.rank(m) == 1
    assert FloatBackend().rank(m) == 2


def test_fixpoint_follows_shift(backend):
    shift = backend.matrix([[0, 1], [0, 0]])
    from_top = invariant_image_fixpoint([shift], backend.column_space(backend.matrix([[1], [0]])), backend)
    from_bottom = invariant_image_fixpoint([shift], backend.column_space(backend.matrix([[0], [1]])), backend)
    assert from_top.dim == 1
    assert from_bottom.dim == 2


def test_fixpoint_with_several_maps(backend):
    shift_up = backend.matrix([[0, 1, 0], [0, 0, 1], [0, 0, 0]])
    seed = backend.column_space(backend.matrix([[1], [0], [0]]))
    assert invariant_image_fixpoint([shift_up], seed, backend).dim == 1
    assert invariant_image_fixpoint([shift_up, shift_up.T], seed, backend).dim == 3


def test_fixpoint_rejects_wrong_map_shape(exact):
    seed = exact.column_space(exact.eye(2))
    with pytest.raises(DimensionMismatchError):
        invariant_image_fixpoint([exact.eye(3)], seed, exact)


def test_contains_and_invariance(exact):
    plane = exact.column_space(exact.matrix([[1, 0], [0, 1], [0, 0]]))
    assert contains(exact, plane, exact.matrix([[3], [-1], [0]]))
    assert not contains(exact, plane, exact.matrix([[0], [0], [1]]))
    assert is_invariant(exact, plane, [exact.matrix([[1, 2, 0], [3, 4, 0], [0, 0, 5]])])
    assert not is_invariant(exact, plane, [exact.matrix([[0, 0, 0], [0, 0, 0], [1, 0, 0]])])


def test_block_helpers(exact):
    m = exact.block_diag([exact.matrix([[1, 2], [3, 4]]), exact.matrix([[5]])])
    assert m.shape == (3, 3)
    assert exact.to_python(exact.block(m, 0, 0, 2, 2)) == [[1, 2], [3, 4]]
    assert exact.is_invertible(m)
    assert not exact.is_symmetric(m)


@pytest.mark.parametrize('requested, rational, expected', [
    ('auto', True, 'exact'),
    ('auto', False, 'float'),
    ('float', True, 'float'),
    ('exact', False, 'exact'),
])
def test_resolve_backend_name(requested, rational, expected):
    assert resolve_backend_name(requested, rational) == expected


def test_get_backend_unknown():
    with pytest.raises(ValueError):
        get_backend('quad')


@st.composite
def integer_matrices(draw, max_size=12):
    rows = draw(st.integers(1, max_size))
    cols = draw(st.integers(1, max_size))
    return draw(st.lists(st.lists(st.integers(-10, 10), min_size=cols, max_size=cols), min_size=rows, max_size=rows))


@given(integer_matrices())
@settings(max_examples=150, deadline=None)
def test_backends_agree_on_rank(rows):
    assert ExactBackend().rank(ExactBackend().matrix(rows)) == FloatBackend().rank(FloatBackend().matrix(rows))
