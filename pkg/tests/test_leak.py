"""Leak values, leak summaries, and matrix representations."""

import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from nos.flipcore import SignFlipElement, full_group, subgroup_from_basis_masks
from nos.leak import (
    Direction,
    MatrixRepresentation,
    TrivialSubgroupError,
    delta_from_matrix,
    leak_summary,
    leak_value,
    matrix_representation,
    negate_closure,
)


def test_direction_validation():
    with pytest.raises(ValueError):
        Direction(2, np.array([1.0, 1.0]))  # not unit norm
    d = Direction.uniform(4)
    assert d.is_uniform
    assert np.allclose(d.coords, 0.5)
    nd = Direction.from_vector([3.0, 4.0], normalize=True)
    assert np.allclose(nd.coords, [0.6, 0.8])
    with pytest.raises(ValueError):
        Direction.from_vector([0.0, 0.0], normalize=True)


def test_direction_is_immutable():
    d = Direction.uniform(3)
    with pytest.raises(ValueError):
        d.coords[0] = 2.0


def test_leak_value_uniform_is_exact():
    # flipping k of n coordinates gives (n - 2k)/n exactly
    for n in (2, 5, 9):
        iota = Direction.uniform(n)
        for mask in range(1 << n):
            e = SignFlipElement(n, mask)
            assert leak_value(e, iota) == (n - 2 * e.flip_count()) / n


def test_leak_value_general_direction():
    iota = Direction(3, np.array([0.6, 0.8, 0.0]))
    e = SignFlipElement(3, 0b001)  # flips the first coordinate
    assert leak_value(e, iota) == pytest.approx(-0.36 + 0.64, abs=1e-15)


def test_oracle_n2_summary():
    s = subgroup_from_basis_masks(2, [0b01])
    summ = leak_summary(s)
    assert summ.scaled_distribution == (2, 0)
    assert summ.delta == 0.0 and summ.delta_abs == 0.0


def test_full_group_n2_summary():
    summ = leak_summary(full_group(2))
    assert sorted(summ.scaled_distribution) == [-2, 0, 0, 2]
    assert summ.delta == 0.0
    assert summ.delta_abs == 1.0  # -I contributes |iota' (-I) iota| = 1


def test_trivial_subgroup_rejected():
    with pytest.raises(TrivialSubgroupError):
        leak_summary(subgroup_from_basis_masks(3, []))


def test_matrix_representation_n2_oracle():
    rep = matrix_representation(subgroup_from_basis_masks(2, [0b10]))
    assert np.allclose(math.sqrt(2) * rep.columns, [[1, 1], [1, -1]])
    assert np.allclose(rep.iota, Direction.uniform(2).coords)


def test_matrix_representation_duplicate_columns_rejected():
    # iota with a zero coordinate + a flip confined to it -> identical columns
    iota = Direction(2, np.array([1.0, 0.0]))
    s = subgroup_from_basis_masks(2, [0b10])
    with pytest.raises(ValueError, match="duplicate"):
        matrix_representation(s, iota)


def test_leak_summary_from_representation_matches_subgroup():
    s = subgroup_from_basis_masks(4, [0b0110, 0b1111])
    a = leak_summary(s)
    b = leak_summary(matrix_representation(s))
    assert a.delta == pytest.approx(b.delta, abs=1e-12)
    assert a.delta_abs == pytest.approx(b.delta_abs, abs=1e-12)
    assert sorted(a.distribution) == pytest.approx(sorted(b.distribution), abs=1e-12)


def test_delta_from_matrix_orthonormal_columns():
    cols = np.eye(4)[:, :3]
    rep = MatrixRepresentation(4, 3, cols)
    assert delta_from_matrix(rep) == 0.0


def test_negate_closure():
    s = subgroup_from_basis_masks(4, [0b0011])
    ns = negate_closure(s)
    assert ns.order == 4
    assert SignFlipElement(4, 0b1111) in ns
    # delta of the closure equals delta_abs of the original
    assert leak_summary(ns).delta == leak_summary(s).delta_abs


@settings(max_examples=60)
@given(n=st.integers(min_value=2, max_value=8), data=st.data())
def test_leak_summary_bounds_and_scaling(n, data):
    gens = data.draw(
        st.lists(st.integers(min_value=1, max_value=(1 << n) - 1), min_size=1, max_size=3)
    )
    s = subgroup_from_basis_masks(n, gens)
    summ = leak_summary(s)
    assert summ.order == s.order
    assert summ.distribution[0] == 1.0  # identity leak
    assert -1.0 <= summ.delta <= 1.0 and 0.0 <= summ.delta_abs <= 1.0
    assert summ.delta_abs >= summ.delta or summ.delta < 0
    for v, sv in zip(summ.distribution, summ.scaled_distribution):
        assert sv == n * v or sv == pytest.approx(n * v, abs=1e-12)
        assert isinstance(sv, int)  # exact integers on the scaled axis
