"""Oracle and near-oracle subgroup constructors."""

import numpy as np
import pytest

from nos.construct import (
    InfeasibleOrderError,
    greedy_near_oracle,
    iota_two_sample,
    oracle_orthogonal,
    oracle_signflip,
    two_adic_valuation,
    two_sample_oracle,
)
from nos.flipcore import subgroup_from_basis_masks
from nos.leak import Direction, leak_summary


def test_two_adic_valuation():
    assert two_adic_valuation(1) == 0
    assert two_adic_valuation(6) == 1
    assert two_adic_valuation(48) == 4
    with pytest.raises(ValueError):
        two_adic_valuation(0)


@pytest.mark.parametrize("n,k", [(2, 1), (4, 2), (8, 3), (12, 2), (20, 2), (96, 5)])
def test_oracle_signflip_zero_leak(n, k):
    s = oracle_signflip(n, k)
    assert s.order == 1 << k
    summ = leak_summary(s)
    assert summ.delta == 0.0 and summ.delta_abs == 0.0
    # every non-identity element flips exactly half the coordinates
    assert all(e.flip_count() == n // 2 for e in s.elements[1:])


def test_oracle_signflip_infeasible():
    with pytest.raises(InfeasibleOrderError):
        oracle_signflip(6, 2)  # 4 does not divide 6
    with pytest.raises(InfeasibleOrderError):
        oracle_signflip(3, 1)


def test_oracle_signflip_n4_is_walsh():
    s = oracle_signflip(4, 2)
    assert s.element_masks() == [0b0000, 0b0110, 0b1010, 0b1100]


def test_greedy_reaches_target_order():
    s = greedy_near_oracle(6, 8, seed=0)
    assert s.n == 6 and s.order == 8
    # order 8 is beyond the oracle bound for n=6, so some leak is unavoidable
    assert leak_summary(s).delta_abs > 0.0


def test_greedy_keeps_oracle_when_reachable():
    s = greedy_near_oracle(8, 8, seed=1)
    assert s.order == 8
    assert leak_summary(s).delta_abs == 0.0


def test_greedy_is_seed_deterministic():
    a = greedy_near_oracle(7, 8, seed=42)
    b = greedy_near_oracle(7, 8, seed=42)
    assert a == b


def test_greedy_objective_delta_allows_negative_leak():
    s = greedy_near_oracle(6, 8, objective="delta", seed=3)
    summ = leak_summary(s)
    assert summ.delta <= summ.delta_abs


def test_greedy_validation():
    with pytest.raises(InfeasibleOrderError):
        greedy_near_oracle(4, 3)
    with pytest.raises(InfeasibleOrderError):
        greedy_near_oracle(3, 16)
    with pytest.raises(ValueError):
        greedy_near_oracle(4, 2, init=subgroup_from_basis_masks(4, [1, 2, 4]))


def test_oracle_orthogonal_columns():
    iota = Direction.uniform(6)
    rep = oracle_orthogonal(6, 4, iota)
    assert rep.columns.shape == (6, 4)
    assert np.allclose(rep.iota, iota.coords, atol=1e-12)
    gram = rep.columns.T @ rep.columns
    assert np.allclose(gram, np.eye(4), atol=1e-10)  # zero leak: orthonormal images


def test_oracle_orthogonal_any_order_up_to_n():
    rep = oracle_orthogonal(5, 5, Direction.uniform(5))
    assert rep.M == 5
    with pytest.raises(InfeasibleOrderError):
        oracle_orthogonal(5, 6, Direction.uniform(5))


def test_iota_two_sample():
    iota = iota_two_sample(2, 3)
    assert iota.n == 5
    assert np.allclose(np.sqrt(5) * iota.coords, [1, 1, -1, -1, -1])
    with pytest.raises(ValueError):
        iota_two_sample(0, 3)


@pytest.mark.parametrize("m", [2, 4, 8])
def test_two_sample_oracle_zero_inner_products(m):
    rep = two_sample_oracle(m, m)
    n = 2 * m
    assert rep.n == n and rep.M == n // 2
    iota = iota_two_sample(m, m)
    # inner products computed in integer arithmetic: entries are +-1/sqrt(n)
    base_signs = np.sign(iota.coords).astype(int)
    for j in range(1, rep.M):
        col_signs = np.sign(rep.columns[:, j]).astype(int)
        assert int(np.sum(col_signs * base_signs)) == 0


def test_two_sample_oracle_requires_balance():
    with pytest.raises(ValueError):
        two_sample_oracle(3, 5)


def test_two_sample_oracle_rejects_bad_base():
    base = subgroup_from_basis_masks(4, [0b0001])  # leaky: flips one coordinate
    with pytest.raises(ValueError):
        two_sample_oracle(2, 2, base=base)
