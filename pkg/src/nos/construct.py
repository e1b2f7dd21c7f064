"""Constructors for oracle and near-oracle subgroups.

Covers four routes to low-leak transformation sets:

* an explicit alternating-block (Walsh pattern) construction giving
  zero-leak sign-flip subgroups of order 2^k whenever 2^k divides n;
* a seeded greedy search that repeatedly doubles a subgroup while
  minimizing the leak, for orders where no exact construction exists;
* a cyclic-shift-plus-reflection construction of zero-leak subgroups of
  the full orthogonal group, for any order up to n;
* the reduction of the balanced two-sample comparison to sign-flipping,
  producing the matrix representation of a zero-leak permutation
  subgroup.
"""

from __future__ import annotations

import math
import warnings

import numpy as np

from .flipcore import (
    SignFlipElement,
    SignFlipSubgroup,
    extend,
    span,
    subgroup_from_basis_masks,
)
from .leak import Direction, MatrixRepresentation, matrix_representation


class InfeasibleOrderError(ValueError):
    """The requested subgroup order cannot be achieved."""


def two_adic_valuation(n: int) -> int:
    """Multiplicity of 2 in the prime factorization of n."""
    if n < 1:
        raise ValueError("n must be positive")
    return (n & -n).bit_length() - 1


def _walsh_mask(n: int, j: int) -> int:
    """Alternating sign-blocks of length n / 2^j: bit i set iff block index odd."""
    block = n >> j
    mask = 0
    for i in range(n):
        if (i // block) & 1:
            mask |= 1 << i
    return mask


def oracle_signflip(n: int, k: int) -> SignFlipSubgroup:
    """Zero-leak sign-flip subgroup of order 2^k for the uniform direction.

    Exists iff k does not exceed the number of 2s in the prime
    factorization of n. Every non-identity element flips exactly half the
    coordinates, so its leak is exactly zero.
    """
    if k < 0:
        raise ValueError("k must be non-negative")
    l = two_adic_valuation(n)
    if k > l:
        raise InfeasibleOrderError(
            f"no zero-leak subgroup of order 2^{k} for n={n}: "
            f"the order is capped at 2^{l} by the prime factorization of n"
        )
    return subgroup_from_basis_masks(n, [_walsh_mask(n, j) for j in range(1, k + 1)])


def _default_init(n: int, target_order: int) -> SignFlipSubgroup:
    k = min(two_adic_valuation(n), target_order.bit_length() - 1)
    return oracle_signflip(n, k)


def greedy_near_oracle(
    n: int,
    target_order: int,
    objective: str = "delta_abs",
    init: SignFlipSubgroup | None = None,
    candidate_budget: int = 100_000,
    seed=None,
) -> SignFlipSubgroup:
    """Greedy doubling search for a low-leak subgroup of a given order.

    Each round samples up to ``candidate_budget`` elements uniformly
    without replacement from the complement of the current subgroup,
    scores the doubled subgroup each would produce, and keeps an argmin of
    the objective ("delta" or "delta_abs", on the uniform direction). Ties
    are broken by the lexicographically smallest sorted element list, so
    the result is deterministic given the seed.
    """
    if objective not in ("delta", "delta_abs"):
        raise ValueError(f"unknown objective {objective!r}")
    if target_order < 1 or target_order & (target_order - 1):
        raise InfeasibleOrderError(f"target order {target_order} is not a power of two")
    if target_order > (1 << n):
        raise InfeasibleOrderError(f"target order {target_order} exceeds the group order 2^{n}")
    if candidate_budget < 1:
        raise ValueError("candidate budget must be positive")
    if init is None:
        init = _default_init(n, target_order)
    if not isinstance(init, SignFlipSubgroup) or init.n != n:
        raise ValueError("init must be a sign-flip subgroup of matching dimension")
    if init.order > target_order:
        raise ValueError(f"init order {init.order} exceeds target {target_order}")

    rng = np.random.default_rng(seed)
    s = init
    while s.order < target_order:
        elems = s.element_masks()
        elem_set = set(elems)
        # scaled leak values are exact integers n - 2*popcount on the n axis
        cur_max = max((n - 2 * e.bit_count() for e in elems[1:]), default=-n - 1)
        cur_min = min((n - 2 * e.bit_count() for e in elems[1:]), default=n + 1)

        total_outside = (1 << n) - s.order
        budget = min(candidate_budget, total_outside)
        candidates = _sample_masks_outside(rng, n, elem_set, budget)

        best = None  # (objective value, candidate mask, sorted new elements)
        for r in candidates:
            new_vals = [n - 2 * (r ^ e).bit_count() for e in elems]
            hi = max(cur_max, max(new_vals))
            if objective == "delta":
                score = hi
            else:
                lo = min(cur_min, min(new_vals))
                score = max(hi, -lo)
            if best is None or score < best[0]:
                best = (score, r, None)
            elif score == best[0]:
                # tie-break on the sorted element list of the doubled subgroup
                key_new = _extended_key(elems, r)
                key_best = best[2] if best[2] is not None else _extended_key(elems, best[1])
                if key_new < key_best:
                    best = (score, r, key_new)
                else:
                    best = (best[0], best[1], key_best)
        s = extend(s, SignFlipElement(n, int(best[1])))
    return s


def _extended_key(elems: list[int], r: int) -> tuple[int, ...]:
    return tuple(sorted(elems + [r ^ e for e in elems]))


def _sample_masks_outside(rng: np.random.Generator, n: int, exclude: set[int], count: int) -> list[int]:
    """Uniform sample without replacement from all n-bit masks not in ``exclude``."""
    universe = 1 << n
    if universe <= 1 << 22:
        pool = np.setdiff1d(np.arange(universe, dtype=np.int64), np.fromiter(exclude, dtype=np.int64))
        picked = rng.choice(pool, size=min(count, len(pool)), replace=False)
        return [int(v) for v in picked]
    # sparse regime: rejection sampling with a seen-set
    seen: set[int] = set()
    out: list[int] = []
    while len(out) < count:
        words = rng.integers(0, 2, size=(count, n), dtype=np.int64)
        for row in words:
            m = 0
            for i, b in enumerate(row):
                if b:
                    m |= 1 << i
            if m in exclude or m in seen:
                continue
            seen.add(m)
            out.append(m)
            if len(out) == count:
                break
    return out


def oracle_orthogonal(n: int, p: int, iota: Direction) -> MatrixRepresentation:
    """Matrix representation of a zero-leak orthogonal subgroup of order p.

    The cyclic shift group on the first p coordinates has zero leak with
    respect to e_1; conjugating by the reflection that exchanges e_1 and
    iota transports it to the requested direction. The returned columns
    are p orthonormal vectors with column 0 equal to iota.
    """
    if not 1 <= p <= n:
        raise InfeasibleOrderError(f"order p={p} must satisfy 1 <= p <= n={n}")
    if iota.n != n:
        raise ValueError(f"direction has n={iota.n}, expected {n}")
    e1 = np.zeros(n)
    e1[0] = 1.0
    v = e1 - iota.coords
    vnorm2 = float(v @ v)
    if vnorm2 < 1e-24:
        q = np.eye(n)
    else:
        q = np.eye(n) - 2.0 * np.outer(v, v) / vnorm2
    return MatrixRepresentation(n, p, q[:, :p])


def iota_two_sample(m1: int, m2: int) -> Direction:
    """Unit contrast direction for a two-sample mean comparison."""
    if m1 < 1 or m2 < 1:
        raise ValueError("both group sizes must be positive")
    n = m1 + m2
    c = 1.0 / math.sqrt(n)
    return Direction(n, np.concatenate([np.full(m1, c), np.full(m2, -c)]))


def two_sample_oracle(m1: int, m2: int, base: SignFlipSubgroup | None = None) -> MatrixRepresentation:
    """Matrix representation of a zero-leak permutation subgroup for two samples.

    ``base`` must be a zero-leak sign-flip subgroup for the uniform
    direction that contains the element negating exactly the second
    sample. Dropping that element from a maximal subgroup halves the
    order; the remaining columns, read against the two-sample contrast
    direction, are the images of iota under a permutation subgroup whose
    non-identity elements all have exactly zero leak.
    """
    if m1 != m2:
        raise ValueError(f"group sizes must match, got {m1} and {m2}")
    n = m1 + m2
    iota = iota_two_sample(m1, m2)
    if base is None:
        base = oracle_signflip(n, two_adic_valuation(n))
    if base.n != n:
        raise ValueError(f"base subgroup has n={base.n}, expected {n}")
    for e in base.elements[1:]:
        if 2 * e.flip_count() != n:
            raise ValueError("base must be a zero-leak subgroup for the uniform direction")

    r_star = ((1 << n) - 1) ^ ((1 << m1) - 1)  # negate the second sample
    star = SignFlipElement(n, r_star)
    if star not in base:
        raise ValueError("base contains no element matching the two-sample split")

    # maximal subgroup avoiding r_star: kernel of the coordinate functional
    # that is 1 on r_star's expansion in the reduced basis
    coeffs = []
    v = r_star
    for b in base.basis:
        low = b.mask & -b.mask
        if v & low:
            coeffs.append(True)
            v ^= b.mask
        else:
            coeffs.append(False)
    j = coeffs.index(True)
    kernel_masks = [
        b.mask if not coeffs[i] else b.mask ^ base.basis[j].mask
        for i, b in enumerate(base.basis)
        if i != j
    ]
    sub = span([SignFlipElement(n, m) for m in kernel_masks], n=n)
    if sub.order == 1:
        warnings.warn(
            "only the trivial subgroup avoids the two-sample split element; "
            "a non-trivial construction needs m1 = m2 even",
            stacklevel=2,
        )
    rep = matrix_representation(sub, iota)
    # zero inner products are exact here: entries are +-1/sqrt(n)
    signs = np.sign(iota.coords).astype(int)
    for jcol, e in enumerate(sub.elements[1:], start=1):
        col_signs = np.array([-1 if (e.mask >> i) & 1 else 1 for i in range(n)]) * signs
        if int(col_signs.sum()) != 0:
            raise AssertionError(f"column {jcol} has nonzero leak against the contrast")
    return rep
