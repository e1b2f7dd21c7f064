"""Exhaustive enumeration and counting of sign-flip subgroups for small n.

Subgroups of the sign-flipping group are the GF(2)-linear subspaces of
the n-bit mask space, so rank-p subgroups are counted by the Gaussian
(2-)binomial coefficient and can be enumerated exactly once each through
their unique reduced echelon basis: choose the pivot bits, then fill the
free entries. The leak census groups subgroups by the exact multiset of
their n-scaled leak values (integers n - 2*popcount for the uniform
direction), which collapses the subgroup count dramatically.

The heavy path is vectorized with numpy per pivot set; NOS_THREADS > 1
additionally fans pivot sets out over a process pool.
"""

from __future__ import annotations

import os
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field
from itertools import combinations, product
from typing import Iterator

import numpy as np

from .flipcore import SignFlipSubgroup, subgroup_from_basis_masks
from .leak import Direction, leak_summary

#: above this dimension enumeration will not finish at desk scale
ENUMERATION_GUARD_N = 12
_CHUNK_ROWS = 1 << 20


class EnumerationGuardError(ValueError):
    """Enumeration requested beyond the combinatorial-explosion guard."""


def _check_guard(n: int, allow_large: bool):
    if n > ENUMERATION_GUARD_N and not allow_large:
        raise EnumerationGuardError(
            f"n={n} exceeds the enumeration guard ({ENUMERATION_GUARD_N}); "
            "pass allow_large=True if you accept a very long run"
        )


def gaussian_binomial(n: int, p: int) -> int:
    """Number of rank-p subgroups in dimension n (2-binomial coefficient), exact."""
    if p < 0 or n < 0:
        raise ValueError("n and p must be non-negative")
    if p > n:
        raise ValueError(f"p={p} exceeds n={n}")
    num = 1
    den = 1
    for i in range(p):
        num *= (1 << (n - i)) - 1
        den *= (1 << (p - i)) - 1
    return num // den


def count_all_subgroups(n: int) -> int:
    """Total number of subgroups across all ranks, exact."""
    if n < 1:
        raise ValueError("n must be positive")
    return sum(gaussian_binomial(n, p) for p in range(n + 1))


def _free_positions(n: int, pivots: tuple[int, ...]) -> list[list[int]]:
    """Free bit positions per basis row, for the reduced echelon form."""
    pivot_set = set(pivots)
    return [[j for j in range(q + 1, n) if j not in pivot_set] for q in pivots]


def _row_values(pivot: int, free: list[int]) -> list[int]:
    """All masks a basis row can take: pivot bit plus any subset of free bits."""
    vals = [1 << pivot]
    for j in free:
        vals += [v | (1 << j) for v in vals]
    return vals


def enumerate_subgroups(n: int, p: int, allow_large: bool = False) -> Iterator[SignFlipSubgroup]:
    """Yield every rank-p subgroup exactly once (canonical basis order)."""
    _check_guard(n, allow_large)
    if not 0 <= p <= n:
        raise ValueError(f"rank p={p} outside [0, {n}]")
    if p == 0:
        yield subgroup_from_basis_masks(n, [])
        return
    for pivots in combinations(range(n), p):
        frees = _free_positions(n, pivots)
        for rows in product(*(_row_values(q, f) for q, f in zip(pivots, frees))):
            yield subgroup_from_basis_masks(n, list(rows))


def _span_masks(rows: list[int]) -> list[int]:
    elems = [0]
    for r in rows:
        elems += [e ^ r for e in elems]
    return elems


def _pivotset_batches(n: int, pivots: tuple[int, ...]):
    """Yield (head_rows, tail_value_arrays, elements) for one pivot set.

    ``elements`` is an int16 array of shape (K, 2^p) holding all group
    elements of K subgroups; the Cartesian product over free entries is
    chunked so K stays below _CHUNK_ROWS.
    """
    p = len(pivots)
    frees = _free_positions(n, pivots)
    value_lists = [_row_values(q, f) for q, f in zip(pivots, frees)]
    sizes = [len(v) for v in value_lists]

    # head rows are iterated in Python so the vectorized tail stays bounded
    t = 0
    tail_k = 1
    for s in sizes:
        tail_k *= s
    while tail_k > _CHUNK_ROWS:
        tail_k //= sizes[t]
        t += 1

    tail_lists = value_lists[t:]
    tail_sizes = sizes[t:]
    k = 1
    for s in tail_sizes:
        k *= s

    dtype = np.int16 if n <= 14 else np.int32

    # tail element table, shared across head choices
    elems_tail = np.zeros((k, 1), dtype=dtype)
    reps_after = k
    for vals, s in zip(tail_lists, tail_sizes):
        reps_after //= s
        col = np.tile(np.repeat(np.asarray(vals, dtype=dtype), reps_after), k // (s * reps_after))
        elems_tail = np.concatenate([elems_tail, elems_tail ^ col[:, None]], axis=1)

    for head in product(*value_lists[:t]):
        head_span = np.asarray(_span_masks(list(head)), dtype=dtype)
        full = (elems_tail[:, :, None] ^ head_span[None, None, :]).reshape(k, -1)
        yield list(head), tail_lists, full


def _decode_tail(flat: int, tail_lists: list[list[int]]) -> list[int]:
    rows = []
    for vals in reversed(tail_lists):
        rows.append(vals[flat % len(vals)])
        flat //= len(vals)
    return rows[::-1]


def _census_pivot_set(args):
    """Worker: distinct popcount-multiset keys for one pivot set.

    Returns (subgroup_count, {key_bytes: basis_masks_of_first_rep}).
    """
    n, pivots = args
    pop = np.array([bin(i).count("1") for i in range(1 << n)], dtype=np.int8)
    found: dict[bytes, tuple[int, ...]] = {}
    total = 0
    for head, tail_lists, elements in _pivotset_batches(n, pivots):
        total += elements.shape[0]
        counts = np.sort(pop[elements], axis=1)
        keys, first = np.unique(counts, axis=0, return_index=True)
        for key_row, idx in zip(keys, first):
            key = key_row.tobytes()
            if key not in found:
                found[key] = tuple(head + _decode_tail(int(idx), tail_lists))
    return total, found


def _pool_size() -> int:
    try:
        return max(1, int(os.environ.get("NOS_THREADS", "1")))
    except ValueError:
        return 1


def _map_pivot_sets(n: int, p: int):
    """Run the census worker over all pivot sets, possibly in parallel."""
    tasks = [(n, pivots) for pivots in combinations(range(n), p)]
    workers = min(_pool_size(), len(tasks))
    if workers > 1:
        with ProcessPoolExecutor(max_workers=workers) as pool:
            yield from pool.map(_census_pivot_set, tasks)
    else:
        yield from map(_census_pivot_set, tasks)


@dataclass
class LeakCensusReport:
    """Distinct leak distributions of sign-flip subgroups, by rank."""

    n: int
    uniform_iota: bool
    subgroup_counts: dict[int, int]
    distinct_counts: dict[int, int]
    representatives: list[dict] = field(repr=False, default_factory=list)

    @property
    def total_subgroups(self) -> int:
        return sum(self.subgroup_counts.values())

    @property
    def total_distinct(self) -> int:
        return sum(self.distinct_counts.values())

    def to_dict(self) -> dict:
        return {
            "n": self.n,
            "uniform_iota": self.uniform_iota,
            "subgroup_counts": {str(k): v for k, v in self.subgroup_counts.items()},
            "distinct_counts": {str(k): v for k, v in self.distinct_counts.items()},
            "total_subgroups": self.total_subgroups,
            "total_distinct": self.total_distinct,
            "representatives": self.representatives,
        }


def leak_census(
    n: int,
    iota: Direction | None = None,
    rank: int | None = None,
    allow_large: bool = False,
    with_representatives: bool = True,
) -> LeakCensusReport:
    """Group all subgroups (of one rank, or all ranks) by leak distribution.

    For the uniform direction the grouping key is the exact sorted integer
    multiset of scaled leak values; for a general direction values are
    compared after rounding at 1e-10.
    """
    _check_guard(n, allow_large)
    ranks = [rank] if rank is not None else list(range(n + 1))
    if rank is not None and not 0 <= rank <= n:
        raise ValueError(f"rank {rank} outside [0, {n}]")
    uniform = iota is None or iota.is_uniform

    subgroup_counts: dict[int, int] = {}
    distinct_counts: dict[int, int] = {}
    representatives: list[dict] = []

    for p in ranks:
        if p == 0:
            subgroup_counts[0] = 1
            distinct_counts[0] = 1
            if with_representatives:
                representatives.append(
                    {"rank": 0, "scaled_distribution": [n], "basis_masks": []}
                )
            continue
        if uniform:
            total = 0
            found: dict[bytes, tuple[int, ...]] = {}
            for sub_total, sub_found in _map_pivot_sets(n, p):
                total += sub_total
                for key, basis in sub_found.items():
                    found.setdefault(key, basis)
            subgroup_counts[p] = total
            distinct_counts[p] = len(found)
            if with_representatives:
                for key, basis in sorted(found.items()):
                    pops = np.frombuffer(key, dtype=np.int8)
                    scaled = sorted((n - 2 * int(c) for c in pops), reverse=True)
                    representatives.append(
                        {
                            "rank": p,
                            "scaled_distribution": scaled,
                            "basis_masks": list(basis),
                        }
                    )
        else:
            total = 0
            found_g: dict[tuple, SignFlipSubgroup] = {}
            for s in enumerate_subgroups(n, p, allow_large=allow_large):
                total += 1
                summ = leak_summary(s, iota)
                key = tuple(np.round(sorted(summ.scaled_distribution), 10))
                found_g.setdefault(key, s)
            subgroup_counts[p] = total
            distinct_counts[p] = len(found_g)
            if with_representatives:
                for key, s in sorted(found_g.items()):
                    representatives.append(
                        {
                            "rank": p,
                            "scaled_distribution": list(key),
                            "basis_masks": [b.mask for b in s.basis],
                        }
                    )

    return LeakCensusReport(
        n=n,
        uniform_iota=uniform,
        subgroup_counts=subgroup_counts,
        distinct_counts=distinct_counts,
        representatives=representatives if with_representatives else [],
    )


def oracle_census(n: int, allow_large: bool = False) -> list[int]:
    """Orders of zero-leak subgroups (uniform direction) found by full scan.

    The trivial subgroup always counts. Non-trivial zero-leak subgroups
    need every non-identity element to flip exactly half the coordinates,
    which caps the rank scan at the 2-adic valuation of n.
    """
    _check_guard(n, allow_large)
    orders = {1}
    if n % 2 == 1:
        return sorted(orders)
    max_rank = min((n & -n).bit_length() - 1, n.bit_length() - 1)
    pop = np.array([bin(i).count("1") for i in range(1 << n)], dtype=np.int16)
    for p in range(1, max_rank + 1):
        target = n // 2
        hit = False
        for pivots in combinations(range(n), p):
            for _head, _tails, elements in _pivotset_batches(n, pivots):
                # column 0 is the identity by construction
                counts = pop[elements]
                ok = np.all(counts[:, 1:] == target, axis=1)
                if np.any(ok):
                    hit = True
                    break
            if hit:
                break
        if hit:
            orders.add(1 << p)
    return sorted(orders)
