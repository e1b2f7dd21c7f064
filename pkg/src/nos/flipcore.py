"""Exact algebra of the sign-flipping group and its subgroups over GF(2).

A sign-flipping transformation of R^n is a diagonal matrix with entries in
{-1, +1}. We store it as an n-bit mask (bit i set <=> coordinate i is
negated), so composition is bitwise XOR and every element is its own
inverse. Subgroups are exactly the GF(2)-linear subspaces of the mask
space; they are kept in a canonical form (reduced echelon basis, elements
sorted by mask value with the identity first) so that equality of
subgroups is equality of element lists.

Masks are plain Python integers, which covers any n without a special
wide-word representation.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Iterable, Sequence


class DimensionMismatchError(ValueError):
    """Operands live in different ambient dimensions."""


@dataclass(frozen=True)
class SignFlipElement:
    """One sign-flipping transformation: bit i of ``mask`` negates coordinate i."""

    n: int
    mask: int

    def __post_init__(self):
        if self.n < 1:
            raise ValueError(f"dimension must be positive, got {self.n}")
        if not 0 <= self.mask < (1 << self.n):
            raise ValueError(f"mask {self.mask:#x} does not fit in {self.n} bits")

    @property
    def is_identity(self) -> bool:
        return self.mask == 0

    def signs(self) -> tuple[int, ...]:
        """The diagonal of the matrix, as a tuple of +1/-1."""
        return tuple(-1 if (self.mask >> i) & 1 else 1 for i in range(self.n))

    def flip_count(self) -> int:
        """Number of negated coordinates."""
        return self.mask.bit_count()

    def apply(self, x):
        """Apply the transformation to a length-n vector, returning a list."""
        if len(x) != self.n:
            raise DimensionMismatchError(f"vector length {len(x)} != n {self.n}")
        return [-v if (self.mask >> i) & 1 else v for i, v in enumerate(x)]


def identity(n: int) -> SignFlipElement:
    return SignFlipElement(n, 0)


def negation(n: int) -> SignFlipElement:
    """The element -I (all coordinates negated)."""
    return SignFlipElement(n, (1 << n) - 1)


def element_from_signs(signs: Sequence[int]) -> SignFlipElement:
    """Encode a list of +1/-1 diagonal entries as a SignFlipElement."""
    if len(signs) == 0:
        raise ValueError("signs must be nonempty")
    mask = 0
    for i, s in enumerate(signs):
        if s == -1:
            mask |= 1 << i
        elif s != 1:
            raise ValueError(f"entry {s!r} at position {i} is not +1 or -1")
    return SignFlipElement(len(signs), mask)


def compose(a: SignFlipElement, b: SignFlipElement) -> SignFlipElement:
    """Group composition: XOR of masks."""
    if a.n != b.n:
        raise DimensionMismatchError(f"cannot compose n={a.n} with n={b.n}")
    return SignFlipElement(a.n, a.mask ^ b.mask)


def _rref_basis(masks: Iterable[int]) -> list[int]:
    """Reduced echelon basis of the span of ``masks``, pivot = lowest set bit.

    Each basis vector's pivot bit is cleared from every other basis vector,
    so the basis is unique per subspace. Returned sorted by pivot.
    """
    basis: dict[int, int] = {}  # pivot bit index -> mask
    for m in masks:
        v = m
        # eliminate every existing pivot bit from the incoming vector; one
        # pass suffices because no basis vector carries another's pivot
        for q, b in basis.items():
            if (v >> q) & 1:
                v ^= b
        if v == 0:
            continue
        p = (v & -v).bit_length() - 1
        # clear bit p from existing vectors to keep the basis reduced
        for q, b in basis.items():
            if (b >> p) & 1:
                basis[q] = b ^ v
        basis[p] = v
    return [basis[p] for p in sorted(basis)]


def _enumerate_span(basis_masks: Sequence[int]) -> list[int]:
    """All XOR combinations of the basis, sorted ascending (identity first)."""
    elems = [0]
    for b in basis_masks:
        elems += [e ^ b for e in elems]
    elems.sort()
    return elems


@dataclass(frozen=True)
class SignFlipSubgroup:
    """A subgroup of the sign-flipping group: a GF(2)-linear subspace of masks.

    ``basis`` is the reduced echelon basis; ``elements`` lists all 2^rank
    members with the identity first and masks in ascending order. Two
    subgroups are equal iff their element tuples are equal.
    """

    n: int
    basis: tuple[SignFlipElement, ...]
    elements: tuple[SignFlipElement, ...]

    @property
    def rank(self) -> int:
        return len(self.basis)

    @property
    def order(self) -> int:
        return len(self.elements)

    def __contains__(self, r: SignFlipElement) -> bool:
        if r.n != self.n:
            return False
        v = r.mask
        for b in self.basis:
            low = b.mask & -b.mask
            if v & low:
                v ^= b.mask
        return v == 0

    def element_masks(self) -> list[int]:
        return [e.mask for e in self.elements]


def span(generators: Sequence[SignFlipElement], n: int | None = None) -> SignFlipSubgroup:
    """Smallest subgroup containing all generators.

    ``n`` is required when ``generators`` is empty (the trivial subgroup).
    """
    if not generators:
        if n is None:
            raise ValueError("empty generator list requires an explicit n")
        return SignFlipSubgroup(n, (), (identity(n),))
    dims = {g.n for g in generators}
    if len(dims) > 1:
        raise DimensionMismatchError(f"generators mix dimensions {sorted(dims)}")
    dim = dims.pop()
    if n is not None and n != dim:
        raise DimensionMismatchError(f"generators have n={dim}, expected {n}")
    basis_masks = _rref_basis(g.mask for g in generators)
    elems = _enumerate_span(basis_masks)
    return SignFlipSubgroup(
        dim,
        tuple(SignFlipElement(dim, b) for b in basis_masks),
        tuple(SignFlipElement(dim, e) for e in elems),
    )


def subgroup_from_basis_masks(n: int, basis_masks: Sequence[int]) -> SignFlipSubgroup:
    """Build a subgroup from raw basis masks (reduced on the way in)."""
    return span([SignFlipElement(n, m) for m in basis_masks], n=n)


def extend(s: SignFlipSubgroup, r: SignFlipElement) -> SignFlipSubgroup:
    """The subgroup generated by ``s`` and one extra element.

    Doubles the order when ``r`` is not already a member; otherwise returns
    a subgroup equal to ``s``.
    """
    if r.n != s.n:
        raise DimensionMismatchError(f"element n={r.n} does not match subgroup n={s.n}")
    if r in s:
        return s
    return span(list(s.basis) + [r], n=s.n)


def is_subgroup(elements: Sequence[SignFlipElement]) -> bool:
    """True iff the set contains the identity and is closed under composition."""
    if not elements:
        raise ValueError("element list must be nonempty")
    dims = {e.n for e in elements}
    if len(dims) > 1:
        raise DimensionMismatchError(f"elements mix dimensions {sorted(dims)}")
    masks = {e.mask for e in elements}
    if 0 not in masks:
        return False
    return all(a ^ b in masks for a in masks for b in masks)


def full_group(n: int) -> SignFlipSubgroup:
    """The entire sign-flipping group (order 2^n); intended for small n."""
    if n > 20:
        raise ValueError(f"refusing to enumerate 2^{n} elements")
    return subgroup_from_basis_masks(n, [1 << i for i in range(n)])
