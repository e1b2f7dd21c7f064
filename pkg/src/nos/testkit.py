"""Invariance tests: subgroup, Monte Carlo, full orthogonal group, references.

All finite tests share one execution path: a transformation set is given
by its matrix representation (columns are the images of the direction
iota, identity first), the statistic for each transformation is a single
inner product with the data, and the p-value is the fraction of
transformations whose statistic reaches the observed one. Ties count
against rejection. The full-orthogonal-group test has a closed form
through the symmetric Beta law and is equivalent to the one-sample
t-test.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .flipcore import DimensionMismatchError
from .leak import Direction, MatrixRepresentation
from .special import (
    beta_sym_cdf,
    beta_sym_quantile,
    beta_to_t,
    betainc_inv_reg,
    betainc_reg,
    t_cdf,
    t_quantile,
)

__all__ = [
    "Dataset",
    "TestResult",
    "statistic",
    "subgroup_test",
    "mc_signflip_test",
    "mc_orthogonal_test",
    "full_orthogonal_test",
    "mc_z_test",
    "full_group_ge_subgroup_check",
    "beta_sym_cdf",
    "beta_sym_quantile",
    "beta_to_t",
    "betainc_reg",
    "betainc_inv_reg",
    "t_cdf",
    "t_quantile",
]

_COLUMN_MATCH_TOL = 1e-10


@dataclass(frozen=True)
class Dataset:
    """An observation vector together with the direction of interest."""

    n: int
    x: np.ndarray
    iota: Direction

    def __post_init__(self):
        x = np.array(self.x, dtype=float)
        if x.shape != (self.n,):
            raise ValueError(f"x shape {x.shape} != ({self.n},)")
        if not np.all(np.isfinite(x)):
            raise ValueError("x must be finite-valued")
        if self.iota.n != self.n:
            raise DimensionMismatchError(f"iota n={self.iota.n} != {self.n}")
        x.flags.writeable = False
        object.__setattr__(self, "x", x)

    @classmethod
    def from_vector(cls, x, iota: Direction | None = None) -> "Dataset":
        x = np.asarray(x, dtype=float)
        if iota is None:
            iota = Direction.uniform(len(x))
        return cls(len(x), x, iota)


@dataclass(frozen=True)
class TestResult:
    """Outcome of one invariance test.

    For finite transformation sets, ``p_value = exceed_count / total``
    and the identity always ties itself, so ``exceed_count >= 1``. The
    closed-form orthogonal-group test reports ``exceed_count`` and
    ``total`` as None.
    """

    p_value: float
    reject: bool
    statistic: float
    exceed_count: int | None
    total: int | None
    side: str
    alpha: float

    def to_dict(self) -> dict:
        return {
            "p_value": float(self.p_value),
            "reject": bool(self.reject),
            "statistic": float(self.statistic),
            "exceed_count": None if self.exceed_count is None else int(self.exceed_count),
            "total": None if self.total is None else int(self.total),
            "side": self.side,
            "alpha": float(self.alpha),
        }


def _check_side(side: str):
    if side not in ("one", "two"):
        raise ValueError(f"side must be 'one' or 'two', got {side!r}")


def _check_alpha(alpha: float):
    if not 0.0 < alpha < 1.0:
        raise ValueError(f"alpha={alpha} outside (0, 1)")


def statistic(x, iota: Direction, side: str = "one") -> float:
    """iota'x for one-sided testing, |iota'x| for two-sided."""
    _check_side(side)
    x = np.asarray(x, dtype=float)
    if x.shape != (iota.n,):
        raise DimensionMismatchError(f"x shape {x.shape} != ({iota.n},)")
    v = float(iota.coords @ x)
    return abs(v) if side == "two" else v


def _result_from_stats(stats: np.ndarray, side: str, alpha: float) -> TestResult:
    """Exceedance p-value from per-transformation statistics (identity first)."""
    if side == "two":
        stats = np.abs(stats)
    obs = stats[0]
    exceed = int(np.count_nonzero(stats >= obs))
    total = len(stats)
    p = exceed / total
    return TestResult(
        p_value=p,
        reject=p <= alpha,
        statistic=float(obs),
        exceed_count=exceed,
        total=total,
        side=side,
        alpha=alpha,
    )


def subgroup_test(data: Dataset, rep: MatrixRepresentation, alpha: float, side: str = "one") -> TestResult:
    """Exact invariance test over the transformation set held in ``rep``."""
    _check_side(side)
    _check_alpha(alpha)
    if rep.n != data.n:
        raise DimensionMismatchError(f"representation n={rep.n} != data n={data.n}")
    if np.max(np.abs(rep.iota - data.iota.coords)) > _COLUMN_MATCH_TOL:
        raise ValueError("column 0 of the representation must equal the data's iota")
    stats = data.x @ rep.columns
    return _result_from_stats(stats, side, alpha)


def _sample_distinct_masks(rng: np.random.Generator, n: int, count: int) -> np.ndarray:
    """``count`` distinct non-identity n-bit masks, uniform without replacement.

    The identity is excluded because the test always supplies it
    separately; including it among the draws would duplicate the observed
    statistic and make the test conservative. Returns a (count, n)
    boolean bit array. Enumerates the group when it is small; otherwise
    redraws until all rows are distinct and nonzero.
    """
    if n <= 22:
        masks = 1 + rng.choice((1 << n) - 1, size=count, replace=False)
        return ((masks[:, None] >> np.arange(n)) & 1).astype(bool)
    bits = rng.integers(0, 2, size=(count, n), dtype=np.int8).astype(bool)
    while True:
        _, first = np.unique(bits, axis=0, return_index=True)
        keep = np.zeros(count, dtype=bool)
        keep[first] = True
        keep &= np.any(bits, axis=1)  # reject the identity row
        if keep.all():
            return bits
        redo = np.flatnonzero(~keep)
        bits[redo] = rng.integers(0, 2, size=(len(redo), n), dtype=np.int8).astype(bool)


def mc_signflip_test(
    data: Dataset,
    M: int,
    alpha: float,
    side: str = "one",
    replacement: str = "without",
    seed=None,
) -> TestResult:
    """Monte Carlo sign-flipping test: M-1 random sign patterns plus the identity."""
    _check_side(side)
    _check_alpha(alpha)
    if replacement not in ("with", "without"):
        raise ValueError(f"replacement must be 'with' or 'without', got {replacement!r}")
    if M < 1:
        raise ValueError("M must be at least 1")
    n = data.n
    if replacement == "without" and M > (1 << n):
        raise ValueError(f"cannot draw {M - 1} distinct sign patterns in dimension {n}")
    rng = np.random.default_rng(seed)
    if M == 1:
        bits = np.zeros((0, n), dtype=bool)
    elif replacement == "with":
        bits = rng.integers(0, 2, size=(M - 1, n), dtype=np.int8).astype(bool)
    else:
        bits = _sample_distinct_masks(rng, n, M - 1)
    signs = np.where(bits, -1.0, 1.0)
    flipped_stats = (signs * (data.iota.coords * data.x)).sum(axis=1)
    stats = np.concatenate([[float(data.iota.coords @ data.x)], flipped_stats])
    return _result_from_stats(stats, side, alpha)


def mc_orthogonal_test(data: Dataset, M: int, alpha: float, side: str = "one", seed=None) -> TestResult:
    """Monte Carlo test over the full orthogonal group.

    Each draw needs only the image of the statistic: iota'Hx equals the
    projection of a uniform unit vector on a fixed coordinate, scaled by
    the data norm, so no n x n matrices are sampled.
    """
    _check_side(side)
    _check_alpha(alpha)
    if M < 1:
        raise ValueError("M must be at least 1")
    norm_x = float(np.linalg.norm(data.x))
    if norm_x == 0.0:
        raise ValueError("x must have positive norm")
    rng = np.random.default_rng(seed)
    g = rng.standard_normal((M - 1, data.n))
    z = g[:, 0] / np.linalg.norm(g, axis=1) if M > 1 else np.zeros(0)
    stats = np.concatenate([[float(data.iota.coords @ data.x)], z * norm_x])
    return _result_from_stats(stats, side, alpha)


def full_orthogonal_test(data: Dataset, alpha: float, side: str = "one") -> TestResult:
    """Invariance test over the entire orthogonal group, in closed form.

    Equivalent to the one-sample t-test: the p-value is the upper tail of
    the symmetric Beta law at iota'x / ||x||.
    """
    _check_side(side)
    _check_alpha(alpha)
    n = data.n
    norm2 = float(data.x @ data.x)
    if norm2 == 0.0:
        raise ValueError("x must have positive norm")
    proj = float(data.iota.coords @ data.x)
    resid2 = norm2 - proj * proj
    if resid2 <= 1e-12 * norm2:
        raise ValueError("x is (numerically) proportional to iota; the test is undefined")
    z = float(proj / np.sqrt(norm2))
    z = min(1.0, max(-1.0, z))
    if side == "one":
        p = 1.0 - beta_sym_cdf(z, n)
        obs = proj
    else:
        p = 2.0 * (1.0 - beta_sym_cdf(abs(z), n))
        obs = abs(proj)
    return TestResult(
        p_value=p,
        reject=bool(p <= alpha),
        statistic=obs,
        exceed_count=None,
        total=None,
        side=side,
        alpha=alpha,
    )


def t_statistic(data: Dataset) -> float:
    """sqrt(n-1) iota'x / sqrt(x'(I - iota iota')x), the classical t form."""
    proj = float(data.iota.coords @ data.x)
    resid2 = float(data.x @ data.x) - proj * proj
    if resid2 <= 0:
        raise ValueError("x is proportional to iota; the t-statistic is undefined")
    return np.sqrt(data.n - 1) * proj / np.sqrt(resid2)


def mc_z_test(observed: float, M: int, alpha: float, sigma: float = 1.0, seed=None) -> TestResult:
    """Rank the observed value among M-1 independent N(0, sigma^2) draws."""
    _check_alpha(alpha)
    if M < 1:
        raise ValueError("M must be at least 1")
    if sigma <= 0:
        raise ValueError("sigma must be positive")
    rng = np.random.default_rng(seed)
    draws = sigma * rng.standard_normal(M - 1)
    stats = np.concatenate([[float(observed)], draws])
    return _result_from_stats(stats, "one", alpha)


def full_group_ge_subgroup_check(
    data: Dataset,
    full_rep: MatrixRepresentation,
    sub_rep: MatrixRepresentation,
    alpha: float,
    side: str = "one",
) -> bool:
    """True unless the subgroup test rejects while the full-group test does not.

    The supergroup's rejection region contains the subgroup's, so this
    must always hold; it exists as a property-test helper.
    """
    if sub_rep.n != full_rep.n:
        raise DimensionMismatchError("representations differ in dimension")
    for j in range(sub_rep.M):
        dists = np.max(np.abs(full_rep.columns - sub_rep.columns[:, j : j + 1]), axis=0)
        if float(np.min(dists)) > _COLUMN_MATCH_TOL:
            raise ValueError(f"subgroup column {j} is not a column of the full representation")
    sub = subgroup_test(data, sub_rep, alpha, side)
    full = subgroup_test(data, full_rep, alpha, side)
    return not (sub.reject and not full.reject)
