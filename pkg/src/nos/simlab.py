"""Seeded Monte Carlo experiments at desk scale.

Power tables over a roster of invariance tests, consistency-threshold
probes on the fixed-norm sphere model, power curves, null size audits,
p-value-variability comparisons, and an exploratory probe of the
subgroup-vs-Monte-Carlo power ordering.

Every experiment draws from a generator derived deterministically from
(seed, cell index) through SeedSequence spawn keys, so reports are
bit-reproducible and independent of evaluation order; replications are
vectorized in fixed-size chunks.
"""

from __future__ import annotations

import time
import warnings
from dataclasses import dataclass, field

import numpy as np

from .construct import oracle_orthogonal, oracle_signflip, two_adic_valuation
from .leak import Direction, MatrixRepresentation, matrix_representation
from .special import beta_sym_quantile

__all__ = [
    "SimConfig",
    "SimReport",
    "power_table",
    "power_curve",
    "consistency_probe",
    "pvalue_variability",
    "size_audit",
    "conjecture_probe",
]

_CHUNK = 4096

_KNOWN_TESTS = ("t", "mc-z", "mc-signflip", "mc-orthogonal", "oracle-signflip", "oracle-orthogonal")


def _cell_rng(seed, index: int) -> np.random.Generator:
    """Independent substream for one experiment cell, stable under reordering."""
    entropy = 0 if seed is None else seed
    return np.random.default_rng(np.random.SeedSequence(entropy=entropy, spawn_key=(index,)))


def _se(phat: float, reps: int) -> float:
    return float(np.sqrt(phat * (1.0 - phat) / reps))


@dataclass
class SimConfig:
    """Settings of one power-table run."""

    n: int
    mu_grid: tuple
    M_values: tuple
    tests: tuple
    replications: int
    alpha: float = 0.05
    model: str = "normal"  # or "fixed-norm-sphere"
    sigma: float = 1.0
    norm_eps: float = 1.0
    mc_mode: str = "without"
    seed: int | None = None
    subgroup_reps: dict = field(default_factory=dict)

    def __post_init__(self):
        if self.replications < 1:
            raise ValueError("need at least one replication")
        if not self.mu_grid or not self.M_values or not self.tests:
            raise ValueError("mu grid, M values and test roster must be nonempty")
        if self.model not in ("normal", "fixed-norm-sphere"):
            raise ValueError(f"unknown model {self.model!r}")
        if self.mc_mode not in ("with", "without"):
            raise ValueError(f"mc_mode must be 'with' or 'without', got {self.mc_mode!r}")
        if not 0.0 < self.alpha < 1.0:
            raise ValueError(f"alpha={self.alpha} outside (0, 1)")
        for M in self.M_values:
            if abs(self.alpha * M - round(self.alpha * M)) > 1e-9:
                warnings.warn(
                    f"alpha*M = {self.alpha * M} is not an integer; finite tests "
                    "are conservative rather than exact at this level",
                    stacklevel=2,
                )
        for t in self.tests:
            if t not in _KNOWN_TESTS and not str(t).startswith("subgroup:"):
                raise ValueError(f"unknown test id {t!r}")


@dataclass
class SimReport:
    """Per-cell rejection proportions with Monte Carlo standard errors."""

    config: SimConfig
    cells: list
    wall_clock: float

    def to_dict(self) -> dict:
        cfg = {
            "n": self.config.n,
            "mu_grid": list(self.config.mu_grid),
            "M_values": list(self.config.M_values),
            "tests": list(self.config.tests),
            "replications": self.config.replications,
            "alpha": self.config.alpha,
            "model": self.config.model,
            "sigma": self.config.sigma,
            "norm_eps": self.config.norm_eps,
            "mc_mode": self.config.mc_mode,
            "seed": self.config.seed,
        }
        return {"config": cfg, "cells": self.cells, "wall_clock": self.wall_clock}


def _noise(rng: np.random.Generator, reps: int, n: int, model: str, sigma: float, norm_eps: float) -> np.ndarray:
    if model == "normal":
        return sigma * rng.standard_normal((reps, n))
    g = rng.standard_normal((reps, n))
    return norm_eps * g / np.linalg.norm(g, axis=1, keepdims=True)


def _subgroup_rejects(X: np.ndarray, cols: np.ndarray, alpha: float, side: str) -> np.ndarray:
    stats = X @ cols
    if side == "two":
        stats = np.abs(stats)
    obs = stats[:, 0]
    p = np.count_nonzero(stats >= obs[:, None], axis=1) / cols.shape[1]
    return p <= alpha


def _distinct_mask_rows(rng: np.random.Generator, rows: int, draws: int, n: int) -> np.ndarray:
    """(rows, draws) non-identity masks, distinct within each row, uniform."""
    if draws > (1 << n) - 1:
        raise ValueError(f"cannot draw {draws} distinct sign patterns in dimension {n}")
    masks = rng.integers(1, 1 << n, size=(rows, draws), dtype=np.int64)
    while True:
        srt = np.sort(masks, axis=1)
        bad = np.flatnonzero(np.any(srt[:, 1:] == srt[:, :-1], axis=1))
        if len(bad) == 0:
            return masks
        masks[bad] = rng.integers(1, 1 << n, size=(len(bad), draws), dtype=np.int64)


def _mc_signflip_rejects(
    X: np.ndarray, iota: np.ndarray, M: int, alpha: float, side: str, mode: str, rng: np.random.Generator
) -> np.ndarray:
    reps, n = X.shape
    out = np.empty(reps, dtype=bool)
    for lo in range(0, reps, _CHUNK):
        xc = X[lo : lo + _CHUNK] * iota  # rows iota_i x_i
        c = xc.shape[0]
        if mode == "without":
            masks = _distinct_mask_rows(rng, c, M - 1, n)
            bits = (masks[:, :, None] >> np.arange(n)) & 1
        else:
            bits = rng.integers(0, 2, size=(c, M - 1, n), dtype=np.int8)
        signs = 1.0 - 2.0 * bits
        stats = np.einsum("cmn,cn->cm", signs, xc)
        obs = xc.sum(axis=1)
        if side == "two":
            stats = np.abs(stats)
            obs = np.abs(obs)
        exceed = 1 + np.count_nonzero(stats >= obs[:, None], axis=1)
        out[lo : lo + c] = exceed / M <= alpha
    return out


def _mc_orthogonal_rejects(
    X: np.ndarray, iota: np.ndarray, M: int, alpha: float, side: str, rng: np.random.Generator
) -> np.ndarray:
    reps, n = X.shape
    out = np.empty(reps, dtype=bool)
    for lo in range(0, reps, _CHUNK):
        xc = X[lo : lo + _CHUNK]
        c = xc.shape[0]
        g = rng.standard_normal((c, M - 1, n))
        z = g[:, :, 0] / np.linalg.norm(g, axis=2)
        stats = z * np.linalg.norm(xc, axis=1, keepdims=True)
        obs = xc @ iota
        if side == "two":
            stats = np.abs(stats)
            obs = np.abs(obs)
        exceed = 1 + np.count_nonzero(stats >= obs[:, None], axis=1)
        out[lo : lo + c] = exceed / M <= alpha
    return out


def _t_rejects(X: np.ndarray, iota: np.ndarray, alpha: float, side: str) -> np.ndarray:
    """Closed-form orthogonal-group (equivalently t-) test, vectorized."""
    n = X.shape[1]
    z = (X @ iota) / np.linalg.norm(X, axis=1)
    if side == "one":
        return z >= beta_sym_quantile(1.0 - alpha, n)
    return np.abs(z) >= beta_sym_quantile(1.0 - alpha / 2.0, n)


def _mc_z_rejects(obs: np.ndarray, M: int, alpha: float, sigma: float, rng: np.random.Generator) -> np.ndarray:
    reps = len(obs)
    out = np.empty(reps, dtype=bool)
    for lo in range(0, reps, _CHUNK):
        o = obs[lo : lo + _CHUNK]
        draws = sigma * rng.standard_normal((len(o), M - 1))
        exceed = 1 + np.count_nonzero(draws >= o[:, None], axis=1)
        out[lo : lo + len(o)] = exceed / M <= alpha
    return out


def _resolve_columns(test_id: str, n: int, M: int, iota: Direction, subgroup_reps: dict) -> np.ndarray:
    """Matrix-representation columns for the subgroup-style test ids."""
    if test_id == "oracle-signflip":
        k = M.bit_length() - 1
        if (1 << k) != M:
            raise ValueError(f"oracle-signflip needs a power-of-two M, got {M}")
        if not iota.is_uniform:
            raise ValueError("oracle-signflip requires the uniform direction")
        return matrix_representation(oracle_signflip(n, k), iota).columns
    if test_id == "oracle-orthogonal":
        return oracle_orthogonal(n, M, iota).columns
    name = test_id.split(":", 1)[1]
    rep = subgroup_reps[name]
    if not isinstance(rep, MatrixRepresentation):
        rep = matrix_representation(rep, iota)
    if rep.n != n:
        raise ValueError(f"subgroup {name!r} has n={rep.n}, expected {n}")
    return rep.columns


def _rejects_for(
    test_id: str,
    X: np.ndarray,
    iota: Direction,
    M: int,
    alpha: float,
    side: str,
    mc_mode: str,
    sigma: float,
    rng: np.random.Generator,
    subgroup_reps: dict,
) -> np.ndarray:
    n = X.shape[1]
    if test_id == "t":
        return _t_rejects(X, iota.coords, alpha, side)
    if test_id == "mc-signflip":
        return _mc_signflip_rejects(X, iota.coords, M, alpha, side, mc_mode, rng)
    if test_id == "mc-orthogonal":
        return _mc_orthogonal_rejects(X, iota.coords, M, alpha, side, rng)
    if test_id == "mc-z":
        return _mc_z_rejects(X @ iota.coords, M, alpha, sigma, rng)
    cols = _resolve_columns(test_id, n, M, iota, subgroup_reps)
    return _subgroup_rejects(X, cols, alpha, side)


def power_table(config: SimConfig, side: str = "one") -> SimReport:
    """Rejection proportion for every (test, M, mu) cell of the config."""
    t0 = time.perf_counter()
    iota = Direction.uniform(config.n)
    cells = []
    index = 0
    for test_id in config.tests:
        for M in config.M_values:
            for mu in config.mu_grid:
                rng = _cell_rng(config.seed, index)
                index += 1
                X = mu * iota.coords + _noise(
                    rng, config.replications, config.n, config.model, config.sigma, config.norm_eps
                )
                rej = _rejects_for(
                    test_id, X, iota, M, config.alpha, side, config.mc_mode,
                    config.sigma, rng, config.subgroup_reps,
                )
                phat = float(np.mean(rej))
                cells.append(
                    {
                        "test": test_id,
                        "M": M,
                        "mu": mu,
                        "power": phat,
                        "se": _se(phat, config.replications),
                    }
                )
    return SimReport(config=config, cells=cells, wall_clock=time.perf_counter() - t0)


def consistency_probe(
    rep_subgroup: MatrixRepresentation, snr: float, reps: int, seed=None, alpha: float | None = None
) -> dict:
    """Rejection count of the subgroup test at a given signal-to-noise ratio.

    Fixed-norm-sphere model with unit noise norm and signal snr along the
    representation's own direction; alpha defaults to 1/M, the regime
    where the consistency threshold sqrt(2)/sqrt(1 - delta) is sharp.
    """
    if reps < 1:
        raise ValueError("need at least one replication")
    M = rep_subgroup.M
    if alpha is None:
        alpha = 1.0 / M
    iota = rep_subgroup.iota
    rng = _cell_rng(seed, 0)
    count = 0
    for lo in range(0, reps, 1 << 16):
        c = min(1 << 16, reps - lo)
        X = snr * iota + _noise(rng, c, rep_subgroup.n, "fixed-norm-sphere", 1.0, 1.0)
        count += int(np.count_nonzero(_subgroup_rejects(X, rep_subgroup.columns, alpha, "one")))
    return {"all_rejected": count == reps, "count": count, "replications": reps}


def power_curve(
    n: int, M: int, rep_subgroup: MatrixRepresentation, snr_grid, reps: int, seed=None
) -> list:
    """Subgroup-test and MC-orthogonal-test power on the sphere model, per snr."""
    if rep_subgroup.n != n or rep_subgroup.M != M:
        raise ValueError("representation does not match the requested n, M")
    alpha = 1.0 / M
    iota = Direction(n, rep_subgroup.iota)
    rows = []
    for i, snr in enumerate(snr_grid):
        rng = _cell_rng(seed, i)
        X = float(snr) * iota.coords + _noise(rng, reps, n, "fixed-norm-sphere", 1.0, 1.0)
        sub = float(np.mean(_subgroup_rejects(X, rep_subgroup.columns, alpha, "one")))
        mc = float(np.mean(_mc_orthogonal_rejects(X, iota.coords, M, alpha, "one", rng)))
        rows.append(
            {
                "snr": float(snr),
                "subgroup_power": sub,
                "subgroup_se": _se(sub, reps),
                "mc_orthogonal_power": mc,
                "mc_orthogonal_se": _se(mc, reps),
            }
        )
    return rows


def pvalue_variability(
    n: int,
    mu: float,
    M: int,
    n_datasets: int,
    n_resamples: int,
    seed=None,
    rep_subgroup: MatrixRepresentation | None = None,
) -> dict:
    """Average p-value variance: permuted subgroup test vs fresh MC draws.

    Datasets are X = mu*1 + N(0, I). For each dataset the subgroup test
    is re-run on random coordinate permutations of the data (the uniform
    direction is permutation-invariant, so only the subgroup's view of
    the coordinates changes), while the MC sign-flip test is re-run with
    fresh with-replacement draws; both p-value variances are averaged
    over datasets.
    """
    from .construct import greedy_near_oracle  # deferred: heavy only when needed

    if rep_subgroup is None:
        rep_subgroup = matrix_representation(greedy_near_oracle(n, M, seed=seed))
    if rep_subgroup.n != n or rep_subgroup.M != M:
        raise ValueError("representation does not match the requested n, M")
    iota = Direction.uniform(n)
    cols = rep_subgroup.columns
    rng = _cell_rng(seed, 0)
    var_sub = np.empty(n_datasets)
    var_mc = np.empty(n_datasets)
    for d in range(n_datasets):
        x = mu + rng.standard_normal(n)
        obs = float(x @ iota.coords)

        perms = rng.permuted(np.tile(x, (n_resamples, 1)), axis=1)
        stats = perms @ cols
        p_sub = np.count_nonzero(stats >= obs, axis=1) / M
        var_sub[d] = np.var(p_sub)

        bits = rng.integers(0, 2, size=(n_resamples, M - 1, n), dtype=np.int8)
        signs = 1.0 - 2.0 * bits
        mc_stats = np.einsum("rmn,n->rm", signs, iota.coords * x)
        p_mc = (1 + np.count_nonzero(mc_stats >= obs, axis=1)) / M
        var_mc[d] = np.var(p_mc)
    return {
        "avg_var_subgroup_permuted": float(np.mean(var_sub)),
        "avg_var_mc": float(np.mean(var_mc)),
        "n_datasets": n_datasets,
        "n_resamples": n_resamples,
    }


def size_audit(
    test_id: str,
    n: int,
    alpha: float,
    reps: int,
    seed=None,
    M: int | None = None,
    mc_mode: str = "without",
    side: str = "one",
    subgroup_reps: dict | None = None,
) -> float:
    """Null rejection rate of one test; must not exceed alpha materially."""
    iota = Direction.uniform(n)
    rng = _cell_rng(seed, 0)
    X = _noise(rng, reps, n, "normal", 1.0, 1.0)
    rej = _rejects_for(
        test_id, X, iota, M if M is not None else n, alpha, side, mc_mode, 1.0, rng, subgroup_reps or {}
    )
    return float(np.mean(rej))


def conjecture_probe(n: int, M: int, snr_grid, reps: int, seed=None) -> list:
    """Oracle-subgroup power vs MC-orthogonal power on the sphere model.

    Exploratory: reports empirical differences with standard errors and
    asserts nothing. The subgroup side uses the zero-leak orthogonal
    construction, so any order M <= n is available at every n.
    """
    if n < 2:
        raise ValueError("need n >= 2")
    rep = oracle_orthogonal(n, M, Direction.uniform(n))
    rows = power_curve(n, M, rep, snr_grid, reps, seed=seed)
    for row in rows:
        row["power_difference"] = row["subgroup_power"] - row["mc_orthogonal_power"]
        row["difference_se"] = float(
            np.hypot(row["subgroup_se"], row["mc_orthogonal_se"])
        )
    return rows
