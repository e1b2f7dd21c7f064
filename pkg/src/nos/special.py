"""Self-contained special functions for the test layer.

Regularized incomplete beta via the standard continued fraction (modified
Lentz evaluation), its inverse via bisection refined by Newton steps, and
the derived quantities actually used by the tests: the symmetric Beta law
on [-1, 1] (the distribution of the inner product of a fixed unit vector
with a uniformly random one), the monotone map pushing it to Student's t,
and t quantiles.

Target accuracies: 1e-12 for CDF values, 1e-10 for quantile round trips.
"""

from __future__ import annotations

import math

_MAX_CF_ITER = 500
_CF_EPS = 1e-15
_TINY = 1e-300


def _betacf(a: float, b: float, x: float) -> float:
    """Continued fraction for the incomplete beta (Lentz's method)."""
    qab = a + b
    qap = a + 1.0
    qam = a - 1.0
    c = 1.0
    d = 1.0 - qab * x / qap
    if abs(d) < _TINY:
        d = _TINY
    d = 1.0 / d
    h = d
    for m in range(1, _MAX_CF_ITER + 1):
        m2 = 2 * m
        aa = m * (b - m) * x / ((qam + m2) * (a + m2))
        d = 1.0 + aa * d
        if abs(d) < _TINY:
            d = _TINY
        c = 1.0 + aa / c
        if abs(c) < _TINY:
            c = _TINY
        d = 1.0 / d
        h *= d * c
        aa = -(a + m) * (qab + m) * x / ((a + m2) * (qap + m2))
        d = 1.0 + aa * d
        if abs(d) < _TINY:
            d = _TINY
        c = 1.0 + aa / c
        if abs(c) < _TINY:
            c = _TINY
        d = 1.0 / d
        delta = d * c
        h *= delta
        if abs(delta - 1.0) < _CF_EPS:
            return h
    raise RuntimeError(f"incomplete beta continued fraction failed for a={a}, b={b}, x={x}")


def betainc_reg(a: float, b: float, x: float) -> float:
    """Regularized incomplete beta I_x(a, b)."""
    if a <= 0 or b <= 0:
        raise ValueError("shape parameters must be positive")
    if not 0.0 <= x <= 1.0:
        raise ValueError(f"x={x} outside [0, 1]")
    if x == 0.0:
        return 0.0
    if x == 1.0:
        return 1.0
    ln_front = (
        math.lgamma(a + b)
        - math.lgamma(a)
        - math.lgamma(b)
        + a * math.log(x)
        + b * math.log1p(-x)
    )
    front = math.exp(ln_front)
    # the continued fraction converges fast on one side of the mean
    if x < (a + 1.0) / (a + b + 2.0):
        return front * _betacf(a, b, x) / a
    return 1.0 - front * _betacf(b, a, 1.0 - x) / b


def betainc_inv_reg(a: float, b: float, p: float) -> float:
    """Inverse of I_x(a, b) in x, accurate to ~1e-14 in p."""
    if not 0.0 <= p <= 1.0:
        raise ValueError(f"p={p} outside [0, 1]")
    if p == 0.0:
        return 0.0
    if p == 1.0:
        return 1.0
    lo, hi = 0.0, 1.0
    x = 0.5
    for _ in range(200):
        f = betainc_reg(a, b, x) - p
        if f > 0:
            hi = x
        else:
            lo = x
        # Newton step using the beta density, clipped back into the bracket
        if 0.0 < x < 1.0:
            ln_pdf = (
                math.lgamma(a + b)
                - math.lgamma(a)
                - math.lgamma(b)
                + (a - 1.0) * math.log(x)
                + (b - 1.0) * math.log1p(-x)
            )
            pdf = math.exp(ln_pdf)
        else:
            pdf = 0.0
        if pdf > 0:
            step = x - f / pdf
            x_new = step if lo < step < hi else 0.5 * (lo + hi)
        else:
            x_new = 0.5 * (lo + hi)
        if x_new == x:  # converged to a representable fixed point
            return x_new
        x = x_new
    return x


def beta_sym_cdf(z: float, n: int) -> float:
    """CDF at z of the Beta((n-1)/2, (n-1)/2) law mapped affinely to [-1, 1]."""
    if n < 2:
        raise ValueError("need n >= 2")
    if not -1.0 <= z <= 1.0:
        raise ValueError(f"z={z} outside [-1, 1]")
    h = (n - 1) / 2.0
    return betainc_reg(h, h, (z + 1.0) / 2.0)


def beta_sym_quantile(p: float, n: int) -> float:
    """Quantile of the symmetric Beta law on [-1, 1]."""
    if n < 2:
        raise ValueError("need n >= 2")
    if p == 0.5:
        return 0.0
    h = (n - 1) / 2.0
    return 2.0 * betainc_inv_reg(h, h, p) - 1.0


def beta_to_t(z: float, n: int) -> float:
    """The strictly increasing map sending the symmetric Beta law to t_{n-1}."""
    if n < 2:
        raise ValueError("need n >= 2")
    if not -1.0 < z < 1.0:
        raise ValueError(f"z={z} outside (-1, 1)")
    return math.sqrt(n - 1) * z / math.sqrt(1.0 - z * z)


def t_cdf(t: float, df: int) -> float:
    """CDF of Student's t with df degrees of freedom."""
    if df < 1:
        raise ValueError("need df >= 1")
    if t == 0.0:
        return 0.5
    x = df / (df + t * t)
    tail = 0.5 * betainc_reg(df / 2.0, 0.5, x)
    return 1.0 - tail if t > 0 else tail


def t_quantile(alpha_upper: float, df: int) -> float:
    """Upper alpha-quantile of t_df: P(T > q) = alpha_upper."""
    if not 0.0 < alpha_upper < 1.0:
        raise ValueError(f"alpha_upper={alpha_upper} outside (0, 1)")
    if df < 1:
        raise ValueError("need df >= 1")
    if alpha_upper == 0.5:
        return 0.0
    z = beta_sym_quantile(1.0 - alpha_upper, df + 1)
    return beta_to_t(z, df + 1)
