"""Special functions against scipy, which serves only as an independent oracle."""

import math

import numpy as np
import pytest
from scipy import special as sp
from scipy import stats

from nos.special import (
    beta_sym_cdf,
    beta_sym_quantile,
    beta_to_t,
    betainc_inv_reg,
    betainc_reg,
    t_cdf,
    t_quantile,
)


@pytest.mark.parametrize("a,b", [(0.5, 0.5), (1.0, 3.0), (4.5, 4.5), (24.5, 0.5), (10.0, 2.0)])
def test_betainc_matches_scipy(a, b):
    for x in np.linspace(0.001, 0.999, 41):
        assert betainc_reg(a, b, x) == pytest.approx(float(sp.betainc(a, b, x)), abs=1e-12)


def test_betainc_endpoints_and_validation():
    assert betainc_reg(2.0, 3.0, 0.0) == 0.0
    assert betainc_reg(2.0, 3.0, 1.0) == 1.0
    with pytest.raises(ValueError):
        betainc_reg(0.0, 1.0, 0.5)
    with pytest.raises(ValueError):
        betainc_reg(1.0, 1.0, 1.5)


@pytest.mark.parametrize("a,b", [(0.5, 0.5), (1.5, 1.5), (4.5, 4.5), (10.0, 3.0)])
def test_betainc_inverse_roundtrip(a, b):
    # the upper endpoint stays at 1 - 1e-6: beyond that the Beta(.5,.5) CDF
    # slope near x = 1 outruns the spacing of representable doubles
    for p in (1e-8, 1e-3, 0.1, 0.5, 0.9, 0.999, 1 - 1e-6):
        x = betainc_inv_reg(a, b, p)
        assert betainc_reg(a, b, x) == pytest.approx(p, abs=1e-10)


def test_beta_sym_cdf_symmetry():
    for n in (3, 10, 30):
        assert beta_sym_cdf(0.0, n) == pytest.approx(0.5, abs=1e-14)
        for z in (0.1, 0.4, 0.9):
            assert beta_sym_cdf(-z, n) == pytest.approx(1.0 - beta_sym_cdf(z, n), abs=1e-12)


def test_beta_sym_quantile_roundtrip():
    for n in (3, 8, 25):
        for p in (0.01, 0.2, 0.5, 0.8, 0.99):
            z = beta_sym_quantile(p, n)
            assert beta_sym_cdf(z, n) == pytest.approx(p, abs=1e-10)


def test_beta_to_t_pushes_law_forward():
    # F_t(map(z)) must equal F_beta(z): the map transports one law to the other
    for n in (4, 12, 40):
        for z in (-0.9, -0.3, 0.0, 0.5, 0.95):
            t = beta_to_t(z, n)
            assert t_cdf(t, n - 1) == pytest.approx(beta_sym_cdf(z, n), abs=1e-12)


def test_beta_to_t_explicit_value():
    # z = 1/sqrt(2), n = 3: sqrt(2) * z / sqrt(1 - 1/2) = sqrt(2)
    assert beta_to_t(1.0 / math.sqrt(2.0), 3) == pytest.approx(math.sqrt(2.0), abs=1e-14)


def test_t_cdf_matches_scipy():
    for df in (1, 2, 5, 19, 49):
        for t in (-8.0, -1.3, 0.0, 0.7, 2.5, 10.0):
            assert t_cdf(t, df) == pytest.approx(float(stats.t.cdf(t, df)), abs=1e-12)


def test_t_quantile_matches_scipy():
    for df in (2, 7, 30):
        for alpha in (0.2, 0.1, 0.05, 0.01, 0.001):
            q = t_quantile(alpha, df)
            assert q == pytest.approx(float(stats.t.isf(alpha, df)), rel=1e-9, abs=1e-9)
