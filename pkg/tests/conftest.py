"""Shared helpers: scenario shorthands and test-local integration oracles.

Oracles here are deliberately independent of the package numerics: plain
recursive Simpson and empirical CDFs, used to freeze expected values.
"""

import numpy as np
import pytest

from arisnoma import table1


def simpson_oracle(f, a, b, tol=1e-12, depth=48):
    """Adaptive Simpson quadrature, written independently of the package."""

    def rule(x0, x2, f0, f1, f2):
        return (x2 - x0) / 6.0 * (f0 + 4.0 * f1 + f2)

    def recurse(x0, x2, f0, fm, f2, whole, eps, d):
        xm = 0.5 * (x0 + x2)
        xl, xr = 0.5 * (x0 + xm), 0.5 * (xm + x2)
        fl, fr = f(xl), f(xr)
        left = rule(x0, xm, f0, fl, fm)
        right = rule(xm, x2, fm, fr, f2)
        err = left + right - whole
        if d <= 0 or abs(err) <= 15 * eps:
            return left + right + err / 15.0
        return recurse(x0, xm, f0, fl, fm, left, eps / 2, d - 1) + recurse(
            xm, x2, fm, fr, f2, right, eps / 2, d - 1
        )

    fa, fm, fb = f(a), f(0.5 * (a + b)), f(b)
    return recurse(a, b, fa, fm, fb, rule(a, b, fa, fm, fb), tol, depth)


def ks_distance(samples, cdf):
    """Kolmogorov-Smirnov distance between an empirical sample and a CDF."""
    x = np.sort(samples)
    n = len(x)
    c = cdf(x)
    upper = np.max(np.arange(1, n + 1) / n - c)
    lower = np.max(c - np.arange(0, n) / n)
    return max(upper, lower)


def dbm(p):
    return 10.0 ** (p / 10.0) * 1e-3


@pytest.fixture
def cfg_table1():
    return table1()


@pytest.fixture
def cfg_rates():
    """The rate-comparison scenario: 2 elements, shape 0.7, amplification 5."""
    return table1(L=2, m_r=0.7, m_g=0.7, m_f=0.7, m_o=0.7, beta=5.0)
