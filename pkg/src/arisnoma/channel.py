"""Statistics of the cascaded BS -> surface -> user link.

One reflected path contributes the product of two independent Nakagami-m
amplitudes; with coherent phase alignment the end-to-end small-scale
amplitude is the sum of L such products. That sum has no elementary CDF,
so the analysis moment-matches it to a Gamma law with shape b+1 and scale
c, and ranks users by order statistics of i.i.d. copies. This module owns
those statistics plus the Monte Carlo sampler the simulation engine feeds
from.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Iterator, Sequence

import numpy as np

from .errors import ConfigError, DomainError
from .numerics import log_gamma, regularized_gamma_p

__all__ = [
    "FadingParams",
    "CascadeStats",
    "OrderSpec",
    "ChannelDraw",
    "cascade_stats",
    "unsorted_cascade_cdf",
    "sorted_cascade_cdf",
    "ordered_cdf_from_marginal",
    "sample_cascade_set",
]

MAX_ORDERED_USERS = 20  # alternating binomial sums lose ~1 digit per user past this
_DEFAULT_CHUNK = 65536


@dataclass(frozen=True)
class FadingParams:
    """Shape parameters of one cascade: m_r per BS-side hop, m_u per user-side hop."""

    m_r: float
    m_u: float
    L: int

    def __post_init__(self):
        if self.m_r < 0.5 or self.m_u < 0.5:
            raise ConfigError(f"Nakagami shapes must be >= 0.5, got m_r={self.m_r}, m_u={self.m_u}")
        if self.L < 1:
            raise ConfigError(f"element count must be >= 1, got L={self.L}")


@dataclass(frozen=True)
class CascadeStats:
    """Moment-matched Gamma parameters of the L-term cascade amplitude sum.

    mu/omega are the mean/variance of a single product term; the sum of L
    terms is approximated by Gamma(shape=b+1, scale=c) with b+1 = L mu^2/omega
    and c = omega/mu (matching the sum's first two moments).
    """

    mu: float
    omega: float
    b: float
    c: float

    @property
    def shape(self) -> float:
        return self.b + 1.0


@dataclass(frozen=True)
class OrderSpec:
    """Which order statistic of K i.i.d. cascades a user occupies (1 = weakest)."""

    K: int
    rank: int

    def __post_init__(self):
        if self.K < 1 or not 1 <= self.rank <= self.K:
            raise ConfigError(f"need 1 <= rank <= K, got rank={self.rank}, K={self.K}")
        if self.K > MAX_ORDERED_USERS:
            raise ConfigError(f"K = {self.K} exceeds the supported maximum {MAX_ORDERED_USERS}")

    @property
    def prefactor(self) -> float:
        """K! / ((K - rank)! (rank - 1)!), exact in integer arithmetic."""
        return float(
            math.factorial(self.K)
            // (math.factorial(self.K - self.rank) * math.factorial(self.rank - 1))
        )


def cascade_stats(fp: FadingParams) -> CascadeStats:
    """Per-term product moments and the matched Gamma parameters.

    E|a| of a unit-power Nakagami(m) amplitude is G(m + 1/2)/(G(m) sqrt(m)),
    so the product term has mean mu equal to the product of the two hop
    means and variance omega = 1 - mu^2 (unit per-hop power).
    """
    # Log-space ratios: the gammas overflow near shape ~170 while their
    # ratio stays below one.
    gr = math.exp(log_gamma(fp.m_r + 0.5) - log_gamma(fp.m_r) - 0.5 * math.log(fp.m_r))
    gu = math.exp(log_gamma(fp.m_u + 0.5) - log_gamma(fp.m_u) - 0.5 * math.log(fp.m_u))
    mu = gr * gu
    omega = 1.0 - mu * mu
    b = fp.L * mu * mu / omega - 1.0
    c = omega / mu
    return CascadeStats(mu=mu, omega=omega, b=b, c=c)


def unsorted_cascade_cdf(stats: CascadeStats, y) -> float:
    """Gamma-approximated CDF of the cascade sum at amplitude y >= 0."""
    if np.any(np.asarray(y) < 0.0):
        raise DomainError("cascade amplitude must be >= 0")
    return regularized_gamma_p(stats.shape, np.asarray(y, dtype=float) / stats.c)


def ordered_cdf_from_marginal(p, spec: OrderSpec):
    """CDF of the rank-th order statistic given the marginal CDF value p.

    Psi * sum_k C(K-rank, k) (-1)^k / (rank + k) * p^(rank+k), summed in
    descending magnitude with Kahan compensation: the alternating binomial
    terms nearly cancel for p near 1 and large K.
    """
    p = np.asarray(p, dtype=float)
    r = spec.rank
    terms = []
    for k in range(spec.K - r + 1):
        coeff = math.comb(spec.K - r, k) * (-1.0) ** k / (r + k)
        terms.append(coeff * p ** (r + k))
    order = np.argsort([-np.max(np.abs(t)) for t in terms], kind="stable")
    total = np.zeros_like(p)
    comp = np.zeros_like(p)
    for idx in order:
        yv = terms[idx] - comp
        t = total + yv
        comp = (t - total) - yv
        total = t
    out = np.clip(spec.prefactor * total, 0.0, 1.0)
    return float(out) if out.ndim == 0 else out


def sorted_cascade_cdf(stats: CascadeStats, spec: OrderSpec, y):
    """CDF of the rank-th strongest of K i.i.d. cascade sums at amplitude y."""
    return ordered_cdf_from_marginal(unsorted_cascade_cdf(stats, y), spec)


@dataclass(frozen=True)
class ChannelDraw:
    """One chunk of Monte Carlo realizations.

    y[(trial, user)] holds unsorted small-scale cascade sums, ru_norm_sq the
    matching per-user sum of squared user-side hop amplitudes (for the
    per-trial surface-noise norm), and resid the unit-mean residual
    interference power samples.
    """

    y: np.ndarray
    ru_norm_sq: np.ndarray
    resid: np.ndarray


def _nakagami(rng: np.random.Generator, m: float, size) -> np.ndarray:
    # Exact: squared amplitude is Gamma(m, scale 1/m) with unit mean.
    return np.sqrt(rng.gamma(shape=m, scale=1.0 / m, size=size))


def sample_cascade_set(
    fp_per_user: Sequence[FadingParams],
    rng_seed: int,
    trials: int,
    m_i: float = 1.0,
    chunk: int = _DEFAULT_CHUNK,
) -> Iterator[ChannelDraw]:
    """Stream reproducible cascade draws for K users sharing L and m_r.

    Yields chunks whose columns are i.i.d. across users given identical
    FadingParams. Sub-streams are keyed by (seed, chunk index), so the
    stream is bit-identical for a given seed regardless of consumption
    pattern, and chunks can be generated independently.
    """
    if trials < 1:
        raise ConfigError("trials must be >= 1")
    K = len(fp_per_user)
    if K < 1:
        raise ConfigError("need at least one user")
    L = fp_per_user[0].L
    m_r = fp_per_user[0].m_r
    for fp in fp_per_user:
        if fp.L != L or fp.m_r != m_r:
            raise ConfigError("all users must share L and m_r")

    done = 0
    index = 0
    while done < trials:
        n = min(chunk, trials - done)
        rng = np.random.default_rng([int(rng_seed) & 0xFFFFFFFFFFFFFFFF, index])
        a = _nakagami(rng, m_r, (n, K, L))
        b = np.empty_like(a)
        for j, fp in enumerate(fp_per_user):
            b[:, j, :] = _nakagami(rng, fp.m_u, (n, L))
        y = (a * b).sum(axis=2)
        ru_norm_sq = (b * b).sum(axis=2)
        resid = rng.gamma(shape=m_i, scale=1.0 / m_i, size=n)
        yield ChannelDraw(y=y, ru_norm_sq=ru_norm_sq, resid=resid)
        done += n
        index += 1
