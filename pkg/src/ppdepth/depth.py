"""Depth of point-process realizations.

Overall depth multiplies a normalized cardinality depth ``w(k)**r`` by a
conditional depth of the event locations given ``k``.  The conditional
depths here are the ILR depth of a homogeneous Poisson process, its
Gaussian simplification, and the time-rescaled ILR depth for a general
intensity.  The depth constant is fixed at ``(k+1)**(k+1)`` so the maximum
conditional depth is 1.
"""
from __future__ import annotations

import math
from dataclasses import dataclass, replace
from typing import Callable, Sequence

import numpy as np
from scipy import stats
from scipy.special import logsumexp

from .geometry import ContrastMatrix, PointProcess, _resolve_psi, aitchison_norm_sq


class InvalidIntensity(ValueError):
    """Cumulative intensity is not strictly increasing where it was evaluated."""


@dataclass(frozen=True, eq=False)
class CardinalityDistribution:
    """Distribution of the event count ``|S|``.

    Either analytic Poisson with mean ``mu`` or an empirical pmf over a
    finite support.  Use :meth:`poisson` or :meth:`empirical` to build one.
    """

    support: np.ndarray
    pmf: np.ndarray
    mu: float | None = None

    @classmethod
    def poisson(cls, mu: float) -> "CardinalityDistribution":
        if not mu > 0:
            raise ValueError("Poisson mean must be positive")
        hi = int(math.ceil(mu + 10 * math.sqrt(mu)))
        support = np.arange(hi + 1)
        return cls(support, stats.poisson.pmf(support, mu), float(mu))

    @classmethod
    def empirical(cls, counts) -> "CardinalityDistribution":
        counts = np.asarray(counts, dtype=int).reshape(-1)
        if counts.size == 0:
            raise ValueError("empirical cardinality distribution needs at least one count")
        if np.any(counts < 0):
            raise ValueError("counts must be nonnegative")
        support, freq = np.unique(counts, return_counts=True)
        return cls(support, freq / counts.size)

    def as_dict(self) -> dict[int, float]:
        return {int(k): float(p) for k, p in zip(self.support, self.pmf)}

    def cdf(self, k: int) -> float:
        if self.mu is not None:
            return float(stats.poisson.cdf(k, self.mu))
        return float(self.pmf[self.support <= k].sum())

    def sf_inclusive(self, k: int) -> float:
        """``P(|S| >= k)``."""
        if self.mu is not None:
            return float(stats.poisson.sf(k - 1, self.mu))
        return float(self.pmf[self.support >= k].sum())

    def d1(self, k: int) -> float:
        return min(self.cdf(k), self.sf_inclusive(k))

    def max_d1(self) -> float:
        return max(self.d1(int(j)) for j in self.support)


def cardinality_depth(k: int, dist: CardinalityDistribution) -> tuple[float, float]:
    """One-dimensional depth of the count and its normalized weight.

    Returns ``(d1, w)`` with ``d1 = min(P(|S| <= k), P(|S| >= k))`` and
    ``w = d1 / max_j d1(j)``.
    """
    d1 = dist.d1(k)
    return d1, d1 / dist.max_d1()


def depth_from_gaps(gaps, total: float | None = None) -> float:
    """ILR depth from rescaled inter-event gaps.

    ``1 / (1 - log((k+1)**(k+1) / total**(k+1) * prod(gaps)))`` with
    ``total = sum(gaps)`` unless given.  The log argument never exceeds 1
    (AM-GM), so the log is clamped at 0 against rounding.
    """
    g = np.asarray(gaps, dtype=float)
    if g.size == 1:
        return 1.0
    if np.any(g <= 0):
        return 0.0
    if total is None:
        total = float(g.sum())
    log_arg = float(np.sum(np.log(g * (g.size / total))))
    return 1.0 / (1.0 - min(log_arg, 0.0))


def ilr_depth_hpp(p: PointProcess) -> float:
    """ILR depth of a realization conditioned on its cardinality."""
    if p.on_boundary:
        return 0.0
    return depth_from_gaps(p.iet_array(), p.domain.length)


def ilr_depth_from_ilr(v, psi: ContrastMatrix | None = None) -> float:
    """ILR depth evaluated directly on ILR coordinates."""
    v = np.asarray(v, dtype=float).reshape(-1)
    psi = _resolve_psi(psi, v.size)
    n = psi.k + 1
    log_arg = n * math.log(n) - n * float(logsumexp(v @ psi.psi))
    return 1.0 / (1.0 - min(log_arg, 0.0))


def simplified_ilr_depth(p: PointProcess) -> float:
    """Gaussian-approximation depth ``1 / (1 + |ilr(u)|**2 / 2)``."""
    if p.on_boundary:
        return 0.0
    if p.k == 0:
        return 1.0
    return 1.0 / (1.0 + 0.5 * aitchison_norm_sq(p.iet_array()))


def depth_from_cumulative(values) -> float:
    """Time-rescaled ILR depth from ``Lambda`` at ``(t1, s_1, ..., s_k, t2)``."""
    lam = np.asarray(values, dtype=float)
    lam = lam - lam[0]
    gaps = np.diff(lam)
    if not np.all(np.isfinite(gaps)) or np.any(gaps <= 0):
        raise InvalidIntensity("cumulative intensity must be strictly increasing")
    return depth_from_gaps(gaps, lam[-1])


def time_rescaled_depth(p: PointProcess, cumulative: Callable) -> float:
    """ILR depth after mapping events through a cumulative intensity.

    ``cumulative`` is evaluated on ``(t1, s_1, ..., s_k, t2)``; it is
    shifted so its value at ``t1`` is zero.
    """
    if p.on_boundary:
        return 0.0
    pts = np.concatenate(([p.domain.t1], p.events, [p.domain.t2]))
    return depth_from_cumulative(np.asarray(cumulative(pts), dtype=float))


@dataclass(frozen=True)
class DepthReport:
    id: str
    k: int
    d1: float
    w: float
    d_cond: float
    d_overall: float
    rank: int = 0


def overall_depth(p: PointProcess, dist: CardinalityDistribution,
                  cond: Callable[[PointProcess], float], r: float = 1.0,
                  id: str = "") -> DepthReport:
    """Overall depth ``w(k)**r * cond(p)``; ``rank`` is left at 0 until :func:`rank`."""
    if not r > 0:
        raise ValueError("r must be positive")
    d1, w = cardinality_depth(p.k, dist)
    dc = float(cond(p))
    return DepthReport(id, p.k, d1, w, dc, w ** r * dc)


def rank(reports: Sequence[DepthReport]) -> list[DepthReport]:
    """Sort by descending overall depth and assign ranks ``1..n``.

    Ties keep their input order.
    """
    order = sorted(range(len(reports)), key=lambda i: -reports[i].d_overall)
    return [replace(reports[i], rank=pos + 1) for pos, i in enumerate(order)]


def depth_reports(sample: Sequence[PointProcess], cond: Callable[[PointProcess], float],
                  r: float = 1.0, dist: CardinalityDistribution | None = None,
                  ids: Sequence[str] | None = None) -> list[DepthReport]:
    """Rank a sample; the cardinality distribution defaults to the sample's empirical one."""
    if len(sample) == 0:
        raise ValueError("cannot rank an empty sample")
    if dist is None:
        dist = CardinalityDistribution.empirical([p.k for p in sample])
    if ids is None:
        ids = [str(i) for i in range(len(sample))]
    max_d1 = dist.max_d1()
    d1_cache: dict[int, float] = {}
    reports = []
    for pid, p in zip(ids, sample):
        if p.k not in d1_cache:
            d1_cache[p.k] = dist.d1(p.k)
        d1 = d1_cache[p.k]
        w = d1 / max_d1
        dc = float(cond(p))
        reports.append(DepthReport(pid, p.k, d1, w, dc, w ** r * dc))
    return rank(reports)
