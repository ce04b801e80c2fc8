"""Intensity models, estimators and exact cumulative integration.

Estimators
----------
``histogram_estimate``
    Pooled-count histogram for inhomogeneous Poisson samples.
``imi_estimate``
    Nonparametric factorization ``lambda(t | H_t) = l1(t) * l2(t - s_*(t))``
    for inhomogeneous Markov interval (IMI) samples: ``l2`` is the hazard of
    the pooled inter-event times, ``l1`` rescales it to the observed bin
    counts.

Piecewise-constant intensities integrate exactly to piecewise-linear
cumulative functions; empty bins are floored at ``1e-8 * mean`` so that the
cumulative stays strictly increasing.
"""
from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Callable, Sequence

import numpy as np

from .depth import CardinalityDistribution
from .geometry import PointProcess, TimeDomain
from .simulation import simulate_ipp, spawn_rngs

FLOOR_REL = 1e-8
SURVIVAL_MIN = 1e-8


def bin_index(t, t1: float, t2: float, m: int) -> np.ndarray:
    """Left-closed right-open bins of ``[t1, t2]``; the last bin is closed."""
    idx = np.floor((np.asarray(t, dtype=float) - t1) * (m / (t2 - t1))).astype(int)
    return np.clip(idx, 0, m - 1)


def _floor(values: np.ndarray) -> np.ndarray:
    mean = values.mean()
    eps = FLOOR_REL * mean if mean > 0 else FLOOR_REL
    return np.maximum(values, eps)


class CumulativeIntensity:
    """Piecewise-linear ``Lambda(t) = int_{t1}^t lambda``, exact for binned rates."""

    def __init__(self, knots: np.ndarray, values: np.ndarray):
        self.knots = np.asarray(knots, dtype=float)
        self.values = np.asarray(values, dtype=float)

    def __call__(self, t):
        return np.interp(t, self.knots, self.values)

    @property
    def total(self) -> float:
        return float(self.values[-1])


@dataclass(frozen=True, eq=False)
class PiecewiseConstantIntensity:
    """Rate ``values[j]`` on the ``j``-th of ``len(values)`` equal bins of ``domain``."""

    domain: TimeDomain
    values: np.ndarray
    raw: np.ndarray | None = None

    @property
    def m(self) -> int:
        return int(self.values.size)

    @property
    def edges(self) -> np.ndarray:
        return np.linspace(self.domain.t1, self.domain.t2, self.m + 1)

    @property
    def width(self) -> float:
        return self.domain.length / self.m

    def __call__(self, t):
        return self.values[bin_index(t, self.domain.t1, self.domain.t2, self.m)]

    def cumulative(self) -> CumulativeIntensity:
        return cumulative(self)


def cumulative(lam: PiecewiseConstantIntensity) -> CumulativeIntensity:
    steps = lam.values * lam.width
    return CumulativeIntensity(lam.edges, np.concatenate(([0.0], np.cumsum(steps))))


def _common_domain(sample: Sequence[PointProcess]) -> TimeDomain:
    if len(sample) == 0:
        raise ValueError("sample is empty")
    d = sample[0].domain
    if any(p.domain != d for p in sample):
        raise ValueError("all realizations must share one time domain")
    return d


def default_bins(n: int) -> int:
    """``ceil(n**(1/4))``, the rate-optimal bin count for the histogram estimator."""
    return max(1, math.ceil(n ** 0.25 - 1e-12))


def histogram_estimate(sample: Sequence[PointProcess], m: int | None = None,
                       floor: bool = True) -> PiecewiseConstantIntensity:
    """Histogram intensity ``M / (n (t2 - t1)) * (pooled count in bin)``."""
    d = _common_domain(sample)
    n = len(sample)
    m = default_bins(n) if m is None else int(m)
    if m < 1:
        raise ValueError("bin count must be positive")
    counts = np.zeros(m)
    for p in sample:
        counts += np.bincount(bin_index(p.events, d.t1, d.t2, m), minlength=m)
    raw = counts * (m / (n * d.length))
    values = _floor(raw) if floor else raw
    return PiecewiseConstantIntensity(d, values, raw)


def function_cumulative(intensity: Callable, points, order: int = 64) -> np.ndarray:
    """``int_{points[0]}^{points[i]} intensity`` by per-gap Gauss-Legendre quadrature."""
    pts = np.asarray(points, dtype=float)
    x, wts = np.polynomial.legendre.leggauss(order)
    a, b = pts[:-1], pts[1:]
    half = 0.5 * (b - a)
    nodes = (0.5 * (a + b))[:, None] + half[:, None] * x[None, :]
    vals = np.broadcast_to(np.asarray(intensity(nodes), dtype=float), nodes.shape)
    gaps = half * (vals @ wts)
    return np.concatenate(([0.0], np.cumsum(gaps)))


def conditional_cumulative(lam1: Callable, lam2: Callable, p: PointProcess,
                           order: int = 64) -> np.ndarray:
    """``Lambda`` at ``(t1, s_1, ..., s_k, t2)`` for ``lam1(t) * lam2(t - s_*(t))``.

    Each gap is integrated separately with Gauss-Legendre nodes, since the
    integrand is smooth between events for smooth ``lam1`` and ``lam2``.
    """
    pts = np.concatenate(([p.domain.t1], p.events, [p.domain.t2]))
    x, wts = np.polynomial.legendre.leggauss(order)
    a, b = pts[:-1], pts[1:]
    half = 0.5 * (b - a)
    nodes = (0.5 * (a + b))[:, None] + half[:, None] * x[None, :]
    v1 = np.broadcast_to(np.asarray(lam1(nodes), dtype=float), nodes.shape)
    v2 = np.broadcast_to(np.asarray(lam2(nodes - a[:, None]), dtype=float), nodes.shape)
    gaps = half * ((v1 * v2) @ wts)
    return np.concatenate(([0.0], np.cumsum(gaps)))


@dataclass(frozen=True, eq=False)
class ImiIntensity:
    """``lambda1`` on ``[t1, t2]`` and hazard ``lambda2`` on ``[0, L]``.

    ``lambda2`` keeps its last bin value for ``tau > L``.
    """

    lambda1: PiecewiseConstantIntensity
    lambda2: PiecewiseConstantIntensity

    def hazard(self, tau):
        tau = np.asarray(tau, dtype=float)
        dom = self.lambda2.domain
        return self.lambda2.values[bin_index(np.clip(tau, dom.t1, dom.t2), dom.t1, dom.t2,
                                             self.lambda2.m)]

    def conditional_intensity(self, t, p: PointProcess) -> np.ndarray:
        t = np.asarray(t, dtype=float)
        return self.lambda1(t) * self.hazard(t - _last_before(p, t))


def _hazard(density: np.ndarray, width: float) -> np.ndarray:
    """Bin hazard ``p / (1 - F)`` with ``F`` the exact piecewise-linear CDF at bin centers."""
    cdf_left = np.concatenate(([0.0], np.cumsum(density * width)[:-1]))
    survival = 1.0 - (cdf_left + 0.5 * density * width)
    out = np.empty_like(density)
    last = None
    for j, (pj, sj) in enumerate(zip(density, survival)):
        if sj < SURVIVAL_MIN:
            # empty tail: carry forward the last finite hazard
            out[j] = last if last is not None else 0.0
        else:
            out[j] = pj / sj
            last = out[j]
    return out


def imi_estimate(sample: Sequence[PointProcess], m1: int | None = None,
                 m2: int | None = None, scale_to_counts: bool = False) -> ImiIntensity:
    """Estimate the IMI factorization from ``n`` realizations.

    1. Pool the inter-event times ``s_j - s_{j-1}`` (``s_0 = t1``, the
       censored gap to ``t2`` excluded); ``L`` is the largest.
    2. Histogram density ``p(tau)`` over ``m2`` bins of ``[0, L]`` and hazard
       ``lambda2 = p / (1 - int_0^tau p)``.
    3. For each of ``m1`` bins of ``[t1, t2]`` with center ``t_k`` and
       event share ``p_k = count_k / (total events)``,
       ``lambda1 = p_k * n / (dt * sum_j lambda2(t_k - s_*^j(t_k)))``.

    With ``scale_to_counts=True`` the numerator is ``count_k`` instead of
    ``p_k * n``, so ``lambda1 * lambda2`` matches the observed event rate.
    The two differ by the constant factor ``n / (total events)``, which
    leaves every time-rescaled depth unchanged.
    """
    d = _common_domain(sample)
    n = len(sample)
    m1 = default_bins(n) if m1 is None else int(m1)
    m2 = default_bins(n) if m2 is None else int(m2)
    if m1 < 1 or m2 < 1:
        raise ValueError("bin counts must be positive")
    iets = np.concatenate([np.diff(np.concatenate(([d.t1], p.events))) for p in sample])
    if iets.size == 0:
        raise ValueError("IMI estimation needs at least one event in the sample")
    big_l = float(iets.max())
    if big_l <= 0:
        big_l = d.length / m2
    width2 = big_l / m2
    density = np.bincount(bin_index(iets, 0.0, big_l, m2), minlength=m2) / (width2 * iets.size)
    lam2_raw = _hazard(density, width2)
    lambda2 = PiecewiseConstantIntensity(TimeDomain(0.0, big_l), _floor(lam2_raw), lam2_raw)
    model2 = ImiIntensity(PiecewiseConstantIntensity(d, np.ones(m1)), lambda2)

    dt = d.length / m1
    centers = d.t1 + (np.arange(m1) + 0.5) * dt
    counts = np.zeros(m1)
    hazard_sum = np.zeros(m1)
    for p in sample:
        counts += np.bincount(bin_index(p.events, d.t1, d.t2, m1), minlength=m1)
        hazard_sum += model2.hazard(centers - _last_before(p, centers))
    with np.errstate(divide="ignore", invalid="ignore"):
        numer = counts if scale_to_counts else counts / counts.sum() * n
        lam1_raw = np.where(hazard_sum > 0, numer / (dt * hazard_sum), 0.0)
    lambda1 = PiecewiseConstantIntensity(d, _floor(lam1_raw), lam1_raw)
    return ImiIntensity(lambda1, lambda2)


def _last_before(p: PointProcess, t: np.ndarray) -> np.ndarray:
    """``s_*(t)``: last event strictly before ``t``, ``t1`` if there is none."""
    if p.k == 0:
        return np.full(np.shape(t), p.domain.t1)
    idx = np.searchsorted(p.events, t, side="left") - 1
    return np.where(idx >= 0, p.events[np.maximum(idx, 0)], p.domain.t1)


def imi_cumulative(model: ImiIntensity, p: PointProcess) -> np.ndarray:
    """Exact ``Lambda`` at ``(t1, s_1, ..., s_k, t2)`` under an IMI model.

    Between consecutive events the integrand ``lambda1(t) * lambda2(t - s)``
    is piecewise constant with breaks at the ``lambda1`` bin edges and at
    ``s`` plus the ``lambda2`` bin edges; each piece is integrated exactly.
    """
    pts = np.concatenate(([p.domain.t1], p.events, [p.domain.t2]))
    e1 = model.lambda1.edges
    e2 = model.lambda2.edges
    gaps = np.empty(pts.size - 1)
    for i in range(pts.size - 1):
        a, b = pts[i], pts[i + 1]
        if b <= a:
            gaps[i] = 0.0
            continue
        brk = np.concatenate(([a, b], e1, a + e2))
        brk = np.unique(brk[(brk >= a) & (brk <= b)])
        mid = 0.5 * (brk[:-1] + brk[1:])
        gaps[i] = float(np.sum(model.lambda1(mid) * model.hazard(mid - a) * np.diff(brk)))
    return np.concatenate(([0.0], np.cumsum(gaps)))


def empirical_cardinality(sample: Sequence[PointProcess]) -> CardinalityDistribution:
    return CardinalityDistribution.empirical([p.k for p in sample])


BIN_RULES: dict[str, Callable[[int], int]] = {
    "fourth-root": default_bins,
    "sqrt": lambda n: max(1, math.ceil(math.sqrt(n) - 1e-12)),
    "linear": lambda n: max(1, int(n)),
    "one": lambda n: 1,
}


def resolve_bin_rule(rule) -> Callable[[int], int]:
    """Accept a callable, a named rule, or ``"const:K"``."""
    if callable(rule):
        return rule
    if rule in BIN_RULES:
        return BIN_RULES[rule]
    if isinstance(rule, str) and rule.startswith("const:"):
        m = int(rule.split(":", 1)[1])
        if m < 1:
            raise ValueError("constant bin count must be positive")
        return lambda n: m
    raise ValueError(f"unknown bin rule {rule!r}")


def sup_error(est: CumulativeIntensity, cumulative_true: Callable, domain: TimeDomain,
              grid_size: int = 10_000) -> float:
    x = np.linspace(domain.t1, domain.t2, grid_size)
    return float(np.max(np.abs(est(x) - cumulative_true(x))))


def convergence_experiment(intensity: Callable, domain, n_grid: Sequence[int],
                           rule="fourth-root", seed: int = 0, lam_max: float | None = None,
                           cumulative_true: Callable | None = None,
                           grid_size: int = 10_000) -> list[tuple[int, int, float]]:
    """Sup-norm error of the histogram cumulative intensity as ``n`` grows.

    For each ``n`` in ``n_grid`` an independent Philox stream simulates ``n``
    IPP realizations, ``histogram_estimate`` is fit with ``M = rule(n)`` bins
    and ``sup_x |Lambda_hat(x) - Lambda(x)|`` is taken over ``grid_size``
    points.  Returns rows ``(n, M, sup_error)``.
    """
    d = domain if isinstance(domain, TimeDomain) else TimeDomain(*domain)
    bins = resolve_bin_rule(rule)
    x = np.linspace(d.t1, d.t2, grid_size)
    if lam_max is None:
        fine = np.linspace(d.t1, d.t2, 100_001)
        lam_max = 1.01 * float(np.max(np.asarray(intensity(fine), dtype=float)))
    if cumulative_true is None:
        truth = function_cumulative(intensity, x)
        cumulative_true = CumulativeIntensity(x, truth)
    rows = []
    for n, rng in zip(n_grid, spawn_rngs(seed, len(n_grid))):
        n = int(n)
        sample = [simulate_ipp(intensity, lam_max, d, rng) for _ in range(n)]
        m = int(bins(n))
        est = histogram_estimate(sample, m).cumulative()
        rows.append((n, m, sup_error(est, cumulative_true, d, grid_size)))
    return rows
