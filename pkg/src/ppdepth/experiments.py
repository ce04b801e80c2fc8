"""Seeded end-to-end experiment pipelines.

Each function returns plain data plus the CSV text it would export, so the
scripts in ``scripts/`` and the acceptance tests share one code path and
byte-level reproducibility can be checked directly.
"""
from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np
from scipy import stats

from . import io as ppio
from .contours import contour_grid, symmetry_gap
from .depth import DepthReport, depth_from_cumulative, depth_reports, ilr_depth_hpp, \
    time_rescaled_depth
from .geometry import PointProcess, TimeDomain
from .intensity import (_last_before, conditional_cumulative, convergence_experiment,
                        function_cumulative, histogram_estimate, imi_cumulative, imi_estimate)
from .simulation import (simulate_hpp, simulate_imi, simulate_ipp, simulate_ipp_conditional,
                         spawn_rngs)


def cos4(t):
    return np.cos(4 * t) + 1


def cos4_cumulative(t):
    return np.sin(4 * np.asarray(t)) / 4 + np.asarray(t)


def imi_lambda1(t):
    return np.sin(t) + 1


def imi_lambda2(tau):
    return np.sin(tau - np.pi / 2) + 1


def _cond_or_one(fn):
    """Conditional depth with the empty-realization convention ``D_c = 1``."""
    def cond(p: PointProcess) -> float:
        if p.k == 0:
            return 1.0
        if p.on_boundary:
            return 0.0
        return fn(p)
    return cond


@dataclass
class HppRanking:
    sample: list[PointProcess]
    reports: dict[float, list[DepthReport]]
    csv: dict[float, str]


def hpp_ranking(seed: int = 7, n: int = 1000, rate: float = 1.0, domain=(0.0, 5.0),
                rs=(1.0, 0.1)) -> HppRanking:
    """HPP sample ranked by overall depth with the ILR conditional depth."""
    d = TimeDomain(*domain)
    (rng,) = spawn_rngs(seed, 1)
    sample = [simulate_hpp(rate, d, rng) for _ in range(n)]
    reports = {r: depth_reports(sample, ilr_depth_hpp, r=r) for r in rs}
    return HppRanking(sample, reports, {r: ppio.depth_csv(rep) for r, rep in reports.items()})


@dataclass
class IppContours:
    sample: list[PointProcess]
    grid: np.ndarray
    resolution: int
    symmetry_gap: float
    center: np.ndarray
    argmax: np.ndarray
    csv: str


def ipp_contour_experiment(seed: int = 11, n: int = 1000, resolution: int = 60,
                           bins: int | None = None) -> IppContours:
    """Two-event IPP sample with ``cos(4t) + 1`` on ``[0, pi/2]``.

    The histogram intensity is fit on the conditioned sample and the ternary
    depth grid is evaluated under its cumulative.  ``center`` is the IET
    vector whose rescaled gaps are equal; ``argmax`` is the lattice point
    with the largest depth.
    """
    d = TimeDomain(0.0, math.pi / 2)
    (rng,) = spawn_rngs(seed, 1)
    sample = [simulate_ipp_conditional(2, cos4, 2.0, d, rng) for _ in range(n)]
    lam = histogram_estimate(sample, bins)
    cum = lam.cumulative()
    grid = contour_grid(lambda p: time_rescaled_depth(p, cum), d, resolution)
    levels = cum.total * np.array([1.0, 2.0]) / 3.0
    s = np.interp(levels, cum.values, cum.knots)
    center = np.diff(np.concatenate(([d.t1], s, [d.t2])))
    argmax = grid[int(np.argmax(grid[:, 5])), :3]
    csv = ppio.table_csv(ppio.CONTOUR_HEADER, grid)
    return IppContours(sample, grid, resolution, symmetry_gap(grid, resolution), center,
                       argmax, csv)


@dataclass
class ImiResult:
    sample: list[PointProcess]
    held_out: PointProcess
    mae_imi: float
    mae_histogram: float
    true_reports: list[DepthReport]
    imi_reports: list[DepthReport]
    histogram_reports: list[DepthReport]
    csv: dict[str, str] = field(default_factory=dict)

    def overlap(self, which: str = "imi", top: int = 10) -> int:
        other = self.imi_reports if which == "imi" else self.histogram_reports
        ids = {r.id for r in self.true_reports[:top]}
        return len(ids & {r.id for r in other[:top]})


def imi_experiment(seed: int = 2024, n: int = 10_000, r: float = 1.0,
                   grid_size: int = 2001) -> ImiResult:
    """IMI sample with ``(sin t + 1)(sin(t - s_*(t) - pi/2) + 1)`` on ``[0, 2 pi]``.

    Ranks the sample under the true, IMI-estimated and histogram-estimated
    conditional intensities and measures the mean absolute error of both
    estimates on an independently simulated held-out realization.
    """
    d = TimeDomain(0.0, 2 * math.pi)
    rng, rng_held = spawn_rngs(seed, 2)
    sample = [simulate_imi(imi_lambda1, imi_lambda2, 4.0, d, rng) for _ in range(n)]
    held = simulate_imi(imi_lambda1, imi_lambda2, 4.0, d, rng_held)

    model = imi_estimate(sample)
    hist = histogram_estimate(sample)
    grid = np.linspace(d.t1, d.t2, grid_size)
    truth = imi_lambda1(grid) * imi_lambda2(grid - _last_before(held, grid))
    mae_imi = float(np.mean(np.abs(model.conditional_intensity(grid, held) - truth)))
    mae_hist = float(np.mean(np.abs(hist(grid) - truth)))

    true_cond = _cond_or_one(
        lambda p: depth_from_cumulative(conditional_cumulative(imi_lambda1, imi_lambda2, p)))
    imi_cond = _cond_or_one(lambda p: depth_from_cumulative(imi_cumulative(model, p)))
    hist_cum = hist.cumulative()
    hist_cond = _cond_or_one(lambda p: time_rescaled_depth(p, hist_cum))
    res = ImiResult(sample, held, mae_imi, mae_hist,
                    depth_reports(sample, true_cond, r=r),
                    depth_reports(sample, imi_cond, r=r),
                    depth_reports(sample, hist_cond, r=r))
    res.csv = {"true": ppio.depth_csv(res.true_reports), "imi": ppio.depth_csv(res.imi_reports),
               "histogram": ppio.depth_csv(res.histogram_reports)}
    return res


def convergence_table(seed: int = 0, n_grid=(100, 1000, 10_000, 100_000),
                      rule="fourth-root") -> tuple[list[tuple[int, int, float]], str]:
    rows = convergence_experiment(cos4, (0.0, math.pi / 2), n_grid, rule=rule, seed=seed,
                                  lam_max=2.0, cumulative_true=cos4_cumulative)
    return rows, ppio.table_csv(ppio.CONVERGENCE_HEADER, rows)


def pooled_rescaled_iets(sample, cumulative_of) -> np.ndarray:
    """Inter-event times of the rescaled realizations laid end to end.

    Each rescaled realization is a unit-rate Poisson process on
    ``[0, Lambda(t2)]``; concatenating them gives one long unit-rate process
    whose gaps are i.i.d. Exp(1), with no per-window censoring bias.
    """
    offset = 0.0
    times = [np.zeros(1)]
    for p in sample:
        lam = cumulative_of(p)
        times.append(offset + lam[1:-1])
        offset += lam[-1]
    return np.diff(np.concatenate(times))


def rescaling_ks(seed: int = 5, n: int = 10_000, intensity=None, lam_max: float = 2.0,
                 domain=(0.0, 2 * math.pi)):
    """KS test of rescaled IPP inter-event times against Exp(1)."""
    d = TimeDomain(*domain)
    intensity = intensity or (lambda t: np.cos(t) + 1)
    (rng,) = spawn_rngs(seed, 1)
    sample = [simulate_ipp(intensity, lam_max, d, rng) for _ in range(n)]

    def cum(p):
        pts = np.concatenate(([d.t1], p.events, [d.t2]))
        return function_cumulative(intensity, pts)

    iets = pooled_rescaled_iets(sample, cum)
    return iets, stats.kstest(iets, "expon")
