"""Seeded samplers for homogeneous, inhomogeneous and IMI point processes.

All randomness flows through :func:`make_rng`, a numpy ``Generator`` over
the counter-based Philox4x64 bit generator.  Independent streams come from
``numpy.random.SeedSequence.spawn``, never from the platform default.
"""
from __future__ import annotations

from typing import Callable

import numpy as np

from .geometry import PointProcess, TimeDomain


class BoundViolation(RuntimeError):
    """An intensity exceeded the dominating rate given to a thinning sampler."""


def make_rng(seed) -> np.random.Generator:
    """Philox-backed generator; ``seed`` may be an int or a ``SeedSequence``."""
    if isinstance(seed, np.random.Generator):
        return seed
    return np.random.Generator(np.random.Philox(seed))


def spawn_rngs(seed: int, n: int) -> list[np.random.Generator]:
    return [make_rng(s) for s in np.random.SeedSequence(seed).spawn(n)]


def _as_domain(d) -> TimeDomain:
    return d if isinstance(d, TimeDomain) else TimeDomain(*d)


def simulate_hpp(rate: float, domain, rng) -> PointProcess:
    d = _as_domain(domain)
    if not rate > 0:
        raise ValueError("HPP rate must be positive")
    n = rng.poisson(rate * d.length)
    return PointProcess(d, np.sort(rng.uniform(d.t1, d.t2, size=n)))


def simulate_hpp_conditional(k: int, domain, rng) -> PointProcess:
    """HPP given exactly ``k`` events: sorted uniforms (order statistics)."""
    d = _as_domain(domain)
    if k < 0:
        raise ValueError("k must be nonnegative")
    return PointProcess(d, np.sort(rng.uniform(d.t1, d.t2, size=k)))


def _eval(f, t):
    out = np.asarray(f(t), dtype=float)
    return np.broadcast_to(out, np.shape(t)).copy()


def simulate_ipp(intensity: Callable, lam_max: float, domain, rng) -> PointProcess:
    """Lewis-Shedler thinning of an ``HPP(lam_max)`` candidate stream.

    ``intensity`` must accept a numpy array of times.
    """
    d = _as_domain(domain)
    if not lam_max > 0:
        raise ValueError("lam_max must be positive")
    n = rng.poisson(lam_max * d.length)
    cand = np.sort(rng.uniform(d.t1, d.t2, size=n))
    accept_u = rng.uniform(size=n)
    lam = _eval(intensity, cand)
    if np.any(lam > lam_max) or np.any(lam < 0):
        bad = cand[(lam > lam_max) | (lam < 0)][0]
        raise BoundViolation(f"intensity {float(intensity(bad))} at t={bad} outside [0, {lam_max}]")
    return PointProcess(d, cand[accept_u * lam_max < lam])


def simulate_ipp_conditional(k: int, intensity: Callable, lam_max: float, domain, rng,
                             max_tries: int = 100_000) -> PointProcess:
    """IPP realization conditioned on exactly ``k`` events, by rejection on the count."""
    for _ in range(max_tries):
        p = simulate_ipp(intensity, lam_max, domain, rng)
        if p.k == k:
            return p
    raise RuntimeError(f"no realization with {k} events in {max_tries} tries")


def simulate_imi(lam1: Callable, lam2: Callable, bound: float, domain, rng) -> PointProcess:
    """Ogata thinning for ``lambda(t | H_t) = lam1(t) * lam2(t - s_*(t))``.

    ``s_*(t)`` is the last accepted event before ``t`` (``t1`` if none).
    ``bound`` must dominate the product everywhere it is evaluated; a
    violation raises :class:`BoundViolation` instead of biasing the sample.
    """
    d = _as_domain(domain)
    if not bound > 0:
        raise ValueError("bound must be positive")
    events = []
    last = d.t1
    t = d.t1
    while True:
        t = t + rng.exponential(1.0 / bound)
        if t > d.t2:
            break
        lam = float(lam1(t)) * float(lam2(t - last))
        if lam > bound or lam < 0:
            raise BoundViolation(f"conditional intensity {lam} at t={t} outside [0, {bound}]")
        if rng.uniform() * bound < lam:
            events.append(t)
            last = t
    return PointProcess(d, events)
