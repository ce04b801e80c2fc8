import numpy as np
import pytest
from scipy import stats

from ppdepth import (BoundViolation, TimeDomain, make_rng, simulate_hpp, simulate_hpp_conditional,
                     simulate_imi, simulate_ipp, simulate_ipp_conditional, spawn_rngs)


def test_rng_is_philox_and_reproducible():
    rng = make_rng(5)
    assert isinstance(rng.bit_generator, np.random.Philox)
    a = [simulate_hpp(1.0, (0, 5), make_rng(5)).events for _ in range(2)]
    np.testing.assert_array_equal(a[0], a[1])


def test_spawned_streams_differ():
    r1, r2 = spawn_rngs(9, 2)
    assert r1.uniform() != r2.uniform()
    s1, _ = spawn_rngs(9, 2)
    assert s1.uniform() == spawn_rngs(9, 2)[0].uniform()


def test_hpp_counts_are_poisson():
    (rng,) = spawn_rngs(1, 1)
    counts = np.array([simulate_hpp(1.5, (0, 4), rng).k for _ in range(4000)])
    assert counts.mean() == pytest.approx(6.0, rel=0.03)
    assert counts.var() == pytest.approx(6.0, rel=0.1)


def test_hpp_events_are_uniform():
    (rng,) = spawn_rngs(2, 1)
    ev = np.concatenate([simulate_hpp(2.0, (0, 3), rng).events for _ in range(1000)])
    assert stats.kstest(ev, "uniform", args=(0, 3)).pvalue > 0.01


def test_conditional_hpp_has_exact_count():
    rng = make_rng(0)
    d = TimeDomain(0, 1)
    assert simulate_hpp_conditional(4, d, rng).k == 4
    assert simulate_hpp_conditional(0, d, rng).k == 0
    with pytest.raises(ValueError):
        simulate_hpp_conditional(-1, d, rng)


def test_ipp_mean_count_matches_integral():
    (rng,) = spawn_rngs(3, 1)
    lam = lambda t: np.cos(t) + 1
    counts = np.array([simulate_ipp(lam, 2.0, (0, 2 * np.pi), rng).k for _ in range(3000)])
    assert counts.mean() == pytest.approx(2 * np.pi, rel=0.03)


def test_ipp_event_density_follows_intensity():
    (rng,) = spawn_rngs(4, 1)
    lam = lambda t: 2 * t
    ev = np.concatenate([simulate_ipp(lam, 2.0, (0, 1), rng).events for _ in range(3000)])
    # events of an IPP given the count are i.i.d. with density lam / Lambda(T)
    assert stats.kstest(ev, lambda x: x ** 2).pvalue > 0.01


def test_ipp_bound_violation():
    with pytest.raises(BoundViolation):
        simulate_ipp(lambda t: 3 + 0 * t, 2.0, (0, 100), make_rng(0))
    with pytest.raises(ValueError):
        simulate_ipp(lambda t: t, 0.0, (0, 1), make_rng(0))


def test_ipp_conditional_count():
    (rng,) = spawn_rngs(5, 1)
    p = simulate_ipp_conditional(2, lambda t: np.cos(4 * t) + 1, 2.0, (0, np.pi / 2), rng)
    assert p.k == 2
    with pytest.raises(RuntimeError):
        simulate_ipp_conditional(50, lambda t: 0.01 + 0 * t, 0.01, (0, 1), rng, max_tries=10)


def test_imi_with_flat_hazard_is_poisson():
    (rng,) = spawn_rngs(6, 1)
    counts = [simulate_imi(lambda t: 1.5, lambda tau: 1.0, 2.0, (0, 4), rng).k
              for _ in range(3000)]
    assert np.mean(counts) == pytest.approx(6.0, rel=0.03)


def test_imi_refractory_hazard_spaces_events():
    (rng,) = spawn_rngs(7, 1)
    # zero hazard for 0.5 time units after each event
    lam2 = lambda tau: 0.0 if tau < 0.5 else 2.0
    sample = [simulate_imi(lambda t: 1.0, lam2, 2.0, (0, 10), rng) for _ in range(200)]
    gaps = np.concatenate([np.diff(p.events) for p in sample])
    assert gaps.min() >= 0.5


def test_imi_bound_violation():
    with pytest.raises(BoundViolation):
        simulate_imi(lambda t: 5.0, lambda tau: 1.0, 2.0, (0, 10), make_rng(0))
