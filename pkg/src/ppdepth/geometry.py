"""Simplex and Euclidean representations of a temporal point process.

A realization with ``k`` events on ``[t1, t2]`` is equivalent to its vector
of ``k + 1`` inter-event times (IETs), a point on the simplex of total
``t2 - t1``.  The isometric log-ratio (ILR) transform maps the open simplex
onto ``R^k`` through a contrast matrix ``psi`` with ``psi @ psi.T = I`` and
``psi.T @ psi`` equal to the centering projector.
"""
from __future__ import annotations

from dataclasses import dataclass, field
from functools import lru_cache

import numpy as np
from scipy.special import logsumexp, softmax

SIMPLEX_RTOL = 1e-9


class BoundaryError(ValueError):
    """Raised when the ILR transform is requested for a boundary composition."""


@dataclass(frozen=True)
class TimeDomain:
    t1: float
    t2: float

    def __post_init__(self):
        t1, t2 = float(self.t1), float(self.t2)
        if not (np.isfinite(t1) and np.isfinite(t2)):
            raise ValueError(f"time domain must be finite, got [{t1}, {t2}]")
        if not t1 < t2:
            raise ValueError(f"time domain needs t1 < t2, got [{t1}, {t2}]")
        object.__setattr__(self, "t1", t1)
        object.__setattr__(self, "t2", t2)

    @property
    def length(self) -> float:
        return self.t2 - self.t1


@dataclass(frozen=True, eq=False)
class PointProcess:
    """An ordered set of event times inside a bounded time domain."""

    domain: TimeDomain
    events: np.ndarray = field(default_factory=lambda: np.empty(0))

    def __post_init__(self):
        ev = np.array(self.events, dtype=float).reshape(-1)
        if ev.size:
            if not np.all(np.isfinite(ev)):
                raise ValueError("event times must be finite")
            if np.any(np.diff(ev) < 0):
                raise ValueError("event times must be sorted")
            if ev[0] < self.domain.t1 or ev[-1] > self.domain.t2:
                raise ValueError(
                    f"events must lie in [{self.domain.t1}, {self.domain.t2}]")
        ev.setflags(write=False)
        object.__setattr__(self, "events", ev)

    @property
    def k(self) -> int:
        return int(self.events.size)

    @property
    def on_boundary(self) -> bool:
        """True iff some equality holds in ``t1 <= s_1 <= ... <= s_k <= t2``."""
        if self.k == 0:
            return False
        return bool(np.any(self.iet_array() == 0.0))

    def iet_array(self) -> np.ndarray:
        return np.diff(np.concatenate(([self.domain.t1], self.events, [self.domain.t2])))

    def __eq__(self, other):
        if not isinstance(other, PointProcess):
            return NotImplemented
        return self.domain == other.domain and np.array_equal(self.events, other.events)

    def __repr__(self):
        return f"PointProcess([{self.domain.t1}, {self.domain.t2}], {self.events.tolist()})"


@dataclass(frozen=True, eq=False)
class InterEventTimes:
    """IET vector ``u`` on the simplex with ``sum(u) == total``."""

    total: float
    u: np.ndarray

    def __post_init__(self):
        u = np.array(self.u, dtype=float).reshape(-1)
        total = float(self.total)
        if u.size == 0:
            raise ValueError("an IET vector has at least one component")
        if np.any(u < 0):
            raise ValueError("inter-event times must be nonnegative")
        if abs(u.sum() - total) > SIMPLEX_RTOL * abs(total):
            raise ValueError(f"IETs sum to {u.sum()!r}, expected {total!r}")
        u.setflags(write=False)
        object.__setattr__(self, "u", u)
        object.__setattr__(self, "total", total)

    @property
    def interior(self) -> bool:
        return bool(np.all(self.u > 0))

    def __len__(self):
        return self.u.size


@dataclass(frozen=True, eq=False)
class ContrastMatrix:
    """A ``k x (k+1)`` orthonormal contrast basis for the ILR transform."""

    psi: np.ndarray

    def __post_init__(self):
        psi = np.array(self.psi, dtype=float)
        if psi.ndim != 2 or psi.shape[1] != psi.shape[0] + 1 or psi.shape[0] < 1:
            raise ValueError(f"contrast matrix must be k x (k+1), got {psi.shape}")
        k = psi.shape[0]
        if not np.allclose(psi @ psi.T, np.eye(k), rtol=0, atol=1e-10):
            raise ValueError("rows of a contrast matrix must be orthonormal")
        if not np.allclose(psi.sum(axis=1), 0.0, rtol=0, atol=1e-10):
            raise ValueError("rows of a contrast matrix must sum to zero")
        psi.setflags(write=False)
        object.__setattr__(self, "psi", psi)

    @property
    def k(self) -> int:
        return self.psi.shape[0]


@lru_cache(maxsize=64)
def _helmert(k: int) -> ContrastMatrix:
    psi = np.zeros((k, k + 1))
    for i in range(1, k + 1):
        norm = np.sqrt(i * (i + 1))
        psi[i - 1, :i] = 1.0 / norm
        psi[i - 1, i] = -i / norm
    return ContrastMatrix(psi)


def build_contrast_matrix(k: int) -> ContrastMatrix:
    """Helmert contrast matrix for ``k + 1`` parts.

    Row ``i`` (1-based) holds ``1/sqrt(i(i+1))`` in its first ``i`` columns,
    ``-i/sqrt(i(i+1))`` in column ``i+1`` and zeros afterwards.
    """
    if int(k) != k or k < 1:
        raise ValueError(f"contrast matrix needs k >= 1, got {k}")
    return _helmert(int(k))


def _resolve_psi(psi, k):
    if psi is None:
        return build_contrast_matrix(k)
    if not isinstance(psi, ContrastMatrix):
        psi = ContrastMatrix(psi)
    if psi.k != k:
        raise ValueError(f"contrast matrix has k={psi.k}, expected {k}")
    return psi


def to_iet(p: PointProcess) -> InterEventTimes:
    return InterEventTimes(p.domain.length, p.iet_array())


def from_iet(u: InterEventTimes, domain: TimeDomain) -> PointProcess:
    if abs(u.total - domain.length) > SIMPLEX_RTOL * domain.length:
        raise ValueError(
            f"IET total {u.total!r} does not match domain length {domain.length!r}")
    events = domain.t1 + np.cumsum(u.u[:-1])
    # rounding in the cumulative sum may step a hair past t2
    return PointProcess(domain, np.minimum(events, domain.t2))


def ilr(u, psi: ContrastMatrix | None = None) -> np.ndarray:
    """ILR coordinates of a composition.

    Parameters
    ----------
    u : InterEventTimes or array_like
        Strictly positive composition with ``k + 1`` parts.
    psi : ContrastMatrix, optional
        Contrast basis; the Helmert basis is used when omitted.

    Raises
    ------
    BoundaryError
        If any component is zero; the transform is undefined on the boundary.
    """
    x = np.asarray(u.u if isinstance(u, InterEventTimes) else u, dtype=float)
    if x.size < 2:
        raise ValueError("ILR needs a composition with at least two parts")
    if np.any(x <= 0):
        raise BoundaryError("ILR is undefined for compositions with zero parts")
    psi = _resolve_psi(psi, x.size - 1)
    logs = np.log(x)
    return psi.psi @ (logs - logs.mean())


def ilr_inverse(v, psi: ContrastMatrix | None = None, total: float = 1.0) -> InterEventTimes:
    v = np.asarray(v, dtype=float).reshape(-1)
    if total <= 0:
        raise ValueError("total must be positive")
    psi = _resolve_psi(psi, v.size)
    u = total * softmax(v @ psi.psi)
    return InterEventTimes(total, u)


def aitchison_norm_sq(u) -> float:
    """Squared Aitchison norm ``sum(log(u_i / g(u))**2)``; equals ``|ilr(u)|**2``."""
    x = np.asarray(u.u if isinstance(u, InterEventTimes) else u, dtype=float)
    if np.any(x <= 0):
        raise BoundaryError("Aitchison norm is undefined on the boundary")
    logs = np.log(x)
    return float(np.sum((logs - logs.mean()) ** 2))


def permutation_orthogonal(psi: ContrastMatrix, r) -> np.ndarray:
    """Orthogonal map ``A_r = psi @ psi[:, r].T`` induced by a column permutation.

    ``r`` is a 0-based permutation of ``range(k + 1)``.  The result satisfies
    ``A_r.T @ psi[:, i] == psi[:, r[i]]``; composition follows
    ``A_r @ A_q == A_{q[r]}``.
    """
    r = np.asarray(r)
    n = psi.k + 1
    if r.shape != (n,) or not np.array_equal(np.sort(r), np.arange(n)):
        raise ValueError(f"not a permutation of range({n}): {r.tolist()}")
    return psi.psi @ psi.psi[:, r].T


def log_partition(v, psi: ContrastMatrix) -> float:
    """``log(sum_p exp(v . psi[:, p]))`` evaluated stably."""
    return float(logsumexp(np.asarray(v, dtype=float) @ psi.psi))
