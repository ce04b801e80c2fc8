"""Density of ILR-transformed inter-event times of a homogeneous Poisson process.

Conditioned on ``k`` events, the IETs of an HPP are uniform on the simplex.
Pushing that law through the ILR transform gives the density

    f(v) = c / (sum_p exp(v . psi[:, p]))**(k + 1)

on ``R^k``.  Everything here is returned in log space.
"""
from __future__ import annotations

import math
from itertools import combinations

import numpy as np
from scipy.special import logsumexp, softmax

from .geometry import ContrastMatrix, _resolve_psi


def _prep(v, psi):
    v = np.asarray(v, dtype=float).reshape(-1)
    return v, _resolve_psi(psi, v.size)


def log_kernel(v, psi: ContrastMatrix | None = None) -> float:
    """Unnormalized log density ``-(k+1) * logsumexp(psi.T @ v)``."""
    v, psi = _prep(v, psi)
    return -(psi.k + 1) * float(logsumexp(v @ psi.psi))


def log_norm_const(k: int, psi: ContrastMatrix | None = None) -> float:
    """Log normalizing constant ``log(k!) + log|det D|``.

    ``D`` has first row ``psi[:, 0] - psi[:, k]`` and rows
    ``psi[:, j] - psi[:, 0]`` for ``j = 1..k-1`` (Jacobian of the inverse
    transform after factoring out the kernel).
    """
    psi = _resolve_psi(psi, k)
    P = psi.psi
    D = np.empty((k, k))
    D[0] = P[:, 0] - P[:, k]
    for j in range(1, k):
        D[j] = P[:, j] - P[:, 0]
    sign, logdet = np.linalg.slogdet(D)
    if sign == 0 or not np.isfinite(logdet):
        raise ArithmeticError("singular Jacobian block; contrast matrix is invalid")
    return math.lgamma(k + 1) + float(logdet)


def log_density(v, psi: ContrastMatrix | None = None) -> float:
    v, psi = _prep(v, psi)
    return log_norm_const(psi.k, psi) + log_kernel(v, psi)


def grad_log_density(v, psi: ContrastMatrix | None = None) -> np.ndarray:
    v, psi = _prep(v, psi)
    w = softmax(v @ psi.psi)
    return -(psi.k + 1) * (psi.psi @ w)


def hessian_log_density(v, psi: ContrastMatrix | None = None) -> np.ndarray:
    """Closed-form Hessian ``-(k+1)/S**2 * B @ B.T``.

    Column ``(p, q)`` of ``B`` is ``(psi[:, p] - psi[:, q]) * sqrt(e_p e_q)``
    with ``e_p = exp(v . psi[:, p])`` and ``S = sum_p e_p``.  Working with
    the normalized weights ``e_p / S`` keeps this finite for large ``|v|``.
    """
    v, psi = _prep(v, psi)
    P = psi.psi
    w = softmax(v @ P)
    pairs = list(combinations(range(psi.k + 1), 2))
    B = np.empty((psi.k, len(pairs)))
    for col, (p, q) in enumerate(pairs):
        B[:, col] = (P[:, p] - P[:, q]) * np.sqrt(w[p] * w[q])
    H = -(psi.k + 1) * (B @ B.T)
    return 0.5 * (H + H.T)


def normal_approx_log_density(v) -> float:
    """Log density of the standard normal ``N(0, I_k)`` approximation."""
    v = np.asarray(v, dtype=float).reshape(-1)
    return -0.5 * v.size * math.log(2 * math.pi) - 0.5 * float(v @ v)
