"""Shared helpers: dense matrix oracles built independently of the package.

Every operator here is constructed from scipy.linalg.circulant or an
explicit DFT matrix, so the tests compare the fast implementations
against plain linear algebra rather than against themselves.
"""
import numpy as np
from scipy.linalg import circulant

import avgdiff as av


def dense_central_diff(K, dx):
    # row i: +1/(2dx) at column i+1, -1/(2dx) at column i-1 (periodic)
    col = np.zeros(K)
    col[1] = -1.0 / (2.0 * dx)
    col[K - 1] = 1.0 / (2.0 * dx)
    return circulant(col)


def dense_forward_diff(K, dx):
    col = np.zeros(K)
    col[0] = -1.0 / dx
    col[K - 1] = 1.0 / dx
    return circulant(col)


def dense_forward_average(K):
    col = np.zeros(K)
    col[0] = 0.5
    col[K - 1] = 0.5
    return circulant(col)


def dense_spectral_diff(K, L):
    """Differentiation matrix assembled from an explicit DFT matrix."""
    k = np.arange(K)
    F = np.exp(-2j * np.pi * np.outer(k, k) / K) / np.sqrt(K)
    modes = np.rint(np.fft.fftfreq(K) * K)
    D = F.conj().T @ np.diag(1j * modes * (2.0 * np.pi / L)) @ F
    return D.real


def dense_left_right(kind, grid):
    """(D, R) dense pair for one scheme: D du/dt = R dvd."""
    K, dx = grid.K, grid.dx
    if kind is av.SchemeKind.CENTRAL_DIFF:
        return dense_central_diff(K, dx), np.eye(K)
    if kind is av.SchemeKind.SPECTRAL:
        return dense_spectral_diff(K, grid.L), np.eye(K)
    return dense_forward_diff(K, dx), dense_forward_average(K)


def dense_linear_step(kind, grid, dt, c2, u):
    """One implicit step for G = c2*u^2 solved as a dense least-squares
    problem.  For zero-mean input the minimal-norm solution coincides
    with the per-mode solve."""
    D, R = dense_left_right(kind, grid)
    A = c2 * R
    lhs = D / dt - A
    rhs = (D / dt + A) @ u
    sol, *_ = np.linalg.lstsq(lhs, rhs, rcond=None)
    return sol


def random_zero_mean(rng, K, amp=1.0):
    """Zero-mean vector with max-norm <= amp."""
    u = rng.uniform(-1.0, 1.0, K)
    u -= u.mean()
    m = np.max(np.abs(u))
    if m > amp:
        u *= amp / m
    return u
