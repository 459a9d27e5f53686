"""NumPy implementations of the hot per-step kernels.

The compiled module ``avgdiff._kernels_cy`` provides the same functions
with identical signatures; ``avgdiff._backend`` picks one of the two at
import time.  Everything here works on 1-d float64 arrays and treats
index k + K as index k (periodic wraparound).
"""

import numpy as np


def central_diff(u, dx):
    """(u[k+1] - u[k-1]) / (2 dx), periodic."""
    return (np.roll(u, -1) - np.roll(u, 1)) / (2.0 * dx)


def forward_diff(u, dx):
    """(u[k+1] - u[k]) / dx, periodic."""
    return (np.roll(u, -1) - u) / dx


def forward_average(u):
    """(u[k+1] + u[k]) / 2, periodic."""
    return (np.roll(u, -1) + u) / 2.0


def poly_eval(coeffs, u):
    """Horner evaluation of sum_p coeffs[p] * u**p."""
    out = np.full(u.shape, coeffs[-1])
    for c in coeffs[-2::-1]:
        out = out * u + c
    return out


def divided_difference(coeffs, a, b):
    """Cancellation-free (P(a) - P(b)) / (a - b) for the polynomial coeffs.

    Builds h_p = (a**p - b**p) / (a - b) by the recurrence
    h_p = a * h_{p-1} + b**(p-1), so coincident arguments reduce to
    P'(a) without ever forming a 0/0.
    """
    out = np.zeros(a.shape)
    h = np.zeros(a.shape)
    bpow = np.ones(b.shape)
    for p in range(1, len(coeffs)):
        h = a * h + bpow
        bpow = bpow * b
        c = coeffs[p]
        if c != 0.0:
            out = out + c * h
    return out


def cosine_series(amps, modes, shifts, x):
    """sum_i amps[i] * cos(modes[i] * x - shifts[i]) at every x.

    Chunked so the (terms x points) phase matrix stays small; the
    accumulation order is fixed, which keeps results deterministic.
    """
    out = np.zeros(x.shape)
    chunk = 4096
    for i0 in range(0, len(amps), chunk):
        i1 = min(i0 + chunk, len(amps))
        phase = np.multiply.outer(modes[i0:i1], x)
        phase -= shifts[i0:i1, None]
        out += amps[i0:i1] @ np.cos(phase)
    return out


def total_variation(u):
    """sum_k |u[k+1] - u[k]| around the period."""
    return float(np.abs(np.roll(u, -1) - u).sum())
