"""Difference, average and Fourier operators on periodic grid vectors.

Every operator here is circulant (shift invariant), so its action on the
sampled exponential exp(2 pi i j k / K) is multiplication by a scalar
symbol, exposed through operator_symbol.  The admissible mode set is
0 < |j| <= (K - 1) / 2 plus the constant mode j = 0; anything outside
aliases back onto it.

The transform pair dft/idft uses the unitary normalization 1/sqrt(K)
with the sample range k = 1..K (a per-mode phase relative to the plain
0-based FFT).
"""

import enum
import math

import numpy as np

from ._backend import kernels
from .grid import GridFunction, PeriodicGrid, SpectralVector


class OperatorKind(enum.Enum):
    """The circulant operators with an exposed symbol."""

    CENTRAL_DIFF = "central-diff"
    FORWARD_DIFF = "forward-diff"
    FORWARD_AVG = "forward-avg"
    SPECTRAL = "spectral"


def central_diff(u: GridFunction) -> GridFunction:
    """(u_{k+1} - u_{k-1}) / (2 dx) with periodic wraparound."""
    return GridFunction(kernels.central_diff(u.values, u.grid.dx), u.grid)


def forward_diff(u: GridFunction) -> GridFunction:
    """(u_{k+1} - u_k) / dx with periodic wraparound."""
    return GridFunction(kernels.forward_diff(u.values, u.grid.dx), u.grid)


def forward_average(u: GridFunction) -> GridFunction:
    """(u_{k+1} + u_k) / 2 with periodic wraparound."""
    return GridFunction(kernels.forward_average(u.values), u.grid)


def fft_mode_numbers(K: int) -> np.ndarray:
    """Integer mode numbers in numpy FFT output order (0, 1, ..., -1)."""
    return np.rint(np.fft.fftfreq(K) * K).astype(int)


def dft(u: GridFunction) -> SpectralVector:
    """u~_j = K**-0.5 * sum_{k=1..K} exp(-2 pi i j k / K) u_k."""
    K = u.grid.K
    raw = np.fft.fft(u.values) / math.sqrt(K)
    centered = np.fft.fftshift(raw)
    j = u.grid.modes()
    # stored arrays start at k = 1 while the plain FFT assumes k = 0
    coeffs = np.exp(-2j * np.pi * j / K) * centered
    return SpectralVector(coeffs, u.grid)


def idft(s: SpectralVector) -> GridFunction:
    """Inverse of dft; assumes conjugate-symmetric input (a real signal)."""
    K = s.grid.K
    j = s.grid.modes()
    centered = np.exp(2j * np.pi * j / K) * s.coeffs
    raw = np.fft.ifftshift(centered)
    values = np.fft.ifft(raw) * math.sqrt(K)
    return GridFunction(values.real, s.grid)


def spectral_diff(u: GridFunction) -> GridFunction:
    """Fourier-spectral derivative: mode j is scaled by i j (2 pi / L).

    Exact on every resolved mode.  Defined for odd K only, which the
    grid type already guarantees; an even grid would need a Nyquist-mode
    convention that this package deliberately avoids.
    """
    return GridFunction(spectral_diff_complex(u.values, u.grid).real, u.grid)


def spectral_diff_complex(values: np.ndarray, grid: PeriodicGrid) -> np.ndarray:
    """Complex-valued spectral derivative of real samples.

    The imaginary part is pure roundoff residue; spectral_diff drops it.
    """
    j = fft_mode_numbers(grid.K)
    return np.fft.ifft(1j * j * (2.0 * np.pi / grid.L) * np.fft.fft(values))


def operator_symbol(op: OperatorKind, j: int, grid: PeriodicGrid) -> complex:
    """Eigenvalue of op on the sampled exponential exp(2 pi i j k / K).

    With phi = 2 pi j / K (equal to j * dx when L = 2 pi):

        central difference   i sin(phi) / dx
        forward difference   (exp(i phi) - 1) / dx
        forward average      (exp(i phi) + 1) / 2
        spectral             i j (2 pi / L)
    """
    j = int(j)
    if abs(j) > grid.max_mode:
        raise ValueError(f"mode {j} out of range for K={grid.K}")
    phi = 2.0 * np.pi * j / grid.K
    e_phi = complex(math.cos(phi), math.sin(phi))
    if op is OperatorKind.CENTRAL_DIFF:
        return 1j * math.sin(phi) / grid.dx
    if op is OperatorKind.FORWARD_DIFF:
        return (e_phi - 1.0) / grid.dx
    if op is OperatorKind.FORWARD_AVG:
        return (e_phi + 1.0) / 2.0
    if op is OperatorKind.SPECTRAL:
        return 1j * j * (2.0 * np.pi / grid.L)
    raise TypeError(f"unknown operator kind: {op!r}")
