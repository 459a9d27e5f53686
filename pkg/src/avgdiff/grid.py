"""Periodic grid and the vectors living on it.

Grid point k in {1, ..., K} sits at x = k * dx with dx = L / K; arrays
are stored 0-based, so stored entry p holds the value at k = p + 1.  All
indexing is periodic: index k + K refers to the same point as index k.

K is restricted to odd values.  On an odd grid the constant is the only
null vector of every difference operator here and there is no Nyquist
mode to special-case in the transform, so every per-mode solve is well
posed.
"""

import math

import numpy as np

TWO_PI = 2.0 * math.pi


def _frozen(values, dtype):
    arr = np.array(values, dtype=dtype)
    if arr.ndim != 1:
        raise ValueError("expected a one-dimensional vector")
    arr.flags.writeable = False
    return arr


class PeriodicGrid:
    """Uniform mesh with an odd number of points K on a period L."""

    def __init__(self, K: int, L: float = TWO_PI):
        K = int(K)
        L = float(L)
        if K < 3 or K % 2 == 0:
            raise ValueError(f"K must be odd and >= 3, got {K}")
        if not math.isfinite(L) or L <= 0.0:
            raise ValueError(f"period L must be positive and finite, got {L}")
        self.K = K
        self.L = L
        self.dx = L / K

    @property
    def x(self) -> np.ndarray:
        """Sample coordinates k * dx for k = 1..K (the last one is L)."""
        return self.dx * np.arange(1, self.K + 1)

    @property
    def max_mode(self) -> int:
        """Largest resolved Fourier mode, (K - 1) / 2."""
        return (self.K - 1) // 2

    def modes(self) -> np.ndarray:
        """Centered integer mode indices -(K-1)/2 ... (K-1)/2."""
        m = self.max_mode
        return np.arange(-m, m + 1)

    def __eq__(self, other):
        return (
            isinstance(other, PeriodicGrid)
            and self.K == other.K
            and self.L == other.L
        )

    def __hash__(self):
        return hash((self.K, self.L))

    def __repr__(self):
        return f"PeriodicGrid(K={self.K}, L={self.L!r})"


class GridFunction:
    """Real-valued periodic grid vector (one time level).

    Values are copied and frozen on construction; operations on grid
    functions return new objects.
    """

    def __init__(self, values, grid: PeriodicGrid):
        arr = _frozen(values, float)
        if arr.shape != (grid.K,):
            raise ValueError(f"expected {grid.K} values, got shape {arr.shape}")
        self.values = arr
        self.grid = grid

    def at(self, k: int) -> float:
        """Value at 1-based periodic index k (index k + K aliases to k)."""
        return float(self.values[(int(k) - 1) % self.grid.K])

    def mean(self) -> float:
        return float(self.values.mean())

    def __len__(self):
        return self.grid.K

    def __repr__(self):
        return f"GridFunction(K={self.grid.K}, mean={self.mean():.3g})"


class SpectralVector:
    """Complex Fourier coefficients on centered modes -(K-1)/2 ... (K-1)/2."""

    def __init__(self, coeffs, grid: PeriodicGrid):
        arr = _frozen(coeffs, complex)
        if arr.shape != (grid.K,):
            raise ValueError(
                f"expected {grid.K} coefficients, got shape {arr.shape}"
            )
        self.coeffs = arr
        self.grid = grid

    def coeff(self, j: int) -> complex:
        """Coefficient of mode j; |j| must not exceed (K - 1) / 2."""
        m = self.grid.max_mode
        j = int(j)
        if abs(j) > m:
            raise ValueError(f"mode {j} out of range for K={self.grid.K}")
        return complex(self.coeffs[j + m])

    @property
    def modes(self) -> np.ndarray:
        return self.grid.modes()

    def __repr__(self):
        return f"SpectralVector(K={self.grid.K})"
