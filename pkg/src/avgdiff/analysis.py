"""Dispersion analysis and the square-wave reference experiment.

The experiment utilities (initial profile, truncated exact solution,
Fourier data) are tied to the linear equation u_tx = u on the canonical
period 2 pi; the operators and schemes themselves are period agnostic.
"""

import math
from dataclasses import dataclass

import numpy as np

from ._backend import kernels
from .grid import GridFunction, PeriodicGrid, TWO_PI
from .schemes import SchemeKind


def _require_canonical_period(grid: PeriodicGrid):
    if abs(grid.L - TWO_PI) > 1e-12 * TWO_PI:
        raise ValueError("this experiment utility requires the period 2*pi")


# -- phase speeds -----------------------------------------------------------


def phase_speed(kind: SchemeKind, n: int, grid: PeriodicGrid) -> float:
    """Phase speed c of the plane wave exp(i c t) exp(2 pi i n x / L)
    solving the scheme's semi-discretization of u_tx = u.

    With theta = 2 pi n / K (equal to n dx on the 2 pi period):

        central difference    c = -dx / sin(theta)
        spectral              c = -L / (2 pi n)
        average difference    c = -dx / (2 tan(theta / 2))

    The underlying equation gives -L / (2 pi n), i.e. -1/n on the
    canonical period; the spectral value is exact on every resolved
    mode.  Modes outside 0 < |n| <= (K - 1) / 2 alias and are rejected.
    """
    n = int(n)
    if n == 0 or abs(n) > grid.max_mode:
        raise ValueError(
            f"mode {n} out of range (need 0 < |n| <= {grid.max_mode})"
        )
    theta = 2.0 * math.pi * n / grid.K
    if kind is SchemeKind.CENTRAL_DIFF:
        return -grid.dx / math.sin(theta)
    if kind is SchemeKind.SPECTRAL:
        # grouped so the canonical period gives exactly -1/n
        return -(grid.L / TWO_PI) / n
    if kind is SchemeKind.AVERAGE_DIFF:
        return -grid.dx / (2.0 * math.tan(0.5 * theta))
    raise TypeError(f"unknown scheme kind: {kind!r}")


@dataclass(frozen=True)
class PhaseSpeedTable:
    """Per-mode phase speeds of the three schemes plus the exact value."""

    n: np.ndarray
    c_cd: np.ndarray
    c_ps: np.ndarray
    c_ad: np.ndarray
    c_exact: np.ndarray

    def __post_init__(self):
        cols = (self.n, self.c_cd, self.c_ps, self.c_ad, self.c_exact)
        if len({len(c) for c in cols}) != 1:
            raise ValueError("ragged phase speed table")
        for c in cols[1:]:
            if not np.all(np.isfinite(c)) or np.any(c >= 0.0):
                raise ValueError("phase speeds must be finite and negative")


def phase_speed_table(grid: PeriodicGrid, n_max: int = None) -> PhaseSpeedTable:
    """Tabulate phase speeds for n = 1..n_max (default all resolved modes)."""
    if n_max is None:
        n_max = grid.max_mode
    n_max = int(n_max)
    if n_max < 1 or n_max > grid.max_mode:
        raise ValueError(f"n_max must be in 1..{grid.max_mode}")
    ns = np.arange(1, n_max + 1)
    return PhaseSpeedTable(
        n=ns,
        c_cd=np.array([phase_speed(SchemeKind.CENTRAL_DIFF, n, grid) for n in ns]),
        c_ps=np.array([phase_speed(SchemeKind.SPECTRAL, n, grid) for n in ns]),
        c_ad=np.array([phase_speed(SchemeKind.AVERAGE_DIFF, n, grid) for n in ns]),
        c_exact=-(grid.L / TWO_PI) / ns,
    )


# -- Fourier data and the exact linear solution -----------------------------


class FourierData:
    """Complex mode amplitudes {n: a_n}, n != 0, of a zero-mean profile."""

    def __init__(self, coeffs):
        cleaned = {}
        for n, a in dict(coeffs).items():
            n = int(n)
            a = complex(a)
            if n == 0:
                raise ValueError("mode 0 is not part of FourierData")
            if not (math.isfinite(a.real) and math.isfinite(a.imag)):
                raise ValueError(f"non-finite amplitude at mode {n}")
            cleaned[n] = a
        self._coeffs = dict(sorted(cleaned.items()))

    def items(self):
        return iter(self._coeffs.items())

    def modes(self):
        return list(self._coeffs)

    def amplitude(self, n: int) -> complex:
        return self._coeffs.get(int(n), 0.0 + 0.0j)

    def is_conjugate_symmetric(self, tol: float = 1e-12) -> bool:
        return all(
            abs(a - self.amplitude(-n).conjugate()) <= tol
            for n, a in self.items()
        )

    def __len__(self):
        return len(self._coeffs)

    def __repr__(self):
        return f"FourierData({len(self)} modes)"


def step_profile(x):
    """+1 on the open interval (pi/2, 3 pi/2), -1 elsewhere on [0, 2 pi).

    Vectorized and 2 pi periodic; the jump points themselves take the
    closed-side value -1.
    """
    xm = np.mod(x, TWO_PI)
    return np.where((xm > 0.5 * math.pi) & (xm < 1.5 * math.pi), 1.0, -1.0)


def step_fourier_coefficients(n_max: int) -> FourierData:
    """Closed-form amplitudes of the square wave profile.

    a_n = -(2 / (n pi)) sin(n pi / 2): zero for even n, and for odd n
    the sine alternates +1, -1, ...  The cosine-series coefficient is
    2 a_n since the profile is even about x = pi.
    """
    n_max = int(n_max)
    if n_max < 1:
        raise ValueError("n_max must be >= 1")
    coeffs = {}
    for n in range(1, n_max + 1, 2):
        sign = 1.0 if (n - 1) % 4 == 0 else -1.0
        a = -(2.0 / (n * math.pi)) * sign
        coeffs[n] = a
        coeffs[-n] = a
    return FourierData(coeffs)


def fourier_coefficients(u0, n_max: int, num_points: int = 2 ** 16) -> FourierData:
    """Mode amplitudes a_n = (1/2 pi) integral u0(x) exp(-i n x) dx
    for 0 < |n| <= n_max.

    Composite midpoint rule with num_points uniform cells.  The cell
    edges sit on the quarter-period points whenever 4 divides
    num_points, so the square wave's jumps fall between samples and the
    rule keeps its O(h^2) accuracy there; a trapezoid rule would sample
    the jumps themselves and lose an order.  For the registered
    step_profile the closed form is returned directly.
    """
    if u0 is step_profile:
        return step_fourier_coefficients(n_max)
    n_max = int(n_max)
    if n_max < 1:
        raise ValueError("n_max must be >= 1")
    P = int(num_points)
    if P < 2 * n_max + 1:
        raise ValueError("num_points too small for the requested modes")
    h = TWO_PI / P
    xm = (np.arange(P) + 0.5) * h
    samples = np.asarray(u0(xm), dtype=float)
    coeffs = {}
    for n in range(1, n_max + 1):
        phase = np.exp(-1j * n * xm)
        a = complex((samples * phase).sum() * h / TWO_PI)
        coeffs[n] = a
        coeffs[-n] = complex((samples * phase.conjugate()).sum() * h / TWO_PI)
    return FourierData(coeffs)


def exact_linear_solution(data: FourierData, t: float,
                          grid: PeriodicGrid) -> GridFunction:
    """Sampled sum of a_n exp(-i t / n) exp(i n x) over the stored modes.

    Each mode of u_tx = u rotates with frequency -1/n, so the truncated
    solution conserves the continuous energy exactly.  Real part only;
    conjugate-symmetric data makes the imaginary part roundoff.
    """
    _require_canonical_period(grid)
    x = grid.x
    total = np.zeros(grid.K, dtype=complex)
    for n, a in data.items():
        total += a * np.exp(1j * (n * x - t / n))
    return GridFunction(total.real, grid)


# -- the square wave experiment ---------------------------------------------


def step_initial(grid: PeriodicGrid) -> GridFunction:
    """Square wave sampled at the grid points by exact integer tests.

    x_k = 2 pi k / K lies in the open interval (pi/2, 3 pi/2) iff
    K < 4 k < 3 K, so the sampling never touches floating-point
    comparisons near the jumps; points exactly on a jump (4 k equal to
    K or 3 K) take the closed-side value -1.  For odd K the two plateaus
    can never split the grid evenly: the sample mean is exactly -1/K.
    """
    _require_canonical_period(grid)
    k = np.arange(1, grid.K + 1)
    vals = np.where((4 * k > grid.K) & (4 * k < 3 * grid.K), 1.0, -1.0)
    return GridFunction(vals, grid)


def step_exact_solution(t: float, grid: PeriodicGrid,
                        n_terms: int) -> GridFunction:
    """Truncated exact solution of u_tx = u from the square wave.

    u(t, x) = sum over odd n <= n_terms of
    -(4 / (n pi)) sin(n pi / 2) cos(n x - t / n); even modes vanish.
    The sine factor is evaluated by integer parity, not by sin().
    """
    _require_canonical_period(grid)
    n_terms = int(n_terms)
    if n_terms < 1:
        raise ValueError("n_terms must be >= 1")
    n = np.arange(1, n_terms + 1, 2, dtype=float)
    sign = np.where(np.arange(n.size) % 2 == 0, 1.0, -1.0)
    amps = -(4.0 / (math.pi * n)) * sign
    shifts = t / n
    vals = kernels.cosine_series(amps, n, shifts, grid.x)
    return GridFunction(vals, grid)


# -- error and oscillation metrics ------------------------------------------


def l2_error(numerical: GridFunction, exact: GridFunction) -> float:
    """Squared-difference metric sum_k (diff_k)**2 dx (no square root)."""
    if numerical.grid != exact.grid:
        raise ValueError("grid mismatch between numerical and exact states")
    diff = numerical.values - exact.values
    return float((diff @ diff) * numerical.grid.dx)


def total_variation(u: GridFunction) -> float:
    """sum_k |u_{k+1} - u_k| around the period; 4 for the square wave."""
    return float(kernels.total_variation(u.values))
