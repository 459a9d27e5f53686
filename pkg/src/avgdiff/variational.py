"""Polynomial Hamiltonian density, its grid energy, and the two-point
variational derivative.

The divided-difference form of the variational derivative is what makes
the discrete chain rule

    H_d(a) - H_d(b) = sum_k dvd(a, b)_k (a_k - b_k) dx

an algebraic identity rather than an approximation; the conservative
schemes in ``avgdiff.schemes`` rely on it.
"""

import math
from dataclasses import dataclass

import numpy as np

from ._backend import kernels
from .grid import GridFunction


class HamiltonianDensity:
    """G(u) = sum_p coeffs[p] * u**p with at least one power p >= 1."""

    def __init__(self, coeffs):
        arr = np.array(coeffs, dtype=float)
        if arr.ndim != 1 or arr.size < 2:
            raise ValueError("need coefficients (c_0, ..., c_P) with P >= 1")
        if not np.all(np.isfinite(arr)):
            raise ValueError("density coefficients must be finite")
        if not np.any(arr[1:] != 0.0):
            raise ValueError("degenerate density: all powers p >= 1 vanish")
        arr.flags.writeable = False
        self.coeffs = arr

    def __call__(self, values) -> np.ndarray:
        """Pointwise G(u)."""
        return kernels.poly_eval(self.coeffs, np.ascontiguousarray(values, float))

    @property
    def degree(self) -> int:
        """Highest power with a nonzero coefficient."""
        return int(np.flatnonzero(self.coeffs)[-1])

    @property
    def quadratic_coefficient(self) -> float:
        return float(self.coeffs[2]) if self.coeffs.size > 2 else 0.0

    @property
    def is_pure_quadratic(self) -> bool:
        """True when G = c2 * u**2 exactly (the linear wave case)."""
        if self.coeffs.size < 3 or self.coeffs[2] == 0.0:
            return False
        others = np.delete(self.coeffs, 2)
        return not np.any(others != 0.0)

    def spec_string(self) -> str:
        """The 'poly:...' form accepted by parse_density."""
        return "poly:" + ",".join(repr(float(c)) for c in self.coeffs)

    def __repr__(self):
        return f"HamiltonianDensity({self.spec_string()!r})"


def parse_density(spec: str) -> HamiltonianDensity:
    """Parse a density string "poly:c0,c1,...,cP"."""
    if not isinstance(spec, str) or not spec.startswith("poly:"):
        raise ValueError(
            f"unsupported density spec {spec!r}; expected 'poly:c0,c1,...,cP'"
        )
    body = spec[len("poly:"):]
    try:
        coeffs = [float(tok) for tok in body.split(",")]
    except ValueError as exc:
        raise ValueError(f"bad coefficient in density spec {spec!r}") from exc
    return HamiltonianDensity(coeffs)


@dataclass(frozen=True)
class DiscreteEnergy:
    """Value of H_d = sum_k G(u_k) dx at one time level."""

    value: float
    time_index: int = 0

    def __post_init__(self):
        if not math.isfinite(self.value):
            raise ValueError("non-finite discrete energy")


def discrete_energy(u: GridFunction, density: HamiltonianDensity,
                    time_index: int = 0) -> DiscreteEnergy:
    """H_d(u) = sum_k G(u_k) dx."""
    return DiscreteEnergy(
        float(density(u.values).sum() * u.grid.dx), int(time_index)
    )


def discrete_variational_derivative(u_next: GridFunction, u_prev: GridFunction,
                                    density: HamiltonianDensity) -> GridFunction:
    """Two-point variational derivative dvd(u_next, u_prev).

    Entrywise the divided difference (G(a) - G(b)) / (a - b), evaluated
    in a cancellation-free form; for a = b it reduces to G'(a).
    """
    if u_next.grid != u_prev.grid:
        raise ValueError("grid mismatch between the two time levels")
    out = kernels.divided_difference(density.coeffs, u_next.values,
                                     u_prev.values)
    return GridFunction(out, u_next.grid)
