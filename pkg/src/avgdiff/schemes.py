"""The three conservative one-step schemes and their per-mode solver.

All three advance u through an implicit relation

    D((u' - u) / dt) = R(dvd(u', u))

with D the scheme's left operator (central difference, spectral
derivative, or forward difference) and R the identity or the forward
average.  D and R are circulants, so each fixed-point sweep solves the
relation exactly per Fourier mode; the quadratic part of the variational
derivative is kept implicit in the sweep, which makes the update exact
in a single sweep whenever the density has degree <= 2.

Mode 0 needs care: every left operator annihilates constants, so the
relation only constrains the zero-mean part of the right-hand side and
leaves the mean of u' free.  The solver pins the mean of u' to the mean
of u (zero under the project-zero policy) and projects the mean out of
the right-hand side.  The discrete energy identity survives that
projection because u' - u is mean free, so conservation is exact either
way.
"""

import enum
import math
from dataclasses import dataclass

import numpy as np

from ._backend import kernels
from .grid import GridFunction, PeriodicGrid
from .operators import fft_mode_numbers, spectral_diff_complex
from .variational import DiscreteEnergy, HamiltonianDensity


class SchemeKind(enum.Enum):
    CENTRAL_DIFF = "cd"
    SPECTRAL = "ps"
    AVERAGE_DIFF = "ad"


class MeanModePolicy(enum.Enum):
    PROJECT_ZERO = "project-zero"
    REJECT = "reject"


@dataclass(frozen=True)
class SolverConfig:
    """Fixed-point controls for the implicit step."""

    fp_tol: float = 1e-13
    fp_max_iter: int = 200
    mean_mode_policy: MeanModePolicy = MeanModePolicy.PROJECT_ZERO

    def __post_init__(self):
        if not (self.fp_tol > 0.0 and math.isfinite(self.fp_tol)):
            raise ValueError("fp_tol must be positive and finite")
        if self.fp_max_iter < 1:
            raise ValueError("fp_max_iter must be >= 1")
        if not isinstance(self.mean_mode_policy, MeanModePolicy):
            raise ValueError("mean_mode_policy must be a MeanModePolicy")


class NonConvergence(RuntimeError):
    """The fixed-point solver missed fp_tol within fp_max_iter sweeps."""

    def __init__(self, message, residual, iterations, step_index=None):
        super().__init__(message)
        self.residual = residual
        self.iterations = iterations
        self.step_index = step_index


class MeanModeViolation(ValueError):
    """Nonzero-mean input under the reject policy."""


@dataclass(frozen=True)
class Trajectory:
    """States, per-step energies and solver effort recorded by run().

    snapshots     list of (time_index, GridFunction), indices ascending
    energies      list of DiscreteEnergy, one per time level 0..M
    solver_stats  fixed-point sweeps per step, length M
    """

    snapshots: list
    energies: list
    solver_stats: list

    def max_relative_energy_drift(self) -> float:
        h0 = self.energies[0].value
        scale = max(abs(h0), np.finfo(float).tiny)
        return max(abs(e.value - h0) for e in self.energies) / scale


class SchemeInstance:
    """One scheme bound to a grid, a density, a time step and solver knobs.

    Instances are immutable and safe to share; step() and run() are pure
    functions of their inputs.  dt may be negative, which runs the same
    update backwards in time (used by reversibility checks).
    """

    def __init__(self, kind: SchemeKind, grid: PeriodicGrid,
                 density: HamiltonianDensity, dt: float,
                 solver: SolverConfig = None, _identity_right: bool = False):
        dt = float(dt)
        if dt == 0.0 or not math.isfinite(dt):
            raise ValueError("dt must be nonzero and finite")
        if not isinstance(kind, SchemeKind):
            raise TypeError(f"unknown scheme kind: {kind!r}")
        self.kind = kind
        self.grid = grid
        self.density = density
        self.dt = dt
        self.solver = solver if solver is not None else SolverConfig()
        # testing hook: replacing the right operator of the average
        # difference scheme by the identity breaks conservation on purpose
        self._identity_right = bool(_identity_right)

        j = fft_mode_numbers(grid.K)
        phi = 2.0 * np.pi * j / grid.K
        if kind is SchemeKind.CENTRAL_DIFF:
            s_d = 1j * np.sin(phi) / grid.dx
            s_r = np.ones(grid.K, dtype=complex)
        elif kind is SchemeKind.SPECTRAL:
            s_d = 1j * j * (2.0 * np.pi / grid.L)
            s_r = np.ones(grid.K, dtype=complex)
        else:
            e_phi = np.exp(1j * phi)
            s_d = (e_phi - 1.0) / grid.dx
            if self._identity_right:
                s_r = np.ones(grid.K, dtype=complex)
            else:
                s_r = (e_phi + 1.0) / 2.0

        c2 = density.quadratic_coefficient
        numer = s_d / dt + c2 * s_r
        denom = s_d / dt - c2 * s_r
        denom[0] = 1.0  # mode 0 is pinned, never solved through this division
        gain = numer / denom
        gain[0] = 1.0
        for arr in (s_d, s_r, numer, denom, gain):
            arr.flags.writeable = False
        self._s_d = s_d
        self._s_r = s_r
        self._numer = numer
        self._denom = denom
        self._affine_gain = gain

    # -- stepping ---------------------------------------------------------

    def step(self, u: GridFunction) -> GridFunction:
        """Advance one time level.

        The result satisfies the scheme relation on the zero-mean
        subspace to solver tolerance; raises NonConvergence or
        MeanModeViolation per the configured policy.
        """
        self._check_grid(u)
        work = self._apply_mean_policy(u.values)
        out, _ = self._advance(work)
        return GridFunction(out, self.grid)

    def run(self, u0: GridFunction, steps: int, snapshot_stride: int = None,
            snapshot_indices=None) -> Trajectory:
        """Iterate step() M times, recording energies at every level.

        Snapshots are taken every ``snapshot_stride`` steps plus the
        final state, or exactly at ``snapshot_indices`` when given.
        NonConvergence propagates with the failing step index attached.
        """
        M = int(steps)
        if M < 0:
            raise ValueError("steps must be >= 0")
        self._check_grid(u0)
        if snapshot_indices is not None:
            snaps = {int(i) for i in snapshot_indices}
            if snaps and (min(snaps) < 0 or max(snaps) > M):
                raise ValueError("snapshot indices outside 0..M")
        else:
            stride = M if snapshot_stride is None else int(snapshot_stride)
            if stride < 1 and M > 0:
                raise ValueError("snapshot_stride must be >= 1")
            snaps = set(range(0, M + 1, stride)) if M > 0 else set()
            snaps.add(0)
            snaps.add(M)

        dx = self.grid.dx
        current = self._apply_mean_policy(u0.values)
        snapshots = []
        if 0 in snaps:
            snapshots.append((0, GridFunction(current, self.grid)))
        energies = [DiscreteEnergy(float(self.density(current).sum() * dx), 0)]
        stats = []
        for m in range(1, M + 1):
            try:
                current, sweeps = self._advance(current)
            except NonConvergence as exc:
                exc.step_index = m
                raise
            stats.append(sweeps)
            energies.append(
                DiscreteEnergy(float(self.density(current).sum() * dx), m)
            )
            if m in snaps:
                snapshots.append((m, GridFunction(current, self.grid)))
        return Trajectory(snapshots, energies, stats)

    def _advance(self, work):
        """One implicit step on raw (mean-handled) values.

        Returns (values, sweeps).  Densities of degree <= 2 make the
        per-mode relation affine, solved exactly by one sweep; otherwise
        the cubic-and-up part of dvd is lagged and re-evaluated at the
        latest iterate until the sweep-to-sweep change drops below
        fp_tol in the max norm.
        """
        uh = np.fft.fft(work)
        if self.density.degree <= 2:
            wh = self._affine_gain * uh
            wh[0] = uh[0]
            return np.ascontiguousarray(np.fft.ifft(wh).real), 1

        coeffs = self.density.coeffs
        c2 = self.density.quadratic_coefficient
        base = self._numer * uh
        w = work
        delta = math.inf
        for sweep in range(1, self.solver.fp_max_iter + 1):
            d = kernels.divided_difference(coeffs, w, work)
            if c2 != 0.0:
                d = d - c2 * (w + work)
            nh = np.fft.fft(d)
            wh = (base + self._s_r * nh) / self._denom
            wh[0] = uh[0]
            w_new = np.ascontiguousarray(np.fft.ifft(wh).real)
            delta = float(np.max(np.abs(w_new - w)))
            w = w_new
            if not math.isfinite(delta):
                raise NonConvergence(
                    "fixed-point iteration diverged",
                    residual=delta, iterations=sweep,
                )
            if delta <= self.solver.fp_tol:
                return w, sweep
        raise NonConvergence(
            f"fixed-point residual {delta:.3e} above tolerance "
            f"{self.solver.fp_tol:.1e} after {self.solver.fp_max_iter} sweeps",
            residual=delta, iterations=self.solver.fp_max_iter,
        )

    # -- diagnostics ------------------------------------------------------

    def equation_residual(self, u_prev: GridFunction,
                          u_next: GridFunction) -> float:
        """Max-norm defect of D((u' - u)/dt) = R(dvd(u', u)).

        The mean of the right-hand side is projected out first; the left
        side is mean free identically, so this measures the defect on
        the solvable subspace.
        """
        self._check_grid(u_prev)
        self._check_grid(u_next)
        dtu = (u_next.values - u_prev.values) / self.dt
        d = kernels.divided_difference(self.density.coeffs, u_next.values,
                                       u_prev.values)
        if self.kind is SchemeKind.CENTRAL_DIFF:
            lhs = kernels.central_diff(dtu, self.grid.dx)
            rhs = d
        elif self.kind is SchemeKind.SPECTRAL:
            lhs = spectral_diff_complex(dtu, self.grid).real
            rhs = d
        else:
            lhs = kernels.forward_diff(dtu, self.grid.dx)
            rhs = d if self._identity_right else kernels.forward_average(d)
        rhs = rhs - rhs.mean()
        return float(np.max(np.abs(lhs - rhs)))

    def amplification_factor(self, j: int) -> complex:
        """Per-mode gain g_j of the one-sweep update for G = c2 u**2.

        g_j = (s_D/dt + s_R c/2) / (s_D/dt - s_R c/2) with c = 2 c2; the
        ratio s_R / s_D is purely imaginary for all three schemes, so
        |g_j| = 1 and the update is neutrally stable mode by mode.
        """
        if not self.density.is_pure_quadratic:
            raise ValueError(
                "amplification factor requires a pure quadratic density"
            )
        j = int(j)
        if j == 0 or abs(j) > self.grid.max_mode:
            raise ValueError(
                f"mode {j} out of range (need 0 < |j| <= {self.grid.max_mode})"
            )
        idx = j % self.grid.K
        s_d = complex(self._s_d[idx])
        s_r = complex(self._s_r[idx])
        c = 2.0 * self.density.quadratic_coefficient
        return (s_d / self.dt + 0.5 * c * s_r) / (s_d / self.dt - 0.5 * c * s_r)

    # -- helpers ----------------------------------------------------------

    def _check_grid(self, u: GridFunction):
        if u.grid != self.grid:
            raise ValueError("grid mismatch between state and scheme")

    def _apply_mean_policy(self, values):
        mean = float(values.mean())
        if self.solver.mean_mode_policy is MeanModePolicy.REJECT:
            if abs(mean) > self.solver.fp_tol:
                raise MeanModeViolation(
                    f"|mean(u)| = {abs(mean):.3e} exceeds fp_tol "
                    f"{self.solver.fp_tol:.1e} under the reject policy"
                )
            return np.asarray(values, float)
        if mean == 0.0:
            return np.asarray(values, float)
        return values - mean

    def __repr__(self):
        return (
            f"SchemeInstance({self.kind.value}, K={self.grid.K}, "
            f"dt={self.dt!r}, G={self.density.spec_string()!r})"
        )
