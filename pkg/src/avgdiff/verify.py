"""Self-contained invariant suite behind the ``verify`` CLI subcommand.

Each check builds its expected values from first principles (dense
stencil matrices, telescoping sums, direct linear solves), so a bug in
the fast per-mode paths cannot hide behind itself.  All randomness is
seeded; a given seed always yields the same verdicts.
"""

import math
import sys
import zlib

import numpy as np

from .grid import GridFunction, PeriodicGrid
from .operators import central_diff, forward_average, forward_diff, spectral_diff
from .schemes import MeanModePolicy, SchemeInstance, SchemeKind, SolverConfig
from .variational import (HamiltonianDensity, discrete_energy,
                          discrete_variational_derivative)

_LINEAR = HamiltonianDensity((0.0, 0.0, 0.5))
_QUARTIC = HamiltonianDensity((0.0, 0.0, 0.5, 0.0, 0.25))


def _dense_central_diff(K, dx):
    m = np.zeros((K, K))
    for i in range(K):
        m[i, (i + 1) % K] = 0.5 / dx
        m[i, (i - 1) % K] = -0.5 / dx
    return m


def _dense_forward_diff(K, dx):
    m = np.zeros((K, K))
    for i in range(K):
        m[i, (i + 1) % K] = 1.0 / dx
        m[i, i] += -1.0 / dx
    return m


def _dense_forward_average(K):
    m = np.zeros((K, K))
    for i in range(K):
        m[i, (i + 1) % K] = 0.5
        m[i, i] += 0.5
    return m


def _dense_spectral(K, L):
    k = np.arange(K)
    F = np.exp(-2j * np.pi * np.outer(k, k) / K) / math.sqrt(K)
    j = np.where(k <= (K - 1) // 2, k, k - K)
    D = F.conj().T @ (1j * j[:, None] * (2.0 * np.pi / L) * F)
    return D.real


def _rand_zero_mean(rng, K):
    u = rng.uniform(-1.0, 1.0, K)
    u -= u.mean()
    return u


def _check_skew_symmetry(rng):
    worst = 0.0
    for K in (5, 9, 65):
        grid = PeriodicGrid(K)
        for _ in range(20):
            u = GridFunction(rng.standard_normal(K), grid)
            v = GridFunction(rng.standard_normal(K), grid)
            for op in (central_diff, spectral_diff):
                a = float(u.values @ op(v).values) * grid.dx
                b = float(op(u).values @ v.values) * grid.dx
                scale = (np.abs(u.values * op(v).values).sum()
                         + np.abs(op(u).values * v.values).sum()) * grid.dx
                worst = max(worst, abs(a + b) / max(scale, 1.0))
    return worst <= 1e-12, f"max relative defect {worst:.2e}"


def _check_summation_by_parts(rng):
    worst = 0.0
    for K in (5, 9, 65):
        grid = PeriodicGrid(K)
        for _ in range(20):
            u = GridFunction(rng.standard_normal(K), grid)
            terms = forward_diff(u).values * forward_average(u).values
            worst = max(worst, abs(terms.sum()) / max(np.abs(terms).sum(), 1.0))
    return worst <= 1e-12, f"max relative defect {worst:.2e}"


def _check_product_identity(rng):
    # (a'b' + ab)/2 = ((a'+a)/2)((b'+b)/2) + (1/4)(a'-a)(b'-b)
    worst = 0.0
    for _ in range(200):
        ap, a, bp, b = rng.uniform(-10.0, 10.0, 4)
        lhs = 0.5 * (ap * bp + a * b)
        rhs = 0.25 * (ap + a) * (bp + b) + 0.25 * (ap - a) * (bp - b)
        worst = max(worst, abs(lhs - rhs) / max(abs(lhs), abs(rhs), 1.0))
    return worst <= 1e-12, f"max relative defect {worst:.2e}"


def _check_chain_rule(rng):
    worst = 0.0
    grid = PeriodicGrid(17)
    for _ in range(40):
        deg = rng.integers(1, 7)
        coeffs = rng.uniform(-1.0, 1.0, deg + 1)
        if not np.any(coeffs[1:]):
            coeffs[deg] = 1.0
        density = HamiltonianDensity(coeffs)
        a = GridFunction(rng.standard_normal(grid.K), grid)
        b = GridFunction(rng.standard_normal(grid.K), grid)
        dh = (discrete_energy(a, density).value
              - discrete_energy(b, density).value)
        dvd = discrete_variational_derivative(a, b, density)
        quad = float(dvd.values @ (a.values - b.values)) * grid.dx
        worst = max(worst, abs(dh - quad) / max(abs(dh), abs(quad), 1.0))
    return worst <= 1e-12, f"max relative defect {worst:.2e}"


def _check_dense_linear_oracle(rng, corrupt_ad_right):
    grid = PeriodicGrid(17)
    dt = 0.01
    worst = 0.0
    dense_left = {
        SchemeKind.CENTRAL_DIFF: _dense_central_diff(grid.K, grid.dx),
        SchemeKind.SPECTRAL: _dense_spectral(grid.K, grid.L),
        SchemeKind.AVERAGE_DIFF: _dense_forward_diff(grid.K, grid.dx),
    }
    dense_right = {
        SchemeKind.CENTRAL_DIFF: np.eye(grid.K),
        SchemeKind.SPECTRAL: np.eye(grid.K),
        SchemeKind.AVERAGE_DIFF: _dense_forward_average(grid.K),
    }
    for kind in SchemeKind:
        hook = corrupt_ad_right and kind is SchemeKind.AVERAGE_DIFF
        scheme = SchemeInstance(kind, grid, _LINEAR, dt, _identity_right=hook)
        D = dense_left[kind] / dt
        A = 0.5 * dense_right[kind]  # dvd = (u' + u)/2 for G = u^2/2
        for _ in range(5):
            u = _rand_zero_mean(rng, grid.K)
            direct = np.linalg.solve(D - A, (D + A) @ u)
            stepped = scheme.step(GridFunction(u, grid)).values
            worst = max(worst, float(np.max(np.abs(direct - stepped))))
    return worst <= 1e-10, f"max deviation {worst:.2e}"


def _check_energy_drift(rng, corrupt_ad_right):
    grid = PeriodicGrid(17)
    solver = SolverConfig(mean_mode_policy=MeanModePolicy.PROJECT_ZERO)
    worst = 0.0
    for density in (_LINEAR, _QUARTIC):
        for kind in SchemeKind:
            hook = corrupt_ad_right and kind is SchemeKind.AVERAGE_DIFF
            scheme = SchemeInstance(kind, grid, density, 0.01, solver,
                                    _identity_right=hook)
            u0 = GridFunction(_rand_zero_mean(rng, grid.K), grid)
            traj = scheme.run(u0, 200)
            worst = max(worst, traj.max_relative_energy_drift())
    return worst <= 1e-9, f"max relative drift {worst:.2e}"


def run_verification(seed: int = 0, corrupt_ad_right: bool = False,
                     stream=None) -> bool:
    """Run every invariant check; print one PASS/FAIL line each.

    ``corrupt_ad_right`` is a debug hook that replaces the right
    operator of the average difference scheme by the identity, which
    must make the conservation check fail (a sensitivity probe for the
    suite itself).
    """
    if stream is None:
        stream = sys.stdout
    checks = [
        ("skew-symmetry", lambda r: _check_skew_symmetry(r)),
        ("summation-by-parts", lambda r: _check_summation_by_parts(r)),
        ("product-identity", lambda r: _check_product_identity(r)),
        ("chain-rule", lambda r: _check_chain_rule(r)),
        ("dense-linear-oracle",
         lambda r: _check_dense_linear_oracle(r, corrupt_ad_right)),
        ("energy-conservation",
         lambda r: _check_energy_drift(r, corrupt_ad_right)),
    ]
    all_ok = True
    for name, fn in checks:
        rng = np.random.default_rng([seed, zlib.crc32(name.encode())])
        ok, detail = fn(rng)
        all_ok = all_ok and ok
        print(f"{'PASS' if ok else 'FAIL'} {name}: {detail}", file=stream)
    return all_ok
