"""Command-line experiment runner.

Subcommands:

    run           integrate one scheme, write snapshots/energy/error CSVs
    phase-speeds  tabulate per-mode phase speeds of the three schemes
    verify        run the invariant suite, exit nonzero on any failure

Exit codes: 0 success, 1 configuration error, 2 solver non-convergence
(with the failing step index on stderr), 3 verification failure.

Every CSV starts with a '#' comment echoing the effective configuration,
then a header line.  Output is deterministic: identical configuration
and seed reproduce byte-identical files.
"""

import argparse
import math
import os
import sys
from dataclasses import dataclass
from pathlib import Path

import numpy as np

from ._backend import backend_name
from .analysis import (exact_linear_solution, FourierData, phase_speed_table,
                       step_exact_solution, step_initial, l2_error)
from .grid import GridFunction, PeriodicGrid
from .schemes import (MeanModePolicy, NonConvergence, SchemeInstance,
                      SchemeKind, SolverConfig, Trajectory)
from .variational import discrete_energy, parse_density
from .verify import run_verification

ENV_OUTPUT_DIR = "AVGDIFF_OUTPUT_DIR"


def _fmt(v):
    if isinstance(v, float):
        return repr(v)
    return str(v)


@dataclass
class RunConfig:
    """Effective settings for one 'run' invocation."""

    scheme: str = None
    K: int = 129
    dt: float = 0.01
    t_end: float = 50.0
    density: str = "poly:0.0,0.0,0.5"
    init: str = "step"
    snapshot_times: list = None
    output_dir: str = None
    exact_truncation: int = 100000
    mean_mode_policy: str = "project-zero"
    fp_tol: float = 1e-13
    fp_max_iter: int = 200
    seed: int = 0
    gnuplot: bool = False

    def comment(self) -> str:
        times = ",".join(_fmt(t) for t in self.snapshot_times)
        return (
            f"avgdiff run scheme={self.scheme} K={self.K} dt={_fmt(self.dt)} "
            f"t_end={_fmt(self.t_end)} density={self.density} init={self.init} "
            f"snapshot_times={times} exact_truncation={self.exact_truncation} "
            f"mean_mode_policy={self.mean_mode_policy} fp_tol={_fmt(self.fp_tol)} "
            f"fp_max_iter={self.fp_max_iter} seed={self.seed}"
        )


_RUN_FIELD_PARSERS = {
    "scheme": str,
    "k": int,
    "dt": float,
    "t_end": float,
    "density": str,
    "init": str,
    "snapshot_times": lambda s: [float(tok) for tok in str(s).split(",") if tok != ""],
    "output_dir": str,
    "exact_truncation": int,
    "mean_mode_policy": str,
    "fp_tol": float,
    "fp_max_iter": int,
    "seed": int,
}


def _load_config_file(path):
    """Key-value file: 'key = value' per line, '#' comments, keys match
    the run flags (kebab or snake case)."""
    entries = {}
    text = Path(path).read_text()
    for lineno, raw in enumerate(text.splitlines(), 1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        if "=" not in line:
            raise ValueError(f"{path}:{lineno}: expected 'key = value'")
        key, _, value = line.partition("=")
        key = key.strip().lower().replace("-", "_")
        if key not in _RUN_FIELD_PARSERS:
            raise ValueError(f"{path}:{lineno}: unknown key {key!r}")
        entries[key] = _RUN_FIELD_PARSERS[key](value.strip())
    return entries


def _steps_from_times(t_end, dt):
    """Integer step count M with M * dt = t_end, rejecting misfits."""
    if dt <= 0 or not math.isfinite(dt):
        raise ValueError("dt must be positive and finite")
    if t_end < 0 or not math.isfinite(t_end):
        raise ValueError("t_end must be nonnegative and finite")
    ratio = t_end / dt
    M = int(round(ratio))
    if abs(ratio - M) > 1e-9 * max(1.0, abs(ratio)):
        raise ValueError(f"t_end/dt = {ratio!r} is not an integer step count")
    return M


def _time_index(t, dt, M):
    ratio = t / dt
    m = int(round(ratio))
    if abs(ratio - m) > 1e-9 * max(1.0, abs(ratio)) or not 0 <= m <= M:
        raise ValueError(f"snapshot time {t!r} is not a step multiple within the run")
    return m


def _initial_state(init, grid):
    if init == "step":
        return step_initial(grid)
    if init.startswith("sine:"):
        try:
            n = int(init[len("sine:"):])
        except ValueError as exc:
            raise ValueError(f"bad init spec {init!r}") from exc
        if n < 1 or n > grid.max_mode:
            raise ValueError(
                f"sine mode {n} out of range (need 1 <= n <= {grid.max_mode})"
            )
        return GridFunction(np.sin(n * grid.x), grid)
    if init.startswith("file:"):
        path = init[len("file:"):]
        vals = np.loadtxt(path, dtype=float, ndmin=1)
        if vals.shape != (grid.K,):
            raise ValueError(
                f"{path}: expected {grid.K} values, got shape {vals.shape}"
            )
        return GridFunction(vals, grid)
    raise ValueError(f"unknown init spec {init!r}; use step, sine:n or file:path")


def _exact_state(cfg, grid, t):
    """Reference solution of u_tx = u for the step or sine profiles."""
    if cfg.init == "step":
        return step_exact_solution(t, grid, cfg.exact_truncation)
    n = int(cfg.init[len("sine:"):])
    data = FourierData({n: -0.5j, -n: 0.5j})  # sin(n x)
    return exact_linear_solution(data, t, grid)


def _error_reference_available(cfg, density):
    if not density.is_pure_quadratic or density.coeffs[2] != 0.5:
        return False  # the reference series solves u_tx = u specifically
    return cfg.init == "step" or cfg.init.startswith("sine:")


def _write_csv(path, comment, header, rows):
    with open(path, "w", newline="") as fh:
        fh.write(f"# {comment}\n")
        fh.write(header + "\n")
        for row in rows:
            fh.write(",".join(_fmt(v) for v in row) + "\n")


def _resolve_output_dir(flag_value):
    out = flag_value or os.environ.get(ENV_OUTPUT_DIR) or "out"
    path = Path(out)
    path.mkdir(parents=True, exist_ok=True)
    return path


_RUN_GNUPLOT = """\
# gnuplot companion for one run; expects the CSVs in this directory
set datafile separator ','
last_t = system("tail -n 1 snapshots.csv | cut -d',' -f1")
profile = "< awk -F, -v t=" . last_t . " '$1 == t' snapshots.csv"
set xlabel 'x'
set ylabel 'u'
plot profile using 2:3 with lines title 'u at final time'
pause -1 'final profile; press enter'
set xlabel 't'
set ylabel 'relative drift'
plot 'energy.csv' using 1:3 with lines title 'energy drift'
pause -1 'energy drift; press enter'
"""

_PHASE_GNUPLOT = """\
# gnuplot companion for the phase speed table
set datafile separator ','
set xlabel 'n'
set ylabel 'phase speed'
plot 'phase_speeds.csv' using 1:2 title 'central difference', \\
     '' using 1:3 title 'spectral', \\
     '' using 1:4 title 'average difference', \\
     '' using 1:5 with lines title 'exact'
pause -1 'press enter'
"""


def _cmd_run(cfg: RunConfig) -> int:
    grid = PeriodicGrid(cfg.K)
    density = parse_density(cfg.density)
    M = _steps_from_times(cfg.t_end, cfg.dt)
    if cfg.snapshot_times is None:
        cfg.snapshot_times = [0.0, M * cfg.dt] if M > 0 else [0.0]
    policy = MeanModePolicy(cfg.mean_mode_policy)
    solver = SolverConfig(fp_tol=cfg.fp_tol, fp_max_iter=cfg.fp_max_iter,
                          mean_mode_policy=policy)
    kind = SchemeKind(cfg.scheme)
    scheme = SchemeInstance(kind, grid, density, cfg.dt, solver)
    u0 = _initial_state(cfg.init, grid)
    indices = sorted({_time_index(t, cfg.dt, M) for t in cfg.snapshot_times})

    if M == 0:
        trajectory = Trajectory(
            snapshots=[(0, u0)],
            energies=[discrete_energy(u0, density, 0)],
            solver_stats=[],
        )
    else:
        try:
            trajectory = scheme.run(u0, M, snapshot_indices=indices)
        except NonConvergence as exc:
            print(
                f"step {exc.step_index}: {exc} "
                f"(residual {exc.residual:.3e} after {exc.iterations} sweeps)",
                file=sys.stderr,
            )
            return 2

    outdir = _resolve_output_dir(cfg.output_dir)
    comment = cfg.comment()

    snap_rows = []
    for m, state in trajectory.snapshots:
        t = m * cfg.dt
        for xk, uk in zip(grid.x, state.values):
            snap_rows.append((t, float(xk), float(uk)))
    _write_csv(outdir / "snapshots.csv", comment, "t,x,u", snap_rows)

    h0 = trajectory.energies[0].value
    scale = max(abs(h0), np.finfo(float).tiny)
    energy_rows = [
        (e.time_index * cfg.dt, e.value, (e.value - h0) / scale)
        for e in trajectory.energies
    ]
    _write_csv(outdir / "energy.csv", comment, "t,H_d,drift", energy_rows)

    final_error = None
    if _error_reference_available(cfg, density):
        error_rows = []
        for m, state in trajectory.snapshots:
            t = m * cfg.dt
            err = l2_error(state, _exact_state(cfg, grid, t))
            error_rows.append((t, err))
        _write_csv(outdir / "error.csv", comment, "t,l2_error", error_rows)
        if error_rows:
            final_error = error_rows[-1][1]

    if cfg.gnuplot:
        (outdir / "run.gp").write_text(_RUN_GNUPLOT)

    max_drift = max(abs(r[2]) for r in energy_rows)
    max_sweeps = max(trajectory.solver_stats, default=0)
    err_text = "n/a" if final_error is None else repr(final_error)
    print(
        f"run ok: scheme={cfg.scheme} K={cfg.K} steps={M} "
        f"final_error={err_text} max_drift={max_drift:.3e} "
        f"max_sweeps={max_sweeps} backend={backend_name()} dir={outdir}"
    )
    return 0


def _cmd_phase_speeds(args) -> int:
    grid = PeriodicGrid(args.K)
    table = phase_speed_table(grid, args.n_max)
    outdir = _resolve_output_dir(args.output_dir)
    comment = f"avgdiff phase-speeds K={args.K} n_max={args.n_max}"
    rows = [
        (int(n), float(cd), float(ps), float(ad), float(ex))
        for n, cd, ps, ad, ex in zip(table.n, table.c_cd, table.c_ps,
                                     table.c_ad, table.c_exact)
    ]
    _write_csv(outdir / "phase_speeds.csv", comment,
               "n,c_cd,c_ps,c_ad,c_exact", rows)
    if args.gnuplot:
        (outdir / "phase_speeds.gp").write_text(_PHASE_GNUPLOT)
    print(f"phase-speeds ok: K={args.K} n_max={args.n_max} dir={outdir}")
    return 0


def _cmd_verify(args) -> int:
    ok = run_verification(seed=args.seed,
                          corrupt_ad_right=args.corrupt_ad_right)
    return 0 if ok else 3


def _build_parser():
    parser = argparse.ArgumentParser(
        prog="avgdiff",
        description="Energy-conserving schemes for u_tx = dG/du on a periodic domain",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    run_p = sub.add_parser("run", help="integrate one scheme and write CSVs")
    run_p.add_argument("--config", help="key=value file; flags override it")
    run_p.add_argument("--scheme", metavar="{cd,ps,ad}")
    run_p.add_argument("--K", type=int, dest="k")
    run_p.add_argument("--dt", type=float)
    run_p.add_argument("--t-end", type=float, dest="t_end")
    run_p.add_argument("--density", help="poly:c0,c1,...,cP")
    run_p.add_argument("--init", help="step | sine:n | file:path")
    run_p.add_argument("--snapshot-times", dest="snapshot_times",
                       help="comma separated times, multiples of dt")
    run_p.add_argument("--output-dir", dest="output_dir",
                       help=f"default ${ENV_OUTPUT_DIR} or ./out")
    run_p.add_argument("--exact-truncation", type=int, dest="exact_truncation")
    run_p.add_argument("--mean-mode-policy", dest="mean_mode_policy",
                       metavar="{project-zero,reject}")
    run_p.add_argument("--fp-tol", type=float, dest="fp_tol")
    run_p.add_argument("--fp-max-iter", type=int, dest="fp_max_iter")
    run_p.add_argument("--seed", type=int)
    run_p.add_argument("--gnuplot", action="store_true", default=None,
                       help="also emit a gnuplot script")

    ps_p = sub.add_parser("phase-speeds", help="write the phase speed table")
    ps_p.add_argument("--K", type=int, dest="K", default=65)
    ps_p.add_argument("--n-max", type=int, dest="n_max", default=None)
    ps_p.add_argument("--output-dir", dest="output_dir", default=None)
    ps_p.add_argument("--gnuplot", action="store_true")

    v_p = sub.add_parser("verify", help="run the invariant suite")
    v_p.add_argument("--seed", type=int, default=0)
    v_p.add_argument("--corrupt-ad-right", action="store_true",
                     help=argparse.SUPPRESS)

    return parser


def _effective_run_config(args) -> RunConfig:
    file_entries = {}
    if args.config:
        file_entries = _load_config_file(args.config)
    cfg = RunConfig()
    flag_values = {
        "scheme": args.scheme,
        "k": args.k,
        "dt": args.dt,
        "t_end": args.t_end,
        "density": args.density,
        "init": args.init,
        "snapshot_times": (
            _RUN_FIELD_PARSERS["snapshot_times"](args.snapshot_times)
            if args.snapshot_times is not None else None
        ),
        "output_dir": args.output_dir,
        "exact_truncation": args.exact_truncation,
        "mean_mode_policy": args.mean_mode_policy,
        "fp_tol": args.fp_tol,
        "fp_max_iter": args.fp_max_iter,
        "seed": args.seed,
        "gnuplot": args.gnuplot,
    }
    for key, value in file_entries.items():
        setattr(cfg, "K" if key == "k" else key, value)
    for key, value in flag_values.items():
        if value is not None:
            setattr(cfg, "K" if key == "k" else key, value)
    if cfg.scheme is None:
        raise ValueError("--scheme is required (cd, ps or ad)")
    if cfg.scheme not in {k.value for k in SchemeKind}:
        raise ValueError(f"unknown scheme {cfg.scheme!r} (expected cd, ps or ad)")
    if cfg.gnuplot is None:
        cfg.gnuplot = False
    return cfg


def main(argv=None) -> int:
    parser = _build_parser()
    args = parser.parse_args(argv)
    try:
        if args.command == "run":
            return _cmd_run(_effective_run_config(args))
        if args.command == "phase-speeds":
            return _cmd_phase_speeds(args)
        if args.command == "verify":
            return _cmd_verify(args)
    except (ValueError, OSError) as exc:
        print(f"configuration error: {exc}", file=sys.stderr)
        return 1
    raise AssertionError("unreachable")


if __name__ == "__main__":
    sys.exit(main())
