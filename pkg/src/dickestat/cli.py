"""Command-line driver.

Subcommands::

    dickestat stats       statistics along a tau grid for one Dicke state
    dickestat qmin-sweep  minimum Mandel-Q over a grid of (M, delta)
    dickestat figure ID   datasets behind figures 1a, 1b, 1c, 2, 3, 4
    dickestat validate    compare the pipeline with the brute-force model

Exit codes: 0 success, 1 validation failure, 2 bad configuration, 3 I/O error.
"""
from __future__ import annotations

import argparse
import os
import sys
from concurrent.futures import ThreadPoolExecutor
from dataclasses import asdict, dataclass
from typing import Optional

import numpy as np

from . import __version__, kernels
from .ensemble import DickeInitialState, dicke_state, from_excited_count
from .errors import AllUndefined, ConfigError, DickestatError
from .output import render
from .propagator import probability_batch
from .statistics import SERIES_CHUNK, birula_alpha, decompose, q_min, series_columns

EXIT_OK, EXIT_VALIDATION, EXIT_CONFIG, EXIT_IO = 0, 1, 2, 3

STATS_COLUMNS = ["tau", "mean", "variance", "std", "mandel_q", "fock_peak_n", "fock_peak_p", "tv_to_poisson"]
SWEEP_COLUMNS = ["two_m", "delta", "q_min", "tau_at_min"]
VALIDATE_COLUMNS = ["n_atoms", "excited", "delta", "tau", "max_diff"]

FIG1A_ATOMS = (1000, 3000, 5000, 7500, 10000)
FIG2_ATOMS = (100, 300, 1000, 3000)
# excited atoms per panel: 10, 900 and 1000 of N=1000
FIG3_PANELS = {"a": lambda n: max(1, n // 100), "b": lambda n: 9 * n // 10, "c": lambda n: n}
FIG4_ATOMS = (10, 100, 1000)
FIG4_DELTAS = (0.0, 10.0, 20.0, 30.0, 40.0)


class _Config(Exception):
    pass


@dataclass
class RunConfig:
    subcommand: str
    n_atoms: Optional[int] = None
    excited: Optional[int] = None
    two_j: Optional[int] = None
    two_m: Optional[int] = None
    delta: float = 0.0
    tau_min: float = 0.0
    tau_max: float = 1.0
    tau_steps: int = 1000
    grid_points: int = 2000
    output: str = "-"
    format: str = "csv"
    threads: int = 1

    def check(self, uses_taus: bool = True) -> "RunConfig":
        if self.format not in ("csv", "json"):
            raise _Config(f"format must be csv or json, got {self.format!r}")
        if uses_taus:
            if self.tau_min < 0:
                raise _Config("--tau-min must be >= 0")
            if not self.tau_max > self.tau_min:
                raise _Config("--tau-max must exceed --tau-min")
            if self.tau_steps < 1:
                raise _Config("--tau-steps must be >= 1")
        if self.grid_points < 100:
            raise _Config("--grid-points must be >= 100")
        if self.threads < 0:
            raise _Config("--threads must be >= 0")
        return self

    def taus(self) -> np.ndarray:
        return np.linspace(self.tau_min, self.tau_max, self.tau_steps)

    def workers(self) -> int:
        return self.threads or os.cpu_count() or 1

    def state(self) -> DickeInitialState:
        if self.n_atoms is not None:
            if self.two_j is not None:
                raise _Config("give either --n-atoms/--excited or --two-j/--two-m, not both")
            if self.excited is None:
                raise _Config("--n-atoms requires --excited")
            return from_excited_count(self.n_atoms, self.excited, self.delta)
        if self.two_j is None or self.two_m is None:
            raise _Config("specify the state with --n-atoms/--excited or --two-j/--two-m")
        return dicke_state(self.two_j, self.two_m, self.delta)

    def resolved_two_j(self) -> int:
        if self.n_atoms is not None:
            return self.n_atoms
        if self.two_j is None:
            raise _Config("specify --n-atoms or --two-j")
        return self.two_j


def _pmap(fn, items, workers: int):
    items = list(items)
    if workers <= 1 or len(items) <= 1:
        return [fn(x) for x in items]
    with ThreadPoolExecutor(max_workers=workers) as pool:
        return list(pool.map(fn, items))


def _series(state: DickeInitialState, taus: np.ndarray, workers: int) -> dict:
    decomp = decompose(state)
    # fixed chunk boundaries keep the output independent of the worker count
    chunks = [taus[i:i + SERIES_CHUNK] for i in range(0, max(len(taus), 1), SERIES_CHUNK)]
    parts = _pmap(lambda t: series_columns(decomp, t), chunks, workers)
    return {k: np.concatenate([p[k] for p in parts]) for k in parts[0]}


def _stats_rows(cols: dict, prefix=()):
    return [
        [*prefix, *(cols[c][i] for c in STATS_COLUMNS)]
        for i in range(cols["tau"].shape[0])
    ]


def _meta(config: RunConfig, **extra) -> dict:
    echo = {k: v for k, v in asdict(config).items() if k not in ("output",)}
    return {"version": __version__, "kernel_backend": kernels.BACKEND, "config": echo, **extra}


# -- subcommands ----------------------------------------------------------

def cmd_stats(config: RunConfig):
    config.check()
    state = config.state()
    cols = _series(state, config.taus(), config.workers())
    return STATS_COLUMNS, _stats_rows(cols), _meta(config, state=_state_meta(state))


def _state_meta(state: DickeInitialState) -> dict:
    return {"two_j": state.two_j, "two_m": state.two_m, "delta": state.delta}


def _parse_m(value: float, two_j: int) -> int:
    two = round(2 * value)
    if abs(2 * value - two) > 1e-9 or (two - two_j) % 2:
        raise _Config(f"M={value} is not a valid projection for 2J={two_j}")
    return two


def sweep_rows(two_j: int, two_ms, deltas, grid_points: int, workers: int, refine: bool = True):
    cells = [(two_m, float(d)) for d in deltas for two_m in two_ms]

    def run(cell):
        two_m, delta = cell
        r = q_min(dicke_state(two_j, two_m, delta), grid_points, refine)
        return [two_m, delta, r.q_min, r.tau_at_min]

    return _pmap(run, cells, workers)


def _m_values(two_j: int, m_min, m_max) -> list[int]:
    lo = _parse_m(m_min, two_j) if m_min is not None else -two_j + 2
    hi = _parse_m(m_max, two_j) if m_max is not None else two_j
    if lo > hi:
        raise _Config("--m-min exceeds --m-max")
    if lo < -two_j or hi > two_j:
        raise _Config(f"M range outside [-J, J] for 2J={two_j}")
    return list(range(lo, hi + 1, 2))


def cmd_qmin_sweep(config: RunConfig, m_min=None, m_max=None, deltas=FIG4_DELTAS, refine=True):
    config.check(uses_taus=False)
    two_j = config.resolved_two_j()
    two_ms = _m_values(two_j, m_min, m_max)
    rows = sweep_rows(two_j, two_ms, deltas, config.grid_points, config.workers(), refine)
    return SWEEP_COLUMNS, rows, _meta(config, two_j=two_j, deltas=list(deltas))


def _figure_1a(config, atoms, steps):
    rows = []
    for n in atoms:
        taus = np.linspace(0.0, 1.0 / np.sqrt(n / 2), steps)
        cols = _series(from_excited_count(n, n // 2, 0.0), taus, config.workers())
        rows += [
            [n, t, m, s, birula_alpha(n, t)]
            for t, m, s in zip(cols["tau"], cols["mean"], cols["std"])
        ]
    return ["n_atoms", "tau", "mean", "std", "birula_alpha"], rows


def _figure_1bc(config, n_atoms, delta, tau_max, steps, snapshots):
    state = from_excited_count(n_atoms, n_atoms // 2, delta)
    taus = np.linspace(0.0, tau_max, steps + 1)[1:]
    if not snapshots:
        return STATS_COLUMNS, _stats_rows(_series(state, taus, config.workers()))
    snap = list(np.linspace(0.0, tau_max, 6)[1:])
    snap.append(q_min(state, config.grid_points).tau_at_min)
    probs = probability_batch(decompose(state), sorted(snap))
    rows = [[t, n, p] for t, row in zip(sorted(snap), probs) for n, p in enumerate(row)]
    return ["tau", "n", "probability"], rows


def _figure_2(config, atoms, delta, tau_max, steps):
    rows = []
    taus = np.linspace(0.0, tau_max, steps)
    for n in atoms:
        cols = _series(from_excited_count(n, n // 2, delta), taus, config.workers())
        rows += [[n, t, m, s] for t, m, s in zip(cols["tau"], cols["mean"], cols["std"])]
    return ["n_atoms", "tau", "mean", "std"], rows


def _figure_3(config, n_atoms, panels, steps):
    rows = []
    for panel in panels:
        two_m = 2 * FIG3_PANELS[panel](n_atoms) - n_atoms
        state = dicke_state(n_atoms, two_m, 0.0)
        for window, tau_max in (("early", 0.05), ("late", 1.0)):
            cols = _series(state, np.linspace(0.0, tau_max, steps), config.workers())
            rows += [
                [panel, two_m, window, *(cols[c][i] for c in ("tau", "mean", "std", "mandel_q", "fock_peak_n", "fock_peak_p"))]
                for i in range(steps)
            ]
    return ["panel", "two_m", "window", "tau", "mean", "std", "mandel_q", "fock_peak_n", "fock_peak_p"], rows


def _figure_4(config, atoms, deltas):
    rows = []
    for n in atoms:
        rows += [[n, *r] for r in sweep_rows(n, _m_values(n, None, None), deltas, config.grid_points, config.workers())]
    return ["n_atoms", *SWEEP_COLUMNS], rows


def cmd_figure(config: RunConfig, fig_id: str, atoms=None, deltas=None, panel=None,
               snapshots=False, delta=None, tau_max=None, steps=None):
    config.check(uses_taus=False)
    unspecified = []
    if fig_id == "1a":
        atoms = atoms or FIG1A_ATOMS
        columns, rows = _figure_1a(config, atoms, steps or 200)
        params = {"n_atoms": list(atoms), "two_m": 0, "delta": 0.0, "tau_max": "1/sqrt(N/2)"}
    elif fig_id in ("1b", "1c"):
        n = (atoms or (1000,))[0]
        default_delta, default_tmax = (0.0, 1.0) if fig_id == "1b" else (10.0, 20.0)
        d = default_delta if delta is None else delta
        tmax = tau_max or default_tmax
        columns, rows = _figure_1bc(config, n, d, tmax, steps or 2000, snapshots)
        params = {"n_atoms": n, "two_m": 0, "delta": d, "tau_max": tmax, "snapshots": snapshots}
        unspecified = ["n_atoms", "delta"]
    elif fig_id == "2":
        atoms = atoms or FIG2_ATOMS
        d = 10.0 if delta is None else delta
        tmax = tau_max or 20.0
        columns, rows = _figure_2(config, atoms, d, tmax, steps or 2000)
        params = {"n_atoms": list(atoms), "two_m": 0, "delta": d, "tau_max": tmax}
        unspecified = ["n_atoms"]
    elif fig_id == "3":
        n = (atoms or (1000,))[0]
        panels = [panel] if panel else sorted(FIG3_PANELS)
        columns, rows = _figure_3(config, n, panels, steps or 500)
        params = {"n_atoms": n, "delta": 0.0, "panels": panels, "windows": {"early": 0.05, "late": 1.0}}
    elif fig_id == "4":
        atoms = atoms or FIG4_ATOMS
        deltas = deltas or FIG4_DELTAS
        columns, rows = _figure_4(config, atoms, deltas)
        params = {"n_atoms": list(atoms), "deltas": list(deltas), "grid_points": config.grid_points}
    else:
        raise _Config(f"unknown figure {fig_id!r}")
    meta = _meta(
        config, figure=fig_id, parameters=params,
        paper_unspecified=bool(unspecified), unspecified_parameters=unspecified,
    )
    return columns, rows, meta


def cmd_validate(config: RunConfig, max_atoms: int = 4, deltas=(0.0, 1.0, 10.0)):
    from .oracle import validate

    config.check()
    report = validate(max_atoms, deltas, config.taus())
    rows = [[e.n_atoms, e.excited, e.delta, e.tau, e.max_diff] for e in report.entries]
    worst = report.worst
    meta = _meta(
        config, passed=report.passed, threshold=report.threshold,
        worst=None if worst is None else asdict(worst),
    )
    return VALIDATE_COLUMNS, rows, meta, report


# -- argument parsing -----------------------------------------------------

def _float_list(text: str) -> list[float]:
    try:
        return [float(x) for x in text.split(",") if x.strip()]
    except ValueError:
        raise argparse.ArgumentTypeError(f"expected comma-separated numbers, got {text!r}")


def _int_list(text: str) -> list[int]:
    try:
        return [int(x) for x in text.split(",") if x.strip()]
    except ValueError:
        raise argparse.ArgumentTypeError(f"expected comma-separated integers, got {text!r}")


def _common(p: argparse.ArgumentParser, taus=True, tau_defaults=(0.0, 1.0, 1000)):
    p.add_argument("--format", choices=("csv", "json"), default="csv")
    p.add_argument("--output", default="-", help="output path (default: standard output)")
    p.add_argument("--threads", type=int, default=1, help="worker threads, 0 = all cores")
    p.add_argument("--grid-points", type=int, default=2000, help="Q_min grid size on (0, 1]")
    if taus:
        p.add_argument("--tau-min", type=float, default=tau_defaults[0])
        p.add_argument("--tau-max", type=float, default=tau_defaults[1])
        p.add_argument("--tau-steps", type=int, default=tau_defaults[2])


def _state_args(p: argparse.ArgumentParser, excited=True):
    p.add_argument("--n-atoms", type=int)
    if excited:
        p.add_argument("--excited", type=int)
    p.add_argument("--two-j", type=int)
    if excited:
        p.add_argument("--two-m", type=int)
    p.add_argument("--delta", type=float, default=0.0)


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="dickestat", description=__doc__.split("\n")[0])
    parser.add_argument("--version", action="version", version=f"%(prog)s {__version__} ({kernels.BACKEND} kernels)")
    sub = parser.add_subparsers(dest="subcommand", required=True)

    p = sub.add_parser("stats", help="photon statistics along a tau grid")
    _state_args(p)
    _common(p)

    p = sub.add_parser("qmin-sweep", help="minimum Mandel-Q over M and delta")
    _state_args(p, excited=False)
    p.add_argument("--m-min", type=float, help="smallest M (default -J+1)")
    p.add_argument("--m-max", type=float, help="largest M (default J)")
    p.add_argument("--deltas", type=_float_list, default=list(FIG4_DELTAS))
    p.add_argument("--no-refine", action="store_true", help="skip golden-section refinement")
    _common(p, taus=False)

    p = sub.add_parser("figure", help="datasets behind the published figures")
    p.add_argument("fig_id", choices=("1a", "1b", "1c", "2", "3", "4"))
    p.add_argument("--n-atoms", type=_int_list, help="atom number(s), comma separated")
    p.add_argument("--delta", type=float)
    p.add_argument("--deltas", type=_float_list)
    p.add_argument("--panel", choices=sorted(FIG3_PANELS))
    p.add_argument("--snapshots", action="store_true", help="1b/1c: emit P(n) snapshots instead of the series")
    p.add_argument("--tau-max", type=float)
    p.add_argument("--tau-steps", type=int)
    _common(p, taus=False)

    p = sub.add_parser("validate", help="check the pipeline against brute force (N <= 4)")
    p.add_argument("--max-atoms", type=int, default=4)
    p.add_argument("--deltas", type=_float_list, default=[0.0, 1.0, 10.0])
    _common(p, tau_defaults=(0.0, 3.0, 25))
    return parser


def _config_from(ns: argparse.Namespace) -> RunConfig:
    fields = RunConfig.__dataclass_fields__
    values = {k: v for k, v in vars(ns).items() if k in fields and v is not None}
    if ns.subcommand == "figure":
        values.pop("n_atoms", None)
        values.pop("delta", None)
        values.pop("tau_max", None)
    return RunConfig(**values)


def _write(text: str, path: str) -> None:
    if path == "-":
        sys.stdout.write(text)
        sys.stdout.flush()
        return
    with open(path, "w", encoding="utf-8", newline="") as fh:
        fh.write(text)


def main(argv=None) -> int:
    parser = build_parser()
    ns = parser.parse_args(argv)  # argparse exits with status 2 on bad flags
    report = None
    try:
        config = _config_from(ns)
        if ns.subcommand == "stats":
            columns, rows, meta = cmd_stats(config)
        elif ns.subcommand == "qmin-sweep":
            columns, rows, meta = cmd_qmin_sweep(config, ns.m_min, ns.m_max, ns.deltas, not ns.no_refine)
        elif ns.subcommand == "figure":
            columns, rows, meta = cmd_figure(
                config, ns.fig_id, atoms=ns.n_atoms, deltas=ns.deltas, panel=ns.panel,
                snapshots=ns.snapshots, delta=ns.delta, tau_max=ns.tau_max, steps=ns.tau_steps,
            )
        else:
            if ns.max_atoms < 1:
                raise _Config("--max-atoms must be >= 1")
            columns, rows, meta, report = cmd_validate(config, ns.max_atoms, ns.deltas)
        text = render(config.format, columns, rows, meta)
    except AllUndefined as exc:
        print(f"dickestat: error: {exc}", file=sys.stderr)
        return EXIT_CONFIG
    except (_Config, ConfigError, ValueError, TypeError) as exc:
        print(f"dickestat: configuration error: {exc}", file=sys.stderr)
        return EXIT_CONFIG
    except DickestatError as exc:
        print(f"dickestat: error: {exc}", file=sys.stderr)
        return EXIT_CONFIG
    try:
        _write(text, config.output)
    except OSError as exc:
        print(f"dickestat: cannot write output: {exc}", file=sys.stderr)
        return EXIT_IO
    if report is not None:
        worst = report.worst
        verdict = "PASS" if report.passed else "FAIL"
        detail = "" if worst is None else f" worst max|dP|={worst.max_diff:.3e} at {asdict(worst)}"
        print(f"validate: {verdict}{detail}", file=sys.stderr)
        return EXIT_OK if report.passed else EXIT_VALIDATION
    return EXIT_OK


if __name__ == "__main__":
    sys.exit(main())
