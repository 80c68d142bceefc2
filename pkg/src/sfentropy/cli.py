"""Command-line front end.

Four commands:

* ``report`` -- full entropy report for a single model, as a table and a
  CSV row.
* ``sweep``  -- one report per member of a charge (or frequency) range.
* ``curves`` -- CSV files reproducing the package's reference figures
  (structure-factor curves, entropy trends, 2d surfaces).
* ``verify`` -- the named verification suite; exit code 0 iff every
  check passes.

Configuration uses flat INI files (sections [run], [quadrature],
[sweep], [curves]); command-line flags override file values, and the
SFENTROPY_OUTPUT_DIR environment variable overrides the configured
output directory (flags still win).  All CSV output has a header row,
12-significant-digit values and deterministic ordering, so identical
configurations produce byte-identical files.

Report / sweep CSV column order:

    system, Z, omega, Z1, Z2, C_N, E_total,
    S_F, S_B, S_F2, S_B2, S_rho, S_pi, S_Gamma, S_Pi,
    I_F, I_B, I_r, I_p, delta_S_F, delta_S_B

Fields that do not apply to a system are left empty.
"""

from __future__ import annotations

import argparse
import configparser
import dataclasses
import math
import os
import sys
from concurrent.futures import ProcessPoolExecutor
from pathlib import Path

import numpy as np

from .checks import run_all_checks
from .entropy import (
    EntropyReport,
    closed_form_entropy,
    compute_report,
)
from .errors import ConfigError, SfentropyError
from .factors import factor_B, factor_B2, factor_F, factor_F2
from .models import HarmonicOscillator1D, HydrogenicAtom, SplitShellModel
from .quadrature import DEFAULT_SPEC, QuadratureSpec
from .variational import optimize_series

__all__ = ["main", "RunConfig", "load_config"]

_SYSTEMS = ("hydrogenic", "oscillator", "helium", "helium-NI")
_COMMANDS = ("report", "sweep", "curves", "verify")
_ENV_OUTPUT = "SFENTROPY_OUTPUT_DIR"

REPORT_COLUMNS = (
    "system", "Z", "omega", "Z1", "Z2", "C_N", "E_total",
    "S_F", "S_B", "S_F2", "S_B2", "S_rho", "S_pi", "S_Gamma", "S_Pi",
    "I_F", "I_B", "I_r", "I_p", "delta_S_F", "delta_S_B",
)

_ALL_FIGURES = tuple(f"fig{i}" for i in range(1, 15))


@dataclasses.dataclass
class RunConfig:
    command: str = "report"
    system: str = "hydrogenic"
    z: float = 1.0
    omega: float = 1.0
    z_range: tuple[float, float, float] = (2.0, 10.0, 1.0)
    omega_range: tuple[float, float, float] = (0.25, 4.0, 0.25)
    z1: float | None = None  # explicit split-shell exponents bypass the optimizer
    z2: float | None = None
    output_dir: Path = Path("out")
    workers: int = 1
    figures: tuple[str, ...] = _ALL_FIGURES
    grid_max: float = 10.0
    grid_points: int = 400
    grid_points_2d: int = 200
    cache_path: Path | None = None
    spec: QuadratureSpec = DEFAULT_SPEC


def _parse_range(text: str) -> tuple[float, float, float]:
    parts = text.split(":")
    if len(parts) != 3:
        raise ConfigError(f"range must be 'start:stop:step', got {text!r}")
    try:
        start, stop, step = (float(p) for p in parts)
    except ValueError as exc:
        raise ConfigError(f"malformed range {text!r}") from exc
    if step <= 0 or stop < start:
        raise ConfigError(f"range {text!r} must be non-empty with positive step")
    return start, stop, step


def _range_values(rng: tuple[float, float, float]) -> list[float]:
    start, stop, step = rng
    n = int(math.floor((stop - start) / step + 1e-9)) + 1
    return [start + i * step for i in range(n)]


def load_config(path) -> RunConfig:
    """Read a RunConfig from an INI file."""
    parser = configparser.ConfigParser()
    read = parser.read(path)
    if not read:
        raise ConfigError(f"cannot read config file {path}")
    cfg = RunConfig()
    try:
        if parser.has_section("run"):
            run = parser["run"]
            cfg.command = run.get("command", cfg.command)
            cfg.system = run.get("system", cfg.system)
            cfg.z = run.getfloat("z", cfg.z)
            cfg.omega = run.getfloat("omega", cfg.omega)
            if "z1" in run:
                cfg.z1 = run.getfloat("z1")
            if "z2" in run:
                cfg.z2 = run.getfloat("z2")
            if "output_dir" in run:
                cfg.output_dir = Path(run.get("output_dir"))
            if "cache_path" in run:
                cfg.cache_path = Path(run.get("cache_path"))
        if parser.has_section("sweep"):
            sw = parser["sweep"]
            if "z_range" in sw:
                cfg.z_range = _parse_range(sw.get("z_range"))
            if "omega_range" in sw:
                cfg.omega_range = _parse_range(sw.get("omega_range"))
            cfg.workers = sw.getint("workers", cfg.workers)
        if parser.has_section("curves"):
            cu = parser["curves"]
            if "figures" in cu:
                cfg.figures = tuple(
                    f.strip() for f in cu.get("figures").split(",") if f.strip()
                )
            cfg.grid_max = cu.getfloat("grid_max", cfg.grid_max)
            cfg.grid_points = cu.getint("grid_points", cfg.grid_points)
            cfg.grid_points_2d = cu.getint("grid_points_2d", cfg.grid_points_2d)
        if parser.has_section("quadrature"):
            qu = parser["quadrature"]
            kwargs = {}
            for field in ("rel_tol", "abs_tol", "tail_cutoff_decades"):
                if field in qu:
                    kwargs[field] = qu.getfloat(field)
            for field in ("panel_order", "max_panels", "oscillatory_panels_per_period"):
                if field in qu:
                    kwargs[field] = qu.getint(field)
            cfg.spec = dataclasses.replace(DEFAULT_SPEC, **kwargs)
    except (ValueError, ConfigError) as exc:
        raise ConfigError(f"invalid configuration: {exc}") from exc
    _validate(cfg)
    return cfg


def _validate(cfg: RunConfig) -> None:
    if cfg.command not in _COMMANDS:
        raise ConfigError(f"unknown command {cfg.command!r}; choose from {_COMMANDS}")
    if cfg.system not in _SYSTEMS:
        raise ConfigError(f"unknown system {cfg.system!r}; choose from {_SYSTEMS}")
    unknown = [f for f in cfg.figures if f not in _ALL_FIGURES]
    if unknown:
        raise ConfigError(f"unknown figures {unknown}; valid: fig1..fig14")
    if cfg.workers < 1:
        raise ConfigError("workers must be at least 1")


# ---------------------------------------------------------------------------
# model construction and CSV plumbing
# ---------------------------------------------------------------------------

def _build_model(cfg: RunConfig, z: float | None = None):
    if cfg.system == "hydrogenic":
        return HydrogenicAtom(z if z is not None else cfg.z)
    if cfg.system == "oscillator":
        return HarmonicOscillator1D(z if z is not None else cfg.omega)
    zz = z if z is not None else cfg.z
    if cfg.system == "helium-NI":
        return SplitShellModel(zz, zz, zz)
    if cfg.z1 is not None and cfg.z2 is not None:
        return SplitShellModel(zz, cfg.z1, cfg.z2)
    params = optimize_series([zz], cfg.cache_path)[round(zz, 9)]
    return SplitShellModel(zz, params.Z1, params.Z2)


def _fmt(value) -> str:
    if value is None:
        return ""
    return f"{value:.12g}"


def _report_row(system: str, model, report: EntropyReport, total_energy=None) -> list[str]:
    p = report.model_params or {}
    vals = {
        "system": system,
        "Z": p.get("Z"),
        "omega": p.get("omega"),
        "Z1": p.get("Z1"),
        "Z2": p.get("Z2"),
        "C_N": p.get("C_N"),
        "E_total": total_energy,
        "S_F": report.S_F, "S_B": report.S_B,
        "S_F2": report.S_F2, "S_B2": report.S_B2,
        "S_rho": report.S_rho, "S_pi": report.S_pi,
        "S_Gamma": report.S_Gamma, "S_Pi": report.S_Pi,
        "I_F": report.I_F, "I_B": report.I_B,
        "I_r": report.I_r, "I_p": report.I_p,
        "delta_S_F": report.delta_S_F, "delta_S_B": report.delta_S_B,
    }
    return [vals["system"]] + [_fmt(vals[c]) for c in REPORT_COLUMNS[1:]]


def _write_csv(path: Path, header, rows) -> None:
    path.parent.mkdir(parents=True, exist_ok=True)
    lines = [",".join(header)]
    lines += [",".join(str(c) for c in row) for row in rows]
    path.write_text("\n".join(lines) + "\n")


def _total_energy(cfg: RunConfig, model) -> float | None:
    if not isinstance(model, SplitShellModel):
        return None
    from .variational import energy

    return energy(model.Z1, model.Z2, model.Z).total


# ---------------------------------------------------------------------------
# commands
# ---------------------------------------------------------------------------

def _cmd_report(cfg: RunConfig) -> int:
    model = _build_model(cfg)
    report = compute_report(model, cfg.spec)
    e_tot = _total_energy(cfg, model)

    print(f"system: {cfg.system}")
    for key, val in (report.model_params or {}).items():
        print(f"  {key:12s} {val:.10g}")
    if e_tot is not None:
        print(f"  {'E_total':12s} {e_tot:.10g} hartree")
    for name in REPORT_COLUMNS[7:]:
        val = getattr(report, name)
        if val is not None:
            print(f"  {name:12s} {val:.10g}")

    out = cfg.output_dir / f"report_{cfg.system}.csv"
    _write_csv(out, REPORT_COLUMNS, [_report_row(cfg.system, model, report, e_tot)])
    print(f"wrote {out}")
    return 0


def _sweep_member(args) -> tuple[float, list[str] | str]:
    cfg, z = args
    try:
        model = _build_model(cfg, z)
        report = compute_report(model, cfg.spec)
        return z, _report_row(cfg.system, model, report, _total_energy(cfg, model))
    except SfentropyError as exc:  # flush partial results with a marker
        return z, f"error: {exc}"


def _cmd_sweep(cfg: RunConfig) -> int:
    values = _range_values(cfg.omega_range if cfg.system == "oscillator" else cfg.z_range)
    if cfg.system in ("helium", "helium-NI") and cfg.z1 is None:
        optimize_series(values, cfg.cache_path)  # warm the cache once

    jobs = [(cfg, z) for z in values]
    if cfg.workers > 1:
        with ProcessPoolExecutor(max_workers=cfg.workers) as pool:
            results = dict(pool.map(_sweep_member, jobs))
    else:
        results = dict(map(_sweep_member, jobs))

    rows, failures = [], []
    for z in values:  # ordered by parameter regardless of completion order
        res = results[z]
        if isinstance(res, str):
            failures.append((z, res))
            rows.append([cfg.system, _fmt(z)] + [""] * (len(REPORT_COLUMNS) - 3) + [res])
        else:
            rows.append(res)
    out = cfg.output_dir / f"sweep_{cfg.system}.csv"
    _write_csv(out, REPORT_COLUMNS, rows)
    print(f"wrote {out} ({len(values)} members, {len(failures)} failed)")
    for z, msg in failures:
        print(f"  member {z}: {msg}", file=sys.stderr)
    return 1 if failures else 0


def _curve_grid(cfg: RunConfig, n: int | None = None) -> np.ndarray:
    return np.linspace(0.0, cfg.grid_max, n or cfg.grid_points)


def _he_series_models(cfg: RunConfig, zs) -> dict[float, SplitShellModel]:
    params = optimize_series(zs, cfg.cache_path)
    return {z: SplitShellModel(z, p.Z1, p.Z2) for z, p in params.items()}


def _emit_1d_family(cfg, name, columns, grid, evaluators) -> Path:
    rows = []
    for i, x in enumerate(grid):
        rows.append([_fmt(x)] + [_fmt(ev[i]) for ev in evaluators])
    out = cfg.output_dir / f"{name}.csv"
    _write_csv(out, columns, rows)
    return out


def _emit_surface(cfg, name, axis_names, factor) -> Path:
    grid = _curve_grid(cfg, cfg.grid_points_2d)
    vals = factor(grid[:, None], grid[None, :])
    rows = []
    for i, x in enumerate(grid):
        for j, y in enumerate(grid):
            rows.append([_fmt(x), _fmt(y), _fmt(vals[i, j])])
    out = cfg.output_dir / f"{name}.csv"
    _write_csv(out, (*axis_names, "value"), rows)
    return out


def _cmd_curves(cfg: RunConfig) -> int:
    wrote = []
    figures = set(cfg.figures)
    grid = _curve_grid(cfg)
    he_zs = [2.0, 3.0, 4.0]

    if "fig1" in figures:  # hydrogenic F(k), Z = 2, 3, 4
        evs = [factor_F(HydrogenicAtom(z))(grid) for z in he_zs]
        wrote.append(_emit_1d_family(cfg, "fig1", ("k", "F_Z2", "F_Z3", "F_Z4"), grid, evs))
    if "fig2" in figures:  # hydrogenic B(s)
        evs = [factor_B(HydrogenicAtom(z))(grid) for z in he_zs]
        wrote.append(_emit_1d_family(cfg, "fig2", ("s", "B_Z2", "B_Z3", "B_Z4"), grid, evs))
    if "fig3" in figures:  # hydrogenic S_F, S_B for Z = 1..30
        rows = []
        for z in range(1, 31):
            rep = compute_report(HydrogenicAtom(float(z)), cfg.spec)
            rows.append([_fmt(float(z)), _fmt(rep.S_F), _fmt(rep.S_B)])
        out = cfg.output_dir / "fig3.csv"
        _write_csv(out, ("Z", "S_F", "S_B"), rows)
        wrote.append(out)

    need_he_curves = figures & {"fig4", "fig5"}
    if need_he_curves:
        he = _he_series_models(cfg, he_zs)
        ni = SplitShellModel(2.0, 2.0, 2.0)
        if "fig4" in figures:  # helium-series B(s) incl. the NI reference
            evs = [factor_B(he[2.0])(grid), factor_B(ni)(grid),
                   factor_B(he[3.0])(grid), factor_B(he[4.0])(grid)]
            wrote.append(_emit_1d_family(
                cfg, "fig4", ("s", "B_Z2", "B_NI_Z2", "B_Z3", "B_Z4"), grid, evs))
        if "fig5" in figures:
            evs = [factor_F(he[2.0])(grid), factor_F(ni)(grid),
                   factor_F(he[3.0])(grid), factor_F(he[4.0])(grid)]
            wrote.append(_emit_1d_family(
                cfg, "fig5", ("k", "F_Z2", "F_NI_Z2", "F_Z3", "F_Z4"), grid, evs))

    need_series = figures & {"fig6", "fig7", "fig12", "fig13", "fig14"}
    if need_series:
        zs = _range_values(cfg.z_range)
        models = _he_series_models(cfg, zs)
        reports = {z: compute_report(models[z], cfg.spec) for z in zs}
        if "fig6" in figures:
            rows = [[_fmt(z), _fmt(reports[z].S_F), _fmt(reports[z].S_B)] for z in zs]
            out = cfg.output_dir / "fig6.csv"
            _write_csv(out, ("Z", "S_F", "S_B"), rows)
            wrote.append(out)
        if "fig7" in figures:
            rows = [
                [_fmt(z), _fmt(reports[z].S_F + reports[z].S_B),
                 _fmt(closed_form_entropy("hydrogenic_F", z)
                      + closed_form_entropy("hydrogenic_B", z))]
                for z in zs
            ]
            out = cfg.output_dir / "fig7.csv"
            _write_csv(out, ("Z", "sum_interacting", "sum_NI"), rows)
            wrote.append(out)
        if "fig12" in figures:
            rows = [[_fmt(z), _fmt(reports[z].S_F2), _fmt(reports[z].S_B2)] for z in zs]
            out = cfg.output_dir / "fig12.csv"
            _write_csv(out, ("Z", "S_F2", "S_B2"), rows)
            wrote.append(out)
        if "fig13" in figures:
            rows = [
                [_fmt(z), _fmt(reports[z].S_F2 + reports[z].S_B2),
                 _fmt(2.0 * (closed_form_entropy("hydrogenic_F", z)
                             + closed_form_entropy("hydrogenic_B", z)))]
                for z in zs
            ]
            out = cfg.output_dir / "fig13.csv"
            _write_csv(out, ("Z", "sum2_interacting", "sum2_NI"), rows)
            wrote.append(out)
        if "fig14" in figures:
            rows = [[_fmt(z), _fmt(reports[z].I_F), _fmt(reports[z].I_B)] for z in zs]
            out = cfg.output_dir / "fig14.csv"
            _write_csv(out, ("Z", "I_F", "I_B"), rows)
            wrote.append(out)

    need_surfaces = figures & {"fig8", "fig9", "fig10", "fig11"}
    if need_surfaces:
        he = _he_series_models(cfg, [2.0, 4.0])
        if "fig8" in figures:
            wrote.append(_emit_surface(cfg, "fig8", ("k1", "k2"), factor_F2(he[2.0])))
        if "fig9" in figures:
            wrote.append(_emit_surface(cfg, "fig9", ("s1", "s2"), factor_B2(he[2.0])))
        if "fig10" in figures:
            wrote.append(_emit_surface(cfg, "fig10", ("k1", "k2"), factor_F2(he[4.0])))
        if "fig11" in figures:
            wrote.append(_emit_surface(cfg, "fig11", ("s1", "s2"), factor_B2(he[4.0])))

    for path in wrote:
        print(f"wrote {path}")
    return 0


def _cmd_verify(cfg: RunConfig) -> int:
    zs = _range_values(cfg.z_range)
    results = run_all_checks(cfg.spec, zs, cfg.cache_path)
    rows = []
    for r in results:
        status = "PASS" if r.passed else "FAIL"
        print(f"{status} {r.name}: measured={r.measured:.10g} expected={r.expected:.10g} "
              f"tolerance={r.tolerance:.3g} :: {r.detail}")
        rows.append([r.name, status, _fmt(r.measured), _fmt(r.expected),
                     _fmt(r.tolerance), r.detail.replace(",", ";")])
    out = cfg.output_dir / "verify.csv"
    _write_csv(out, ("check", "status", "measured", "expected", "tolerance", "detail"), rows)
    n_fail = sum(not r.passed for r in results)
    print(f"{len(results) - n_fail}/{len(results)} checks passed; wrote {out}")
    return 1 if n_fail else 0


# ---------------------------------------------------------------------------
# argument parsing
# ---------------------------------------------------------------------------

def _build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="sfentropy",
        description="Structure-factor entropies of exactly solvable atomic models.",
    )
    parser.add_argument("command", choices=_COMMANDS)
    parser.add_argument("--config", type=Path, help="INI configuration file")
    parser.add_argument("--system", choices=_SYSTEMS)
    parser.add_argument("--z", type=float, help="nuclear charge for single-model runs")
    parser.add_argument("--omega", type=float, help="oscillator frequency")
    parser.add_argument("--z-range", type=str, help="sweep range start:stop:step")
    parser.add_argument("--omega-range", type=str, help="oscillator sweep range")
    parser.add_argument("--out", type=Path, help="output directory")
    parser.add_argument("--workers", type=int, help="parallel sweep workers")
    parser.add_argument("--tol", type=float, help="quadrature relative tolerance")
    parser.add_argument("--figures", type=str, help="comma-separated figure ids (curves)")
    return parser


def _merge_cli(cfg: RunConfig, args: argparse.Namespace) -> RunConfig:
    cfg.command = args.command
    if args.system:
        cfg.system = args.system
    if args.z is not None:
        cfg.z = args.z
    if args.omega is not None:
        cfg.omega = args.omega
    if args.z_range:
        cfg.z_range = _parse_range(args.z_range)
    if args.omega_range:
        cfg.omega_range = _parse_range(args.omega_range)
    if os.environ.get(_ENV_OUTPUT):
        cfg.output_dir = Path(os.environ[_ENV_OUTPUT])
    if args.out is not None:
        cfg.output_dir = args.out
    if args.workers is not None:
        cfg.workers = args.workers
    if args.tol is not None:
        if args.tol <= 0:
            raise ConfigError("--tol must be positive")
        cfg.spec = dataclasses.replace(cfg.spec, rel_tol=args.tol)
    if args.figures:
        cfg.figures = tuple(f.strip() for f in args.figures.split(",") if f.strip())
    _validate(cfg)
    return cfg


def main(argv=None) -> int:
    args = _build_parser().parse_args(argv)
    try:
        cfg = load_config(args.config) if args.config else RunConfig()
        cfg = _merge_cli(cfg, args)
        handler = {
            "report": _cmd_report,
            "sweep": _cmd_sweep,
            "curves": _cmd_curves,
            "verify": _cmd_verify,
        }[cfg.command]
        return handler(cfg)
    except ConfigError as exc:
        print(f"configuration error: {exc}", file=sys.stderr)
        return 2
    except SfentropyError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1


if __name__ == "__main__":
    sys.exit(main())
