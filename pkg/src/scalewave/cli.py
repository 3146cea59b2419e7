"""Command-line front end.

Every command reads a flat JSON config (``--config``), applies flag overrides
and writes CSV or JSON.  Exit codes: 0 success, 2 config error, 3 numeric
failure, 4 failed check.
"""

from __future__ import annotations

import csv
import io
import json
import sys
from pathlib import Path
from typing import Any, Callable

import click
import numpy as np

from .errors import ConfigError, NegativeCoefficient, NegativeDelta, ScaleWaveError
from .fd_oracle import Grid1D, fd_solve_1d, fd_solve_radial_3d, sample
from .fields import as_source, build_field
from .kernels import eval_E, eval_K0, eval_K1
from .model import CauchyData, make_params
from .properties import run_suite
from .quadrature import QuadratureConfig
from .representation import solve_at

EXIT_CONFIG, EXIT_NUMERIC, EXIT_CHECK = 2, 3, 4

DEFAULTS: dict[str, Any] = {
    "mu": 0.0,
    "nu2": 0.0,
    "dim": 1,
    "u0": "zero",
    "u1": "zero",
    "f": "zero",
    "t": [1.0],
    "x": [0.0],
    "b": [0.0],
    "y": None,
    "cases": None,
    "interval_order": 16,
    "interval_panels": 8,
    "sphere_order": [32, 16],
    "ball_order": [24, 48],
    "t_derivative_step": 1e-4,
    "dx": None,
    "tolerance": None,
    "support_tol": 1e-8,
    "out": None,
    "format": "csv",
    "emit_plot": False,
}


# config ----------------------------------------------------------------------

def load_config(path: str | None, overrides: dict[str, Any]) -> dict[str, Any]:
    """Defaults, then the JSON file, then non-None flag overrides."""
    cfg = dict(DEFAULTS)
    if path is not None:
        try:
            raw = json.loads(Path(path).read_text())
        except (OSError, json.JSONDecodeError) as exc:
            raise ConfigError(f"cannot read config {path}: {exc}") from None
        if not isinstance(raw, dict):
            raise ConfigError("config must be a JSON object")
        cfg.update({k.replace("-", "_"): v for k, v in raw.items()})
    cfg.update({k: v for k, v in overrides.items() if v is not None})
    unknown = sorted(set(cfg) - set(DEFAULTS))
    if unknown:
        raise ConfigError(f"unknown config keys: {unknown}")
    if cfg["format"] not in ("csv", "json"):
        raise ConfigError("format must be csv or json")
    if int(cfg["dim"]) not in (1, 2, 3):
        raise ConfigError("dim must be 1, 2 or 3")
    cfg["dim"] = int(cfg["dim"])
    for key in ("t", "x", "b"):
        cfg[key] = _as_list(cfg[key], key)
    if cfg["y"] is not None:
        cfg["y"] = _as_list(cfg["y"], "y")
    return cfg


def _as_list(v, key):
    if isinstance(v, (int, float)):
        return [v]
    if not isinstance(v, list) or not v:
        raise ConfigError(f"{key} must be a nonempty list")
    return v


def _parse_list(text: str | None):
    """'0.5,1,2' or a JSON array."""
    if text is None:
        return None
    text = text.strip()
    try:
        if text.startswith("["):
            return json.loads(text)
        return [float(s) for s in text.split(",") if s.strip()]
    except ValueError as exc:
        raise ConfigError(f"cannot parse list {text!r}: {exc}") from None


def _parse_field(text: str | None):
    if text is None:
        return None
    text = text.strip()
    if text.startswith("{"):
        try:
            return json.loads(text)
        except json.JSONDecodeError as exc:
            raise ConfigError(f"cannot parse field spec {text!r}: {exc}") from None
    return text


def quad_from(cfg) -> QuadratureConfig:
    return QuadratureConfig(
        interval_order=int(cfg["interval_order"]),
        interval_panels=int(cfg["interval_panels"]),
        sphere_order=tuple(cfg["sphere_order"]),
        ball_order=tuple(cfg["ball_order"]),
        t_derivative_step=float(cfg["t_derivative_step"]),
    )


def data_from(cfg) -> CauchyData:
    dim = cfg["dim"]
    return CauchyData(dim, build_field(dim, cfg["u0"]), build_field(dim, cfg["u1"]),
                      as_source(build_field(dim, cfg["f"])))


def _point(x, dim):
    """A grid entry: a scalar means (x, 0, ...) and a list is a full point."""
    p = np.zeros(dim)
    arr = np.atleast_1d(np.asarray(x, dtype=float))
    if arr.size not in (1, dim):
        raise ConfigError(f"point {x!r} does not have 1 or {dim} components")
    p[: arr.size] = arr
    return p


# output ----------------------------------------------------------------------

def _fmt(v):
    if v is None:
        return ""
    if isinstance(v, (bool, np.bool_)):
        return "true" if v else "false"
    if isinstance(v, (int, float, np.floating, np.integer)):
        return format(float(v), ".17g")
    return str(v)


def _jsonable(v):
    if v is None or isinstance(v, str):
        return v
    if isinstance(v, (bool, np.bool_)):
        return bool(v)
    return float(v)


def render(cfg, columns, rows, summary) -> str:
    if cfg["format"] == "json":
        clean = [{c: _jsonable(v) for c, v in zip(columns, r)} for r in rows]
        return json.dumps({"config": cfg, "columns": columns, "rows": clean,
                           "summary": summary}, indent=2, sort_keys=True) + "\n"
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(columns)
    for r in rows:
        w.writerow([_fmt(v) for v in r])
    return buf.getvalue()


def gnuplot_script(csv_path: str, columns, x_col: str, y_col: str) -> str:
    xi, yi = columns.index(x_col) + 1, columns.index(y_col) + 1
    return (
        "set datafile separator ','\n"
        "set key autotitle columnhead\n"
        f"set xlabel '{x_col}'\n"
        f"set ylabel '{y_col}'\n"
        f"plot '{csv_path}' using {xi}:{yi} with linespoints\n"
    )


def emit(cfg, columns, rows, summary, plot_axes=None):
    text = render(cfg, columns, rows, summary)
    out = cfg["out"]
    if out is None:
        click.echo(text, nl=False)
    else:
        Path(out).write_text(text)
    if cfg["emit_plot"]:
        if out is None or cfg["format"] != "csv":
            raise ConfigError("--emit-plot needs --out and csv format")
        x_col, y_col = plot_axes or (columns[0], columns[-1])
        Path(str(out) + ".gp").write_text(gnuplot_script(out, columns, x_col, y_col))
    if summary:
        click.echo(json.dumps(summary, sort_keys=True), err=True)


# commands --------------------------------------------------------------------

def cmd_eval_kernel(cfg):
    p = make_params(cfg["mu"], cfg["nu2"])
    ys = cfg["y"]
    columns = ["t", "x", "b", "y", "E", "K0", "K1"]
    rows = []
    for t in cfg["t"]:
        for x in cfg["x"]:
            for b in cfg["b"]:
                t, x, b = float(t), float(x), float(b)
                if b > t:
                    continue
                ylist = ys if ys is not None else list(np.linspace(x - (t - b), x + (t - b), 5))
                for y in ylist:
                    y = float(y)
                    if abs(y - x) > t - b:
                        continue
                    E = eval_E(t, x, b, y, p)
                    K0 = eval_K0(t, x, y, p) if b == 0.0 else None
                    K1 = eval_K1(t, x, y, p) if b == 0.0 else None
                    rows.append([t, x, b, y, E, K0, K1])
    if not rows:
        raise ConfigError("no valid kernel points in the grid")
    return columns, rows, {"n_rows": len(rows), "delta": p.delta}, 0, ("y", "E")


def cmd_solve(cfg):
    p = make_params(cfg["mu"], cfg["nu2"])
    dim = cfg["dim"]
    data, quad = data_from(cfg), quad_from(cfg)
    columns = ["t"] + [f"x{i + 1}" for i in range(dim)] + ["u"]
    rows = []
    for t in cfg["t"]:
        for x in cfg["x"]:
            pt = _point(x, dim)
            rows.append([float(t), *pt.tolist(), solve_at(data, p, float(t), pt, quad)])
    return columns, rows, {"n_rows": len(rows), "delta": p.delta}, 0, ("x1", "u")


def cmd_compare_oracle(cfg):
    p = make_params(cfg["mu"], cfg["nu2"])
    dim = cfg["dim"]
    if dim == 2:
        raise ConfigError("no finite-difference oracle for dim 2")
    data, quad = data_from(cfg), quad_from(cfg)
    times = [float(t) for t in cfg["t"]]
    xs = [float(np.atleast_1d(x)[0]) for x in cfg["x"]]
    if dim == 1:
        dx = float(cfg["dx"] or 5e-4)
        tol = float(cfg["tolerance"] or 1e-3)
        grid = Grid1D.covering(min(xs), max(xs), dx, times)
        slices = fd_solve_1d(data, p, grid, times, report_x=xs)
        nodes = grid.x
    else:
        if min(xs) < 0.0:
            raise ConfigError("radial oracle needs x >= 0 (radii)")
        dx = float(cfg["dx"] or 1e-3)
        tol = float(cfg["tolerance"] or 1e-2)
        grid = Grid1D.covering(0.0, max(xs), dx, times, symmetric=True)
        slices = fd_solve_radial_3d(data, p, grid, times, report_r=xs)
        nodes = grid.dx * np.arange(grid.nx // 2 + 1)
    by_t = {sl.t: sl for sl in slices}
    formula, oracle, coords = [], [], []
    for t in times:
        fd_vals = sample(by_t[t], nodes, np.array(xs))
        for x, v in zip(xs, fd_vals):
            pt = _point(x, dim)
            coords.append((t, pt))
            formula.append(solve_at(data, p, t, pt, quad))
            oracle.append(float(v))
    formula, oracle = np.array(formula), np.array(oracle)
    scale = float(np.max(np.abs(formula)))
    abs_err = np.abs(formula - oracle)
    rel_err = abs_err / scale if scale > 0.0 else abs_err
    columns = ["t"] + [f"x{i + 1}" for i in range(dim)] + [
        "u_formula", "u_oracle", "abs_err", "rel_err"]
    rows = [[t, *pt.tolist(), uf, uo, ae, re]
            for (t, pt), uf, uo, ae, re in zip(coords, formula, oracle, abs_err, rel_err)]
    max_rel = float(np.max(rel_err))
    summary = {"max_abs_err": float(np.max(abs_err)), "max_rel_err": max_rel,
               "tolerance": tol, "dx": dx, "passed": max_rel <= tol}
    return columns, rows, summary, 0 if max_rel <= tol else EXIT_CHECK, ("x1", "rel_err")


def cmd_property_suite(cfg):
    cases = cfg["cases"] or [[cfg["mu"], cfg["nu2"]]]
    columns = ["check", "mu", "nu2", "delta", "value", "tolerance", "passed"]
    rows = []
    for mu, nu2 in cases:
        p = make_params(mu, nu2)
        for r in run_suite(p):
            rows.append([r.name, p.mu, p.nu2, p.delta, r.value, r.tolerance, r.passed])
            click.echo(r.line(), err=True)
    n_fail = sum(1 for r in rows if not r[-1])
    return columns, rows, {"n_checks": len(rows), "n_failed": n_fail}, \
        0 if n_fail == 0 else EXIT_CHECK, None


def cmd_huygens_scan(cfg):
    p = make_params(cfg["mu"], cfg["nu2"])
    dim = cfg["dim"]
    data, quad = data_from(cfg), quad_from(cfg)
    radii = [data.u0.support_radius, data.u1.support_radius, data.f.support_R]
    R = None if any(r is None for r in radii) else max(radii)
    columns = ["t", "r", "abs_u", "region"]
    rows = []
    worst_out = 0.0
    for t in cfg["t"]:
        for r in cfg["x"]:
            t, r = float(t), float(np.atleast_1d(r)[0])
            u = abs(solve_at(data, p, t, _point(r, dim), quad))
            if R is None:
                region = "unknown"
            elif r > R + t:
                region, worst_out = "outside", max(worst_out, u)
            elif r < t - R:
                region = "inside"
            else:
                region = "shell"
            rows.append([t, r, u, region])
    tol = float(cfg["support_tol"])
    ok = worst_out <= tol
    summary = {"support_radius": R, "max_abs_outside": worst_out, "support_tol": tol,
               "passed": ok}
    return columns, rows, summary, 0 if ok else EXIT_CHECK, ("r", "abs_u")


COMMANDS: dict[str, Callable] = {
    "eval-kernel": cmd_eval_kernel,
    "solve": cmd_solve,
    "compare-oracle": cmd_compare_oracle,
    "property-suite": cmd_property_suite,
    "huygens-scan": cmd_huygens_scan,
}


def run(command: str, cfg: dict[str, Any]) -> int:
    """Execute one command on a resolved config and return the exit status."""
    try:
        columns, rows, summary, status, axes = COMMANDS[command](cfg)
        emit(cfg, columns, rows, summary, axes)
        return status
    except (ConfigError, NegativeDelta, NegativeCoefficient) as exc:
        click.echo(f"config error: {exc}", err=True)
        return EXIT_CONFIG
    except (ScaleWaveError, ArithmeticError, FloatingPointError) as exc:
        click.echo(f"numeric failure: {exc}", err=True)
        return EXIT_NUMERIC


def _common(fn):
    opts = [
        click.option("--config", "config_path", type=click.Path(), default=None,
                     help="Flat JSON config file."),
        click.option("--mu", type=float, default=None),
        click.option("--nu2", type=float, default=None),
        click.option("--dim", type=int, default=None),
        click.option("--u0", default=None, help="Field family name or JSON spec."),
        click.option("--u1", default=None, help="Field family name or JSON spec."),
        click.option("--f", "f_spec", default=None, help="Source family name or JSON spec."),
        click.option("--t", "t_list", default=None, help="Times, e.g. '0.5,1,2'."),
        click.option("--x", "x_list", default=None, help="Points, e.g. '0,0.5' or JSON."),
        click.option("--b", "b_list", default=None),
        click.option("--y", "y_list", default=None),
        click.option("--dx", type=float, default=None),
        click.option("--tolerance", type=float, default=None),
        click.option("--interval-panels", type=int, default=None),
        click.option("--interval-order", type=int, default=None),
        click.option("--out", type=click.Path(), default=None),
        click.option("--format", "fmt", type=click.Choice(["csv", "json"]), default=None),
        click.option("--emit-plot", is_flag=True, default=None,
                     help="Also write a gnuplot script next to --out."),
    ]
    for opt in reversed(opts):
        fn = opt(fn)
    return fn


def _invoke(command, config_path, **kw):
    try:
        overrides = {
            "mu": kw["mu"], "nu2": kw["nu2"], "dim": kw["dim"],
            "u0": _parse_field(kw["u0"]), "u1": _parse_field(kw["u1"]),
            "f": _parse_field(kw["f_spec"]),
            "t": _parse_list(kw["t_list"]), "x": _parse_list(kw["x_list"]),
            "b": _parse_list(kw["b_list"]), "y": _parse_list(kw["y_list"]),
            "dx": kw["dx"], "tolerance": kw["tolerance"],
            "interval_panels": kw["interval_panels"], "interval_order": kw["interval_order"],
            "out": kw["out"], "format": kw["fmt"], "emit_plot": kw["emit_plot"],
        }
        cfg = load_config(config_path, overrides)
    except ConfigError as exc:
        click.echo(f"config error: {exc}", err=True)
        sys.exit(EXIT_CONFIG)
    sys.exit(run(command, cfg))


@click.group()
def main():
    """Semi-analytic solver for the wave equation with scale-invariant damping and mass."""


def _register(name, doc):
    @_common
    def command(config_path, **kw):
        _invoke(name, config_path, **kw)

    command.__doc__ = doc
    main.command(name)(command)


_register("eval-kernel", "Tabulate E, K0 and K1 over the (t, x, b, y) grid.")
_register("solve", "Tabulate u(t, x) from the representation formula.")
_register("compare-oracle", "Compare the formula with the finite-difference oracle.")
_register("property-suite", "Run the kernel identity checks.")
_register("huygens-scan", "Map |u| over the (t, |x|) plane for support analysis.")


if __name__ == "__main__":
    main()
