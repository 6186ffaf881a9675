"""Command-line interface: single-point queries, sweeps and dataset recipes.

Exit status: 0 on success, 2 on configuration/validation problems, 3
when more than MAX_FLAG_FRACTION of the evaluated points had to be
flagged as numerically singular.
"""

from __future__ import annotations

import argparse
import os
import sys
from dataclasses import replace
from pathlib import Path

import numpy as np

from .config import RunConfig, RunManifest, load_config
from .errors import ParseError, SpinHallError, ValidationError
from .medium import susceptibility
from .shifts import GridSpec, shift_from_beam_integral, shift_kernel
from .sweep import (COLUMNS, ScanContext, SweepGrid, SweepTable,
                    find_brewster, find_transparency_windows,
                    max_shift_vs_detuning, sweep)

MAX_FLAG_FRACTION = 0.1
FLOAT_FORMAT = "{:.8e}"  # 9 significant digits, lowercase exponent

ORACLE_COLUMNS = ("theta_deg", "detuning", "delta_closed_lambda",
                  "delta_quad_plus_lambda", "delta_quad_minus_lambda",
                  "rel_diff")


def _fmt(value) -> str:
    if isinstance(value, str):
        return value
    return FLOAT_FORMAT.format(float(value))


def _write_rows(path: Path, columns, rows, manifest: RunManifest,
                header_comment: bool, fmt: str) -> None:
    if fmt == "json":
        import json
        payload = {"columns": list(columns),
                   "rows": [[(None if isinstance(v, float) and not np.isfinite(v)
                              else v) for v in row] for row in rows],
                   "manifest": json.loads(manifest.to_json())}
        path.write_text(json.dumps(payload, indent=2) + "\n", encoding="utf-8")
        return
    lines = []
    if header_comment:
        for line in manifest.to_json().splitlines():
            lines.append("# " + line)
    lines.append(",".join(columns))
    for row in rows:
        lines.append(",".join(_fmt(v) for v in row))
    path.write_text("\n".join(lines) + "\n", encoding="utf-8")


def _emit_table(table: SweepTable, cfg: RunConfig, args, argv) -> int:
    manifest = RunManifest.for_run(argv, cfg, len(table), table.flagged_count)
    out = Path(args.out or cfg.output.out)
    _write_rows(out, COLUMNS, list(table.rows()), manifest,
                cfg.output.manifest_header or args.manifest_header,
                args.format or cfg.output.format)
    manifest.write(out)
    print(f"wrote {len(table)} rows to {out} ({table.flagged_count} flagged)")
    if len(table) and table.flagged_count / len(table) > MAX_FLAG_FRACTION:
        return 3
    return 0


def _point_table(cfg: RunConfig, thetas_deg, detunings, etas=None) -> SweepTable:
    """Rows for explicit angle/detuning/eta lists (recipes and
    single-point commands), bypassing the rectangular-grid constraint."""
    from .sweep import _fill_block
    medium, stack, beam = cfg.build()
    etas = list(etas) if etas is not None else [medium.eta]
    thetas_deg = np.atleast_1d(np.asarray(thetas_deg, dtype=float))
    n_theta = len(thetas_deg)
    blocks = [(eta, dp) for eta in etas for dp in np.atleast_1d(detunings)]
    table = SweepTable.empty(len(blocks) * n_theta)
    for i, (eta, dp) in enumerate(blocks):
        _fill_block(table, i * n_theta, np.radians(thetas_deg), thetas_deg,
                    float(dp), float(eta), medium, stack, beam)
    return table


def _context(cfg: RunConfig, detuning: float, eta=None) -> ScanContext:
    medium, stack, beam = cfg.build()
    if eta is not None:
        medium = replace(medium, eta=float(eta))
    return ScanContext(medium, stack, beam, delta_p=float(detuning))


def _parse_grid(text: str):
    parts = text.split(",")
    if len(parts) != 3:
        raise ValidationError("--grid expects T0,T1,N")
    return float(parts[0]), float(parts[1]), int(parts[2])


def cmd_susceptibility(cfg, args, argv):
    lo, hi, n = cfg.sweep.detuning
    dps = np.linspace(lo, hi, int(n))
    table = _point_table(cfg, [args.theta], dps, [args.eta] if args.eta else None)
    chi0 = susceptibility(args.detuning, _context(cfg, 0.0, args.eta).medium)
    print(f"chi({args.detuning:g}) = {chi0.real:.6e} {chi0.imag:+.6e}i")
    return _emit_table(table, cfg, args, argv)


def cmd_shift(cfg, args, argv):
    if args.grid:
        lo, hi, n = _parse_grid(args.grid)
        thetas = np.linspace(lo, hi, n)
    else:
        thetas = [args.theta]
    table = _point_table(cfg, thetas, [args.detuning],
                         [args.eta] if args.eta else None)
    if len(table) == 1:
        print(f"delta_plus = {table.delta_plus_lambda[0]:.6e} lambda, "
              f"Theta_minus = {table.theta_minus[0]:.6e}")
    return _emit_table(table, cfg, args, argv)


def cmd_sweep(cfg, args, argv):
    medium, stack, beam = cfg.build()
    theta_rng = _parse_grid(args.grid) if args.grid else tuple(cfg.sweep.theta_deg)
    grid = SweepGrid(theta_range=theta_rng,
                     detuning_range=tuple(cfg.sweep.detuning),
                     eta_list=[args.eta] if args.eta else cfg.sweep.eta_list)
    table = sweep(grid, medium, stack, beam, threads=args.threads)
    return _emit_table(table, cfg, args, argv)


def cmd_brewster(cfg, args, argv):
    window = _parse_grid(args.grid)[:2] if args.grid else (30.0, 38.0)
    ctx = _context(cfg, args.detuning, args.eta)
    theta_b = find_brewster(window, ctx)
    print(f"brewster angle = {theta_b:.6f} deg at detuning {args.detuning:g}")
    table = _point_table(cfg, [theta_b], [args.detuning],
                         [args.eta] if args.eta else None)
    return _emit_table(table, cfg, args, argv)


def cmd_windows(cfg, args, argv):
    medium, _, _ = cfg.build()
    if args.eta:
        medium = replace(medium, eta=args.eta)
    lo, hi, _ = cfg.sweep.detuning
    windows = find_transparency_windows(medium, (lo, hi))
    print("transparency windows (gamma):",
          " ".join(f"{w:+.4f}" for w in windows) or "none")
    table = _point_table(cfg, [args.theta], windows or [0.0],
                         [args.eta] if args.eta else None)
    return _emit_table(table, cfg, args, argv)


def cmd_oracle(cfg, args, argv):
    medium, stack, beam = cfg.build()
    ctx = _context(cfg, args.detuning, args.eta)
    layered = ctx.stack_at()
    theta = np.radians(args.theta)
    rp, rs = ctx.coefficients(theta)
    closed = float(shift_kernel(theta, rp, rs, beam)[0])
    quad_plus, quad_minus = shift_from_beam_integral(theta, layered, beam, GridSpec())
    rel = abs(quad_plus - closed) / max(abs(closed), 1e-300)
    print(f"closed = {closed / beam.lam:.6e} lambda, quadrature = "
          f"{quad_plus / beam.lam:.6e} lambda, rel diff = {rel:.3e}")
    row = (args.theta, args.detuning, closed / beam.lam, quad_plus / beam.lam,
           quad_minus / beam.lam, rel)
    manifest = RunManifest.for_run(argv, cfg, 1, 0)
    out = Path(args.out or cfg.output.out)
    _write_rows(out, ORACLE_COLUMNS, [row], manifest,
                cfg.output.manifest_header or args.manifest_header,
                args.format or cfg.output.format)
    manifest.write(out)
    return 0


def _recipes(cfg: RunConfig, name: str, threads: int) -> SweepTable:
    medium, stack, beam = cfg.build()
    dense_theta = np.linspace(30.0, 38.0, 801)
    full = SweepGrid((30.0, 38.0, 801), (-6.0, 6.0, 601))
    if name in ("fig2a", "fig3a", "fig4a"):
        return _point_table(cfg, [33.69], np.linspace(-6, 6, 1201))
    if name == "fig2b":
        return _point_table(cfg, dense_theta, [0.0])
    if name == "fig2d":
        return _point_table(cfg, np.linspace(33.0, 34.4, 1401), [0.0])
    if name in ("fig2e", "fig3c", "fig4f"):
        return sweep(full, medium, stack, beam, threads=threads)
    if name == "fig2f":
        return sweep(full, replace(medium, eta=0.01), stack, beam, threads=threads)
    if name == "fig3b":
        return _point_table(cfg, dense_theta, [-0.1, 0.0, 0.1])
    if name == "fig4b":
        return _point_table(cfg, dense_theta, [0.0], etas=[0.05, 0.1])
    if name == "fig4c":
        return _point_table(cfg, [33.6, 33.7], [0.0],
                            etas=np.linspace(0.01, 0.2, 50))
    if name == "fig5a":
        return _point_table(cfg, dense_theta, [0.0, 0.05, 0.1])
    if name == "fig5c":
        return _point_table(cfg, dense_theta, [0.05, 0.1, 0.2])
    if name in ("fig5b", "fig5d"):
        ctx = ScanContext(medium, stack, beam)
        dps = (np.linspace(0.0, 0.2, 41) if name == "fig5b"
               else np.linspace(-2.0, 2.0, 81))
        rows = []
        for dp in dps:
            _, vals = max_shift_vs_detuning("angular", [dp], ctx)
            rows.append((dp, vals[0]))
        table = SweepTable.empty(len(rows))
        for i, (dp, val) in enumerate(rows):
            table.theta_deg[i] = np.nan
            table.detuning[i] = dp
            table.eta[i] = medium.eta
            chi = susceptibility(float(dp), medium)
            table.chi1[i], table.chi2[i] = chi.real, chi.imag
            table.abs_rp[i] = table.abs_rs[i] = table.ratio_sp[i] = np.nan
            table.delta_plus_lambda[i] = np.nan
            table.theta_minus[i] = val
        return table
    raise ValidationError(f"unknown reproduce target {name!r}")


RECIPE_PRESETS = {
    "fig2a": "fig2-ctl", "fig2b": "fig2-ctl", "fig2d": "fig2-ctl",
    "fig2e": "fig2-ctl", "fig2f": "fig2-ctl",
    "fig3a": "fig3-lambda", "fig3b": "fig3-lambda", "fig3c": "fig3-lambda",
    "fig4a": "fig4-ntype", "fig4b": "fig4-ntype", "fig4c": "fig4-ntype",
    "fig4f": "fig4-ntype",
    "fig5a": "fig3-lambda", "fig5b": "fig3-lambda",
    "fig5c": "fig4-ntype", "fig5d": "fig4-ntype",
}


def cmd_reproduce(cfg, args, argv):
    if args.preset is None and args.config is None:
        cfg = load_config(preset=RECIPE_PRESETS.get(args.target, "fig2-ctl"))
    table = _recipes(cfg, args.target, args.threads)
    if args.out is None:
        args.out = f"{args.target}.csv"
    return _emit_table(table, cfg, args, argv)


def _add_common(p: argparse.ArgumentParser):
    p.add_argument("--preset", help="named parameter preset")
    p.add_argument("--config", help="JSON config file")
    p.add_argument("--theta", type=float, default=33.69,
                   help="incidence angle in degrees")
    p.add_argument("--detuning", type=float, default=0.0,
                   help="probe detuning in gamma units")
    p.add_argument("--eta", type=float, default=None,
                   help="density parameter override (gamma units)")
    p.add_argument("--out", default=None, help="output data file")
    p.add_argument("--format", choices=("csv", "json"), default=None)
    p.add_argument("--grid", default=None, help="angle grid T0,T1,N (degrees)")
    p.add_argument("--threads", type=int, default=None,
                   help="worker threads for sweeps (default: SPINHALL_THREADS or 1)")
    p.add_argument("--manifest-header", action="store_true",
                   help="prefix the CSV with '#'-commented manifest lines")


COMMANDS = {
    "susceptibility": cmd_susceptibility,
    "shift": cmd_shift,
    "angular": cmd_shift,  # same row schema; the tilt column is always present
    "sweep": cmd_sweep,
    "brewster": cmd_brewster,
    "windows": cmd_windows,
    "oracle": cmd_oracle,
    "reproduce": cmd_reproduce,
}


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="spinhall",
        description="Spin-dependent beam shifts of a probe reflected from a "
                    "glass / atomic-vapor / glass cavity")
    sub = parser.add_subparsers(dest="command", required=True)
    for name in COMMANDS:
        p = sub.add_parser(name)
        _add_common(p)
        if name == "reproduce":
            p.add_argument("target", help="dataset name, e.g. fig2d")
    return parser


def main(argv=None) -> int:
    argv = list(sys.argv[1:] if argv is None else argv)
    args = build_parser().parse_args(argv)
    if args.threads is None:
        args.threads = int(os.environ.get("SPINHALL_THREADS", "1"))
    try:
        cfg = load_config(path=args.config, preset=args.preset)
        return COMMANDS[args.command](cfg, args, argv)
    except (ParseError, ValidationError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    except FileNotFoundError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    except SpinHallError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    raise SystemExit(main())
