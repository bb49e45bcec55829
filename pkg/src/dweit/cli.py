"""Command-line front end: detuning scans, preparation-angle sweeps, and
three-way oracle comparisons with bit-stable CSV/JSON output.

Numbers are emitted with 17 significant decimal digits, which round-trips
64-bit floats exactly, so identical configurations always produce identical
bytes.  Error conditions inside a row are emitted as explicit tokens
(``PoleEncountered``, ``NotConverged``, ...) rather than NaN.

Exit codes: 0 success, 2 configuration error, 3 unresolved narrow feature
(scan requested without refinement on a grid coarser than the linewidth).
"""

from __future__ import annotations

import argparse
import json
import math
import sys
from dataclasses import dataclass

import numpy as np

from . import optics, oracle, steady
from .dressed import frame_for
from .errors import ParamError, PoleEncountered, SingularSystem, UnknownConfigKey, UnresolvedFeature
from .model import (
    FIELD_NAMES,
    SystemParams,
    params_from_config,
    params_to_config,
    scaled,
    to_si_free,
    violations,
)

EXIT_CONFIG = 2
EXIT_UNRESOLVED = 3

#: Config keys owned by the scan driver rather than the physics model.
SCAN_KEYS = ("grid_min", "grid_max", "grid_count", "refine", "format", "oracle_check", "units")

CSV_HEADER = "delta_p,re_chi,im_chi,n,dre_chi_domega,vg_ratio"


class ConfigError(ValueError):
    pass


@dataclass(frozen=True)
class ScanRequest:
    """A validated scan: which physics, which grid, which output."""

    params: SystemParams
    grid_min: float
    grid_max: float
    grid_count: int
    refine: bool
    fmt: str
    oracle_check: bool

    def __post_init__(self):
        if self.grid_count < 2:
            raise ConfigError("grid count must be >= 2")
        if not self.grid_min < self.grid_max:
            raise ConfigError("grid min must be below grid max")
        if self.fmt not in ("csv", "json"):
            raise ConfigError(f"format must be csv or json, got {self.fmt!r}")


def fmt17(x: float) -> str:
    """Decimal with 17 significant digits (exact float64 round-trip)."""
    return format(float(x), ".17g")


def _load_config(path: str) -> dict:
    with open(path, encoding="utf-8") as fh:
        raw = json.load(fh)
    if not isinstance(raw, dict):
        raise ConfigError("config must be a flat JSON object")
    unknown = sorted(set(raw) - set(FIELD_NAMES) - set(SCAN_KEYS))
    if unknown:
        raise ConfigError(f"unknown config keys: {', '.join(unknown)}")
    return raw


def _split_config(raw: dict, units: str) -> tuple[dict, dict]:
    scan_part = {k: raw[k] for k in SCAN_KEYS if k in raw}
    param_part = {k: v for k, v in raw.items() if k in FIELD_NAMES}
    if units == "si":
        gamma = param_part.get("gamma_ab")
        if gamma is None:
            raise ConfigError("--units si requires gamma_ab in the config")
        param_part = to_si_free(param_part, float(gamma))
        for key in ("grid_min", "grid_max"):
            if key in scan_part:
                scan_part[key] = float(scan_part[key]) / float(gamma)
    return param_part, scan_part


def _effective_config(params: SystemParams, extra: dict) -> dict:
    config = dict(params_to_config(params))
    config.update(extra)
    return {k: config[k] for k in sorted(config)}


def _config_json(config: dict) -> str:
    return json.dumps(config, sort_keys=True, separators=(", ", ": "))


def _scan_rows(req: ScanRequest) -> tuple[optics.SpectrumScan, list[list[str]], list[optics.PeakReport]]:
    scan = optics.scan_spectrum(
        req.params, req.grid_min, req.grid_max, req.grid_count, refine=req.refine
    )
    peaks = optics.find_peaks(scan)
    rows = []
    for i, dp in enumerate(scan.delta_p):
        row = [
            fmt17(dp),
            fmt17(scan.chi[i].real),
            fmt17(scan.chi[i].imag),
            fmt17(scan.n[i]),
            fmt17(scan.dre_chi_domega[i]),
            fmt17(scan.vg_ratio[i]),
        ]
        if req.oracle_check:
            row.append(_row_residual(req.params, float(dp)))
        rows.append(row)
    return scan, rows, peaks


def _row_residual(p: SystemParams, delta_p: float) -> str:
    """Residual of the closed-form-derived vectors against both branch systems."""
    worst = 0.0
    for branch in (steady.Branch.B, steady.Branch.BPRIME):
        sys_b = steady.build_linear_system(p, delta_p, branch)
        try:
            vec = steady.closed_form_vector(p, delta_p, branch)
        except PoleEncountered:
            return "PoleEncountered"
        worst = max(worst, oracle.residual(sys_b, vec))
    return fmt17(worst)


def _write_scan(req: ScanRequest, out_path: str, config: dict) -> None:
    scan, rows, peaks = _scan_rows(req)
    header = CSV_HEADER + (",residual" if req.oracle_check else "")
    if req.fmt == "csv":
        lines = [f"# config: {_config_json(config)}", header]
        lines += [",".join(row) for row in rows]
        lines.append("# peaks")
        lines.append("center,height,fwhm,predicted_fwhm")
        for pk in peaks:
            lines.append(",".join(fmt17(v) for v in (pk.center, pk.height, pk.fwhm, pk.predicted_fwhm)))
        text = "\n".join(lines) + "\n"
    else:
        payload = {
            "config": config,
            "columns": header.split(","),
            "rows": rows,
            "peaks": [
                {
                    "center": fmt17(pk.center),
                    "height": fmt17(pk.height),
                    "fwhm": fmt17(pk.fwhm),
                    "predicted_fwhm": fmt17(pk.predicted_fwhm),
                }
                for pk in peaks
            ],
        }
        text = json.dumps(payload, sort_keys=True, indent=1) + "\n"
    with open(out_path, "w", encoding="utf-8", newline="\n") as fh:
        fh.write(text)


def cmd_scan(args) -> int:
    try:
        raw = _load_config(args.config)
        units = args.units or raw.get("units", "gamma_ab")
        if units not in ("gamma_ab", "si"):
            raise ConfigError(f"units must be gamma_ab or si, got {units!r}")
        param_part, scan_part = _split_config(raw, units)
        params = params_from_config(param_part)
        grid = dict(
            grid_min=scan_part.get("grid_min"),
            grid_max=scan_part.get("grid_max"),
            grid_count=scan_part.get("grid_count"),
        )
        if args.grid is not None:
            lo, hi, n = args.grid.split(",")
            grid = dict(grid_min=float(lo), grid_max=float(hi), grid_count=int(n))
            if units == "si":
                gamma = float(raw["gamma_ab"])
                grid["grid_min"] /= gamma
                grid["grid_max"] /= gamma
        if any(v is None for v in grid.values()):
            raise ConfigError("grid_min, grid_max, grid_count must come from --grid or the config")
        req = ScanRequest(
            params=params,
            grid_min=float(grid["grid_min"]),
            grid_max=float(grid["grid_max"]),
            grid_count=int(grid["grid_count"]),
            refine=bool(args.refine or scan_part.get("refine", False)),
            fmt=args.format or scan_part.get("format", "csv"),
            oracle_check=bool(args.oracle_check or scan_part.get("oracle_check", False)),
        )
    except (ConfigError, ParamError, UnknownConfigKey, OSError, json.JSONDecodeError, ValueError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_CONFIG
    config = _effective_config(
        req.params,
        {
            "grid_min": req.grid_min,
            "grid_max": req.grid_max,
            "grid_count": req.grid_count,
            "refine": req.refine,
            "format": req.fmt,
            "oracle_check": req.oracle_check,
        },
    )
    try:
        _write_scan(req, args.out, config)
    except UnresolvedFeature as exc:
        print(f"error: {exc}", file=sys.stderr)
        if not req.refine:
            print("hint: pass --refine to densify the grid near the narrow resonances", file=sys.stderr)
        return EXIT_UNRESOLVED
    return 0


def _branch_peak_heights(p: SystemParams) -> tuple[float, float]:
    """Im chi of each branch term at its own resonance center.

    The resonance at +g_b_eff/2 belongs to the B' branch and the one at
    -g_b_eff/2 to the B branch; evaluating each term at the exact center
    keeps the preparation-angle amplitude factors free of cross-branch
    background.
    """
    geb = math.hypot(p.delta_bb, p.g_b)
    term_b_minus = steady.branch_coherence_terms(p, -0.5 * geb)[0]
    term_bp_plus = steady.branch_coherence_terms(p, 0.5 * geb)[1]
    height_plus = float(np.imag(optics.susceptibility(term_bp_plus, p)))
    height_minus = float(np.imag(optics.susceptibility(term_b_minus, p)))
    return height_plus, height_minus


def cmd_sweep_phi(args) -> int:
    try:
        raw = _load_config(args.config)
        units = args.units or raw.get("units", "gamma_ab")
        param_part, _ = _split_config(raw, units)
        params = params_from_config(param_part)
        if params.delta_bb != 0.0 or params.delta_cc != 0.0:
            raise ConfigError("sweep-phi requires the degenerate case delta_bb = delta_cc = 0")
        if params.g_b == 0.0:
            raise ConfigError("sweep-phi requires g_b > 0 (separated resonances)")
        phis = [float(tok) for tok in args.phi.split(",") if tok.strip()]
        if not phis:
            raise ConfigError("--phi needs at least one value")
    except (ConfigError, ParamError, UnknownConfigKey, OSError, json.JSONDecodeError, ValueError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_CONFIG

    lines = [f"# config: {_config_json(_effective_config(params, {}))}"]
    lines.append("phi,height_plus,height_minus,pred_plus,pred_minus")
    for phi in phis:
        p_phi = scaled(params, phi_prep=phi)
        h_plus, h_minus = _branch_peak_heights(p_phi)
        s2 = math.sin(2.0 * phi)
        lines.append(
            ",".join(fmt17(v) for v in (phi, h_plus, h_minus, 1.0 - s2, 1.0 + s2))
        )
    text = "\n".join(lines) + "\n"
    if args.out:
        with open(args.out, "w", encoding="utf-8", newline="\n") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)
    return 0


def _lenient_params(param_part: dict) -> SystemParams:
    """Fill defaults without insisting on gamma_ab > 0.

    compare-oracle documents the gamma_ab = 0 input as a degenerate
    diagnostic case: closed-form poles and non-convergent integration are
    then reported per row instead of rejected up front.
    """
    p = SystemParams(**param_part)
    bad = [v for v in violations(p) if "gamma_ab" not in v]
    if bad:
        raise ParamError(bad)
    if p.gamma_ab is None:
        p = SystemParams(**{**param_part, "gamma_ab": p.gamma_a / 2.0})
    return p


def _compare_row(p: SystemParams, dp: float, t_max: float, dt: float | None, tol: float) -> list[str]:
    frame = frame_for(p)

    def assemble(xb0, xbp0):
        return frame.cos_b * xb0 - frame.sin_b * xbp0

    closed_tok: str | complex
    try:
        closed_tok = steady.closed_form_coherence(p, dp)
    except PoleEncountered:
        closed_tok = "PoleEncountered"

    solve_tok: str | complex
    try:
        xb = steady.solve_steady(steady.build_linear_system(p, dp, steady.Branch.B))
        xbp = steady.solve_steady(steady.build_linear_system(p, dp, steady.Branch.BPRIME))
        solve_tok = assemble(xb[0], xbp[0])
    except SingularSystem:
        solve_tok = "SingularSystem"

    integ_tok: str | complex
    reports = []
    for branch in (steady.Branch.B, steady.Branch.BPRIME):
        reports.append(oracle.integrate_to_steady(steady.build_linear_system(p, dp, branch), dt=dt, t_max=t_max, tol=tol))
    if all(r.converged for r in reports):
        integ_tok = assemble(reports[0].final_state[0], reports[1].final_state[0])
    else:
        integ_tok = "NotConverged"

    def pair(a, b):
        if isinstance(a, str) or isinstance(b, str):
            return "n/a"
        scale = max(abs(a), abs(b))
        return fmt17(0.0 if scale == 0.0 else abs(a - b) / scale)

    def emit(v):
        if isinstance(v, str):
            return [v, v]
        return [fmt17(v.real), fmt17(v.imag)]

    return (
        [fmt17(dp)]
        + emit(closed_tok)
        + emit(solve_tok)
        + emit(integ_tok)
        + [pair(closed_tok, solve_tok), pair(solve_tok, integ_tok), pair(closed_tok, integ_tok)]
    )


def cmd_compare_oracle(args) -> int:
    try:
        raw = _load_config(args.config)
        units = args.units or raw.get("units", "gamma_ab")
        param_part, _ = _split_config(raw, units)
        unknown = sorted(set(param_part) - set(FIELD_NAMES))
        if unknown:
            raise ConfigError(f"unknown config keys: {', '.join(unknown)}")
        params = _lenient_params(param_part)
        dps = [float(tok) for tok in args.delta_p.split(",") if tok.strip()]
        if units == "si":
            dps = [v / float(raw["gamma_ab"]) for v in dps]
        if not dps:
            raise ConfigError("--delta-p needs at least one value")
    except (ConfigError, ParamError, UnknownConfigKey, OSError, json.JSONDecodeError, ValueError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_CONFIG

    lines = [
        "delta_p,closed_re,closed_im,solve_re,solve_im,integ_re,integ_im,"
        "rel_closed_solve,rel_solve_integ,rel_closed_integ"
    ]
    for dp in dps:
        lines.append(",".join(_compare_row(params, dp, args.t_max, args.dt, args.tol)))
    sys.stdout.write("\n".join(lines) + "\n")
    return 0


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="dweit",
        description="Probe susceptibility of a tunnel-coupled double-well three-level medium.",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    scan = sub.add_parser("scan", help="susceptibility spectrum over a detuning grid")
    scan.add_argument("--config", required=True, help="flat JSON config file")
    scan.add_argument("--grid", help="min,max,count (overrides config grid keys)")
    scan.add_argument("--refine", action="store_true", help="densify near predicted narrow resonances")
    scan.add_argument("--format", choices=("csv", "json"), help="output format (default csv)")
    scan.add_argument("--oracle-check", action="store_true", help="append per-row steady-state residual column")
    scan.add_argument("--units", choices=("gamma_ab", "si"), help="interpret rate inputs in these units")
    scan.add_argument("--out", required=True, help="output file path")
    scan.set_defaults(func=cmd_scan)

    sweep = sub.add_parser("sweep-phi", help="narrow-peak heights versus preparation angle")
    sweep.add_argument("--config", required=True)
    sweep.add_argument("--phi", required=True, help="comma-separated preparation angles (radians)")
    sweep.add_argument("--units", choices=("gamma_ab", "si"))
    sweep.add_argument("--out", help="output file (default stdout)")
    sweep.set_defaults(func=cmd_sweep_phi)

    cmp_parser = sub.add_parser("compare-oracle", help="closed form vs linear solve vs time integration")
    cmp_parser.add_argument("--config", required=True)
    cmp_parser.add_argument("--delta-p", required=True, help="comma-separated probe detunings")
    cmp_parser.add_argument("--t-max", type=float, default=1.0e4, help="integration horizon (1/gamma_ab)")
    cmp_parser.add_argument("--dt", type=float, default=None, help="integration step (default: stability bound)")
    cmp_parser.add_argument("--tol", type=float, default=1.0e-9, help="integration residual tolerance")
    cmp_parser.add_argument("--units", choices=("gamma_ab", "si"))
    cmp_parser.set_defaults(func=cmd_compare_oracle)

    return parser


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    return args.func(args)


if __name__ == "__main__":
    sys.exit(main())
