#!/usr/bin/env python3
"""Regenerate the headline spectra as CSV files under scripts/out/.

Covers the full spectrum with both broad and tunneling-induced features, a
close-up of the positive-detuning ultranarrow resonance, linewidth and
separation sweeps over g_c and g_b, the preparation-angle amplitude sweep,
and the group-velocity window beside the resonance.  Everything goes
through the CLI so the outputs are the same bytes a user would get.
"""

from __future__ import annotations

import json
import math
import sys
from pathlib import Path

from dweit.cli import main as cli_main

HERE = Path(__file__).resolve().parent
OUT = HERE / "out"
CONFIGS = HERE / "configs"


def run(argv: list[str]) -> None:
    print("dweit", " ".join(argv))
    code = cli_main(argv)
    if code != 0:
        sys.exit(code)


def sweep_config(base_path: Path, out_path: Path, **overrides) -> Path:
    config = json.loads(base_path.read_text())
    config.update(overrides)
    out_path.write_text(json.dumps(config, indent=1, sort_keys=True))
    return out_path


def main() -> None:
    OUT.mkdir(exist_ok=True)
    narrow = CONFIGS / "fig_narrow_resonance.json"

    run(["scan", "--config", str(CONFIGS / "fig_full_spectrum.json"), "--refine",
         "--out", str(OUT / "full_spectrum.csv")])
    run(["scan", "--config", str(narrow), "--refine",
         "--out", str(OUT / "narrow_resonance.csv")])

    # linewidth vs g_c and separation vs g_b
    for g_c in (1e-4, 2e-4, 4e-4):
        cfg = sweep_config(narrow, OUT / f"_cfg_gc_{g_c:.0e}.json",
                           g_c=g_c, grid_min=-5e-4, grid_max=5e-4, grid_count=2000)
        run(["scan", "--config", str(cfg), "--refine",
             "--out", str(OUT / f"vary_gc_{g_c:.0e}.csv")])
    for g_b in (0.5e-4, 1e-4, 2e-4, 4e-4):
        cfg = sweep_config(narrow, OUT / f"_cfg_gb_{g_b:.0e}.json",
                           g_b=g_b, grid_min=-5e-4, grid_max=5e-4, grid_count=2000)
        run(["scan", "--config", str(cfg), "--refine",
             "--out", str(OUT / f"vary_gb_{g_b:.0e}.csv")])

    phis = [k * math.pi / 16 for k in range(9)]
    run(["sweep-phi", "--config", str(narrow),
         "--phi", ",".join(f"{p:.17g}" for p in phis),
         "--out", str(OUT / "vary_phi.csv")])

    run(["scan", "--config", str(CONFIGS / "fig_group_velocity.json"),
         "--out", str(OUT / "group_velocity_window.csv")])

    run(["compare-oracle", "--config", str(CONFIGS / "fig_full_spectrum.json"),
         "--delta-p", "0.3,0.05,1.0", "--t-max", "10000"])


if __name__ == "__main__":
    main()
