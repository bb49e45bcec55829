#!/usr/bin/env python3
"""Render the CSVs produced by reproduce_figures.py as PNGs.

Usage: python scripts/plot_spectra.py [out_dir]
Reads scripts/out/*.csv (run reproduce_figures.py first) and writes one PNG
per figure next to the data.
"""

from __future__ import annotations

import sys
from pathlib import Path

import matplotlib

matplotlib.use("Agg")
import matplotlib.pyplot as plt
import numpy as np

HERE = Path(__file__).resolve().parent


def load_scan(path: Path):
    rows = []
    for line in path.read_text().splitlines():
        parts = line.split(",")
        if len(parts) < 6:
            continue
        try:
            rows.append([float(tok) for tok in parts[:6]])
        except ValueError:
            continue
    data = np.array(rows)
    return {
        "delta_p": data[:, 0],
        "re_chi": data[:, 1],
        "im_chi": data[:, 2],
        "n": data[:, 3],
        "slope": data[:, 4],
        "vg_ratio": data[:, 5],
    }


def plot_spectrum(csv_path: Path, png_path: Path, xlim=None, title=""):
    d = load_scan(csv_path)
    fig, ax = plt.subplots(figsize=(7, 4.2))
    ax.plot(d["delta_p"], d["re_chi"], "-", lw=1.0, label=r"Re $\chi$")
    ax.plot(d["delta_p"], d["im_chi"], ":", lw=1.2, label=r"Im $\chi$")
    ax.set_xlabel(r"probe detuning $\Delta_p/\gamma_{ab}$")
    ax.set_ylabel(r"$\chi$ (figure units)")
    if xlim:
        ax.set_xlim(*xlim)
    ax.legend(loc="upper right")
    ax.set_title(title)
    fig.tight_layout()
    fig.savefig(png_path, dpi=150)
    plt.close(fig)


def plot_group_velocity(csv_path: Path, png_path: Path):
    d = load_scan(csv_path)
    fig, ax = plt.subplots(figsize=(7, 4.2))
    ax.semilogy(d["delta_p"], np.abs(d["vg_ratio"]), lw=1.2)
    ax.set_xlabel(r"probe detuning $\Delta_p/\gamma_{ab}$")
    ax.set_ylabel(r"$v_g / v_{\mathrm{EIT}}$")
    ax.set_title("group velocity beside the narrow resonance")
    fig.tight_layout()
    fig.savefig(png_path, dpi=150)
    plt.close(fig)


def plot_phi_sweep(csv_path: Path, png_path: Path):
    rows = []
    for line in csv_path.read_text().splitlines():
        parts = line.split(",")
        if len(parts) == 5:
            try:
                rows.append([float(t) for t in parts])
            except ValueError:
                continue
    data = np.array(rows)
    fig, ax = plt.subplots(figsize=(7, 4.2))
    ax.plot(data[:, 0], data[:, 1], "o-", label=r"height at $+g_b/2$")
    ax.plot(data[:, 0], data[:, 2], "s-", label=r"height at $-g_b/2$")
    scale = data[0, 1]
    ax.plot(data[:, 0], scale * data[:, 3], "k:", lw=1, label=r"$\propto (1-\sin 2\varphi)$")
    ax.plot(data[:, 0], scale * data[:, 4], "k--", lw=1, label=r"$\propto (1+\sin 2\varphi)$")
    ax.set_xlabel(r"preparation angle $\varphi$")
    ax.set_ylabel(r"Im $\chi$ at peak")
    ax.legend()
    fig.tight_layout()
    fig.savefig(png_path, dpi=150)
    plt.close(fig)


def main() -> None:
    out = Path(sys.argv[1]) if len(sys.argv) > 1 else HERE / "out"
    if not out.is_dir():
        sys.exit(f"{out} not found; run reproduce_figures.py first")
    jobs = [
        ("full_spectrum.csv", "full_spectrum.png", None, "full spectrum, exaggerated tunneling"),
        ("narrow_resonance.csv", "narrow_resonance.png", (9e-5, 11e-5), "ultranarrow resonance close-up"),
    ]
    for csv_name, png_name, xlim, title in jobs:
        src = out / csv_name
        if src.exists():
            plot_spectrum(src, out / png_name, xlim=xlim, title=title)
            print("wrote", out / png_name)
    if (out / "group_velocity_window.csv").exists():
        plot_group_velocity(out / "group_velocity_window.csv", out / "group_velocity.png")
        print("wrote", out / "group_velocity.png")
    if (out / "vary_phi.csv").exists():
        plot_phi_sweep(out / "vary_phi.csv", out / "vary_phi.png")
        print("wrote", out / "vary_phi.png")


if __name__ == "__main__":
    main()
