#!/usr/bin/env python3
"""Plot the CSV tables written by the podwave tool.

Usage: plot_results.py RESULTS_DIR [--out FIGURE_DIR]

Each known table found in RESULTS_DIR gets one PNG. Unknown files are ignored.
"""

import argparse
from pathlib import Path

import matplotlib

matplotlib.use("Agg")
import matplotlib.pyplot as plt
import pandas as pd


def read(path):
    return pd.read_csv(path, comment="#")


def plot_singvals(path, out):
    df = read(path)
    if df.empty:
        return
    fig, ax = plt.subplots()
    ax.semilogy(df["k"], df["sigma"], ".")
    kept = df[df["retained"] == 1]
    ax.axvline(kept["k"].max(), color="grey", lw=0.8, ls="--")
    ax.set_xlabel("k")
    ax.set_ylabel("singular value")
    ax.set_title(path.stem)
    fig.savefig(out / f"{path.stem}.png", dpi=150)
    plt.close(fig)


def plot_energy(path, out):
    df = read(path)
    fig, (a, b) = plt.subplots(2, 1, sharex=True)
    a.plot(df["t"], df["energy"])
    a.set_ylabel("E^n")
    b.semilogy(df["t"], df["residual"].abs() + 1e-300)
    b.set_ylabel("|balance residual|")
    b.set_xlabel("t")
    fig.savefig(out / "energy.png", dpi=150)
    plt.close(fig)


def plot_profiles(path, out):
    df = read(path)
    for (method, r), g in df.groupby(["method", "r"]):
        fig, ax = plt.subplots()
        for t, gt in g.groupby("t"):
            (line,) = ax.plot(gt["x"], gt["fe"], label=f"FE t={t:g}")
            ax.plot(gt["x"], gt["rom"], ls="--", color=line.get_color(), label=f"ROM t={t:g}")
        ax.set_xlabel("x")
        ax.set_title(f"{method}, r = {r}")
        ax.legend(fontsize="small")
        fig.savefig(out / f"profiles_{method}_r{r}.png", dpi=150)
        plt.close(fig)


def plot_sweep(path, out):
    df = read(path)
    fig, ax = plt.subplots()
    for (method, r), g in df.groupby(["method", "r"]):
        ax.loglog(g["value"], g["max_l2_sq"], "o-", label=f"{method} r={r}")
    ax.set_xlabel(df["parameter"].iloc[0])
    ax.set_ylabel("max_n |e^n|^2")
    ax.legend(fontsize="small")
    fig.savefig(out / f"{path.stem}.png", dpi=150)
    plt.close(fig)


def plot_train_interval(path, out):
    df = read(path)
    fig, ax = plt.subplots()
    for (method, r), g in df.groupby(["method", "r"]):
        ax.semilogy(g["T_train"], g["final_l2"], "o-", label=f"{method} r={r}")
    ax.set_xlabel("T_train")
    ax.set_ylabel("|e^N|")
    ax.legend(fontsize="small")
    fig.savefig(out / "train_interval.png", dpi=150)
    plt.close(fig)


def plot_convergence(path, out):
    df = read(path)
    fig, ax = plt.subplots()
    for n, g in df.groupby("n_elements"):
        ax.loglog(g["dt"], g["final_l2_error"], "o-", label=f"{n} elements")
    ax.set_xlabel("dt")
    ax.set_ylabel("L2 error at final time")
    ax.legend()
    fig.savefig(out / "convergence.png", dpi=150)
    plt.close(fig)


PLOTTERS = {
    "energy": plot_energy,
    "profiles": plot_profiles,
    "train_interval": plot_train_interval,
    "convergence": plot_convergence,
}


def main():
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("results", type=Path)
    ap.add_argument("--out", type=Path, default=None)
    args = ap.parse_args()
    out = args.out or args.results / "figures"
    out.mkdir(parents=True, exist_ok=True)

    for path in sorted(args.results.glob("*.csv")):
        stem = path.stem
        if stem.startswith("singvals_"):
            plot_singvals(path, out)
        elif stem.startswith("rom_sweep_"):
            plot_sweep(path, out)
        elif stem in PLOTTERS:
            PLOTTERS[stem](path, out)
        else:
            continue
        print(f"plotted {path.name}")


if __name__ == "__main__":
    main()
