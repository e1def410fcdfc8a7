"""Figure recipes and deterministic rendering.

A recipe names a figure layout, the input CSVs and the output image:

    {"figure": "fig2b", "inputs": ["scan1.csv", "scan2.csv"],
     "output": "fig2b.png"}

Rendering is a pure function of the CSV contents: axes and normalizations
come from the CSV metadata, matplotlib runs on the Agg backend with pinned
style, and SVG output uses a fixed hash salt so repeated renders are
byte-identical.
"""

from __future__ import annotations

import argparse
import json
import sys
from dataclasses import dataclass
from pathlib import Path

import matplotlib
matplotlib.use("Agg")
import matplotlib.pyplot as plt
import numpy as np

from .tables import CsvTable, SchemaError, read_csv

__all__ = ["FigureRecipe", "render", "load_recipe", "FIGURES", "main"]

_STYLE = {
    "figure.dpi": 120,
    "savefig.dpi": 120,
    "font.size": 9,
    "axes.linewidth": 0.8,
    "lines.linewidth": 1.2,
    "svg.hashsalt": "chirpfigs",
}


@dataclass(frozen=True)
class FigureRecipe:
    figure: str
    inputs: tuple[str, ...]
    output: str

    def __post_init__(self):
        if self.figure not in FIGURES:
            raise SchemaError(f"unknown figure id {self.figure!r}; "
                              f"known: {sorted(FIGURES)}")
        if not self.inputs:
            raise SchemaError("recipe has no inputs")


def load_recipe(path) -> FigureRecipe:
    data = json.loads(Path(path).read_text())
    unknown = set(data) - {"figure", "inputs", "output"}
    if unknown:
        raise SchemaError(f"unknown recipe keys {sorted(unknown)}")
    return FigureRecipe(figure=data["figure"], inputs=tuple(data["inputs"]),
                        output=data.get("output", data["figure"] + ".png"))


# ------------------------------------------------------------------ layouts


def _draw_fig1b(tables: list[CsvTable], fig):
    table = tables[0]
    profile_cols = sorted(c for c in table.columns
                          if c.startswith("E_over_Emax_t"))
    table.require("pulse-profile", {"z_over_lambda0", *profile_cols})
    if not profile_cols:
        raise SchemaError(f"{table.path}: no field-profile columns")
    axes = fig.subplots(len(profile_cols), 1, sharex=True)
    axes = np.atleast_1d(axes)
    z = table.columns["z_over_lambda0"]
    for ax, col in zip(axes, profile_cols):
        ax.plot(z, table.columns[col], color="#4464ad")
        ax.set_ylabel("E / E_max")
        ax.set_ylim(-1.05, 1.05)
        ax.annotate(f"t/t_f = {col.split('_t')[-1]}", xy=(0.02, 0.8),
                    xycoords="axes fraction")
    axes[-1].set_xlabel("z / lambda0")


def _draw_fig1c(tables: list[CsvTable], fig):
    table = tables[0]
    table.require("pulse-spectrum", {"sigma_f_over_lambda0",
                                     "mean_omega_over_omega_c",
                                     "std_omega_over_omega_c"})
    ax = fig.subplots()
    x = table.columns["sigma_f_over_lambda0"]
    ax.plot(x, table.columns["mean_omega_over_omega_c"], "o-",
            color="#4464ad", label="mean omega / omega_c")
    ax2 = ax.twinx()
    ax2.plot(x, table.columns["std_omega_over_omega_c"], "s--",
             color="#a43d3d", label="S_omega / omega_c")
    ax.set_xlabel("sigma_f / lambda0")
    ax.set_ylabel("mean omega / omega_c")
    ax2.set_ylabel("S_omega / omega_c")


def _draw_fig2a(tables: list[CsvTable], fig):
    ax = fig.subplots()
    for table in tables:
        table.require("qubit-trace", {"t_omega_c", "p_e"})
        t_f = table.metadata["t_f_omega_c"]
        label = f"d/lambda0 = {table.metadata['d_over_lambda0']:.2f}"
        ax.plot(table.columns["t_omega_c"] / t_f, table.columns["p_e"],
                label=label)
    ax.set_xlabel("t / t_f")
    ax.set_ylabel("p_e")
    ax.set_ylim(-0.02, 1.02)
    ax.legend(loc="upper left")


def _draw_fig2b(tables: list[CsvTable], fig):
    ax = fig.subplots()
    for table in tables:
        table.require("position-scan", {"d_over_lambda0", "p_g"})
        md = table.metadata
        label = (f"sigma_f/lambda0 = {md['sigma_f_over_lambda0']:.2f}, "
                 f"Omega0/omega_c = {md['Omega0_over_omega_c']:.3f}")
        ax.plot(table.columns["d_over_lambda0"], table.columns["p_g"],
                label=label)
    ax.set_xlabel("d / lambda0")
    ax.set_ylabel("p_g(tau(d))")
    ax.set_ylim(-0.02, 1.05)
    ax.legend(loc="upper left", fontsize=7)


def _draw_fig3(tables: list[CsvTable], fig):
    table = tables[0]
    table.require("position-scan", {"d_over_lambda0", "p_0", "p_1"})
    if table.metadata.get("emitter") != "transmon":
        raise SchemaError(f"{table.path}: not a transmon scan")
    ax = fig.subplots()
    d = table.columns["d_over_lambda0"]
    levels = sorted(int(c[2:]) for c in table.columns
                    if c.startswith("p_") and c[2:].isdigit())
    for n in levels[:4]:
        ax.plot(d, table.columns[f"p_{n}"], label=f"p_{n}")
    ax.set_xlabel("d / lambda0")
    ax.set_ylabel("p_n(tau(d))")
    ax.legend(loc="center left")


def _draw_figS1(tables: list[CsvTable], fig):
    table = tables[0]
    table.require("crystal-bands", {"k_a", "omega_band1", "omega_band2",
                                    "omega_fit"})
    ax = fig.subplots()
    k = table.columns["k_a"]
    for col in sorted(c for c in table.columns if c.startswith("omega_band")):
        ax.plot(k, table.columns[col], color="#4464ad")
    ax.plot(k, table.columns["omega_fit"], "--", color="#a43d3d",
            label="quadratic fit (band 2)")
    ax.set_ylim(0.0, None)
    ax.set_xlabel("k a")
    ax.set_ylabel("omega a / c1")
    ax.legend(loc="upper left")


def _draw_figS2(tables: list[CsvTable], fig):
    table = tables[0]
    table.require("lz-trace", {"t_omega_c", "d_over_lambda0",
                               "delta_over_omega_c", "g_over_omega_c",
                               "e_minus_over_omega_c", "e_plus_over_omega_c"})
    ax_a, ax_b = fig.subplots(1, 2)
    t_f = table.metadata["t_f_omega_c"]
    ds = np.unique(table.columns["d_over_lambda0"])
    for d in ds:
        sel = table.columns["d_over_lambda0"] == d
        t = table.columns["t_omega_c"][sel] / t_f
        ax_a.plot(t, table.columns["e_minus_over_omega_c"][sel],
                  color="#4464ad")
        ax_a.plot(t, table.columns["e_plus_over_omega_c"][sel],
                  color="#a43d3d")
        ax_b.plot(t, table.columns["delta_over_omega_c"][sel],
                  label=f"d/lambda0={d:g}")
        ax_b.plot(t, table.columns["g_over_omega_c"][sel], "--")
    ax_a.set_xlabel("t / t_f")
    ax_a.set_ylabel("dressed energies / omega_c")
    ax_b.set_xlabel("t / t_f")
    ax_b.set_ylabel("Delta, g / omega_c")
    ax_b.legend(fontsize=6)


def _draw_figS3(tables: list[CsvTable], fig):
    table = tables[0]
    table.require("gamma-sweep", {"d_over_lambda0", "gamma", "p_g"})
    ax = fig.subplots()
    gammas = np.unique(table.columns["gamma"])
    wq = table.metadata["omega_q_over_omega_c"]
    for g in gammas:
        sel = table.columns["gamma"] == g
        ax.plot(table.columns["d_over_lambda0"][sel],
                table.columns["p_g"][sel],
                label=f"Gamma/omega_q = {g / wq:.1e}")
    ax.set_xlabel("d / lambda0")
    ax.set_ylabel("p_g(tau(d))")
    ax.legend(fontsize=7)


FIGURES = {
    "fig1b": _draw_fig1b,
    "fig1c": _draw_fig1c,
    "fig2a": _draw_fig2a,
    "fig2b": _draw_fig2b,
    "fig3": _draw_fig3,
    "figS1": _draw_figS1,
    "figS2": _draw_figS2,
    "figS3": _draw_figS3,
}

_SIZES = {"fig1b": (4.2, 5.6), "figS2": (6.4, 2.8)}


def render(recipe: FigureRecipe, out_dir=".") -> Path:
    """Draw one recipe; returns the written image path.

    The output format follows the recipe's suffix (.png or .svg); identical
    CSV inputs produce byte-identical files.
    """
    tables = [read_csv(p) for p in recipe.inputs]
    out = Path(out_dir) / recipe.output
    out.parent.mkdir(parents=True, exist_ok=True)
    with plt.rc_context(_STYLE):
        fig = plt.figure(figsize=_SIZES.get(recipe.figure, (4.2, 3.0)))
        try:
            FIGURES[recipe.figure](tables, fig)
            fig.suptitle(recipe.figure)
            fig.tight_layout()
            if out.suffix == ".svg":
                fig.savefig(out, metadata={"Date": None})
            else:
                fig.savefig(out)
        finally:
            plt.close(fig)
    return out


def main(argv=None) -> int:
    parser = argparse.ArgumentParser(
        prog="chirpfigs", description="Render simulation CSVs into figures")
    parser.add_argument("recipes", nargs="+", type=Path,
                        help="recipe JSON files")
    parser.add_argument("--out-dir", default=".", help="output directory")
    args = parser.parse_args(argv)
    status = 0
    for path in args.recipes:
        try:
            out = render(load_recipe(path), args.out_dir)
            print(out)
        except SchemaError as err:
            print(f"schema error in {path}: {err}", file=sys.stderr)
            status = 1
    return status


if __name__ == "__main__":
    sys.exit(main())
