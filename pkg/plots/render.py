#!/usr/bin/env python3
"""Render publication-style figures from simulator CSV/JSON artifacts.

Usage::

    python3 plots/render.py --manifest manifest.json --out figures/

The manifest lists one entry per figure::

    {"figures": [
        {"id": "fig1", "inputs": {"stability": "out/stability.csv"}},
        ...
    ]}

Each figure id has a fixed input contract (roles and CSV columns, documented
in SCHEMAS below). This layer only reads files; it never recomputes physics.
Rendering continues past individual failures; the exit code is nonzero when
any figure failed. An ``index.html`` linking the rendered images is always
written.
"""

from __future__ import annotations

import argparse
import html
import json
import sys
from dataclasses import dataclass, field
from pathlib import Path

import matplotlib

matplotlib.use("Agg")

import matplotlib.pyplot as plt
import numpy as np
import pandas as pd

DPI = 150
FIGURE_IDS = (
    "fig1",
    "fig2",
    "fig3",
    "figS1",
    "figS2",
    "figS3",
    "figS4",
    "figS5",
    "figS6",
    "figS7",
    "figS8",
    "figS9",
)

# input role -> required CSV columns (None for JSON inputs)
SCHEMAS: dict[str, dict[str, list[str] | None]] = {
    "fig1": {"stability": ["variant", "j_ratio", "eta", "max_re_eig", "stable"]},
    "fig2": {"density": ["site_index", "x", "y", "density"]},
    "fig3": {"density": ["site_index", "x", "y", "density"]},
    "figS1": {
        "spectra": ["variant", "eta", "branch", "re", "im"],
        "eps": None,
    },
    "figS2": {"gap": ["n", "gap", "mirrored"]},
    "figS3": {
        "correlations": ["i", "j", "re_normal", "im_normal", "re_anomalous", "im_anomalous"]
    },
    "figS4": {"disorder": ["alpha", "sigma", "mean_s", "stderr_s", "skipped"]},
    "figS5": {
        "spectrum": ["omega", "p", "theta_opt"],
        "eta_sweep": ["eta", "p0"],
    },
    "figS6": {
        "correlations": ["i", "j", "re_normal", "im_normal", "re_anomalous", "im_anomalous"]
    },
    "figS7": {
        "linecut": ["position", "site_index", "density", "corr_normal_abs", "corr_anomalous_abs"]
    },
    "figS8": {
        "sizes": ["n", "n_edge", "mean_entropy", "min_entropy", "max_entropy"],
        "angles": ["theta", "entropy_nats", "n_sites_a"],
    },
    "figS9": {
        "boundary": ["region_a", "region_b", "mi_nats"],
        "density": ["site_index", "x", "y", "density"],
    },
}


class SchemaError(Exception):
    pass


@dataclass
class FigureSpec:
    figure_id: str
    inputs: dict[str, str]
    out_name: str = ""
    style: dict = field(default_factory=dict)

    def __post_init__(self):
        if self.figure_id not in SCHEMAS:
            raise SchemaError(
                f"unknown figure id {self.figure_id!r}; supported: {', '.join(FIGURE_IDS)}"
            )
        if not self.out_name:
            self.out_name = f"{self.figure_id}.png"


def _load_inputs(spec: FigureSpec) -> dict:
    schema = SCHEMAS[spec.figure_id]
    missing = sorted(set(schema) - set(spec.inputs))
    if missing:
        raise SchemaError(f"{spec.figure_id}: missing input roles {missing}")
    loaded = {}
    for role, columns in schema.items():
        path = Path(spec.inputs[role])
        if not path.exists():
            raise SchemaError(f"{spec.figure_id}: input {role!r} not found at {path}")
        if columns is None:
            loaded[role] = json.loads(path.read_text(encoding="utf-8"))
            continue
        frame = pd.read_csv(path)
        got = list(frame.columns)
        if got != columns:
            raise SchemaError(
                f"{spec.figure_id}: {role!r} columns {got} do not match the expected {columns}"
            )
        if frame.empty:
            raise SchemaError(f"{spec.figure_id}: {role!r} has a header but no data rows")
        loaded[role] = frame
    return loaded


def _density_grid(frame: pd.DataFrame) -> np.ndarray:
    xs = np.sort(frame["x"].unique())
    ys = np.sort(frame["y"].unique())
    grid = np.full((len(xs), len(ys)), np.nan)
    xi = {v: k for k, v in enumerate(xs)}
    yi = {v: k for k, v in enumerate(ys)}
    for _, row in frame.iterrows():
        grid[xi[row["x"]], yi[row["y"]]] = row["density"]
    return grid


def _render_fig1(data, style):
    frame = data["stability"]
    variants = list(dict.fromkeys(frame["variant"]))
    fig, axes = plt.subplots(1, len(variants), figsize=(4 * len(variants), 3.2), squeeze=False)
    for ax, variant in zip(axes[0], variants):
        sub = frame[frame["variant"] == variant]
        table = sub.pivot_table(index="j_ratio", columns="eta", values="stable")
        ax.pcolormesh(
            table.columns.to_numpy(),
            table.index.to_numpy(),
            table.to_numpy(),
            cmap="RdYlGn",
            vmin=0,
            vmax=1,
            shading="nearest",
        )
        ratios = np.sort(sub["j_ratio"].unique())
        ax.plot(ratios, ratios, "k--", lw=1, label="eta = J1/J2")
        ax.set_xlabel("eta")
        ax.set_ylabel("J1/J2")
        ax.set_title(f"{variant} dissipation")
        ax.legend(loc="upper left", fontsize=7)
    return fig


def _render_chain_density(data, style, logy):
    frame = data["density"]
    fig, ax = plt.subplots(figsize=(5, 3.2))
    ax.plot(frame["site_index"], frame["density"], "o-", ms=3, lw=1)
    if logy:
        ax.set_yscale("log")
    ax.set_xlabel("site")
    ax.set_ylabel("photon number")
    ax.set_title("steady-state density")
    return fig


def _render_fig3(data, style):
    grid = _density_grid(data["density"])
    fig, ax = plt.subplots(figsize=(4.4, 3.6))
    im = ax.imshow(grid.T, origin="lower", cmap="magma", aspect="equal")
    fig.colorbar(im, ax=ax, label="photon number")
    ax.set_xlabel("x")
    ax.set_ylabel("y")
    ax.set_title("steady-state density")
    return fig


def _render_figS1(data, style):
    frame = data["spectra"]
    eps = data["eps"]
    variants = list(dict.fromkeys(frame["variant"]))
    fig, axes = plt.subplots(2, len(variants), figsize=(4 * len(variants), 5), squeeze=False)
    for col, variant in enumerate(variants):
        sub = frame[frame["variant"] == variant]
        for part, ax in zip(("re", "im"), axes[:, col]):
            for branch, branch_frame in sub.groupby("branch"):
                ax.plot(branch_frame["eta"], branch_frame[part], ".", ms=2)
            for ep in eps.get(variant, []):
                ax.axvline(ep["eta"], color="k", ls=":", lw=1)
            ax.set_xlabel("eta")
            ax.set_ylabel(f"{part.capitalize()} eigenvalue")
            ax.set_title(f"{variant}")
    return fig


def _render_figS2(data, style):
    frame = data["gap"]
    fig, ax = plt.subplots(figsize=(4.5, 3.2))
    labels = {0: "single dissipator", 1: "with mirrored dissipator"}
    for flag, sub in frame.groupby("mirrored"):
        ax.semilogy(sub["n"], sub["gap"], "o-", ms=4, label=labels.get(flag, str(flag)))
    ax.set_xlabel("chain length N")
    ax.set_ylabel("dissipative gap")
    ax.legend(fontsize=8)
    return fig


def _render_correlations(data, style):
    frame = data["correlations"]
    n = int(frame["i"].max()) + 1
    normal = np.zeros((n, n), dtype=complex)
    anomalous = np.zeros((n, n), dtype=complex)
    ii = frame["i"].to_numpy(dtype=int)
    jj = frame["j"].to_numpy(dtype=int)
    normal[ii, jj] = frame["re_normal"].to_numpy() + 1j * frame["im_normal"].to_numpy()
    anomalous[ii, jj] = frame["re_anomalous"].to_numpy() + 1j * frame["im_anomalous"].to_numpy()
    fig, axes = plt.subplots(1, 2, figsize=(8, 3.4))
    im0 = axes[0].imshow(np.abs(normal), cmap="viridis", origin="lower")
    axes[0].set_title("|normal correlations|")
    fig.colorbar(im0, ax=axes[0])
    scale = np.abs(anomalous.real).max() or 1.0
    im1 = axes[1].imshow(
        anomalous.real, cmap="RdBu_r", vmin=-scale, vmax=scale, origin="lower"
    )
    axes[1].set_title("Re anomalous correlations")
    fig.colorbar(im1, ax=axes[1])
    for ax in axes:
        ax.set_xlabel("site order")
        ax.set_ylabel("site order")
    return fig


def _render_figS4(data, style):
    frame = data["disorder"]
    fig, ax = plt.subplots(figsize=(4.5, 3.2))
    for alpha, sub in frame.groupby("alpha"):
        ax.errorbar(
            sub["sigma"],
            sub["mean_s"],
            yerr=sub["stderr_s"],
            fmt="o-",
            ms=3,
            capsize=2,
            label=f"alpha = {alpha:g}",
        )
    ax.set_xscale("log")
    ax.set_xlabel("disorder strength sigma")
    ax.set_ylabel("edge localization S")
    ax.legend(fontsize=8)
    return fig


def _render_figS5(data, style):
    spectrum = data["spectrum"]
    sweep = data["eta_sweep"]
    fig, axes = plt.subplots(1, 2, figsize=(8, 3.2))
    axes[0].semilogy(spectrum["omega"], spectrum["p"], lw=1)
    axes[0].axhline(1.0, color="k", ls=":", lw=1)
    axes[0].set_xlabel("frequency")
    axes[0].set_ylabel("squeezing spectrum P")
    axes[1].semilogy(sweep["eta"], sweep["p0"], "o-", ms=3)
    axes[1].set_xlabel("eta")
    axes[1].set_ylabel("P(0)")
    return fig


def _render_figS7(data, style):
    frame = data["linecut"]
    fig, ax = plt.subplots(figsize=(5, 3.2))
    ax.semilogy(frame["position"], frame["density"], "o-", ms=3, label="density")
    ax.semilogy(
        frame["position"], frame["corr_normal_abs"], "s--", ms=3, label="|normal corr|"
    )
    ax.semilogy(
        frame["position"], frame["corr_anomalous_abs"], "^--", ms=3, label="|anomalous corr|"
    )
    ax.set_xlabel("position along cut")
    ax.legend(fontsize=8)
    return fig


def _render_figS8(data, style):
    sizes = data["sizes"]
    angles = data["angles"]
    fig, axes = plt.subplots(1, 2, figsize=(8, 3.2))
    axes[0].plot(sizes["n_edge"], sizes["mean_entropy"], "o-", ms=4)
    axes[0].fill_between(
        sizes["n_edge"], sizes["min_entropy"], sizes["max_entropy"], alpha=0.25
    )
    axes[0].set_xlabel("edge-site count")
    axes[0].set_ylabel("bipartition entropy (nats)")
    axes[1].plot(angles["theta"], angles["entropy_nats"], "o-", ms=3)
    axes[1].set_xlabel("cut angle theta")
    axes[1].set_ylabel("entropy (nats)")
    return fig


def _render_figS9(data, style):
    grid = _density_grid(data["density"])
    boundary = data["boundary"]
    fig, axes = plt.subplots(1, 2, figsize=(8, 3.4), gridspec_kw={"width_ratios": [2, 1]})
    im = axes[0].imshow(grid.T, origin="lower", cmap="magma", aspect="equal")
    fig.colorbar(im, ax=axes[0], label="photon number")
    axes[0].set_xlabel("x")
    axes[0].set_ylabel("y")
    labels = [f"{a} / {b}" for a, b in zip(boundary["region_a"], boundary["region_b"])]
    axes[1].bar(labels, boundary["mi_nats"])
    axes[1].set_yscale("log")
    axes[1].set_ylabel("mutual information (nats)")
    axes[1].tick_params(axis="x", labelsize=7, rotation=20)
    return fig


_RENDERERS = {
    "fig1": _render_fig1,
    "fig2": lambda data, style: _render_chain_density(data, style, logy=True),
    "fig3": _render_fig3,
    "figS1": _render_figS1,
    "figS2": _render_figS2,
    "figS3": _render_correlations,
    "figS4": _render_figS4,
    "figS5": _render_figS5,
    "figS6": _render_correlations,
    "figS7": _render_figS7,
    "figS8": _render_figS8,
    "figS9": _render_figS9,
}


def render(spec: FigureSpec, outdir: Path) -> Path:
    """Render one figure; returns the written image path.

    Raises :class:`SchemaError` before any file is written when an input is
    missing, empty, or has the wrong columns.
    """
    data = _load_inputs(spec)
    fig = _RENDERERS[spec.figure_id](data, spec.style)
    out = outdir / spec.out_name
    fig.savefig(out, dpi=DPI, bbox_inches="tight")
    plt.close(fig)
    return out


def render_all(manifest: dict, outdir: Path) -> tuple[list[Path], list[tuple[str, str]]]:
    """Render every figure in the manifest; returns (images, failures)."""
    outdir.mkdir(parents=True, exist_ok=True)
    images: list[Path] = []
    failures: list[tuple[str, str]] = []
    for entry in manifest.get("figures", []):
        fig_id = entry.get("id", "<missing id>")
        try:
            spec = FigureSpec(
                figure_id=fig_id,
                inputs=entry.get("inputs", {}),
                out_name=entry.get("out", ""),
                style=entry.get("style", {}),
            )
            images.append(render(spec, outdir))
        except (SchemaError, OSError, ValueError, KeyError) as exc:
            failures.append((fig_id, str(exc)))
            print(f"FAILED {fig_id}: {exc}", file=sys.stderr)
    _write_index(outdir, images, failures)
    return images, failures


def _write_index(outdir: Path, images: list[Path], failures: list[tuple[str, str]]) -> None:
    parts = ["<!DOCTYPE html><html><head><title>figures</title></head><body>"]
    parts.append(f"<h1>Figures ({len(images)} rendered, {len(failures)} failed)</h1>")
    for img in images:
        name = html.escape(img.name)
        parts.append(f'<h2>{name}</h2><img src="{name}" style="max-width:900px">')
    if failures:
        parts.append("<h2>Failures</h2><ul>")
        for fig_id, message in failures:
            parts.append(f"<li><b>{html.escape(fig_id)}</b>: {html.escape(message)}</li>")
        parts.append("</ul>")
    parts.append("</body></html>")
    (outdir / "index.html").write_text("\n".join(parts), encoding="utf-8")


def main(argv=None) -> int:
    parser = argparse.ArgumentParser(description=__doc__)
    parser.add_argument("--manifest", required=True)
    parser.add_argument("--out", required=True)
    args = parser.parse_args(argv)
    try:
        manifest = json.loads(Path(args.manifest).read_text(encoding="utf-8"))
    except (OSError, json.JSONDecodeError) as exc:
        print(f"error: cannot read manifest: {exc}", file=sys.stderr)
        return 2
    images, failures = render_all(manifest, Path(args.out))
    print(f"rendered {len(images)} figure(s), {len(failures)} failure(s)")
    return 1 if failures else 0


if __name__ == "__main__":
    sys.exit(main())
