"""Figure rendering from real CLI artifacts at reduced lattice sizes."""

import json
import shutil
import subprocess
import sys
from pathlib import Path

import pytest

RENDER = Path(__file__).resolve().parents[1] / "render.py"


def _cli(command, cfg, outdir):
    cfg_path = outdir / f"{command}_cfg.json"
    cfg_path.write_text(json.dumps(cfg), encoding="utf-8")
    proc = subprocess.run(
        [sys.executable, "-m", "dissipair.cli", command, "--config", str(cfg_path), "--out", str(outdir)],
        capture_output=True,
        text=True,
    )
    assert proc.returncode == 0, f"{command} failed: {proc.stderr}"


def _render(manifest_path, outdir):
    return subprocess.run(
        [sys.executable, str(RENDER), "--manifest", str(manifest_path), "--out", str(outdir)],
        capture_output=True,
        text=True,
    )


@pytest.fixture(scope="module")
def artifacts(tmp_path_factory):
    """One directory of small CLI runs covering every figure input schema."""
    root = tmp_path_factory.mktemp("artifacts")

    chain = root / "chain"
    chain.mkdir()
    _cli(
        "steady",
        {
            "model": {"kind": "ssh", "n": 9, "alpha": -0.65},
            "dissipator": {"site0": 2, "site1": 0, "eta_ratio": 0.9},
            "task": {"correlations": True},
        },
        chain,
    )

    lattice = root / "lattice"
    lattice.mkdir()
    _cli(
        "steady",
        {
            "model": {"kind": "hofstadter", "nx": 6, "ny": 6},
            "dissipator": {"site0": [3, 2], "site1": [1, 0], "eta_ratio": 0.5},
            "task": {
                "correlations": True,
                "spiral": True,
                "line_cuts": [{"path": "row", "index": 0}],
            },
        },
        lattice,
    )

    cylinder = root / "cylinder"
    cylinder.mkdir()
    _cli(
        "steady",
        {
            "model": {"kind": "hofstadter", "nx": 6, "ny": 6, "geometry": "cylinder"},
            "dissipator": {"site0": [3, 1], "site1": [5, 1], "eta_ratio": 0.5},
            "task": {},
        },
        cylinder,
    )
    _cli(
        "entanglement",
        {
            "model": {"kind": "hofstadter", "nx": 6, "ny": 6, "geometry": "cylinder"},
            "dissipator": {"site0": [3, 1], "site1": [5, 1], "eta_ratio": 0.5},
            "task": {"kind": "boundary"},
        },
        cylinder,
    )

    _cli(
        "stability",
        {
            "model": {"kind": "three_mode", "j1": 0.5, "j2": 1.0},
            "task": {"j_ratios": [0.25, 0.5, 0.75], "etas": [0.2, 0.4, 0.6, 0.8]},
        },
        root,
    )
    _cli(
        "entanglement",
        {
            "model": {"kind": "hofstadter", "nx": 6, "ny": 6},
            "dissipator": {"site0": [3, 2], "site1": [1, 0], "eta_ratio": 0.5},
            "task": {"kind": "angles", "angles": 6},
        },
        root,
    )
    _cli(
        "entanglement",
        {
            "model": {"kind": "hofstadter", "nx": 6, "ny": 6},
            "dissipator": {"site0": [3, 2], "site1": [1, 0], "eta_ratio": 0.5},
            "task": {"kind": "sizes", "sizes": [4, 6], "angles": 6},
        },
        root,
    )
    _cli(
        "disorder",
        {
            "model": {"kind": "ssh", "n": 10, "alpha": -0.6},
            "dissipator": {"site0": 2, "site1": 0, "eta_ratio": 0.99},
            "task": {"alphas": [-0.6], "sigmas": [0.06, 3.0], "realizations": 3},
            "seed": 5,
        },
        root,
    )
    _cli(
        "spectrum",
        {
            "model": {"kind": "ssh", "n": 9, "alpha": -0.65},
            "dissipator": {"site0": 2, "site1": 0, "eta": 0.21},
            "task": {"omega_count": 21, "omega_span": 3.0, "eta_sweep": [0.15, 0.21, 4]},
        },
        root,
    )
    _cli(
        "gap",
        {
            "model": {"kind": "ssh", "alpha": -0.7, "n": 8},
            "dissipator": {"site0": 2, "site1": 0, "eta_ratio": 0.99},
            "task": {"sizes": [8, 10]},
        },
        root,
    )
    _cli(
        "ep-scan",
        {
            "model": {"kind": "dimer_bs_pa", "j1": 1.0, "j2": 0.8, "kappa": 4.0},
            "task": {"etas": [0.0, 0.9, 31]},
        },
        root,
    )
    return root


def _manifest(root):
    return {
        "figures": [
            {"id": "fig1", "inputs": {"stability": str(root / "stability.csv")}},
            {"id": "fig2", "inputs": {"density": str(root / "chain" / "density.csv")}},
            {"id": "fig3", "inputs": {"density": str(root / "lattice" / "density.csv")}},
            {
                "id": "figS1",
                "inputs": {
                    "spectra": str(root / "ep_spectra.csv"),
                    "eps": str(root / "eps.json"),
                },
            },
            {"id": "figS2", "inputs": {"gap": str(root / "gap.csv")}},
            {
                "id": "figS3",
                "inputs": {"correlations": str(root / "chain" / "correlations.csv")},
            },
            {"id": "figS4", "inputs": {"disorder": str(root / "disorder.csv")}},
            {
                "id": "figS5",
                "inputs": {
                    "spectrum": str(root / "spectrum.csv"),
                    "eta_sweep": str(root / "eta_sweep.csv"),
                },
            },
            {
                "id": "figS6",
                "inputs": {"correlations": str(root / "lattice" / "correlations.csv")},
            },
            {"id": "figS7", "inputs": {"linecut": str(root / "lattice" / "linecut_0.csv")}},
            {
                "id": "figS8",
                "inputs": {
                    "sizes": str(root / "entropy_vs_size.csv"),
                    "angles": str(root / "entropy_vs_angle.csv"),
                },
            },
            {
                "id": "figS9",
                "inputs": {
                    "boundary": str(root / "cylinder" / "boundary_mi.csv"),
                    "density": str(root / "cylinder" / "density.csv"),
                },
            },
        ]
    }


def test_full_manifest_renders_all_figures(artifacts, tmp_path):
    manifest_path = tmp_path / "manifest.json"
    manifest_path.write_text(json.dumps(_manifest(artifacts)), encoding="utf-8")
    out = tmp_path / "figures"
    proc = _render(manifest_path, out)
    assert proc.returncode == 0, proc.stderr
    assert "12 figure(s), 0 failure(s)" in proc.stdout
    for fig_id in (
        "fig1", "fig2", "fig3", "figS1", "figS2", "figS3",
        "figS4", "figS5", "figS6", "figS7", "figS8", "figS9",
    ):
        assert (out / f"{fig_id}.png").exists()
    index = (out / "index.html").read_text(encoding="utf-8")
    assert "12 rendered, 0 failed" in index


def test_deleted_input_reports_exactly_one_failure(artifacts, tmp_path):
    root = tmp_path / "copy"
    shutil.copytree(artifacts, root)
    (root / "gap.csv").unlink()
    manifest_path = tmp_path / "manifest.json"
    manifest_path.write_text(json.dumps(_manifest(root)), encoding="utf-8")
    out = tmp_path / "figures"
    proc = _render(manifest_path, out)
    assert proc.returncode == 1
    assert "11 figure(s), 1 failure(s)" in proc.stdout
    assert proc.stderr.count("FAILED") == 1
    assert "FAILED figS2" in proc.stderr
    assert not (out / "figS2.png").exists()
    index = (out / "index.html").read_text(encoding="utf-8")
    assert "figS2" in index  # the failure is listed on the index page


def test_empty_manifest_exits_zero(tmp_path):
    manifest_path = tmp_path / "manifest.json"
    manifest_path.write_text(json.dumps({"figures": []}), encoding="utf-8")
    out = tmp_path / "figures"
    proc = _render(manifest_path, out)
    assert proc.returncode == 0
    assert (out / "index.html").exists()


def test_schema_mismatch_lists_expected_columns(tmp_path):
    bad = tmp_path / "density.csv"
    bad.write_text("a,b\n1,2\n", encoding="utf-8")
    manifest_path = tmp_path / "manifest.json"
    manifest_path.write_text(
        json.dumps({"figures": [{"id": "fig2", "inputs": {"density": str(bad)}}]}),
        encoding="utf-8",
    )
    out = tmp_path / "figures"
    proc = _render(manifest_path, out)
    assert proc.returncode == 1
    assert "site_index" in proc.stderr and "density" in proc.stderr
    assert not (out / "fig2.png").exists()


def test_unknown_figure_id_fails(tmp_path):
    manifest_path = tmp_path / "manifest.json"
    manifest_path.write_text(
        json.dumps({"figures": [{"id": "fig99", "inputs": {}}]}), encoding="utf-8"
    )
    proc = _render(manifest_path, tmp_path / "figures")
    assert proc.returncode == 1
    assert "fig99" in proc.stderr
