"""Command-line runner: every computation as a subcommand driven by JSON.

Usage::

    dissipair <stability|steady|entanglement|disorder|spectrum|gap|ep-scan>
        --config <path> [--out <dir>] [--threads N] [--seed S]

Exit codes: 0 success, 2 unstable configuration, 3 non-unique steady state,
4 configuration error.
"""

from __future__ import annotations

import argparse
import json
import os
import sys
from concurrent.futures import ThreadPoolExecutor
from pathlib import Path

import numpy as np

from . import __version__
from .config import RunConfig, load_config
from .core import QuadraticSystem, build_drift, canonical_pairing, uncorrelated_pair
from .entanglement import (
    angled_bipartitions,
    entanglement_entropy,
    disorder_sweep,
    line_cut,
    mutual_information,
    spiral_order,
)
from .errors import ConfigError, DissipairError, NonUniqueError, UnstableError
from .lattices import build_hofstadter, build_ssh, build_three_mode, eigenpairs
from .spectrum_io import IoSetup, default_frequency_grid, eta_opt_search, squeezing_spectrum
from .stability import dimer_drift, ep_scan, eta_critical_wavefunction, spectrum
from .steady import (
    bogoliubov_steady_state,
    dissipative_gap_vs_size,
    lyapunov_steady_state,
    mirrored_dissipator,
    observables,
    squeezed_noise_comparator,
)

COMMANDS = ("stability", "steady", "entanglement", "disorder", "spectrum", "gap", "ep-scan")


class _Parser(argparse.ArgumentParser):
    def error(self, message):  # usage problems are configuration errors
        self.print_usage(sys.stderr)
        raise ConfigError(message)


def _fmt(x) -> str:
    if isinstance(x, (bool, np.bool_)):
        return "1" if x else "0"
    if isinstance(x, (int, np.integer)):
        return str(int(x))
    if isinstance(x, (float, np.floating)):
        return f"{float(x):.17g}"
    return str(x)


def _write_csv(path: Path, header, rows) -> None:
    lines = [",".join(header)]
    for row in rows:
        lines.append(",".join(_fmt(x) for x in row))
    path.write_text("\n".join(lines) + "\n", encoding="utf-8")


def _write_sidecar(data_path: Path, cfg: RunConfig, seed, extra=None) -> None:
    meta = {
        "command": cfg.command,
        "config": cfg.raw,
        "seed": seed,
        "version": f"dissipair-{__version__}",
    }
    if extra:
        meta.update(extra)
    side = data_path.with_name(data_path.name + ".meta.json")
    side.write_text(json.dumps(meta, indent=2, sort_keys=True) + "\n", encoding="utf-8")


def _build_model(model: dict) -> QuadraticSystem:
    kind = model["kind"]
    if kind == "three_mode":
        return build_three_mode(model["j1"], model["j2"])
    if kind == "ssh":
        return build_ssh(
            int(model["n"]),
            model["alpha"],
            j=model.get("j", 1.0),
            sigma=model.get("sigma", 0.0),
            convention=model.get("convention", "plus"),
        )
    if kind == "hofstadter":
        return build_hofstadter(int(model["nx"]), int(model["ny"]), model.get("geometry", "open"))
    raise ConfigError(f"model kind {kind!r} not usable here")


def _site(system: QuadraticSystem, value) -> int:
    geom = system.geometry
    if isinstance(value, int):
        if not 0 <= value < system.n_modes:
            raise ConfigError(f"site index {value} out of range")
        return value
    if isinstance(value, (list, tuple)) and geom is not None:
        try:
            return geom.site_index(tuple(value))
        except DissipairError as exc:
            raise ConfigError(str(exc)) from exc
    raise ConfigError(f"cannot interpret site {value!r}")


def _resolve_dissipator(cfg: RunConfig, system: QuadraticSystem):
    d = cfg.dissipator
    if "site0" not in d or "site1" not in d:
        raise ConfigError("dissipator.site0 and dissipator.site1 are required")
    s0 = _site(system, d["site0"])
    s1 = _site(system, d["site1"])
    kappa = d.get("kappa", 1.0)
    modes = eigenpairs(system)
    geom = system.geometry
    cluster_rtol = 1e-5 if geom is not None and geom.kind == "square_cylinder" else 0.0
    eta_c = eta_critical_wavefunction(modes, s0, s1, cluster_rtol=cluster_rtol).critical_value
    if "eta" in d:
        eta = float(d["eta"])
    elif "eta_ratio" in d:
        eta = float(d["eta_ratio"]) * eta_c
    else:
        raise ConfigError("dissipator needs eta or eta_ratio")
    return modes, s0, s1, eta, kappa, eta_c


def _coords(system: QuadraticSystem, index: int):
    geom = system.geometry
    if geom is None:
        return (index, 0)
    c = geom.coord(index)
    return (c[0], c[1] if len(c) > 1 else 0)


# ---------------------------------------------------------------- commands


def _run_stability(cfg: RunConfig, outdir: Path, seed: int, threads: int) -> None:
    if cfg.model["kind"] != "three_mode":
        raise ConfigError("stability grids are defined for the three_mode model")
    task = cfg.task
    ratios = task.get("j_ratios")
    etas = task.get("etas")
    if not ratios or not etas:
        raise ConfigError("task.j_ratios and task.etas are required")
    kappa = task.get("kappa", 1.0)
    variants = task.get("variants", ["correlated", "uncorrelated"])
    for v in variants:
        if v not in ("correlated", "uncorrelated"):
            raise ConfigError(f"unknown variant {v!r}")
    points = [(v, r, e) for v in variants for r in ratios for e in etas]

    def evaluate(point):
        variant, ratio, eta = point
        system = build_three_mode(ratio, 1.0)
        if variant == "correlated":
            jumps = [canonical_pairing(3, 0, 2, eta, kappa)]
        else:
            jumps = uncorrelated_pair(3, 0, 2, eta, kappa)
        rep = spectrum(build_drift(system.with_jumps(jumps)))
        return (variant, ratio, eta, rep.max_real_part, rep.stable)

    with ThreadPoolExecutor(max_workers=max(threads, 1)) as pool:
        rows = list(pool.map(evaluate, points))
    path = outdir / "stability.csv"
    _write_csv(path, ["variant", "j_ratio", "eta", "max_re_eig", "stable"], rows)
    _write_sidecar(path, cfg, seed)


def _run_steady(cfg: RunConfig, outdir: Path, seed: int, threads: int) -> None:
    system = _build_model(cfg.model)
    modes, s0, s1, eta, kappa, eta_c = _resolve_dissipator(cfg, system)
    jump = canonical_pairing(system.n_modes, s0, s1, eta, kappa)
    summary = {"eta": eta, "eta_c": eta_c, "site0": s0, "site1": s1, "kappa": kappa}
    if cfg.dissipator.get("comparator", False):
        obs, rep = squeezed_noise_comparator(system, s0, s1, eta, kappa)
        summary["comparator"] = True
        summary["max_re_eig"] = rep.max_real_part
        cov = None
    elif cfg.dissipator.get("mirrored", False):
        sys2 = mirrored_dissipator(system, jump)
        cov = lyapunov_steady_state(sys2)
        obs = observables(cov)
        summary["mirrored"] = True
    else:
        geom = system.geometry
        cylinder = geom is not None and geom.kind == "square_cylinder"
        cov, sq = bogoliubov_steady_state(
            modes,
            jump,
            degenerate="project" if cylinder else "error",
            cluster_rtol=1e-5,
        )
        obs = observables(cov)
        summary["n_pairs"] = int(sq.pair_r.size)
        summary["max_pair_r"] = float(sq.pair_r.max()) if sq.pair_r.size else 0.0
        summary["min_eta_alpha"] = sq.min_eta_alpha
    summary["purity"] = obs.purity
    summary["total_photons"] = obs.total_photons

    rows = []
    for i, dens in enumerate(obs.density):
        x, y = _coords(system, i)
        rows.append((i, x, y, dens))
    path = outdir / "density.csv"
    _write_csv(path, ["site_index", "x", "y", "density"], rows)
    _write_sidecar(path, cfg, seed)

    if cfg.task.get("correlations", False):
        order = np.arange(system.n_modes)
        if cfg.task.get("spiral", False):
            order = spiral_order(system.geometry)
        nb, ab = obs.normal, obs.anomalous
        crows = []
        for pi, i in enumerate(order):
            for pj, j in enumerate(order):
                crows.append(
                    (pi, pj, nb[i, j].real, nb[i, j].imag, ab[i, j].real, ab[i, j].imag)
                )
        cpath = outdir / "correlations.csv"
        _write_csv(
            cpath,
            ["i", "j", "re_normal", "im_normal", "re_anomalous", "im_anomalous"],
            crows,
        )
        _write_sidecar(cpath, cfg, seed, {"spiral": bool(cfg.task.get("spiral", False))})

    for k, cut in enumerate(cfg.task.get("line_cuts", [])):
        if cov is None:
            raise ConfigError("line cuts require a covariance-producing run")
        ref = cut.get("ref_site")
        if isinstance(ref, (list, tuple)):
            ref = _site(system, list(ref))
        sites, dens, cn, ca = line_cut(
            cov, system.geometry, cut.get("path", "row"), index=int(cut.get("index", 0)), ref_site=ref
        )
        lrows = [(p, int(s), dens[p], cn[p], ca[p]) for p, s in enumerate(sites)]
        lpath = outdir / f"linecut_{k}.csv"
        _write_csv(lpath, ["position", "site_index", "density", "corr_normal_abs", "corr_anomalous_abs"], lrows)
        _write_sidecar(lpath, cfg, seed, {"cut": cut})

    spath = outdir / "summary.json"
    spath.write_text(json.dumps(summary, indent=2, sort_keys=True) + "\n", encoding="utf-8")
    _write_sidecar(spath, cfg, seed)


def _steady_cov_for(system: QuadraticSystem, cfg: RunConfig):
    modes, s0, s1, eta, kappa, eta_c = _resolve_dissipator(cfg, system)
    jump = canonical_pairing(system.n_modes, s0, s1, eta, kappa)
    geom = system.geometry
    cylinder = geom is not None and geom.kind == "square_cylinder"
    cov, _ = bogoliubov_steady_state(
        modes, jump, degenerate="project" if cylinder else "error", cluster_rtol=1e-5
    )
    return cov, eta, eta_c


def _run_entanglement(cfg: RunConfig, outdir: Path, seed: int, threads: int) -> None:
    kind = cfg.task.get("kind", "angles")
    if kind == "angles":
        system = _build_model(cfg.model)
        cov, eta, eta_c = _steady_cov_for(system, cfg)
        count = int(cfg.task.get("angles", system.geometry.dims[0]))
        parts = angled_bipartitions(system.geometry, count)
        rows = []
        for m, part in enumerate(parts):
            rows.append((np.pi * m / count, entanglement_entropy(cov, part), len(part.sites)))
        path = outdir / "entropy_vs_angle.csv"
        _write_csv(path, ["theta", "entropy_nats", "n_sites_a"], rows)
        _write_sidecar(path, cfg, seed, {"eta": eta, "eta_c": eta_c})
    elif kind == "sizes":
        if cfg.model["kind"] != "hofstadter":
            raise ConfigError("size scaling is defined for the hofstadter model")
        sizes = cfg.task.get("sizes")
        if not sizes:
            raise ConfigError("task.sizes is required")
        rule0 = cfg.task.get("site0_rule", [0, 2])
        rule1 = cfg.task.get("site1_rule", [-2, 0])
        rows = []
        for n in sizes:
            n = int(n)
            system = build_hofstadter(n, n, cfg.model.get("geometry", "open"))
            sub = RunConfig(
                command=cfg.command,
                model=cfg.model,
                dissipator={
                    **{k: v for k, v in cfg.dissipator.items() if k not in ("site0", "site1")},
                    "site0": [n // 2 + int(rule0[0]), int(rule0[1])],
                    "site1": [n // 2 + int(rule1[0]), int(rule1[1])],
                },
                task=cfg.task,
                output=cfg.output,
                seed=cfg.seed,
                raw=cfg.raw,
            )
            cov, eta, eta_c = _steady_cov_for(system, sub)
            count = int(cfg.task.get("angles", n))
            parts = angled_bipartitions(system.geometry, count)
            ents = np.array([entanglement_entropy(cov, p) for p in parts])
            rows.append((n, 4 * (n - 1), ents.mean(), ents.min(), ents.max()))
        path = outdir / "entropy_vs_size.csv"
        _write_csv(path, ["n", "n_edge", "mean_entropy", "min_entropy", "max_entropy"], rows)
        _write_sidecar(path, cfg, seed)
    elif kind == "boundary":
        system = _build_model(cfg.model)
        cov, eta, eta_c = _steady_cov_for(system, cfg)
        geom = system.geometry
        nx, ny = geom.dims
        regions = cfg.task.get("regions")
        if regions:
            region_a = [_site(system, s) for s in regions[0]]
            region_b = [_site(system, s) for s in regions[1]]
            labels = ("region_0", "region_1")
        else:
            region_a = [geom.site_index((0, j)) for j in range(ny)]
            region_b = [geom.site_index((nx - 1, j)) for j in range(ny)]
            labels = ("row_0", f"row_{nx - 1}")
        mi = mutual_information(cov, region_a, region_b)
        path = outdir / "boundary_mi.csv"
        _write_csv(path, ["region_a", "region_b", "mi_nats"], [(labels[0], labels[1], mi)])
        _write_sidecar(path, cfg, seed, {"eta": eta, "eta_c": eta_c})
    else:
        raise ConfigError(f"unknown entanglement task kind {kind!r}")


def _run_disorder(cfg: RunConfig, outdir: Path, seed: int, threads: int) -> None:
    if cfg.model["kind"] != "ssh":
        raise ConfigError("disorder sweeps are defined for the ssh model")
    task = cfg.task
    alphas = task.get("alphas")
    sigmas = task.get("sigmas")
    if not alphas or not sigmas:
        raise ConfigError("task.alphas and task.sigmas are required")
    d = cfg.dissipator
    result = disorder_sweep(
        int(cfg.model["n"]),
        alphas,
        sigmas,
        realizations=int(task.get("realizations", 100)),
        seed=seed,
        site0=int(d.get("site0", 2)),
        site1=int(d.get("site1", 0)),
        eta_ratio=float(d.get("eta_ratio", 0.99)),
        kappa=d.get("kappa", 1.0),
        j=cfg.model.get("j", 1.0),
    )
    rows = []
    for ia, alpha in enumerate(result.alphas):
        for isg, sigma in enumerate(result.sigmas):
            rows.append(
                (
                    alpha,
                    sigma,
                    result.mean_s[ia, isg],
                    result.stderr_s[ia, isg],
                    int(result.unstable_counts[ia, isg]),
                )
            )
    path = outdir / "disorder.csv"
    _write_csv(path, ["alpha", "sigma", "mean_s", "stderr_s", "skipped"], rows)
    _write_sidecar(path, cfg, seed, {"realizations": result.realizations})


def _run_spectrum(cfg: RunConfig, outdir: Path, seed: int, threads: int) -> None:
    system = _build_model(cfg.model)
    modes, s0, s1, eta, kappa, eta_c = _resolve_dissipator(cfg, system)
    task = cfg.task
    setup = IoSetup(
        system=system,
        site0=s0,
        site1=s1,
        eta=eta,
        g=task.get("g", 4.0),
        kappa=task.get("kappa_ancilla", 10.0),
        probe_site=int(task.get("probe_site", 0)),
        gamma_wg=task.get("gamma_wg", 1e-3),
    )
    jscale = max(np.abs(system.h).max().real, 1.0)
    grid = default_frequency_grid(jscale, count=int(task.get("omega_count", 801)), span=task.get("omega_span", 5.0))
    result = squeezing_spectrum(setup, grid)
    path = outdir / "spectrum.csv"
    _write_csv(path, ["omega", "p", "theta_opt"], zip(result.omega, result.p, result.theta_opt))
    _write_sidecar(path, cfg, seed, {"eta": eta, "eta_c": eta_c})

    summary = {"eta": eta, "eta_c": eta_c}
    sweep = task.get("eta_sweep")
    if sweep:
        lo, hi, npts = float(sweep[0]), float(sweep[1]), int(sweep[2])
        from dataclasses import replace

        rows = []
        for e in np.linspace(lo, hi, npts):
            res_e = squeezing_spectrum(replace(setup, eta=float(e)), np.array([0.0]))
            rows.append((float(e), float(res_e.p[0])))
        epath = outdir / "eta_sweep.csv"
        _write_csv(epath, ["eta", "p0"], rows)
        _write_sidecar(epath, cfg, seed)
        eta_opt, p0 = eta_opt_search(setup, (lo, hi))
        summary["eta_opt"] = eta_opt
        summary["p0_at_opt"] = p0
    spath = outdir / "spectrum_summary.json"
    spath.write_text(json.dumps(summary, indent=2, sort_keys=True) + "\n", encoding="utf-8")
    _write_sidecar(spath, cfg, seed)


def _run_gap(cfg: RunConfig, outdir: Path, seed: int, threads: int) -> None:
    if cfg.model["kind"] != "ssh":
        raise ConfigError("gap scaling is defined for the ssh model")
    sizes = cfg.task.get("sizes")
    if not sizes:
        raise ConfigError("task.sizes is required")
    alpha = cfg.model["alpha"]
    j = cfg.model.get("j", 1.0)
    d = cfg.dissipator
    s0 = int(d.get("site0", 2))
    s1 = int(d.get("site1", 0))
    kappa = d.get("kappa", 1.0)
    ratio = float(d.get("eta_ratio", 0.99))

    def family(mirrored):
        def build(n):
            system = build_ssh(n, alpha, j=j, convention=cfg.model.get("convention", "plus"))
            modes = eigenpairs(system)
            eta_c = eta_critical_wavefunction(modes, s0, s1).critical_value
            jump = canonical_pairing(n, s0, s1, ratio * eta_c, kappa)
            if mirrored:
                return mirrored_dissipator(system, jump)
            return system.with_jumps((jump,))

        return build

    rows = [(n, g, 0) for n, g in dissipative_gap_vs_size(family(False), sizes)]
    if cfg.task.get("mirrored_comparison", True):
        rows += [(n, g, 1) for n, g in dissipative_gap_vs_size(family(True), sizes)]
    path = outdir / "gap.csv"
    _write_csv(path, ["n", "gap", "mirrored"], rows)
    _write_sidecar(path, cfg, seed)


def _run_ep_scan(cfg: RunConfig, outdir: Path, seed: int, threads: int) -> None:
    if cfg.model["kind"] != "dimer_bs_pa":
        raise ConfigError("ep-scan is defined for the dimer_bs_pa model")
    j1, j2, kappa = cfg.model["j1"], cfg.model["j2"], cfg.model["kappa"]
    spec = cfg.task.get("etas")
    if not spec or len(spec) != 3:
        raise ConfigError("task.etas must be [lo, hi, count]")
    grid = np.linspace(float(spec[0]), float(spec[1]), int(spec[2]))
    variants = [("correlated", lambda e: dimer_drift(j1, j2, kappa, e))]
    if cfg.task.get("uncorrelated", True):
        from .core import JumpOperator

        def uncorr_drift(e):
            h = np.array([[0.0, j1], [j1, 0.0]], dtype=complex)
            p = np.array([[0.0, j2 / 2], [j2 / 2, 0.0]], dtype=complex)
            u = np.array([np.sqrt(2 * kappa), 0.0], dtype=complex)
            v = np.array([0.0, e * np.sqrt(2 * kappa)], dtype=complex)
            zero = np.zeros(2, dtype=complex)
            jumps = [JumpOperator(u, zero)]
            if e != 0:  # a zero-coefficient gain jump is rejected upstream
                jumps.append(JumpOperator(zero, v))
            return build_drift(QuadraticSystem(h, jumps=tuple(jumps), p=p)).a

        variants.append(("uncorrelated", uncorr_drift))

    ep_report = {}
    srows = []
    for name, fn in variants:
        eps = ep_scan(fn, grid)
        ep_report[name] = [
            {"eta": e.parameter, "gap": e.gap, "alignment_defect": e.alignment_defect} for e in eps
        ]
        for e in grid:
            w = np.sort_complex(np.linalg.eigvals(fn(float(e))))
            for branch, lam in enumerate(w):
                srows.append((name, float(e), branch, lam.real, lam.imag))
    path = outdir / "ep_spectra.csv"
    _write_csv(path, ["variant", "eta", "branch", "re", "im"], srows)
    _write_sidecar(path, cfg, seed)
    jpath = outdir / "eps.json"
    jpath.write_text(json.dumps(ep_report, indent=2, sort_keys=True) + "\n", encoding="utf-8")
    _write_sidecar(jpath, cfg, seed)


_RUNNERS = {
    "stability": _run_stability,
    "steady": _run_steady,
    "entanglement": _run_entanglement,
    "disorder": _run_disorder,
    "spectrum": _run_spectrum,
    "gap": _run_gap,
    "ep-scan": _run_ep_scan,
}


def main(argv=None) -> int:
    parser = _Parser(prog="dissipair", description=__doc__)
    sub = parser.add_subparsers(dest="command", required=True)
    for name in COMMANDS:
        p = sub.add_parser(name)
        p.add_argument("--config", required=True)
        p.add_argument("--out", default=None)
        p.add_argument("--threads", type=int, default=None)
        p.add_argument("--seed", type=int, default=None)
    try:
        args = parser.parse_args(argv)
        cfg = load_config(args.config, args.command)
        threads = args.threads
        if threads is None:
            threads = int(os.environ.get("DISSIPAIR_THREADS", "1") or "1")
        seed = args.seed if args.seed is not None else cfg.seed
        out = args.out if args.out is not None else cfg.output.get("directory", ".")
        outdir = Path(out)
        outdir.mkdir(parents=True, exist_ok=True)
        _RUNNERS[args.command](cfg, outdir, seed, threads)
    except ConfigError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 4
    except NonUniqueError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 3
    except UnstableError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    except DissipairError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1
    return 0


if __name__ == "__main__":
    sys.exit(main())
