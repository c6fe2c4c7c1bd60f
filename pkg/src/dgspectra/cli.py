"""Command-line entry point.

Subcommands: assemble | spectrum | sweep | track | verify-lemma |
conforming-dims | expand-mode | integrate | preset. Configuration comes
from ``--config`` JSON plus flags (flags win); outputs land in
``--out`` (default: $DGSPECTRA_OUTDIR or the working directory) together
with a manifest recording the exact configuration.

Exit codes: 0 ok, 2 configuration error, 3 numerical failure.
"""

import argparse
import json
import os
import sys
from pathlib import Path

import numpy as np

from . import __version__
from .assembly import assemble, export_matrices
from .conforming import (
    block_decompose,
    build_conforming_split,
    conforming_dimension_oracle,
    conforming_spectrum,
)
from .io import write_csv, write_json
from .mesh import build_mesh_1d, build_mesh_2d_bisected
from .pde import FluxConfig, make_system
from .refelem import build_reference_element
from .spectral import eigenvector_partition, spectrum_of_operator
from .tauanalysis import (
    expand_in_tau1_basis,
    find_returning_modes,
    sweep,
    verify_lemma_rates,
)
from .timedomain import integrate, spectral_radius

SYSTEMS = ("advection1d", "advection2d", "acoustics1d", "acoustics2d")

DEFAULTS = {
    "system": "advection1d",
    "flux": "penalty",
    "tau": 1.0,
    "tau_range": None,
    "elements": 8,
    "nx": 4,
    "ny": 4,
    "degree": 3,
    "domain": None,
    "bc": None,
    "beta": None,
    "steps": 200,
    "cfl": 0.5,
    "export": False,
}


class ConfigError(ValueError):
    pass


def parse_tau_range(text):
    """Parse 'a:b:n' (linear) or 'a:b:logN' (log-spaced) into a sample list."""
    try:
        a, b, n = text.split(":")
        a, b = float(a), float(b)
        if n.startswith("log"):
            return np.geomspace(a, b, int(n[3:])).tolist()
        return np.linspace(a, b, int(n)).tolist()
    except (ValueError, IndexError) as exc:
        raise ConfigError(f"bad tau range {text!r}: expected a:b:n or a:b:logN") from exc


def build_problem(cfg):
    """Mesh, reference element, system, and flux from a config dict."""
    name = cfg["system"]
    if name not in SYSTEMS:
        raise ConfigError(f"unknown system {name!r}; choose from {SYSTEMS}")
    system = make_system(name, beta=cfg.get("beta"))
    degree = int(cfg["degree"])
    if system.dim == 1:
        dom = cfg.get("domain") or (-1.0, 1.0)
        bc = cfg.get("bc") or ("bounded" if name == "acoustics1d" else "periodic")
        mesh = build_mesh_1d(int(cfg["elements"]), dom, bc)
    else:
        dom = cfg.get("domain") or ((-1.0, 1.0), (-1.0, 1.0))
        if len(dom) == 4:
            dom = ((dom[0], dom[1]), (dom[2], dom[3]))
        bc = cfg.get("bc") or ("wall" if name == "acoustics2d" else "periodic")
        mesh = build_mesh_2d_bisected(int(cfg["nx"]), int(cfg["ny"]), dom, bc)
    ref = build_reference_element(system.dim, degree)
    flux = FluxConfig(cfg["flux"], float(cfg.get("tau") or 0.0))
    return mesh, ref, system, flux


def _outdir(cfg):
    out = cfg.get("out") or os.environ.get("DGSPECTRA_OUTDIR") or "."
    path = Path(out)
    path.mkdir(parents=True, exist_ok=True)
    return path


def _manifest(cfg, outputs, outdir):
    doc = {
        "version": __version__,
        "config": {k: v for k, v in sorted(cfg.items()) if v is not None},
        "outputs": sorted(str(o) for o in outputs),
    }
    return write_json(outdir / "manifest.json", doc)


def cmd_assemble(cfg):
    mesh, ref, system, flux = build_problem(cfg)
    op = assemble(mesh, ref, system, flux)
    outdir = _outdir(cfg)
    outputs = []
    if cfg.get("export"):
        outputs.extend(export_matrices(op, str(outdir / "operator")))
    (outdir / "mesh.json").write_text(mesh.to_json() + "\n")
    outputs.append(outdir / "mesh.json")
    summary = write_json(outdir / "operator.json", {
        "n": op.n,
        "n_elements": mesh.n_elements,
        "n_fields": system.n_fields,
        "degree": ref.degree,
        "flux": flux.kind,
        "tau": flux.tau,
    })
    outputs.append(summary)
    outputs.append(_manifest(cfg, outputs, outdir))
    return 0


def cmd_spectrum(cfg):
    mesh, ref, system, flux = build_problem(cfg)
    op = assemble(mesh, ref, system, flux)
    spec = spectrum_of_operator(op)
    wc = wnc = None
    if flux.kind in ("penalty", "upwind", "lf"):
        split = build_conforming_split(op)
        wc, wnc = eigenvector_partition(spec, split)
    outdir = _outdir(cfg)
    rows = []
    for i, lam in enumerate(spec.eigenvalues):
        rows.append([
            flux.tau, str(i), lam.real, lam.imag,
            wc[i] if wc is not None else "nan",
            wnc[i] if wnc is not None else "nan",
        ])
    out = write_csv(outdir / "spectrum.csv",
                    ["tau", "index", "re", "im", "wc_norm", "wnc_norm"], rows)
    _manifest(cfg, [out], outdir)
    return 0


def _run_sweep(cfg):
    mesh, ref, system, flux = build_problem(cfg)
    if flux.kind not in ("penalty", "lf"):
        raise ConfigError("sweep requires flux 'penalty' or 'lf'")
    op = assemble(mesh, ref, system, flux)
    taus = cfg.get("tau_range")
    if taus is None:
        raise ConfigError("sweep requires --tau-range")
    if isinstance(taus, str):
        taus = parse_tau_range(taus)
    return op, sweep(op, taus)


def cmd_sweep(cfg):
    op, swp = _run_sweep(cfg)
    outdir = _outdir(cfg)
    vals = swp.path_values()
    rows = []
    for p in range(swp.n_paths):
        cls = swp.classification[p] if swp.classification else "unclassified"
        for j, tau in enumerate(swp.taus):
            rows.append([tau, str(p), vals[p, j].real, vals[p, j].imag, cls])
    out = write_csv(outdir / "sweep.csv",
                    ["tau", "path_id", "re", "im", "class"], rows)
    summary = write_json(outdir / "sweep.json", {
        "n_paths": swp.n_paths,
        "counts": {
            c: sum(1 for x in swp.classification if x == c)
            for c in set(swp.classification)
        },
        "returning_paths": find_returning_modes(swp),
        "unresolved_steps": [list(u) for u in swp.unresolved],
    })
    _manifest(cfg, [out, summary], outdir)
    return 0


def cmd_verify_lemma(cfg):
    mesh, ref, system, flux = build_problem(cfg)
    if flux.kind != "penalty":
        raise ConfigError("verify-lemma requires flux 'penalty'")
    op = assemble(mesh, ref, system, flux)
    split = build_conforming_split(op)
    blocks = block_decompose(op, split)
    taus = cfg.get("tau_range") or "100:10000:log20"
    if isinstance(taus, str):
        taus = parse_tau_range(taus)
    swp = sweep(op, taus, blocks=blocks, split=split)
    report = verify_lemma_rates(swp, blocks)
    outdir = _outdir(cfg)
    out = write_json(outdir / "verify_lemma.json", report)
    _manifest(cfg, [out], outdir)
    return 0


def cmd_conforming_dims(cfg):
    mesh, ref, system, flux = build_problem(cfg)
    if flux.kind == "central":
        raise ConfigError("conforming-dims requires a penalizing flux")
    op = assemble(mesh, ref, system, flux)
    split = build_conforming_split(op)
    nc, nnc = split.dims
    doc = {"n_conforming": nc, "n_nonconforming": nnc, "n": op.n}
    try:
        doc["oracle"] = conforming_dimension_oracle(system.name, mesh, ref.degree)
    except ValueError:
        pass
    outdir = _outdir(cfg)
    out = write_json(outdir / "conforming_dims.json", doc)
    _manifest(cfg, [out], outdir)
    return 0


def cmd_expand_mode(cfg):
    mesh, ref, system, flux = build_problem(cfg)
    if flux.kind != "penalty":
        raise ConfigError("expand-mode requires flux 'penalty'")
    op = assemble(mesh, ref, system, flux)
    tau_hi = float(cfg.get("tau") or 100.0)
    taus = sorted(set(
        np.linspace(0.0, min(4.0, tau_hi), 41).tolist()
        + np.geomspace(max(1.0, min(4.0, tau_hi)), tau_hi, 25).tolist()
        + [1.0, tau_hi]
    ))
    swp = sweep(op, taus)
    returning = find_returning_modes(swp)
    if not returning:
        raise RuntimeError("no returning modes found to expand")
    vals = swp.path_values()
    t1 = int(np.argmin(np.abs(swp.taus - 1.0)))
    # The canonical spurious mode: the returning path most damped at tau = 1.
    path = max(returning, key=lambda p: -vals[p, t1].real)
    vec = swp.path_eigenvector(path, len(swp.taus) - 1)
    s1 = spectrum_of_operator(op, 1.0)
    me = expand_in_tau1_basis(vec, s1)
    order = np.argsort(-np.abs(me.coefficients))
    doc = {
        "tau": tau_hi,
        "path_eigenvalue": [vals[path, -1].real, vals[path, -1].imag],
        "residual": me.residual,
        "coefficients": [
            {
                "index": int(j),
                "abs": float(np.abs(me.coefficients[j])),
                "re": float(me.coefficients[j].real),
                "im": float(me.coefficients[j].imag),
                "damping": float(me.damping[j]),
            }
            for j in order
            if np.abs(me.coefficients[j]) > 1e-13
        ],
    }
    outdir = _outdir(cfg)
    out = write_json(outdir / "expand_mode.json", doc)
    _manifest(cfg, [out], outdir)
    return 0


def cmd_integrate(cfg):
    mesh, ref, system, flux = build_problem(cfg)
    op = assemble(mesh, ref, system, flux)
    from .mesh import element_coords

    coords = element_coords(mesh, ref)
    u0 = np.zeros(op.n)
    for k in range(mesh.n_elements):
        x = coords[k, :, 0]
        u0[op.field_slice(k, 0)] = np.sin(np.pi * x)
    rho = spectral_radius(op)
    dt = float(cfg["cfl"]) / rho if rho > 0 else 0.1
    trace = integrate(op, u0, dt, int(cfg["steps"]), cfl_cap=float(cfg["cfl"]) * 1.001)
    outdir = _outdir(cfg)
    out = write_csv(outdir / "energy.csv", ["t", "energy"],
                    list(zip(trace.times, trace.energies)))
    _manifest(cfg, [out], outdir)
    return 0


PRESETS = {
    # 1D advection eigenvalue paths, tau in [0, 4], 8 elements, N = 3.
    "fig1": (cmd_sweep, {"system": "advection1d", "elements": 8, "degree": 3,
                         "flux": "penalty", "tau_range": "0:4:81"}),
    # Divergent-mode tracking on 4 elements.
    "fig2": (cmd_sweep, {"system": "advection1d", "elements": 4, "degree": 3,
                         "flux": "penalty", "tau_range": "0:10:101"}),
    # Returning spurious modes, wide tau window.
    "fig3": (cmd_sweep, {"system": "advection1d", "elements": 8, "degree": 3,
                         "flux": "penalty", "tau_range": "0:100:201"}),
    # Modal coefficients of the spurious mode in the tau = 1 basis.
    "fig6": (cmd_expand_mode, {"system": "advection1d", "elements": 4,
                               "degree": 3, "flux": "penalty", "tau": 100.0}),
    # 2D acoustics spectra.
    "fig7": (cmd_spectrum, {"system": "acoustics2d", "nx": 4, "ny": 4,
                            "degree": 3, "flux": "penalty", "tau": 1.0}),
    # 2D acoustics eigenvalue paths.
    "fig8": (cmd_sweep, {"system": "acoustics2d", "nx": 4, "ny": 4, "degree": 3,
                         "flux": "penalty", "tau_range": "0:50:26"}),
    # 2D advection eigenvalue paths.
    "fig9": (cmd_sweep, {"system": "advection2d", "nx": 4, "ny": 4, "degree": 3,
                         "flux": "penalty", "tau_range": "0:50:26"}),
    # 2D advection spurious-mode spectra.
    "fig10": (cmd_spectrum, {"system": "advection2d", "nx": 4, "ny": 4,
                             "degree": 3, "flux": "penalty", "tau": 100.0}),
}


def cmd_preset(cfg):
    name = cfg.get("preset_name")
    if name not in PRESETS:
        raise ConfigError(f"unknown preset {name!r}; choose from {sorted(PRESETS)}")
    fn, preset_cfg = PRESETS[name]
    merged = dict(DEFAULTS)
    merged.update(preset_cfg)
    if cfg.get("out"):
        merged["out"] = cfg["out"]
    return fn(merged)


COMMANDS = {
    "assemble": cmd_assemble,
    "spectrum": cmd_spectrum,
    "sweep": cmd_sweep,
    "track": cmd_sweep,
    "verify-lemma": cmd_verify_lemma,
    "conforming-dims": cmd_conforming_dims,
    "expand-mode": cmd_expand_mode,
    "integrate": cmd_integrate,
    "preset": cmd_preset,
}


def build_parser():
    p = argparse.ArgumentParser(prog="dgspectra", description=__doc__)
    p.add_argument("command", choices=sorted(COMMANDS))
    p.add_argument("preset_name", nargs="?", help="preset name (preset command only)")
    p.add_argument("--config", help="JSON config file; flags override its values")
    p.add_argument("--system", choices=SYSTEMS)
    p.add_argument("--flux", choices=("central", "penalty", "upwind", "lf"))
    p.add_argument("--tau", type=float)
    p.add_argument("--tau-range", dest="tau_range")
    p.add_argument("--elements", type=int)
    p.add_argument("--nx", type=int)
    p.add_argument("--ny", type=int)
    p.add_argument("--degree", type=int)
    p.add_argument("--domain", help="1D: a,b  2D: xa,xb,ya,yb")
    p.add_argument("--bc", choices=("periodic", "bounded", "wall"))
    p.add_argument("--beta", help="advection vector, comma separated")
    p.add_argument("--steps", type=int)
    p.add_argument("--cfl", type=float)
    p.add_argument("--export", action="store_true", default=None)
    p.add_argument("--out")
    return p


def merge_config(args):
    cfg = dict(DEFAULTS)
    if args.config:
        try:
            cfg.update(json.loads(Path(args.config).read_text()))
        except (OSError, json.JSONDecodeError) as exc:
            raise ConfigError(f"cannot read config {args.config}: {exc}") from exc
    for key in list(DEFAULTS) + ["out", "preset_name"]:
        v = getattr(args, key, None)
        if v is not None:
            cfg[key] = v
    if isinstance(cfg.get("domain"), str):
        cfg["domain"] = tuple(float(x) for x in cfg["domain"].split(","))
    if isinstance(cfg.get("beta"), str):
        cfg["beta"] = tuple(float(x) for x in cfg["beta"].split(","))
    return cfg


def main(argv=None):
    args = build_parser().parse_args(argv)
    try:
        cfg = merge_config(args)
        return COMMANDS[args.command](cfg)
    except (ConfigError, ValueError) as exc:
        print(f"config error: {exc}", file=sys.stderr)
        return 2
    except (RuntimeError, np.linalg.LinAlgError) as exc:
        print(f"numerical failure: {exc}", file=sys.stderr)
        return 3


if __name__ == "__main__":
    sys.exit(main())
