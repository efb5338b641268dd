"""Machine-readable outputs: CSV series and JSON reports.

All machine outputs are deterministic for a fixed configuration: keys are
sorted, floats are emitted at full repr precision, and nothing embeds
timestamps.  The column layouts here are the interchange contract consumed
by external plotting tools.
"""

from __future__ import annotations

import csv
import json
import os
from typing import Iterable

import numpy as np

from . import __version__
from .lattice import MultiIndex

#: Numeric guards baked into the build, echoed into every manifest.
TOLERANCES = {
    "tol_res": 1e-9,
    "tol_edge": 1e-3,
    "tol_gap_degenerate": 1e-6,
    "tol_gap_resolvent": 1e-6,
    "eigen_residual_rel": 1e-8,
    "newton_rel_tol": 1e-12,
    "fgr_rel_threshold": 1e-8,
    "extrapolation_stability": 0.05,
    "absorber_reflection_target": 1e-4,
}


def mono_label(m: MultiIndex) -> str:
    return "m" + "_".join(str(int(c)) for c in m)


def ensure_dir(path: str) -> str:
    os.makedirs(path, exist_ok=True)
    return path


def write_json(path: str, payload: dict) -> None:
    with open(path, "w", encoding="utf-8") as fh:
        json.dump(_pyify(payload), fh, indent=2, sort_keys=True)
        fh.write("\n")


def _pyify(obj):
    if isinstance(obj, dict):
        return {str(k): _pyify(v) for k, v in obj.items()}
    if isinstance(obj, (list, tuple)):
        return [_pyify(v) for v in obj]
    if isinstance(obj, np.ndarray):
        return [_pyify(v) for v in obj.tolist()]
    if isinstance(obj, (np.floating,)):
        return float(obj)
    if isinstance(obj, (np.integer,)):
        return int(obj)
    if isinstance(obj, (np.bool_,)):
        return bool(obj)
    if isinstance(obj, complex):
        return {"re": obj.real, "im": obj.imag}
    if isinstance(obj, float) and not np.isfinite(obj):
        return repr(obj)
    return obj


def write_csv(path: str, header: list[str], rows: Iterable[Iterable]) -> None:
    with open(path, "w", encoding="utf-8", newline="") as fh:
        w = csv.writer(fh)
        w.writerow(header)
        for row in rows:
            w.writerow([repr(float(v)) for v in row])


def manifest_payload(scenario, threads: int, seed: int | None = None) -> dict:
    return {
        "version": __version__,
        "scenario": scenario.raw,
        "scenario_name": scenario.name,
        "tolerances": TOLERANCES,
        "threads": threads,
        "seed": scenario.sim.seed if seed is None else seed,
    }


def write_eigenfunctions(path: str, grid, phis: np.ndarray) -> None:
    header = ["x"] + [f"phi_{j + 1}" for j in range(phis.shape[0])]
    rows = np.column_stack([grid.x] + [p for p in phis])
    write_csv(path, header, rows)


def write_series(path: str, record) -> None:
    write_csv(
        path,
        ["t", "mass", "energy", "absorbed"],
        np.column_stack([record.times, record.mass, record.energy, record.absorbed]),
    )


def write_snapshots(outdir: str, grid, record, limit: int | None = None) -> list[str]:
    n = len(record.times)
    limit = limit or record.config.snapshot_files
    idx = sorted(set(np.linspace(0, n - 1, min(limit, n)).astype(int)))
    paths = []
    for i in idx:
        t = record.times[i]
        path = os.path.join(outdir, f"snapshot_t{t:010.3f}.csv")
        u = record.snapshots[i]
        write_csv(
            path,
            ["x", "re_u", "im_u"],
            np.column_stack([grid.x, u.real, u.imag]),
        )
        paths.append(path)
    return paths


def write_diagnostics_csv(path: str, diag) -> None:
    monos = sorted(diag.monomials)
    header = ["t"]
    n_modes = diag.z.shape[1]
    for j in range(n_modes):
        header += [f"re_z_{j + 1}", f"im_z_{j + 1}"]
    header += [f"abs_z{mono_label(m)}" for m in monos]
    header += ["residual", "eta_weighted", "phi_mass"]
    header += [f"runl2_z{mono_label(m)}" for m in monos]
    header += ["runl2_residual", "mass_closure"]
    cols = [diag.times]
    for j in range(n_modes):
        cols += [diag.z[:, j].real, diag.z[:, j].imag]
    cols += [diag.monomials[m] for m in monos]
    cols += [diag.residual, diag.eta_weighted, diag.phi_mass]
    cols += [diag.running_l2_monomials[m] for m in monos]
    cols += [diag.running_l2_residual, diag.mass_closure]
    write_csv(path, header, np.column_stack(cols))


def diagnostics_summary(diag) -> dict:
    monos = sorted(diag.monomials)
    return {
        "rho_plus": diag.rho_plus,
        "rho_plus_uncertainty": diag.rho_plus_uncertainty,
        "selected_mode": diag.selected_mode + 1,
        "decay_factors": [
            diag.decay_factor(j) for j in range(diag.z.shape[1])
        ],
        "accumulations": {
            "monomials": {
                mono_label(m): float(diag.running_l2_monomials[m][-1])
                for m in monos
            },
            "residual": float(diag.running_l2_residual[-1]),
        },
        "mass_closure_max": float(np.max(np.abs(diag.mass_closure))),
        "ortho_residual_max": float(np.max(diag.ortho_residuals)),
        "failed_indices": diag.failed_indices,
    }


def write_reduced_csv(path: str, traj) -> None:
    monos = sorted(traj.monomials)
    n_modes = traj.z.shape[1]
    header = ["t"]
    for j in range(n_modes):
        header += [f"re_z_{j + 1}", f"im_z_{j + 1}"]
    header += [f"abs_z{mono_label(m)}" for m in monos]
    header += ["mode_energy", "damping_integral"]
    cols = [traj.times]
    for j in range(n_modes):
        cols += [traj.z[:, j].real, traj.z[:, j].imag]
    cols += [traj.monomials[m] for m in monos]
    cols += [traj.mode_energy, traj.damping_integral]
    write_csv(path, header, np.column_stack(cols))


def write_profile_outputs(outdir: str, ps, scaling: dict | None = None) -> None:
    grid = ps.spec.grid
    labels_pt = sorted(ps.phi_tilde)
    labels_g = sorted(ps.G)
    header = ["x"]
    header += [f"phit_{mono_label(m)}" for m in labels_pt]
    header += [f"G_{mono_label(m)}" for m in labels_g]
    cols = [grid.x]
    cols += [np.real(ps.phi_tilde[m]) for m in labels_pt]
    cols += [np.real(ps.G[m]) for m in labels_g]
    write_csv(
        os.path.join(outdir, "profile_functions.csv"),
        header,
        np.column_stack(cols),
    )
    payload = {
        "varpi1": ps.varpi1,
        "g_mj": {mono_label(m): ps.g_mj[m] for m in labels_g},
        "coupling_norms": {mono_label(m): grid.norm(ps.G[m]) for m in labels_g},
        "delta_profile": ps.delta_profile,
    }
    if scaling is not None:
        payload["residual_scaling"] = scaling
        rows = []
        for axis_entry in scaling["axes"]:
            for rho, res in zip(axis_entry["rhos"], axis_entry["residuals"]):
                rows.append([axis_entry["axis"], rho, res, 0.0])
        for rho, res, bound in zip(
            scaling["diagonal"]["rhos"],
            scaling["diagonal"]["residuals"],
            scaling["diagonal"]["bounds"],
        ):
            rows.append([0, rho, res, bound])
        write_csv(
            os.path.join(outdir, "profile_scaling.csv"),
            ["axis", "rho", "residual", "bound"],
            rows,
        )
    write_json(os.path.join(outdir, "profile.json"), payload)


def fgr_payload(result, report: dict) -> dict:
    entries = []
    for e in result.entries:
        entries.append(
            {
                "m": list(e.m),
                "lambda": e.lam,
                "gamma": e.gamma,
                "pv_shift": e.pv_shift,
                "table": [[eps, val] for eps, val in e.table],
                "extrapolants": list(e.extrapolants),
                "stable": e.stable,
                "gamma_quadrature": e.gamma_quadrature,
                "coupling_norm_sq": e.coupling_norm_sq,
            }
        )
    return {"entries": entries, "pass": report["pass"], "report": report}
