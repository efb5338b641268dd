"""Experiment orchestration: assumption validation and the selection pipeline."""

from __future__ import annotations

import os
from dataclasses import dataclass

import numpy as np

from . import runio
from .dynamics import RunRecord, simulate
from .errors import NlsLabError
from .fgr import FgrResult, check_fgr_assumption, fgr_all
from .lattice import FrequencyVector, IndexSets, index_sets_stabilized
from .modulation import DiagnosticSeries, diagnose_run
from .profiles import (
    ProfileSet,
    assemble_phi,
    build_profile_set,
    forced_residual,
)
from .reduced import ReducedTrajectory, compare, integrate_reduced
from .scenarios import Scenario
from .spectral import (
    SpectralData,
    TOL_EDGE,
    build_operator,
    discrete_spectrum,
    tune_absorber,
    zero_resonance_transmission,
)

#: Small-energy transmission above this flags a threshold resonance.
TRANSMISSION_THRESHOLD = 0.5


@dataclass
class StageResult:
    name: str
    passed: bool
    details: dict


@dataclass
class ValidationReport:
    stages: list[StageResult]
    spec: SpectralData | None = None
    sets: IndexSets | None = None
    profile: ProfileSet | None = None
    fgr: FgrResult | None = None

    @property
    def passed(self) -> bool:
        return all(s.passed for s in self.stages)

    def as_dict(self) -> dict:
        return {
            "pass": self.passed,
            "stages": [
                {"name": s.name, "pass": s.passed, "details": s.details}
                for s in self.stages
            ],
        }


def validate(scenario: Scenario) -> ValidationReport:
    """Run the assumption surrogates: spectrum, combinatorics, profile, FGR.

    Stage failures are recorded, not raised; hard numerical errors inside a
    stage are converted into a failed stage tagged with the stage name.
    """
    stages: list[StageResult] = []
    report = ValidationReport(stages)

    # --- spectrum stage: discrete spectrum exists, simple, away from zero
    try:
        op = build_operator(scenario.grid, scenario.potential())
        spec = discrete_spectrum(op, scenario.max_states)
        trans = zero_resonance_transmission(scenario.grid, op.V)
        freqs = FrequencyVector(spec.omegas)
        margin, worst = freqs.nonresonance_margin(8)
        gaps = np.diff(spec.omegas)
        ok = (
            spec.zero_energy_margin > TOL_EDGE
            and trans < TRANSMISSION_THRESHOLD
            and margin > runio.TOLERANCES["tol_res"]
        )
        stages.append(
            StageResult(
                "spectrum",
                bool(ok),
                {
                    "omegas": spec.omegas,
                    "eigen_residuals": spec.residuals,
                    "gaps": gaps,
                    "zero_energy_margin": spec.zero_energy_margin,
                    "small_k_transmission": trans,
                    "nonresonance_margin": margin,
                    "nonresonance_worst_m": list(worst),
                    "decay_rates": spec.decay_rates,
                },
            )
        )
        if not ok:
            return report
        report.spec = spec
    except NlsLabError as exc:
        stages.append(
            StageResult("spectrum", False, {"error": f"{type(exc).__name__}: {exc}"})
        )
        return report

    # --- combinatorics stage: index sets stabilize
    try:
        sets = index_sets_stabilized(freqs, scenario.max_radius)
        stages.append(
            StageResult(
                "combinatorics",
                True,
                {
                    "R_min": [list(m) for m in sets.sorted_r_min()],
                    "NR_1": [list(m) for m in sets.sorted_nr_1()],
                    "radius_used": sets.radius_used,
                    "stabilized": sets.stabilized,
                },
            )
        )
        report.sets = sets
    except NlsLabError as exc:
        stages.append(
            StageResult(
                "combinatorics", False, {"error": f"{type(exc).__name__}: {exc}"}
            )
        )
        return report

    # --- profile stage: recursion residuals within contract
    try:
        nl = scenario.nonlinearity()
        nl.validate()
        ps = build_profile_set(spec, sets, nl, scenario.delta_profile)
        worst_rel = 0.0
        for m, f in ps.phi_tilde.items():
            if sum(abs(c) for c in m) == 1:
                continue
            lam = float(np.dot(spec.omegas, m))
            src = -np.real(spec.op.apply(f)) + lam * np.real(f)
            # residual of (H - lam) phi_t = -g_m against the recomputed source
            g_m = _recompute_source(ps, m)
            denom = max(spec.grid.norm(g_m), 1e-300)
            worst_rel = max(
                worst_rel, spec.grid.norm(src - g_m) / denom
            )
        boundary = max(
            (float(np.max(np.abs(v[:4])) + np.max(np.abs(v[-4:])))
             for v in ps.G.values()),
            default=0.0,
        )
        ok = worst_rel <= 1e-7 and boundary <= 1e-8
        stages.append(
            StageResult(
                "profile",
                bool(ok),
                {
                    "worst_equation_residual": worst_rel,
                    "coupling_boundary_decay": boundary,
                    "varpi1": ps.varpi1,
                },
            )
        )
        if not ok:
            return report
        report.profile = ps
    except NlsLabError as exc:
        stages.append(
            StageResult("profile", False, {"error": f"{type(exc).__name__}: {exc}"})
        )
        return report

    # --- FGR stage: damping coefficients positive and stable
    try:
        fgr = fgr_all(spec, ps, scenario.eps_schedule)
        fgr_report = check_fgr_assumption(fgr)
        stages.append(
            StageResult("fgr", bool(fgr_report["pass"]), fgr_report)
        )
        report.fgr = fgr
    except NlsLabError as exc:
        stages.append(
            StageResult("fgr", False, {"error": f"{type(exc).__name__}: {exc}"})
        )
    return report


def _recompute_source(ps: ProfileSet, m) -> np.ndarray:
    from .profiles import _source_sum

    return _source_sum(
        m, ps.nl, sorted(ps.sets.NR_1), ps.phi_tilde, ps.spec.grid.n_points
    )


def residual_scaling_table(
    ps: ProfileSet,
    rhos: np.ndarray | None = None,
) -> dict:
    """Axis slopes and diagonal bound ratios of the forced residual."""
    if rhos is None:
        rhos = np.geomspace(1e-3, 1e-1, 9)
    axes = []
    for j in range(ps.n_modes):
        res = []
        for r in rhos:
            z = np.zeros(ps.n_modes, dtype=complex)
            z[j] = r
            res.append(forced_residual(ps, z)[1].residual_l2)
        slope = float(np.polyfit(np.log(rhos), np.log(res), 1)[0])
        axes.append(
            {
                "axis": j + 1,
                "slope": slope,
                "rhos": [float(r) for r in rhos],
                "residuals": [float(v) for v in res],
            }
        )
    diag_res, diag_bound = [], []
    for r in rhos:
        z = np.full(ps.n_modes, r, dtype=complex)
        _, rep = forced_residual(ps, z)
        diag_res.append(rep.residual_l2)
        diag_bound.append(rep.bound_factor)
    return {
        "axes": axes,
        "diagonal": {
            "rhos": [float(r) for r in rhos],
            "residuals": [float(v) for v in diag_res],
            "bounds": [float(v) for v in diag_bound],
        },
    }


@dataclass
class SelectionBundle:
    validation: ValidationReport
    record: RunRecord | None
    diagnostics: DiagnosticSeries | None
    reduced: ReducedTrajectory | None
    comparison: dict | None
    verdict: dict | None


def run_selection_experiment(
    scenario: Scenario,
    outdir: str | None = None,
    force: bool = False,
    threads: int = 1,
) -> SelectionBundle:
    """Full pipeline: validate, simulate, diagnose, reduce, compare, verdict.

    Artifacts are written incrementally so a failing stage leaves everything
    produced so far on disk.
    """
    if outdir is not None:
        runio.ensure_dir(outdir)
        runio.write_json(
            os.path.join(outdir, "manifest.json"),
            runio.manifest_payload(scenario, threads),
        )
    report = validate(scenario)
    if outdir is not None:
        runio.write_json(
            os.path.join(outdir, "validation.json"), report.as_dict()
        )
        _write_validation_artifacts(outdir, scenario, report)
    if not report.passed and not force:
        return SelectionBundle(report, None, None, None, None, None)
    if report.profile is None or report.fgr is None:
        # forced continuation cannot proceed without the constructed objects
        return SelectionBundle(report, None, None, None, None, None)

    spec, ps, fgr = report.spec, report.profile, report.fgr
    lam0 = fgr.entries[0].lam if fgr.entries else 1.0
    cap = tune_absorber(
        scenario.grid, lam0, scenario.absorber_fraction, scenario.absorber_target
    )
    u0 = assemble_phi(ps, scenario.z0_array())
    record = simulate(spec, scenario.nonlinearity(), scenario.sim, u0, absorber=cap)
    if outdir is not None:
        runio.write_series(os.path.join(outdir, "series.csv"), record)
        runio.write_snapshots(outdir, scenario.grid, record)

    diag = diagnose_run(ps, record)
    if outdir is not None:
        runio.write_diagnostics_csv(os.path.join(outdir, "diagnostics.csv"), diag)
        runio.write_json(
            os.path.join(outdir, "diagnostics.json"),
            runio.diagnostics_summary(diag),
        )

    reduced = integrate_reduced(
        ps,
        fgr.lambda_map(include_pv=scenario.include_pv),
        scenario.z0_array(),
        dt=scenario.reduced_dt,
        t_final=scenario.sim.t_final,
        output_stride=max(1, int(round(
            scenario.sim.output_stride * scenario.sim.dt / scenario.reduced_dt
        ))),
    )
    comparison = compare(reduced, diag).as_dict()
    if outdir is not None:
        runio.write_reduced_csv(os.path.join(outdir, "reduced.csv"), reduced)
        runio.write_json(os.path.join(outdir, "comparison.json"), comparison)

    non_selected = [
        j for j in range(diag.z.shape[1]) if j != diag.selected_mode
    ]
    verdict = {
        "selected_mode": diag.selected_mode + 1,
        "rho_plus": diag.rho_plus,
        "rho_plus_uncertainty": diag.rho_plus_uncertainty,
        "decay_factors_nonselected": {
            str(j + 1): diag.decay_factor(j) for j in non_selected
        },
        "mass_closure_max": float(np.max(np.abs(diag.mass_closure))),
        "time_to_half_ratio": comparison["time_to_half"]["ratio"],
    }
    if outdir is not None:
        runio.write_json(
            os.path.join(outdir, "report.json"),
            {"verdict": verdict, "validation": report.as_dict()},
        )
    return SelectionBundle(report, record, diag, reduced, comparison, verdict)


def _write_validation_artifacts(
    outdir: str, scenario: Scenario, report: ValidationReport
) -> None:
    if report.spec is not None:
        spec = report.spec
        stage = next(s for s in report.stages if s.name == "spectrum")
        runio.write_json(os.path.join(outdir, "spectrum.json"), stage.details)
        runio.write_eigenfunctions(
            os.path.join(outdir, "eigenfunctions.csv"), spec.grid, spec.phis
        )
    if report.sets is not None:
        stage = next(s for s in report.stages if s.name == "combinatorics")
        runio.write_json(os.path.join(outdir, "combinatorics.json"), stage.details)
    if report.profile is not None:
        scaling = residual_scaling_table(report.profile)
        runio.write_profile_outputs(outdir, report.profile, scaling)
    if report.fgr is not None:
        fgr_report = check_fgr_assumption(report.fgr)
        runio.write_json(
            os.path.join(outdir, "fgr.json"),
            runio.fgr_payload(report.fgr, fgr_report),
        )
