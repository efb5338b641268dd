"""Command-line interface for the laboratory.

Exit codes: 0 success, 2 validation failure (assumption surrogate failed or
configuration invalid), 3 numerical failure inside a stage.
"""

from __future__ import annotations

import argparse
import os
import sys

import numpy as np
import scipy.fft as sfft

from . import runio
from .errors import (
    ConfigError,
    DegenerateSpectrum,
    FrequencyResonant,
    NlsLabError,
    NoBoundStates,
    NotStabilized,
)
from .scenarios import builtin_names, load_scenario

VALIDATION_ERRORS = (
    ConfigError,
    FrequencyResonant,
    NoBoundStates,
    DegenerateSpectrum,
    NotStabilized,
)


def _parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(
        prog="nlslab",
        description="Numerical laboratory for small-data soliton selection",
    )
    p.add_argument(
        "--config",
        default="pt2-generic",
        help="scenario file path or built-in name "
        f"(built-ins: {', '.join(builtin_names())})",
    )
    p.add_argument("--out", default="nlslab-out", help="output directory")
    p.add_argument(
        "--force",
        action="store_true",
        help="run the simulation even if validation fails",
    )
    p.add_argument("--threads", type=int, default=1, help="FFT worker threads")
    p.add_argument(
        "--seed", type=int, default=None, help="override the scenario seed"
    )
    p.add_argument(
        "command",
        choices=[
            "spectrum",
            "combinatorics",
            "profile",
            "fgr",
            "simulate",
            "diagnose",
            "reduce",
            "compare",
            "validate",
            "select",
        ],
    )
    return p


def main(argv: list[str] | None = None) -> int:
    args = _parser().parse_args(argv)
    try:
        with sfft.set_workers(max(1, args.threads)):
            return _dispatch(args)
    except VALIDATION_ERRORS as exc:
        print(f"validation failure: {type(exc).__name__}: {exc}", file=sys.stderr)
        return 2
    except NlsLabError as exc:
        print(f"numerical failure: {type(exc).__name__}: {exc}", file=sys.stderr)
        return 3


def _dispatch(args) -> int:
    from . import pipeline
    from .dynamics import simulate
    from .fgr import check_fgr_assumption, fgr_all
    from .lattice import FrequencyVector, index_sets_stabilized
    from .modulation import diagnose_run
    from .profiles import assemble_phi, build_profile_set
    from .reduced import compare, integrate_reduced
    from .spectral import build_operator, discrete_spectrum, tune_absorber

    scenario = load_scenario(args.config)
    if args.seed is not None:
        from dataclasses import replace

        scenario = replace(
            scenario, sim=replace(scenario.sim, seed=args.seed)
        )
    outdir = runio.ensure_dir(args.out)
    runio.write_json(
        os.path.join(outdir, "manifest.json"),
        runio.manifest_payload(scenario, args.threads, args.seed),
    )

    if args.command == "validate":
        report = pipeline.validate(scenario)
        runio.write_json(os.path.join(outdir, "validation.json"), report.as_dict())
        pipeline._write_validation_artifacts(outdir, scenario, report)
        for s in report.stages:
            print(f"{s.name}: {'PASS' if s.passed else 'FAIL'}")
        return 0 if report.passed else 2

    if args.command == "select":
        bundle = pipeline.run_selection_experiment(
            scenario, outdir, force=args.force, threads=args.threads
        )
        for s in bundle.validation.stages:
            print(f"{s.name}: {'PASS' if s.passed else 'FAIL'}")
        if bundle.verdict is None:
            print("selection run not performed (validation failed)")
            return 2
        print(
            "selected mode {selected_mode}, rho_plus {rho_plus:.6g} "
            "(window spread {rho_plus_uncertainty:.2g})".format(**bundle.verdict)
        )
        return 0

    if args.command == "spectrum":
        op = build_operator(scenario.grid, scenario.potential())
        spec = discrete_spectrum(op, scenario.max_states)
        from .spectral import zero_resonance_transmission

        freqs = FrequencyVector(spec.omegas)
        margin, worst = freqs.nonresonance_margin(8)
        runio.write_json(
            os.path.join(outdir, "spectrum.json"),
            {
                "omegas": spec.omegas,
                "eigen_residuals": spec.residuals,
                "decay_rates": spec.decay_rates,
                "zero_energy_margin": spec.zero_energy_margin,
                "small_k_transmission": zero_resonance_transmission(
                    scenario.grid, op.V
                ),
                "nonresonance_margin": margin,
                "nonresonance_worst_m": list(worst),
            },
        )
        runio.write_eigenfunctions(
            os.path.join(outdir, "eigenfunctions.csv"), spec.grid, spec.phis
        )
        print(f"{spec.n_bound} bound states: {spec.omegas}")
        return 0

    # remaining commands need the validated chain up to their stage
    op = build_operator(scenario.grid, scenario.potential())
    spec = discrete_spectrum(op, scenario.max_states)
    freqs = FrequencyVector(spec.omegas)

    if args.command == "combinatorics":
        sets = index_sets_stabilized(freqs, scenario.max_radius)
        runio.write_json(
            os.path.join(outdir, "combinatorics.json"),
            {
                "R_min": [list(m) for m in sets.sorted_r_min()],
                "NR_1": [list(m) for m in sets.sorted_nr_1()],
                "radius_used": sets.radius_used,
                "stabilized": sets.stabilized,
            },
        )
        print(f"R_min {sets.sorted_r_min()}  NR_1 {sets.sorted_nr_1()}")
        return 0

    sets = index_sets_stabilized(freqs, scenario.max_radius)
    nl = scenario.nonlinearity()
    ps = build_profile_set(spec, sets, nl, scenario.delta_profile)

    if args.command == "profile":
        from .pipeline import residual_scaling_table

        scaling = residual_scaling_table(ps)
        runio.write_profile_outputs(outdir, ps, scaling)
        slopes = [a["slope"] for a in scaling["axes"]]
        print(f"axis residual slopes: {np.round(slopes, 3)}")
        return 0

    if args.command == "fgr":
        result = fgr_all(spec, ps, scenario.eps_schedule)
        report = check_fgr_assumption(result)
        runio.write_json(
            os.path.join(outdir, "fgr.json"), runio.fgr_payload(result, report)
        )
        print("FGR " + ("PASS" if report["pass"] else "FAIL"))
        return 0 if report["pass"] else 2

    fgr = fgr_all(spec, ps, scenario.eps_schedule)
    lam0 = fgr.entries[0].lam if fgr.entries else 1.0
    cap = tune_absorber(
        scenario.grid, lam0, scenario.absorber_fraction, scenario.absorber_target
    )

    if args.command == "simulate":
        u0 = assemble_phi(ps, scenario.z0_array())
        record = simulate(spec, nl, scenario.sim, u0, absorber=cap)
        runio.write_series(os.path.join(outdir, "series.csv"), record)
        runio.write_snapshots(outdir, scenario.grid, record)
        print(
            f"simulated to t={record.times[-1]:g}; "
            f"mass {record.mass[0]:.6g} -> {record.mass[-1]:.6g}"
        )
        return 0

    if args.command == "diagnose":
        # deterministic replay of the run named by the manifest
        u0 = assemble_phi(ps, scenario.z0_array())
        record = simulate(spec, nl, scenario.sim, u0, absorber=cap)
        diag = diagnose_run(ps, record)
        runio.write_diagnostics_csv(os.path.join(outdir, "diagnostics.csv"), diag)
        runio.write_json(
            os.path.join(outdir, "diagnostics.json"),
            runio.diagnostics_summary(diag),
        )
        print(
            f"selected mode {diag.selected_mode + 1}, rho_plus {diag.rho_plus:.6g}"
        )
        return 0

    if args.command == "reduce":
        traj = integrate_reduced(
            ps,
            fgr.lambda_map(include_pv=scenario.include_pv),
            scenario.z0_array(),
            dt=scenario.reduced_dt,
            t_final=scenario.sim.t_final,
        )
        runio.write_reduced_csv(os.path.join(outdir, "reduced.csv"), traj)
        print(f"reduced run to t={traj.times[-1]:g}")
        return 0

    if args.command == "compare":
        u0 = assemble_phi(ps, scenario.z0_array())
        record = simulate(spec, nl, scenario.sim, u0, absorber=cap)
        diag = diagnose_run(ps, record)
        traj = integrate_reduced(
            ps,
            fgr.lambda_map(include_pv=scenario.include_pv),
            scenario.z0_array(),
            dt=scenario.reduced_dt,
            t_final=scenario.sim.t_final,
            output_stride=max(1, int(round(
                scenario.sim.output_stride * scenario.sim.dt / scenario.reduced_dt
            ))),
        )
        runio.write_reduced_csv(os.path.join(outdir, "reduced.csv"), traj)
        runio.write_diagnostics_csv(os.path.join(outdir, "diagnostics.csv"), diag)
        report = compare(traj, diag).as_dict()
        runio.write_json(os.path.join(outdir, "comparison.json"), report)
        print(f"time-to-half ratio {report['time_to_half']['ratio']:.3g}")
        return 0

    raise ConfigError(f"unhandled command {args.command}")


if __name__ == "__main__":
    sys.exit(main())
