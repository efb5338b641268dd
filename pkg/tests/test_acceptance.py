"""Acceptance suite: one test per criterion, each printing a PASS line.

Run with ``pytest tests/test_acceptance.py -v -s`` to see the per-criterion
lines as they complete.  The headline selection experiment runs once as a
session fixture and is shared by the criteria that consume it.
"""

import itertools
import time

import numpy as np
import pytest

from nlslab.dynamics import SimulationConfig, linear_propagate_dense, simulate
from nlslab.lattice import (
    FrequencyVector,
    abs_index,
    enumerate_r_nr,
    minimal_resonant,
    nonresonant_truncated,
    prec,
)
from nlslab.modulation import extract
from nlslab.pipeline import validate
from nlslab.profiles import (
    NonlinearityModel,
    assemble_phi,
    derivative_identity_gap,
    forced_residual,
)
from nlslab.scenarios import load_scenario
from nlslab.spectral import Grid, Potential, build_operator, discrete_spectrum


def report(name: str, ok: bool, detail: str) -> None:
    print(f"[ACCEPTANCE] {'PASS' if ok else 'FAIL'}  {name}: {detail}")
    assert ok, f"{name}: {detail}"


def brute_force_sets(omegas: np.ndarray, radius: int):
    n = omegas.size
    sl = [
        m
        for m in itertools.product(range(-radius, radius + 1), repeat=n)
        if sum(m) == 1 and sum(abs(c) for c in m) <= radius
    ]
    R = {m for m in sl if float(np.dot(omegas, m)) > 0}
    NR = {m for m in sl if float(np.dot(omegas, m)) < 0}
    rmin = {m for m in R if not any(prec(abs_index(p), abs_index(m)) for p in R)}
    nr1 = {
        m for m in NR if not any(prec(abs_index(p), abs_index(m)) for p in rmin)
    }
    return rmin, nr1


def test_criterion_1_combinatorics_oracle():
    """R_min and NR_1 match brute force for 50 random admissible frequencies."""
    rng = np.random.default_rng(2024)
    radius = 8
    t0 = time.monotonic()
    checked = 0
    while checked < 50:
        n = int(rng.integers(2, 4))
        om = np.sort(rng.uniform(-3.0, -0.05, size=n))
        if np.min(np.abs(np.diff(om))) < 1e-3:
            continue
        margin = min(
            abs(float(np.dot(om, m)))
            for m in itertools.product(range(-radius, radius + 1), repeat=n)
            if any(m)
        )
        if margin <= 1e-6:
            continue
        fv = FrequencyVector(om)
        R, NR = enumerate_r_nr(fv, radius)
        rmin = minimal_resonant(R)
        nr1 = nonresonant_truncated(NR, rmin)
        b_rmin, b_nr1 = brute_force_sets(om, radius)
        assert rmin == b_rmin and nr1 == b_nr1, f"mismatch at omega={om}"
        checked += 1
    elapsed = time.monotonic() - t0
    report(
        "combinatorics oracle",
        elapsed < 10.0,
        f"50 random frequency vectors matched brute force in {elapsed:.1f} s",
    )


def test_criterion_2_coupling_closed_form(headline):
    """The resonant coupling equals g'(0) phi_1 phi_2^2 in the N=2 scenario."""
    bundle, _ = headline
    ps = bundle.validation.profile
    spec = bundle.validation.spec
    g1 = float(ps.nl.derivs[0])
    closed = g1 * spec.phis[0] * spec.phis[1] ** 2
    G = ps.G[(-1, 2)]
    rel = spec.grid.norm(G - closed) / spec.grid.norm(G)
    report(
        "resonant coupling closed form",
        rel <= 1e-8,
        f"relative deviation {rel:.2e} (tolerance 1e-8)",
    )


def test_criterion_3_spectrum_oracle_and_resonance_control():
    """Reflectionless-well eigenvalues hit the closed form; validation flags it."""
    g = Grid(40.0, 4096)
    V = Potential.from_samples(g, -6.0 / np.cosh(g.x) ** 2)
    spec = discrete_spectrum(build_operator(g, V), 4)
    err = np.abs(spec.omegas - np.array([-4.0, -1.0])).max()
    ok_eigs = err <= 1e-6
    rep = validate(load_scenario("pt2-resonant-fail"))
    st = rep.stages[0]
    worst = st.details.get("nonresonance_margin", np.inf)
    wm = st.details.get("nonresonance_worst_m", [])
    ok_control = (
        not rep.passed
        and not st.passed
        and worst <= 1e-9
        and sorted(abs(c) for c in wm) == [1, 4]
    )
    report(
        "spectrum oracle + nonresonance control",
        ok_eigs and ok_control,
        f"eigenvalue error {err:.2e}; control margin {worst:.2e} via m={wm}",
    )


def test_criterion_4_residual_scaling(mild_chain):
    """Forced-equation residual scales with slope >= 4.5 along each axis."""
    t0 = time.monotonic()
    rhos = np.geomspace(1e-3, 1e-1, 9)
    slopes = []
    for j in range(2):
        vals = []
        for r in rhos:
            z = np.zeros(2, dtype=complex)
            z[j] = r
            vals.append(forced_residual(mild_chain.ps, z)[1].residual_l2)
        slopes.append(float(np.polyfit(np.log(rhos), np.log(vals), 1)[0]))
    elapsed = time.monotonic() - t0
    report(
        "refined-profile residual scaling",
        min(slopes) >= 4.5 and elapsed < 60.0,
        f"axis slopes {np.round(slopes, 3)} in {elapsed:.1f} s",
    )


def test_criterion_5_differentiated_identity(mild_chain):
    """Both sides of the differentiated profile identity agree to 1e-5."""
    rng = np.random.default_rng(77)
    gaps = []
    for _ in range(10):
        z = 0.04 * (rng.normal(size=2) + 1j * rng.normal(size=2))
        w = rng.normal(size=2) + 1j * rng.normal(size=2)
        gaps.append(derivative_identity_gap(mild_chain.ps, z, w))
    report(
        "differentiated identity",
        max(gaps) <= 1e-5,
        f"worst relative gap {max(gaps):.2e} over 10 samples",
    )


def test_criterion_6_solver_conservation(mild_chain):
    """Mass exact, energy drift small, linear limit matches eigensolver."""
    spec, nl, ps = mild_chain.spec, mild_chain.nl, mild_chain.ps
    g = spec.grid
    u0 = assemble_phi(ps, np.array([0.08, 0.05j]))
    cfg = SimulationConfig(dt=0.005, t_final=100.0, output_stride=400)
    rec = simulate(spec, nl, cfg, u0)
    mass_drift = np.abs(rec.mass - rec.mass[0]).max() / 100.0
    energy_drift = np.abs(rec.energy - rec.energy[0]).max() / abs(rec.energy[0])

    nl0 = NonlinearityModel.zero()
    w0 = (
        0.2 * spec.phis[0] + 0.1 * spec.phis[1] + 0.3 * np.exp(-((g.x - 1) ** 2))
    ).astype(complex)
    oracle = linear_propagate_dense(spec, w0, 1.0)
    cfg_lin = SimulationConfig(dt=2e-5, t_final=1.0, output_stride=50000)
    lin = simulate(spec, nl0, cfg_lin, w0)
    lin_err = g.norm(lin.snapshots[-1] - oracle) / g.norm(w0)
    ok = mass_drift <= 1e-10 and energy_drift <= 1e-6 and lin_err <= 1e-7
    report(
        "solver conservation",
        ok,
        f"mass drift {mass_drift:.2e}/t, energy drift {energy_drift:.2e}, "
        f"linear-limit error {lin_err:.2e}",
    )


def test_criterion_7_modulation_round_trip(mild_chain):
    """Twenty random admissible pairs are recovered to tolerance."""
    from tests.test_modulation import admissible_radiation

    ps = mild_chain.ps
    g = ps.spec.grid
    rng = np.random.default_rng(99)
    worst_z, worst_eta = 0.0, 0.0
    for k in range(20):
        z_star = 0.04 * (rng.normal(size=2) + 1j * rng.normal(size=2))
        eta_star = admissible_radiation(ps, z_star, seed=1000 + k)
        u = assemble_phi(ps, z_star) + eta_star
        st = extract(ps, u)
        worst_z = max(worst_z, float(np.abs(st.z - z_star).max()))
        worst_eta = max(worst_eta, g.norm(st.eta - eta_star))
        recon = g.norm(u - (assemble_phi(ps, st.z) + st.eta))
        assert recon <= 1e-12 * g.norm(u)
    report(
        "modulation round trip",
        worst_z <= 1e-10 and worst_eta <= 1e-9,
        f"worst amplitude error {worst_z:.2e}, worst radiation error {worst_eta:.2e}",
    )


def test_criterion_8_fgr_positivity_and_cross_validation(headline):
    """gamma > 0, stable extrapolation, within 10% of the quadrature route."""
    bundle, _ = headline
    entry = bundle.validation.fgr.entry((-1, 2))
    agree = abs(entry.gamma - entry.gamma_quadrature) / entry.gamma_quadrature
    ok = entry.gamma > 0 and entry.stable and agree <= 0.10
    report(
        "FGR positivity + cross-validation",
        ok,
        f"gamma {entry.gamma:.6g}, quadrature {entry.gamma_quadrature:.6g}, "
        f"agreement {agree:.2%}, stable {entry.stable}",
    )


def test_criterion_9_selection_experiment(headline):
    """Headline run: decay, accumulation plateau, limit amplitude, mass."""
    bundle, _ = headline
    diag = bundle.diagnostics
    non_selected = [j for j in range(2) if j != diag.selected_mode]
    decay = min(diag.decay_factor(j) for j in non_selected)
    run = diag.running_l2_monomials[(-1, 2)]
    n4 = len(run) // 4
    plateau = (run[-1] - run[-n4]) / run[-1]
    spread = diag.rho_plus_uncertainty / diag.rho_plus
    closure = float(np.max(np.abs(diag.mass_closure)))
    ok = (
        decay >= 2.0
        and plateau < 0.05
        and spread < 0.10
        and closure <= 1e-4
    )
    report(
        "selection experiment",
        ok,
        f"non-selected decay {decay:.2f}x, accumulation final-quarter "
        f"increment {plateau:.1%}, limit-amplitude spread {spread:.1%}, "
        f"mass closure {closure:.1e}",
    )


def test_criterion_10_reduced_vs_full(headline):
    """Time-to-half of the decaying mode agrees within a factor of two."""
    bundle, _ = headline
    ratio = bundle.comparison["time_to_half"]["ratio"]
    ok = np.isfinite(ratio) and 0.5 <= ratio <= 2.0
    report(
        "reduced vs full",
        ok,
        f"time-to-half ratio {ratio:.3f} "
        f"(full {bundle.comparison['time_to_half']['full']:.1f}, "
        f"reduced {bundle.comparison['time_to_half']['reduced']:.1f})",
    )
