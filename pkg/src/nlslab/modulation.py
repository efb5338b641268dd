"""Modulation coordinates: u = phi(z) + eta with symplectic orthogonality.

The amplitude vector solves 2N real orthogonality equations by Newton
iteration with the exact Jacobian of the profile map.  Trajectory
diagnostics assemble the discrete-time analogues of the radiation norm, the
resonant-monomial accumulations, and the reduced-equation residual; fast
rotations are removed in a linear-frequency rotating frame before time
differentiation so the finite-difference residual reflects the slow
dynamics and not the sampling stride.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from .errors import JacobianSingular, NewtonDiverged
from .lattice import MultiIndex, dzpow_holomorphic, zpow
from .profiles import (
    ProfileSet,
    assemble_phi,
    d2_phi,
    d_phi,
    frequency,
)
from .spectral import WeightedNorm, default_weighted_norm
from .dynamics import RunRecord

#: Newton convergence target, relative to the norm of the decomposed state.
NEWTON_REL_TOL = 1e-12

NEWTON_MAX_ITER = 25


@dataclass(frozen=True)
class ModulationState:
    z: np.ndarray
    eta: np.ndarray
    ortho_residual: float
    newton_iters: int


def _basis_directions(n: int) -> list[np.ndarray]:
    dirs = []
    for j in range(n):
        e = np.zeros(n, dtype=complex)
        e[j] = 1.0
        dirs.append(e)
    for j in range(n):
        e = np.zeros(n, dtype=complex)
        e[j] = 1j
        dirs.append(e)
    return dirs


def _orthogonality_residual(ps: ProfileSet, u: np.ndarray, z: np.ndarray):
    """F_a(z) = <i (u - phi(z)), D phi(z) w_a> over the 2N basis directions."""
    grid = ps.spec.grid
    eta = u - assemble_phi(ps, z)
    dirs = _basis_directions(ps.n_modes)
    tangents = [d_phi(ps, z, w) for w in dirs]
    F = np.array([grid.rinner(1j * eta, t) for t in tangents])
    return F, eta, dirs, tangents


def linear_guess(ps: ProfileSet, u: np.ndarray) -> np.ndarray:
    """Bound-state projection, exact for the decomposition at zero amplitude."""
    g = ps.spec.grid
    return np.array([g.inner(u, p) for p in ps.spec.phis])


def extract(
    ps: ProfileSet,
    u: np.ndarray,
    z_guess: np.ndarray | None = None,
) -> ModulationState:
    """Newton solve of the orthogonality system for the given state."""
    grid = ps.spec.grid
    scale = max(grid.norm(u), 1e-300)
    z = np.array(
        linear_guess(ps, u) if z_guess is None else z_guess, dtype=complex
    )
    dirs = _basis_directions(ps.n_modes)
    for it in range(NEWTON_MAX_ITER):
        F, eta, _, tangents = _orthogonality_residual(ps, u, z)
        if float(np.linalg.norm(F)) <= NEWTON_REL_TOL * scale:
            return ModulationState(z, eta, float(np.max(np.abs(F))), it)
        J = np.empty((2 * ps.n_modes, 2 * ps.n_modes))
        for b, wb in enumerate(dirs):
            dtan = d_phi(ps, z, wb)
            for a, wa in enumerate(dirs):
                J[a, b] = grid.rinner(-1j * dtan, tangents[a]) + grid.rinner(
                    1j * eta, d2_phi(ps, z, wb, wa)
                )
        try:
            delta = np.linalg.solve(J, -F)
        except np.linalg.LinAlgError:
            if float(np.sum(np.abs(z))) < 1e-6:
                z = linear_guess(ps, u)
                eta = u - assemble_phi(ps, z)
                F, _, _, _ = _orthogonality_residual(ps, u, z)
                return ModulationState(z, eta, float(np.max(np.abs(F))), it)
            raise JacobianSingular("singular modulation Jacobian away from zero")
        z = z + delta[: ps.n_modes] + 1j * delta[ps.n_modes :]
    raise NewtonDiverged(
        f"orthogonality system not converged after {NEWTON_MAX_ITER} iterations"
    )


@dataclass
class DiagnosticSeries:
    """Per-snapshot modulation data and the accumulated trajectory norms."""

    times: np.ndarray
    z: np.ndarray  # (n_out, N)
    monomials: dict[MultiIndex, np.ndarray]
    residual: np.ndarray  # |dz/dt + i varpi z| pointwise in time
    eta_weighted: np.ndarray
    phi_mass: np.ndarray
    running_l2_monomials: dict[MultiIndex, np.ndarray]
    running_l2_residual: np.ndarray
    ortho_residuals: np.ndarray
    mass_closure: np.ndarray
    rho_plus: float
    rho_plus_uncertainty: float
    selected_mode: int
    failed_indices: list[int] = field(default_factory=list)

    def decay_factor(self, j: int) -> float:
        """Initial-to-final-window modulus reduction of mode j."""
        tail = max(1, len(self.times) // 5)
        final = float(np.mean(np.abs(self.z[-tail:, j])))
        start = float(np.abs(self.z[0, j]))
        return start / max(final, 1e-300)


def modulation_residual_vector(
    ps: ProfileSet, times: np.ndarray, z: np.ndarray
) -> np.ndarray:
    """Complex residual dz/dt + i varpi(|z|^2) z per output time.

    The carrier predicted by the amplitude-dependent frequency is removed
    locally before differencing: with v(t) = e^{i varpi (t - t_i)} z(t) the
    centered difference of v at t_i equals the residual, and v varies on the
    slow scale only, so the stride does not contaminate the measurement.
    """
    n, N = z.shape
    out = np.zeros((n, N), dtype=complex)
    for i in range(n):
        varpi = frequency(ps, np.abs(z[i]) ** 2)
        lo, hi = max(i - 1, 0), min(i + 1, n - 1)
        dt = times[hi] - times[lo]
        v_hi = np.exp(1j * varpi * (times[hi] - times[i])) * z[hi]
        v_lo = np.exp(1j * varpi * (times[lo] - times[i])) * z[lo]
        out[i] = (v_hi - v_lo) / dt
    return out


def diagnose_run(
    ps: ProfileSet,
    record: RunRecord,
    weighted: WeightedNorm | None = None,
) -> DiagnosticSeries:
    grid = ps.spec.grid
    if weighted is None:
        weighted = default_weighted_norm(ps.spec)
    times = record.times
    n_out = len(times)
    N = ps.n_modes
    zs = np.zeros((n_out, N), dtype=complex)
    eta_w = np.zeros(n_out)
    phi_mass = np.zeros(n_out)
    ortho = np.zeros(n_out)
    closure = np.zeros(n_out)
    failed: list[int] = []
    guess = None
    for i, u in enumerate(record.snapshots):
        try:
            st = extract(ps, u, guess)
        except (NewtonDiverged, JacobianSingular):
            failed.append(i)
            zs[i] = guess if guess is not None else 0.0
            continue
        zs[i] = st.z
        guess = st.z
        eta_w[i] = weighted.dual_norm(st.eta)
        phi = assemble_phi(ps, st.z)
        phi_mass[i] = grid.norm(phi) ** 2
        ortho[i] = st.ortho_residual
        total = phi_mass[i] + grid.norm(st.eta) ** 2 + record.absorbed[i]
        closure[i] = total / max(record.mass[0], 1e-300) - 1.0

    mod_res = modulation_residual_vector(ps, times, zs)
    resid = np.linalg.norm(mod_res, axis=1)

    monos = {
        m: np.array([abs(zpow(zs[i], m)) for i in range(n_out)])
        for m in sorted(ps.G)
    }
    run_m = {m: _running_l2(times, v) for m, v in monos.items()}
    run_r = _running_l2(times, resid)

    tail = max(1, n_out // 5)
    znorm = np.sum(np.abs(zs), axis=1)
    rho_plus = float(np.mean(znorm[-tail:]))
    rho_unc = float(np.max(znorm[-tail:]) - np.min(znorm[-tail:]))
    final_moduli = np.mean(np.abs(zs[-tail:]), axis=0)
    selected = int(np.argmax(final_moduli))
    return DiagnosticSeries(
        times=times,
        z=zs,
        monomials=monos,
        residual=resid,
        eta_weighted=eta_w,
        phi_mass=phi_mass,
        running_l2_monomials=run_m,
        running_l2_residual=run_r,
        ortho_residuals=ortho,
        mass_closure=closure,
        rho_plus=rho_plus,
        rho_plus_uncertainty=rho_unc,
        selected_mode=selected,
        failed_indices=failed,
    )


def _running_l2(times: np.ndarray, values: np.ndarray) -> np.ndarray:
    """Discrete-time running L2 accumulation sqrt(int_0^t |v|^2)."""
    if len(times) < 2:
        return np.zeros_like(values)
    dt = np.diff(times)
    mid = 0.5 * (values[1:] ** 2 + values[:-1] ** 2)
    acc = np.concatenate([[0.0], np.cumsum(mid * dt)])
    return np.sqrt(acc)


def equation_residual_series(
    ps: ProfileSet, diag: DiagnosticSeries
) -> np.ndarray:
    """Measured residual of the reduced amplitude equation along a run.

    r_j = dz_j/dt + i varpi_j z_j + i sum_m g_{m,j} z^m, per output time.
    """
    times = diag.times
    mod_res = modulation_residual_vector(ps, times, diag.z)
    out = np.zeros(len(times))
    for i in range(len(times)):
        r = mod_res[i].copy()
        for m, gm in ps.g_mj.items():
            r = r + 1j * gm * zpow(diag.z[i], m)
        out[i] = float(np.linalg.norm(r))
    return out


def reduced_discrete_rhs(
    ps: ProfileSet,
    lambda_map: dict[MultiIndex, complex],
    z: np.ndarray,
) -> np.ndarray:
    """Damped reduced vector field for the amplitude dynamics.

    Conservative part: -i varpi_j z_j - i sum_m g_{m,j} z^m.  The radiation
    closure contributes -sum_m conj(d z^m / d z_j) Lambda_m z^m, whose real
    part is the nonnegative damping coefficient, so the weighted mode masses
    cannot grow through it.
    """
    z = np.asarray(z, dtype=complex)
    varpi = frequency(ps, np.abs(z) ** 2)
    out = -1j * varpi * z
    for m, gm in ps.g_mj.items():
        zm = zpow(z, m)
        out = out - 1j * gm * zm
        lam = lambda_map.get(m, 0.0)
        if lam != 0.0:
            for j in range(ps.n_modes):
                out[j] -= np.conj(dzpow_holomorphic(z, m, j)) * lam * zm
    return out
