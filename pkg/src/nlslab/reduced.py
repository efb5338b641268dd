"""Damped reduced amplitude model and its comparison with full-PDE runs.

The vector field is integrated in the linear-frequency rotating frame, where
the fast carrier is removed analytically; RK4 then conserves the mode moduli
of the conservative limit far below the contract tolerance.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .errors import AmplitudeTooLarge, StepUnstable
from .lattice import MultiIndex, dzpow_holomorphic, zpow
from .modulation import DiagnosticSeries
from .profiles import ProfileSet, frequency

DEFAULT_DT = 0.01


@dataclass
class ReducedTrajectory:
    times: np.ndarray
    z: np.ndarray  # (n_out, N)
    monomials: dict[MultiIndex, np.ndarray]
    mode_energy: np.ndarray  # sum_j |omega_j| |z_j|^2
    damping_integral: np.ndarray  # cumulative damping flux, nonpositive

    def modulus(self, j: int) -> np.ndarray:
        return np.abs(self.z[:, j])


def _frame_rhs(
    ps: ProfileSet,
    lambda_map: dict[MultiIndex, complex],
    t: float,
    w: np.ndarray,
) -> np.ndarray:
    """Rotating-frame vector field; carrier phases appear only in couplings."""
    om = ps.spec.omegas
    rho = np.abs(w) ** 2
    dv = frequency(ps, rho) - om
    out = -1j * dv * w
    for m, gm in ps.g_mj.items():
        detune = om - float(np.dot(om, m))
        wm = zpow(w, m)
        out = out - 1j * gm * np.exp(1j * detune * t) * wm
        lam = lambda_map.get(m, 0.0)
        if lam != 0.0:
            for j in range(ps.n_modes):
                out[j] -= np.conj(dzpow_holomorphic(w, m, j)) * lam * wm
    return out


def _damping_flux(
    ps: ProfileSet,
    lambda_map: dict[MultiIndex, complex],
    w: np.ndarray,
    weights: np.ndarray,
) -> float:
    """d/dt of the weighted mode mass due to the damping terms alone."""
    flux = 0.0
    for m, _ in ps.g_mj.items():
        lam = lambda_map.get(m, 0.0)
        if lam == 0.0:
            continue
        zm2 = abs(zpow(w, m)) ** 2
        mplus = np.array([max(c, 0) for c in m], dtype=float)
        flux -= 2.0 * float(np.dot(weights, mplus)) * lam.real * zm2
    return flux


def integrate_reduced(
    ps: ProfileSet,
    lambda_map: dict[MultiIndex, complex],
    z0: np.ndarray,
    dt: float = DEFAULT_DT,
    t_final: float = 100.0,
    output_stride: int = 25,
) -> ReducedTrajectory:
    """Fixed-step RK4 integration of the damped reduced model."""
    z0 = np.asarray(z0, dtype=complex)
    om = ps.spec.omegas
    w = z0.copy()
    n_steps = int(round(t_final / dt))
    guard = 2.0 * max(float(np.sum(np.abs(z0))), 1e-300)
    weights = np.abs(om)
    times = [0.0]
    zs = [z0.copy()]
    energy = [float(np.dot(weights, np.abs(z0) ** 2))]
    dint = [0.0]
    acc = 0.0
    t = 0.0
    for i in range(1, n_steps + 1):
        try:
            k1 = _frame_rhs(ps, lambda_map, t, w)
            k2 = _frame_rhs(ps, lambda_map, t + dt / 2, w + dt / 2 * k1)
            k3 = _frame_rhs(ps, lambda_map, t + dt / 2, w + dt / 2 * k2)
            k4 = _frame_rhs(ps, lambda_map, t + dt, w + dt * k3)
        except AmplitudeTooLarge as exc:
            raise StepUnstable(
                f"amplitude escaped the profile ball at t={t:.3f}"
            ) from exc
        acc += dt * _damping_flux(ps, lambda_map, w, weights)
        w = w + dt / 6.0 * (k1 + 2 * k2 + 2 * k3 + k4)
        t = i * dt
        if float(np.sum(np.abs(w))) > guard:
            raise StepUnstable(
                f"amplitude escaped twice its initial size at t={t:.3f}"
            )
        if i % output_stride == 0 or i == n_steps:
            z = np.exp(-1j * om * t) * w
            times.append(t)
            zs.append(z)
            energy.append(float(np.dot(weights, np.abs(z) ** 2)))
            dint.append(acc)
    times = np.array(times)
    zs = np.array(zs)
    monos = {
        m: np.array([abs(zpow(z, m)) for z in zs]) for m in sorted(ps.g_mj)
    }
    return ReducedTrajectory(times, zs, monos, np.array(energy), np.array(dint))


def time_to_half(times: np.ndarray, moduli: np.ndarray) -> float:
    """Last time the modulus still exceeds half its initial value.

    Infinity when the modulus never stays below half within the horizon.
    """
    target = 0.5 * moduli[0]
    above = moduli > target
    if not above.any():
        return 0.0
    if above[-1]:
        return np.inf
    return float(times[np.where(above)[0][-1]])


def decay_rate_fit(times: np.ndarray, moduli: np.ndarray) -> float:
    """Slope of 1 / |z|^2 against time, the golden-rule decay law."""
    inv = 1.0 / np.maximum(moduli, 1e-300) ** 2
    return float(np.polyfit(times, inv, 1)[0])


@dataclass
class ComparisonReport:
    max_rel_deviation: np.ndarray  # per mode
    time_to_half_full: float
    time_to_half_reduced: float
    time_to_half_ratio: float
    decay_rate_full: float
    decay_rate_reduced: float
    decay_rate_ratio: float
    decaying_mode: int

    def as_dict(self) -> dict:
        return {
            "max_rel_deviation": [float(v) for v in self.max_rel_deviation],
            "time_to_half": {
                "full": self.time_to_half_full,
                "reduced": self.time_to_half_reduced,
                "ratio": self.time_to_half_ratio,
            },
            "decay_rate": {
                "full": self.decay_rate_full,
                "reduced": self.decay_rate_reduced,
                "ratio": self.decay_rate_ratio,
            },
            "decaying_mode": self.decaying_mode,
        }


def compare(reduced: ReducedTrajectory, full: DiagnosticSeries) -> ComparisonReport:
    """Overlay the two models on the common time range."""
    t_hi = min(reduced.times[-1], full.times[-1])
    mask = full.times <= t_hi + 1e-12
    tf = full.times[mask]
    N = full.z.shape[1]
    devs = np.zeros(N)
    for j in range(N):
        red = np.interp(tf, reduced.times, np.abs(reduced.z[:, j]))
        ful = np.abs(full.z[mask, j])
        scale = max(float(np.max(ful)), 1e-300)
        devs[j] = float(np.max(np.abs(red - ful))) / scale
    # the decaying mode: largest reduction over the horizon in the full run
    tail = max(1, int(0.2 * mask.sum()))
    reduction = [
        float(np.abs(full.z[0, j]))
        / max(float(np.mean(np.abs(full.z[mask][-tail:, j]))), 1e-300)
        for j in range(N)
    ]
    jd = int(np.argmax(reduction))
    th_full = time_to_half(tf, np.abs(full.z[mask, jd]))
    th_red = time_to_half(reduced.times, np.abs(reduced.z[:, jd]))
    ratio = th_full / th_red if np.isfinite(th_red) and th_red > 0 else np.inf
    dr_full = decay_rate_fit(tf, np.abs(full.z[mask, jd]))
    dr_red = decay_rate_fit(reduced.times, np.abs(reduced.z[:, jd]))
    dr_ratio = dr_full / dr_red if dr_red else np.inf
    return ComparisonReport(
        max_rel_deviation=devs,
        time_to_half_full=th_full,
        time_to_half_reduced=th_red,
        time_to_half_ratio=float(ratio),
        decay_rate_full=dr_full,
        decay_rate_reduced=dr_red,
        decay_rate_ratio=float(dr_ratio),
        decaying_mode=jd,
    )
