"""Scenario definitions: potentials, nonlinearities, grids, and horizons.

Scenarios are flat INI files (key = value under sections); the shipped
library covers the generic two-mode selection setup, its resonant negative
control, a mild profile-validation variant, and a best-effort three-mode
stress case.
"""

from __future__ import annotations

import configparser
import io
from dataclasses import dataclass, field
from importlib import resources

import numpy as np

from .errors import ConfigError
from .dynamics import SimulationConfig
from .profiles import DELTA_PROFILE, NonlinearityModel
from .spectral import Grid, Potential


@dataclass(frozen=True)
class Scenario:
    name: str
    expected: str
    grid: Grid
    potential_family: str
    potential_params: dict
    nonlinearity_type: str
    nonlinearity_coeffs: tuple[float, ...]
    z0: tuple[complex, ...]
    sim: SimulationConfig
    delta_profile: float = DELTA_PROFILE
    max_radius: int = 12
    max_states: int = 6
    reduced_dt: float = 0.01
    include_pv: bool = False
    eps_schedule: tuple[float, ...] = (0.1, 0.05, 0.025, 0.0125)
    absorber_fraction: float = 0.25
    absorber_target: float = 1e-4
    raw: dict = field(default_factory=dict, compare=False)

    def potential(self) -> Potential:
        return Potential.from_samples(
            self.grid, potential_samples(self.grid, self.potential_family,
                                         self.potential_params)
        )

    def nonlinearity(self) -> NonlinearityModel:
        if self.nonlinearity_type == "zero":
            return NonlinearityModel.zero()
        if self.nonlinearity_type == "polynomial":
            return NonlinearityModel.polynomial(list(self.nonlinearity_coeffs))
        raise ConfigError(f"unknown nonlinearity type {self.nonlinearity_type!r}")

    def z0_array(self) -> np.ndarray:
        return np.array(self.z0, dtype=complex)


def potential_samples(grid: Grid, family: str, params: dict) -> np.ndarray:
    x = grid.x
    if family == "zero":
        return np.zeros(grid.n_points)
    if family == "sech_well_skew":
        depth = float(params["depth"])
        width = float(params["width"])
        skew = float(params.get("skew", 0.0))
        sech2 = 1.0 / np.cosh(width * x) ** 2
        return -depth * sech2 - skew * np.tanh(width * x) * sech2
    if family == "sech_wells":
        depths = params["depths"]
        widths = params["widths"]
        centers = params["centers"]
        if not (len(depths) == len(widths) == len(centers)):
            raise ConfigError("sech_wells parameter lists must have equal length")
        v = np.zeros(grid.n_points)
        for d, w, c in zip(depths, widths, centers):
            v -= float(d) / np.cosh(float(w) * (x - float(c))) ** 2
        return v
    raise ConfigError(f"unknown potential family {family!r}")


def _parse_floats(text: str) -> list[float]:
    return [float(tok) for tok in text.replace(";", ",").split(",") if tok.strip()]


def _parse_complex(text: str) -> list[complex]:
    return [complex(tok.strip().replace(" ", "")) for tok in text.split(",") if tok.strip()]


def parse_scenario(text: str) -> Scenario:
    cp = configparser.ConfigParser()
    try:
        cp.read_string(text)
    except configparser.Error as exc:
        raise ConfigError(f"unparseable scenario config: {exc}") from exc
    try:
        name = cp.get("scenario", "name")
        expected = cp.get("scenario", "expected", fallback="none")
        grid = Grid(
            cp.getfloat("grid", "half_length"), cp.getint("grid", "n_points")
        )
        family = cp.get("potential", "family")
        pparams: dict = {}
        for key, val in cp.items("potential"):
            if key == "family":
                continue
            pparams[key] = (
                _parse_floats(val) if "," in val else float(val)
            )
        nl_type = cp.get("nonlinearity", "type")
        coeffs = tuple(
            _parse_floats(cp.get("nonlinearity", "coeffs", fallback="0"))
        )
        z0 = tuple(_parse_complex(cp.get("simulation", "z0", fallback="")))
        sim = SimulationConfig(
            dt=cp.getfloat("simulation", "dt"),
            t_final=cp.getfloat("simulation", "t_final"),
            output_stride=cp.getint("simulation", "output_stride"),
            absorber=cp.getboolean("simulation", "absorber", fallback=False),
            seed=cp.getint("simulation", "seed", fallback=0),
            snapshot_files=cp.getint("simulation", "snapshot_files", fallback=8),
        )
    except (configparser.Error, ValueError) as exc:
        raise ConfigError(f"invalid scenario config: {exc}") from exc
    raw = {s: dict(cp.items(s)) for s in cp.sections()}
    return Scenario(
        name=name,
        expected=expected,
        grid=grid,
        potential_family=family,
        potential_params=pparams,
        nonlinearity_type=nl_type,
        nonlinearity_coeffs=coeffs,
        z0=z0,
        sim=sim,
        delta_profile=cp.getfloat("profile", "delta", fallback=DELTA_PROFILE),
        max_radius=cp.getint("profile", "max_radius", fallback=12),
        max_states=cp.getint("profile", "max_states", fallback=6),
        reduced_dt=cp.getfloat("reduced", "dt", fallback=0.01),
        include_pv=cp.getboolean("reduced", "include_pv", fallback=False),
        eps_schedule=tuple(
            _parse_floats(
                cp.get("fgr", "eps_schedule", fallback="0.1,0.05,0.025,0.0125")
            )
        ),
        absorber_fraction=cp.getfloat("absorber", "fraction", fallback=0.25),
        absorber_target=cp.getfloat("absorber", "target", fallback=1e-4),
        raw=raw,
    )


def load_scenario(ref: str) -> Scenario:
    """Resolve a scenario from a file path or the built-in library."""
    import os

    if os.path.exists(ref):
        with open(ref, "r", encoding="utf-8") as fh:
            return parse_scenario(fh.read())
    try:
        text = (
            resources.files("nlslab").joinpath(f"scenarios/{ref}.ini").read_text()
        )
    except (FileNotFoundError, ModuleNotFoundError) as exc:
        raise ConfigError(
            f"scenario {ref!r} is neither a file nor a built-in name"
        ) from exc
    return parse_scenario(text)


def builtin_names() -> list[str]:
    files = resources.files("nlslab").joinpath("scenarios")
    return sorted(p.name[:-4] for p in files.iterdir() if p.name.endswith(".ini"))
