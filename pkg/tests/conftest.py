from dataclasses import dataclass

import pytest

from nlslab.fgr import FgrResult, fgr_all
from nlslab.lattice import FrequencyVector, IndexSets, index_sets_stabilized
from nlslab.pipeline import SelectionBundle, run_selection_experiment
from nlslab.profiles import NonlinearityModel, ProfileSet, build_profile_set
from nlslab.scenarios import Scenario, load_scenario
from nlslab.spectral import SpectralData, build_operator, discrete_spectrum


@dataclass
class Chain:
    scenario: Scenario
    spec: SpectralData
    sets: IndexSets
    nl: NonlinearityModel
    ps: ProfileSet
    fgr: FgrResult


def _build_chain(name: str) -> Chain:
    sc = load_scenario(name)
    spec = discrete_spectrum(build_operator(sc.grid, sc.potential()), sc.max_states)
    sets = index_sets_stabilized(FrequencyVector(spec.omegas), sc.max_radius)
    nl = sc.nonlinearity()
    ps = build_profile_set(spec, sets, nl, sc.delta_profile)
    fgr = fgr_all(spec, ps, sc.eps_schedule)
    return Chain(sc, spec, sets, nl, ps, fgr)


@pytest.fixture(scope="session")
def mild_chain() -> Chain:
    return _build_chain("pt2-mild")


@pytest.fixture(scope="session")
def headline(tmp_path_factory) -> tuple[SelectionBundle, str]:
    outdir = tmp_path_factory.mktemp("headline")
    bundle = run_selection_experiment(
        load_scenario("pt2-generic"), str(outdir)
    )
    assert bundle.verdict is not None, "headline validation failed"
    return bundle, str(outdir)
